//! Dieudonné displays over `R/p^aR` attached to windows.
//!
//! A display is kept as the matrix `B` of `F' ⊕ F'_1` on a normal basis of
//! `P'` together with the matrix `F'` of Frobenius on the same basis. For the
//! display of a window with `T = A^{-1}`:
//! `B = κ(T)·blockdiag(I_d, τ·I_c)` and `F' = κ(T)·blockdiag(I_d, κ(σ(E))·I_c)`,
//! so that `F' = p·B` on the `L`-columns because `p·τ = κ(σ(E))`.

use std::fmt;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::series::{Ring, SeriesElem};
use crate::window::Window;
use crate::witt::{kappa, tau, WittError, WittVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisplayError {
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error("matrix shape does not match d + c")]
    Shape,
}

/// Matrix with entries in `W_L(ring)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittMatrix {
    rows: usize,
    cols: usize,
    data: Vec<WittVec>,
}

impl WittMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> WittVec) -> WittMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        WittMatrix { rows, cols, data }
    }

    pub fn identity(ring: &Ring, n: usize, len: usize) -> WittMatrix {
        WittMatrix::from_fn(n, n, |i, j| if i == j { WittVec::one(ring, len) } else { WittVec::zero(ring, len) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &WittVec {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: WittVec) {
        self.data[i * self.cols + j] = x;
    }

    /// Entry-wise `𝐰_0`, a matrix over the base ring.
    pub fn ghost0(&self) -> Matrix {
        let ring = self.data[0].ring().clone();
        Matrix::from_fn(&ring, self.rows, self.cols, |i, j| self.get(i, j).ghost()[0].clone())
    }

    pub fn coerce(&self, ring: &Ring) -> Result<WittMatrix, WittError> {
        let data = self.data.iter().map(|x| x.coerce(ring)).collect::<Result<_, _>>()?;
        Ok(WittMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, o: &WittMatrix) -> Result<WittMatrix, WittError> {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = WittVec::zero(self.get(0, 0).ring(), self.get(0, 0).len());
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j))?)?;
                }
                data.push(acc);
            }
        }
        Ok(WittMatrix { rows: self.rows, cols: o.cols, data })
    }

    /// Multiply column `j` by `x`.
    pub fn scale_column(&mut self, j: usize, x: &WittVec) -> Result<(), WittError> {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(x)?;
            self.set(i, j, v);
        }
        Ok(())
    }
}

impl fmt::Display for WittMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DDisplay {
    pub level: usize,
    pub witt_len: usize,
    pub d: usize,
    pub c: usize,
    /// Matrix of `F' ⊕ F'_1`.
    pub b: WittMatrix,
    /// Matrix of `F'` on the same basis.
    pub f: WittMatrix,
}

fn kappa_matrix(m: &Matrix, len: usize) -> Result<WittMatrix, WittError> {
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            data.push(kappa(m.get(i, j), len)?);
        }
    }
    Ok(WittMatrix { rows: m.rows(), cols: m.cols(), data })
}

pub fn to_display(w: &Window) -> Result<DDisplay, DisplayError> {
    to_display_with_len(w, w.frame().witt_len())
}

pub fn to_display_with_len(w: &Window, len: usize) -> Result<DDisplay, DisplayError> {
    let t = w.a().inverse().expect("window matrices are invertible");
    let kt = kappa_matrix(&t, len)?;
    let tau = tau(w.frame(), w.level(), len)?;
    let kse = kappa(&w.ring().e_elem().frobenius().map_err(WittError::from)?, len)?;
    let mut b = kt.clone();
    let mut f = kt;
    for j in w.d()..w.height() {
        b.scale_column(j, &tau)?;
        f.scale_column(j, &kse)?;
    }
    Ok(DDisplay { level: w.level(), witt_len: len, d: w.d(), c: w.c(), b, f })
}

impl DDisplay {
    /// A display given only by `B`; `F'` is then `p·B` on the `L`-columns.
    pub fn from_structural(level: usize, d: usize, c: usize, b: WittMatrix) -> Result<DDisplay, DisplayError> {
        if b.rows() != d + c || b.cols() != d + c {
            return Err(DisplayError::Shape);
        }
        let x = b.get(0, 0);
        let p = WittVec::from_int(x.ring(), x.len(), x.ring().p() as i128);
        let witt_len = x.len();
        let mut f = b.clone();
        for j in d..d + c {
            f.scale_column(j, &p)?;
        }
        Ok(DDisplay { level, witt_len, d, c, b, f })
    }

    pub fn ring(&self) -> &Ring {
        self.b.get(0, 0).ring()
    }

    /// Base change to `R/p^{level}R`.
    pub fn reduce(&self, level: usize) -> Result<DDisplay, DisplayError> {
        let ring = Ring::reduced(self.ring().frame(), level);
        Ok(DDisplay { level, b: self.b.coerce(&ring)?, f: self.f.coerce(&ring)?, ..self.clone() })
    }
}

impl fmt::Display for DDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level = {}, L = {}, d = {}, c = {}", self.level, self.witt_len, self.d, self.c)?;
        write!(f, "{}", self.b)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DisplayReport {
    pub violations: Vec<String>,
}

impl DisplayReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_display(dd: &DDisplay) -> DisplayReport {
    let mut violations = Vec::new();
    let h = dd.d + dd.c;
    if dd.b.rows() != h || dd.b.cols() != h || dd.f.rows() != h || dd.f.cols() != h {
        violations.push("matrix shape does not match d + c".to_string());
        return DisplayReport { violations };
    }
    let det: SeriesElem = dd.b.ghost0().det();
    if !det.is_unit() {
        violations.push("det(B) is not a unit".to_string());
    }
    let p = WittVec::from_int(dd.ring(), dd.witt_len, dd.ring().p() as i128);
    for j in 0..h {
        for i in 0..h {
            let expect = if j < dd.d {
                Ok(dd.b.get(i, j).clone())
            } else {
                p.mul(dd.b.get(i, j))
            };
            match expect {
                Ok(x) if &x == dd.f.get(i, j) => {}
                Ok(_) => {
                    let rule = if j < dd.d { "F' = F'_1" } else { "F' = p·F'_1" };
                    violations.push(format!("{} fails on generator {}", rule, j));
                    break;
                }
                Err(e) => {
                    violations.push(e.to_string());
                    break;
                }
            }
        }
    }
    DisplayReport { violations }
}

/// Rank of `Lie = P'/Q'`.
pub fn display_lie(dd: &DDisplay) -> usize {
    dd.d
}
