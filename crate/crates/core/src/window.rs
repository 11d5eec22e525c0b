//! Windows over `𝔖_a` in normal form `(d, c, A)` with `φ = A·C`,
//! `C = blockdiag(E·I_d, I_c)`, and the triples `(P, Q, F)` they encode.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::frame::Frame;
use crate::matrix::Matrix;
use crate::series::{Ring, RingTag, SeriesElem, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    Shape { rows: usize, cols: usize, expected: usize },
    #[error("det(A) is not a unit")]
    NotInvertible,
    #[error("window matrices must live in a series ring S_a")]
    WrongRing,
    #[error("level {level} exceeds the frame cap {cap}")]
    LevelCap { level: usize, cap: usize },
    #[error("cokernel is not free: {0}")]
    CokernelNotFree(String),
    #[error("windows differ in frame or level")]
    Incompatible,
    #[error("matrix is not a morphism of windows")]
    NotMorphism,
}

/// A window over `𝔖_a`, stored only in normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    d: usize,
    c: usize,
    a: Matrix,
}

fn series_level(ring: &Ring) -> Result<usize, WindowError> {
    match ring.tag() {
        RingTag::Series { level } => Ok(level),
        _ => Err(WindowError::WrongRing),
    }
}

impl Window {
    pub fn new(d: usize, c: usize, a: Matrix) -> Result<Window, WindowError> {
        let level = series_level(a.ring())?;
        let cap = a.ring().frame().max_level();
        if level > cap {
            return Err(WindowError::LevelCap { level, cap });
        }
        if a.rows() != d + c || a.cols() != d + c {
            return Err(WindowError::Shape { rows: a.rows(), cols: a.cols(), expected: d + c });
        }
        if !a.det().is_unit() {
            return Err(WindowError::NotInvertible);
        }
        Ok(Window { d, c, a })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        self.a.ring().frame()
    }
    pub fn ring(&self) -> &Ring {
        self.a.ring()
    }
    pub fn level(&self) -> usize {
        self.a.ring().level().expect("series ring")
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn c(&self) -> usize {
        self.c
    }
    pub fn height(&self) -> usize {
        self.d + self.c
    }
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn c_matrix(&self) -> Matrix {
        Matrix::c_matrix(self.ring(), self.d, self.c)
    }

    /// Matrix of `φ: Q → Q^{(σ)}`, namely `A·C`.
    pub fn phi_matrix(&self) -> Matrix {
        self.a.mul(&self.c_matrix())
    }

    /// Canonical-representative lift to level `a + 1`.
    pub fn lift(&self) -> Result<Window, WindowError> {
        let level = self.level() + 1;
        let cap = self.frame().max_level();
        if level > cap {
            return Err(WindowError::LevelCap { level, cap });
        }
        let ring = Ring::series(self.frame(), level);
        Window::new(self.d, self.c, self.a.coerce(&ring)?)
    }

    /// Base change to `𝔖_level` for `level ≤ a`.
    pub fn reduce(&self, level: usize) -> Result<Window, WindowError> {
        if level == 0 || level > self.level() {
            return Err(WindowError::Incompatible);
        }
        let ring = Ring::series(self.frame(), level);
        Window::new(self.d, self.c, self.a.coerce(&ring)?)
    }

    /// The window obtained by transporting the structure along an
    /// isomorphism with matrix `v`: `φ' = σ(v)·φ·v^{-1}`, put back into
    /// normal form. Returns the new window and the basis change `U` with
    /// `σ(U)^{-1}·φ'·U = A'·C`.
    pub fn transport(&self, v: &Matrix) -> Result<(Window, Matrix), WindowError> {
        let vinv = v.inverse().map_err(|_| WindowError::NotInvertible)?;
        let m = v.frobenius()?.mul(&self.phi_matrix()).mul(&vinv);
        let nf = normal_decompose(&m)?;
        let w = Window::new(nf.d, nf.c, nf.a)?;
        Ok((w, nf.basis_change))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level = {}, d = {}, c = {}", self.level(), self.d, self.c)?;
        write!(f, "{}", self.a)
    }
}

/// Build a window from a matrix over `𝔖_level`.
pub fn make_window(frame: &Arc<Frame>, level: usize, d: usize, c: usize, a: &Matrix) -> Result<Window, WindowError> {
    if !Arc::ptr_eq(a.ring().frame(), frame) || a.ring().level() != Some(level) {
        return Err(WindowError::Incompatible);
    }
    Window::new(d, c, a.clone())
}

/// Output of [`normal_decompose`]: `σ(U)^{-1}·M·U = A·C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub d: usize,
    pub c: usize,
    pub a: Matrix,
    pub basis_change: Matrix,
}

/// Residues mod `p` of the constant terms, i.e. the image in `k`.
fn residue_matrix(m: &Matrix) -> Vec<Vec<u64>> {
    let p = m.ring().p();
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).constant_term() % p).collect()).collect()
}

/// Choose pivot columns of a matrix over `F_p`, scanning columns left to
/// right and taking the lowest available row. Returns `(column, row)` pairs.
fn fp_pivots(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<(usize, usize)> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    let mut used = vec![false; n];
    let mut pivots = Vec::new();
    for col in 0..m {
        let Some(r) = (0..n).find(|&r| !used[r] && !rows[r][col].is_multiple_of(p)) else { continue };
        used[r] = true;
        pivots.push((col, r));
        let inv = crate::series::inv_mod(rows[r][col], p).expect("nonzero mod p");
        for rr in 0..n {
            if rr == r || rows[rr][col] == 0 {
                continue;
            }
            let f = rows[rr][col] * inv % p;
            for k in 0..m {
                rows[rr][k] = (rows[rr][k] + p * p - f * rows[r][k] % p) % p;
            }
        }
    }
    pivots
}

/// Split a φ-matrix into normal form: find `U` with `σ(U)^{-1}·M·U = A·C`.
///
/// Columns that are units modulo `(p, t, u)` span the `L`-block; each other
/// column is corrected by a combination of them (solved over `R/p^aR`) until
/// it is divisible by `E`, and then divided by `E`.
pub fn normal_decompose(m: &Matrix) -> Result<NormalForm, WindowError> {
    let ring = m.ring().clone();
    series_level(&ring)?;
    let h = m.rows();
    if m.cols() != h {
        return Err(WindowError::Shape { rows: m.rows(), cols: m.cols(), expected: h });
    }
    let pivots = fp_pivots(residue_matrix(m), ring.p());
    let pcols: Vec<usize> = pivots.iter().map(|&(c, _)| c).collect();
    let prows: Vec<usize> = pivots.iter().map(|&(_, r)| r).collect();
    let free: Vec<usize> = (0..h).filter(|k| !pcols.contains(k)).collect();
    let c = pcols.len();
    let d = h - c;

    let mr = m.reduce_mod_e()?;
    let minor = mr.submatrix(&prows, &pcols);
    let minor_inv = minor.inverse().map_err(|_| WindowError::CokernelNotFree("singular pivot block".into()))?;
    let mp = m.submatrix(&(0..h).collect::<Vec<_>>(), &pcols);
    let mrp = mr.submatrix(&(0..h).collect::<Vec<_>>(), &pcols);

    let mut a = Matrix::zeros(&ring, h, h);
    let mut u = Matrix::zeros(&ring, h, h);
    for (slot, &k) in free.iter().enumerate() {
        let rhs = mr.submatrix(&prows, &[k]);
        let x = minor_inv.mul(&rhs);
        if mrp.mul(&x) != mr.submatrix(&(0..h).collect::<Vec<_>>(), &[k]) {
            return Err(WindowError::CokernelNotFree(format!("column {} leaves a torsion quotient", k)));
        }
        let xl = x.coerce(&ring)?;
        let col = m.submatrix(&(0..h).collect::<Vec<_>>(), &[k]).sub(&mp.mul(&xl));
        for i in 0..h {
            let q = col.get(i, 0).div_by_e().map_err(|_| {
                WindowError::CokernelNotFree(format!("column {} is not divisible by E", k))
            })?;
            a.set(i, slot, q);
        }
        u.set(k, slot, ring.one());
        for (j, &pc) in pcols.iter().enumerate() {
            u.set(pc, slot, xl.get(j, 0).neg());
        }
    }
    for (j, &pc) in pcols.iter().enumerate() {
        for i in 0..h {
            a.set(i, d + j, m.get(i, pc).clone());
        }
        u.set(pc, d + j, ring.one());
    }
    // M·U = A_0·C; in the basis Q·U the φ-matrix is σ(U)^{-1}·M·U
    let su_inv = u.frobenius()?.inverse()?;
    let a = su_inv.mul(&a);
    if !a.det().is_unit() {
        return Err(WindowError::CokernelNotFree("normal-form matrix is not invertible".into()));
    }
    Ok(NormalForm { d, c, a, basis_change: u })
}

/// A triple `(P, Q, F)` in a normal decomposition `P = J ⊕ L`,
/// `Q = E·J ⊕ L`, given by the matrix `T` of the σ-linear isomorphism
/// `F ⊕ F_1: J ⊕ L → P` in the normal basis, together with that basis in the
/// coordinates `1 ⊗ q_i` of `P = Q^{(σ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub d: usize,
    pub c: usize,
    pub t: Matrix,
    pub basis: Matrix,
}

impl Triple {
    /// Matrix of `F` on the normal basis: `T·blockdiag(I_d, σ(E)·I_c)`.
    pub fn f_matrix(&self) -> Result<Matrix, SeriesError> {
        let ring = self.t.ring();
        let se = ring.e_elem().frobenius()?;
        let diag: Vec<SeriesElem> = (0..self.d + self.c).map(|i| if i < self.d { ring.one() } else { se.clone() }).collect();
        Ok(self.t.mul(&Matrix::diagonal(ring, &diag)))
    }

    /// Matrix of `F_1` from the basis `(E·b_J, b_L)` of `Q` to the basis of `P`.
    pub fn f1_matrix(&self) -> Matrix {
        self.t.clone()
    }

    /// Check the triple axioms in the coordinates of `P`:
    /// `E·P ⊂ Q` and `F(Q) = σ(E)·P`.
    pub fn check_axioms(&self) -> Result<bool, SeriesError> {
        let ring = self.t.ring();
        let c = Matrix::c_matrix(ring, self.d, self.c);
        let q = self.basis.mul(&c);
        let binv = match self.basis.inverse() {
            Ok(b) => b,
            Err(_) => return Ok(false),
        };
        // E·P ⊂ Q: E·I = B·C·(blockdiag(I, E)·B^{-1})
        let e = ring.e_elem();
        let diag: Vec<SeriesElem> = (0..self.d + self.c).map(|i| if i < self.d { ring.one() } else { e.clone() }).collect();
        let x = Matrix::diagonal(ring, &diag).mul(&binv);
        if q.mul(&x) != Matrix::identity(ring, self.d + self.c).scale(&e) {
            return Ok(false);
        }
        // F in P-coordinates: B·F_b·σ(B^{-1})
        let fp = self.basis.mul(&self.f_matrix()?).mul(&binv.frobenius()?);
        let fq = fp.mul(&q.frobenius()?);
        let se = e.frobenius()?;
        let bt = self.basis.mul(&self.t);
        Ok(bt.inverse().is_ok() && fq == bt.scale(&se))
    }
}

/// The triple of a window: `T = A^{-1}`, normal basis given by the columns of `A`.
pub fn triple_of(w: &Window) -> Triple {
    let t = w.a.inverse().expect("window matrices are invertible");
    Triple { d: w.d, c: w.c, t, basis: w.a.clone() }
}

/// The window of a triple: `φ = T^{-1}·C`.
pub fn window_of(t: &Triple) -> Result<Window, WindowError> {
    let a = t.t.inverse().map_err(|_| WindowError::NotInvertible)?;
    Window::new(t.d, t.c, a)
}

/// Is `u` a morphism of windows `src → tgt`, i.e. `φ_2·U = σ(U)·φ_1`?
pub fn check_morphism(src: &Window, tgt: &Window, u: &Matrix) -> Result<bool, WindowError> {
    if src.ring() != tgt.ring() || u.ring() != src.ring() {
        return Err(WindowError::Incompatible);
    }
    if u.rows() != tgt.height() || u.cols() != src.height() {
        return Err(WindowError::Shape { rows: u.rows(), cols: u.cols(), expected: src.height() });
    }
    let lhs = tgt.phi_matrix().mul(u);
    let rhs = u.frobenius()?.mul(&src.phi_matrix());
    Ok(lhs == rhs)
}

/// Data of the window at the closed point `t = u = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFiber {
    pub height: usize,
    pub dim: usize,
    /// `A mod (t, u)` over `W(k)/p^N`.
    pub a0: Matrix,
    /// Matrix of `F` on the normal basis mod `(t, u)`.
    pub phi0: Matrix,
    pub is_nilpotent: bool,
}

/// Special-fiber invariants. `F = A^{-1}·blockdiag(I_d, σ(E)·I_c)` on the
/// normal basis, so `V = p·F^{-1} ≡ ε_0^{-1}·blockdiag(0_d, I_c)·A_0` mod `p`;
/// the window is called nilpotent when this matrix is nilpotent over `k`.
pub fn special_fiber(w: &Window) -> SpecialFiber {
    let frame = w.frame();
    let h = w.height();
    let z = Ring::constants(frame, frame.prec());
    let a0 = Matrix::from_fn(&z, h, h, |i, j| z.from_int(w.a.get(i, j).constant_term() as i128));
    let t0 = a0.inverse().expect("unit determinant");
    let se0 = z.e_elem(); // σ(E) and E agree mod (t, u)
    let diag: Vec<SeriesElem> = (0..h).map(|i| if i < w.d { z.one() } else { se0.clone() }).collect();
    let phi0 = t0.mul(&Matrix::diagonal(&z, &diag));

    let k = Ring::constants(frame, 1);
    let vbar = Matrix::from_fn(&k, h, h, |i, j| {
        if i < w.d {
            k.zero()
        } else {
            k.from_int(a0.get(i, j).constant_term() as i128)
        }
    });
    let mut pow = Matrix::identity(&k, h);
    for _ in 0..h {
        pow = pow.mul(&vbar);
    }
    SpecialFiber { height: h, dim: w.d, a0, phi0, is_nilpotent: pow.is_zero() }
}

/// `Coker(φ)` over `R/p^aR`: its rank and the presentation matrix `φ mod E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lie {
    pub rank: usize,
    pub presentation: Matrix,
}

pub fn lie(w: &Window) -> Lie {
    let presentation = w.phi_matrix().reduce_mod_e().expect("series ring");
    Lie { rank: w.d, presentation }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame() -> Arc<Frame> {
        Frame::from_params(3, 0, 1, 2, 6, 0, 2, "u + 3").unwrap()
    }

    fn m(s: &Ring, rows: &[&[SeriesElem]]) -> Matrix {
        Matrix::from_rows(s, rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn make_window_examples() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let w = make_window(&f, 2, 1, 0, &m(&s, &[&[s.one()]])).unwrap();
        assert_eq!(w.phi_matrix(), m(&s, &[&[s.e_elem()]]));
        let w = make_window(&f, 2, 0, 1, &m(&s, &[&[s.one()]])).unwrap();
        assert!(w.phi_matrix().is_identity());
        let f2 = Frame::from_params(3, 0, 2, 2, 6, 0, 2, "u^2 + 3").unwrap();
        let s2 = Ring::series(&f2, 2);
        let a = m(&s2, &[&[s2.one(), s2.u()], &[s2.zero(), s2.one()]]);
        assert!(make_window(&f2, 2, 1, 1, &a).is_ok());
        let bad = m(&s, &[&[s.from_int(3)]]);
        assert_eq!(make_window(&f, 2, 1, 0, &bad).unwrap_err(), WindowError::NotInvertible);
        assert!(matches!(make_window(&f, 2, 1, 1, &bad).unwrap_err(), WindowError::Shape { .. }));
    }

    #[test]
    fn normal_decompose_examples() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let e = s.e_elem();
        let nf = normal_decompose(&m(&s, &[&[e.clone(), s.zero()], &[s.zero(), s.one()]])).unwrap();
        assert_eq!((nf.d, nf.c), (1, 1));
        assert!(nf.a.is_identity() && nf.basis_change.is_identity());

        let mm = m(&s, &[&[s.zero(), e.clone()], &[s.one(), s.zero()]]);
        let nf = normal_decompose(&mm).unwrap();
        let swap = m(&s, &[&[s.zero(), s.one()], &[s.one(), s.zero()]]);
        assert_eq!((nf.d, nf.c), (1, 1));
        assert_eq!(nf.basis_change, swap);
        assert_eq!(nf.a, swap);
        assert_eq!(swap.mul(&mm).mul(&swap), nf.a.mul(&Matrix::c_matrix(&s, 1, 1)));

        let x = &e * &(&s.one() + &s.u());
        let nf = normal_decompose(&m(&s, &[std::slice::from_ref(&x)])).unwrap();
        assert_eq!((nf.d, nf.c), (1, 0));
        // division by E is only defined up to Ann(E) = (243 - 81u) mod 3^6
        assert_eq!(&e * nf.a.get(0, 0), x);
        assert_eq!(nf.a.get(0, 0).reduce_mod_e().unwrap(), (&s.one() + &s.u()).reduce_mod_e().unwrap());
    }

    #[test]
    fn cokernel_not_free() {
        // Coker of (u) is R/(u) = R/(p): not free over R/p^2R
        let f = frame();
        let s = Ring::series(&f, 2);
        assert!(matches!(normal_decompose(&m(&s, &[&[s.u()]])), Err(WindowError::CokernelNotFree(_))));
    }

    #[test]
    fn triple_roundtrip_and_axioms() {
        let f = Frame::from_params(3, 1, 2, 2, 5, 2, 2, "u^2 + 3t*u + 3(1+t)").unwrap();
        let s = Ring::series(&f, 2);
        let a = m(&s, &[&[&s.one() + &s.t(0), s.u()], &[s.from_int(3), &s.from_int(2) + &s.u()]]);
        let w = Window::new(1, 1, a).unwrap();
        let t = triple_of(&w);
        assert!(t.check_axioms().unwrap());
        assert_eq!(window_of(&t).unwrap(), w);
        assert_eq!(triple_of(&window_of(&t).unwrap()), t);
        // F_1 on the L-block is the L-columns of T
        assert_eq!(t.f1_matrix().column(1), t.t.column(1));
    }

    #[test]
    fn morphism_examples() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let w = Window::new(1, 0, m(&s, &[&[s.one()]])).unwrap();
        assert!(check_morphism(&w, &w, &Matrix::identity(&s, 1)).unwrap());
        assert!(check_morphism(&w, &w, &Matrix::identity(&s, 1).scale_int(3)).unwrap());
        // E·u versus u^3·E
        assert!(!check_morphism(&w, &w, &m(&s, &[&[s.u()]])).unwrap());
    }

    #[test]
    fn lift_and_reduce() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let w = Window::new(1, 0, m(&s, &[&[&s.one() + &s.u()]])).unwrap();
        let l = w.lift().unwrap();
        assert_eq!(l.level(), 3);
        assert_eq!((l.d(), l.c()), (1, 0));
        assert_eq!(l.reduce(2).unwrap(), w);
        let top = Window::new(1, 0, m(&Ring::series(&f, 6), &[&[Ring::series(&f, 6).one()]])).unwrap();
        assert!(matches!(top.lift(), Err(WindowError::LevelCap { .. })));
    }

    #[test]
    fn special_fiber_examples() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let z = Ring::constants(&f, 6);
        let conn = Window::new(1, 0, m(&s, &[&[s.one()]])).unwrap();
        let sf = special_fiber(&conn);
        assert_eq!(sf.phi0, m(&z, &[&[z.one()]]));
        assert!(sf.is_nilpotent);
        let et = Window::new(0, 1, m(&s, &[&[s.one()]])).unwrap();
        let sf = special_fiber(&et);
        // p·ε_0 with ε = 1
        assert_eq!(sf.phi0, m(&z, &[&[z.from_int(3)]]));
        assert!(!sf.is_nilpotent);
        let both = Window::new(1, 1, Matrix::identity(&s, 2)).unwrap();
        let sf = special_fiber(&both);
        assert_eq!((sf.height, sf.dim, sf.is_nilpotent), (2, 1, false));
        // V mod p = [[0,0],[1,0]] is nilpotent although blockdiag(0,1)·A^{-1} is not
        let a = m(&s, &[&[s.one(), s.one()], &[s.one(), s.zero()]]);
        assert!(special_fiber(&Window::new(1, 1, a).unwrap()).is_nilpotent);
    }

    #[test]
    fn lie_ranks() {
        let f = frame();
        let s = Ring::series(&f, 2);
        let w = Window::new(1, 0, m(&s, &[&[s.one()]])).unwrap();
        let l = lie(&w);
        assert_eq!(l.rank, 1);
        assert!(l.presentation.is_zero());
        let w = Window::new(0, 1, m(&s, &[&[s.one()]])).unwrap();
        assert_eq!(lie(&w).rank, 0);
    }
}
