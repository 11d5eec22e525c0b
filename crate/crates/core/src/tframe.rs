//! The ring `𝒯_a = 𝔖[[v]]/(pv - u^e, v^a)` with its Frobenius
//! `σ(v) = p^{p-1} v^p`, windows base-changed to it, and the lifting solver
//! for isomorphisms of windows that agree modulo `u^e`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::frame::{render_monomial, Frame};
use crate::matrix::Matrix;
use crate::series::{addmod, grlex, inv_mod, mulmod, reduce_i128, submod, Ring, RingTag, SeriesElem, SeriesError};
use crate::window::Window;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TError {
    #[error("elements of different T-rings")]
    RingMismatch,
    #[error("not a unit in T_a")]
    NotUnit,
    #[error("A2^-1 A1 is not congruent to I modulo u^e")]
    Hypothesis,
    #[error("matrix shapes do not agree")]
    Shape,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug)]
struct TRingInner {
    frame: Arc<Frame>,
    level: usize,
    modulus: u64,
    nt: usize,
}

/// `𝒯_a` at p-precision `N` and t-degree cap `D`.
#[derive(Clone, Debug)]
pub struct TRing(Arc<TRingInner>);

impl PartialEq for TRing {
    fn eq(&self, o: &TRing) -> bool {
        Arc::ptr_eq(&self.0.frame, &o.0.frame) && self.0.level == o.0.level
    }
}
impl Eq for TRing {}

impl TRing {
    pub fn new(frame: &Arc<Frame>, level: usize) -> TRing {
        let modulus = frame.p().pow(frame.prec());
        let nt = frame.tbasis().len();
        TRing(Arc::new(TRingInner { frame: frame.clone(), level, modulus, nt }))
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.0.frame
    }
    pub fn level(&self) -> usize {
        self.0.level
    }
    fn e(&self) -> usize {
        self.0.frame.e()
    }
    fn size(&self) -> usize {
        self.0.level * self.e() * self.0.nt
    }
    fn index(&self, k: usize, j: usize, ti: usize) -> usize {
        (k * self.e() + j) * self.0.nt + ti
    }
    fn unindex(&self, i: usize) -> (usize, usize, usize) {
        let nt = self.0.nt;
        let e = self.e();
        (i / nt / e, (i / nt) % e, i % nt)
    }

    pub fn zero(&self) -> TElem {
        TElem { ring: self.clone(), c: vec![0; self.size()] }
    }
    pub fn from_int(&self, n: i128) -> TElem {
        let mut z = self.zero();
        if !z.c.is_empty() {
            z.c[0] = reduce_i128(n, self.0.modulus);
        }
        z
    }
    pub fn one(&self) -> TElem {
        self.from_int(1)
    }

    /// `c·t^{ti} u^j v^k` in canonical form, for any `j`.
    pub fn monomial(&self, ti: usize, j: usize, k: usize, c: i128) -> TElem {
        let mut z = self.zero();
        let e = self.e();
        let (q, r) = (j / e, j % e);
        if k + q < self.0.level && ti < self.0.nt {
            let p = self.0.frame.p();
            let f = mulmod(reduce_i128(c, self.0.modulus), pow_mod(p, q as u64, self.0.modulus), self.0.modulus);
            let i = self.index(k + q, r, ti);
            z.c[i] = f;
        }
        z
    }
    pub fn v(&self) -> TElem {
        self.monomial(0, 0, 1, 1)
    }
    pub fn u(&self) -> TElem {
        self.monomial(0, 1, 0, 1)
    }

    /// Image of an element of `𝔖_b` (any level `b`) under `𝔖 → 𝒯_a`.
    pub fn from_series(&self, x: &SeriesElem) -> Result<TElem, TError> {
        if !matches!(x.ring().tag(), RingTag::Series { .. } | RingTag::Constants) || !Arc::ptr_eq(x.ring().frame(), &self.0.frame) {
            return Err(TError::RingMismatch);
        }
        let mut z = self.zero();
        for (ti, j, c) in x.terms() {
            let m = self.monomial(ti, j, 0, c as i128);
            z = &z + &m;
        }
        Ok(z)
    }

    pub fn e_elem(&self) -> Result<TElem, TError> {
        self.from_series(&Ring::series(&self.0.frame, self.0.level.max(1)).e_elem())
    }

    pub fn epsilon(&self) -> Result<TElem, TError> {
        self.from_series(&Ring::series(&self.0.frame, self.0.level.max(1)).epsilon())
    }
}

fn pow_mod(mut b: u64, mut k: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while k > 0 {
        if k & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        k >>= 1;
    }
    r
}

/// Element of `𝒯_a`: coefficients of `t^α u^j v^k` with `j < e`, `k < a`.
#[derive(Clone, Debug)]
pub struct TElem {
    ring: TRing,
    c: Vec<u64>,
}

impl PartialEq for TElem {
    fn eq(&self, o: &TElem) -> bool {
        self.ring == o.ring && self.c == o.c
    }
}
impl Eq for TElem {}

impl TElem {
    pub fn ring(&self) -> &TRing {
        &self.ring
    }

    /// Coefficient of `t^{ti} u^j v^k`.
    pub fn coeff(&self, k: usize, j: usize, ti: usize) -> u64 {
        self.c[self.ring.index(k, j, ti)]
    }

    /// Nonzero terms as `(v-exponent, u-exponent, t-basis index, residue)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, u64)> + '_ {
        self.c.iter().enumerate().filter(|(_, &x)| x != 0).map(move |(i, &x)| {
            let (k, j, ti) = self.ring.unindex(i);
            (k, j, ti, x)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.c.first().is_some_and(|&x| x % self.ring.0.frame.p() != 0)
    }

    fn check(&self, o: &TElem) -> Result<(), TError> {
        if self.ring != o.ring {
            return Err(TError::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &TElem) -> Result<TElem, TError> {
        self.check(o)?;
        let m = self.ring.0.modulus;
        Ok(TElem { ring: self.ring.clone(), c: self.c.iter().zip(&o.c).map(|(&a, &b)| addmod(a, b, m)).collect() })
    }

    pub fn checked_sub(&self, o: &TElem) -> Result<TElem, TError> {
        self.check(o)?;
        let m = self.ring.0.modulus;
        Ok(TElem { ring: self.ring.clone(), c: self.c.iter().zip(&o.c).map(|(&a, &b)| submod(a, b, m)).collect() })
    }

    pub fn checked_mul(&self, o: &TElem) -> Result<TElem, TError> {
        self.check(o)?;
        let ring = &self.ring;
        let (m, p, e, a) = (ring.0.modulus, ring.0.frame.p(), ring.e(), ring.0.level);
        let tb = ring.0.frame.tbasis();
        let mut out = ring.zero();
        for (k1, j1, t1, x) in self.terms() {
            for (k2, j2, t2, y) in o.terms() {
                let (mut k, mut j) = (k1 + k2, j1 + j2);
                let mut f = mulmod(x, y, m);
                if j >= e {
                    j -= e;
                    k += 1;
                    f = mulmod(f, p % m, m);
                }
                if k >= a {
                    continue;
                }
                let Some(t) = tb.mul(t1, t2).filter(|&t| t < ring.0.nt) else { continue };
                let i = ring.index(k, j, t);
                out.c[i] = addmod(out.c[i], f, m);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> TElem {
        let m = self.ring.0.modulus;
        TElem { ring: self.ring.clone(), c: self.c.iter().map(|&a| submod(0, a, m)).collect() }
    }

    pub fn scale(&self, n: i128) -> TElem {
        let m = self.ring.0.modulus;
        let f = reduce_i128(n, m);
        TElem { ring: self.ring.clone(), c: self.c.iter().map(|&a| mulmod(a, f, m)).collect() }
    }

    pub fn pow(&self, mut k: u64) -> TElem {
        let mut r = self.ring.one();
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        r
    }

    /// `σ`: `t ↦ t^p`, `u ↦ u^p`, `v ↦ p^{p-1} v^p`, identity on `Z_p`.
    pub fn sigma(&self) -> TElem {
        let ring = &self.ring;
        let p = ring.0.frame.p();
        let tb = ring.0.frame.tbasis();
        let mut out = ring.zero();
        for (k, j, ti, x) in self.terms() {
            let Some(t) = tb.frob(ti).filter(|&t| t < ring.0.nt) else { continue };
            let m = ring.monomial(t, p as usize * j, p as usize * k, x as i128);
            let pk = pow_mod(p, (p - 1) * k as u64, ring.0.modulus);
            out = &out + &m.scale(pk as i128);
        }
        out
    }

    pub fn invert(&self) -> Result<TElem, TError> {
        if !self.is_unit() {
            return Err(TError::NotUnit);
        }
        let m = self.ring.0.modulus;
        let c0 = inv_mod(self.c[0], m).ok_or(TError::NotUnit)?;
        let two = self.ring.from_int(2);
        let mut x = self.ring.from_int(c0 as i128);
        // the augmentation ideal is nilpotent, so Newton stabilises
        for _ in 0..128 {
            let next = &x * &(&two - &(self * &x));
            if next == x {
                return Ok(x);
            }
            x = next;
        }
        Ok(x)
    }

    /// Whether the element lies in the image of `𝔖_a`: the coefficient of
    /// `u^j v^k` must be divisible by `p^k`.
    pub fn in_series_image(&self) -> bool {
        let p = self.ring.0.frame.p();
        let n = self.ring.0.frame.prec();
        self.terms().all(|(k, _, _, x)| {
            let need = (k as u32).min(n);
            x % p.pow(need) == 0
        })
    }

    /// A preimage in `𝔖_a` when [`TElem::in_series_image`] holds; digits
    /// above `p^{N-k}` of the `v^k` part are not determined.
    pub fn to_series(&self) -> Option<SeriesElem> {
        if !self.in_series_image() {
            return None;
        }
        let ring = Ring::series(&self.ring.0.frame, self.ring.0.level);
        let p = ring.p() as i128;
        let e = self.ring.e();
        let mut z = ring.zero();
        for (k, j, ti, x) in self.terms() {
            let texp = self.ring.0.frame.tbasis().exponent(ti).to_vec();
            z = &z + &ring.monomial(&texp, k * e + j, x as i128 / p.pow(k as u32));
        }
        Some(z)
    }
}

macro_rules! t_binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr<&TElem> for &TElem {
            type Output = TElem;
            fn $f(self, o: &TElem) -> TElem {
                self.$m(o).expect("T-ring mismatch")
            }
        }
        impl std::ops::$tr<TElem> for TElem {
            type Output = TElem;
            fn $f(self, o: TElem) -> TElem {
                self.$m(&o).expect("T-ring mismatch")
            }
        }
    };
}
t_binop!(Add, add, checked_add);
t_binop!(Sub, sub, checked_sub);
t_binop!(Mul, mul, checked_mul);

impl fmt::Display for TElem {
    /// v-graded rendering: terms by ascending `v`-power, then graded-lex in `(t, u)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frame = &self.ring.0.frame;
        let mut terms: Vec<(usize, Vec<u32>, usize, usize, u64)> = self
            .terms()
            .map(|(k, j, ti, x)| {
                let mut exp = frame.tbasis().exponent(ti).to_vec();
                exp.push(j as u32);
                (k, exp, ti, j, x)
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| grlex(&a.1, &b.1)));
        let parts: Vec<String> = terms
            .iter()
            .map(|(k, _, ti, j, x)| {
                let mut factors = Vec::new();
                let mono = render_monomial(frame, *ti, *j);
                if !mono.is_empty() {
                    factors.push(mono);
                }
                match k {
                    0 => {}
                    1 => factors.push("v".to_string()),
                    _ => factors.push(format!("v^{}", k)),
                }
                if factors.is_empty() {
                    x.to_string()
                } else if *x == 1 {
                    factors.join("*")
                } else {
                    format!("{}*{}", x, factors.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Matrix over `𝒯_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMatrix {
    ring: TRing,
    rows: usize,
    cols: usize,
    data: Vec<TElem>,
}

impl TMatrix {
    pub fn from_fn(ring: &TRing, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TElem) -> TMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        TMatrix { ring: ring.clone(), rows, cols, data }
    }
    pub fn zeros(ring: &TRing, rows: usize, cols: usize) -> TMatrix {
        TMatrix::from_fn(ring, rows, cols, |_, _| ring.zero())
    }
    pub fn identity(ring: &TRing, n: usize) -> TMatrix {
        TMatrix::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }
    pub fn diagonal(ring: &TRing, diag: &[TElem]) -> TMatrix {
        let n = diag.len();
        TMatrix::from_fn(ring, n, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    /// Entry-wise image of a matrix over `𝔖`.
    pub fn from_matrix(ring: &TRing, m: &Matrix) -> Result<TMatrix, TError> {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                data.push(ring.from_series(m.get(i, j))?);
            }
        }
        Ok(TMatrix { ring: ring.clone(), rows: m.rows(), cols: m.cols(), data })
    }

    pub fn ring(&self) -> &TRing {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &TElem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, x: TElem) {
        self.data[i * self.cols + j] = x;
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TElem::is_zero)
    }
    pub fn is_identity(&self) -> bool {
        *self == TMatrix::identity(&self.ring, self.rows)
    }
    /// `X ≡ I mod v`.
    pub fn is_identity_mod_v(&self) -> bool {
        let id = TMatrix::identity(&self.ring, self.rows);
        self.data.iter().zip(&id.data).all(|(x, y)| x.terms().filter(|t| t.0 == 0).eq(y.terms()))
    }

    fn zip(&self, o: &TMatrix, f: impl Fn(&TElem, &TElem) -> TElem) -> TMatrix {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect();
        TMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }
    pub fn add(&self, o: &TMatrix) -> TMatrix {
        self.zip(o, |a, b| a + b)
    }
    pub fn sub(&self, o: &TMatrix) -> TMatrix {
        self.zip(o, |a, b| a - b)
    }
    pub fn mul(&self, o: &TMatrix) -> TMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        TMatrix::from_fn(&self.ring, self.rows, o.cols, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * o.get(k, j));
            }
            acc
        })
    }
    pub fn scale(&self, x: &TElem) -> TMatrix {
        TMatrix { data: self.data.iter().map(|a| a * x).collect(), ..self.clone() }
    }
    pub fn sigma(&self) -> TMatrix {
        TMatrix { data: self.data.iter().map(TElem::sigma).collect(), ..self.clone() }
    }

    /// Gauss-Jordan with unit pivots.
    pub fn inverse(&self) -> Result<TMatrix, TError> {
        if self.rows != self.cols {
            return Err(TError::Shape);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = TMatrix::identity(&self.ring, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col).is_unit()).ok_or(TError::NotUnit)?;
            for k in 0..n {
                a.data.swap(col * n + k, piv * n + k);
                inv.data.swap(col * n + k, piv * n + k);
            }
            let s = a.get(col, col).invert()?;
            for k in 0..n {
                let x = a.get(col, k) * &s;
                a.set(col, k, x);
                let y = inv.get(col, k) * &s;
                inv.set(col, k, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for k in 0..n {
                    let x = a.get(r, k) - &(&f * a.get(col, k));
                    a.set(r, k, x);
                    let y = inv.get(r, k) - &(&f * inv.get(col, k));
                    inv.set(r, k, y);
                }
            }
        }
        Ok(inv)
    }

    /// `C = blockdiag(E·I_d, I_c)` over `𝒯_a`.
    pub fn c_matrix(ring: &TRing, d: usize, c: usize) -> Result<TMatrix, TError> {
        let e = ring.e_elem()?;
        let diag: Vec<TElem> = (0..d + c).map(|i| if i < d { e.clone() } else { ring.one() }).collect();
        Ok(TMatrix::diagonal(ring, &diag))
    }

    /// `p·C^{-1} = blockdiag((v+ε)^{-1}·I_d, p·I_c)`.
    pub fn p_c_inverse(ring: &TRing, d: usize, c: usize) -> Result<TMatrix, TError> {
        let ve = (&ring.v() + &ring.epsilon()?).invert()?;
        let p = ring.from_int(ring.frame().p() as i128);
        let diag: Vec<TElem> = (0..d + c).map(|i| if i < d { ve.clone() } else { p.clone() }).collect();
        Ok(TMatrix::diagonal(ring, &diag))
    }
}

impl fmt::Display for TMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A window base-changed to `𝒯_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TWindow {
    pub d: usize,
    pub c: usize,
    pub a: TMatrix,
}

pub fn base_change_t(w: &Window) -> Result<TWindow, TError> {
    let ring = TRing::new(w.frame(), w.level());
    Ok(TWindow { d: w.d(), c: w.c(), a: TMatrix::from_matrix(&ring, w.a())? })
}

/// Output of [`solve_iso`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoSolution {
    /// `Z` with `A_2^{-1} A_1 = I + u^e Z`, over `𝔖_{a+1}`.
    pub z: Matrix,
    pub d_matrix: TMatrix,
    pub y: TMatrix,
    pub x: TMatrix,
    /// `A_2 C X - σ(X) A_1 C = 0` holds exactly.
    pub residual_zero: bool,
}

struct IsoProblem {
    ring: TRing,
    a1c: TMatrix,
    a2c: TMatrix,
    left: TMatrix,
    factor: TElem,
    z: Matrix,
    d: TMatrix,
}

impl IsoProblem {
    fn new(a1: &Matrix, a2: &Matrix, d: usize, c: usize, level: usize) -> Result<IsoProblem, TError> {
        let h = d + c;
        if a1.rows() != h || a1.cols() != h || a2.rows() != h || a2.cols() != h {
            return Err(TError::Shape);
        }
        let frame = a1.ring().frame().clone();
        let up = Ring::series(&frame, level + 1);
        let a1s = a1.coerce(&up)?;
        let a2s = a2.coerce(&up)?;
        let g = a2s.inverse()?.mul(&a1s).sub(&Matrix::identity(&up, h));
        let e = frame.e();
        let mut z = Matrix::zeros(&up, h, h);
        for i in 0..h {
            for j in 0..h {
                z.set(i, j, g.get(i, j).shift_u_down(e).ok_or(TError::Hypothesis)?);
            }
        }
        let ring = TRing::new(&frame, level);
        let ta1 = TMatrix::from_matrix(&ring, &a1s)?;
        let ta2 = TMatrix::from_matrix(&ring, &a2s)?;
        let cm = TMatrix::c_matrix(&ring, d, c)?;
        let pci = TMatrix::p_c_inverse(&ring, d, c)?;
        let dm = pci.mul(&TMatrix::from_matrix(&ring, &z)?).mul(&cm);
        let p = frame.p() as usize;
        let factor = &ring.v() * &ring.u().pow((e * (p - 2)) as u64);
        let left = pci.mul(&ta2.inverse()?);
        Ok(IsoProblem { a1c: ta1.mul(&cm), a2c: ta2.mul(&cm), left, factor, z, d: dm, ring })
    }

    fn psi(&self, y: &TMatrix) -> TMatrix {
        self.left.mul(&y.sigma()).mul(&self.a1c).scale(&self.factor)
    }

    fn finish(&self, y: TMatrix) -> IsoSolution {
        let h = y.rows();
        let x = TMatrix::identity(&self.ring, h).add(&y.scale(&self.ring.v()));
        let residual = self.a2c.mul(&x).sub(&x.sigma().mul(&self.a1c));
        IsoSolution { z: self.z.clone(), d_matrix: self.d.clone(), y, x, residual_zero: residual.is_zero() }
    }
}

/// The isomorphism `X` over `𝒯_a` between the windows `(d, c, A_1)` and
/// `(d, c, A_2)` whose matrices agree modulo `u^e`, as `X = I + vY` with
/// `Y = Σ_{n<a} Ψ^n(D)`. Inputs over any level are lifted to `𝔖_{a+1}` by
/// canonical representatives.
pub fn solve_iso(a1: &Matrix, a2: &Matrix, d: usize, c: usize, level: usize) -> Result<IsoSolution, TError> {
    let pr = IsoProblem::new(a1, a2, d, c, level)?;
    let mut term = pr.d.clone();
    let mut y = term.clone();
    for _ in 1..level {
        term = pr.psi(&term);
        y = y.add(&term);
    }
    Ok(pr.finish(y))
}

/// The same solution reached by iterating `Y ↦ D + Ψ(Y)` from `y0`; `a`
/// steps suffice since `Ψ` raises the `v`-adic order.
pub fn solve_iso_from(a1: &Matrix, a2: &Matrix, d: usize, c: usize, level: usize, y0: &TMatrix) -> Result<IsoSolution, TError> {
    let pr = IsoProblem::new(a1, a2, d, c, level)?;
    if y0.ring() != &pr.ring || y0.rows() != d + c || y0.cols() != d + c {
        return Err(TError::Shape);
    }
    let mut y = y0.clone();
    for _ in 0..level {
        y = pr.d.add(&pr.psi(&y));
    }
    Ok(pr.finish(y))
}

fn legendre(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        n /= p;
        s += n;
    }
    s
}

/// `ν(a) = min_{n ≥ a} ord_p(p^n / n!)`.
pub fn nu(a: u64, p: u64) -> u64 {
    let top = a.max((p - 1) * (a + 2));
    (a..=top).map(|n| n - legendre(n, p)).min().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(e: usize, eq: &str) -> Arc<Frame> {
        Frame::from_params(3, 0, e, 2, 6, 0, 2, eq).unwrap()
    }

    #[test]
    fn rewrite_examples() {
        let f = frame(1, "u + 3");
        let t = TRing::new(&f, 2);
        assert_eq!(t.u(), t.v().scale(3));
        assert_eq!(t.u().to_string(), "3*v");
        assert!(t.v().sigma().is_zero());
        for n in 0..2 {
            assert_eq!(t.v().pow(n).scale(3i128.pow(n as u32)), t.u().pow(n));
        }
    }

    #[test]
    fn e_is_p_times_v_plus_eps() {
        let f = Frame::from_params(3, 1, 2, 3, 6, 2, 2, "u^2 + 3t*u + 3(1+t)").unwrap();
        let t = TRing::new(&f, 3);
        let rhs = (&t.v() + &t.epsilon().unwrap()).scale(3);
        assert_eq!(t.e_elem().unwrap(), rhs);
    }

    #[test]
    fn base_change_examples() {
        let f = frame(1, "u + 3");
        let s = Ring::series(&f, 2);
        let w = Window::new(1, 0, Matrix::from_rows(&s, vec![vec![&s.one() + &s.u()]])).unwrap();
        let tw = base_change_t(&w).unwrap();
        assert_eq!(tw.a.get(0, 0).to_string(), "1 + 3*v");
        assert!(tw.a.get(0, 0).is_unit());
    }

    #[test]
    fn solver_example() {
        let f = frame(1, "u + 3");
        let s = Ring::series(&f, 2);
        let a1 = Matrix::identity(&s, 1);
        let a2 = Matrix::from_rows(&s, vec![vec![&s.one() + &s.u()]]);
        let sol = solve_iso(&a1, &a2, 1, 0, 2).unwrap();
        let t = TRing::new(&f, 2);
        // X = 1 - 3v, printed with least non-negative residues mod 3^6
        assert_eq!(sol.x.get(0, 0), &(&t.one() - &t.v().scale(3)));
        assert_eq!(sol.x.get(0, 0).to_string(), "1 + 726*v");
        assert_eq!(sol.d_matrix.get(0, 0), &(&t.from_int(-3) + &t.v().scale(9)));
        assert!(sol.residual_zero);
        let same = solve_iso(&a2, &a2, 1, 0, 2).unwrap();
        assert!(same.x.is_identity());
        let y0 = TMatrix::from_fn(&t, 1, 1, |_, _| &t.from_int(5) + &t.v());
        assert_eq!(solve_iso_from(&a1, &a2, 1, 0, 2, &y0).unwrap().x, sol.x);
    }

    #[test]
    fn hypothesis_failure() {
        let f = frame(1, "u + 3");
        let s = Ring::series(&f, 2);
        let a2 = Matrix::from_rows(&s, vec![vec![s.from_int(2)]]);
        assert_eq!(solve_iso(&Matrix::identity(&s, 1), &a2, 1, 0, 2).unwrap_err(), TError::Hypothesis);
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1, 3), 1);
        assert_eq!(nu(3, 3), 2);
        for p in [3, 5, 7] {
            for a in 1..=50 {
                assert!(nu(p * a, p) > a);
            }
        }
    }

    #[test]
    fn series_image() {
        let f = frame(1, "u + 3");
        let t = TRing::new(&f, 2);
        assert!(t.u().in_series_image());
        assert!(!t.v().in_series_image());
        let s = Ring::series(&f, 2);
        assert_eq!(t.u().to_series().unwrap(), s.u());
    }
}
