//! The global arithmetic context: prime, variable counts, Eisenstein-type
//! polynomial `E`, truncation levels and precision caps.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::poly::{monomial_string, Exponent, IntPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("E must be monic of degree e = {e} in u")]
    NotMonic { e: usize },
    #[error("E has a term of u-degree {found} above e = {e}")]
    DegreeTooHigh { e: usize, found: u32 },
    #[error("E uses {found} t-variables but r = {r}")]
    VariableCount { r: usize, found: usize },
    #[error("{0} must be at least 1")]
    ZeroParameter(&'static str),
    #[error("p = {0} is not a prime")]
    NotPrime(u64),
    #[error("p^{prec} does not fit in 63 bits for p = {p}")]
    PrecisionOverflow { p: u64, prec: u32 },
}

/// Raw key/value content of a frame block, before any checking.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    pub p: u64,
    pub r: usize,
    pub e: usize,
    pub a: usize,
    pub prec: u32,
    pub tdeg: usize,
    pub witt_len: usize,
    /// Largest admissible level; `None` means `max(p·a, a + 1)`.
    pub max_level: Option<usize>,
    pub e_poly: IntPoly,
}

/// Monomials `t^α` with `|α| ≤ D`, indexed in graded order, with
/// precomputed product and Frobenius tables.
#[derive(Debug)]
pub struct TBasis {
    exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    mul: Vec<Option<usize>>,
    frob: Vec<Option<usize>>,
}

impl TBasis {
    fn new(r: usize, deg: usize, p: u64) -> TBasis {
        let mut exps = Vec::new();
        for total in 0..=deg {
            let mut cur = vec![0u32; r];
            gen_exps(r, total as u32, 0, &mut cur, &mut exps);
        }
        let index: HashMap<_, _> = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = exps.len();
        let mut mul = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: Vec<u32> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                mul[i * n + j] = index.get(&s).copied();
            }
        }
        let frob = exps
            .iter()
            .map(|e| {
                let s: Vec<u32> = e.iter().map(|a| a * p as u32).collect();
                index.get(&s).copied()
            })
            .collect();
        TBasis { exps, index, mul, frob }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, i: usize) -> &[u32] {
        &self.exps[i]
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> Option<usize> {
        self.mul[i * self.exps.len() + j]
    }

    #[inline]
    pub fn frob(&self, i: usize) -> Option<usize> {
        self.frob[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.exps[i].iter().sum()
    }
}

fn gen_exps(r: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if r == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == r - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    for a in (0..=remaining).rev() {
        cur[pos] = a;
        gen_exps(r, remaining - a, pos + 1, cur, out);
    }
}

/// A validated-shape frame. Invariants of `E` (divisibility by `p`, unit
/// `a0/p`) are *reported* by [`Frame::validate`] rather than enforced, so
/// that invalid inputs can be diagnosed.
#[derive(Debug)]
pub struct Frame {
    p: u64,
    r: usize,
    e: usize,
    a: usize,
    prec: u32,
    tdeg: usize,
    witt_len: usize,
    max_level: usize,
    e_poly: IntPoly,
    /// `a_0..a_{e-1}` as integer coefficient vectors over the t-basis.
    e_low: Vec<Vec<i128>>,
    tbasis: TBasis,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k`, or `None` on overflow past 63 bits.
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
        if acc > (1u64 << 62) {
            return None;
        }
    }
    Some(acc)
}

/// Extra p-adic digits that Witt and display computations carry above `N`.
pub const PRECISION_HEADROOM: u32 = 2;

impl Frame {
    pub fn new(spec: FrameSpec) -> Result<Arc<Frame>, FrameError> {
        let FrameSpec { p, r, e, a, prec, tdeg, witt_len, max_level, e_poly } = spec;
        if e == 0 {
            return Err(FrameError::ZeroParameter("e"));
        }
        if a == 0 {
            return Err(FrameError::ZeroParameter("a"));
        }
        if prec == 0 {
            return Err(FrameError::ZeroParameter("N"));
        }
        if witt_len == 0 {
            return Err(FrameError::ZeroParameter("L"));
        }
        if !is_prime(p) {
            return Err(FrameError::NotPrime(p));
        }
        // Witt lifts work at N + L + headroom digits.
        let top = prec + witt_len as u32 + PRECISION_HEADROOM;
        if checked_pow(p, top).is_none() {
            return Err(FrameError::PrecisionOverflow { p, prec: top });
        }
        if e_poly.r() != r {
            return Err(FrameError::VariableCount { r, found: e_poly.r() });
        }
        if let Some(deg) = e_poly.u_degree() {
            if deg as usize > e {
                return Err(FrameError::DegreeTooHigh { e, found: deg });
            }
        }
        if e_poly.u_coefficient(e as u32) != IntPoly::constant(r, 1) {
            return Err(FrameError::NotMonic { e });
        }
        let tbasis = TBasis::new(r, tdeg, p);
        let mut e_low = vec![vec![0i128; tbasis.len()]; e];
        for (exp, c) in e_poly.terms() {
            let j = exp[r] as usize;
            if j >= e {
                continue;
            }
            // t-terms above the cap are truncated
            if let Some(ti) = tbasis.index_of(&exp[..r]) {
                e_low[j][ti] += c;
            }
        }
        let max_level = max_level.unwrap_or_else(|| (p as usize * a).max(a + 1));
        Ok(Arc::new(Frame { p, r, e, a, prec, tdeg, witt_len, max_level, e_poly, e_low, tbasis }))
    }

    /// Shorthand for tests and examples: parse `E` and build the frame
    /// without checking the `E` invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_params(
        p: u64,
        r: usize,
        e: usize,
        a: usize,
        prec: u32,
        tdeg: usize,
        witt_len: usize,
        e_poly: &str,
    ) -> Result<Arc<Frame>, String> {
        let e_poly = IntPoly::parse(e_poly, r, Some(p)).map_err(|err| err.to_string())?;
        let spec = FrameSpec { p, r, e, a, prec, tdeg, witt_len, max_level: None, e_poly };
        Frame::new(spec).map_err(|err| err.to_string())
    }

    /// Build and require every invariant to hold.
    pub fn checked(spec: FrameSpec) -> Result<Arc<Frame>, String> {
        let f = Frame::new(spec).map_err(|e| e.to_string())?;
        let report = f.validate();
        if report.is_valid() {
            Ok(f)
        } else {
            Err(report.violations.join("; "))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn e(&self) -> usize {
        self.e
    }
    /// Default truncation level.
    pub fn a(&self) -> usize {
        self.a
    }
    /// p-adic precision `N`.
    pub fn prec(&self) -> u32 {
        self.prec
    }
    /// Total t-degree cap `D`.
    pub fn tdeg(&self) -> usize {
        self.tdeg
    }
    pub fn witt_len(&self) -> usize {
        self.witt_len
    }
    pub fn max_level(&self) -> usize {
        self.max_level
    }
    pub fn e_poly(&self) -> &IntPoly {
        &self.e_poly
    }
    pub fn tbasis(&self) -> &TBasis {
        &self.tbasis
    }
    /// Integer coefficients of `a_j` over the t-basis.
    pub fn e_coeff(&self, j: usize) -> &[i128] {
        &self.e_low[j]
    }

    /// p-adic precision of `R/p^aR` at the given level.
    pub fn reduced_prec(&self, level: usize) -> u32 {
        (level as u32).min(self.prec)
    }

    /// Check every frame invariant and report each violation.
    pub fn validate(&self) -> FrameReport {
        let mut violations = Vec::new();
        let p = self.p as i128;
        if self.p < 3 {
            violations.push(format!("p = {} must be an odd prime", self.p));
        }
        if self.a > self.max_level {
            violations.push(format!("a*e = {} exceeds the u-cap {}", self.a * self.e, self.max_level * self.e));
        }
        for j in 0..self.e {
            if self.e_low[j].iter().any(|c| c.rem_euclid(p) != 0) {
                violations.push(format!("a{} not divisible by p", j));
            }
        }
        let a0_const = self.e_low[0][0];
        if a0_const.rem_euclid(p) == 0 && (a0_const / p).rem_euclid(p) == 0 {
            violations.push("a0/p is not a unit".to_string());
        }
        FrameReport { violations }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p = {}, r = {}, e = {}, a = {}, N = {}, D = {}, L = {}, E = {}",
            self.p, self.r, self.e, self.a, self.prec, self.tdeg, self.witt_len, self.e_poly
        )
    }
}

/// Render a t-monomial given by a basis index together with a u-exponent.
pub(crate) fn render_monomial(frame: &Frame, ti: usize, j: usize) -> String {
    let mut exp: Exponent = frame.tbasis.exponent(ti).to_vec();
    exp.push(j as u32);
    monomial_string(&exp)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameReport {
    pub violations: Vec<String>,
}

impl FrameReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Report-style check of a frame; see [`Frame::validate`].
pub fn validate_frame(frame: &Frame) -> FrameReport {
    frame.validate()
}

#[cfg(test)]
pub(crate) fn spec(p: u64, r: usize, e: usize, a: usize, prec: u32, tdeg: usize, l: usize, eq: &str) -> FrameSpec {
    FrameSpec {
        p,
        r,
        e,
        a,
        prec,
        tdeg,
        witt_len: l,
        max_level: None,
        e_poly: IntPoly::parse(eq, r, None).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_linear_frame() {
        let f = Frame::new(spec(3, 0, 1, 2, 6, 0, 2, "u + 3")).unwrap();
        assert!(f.validate().is_valid());
    }

    #[test]
    fn a0_not_divisible() {
        let f = Frame::new(spec(3, 0, 1, 2, 6, 0, 2, "u + 1")).unwrap();
        let rep = f.validate();
        assert!(!rep.is_valid());
        assert!(rep.violations.iter().any(|v| v == "a0 not divisible by p"));
    }

    #[test]
    fn t_dependent_eisenstein() {
        // a1 = 3t, a0/p = 1 + t is a unit
        let f = Frame::new(spec(3, 1, 2, 2, 6, 4, 2, "u^2 + 3t*u + 3(1+t)")).unwrap();
        assert!(f.validate().is_valid());
        let f = Frame::new(spec(3, 1, 2, 2, 6, 4, 2, "u^2 + 9")).unwrap();
        assert_eq!(f.validate().violations, vec!["a0/p is not a unit".to_string()]);
    }

    #[test]
    fn structural_errors() {
        assert_eq!(Frame::new(spec(3, 0, 2, 1, 4, 0, 1, "u + 3")).unwrap_err(), FrameError::NotMonic { e: 2 });
        assert_eq!(Frame::new(spec(4, 0, 1, 1, 4, 0, 1, "u + 4")).unwrap_err(), FrameError::NotPrime(4));
        assert!(matches!(
            Frame::new(spec(7, 0, 1, 1, 30, 0, 1, "u + 7")).unwrap_err(),
            FrameError::PrecisionOverflow { .. }
        ));
    }

    #[test]
    fn tbasis_is_graded() {
        let b = TBasis::new(2, 2, 3);
        assert_eq!(b.len(), 6);
        assert_eq!(b.exponent(0), &[0, 0]);
        assert_eq!(b.degree(5), 2);
        let t1 = b.index_of(&[1, 0]).unwrap();
        assert_eq!(b.mul(t1, t1), b.index_of(&[2, 0]));
        assert_eq!(b.frob(t1), None);
    }
}
