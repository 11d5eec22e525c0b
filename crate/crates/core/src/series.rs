//! Exact arithmetic in truncations of `W(k)[[t_1..t_r, u]]` with `k = F_p`.
//!
//! Three ring shapes share one dense representation (a coefficient per
//! monomial `t^α u^j`, stored as the least non-negative residue mod `p^prec`):
//!
//! * [`RingTag::Series`]: `𝔖_a = 𝔖/(u^{ae})`, truncated at total t-degree `D`;
//! * [`RingTag::Reduced`]: `R/p^aR = 𝔖/(E, p^a)`, elements of u-degree `< e`;
//! * [`RingTag::Constants`]: plain `Z/p^prec`.
//!
//! Precision is a property of the ring, so the same element can be lifted to
//! more p-adic digits (Witt and display code do that) or reduced to fewer.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::frame::{render_monomial, Frame};
use crate::poly::IntPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("operation requires a {0} element")]
    WrongRing(&'static str),
    #[error("coefficient not divisible by p^{0}")]
    NotDivisible(u32),
    #[error("element is not divisible by E")]
    NotDivisibleByE,
    #[error("cannot map {0} into {1}")]
    IncompatibleMap(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    Constants,
    Series { level: usize },
    Reduced { level: usize },
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Constants => write!(f, "Z/p^N"),
            RingTag::Series { level } => write!(f, "S_{}", level),
            RingTag::Reduced { level } => write!(f, "R/p^{}R", level),
        }
    }
}

#[derive(Debug)]
struct RingInner {
    frame: Arc<Frame>,
    tag: RingTag,
    prec: u32,
    modulus: u64,
    nt: usize,
    nu: usize,
    /// `a_j mod p^prec` laid out as `e × nt`.
    e_red: Vec<u64>,
}

/// A concrete coefficient ring: frame, shape and p-adic precision.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, o: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (Arc::ptr_eq(&self.0.frame, &o.0.frame) && self.0.tag == o.0.tag && self.0.prec == o.0.prec)
    }
}
impl Eq for Ring {}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub(crate) fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

pub(crate) fn reduce_i128(c: i128, m: u64) -> u64 {
    c.rem_euclid(m as i128) as u64
}

/// Inverse of a unit residue modulo `m` (extended Euclid).
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero residue.
pub(crate) fn val_p(mut c: u64, p: u64) -> u32 {
    let mut v = 0;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v
}

impl Ring {
    fn build(frame: Arc<Frame>, tag: RingTag, prec: u32) -> Ring {
        let modulus = frame.p().pow(prec);
        let (nt, nu) = match tag {
            RingTag::Constants => (1, 1),
            RingTag::Series { level } => (frame.tbasis().len(), level * frame.e()),
            RingTag::Reduced { .. } => (frame.tbasis().len(), frame.e()),
        };
        let ntb = frame.tbasis().len();
        let mut e_red = vec![0u64; frame.e() * ntb];
        for j in 0..frame.e() {
            for (ti, &c) in frame.e_coeff(j).iter().enumerate() {
                e_red[j * ntb + ti] = reduce_i128(c, modulus);
            }
        }
        Ring(Arc::new(RingInner { frame, tag, prec, modulus, nt, nu, e_red }))
    }

    /// `𝔖_level` at the frame precision `N`.
    pub fn series(frame: &Arc<Frame>, level: usize) -> Ring {
        assert!(level >= 1, "level must be positive");
        Ring::build(frame.clone(), RingTag::Series { level }, frame.prec())
    }

    /// `R/p^level R`, at precision `min(level, N)`.
    pub fn reduced(frame: &Arc<Frame>, level: usize) -> Ring {
        assert!(level >= 1, "level must be positive");
        Ring::build(frame.clone(), RingTag::Reduced { level }, frame.reduced_prec(level))
    }

    /// `Z/p^prec`.
    pub fn constants(frame: &Arc<Frame>, prec: u32) -> Ring {
        Ring::build(frame.clone(), RingTag::Constants, prec)
    }

    /// Same shape, different p-adic precision.
    pub fn with_prec(&self, prec: u32) -> Ring {
        if prec == self.0.prec {
            return self.clone();
        }
        Ring::build(self.0.frame.clone(), self.0.tag, prec)
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.0.frame
    }
    pub fn tag(&self) -> RingTag {
        self.0.tag
    }
    pub fn prec(&self) -> u32 {
        self.0.prec
    }
    pub fn modulus(&self) -> u64 {
        self.0.modulus
    }
    pub fn p(&self) -> u64 {
        self.0.frame.p()
    }
    /// Number of t-monomials stored.
    pub fn nt(&self) -> usize {
        self.0.nt
    }
    /// Number of u-powers stored.
    pub fn nu(&self) -> usize {
        self.0.nu
    }
    pub fn level(&self) -> Option<usize> {
        match self.0.tag {
            RingTag::Series { level } | RingTag::Reduced { level } => Some(level),
            RingTag::Constants => None,
        }
    }

    pub fn zero(&self) -> SeriesElem {
        SeriesElem { ring: self.clone(), c: vec![0; self.0.nt * self.0.nu] }
    }

    pub fn one(&self) -> SeriesElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i128) -> SeriesElem {
        let mut z = self.zero();
        z.c[0] = reduce_i128(n, self.0.modulus);
        z
    }

    /// `c · t^{exp} u^j`, dropped if beyond the caps.
    pub fn monomial(&self, texp: &[u32], j: usize, c: i128) -> SeriesElem {
        let mut exp = texp.to_vec();
        exp.push(j as u32);
        self.from_poly(&IntPoly::monomial(exp, c))
    }

    pub fn u(&self) -> SeriesElem {
        let r = self.0.frame.r();
        self.monomial(&vec![0; r], 1, 1)
    }

    /// The t-variable `t_{i+1}`.
    pub fn t(&self, i: usize) -> SeriesElem {
        let r = self.0.frame.r();
        let mut exp = vec![0; r];
        exp[i] = 1;
        self.monomial(&exp, 0, 1)
    }

    /// Image of an integer polynomial; t-terms beyond `D` are dropped, u-powers
    /// beyond the cap are dropped (series) or reduced modulo `E` (reduced ring).
    pub fn from_poly(&self, poly: &IntPoly) -> SeriesElem {
        let frame = &self.0.frame;
        let r = frame.r();
        let m = self.0.modulus;
        match self.0.tag {
            RingTag::Reduced { .. } => {
                let maxj = poly.u_degree().unwrap_or(0) as usize + 1;
                let nt = self.0.nt;
                let mut buf = vec![0u64; nt * maxj.max(self.0.nu)];
                for (exp, c) in poly.terms() {
                    if let Some(ti) = frame.tbasis().index_of(&exp[..r]) {
                        let k = exp[r] as usize * nt + ti;
                        buf[k] = addmod(buf[k], reduce_i128(c, m), m);
                    }
                }
                self.reduce_buffer(buf)
            }
            _ => {
                let mut z = self.zero();
                for (exp, c) in poly.terms() {
                    let j = exp[r] as usize;
                    if j >= self.0.nu {
                        continue;
                    }
                    let ti = match frame.tbasis().index_of(&exp[..r]) {
                        Some(ti) if ti < self.0.nt => ti,
                        _ => continue,
                    };
                    let k = j * self.0.nt + ti;
                    z.c[k] = addmod(z.c[k], reduce_i128(c, m), m);
                }
                z
            }
        }
    }

    /// `E` in this ring.
    pub fn e_elem(&self) -> SeriesElem {
        self.from_poly(self.0.frame.e_poly())
    }

    /// `ε = (E - u^e)/p`, computed from the integer coefficients.
    pub fn epsilon(&self) -> SeriesElem {
        let frame = &self.0.frame;
        let p = frame.p() as i128;
        let mut poly = IntPoly::zero(frame.r());
        for (exp, c) in frame.e_poly().terms() {
            if exp[frame.r()] as usize != frame.e() {
                poly.add_term(exp.clone(), c.div_euclid(p));
            }
        }
        self.from_poly(&poly)
    }

    /// Divide a buffer of length `nt × J` (any J) by the monic `E`, keeping the remainder.
    fn reduce_buffer(&self, mut buf: Vec<u64>) -> SeriesElem {
        let nt = self.0.nt;
        let e = self.0.frame.e();
        let m = self.0.modulus;
        let tb = self.0.frame.tbasis();
        let top = buf.len() / nt;
        for j in (e..top).rev() {
            for ti in 0..nt {
                let c = buf[j * nt + ti];
                if c == 0 {
                    continue;
                }
                buf[j * nt + ti] = 0;
                // u^j t^ti = -Σ a_i u^{j-e+i} t^ti
                for i in 0..e {
                    for tj in 0..nt {
                        let a = self.0.e_red[i * nt + tj];
                        if a == 0 {
                            continue;
                        }
                        if let Some(tk) = tb.mul(ti, tj) {
                            let k = (j - e + i) * nt + tk;
                            buf[k] = submod(buf[k], mulmod(a, c, m), m);
                        }
                    }
                }
            }
        }
        buf.truncate(e * nt);
        SeriesElem { ring: self.clone(), c: buf }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod p^{}", self.0.tag, self.0.prec)
    }
}

/// An element of a [`Ring`]. Immutable in spirit; all operations return new values.
#[derive(Clone, Debug)]
pub struct SeriesElem {
    ring: Ring,
    c: Vec<u64>,
}

impl PartialEq for SeriesElem {
    fn eq(&self, o: &SeriesElem) -> bool {
        self.ring == o.ring && self.c == o.c
    }
}
impl Eq for SeriesElem {}

impl SeriesElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Coefficient of `t^{basis index ti} u^j`.
    pub fn coeff(&self, ti: usize, j: usize) -> u64 {
        self.c[j * self.ring.0.nt + ti]
    }

    /// Nonzero terms as `(t-basis index, u-exponent, residue)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let nt = self.ring.0.nt;
        self.c.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(k, &v)| (k % nt, k / nt, v))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn constant_term(&self) -> u64 {
        self.c[0]
    }

    fn check(&self, o: &SeriesElem) -> Result<(), SeriesError> {
        if self.ring != o.ring {
            return Err(SeriesError::RingMismatch(self.ring.to_string(), o.ring.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &SeriesElem) -> Result<SeriesElem, SeriesError> {
        self.check(o)?;
        let m = self.ring.0.modulus;
        let c = self.c.iter().zip(&o.c).map(|(&a, &b)| addmod(a, b, m)).collect();
        Ok(SeriesElem { ring: self.ring.clone(), c })
    }

    pub fn checked_sub(&self, o: &SeriesElem) -> Result<SeriesElem, SeriesError> {
        self.check(o)?;
        let m = self.ring.0.modulus;
        let c = self.c.iter().zip(&o.c).map(|(&a, &b)| submod(a, b, m)).collect();
        Ok(SeriesElem { ring: self.ring.clone(), c })
    }

    pub fn checked_mul(&self, o: &SeriesElem) -> Result<SeriesElem, SeriesError> {
        self.check(o)?;
        let ring = &self.ring.0;
        let (nt, nu, m) = (ring.nt, ring.nu, ring.modulus);
        let tb = ring.frame.tbasis();
        let reduced = matches!(ring.tag, RingTag::Reduced { .. });
        let width = if reduced { 2 * nu - 1 } else { nu };
        let mut acc = vec![0u64; nt * width];
        let xs: Vec<(usize, usize, u64)> = self.terms().collect();
        let ys: Vec<(usize, usize, u64)> = o.terms().collect();
        for &(tx, jx, cx) in &xs {
            for &(ty, jy, cy) in &ys {
                let j = jx + jy;
                if j >= width {
                    continue;
                }
                if let Some(t) = tb.mul(tx, ty) {
                    if t >= nt {
                        continue;
                    }
                    let k = j * nt + t;
                    acc[k] = addmod(acc[k], mulmod(cx, cy, m), m);
                }
            }
        }
        if reduced {
            Ok(self.ring.reduce_buffer(acc))
        } else {
            Ok(SeriesElem { ring: self.ring.clone(), c: acc })
        }
    }

    pub fn neg(&self) -> SeriesElem {
        let m = self.ring.0.modulus;
        SeriesElem { ring: self.ring.clone(), c: self.c.iter().map(|&a| submod(0, a, m)).collect() }
    }

    pub fn scale(&self, k: i128) -> SeriesElem {
        let m = self.ring.0.modulus;
        let k = reduce_i128(k, m);
        SeriesElem { ring: self.ring.clone(), c: self.c.iter().map(|&a| mulmod(a, k, m)).collect() }
    }

    pub fn pow(&self, mut k: u64) -> SeriesElem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Units of these local rings are exactly the elements whose constant
    /// term is nonzero mod `p`.
    pub fn is_unit(&self) -> bool {
        !self.c[0].is_multiple_of(self.ring.p())
    }

    /// Exact inverse: start from the inverse of the constant term and run
    /// Newton steps `y ← y(2 - xy)`; the maximal ideal is nilpotent here.
    pub fn invert(&self) -> Result<SeriesElem, SeriesError> {
        if !self.is_unit() {
            return Err(SeriesError::NotUnit);
        }
        let m = self.ring.0.modulus;
        let mut y = self.ring.from_int(inv_mod(self.c[0], m).expect("unit constant term") as i128);
        let two = self.ring.from_int(2);
        let one = self.ring.one();
        // precision at least doubles each step
        for _ in 0..64 {
            let xy = self * &y;
            if xy == one {
                return Ok(y);
            }
            y = &y * &(&two - &xy);
        }
        unreachable!("Newton iteration for the inverse did not terminate")
    }

    /// σ: `t_i ↦ t_i^p`, `u ↦ u^p`, coefficients fixed (k = F_p).
    /// Monomials pushed beyond the caps vanish; σ is still a ring
    /// endomorphism of the truncated ring, but loses the information in them.
    pub fn frobenius(&self) -> Result<SeriesElem, SeriesError> {
        let ring = &self.ring.0;
        if matches!(ring.tag, RingTag::Reduced { .. }) {
            return Err(SeriesError::WrongRing("series or constant"));
        }
        let p = ring.frame.p() as usize;
        let tb = ring.frame.tbasis();
        let mut out = self.ring.zero();
        for (ti, j, c) in self.terms() {
            let jj = j * p;
            if jj >= ring.nu {
                continue;
            }
            if let Some(t) = tb.frob(ti) {
                if t < ring.nt {
                    out.c[jj * ring.nt + t] = c;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_iter(&self, n: usize) -> Result<SeriesElem, SeriesError> {
        let mut x = self.clone();
        for _ in 0..n {
            x = x.frobenius()?;
        }
        Ok(x)
    }

    /// Canonical image in `R/p^aR`: the remainder of division by the u-monic `E`.
    pub fn reduce_mod_e(&self) -> Result<SeriesElem, SeriesError> {
        let level = match self.ring.0.tag {
            RingTag::Series { level } => level,
            _ => return Err(SeriesError::WrongRing("series")),
        };
        let frame = self.ring.frame();
        let target = Ring::reduced(frame, level).with_prec(frame.reduced_prec(level).min(self.ring.prec()));
        let m = target.modulus();
        let buf = self.c.iter().map(|&v| v % m).collect();
        Ok(target.reduce_buffer(buf))
    }

    /// Divide every coefficient by `p^k`, failing if one is not divisible.
    /// The result is only meaningful modulo `p^{prec-k}`.
    pub fn div_p_pow(&self, k: u32) -> Result<SeriesElem, SeriesError> {
        let d = self.ring.p().pow(k);
        let mut out = self.clone();
        for v in out.c.iter_mut() {
            if *v % d != 0 {
                return Err(SeriesError::NotDivisible(k));
            }
            *v /= d;
        }
        Ok(out)
    }

    /// Minimal p-adic valuation over all coefficients; `None` for zero.
    pub fn p_valuation(&self) -> Option<u32> {
        let p = self.ring.p();
        self.c.iter().filter(|&&v| v != 0).map(|&v| val_p(v, p)).min()
    }

    /// Smallest u-exponent with a nonzero coefficient.
    pub fn u_valuation(&self) -> Option<usize> {
        self.terms().map(|(_, j, _)| j).min()
    }

    /// `x / u^k` for a series element divisible by `u^k`.
    pub fn shift_u_down(&self, k: usize) -> Option<SeriesElem> {
        if !matches!(self.ring.0.tag, RingTag::Series { .. }) {
            return None;
        }
        if self.u_valuation().is_some_and(|v| v < k) {
            return None;
        }
        let nt = self.ring.0.nt;
        let mut out = self.ring.zero();
        for (ti, j, c) in self.terms() {
            out.c[(j - k) * nt + ti] = c;
        }
        Some(out)
    }

    /// Map into another ring of the same frame: change of precision, level
    /// truncation for series, lift of canonical representatives, or the
    /// embedding of constants.
    pub fn coerce(&self, target: &Ring) -> Result<SeriesElem, SeriesError> {
        if !Arc::ptr_eq(self.ring.frame(), target.frame()) {
            return Err(SeriesError::IncompatibleMap(self.ring.to_string(), target.to_string()));
        }
        let m = target.modulus();
        let (snt, tnt) = (self.ring.0.nt, target.0.nt);
        let ok = match (self.ring.0.tag, target.0.tag) {
            (RingTag::Constants, _) => true,
            (_, RingTag::Constants) => false,
            (RingTag::Series { .. }, RingTag::Series { .. }) => true,
            (RingTag::Reduced { .. }, RingTag::Reduced { .. }) => true,
            (RingTag::Reduced { .. }, RingTag::Series { .. }) => true,
            (RingTag::Series { .. }, RingTag::Reduced { .. }) => false,
        };
        if !ok {
            return Err(SeriesError::IncompatibleMap(self.ring.to_string(), target.to_string()));
        }
        let mut out = target.zero();
        for (ti, j, c) in self.terms() {
            if j >= target.0.nu || ti >= tnt {
                continue;
            }
            out.c[j * tnt + ti] = c % m;
        }
        let _ = snt;
        Ok(out)
    }

    /// Lift to `prec` digits keeping the canonical representatives.
    pub fn lift_prec(&self, prec: u32) -> SeriesElem {
        self.coerce(&self.ring.with_prec(prec)).expect("same shape")
    }

    /// Exact division by `E` in `𝔖_a`.
    ///
    /// Write `z = qE + r` with `deg_u r < e`. In `𝔖_a` one has `p^a ∈ E·𝔖_a`
    /// (since `u^{ae} = 0`), so `z ∈ E·𝔖_a` forces `r = p^a r'` and then
    /// `z = E(q + H r')` with `H = p^a / E`.
    pub fn div_by_e(&self) -> Result<SeriesElem, SeriesError> {
        let level = match self.ring.0.tag {
            RingTag::Series { level } => level,
            _ => return Err(SeriesError::WrongRing("series")),
        };
        let ring = &self.ring;
        let (nt, e, m) = (ring.0.nt, ring.frame().e(), ring.0.modulus);
        let tb = ring.frame().tbasis();
        let mut rem = self.c.clone();
        let mut quo = ring.zero();
        for j in (e..ring.0.nu).rev() {
            for ti in 0..nt {
                let c = rem[j * nt + ti];
                if c == 0 {
                    continue;
                }
                rem[j * nt + ti] = 0;
                quo.c[(j - e) * nt + ti] = c;
                for i in 0..e {
                    for tj in 0..nt {
                        let a = ring.0.e_red[i * nt + tj];
                        if a == 0 {
                            continue;
                        }
                        if let Some(tk) = tb.mul(ti, tj) {
                            let k = (j - e + i) * nt + tk;
                            rem[k] = submod(rem[k], mulmod(a, c, m), m);
                        }
                    }
                }
            }
        }
        let r = SeriesElem { ring: ring.clone(), c: rem };
        if r.is_zero() {
            return Ok(quo);
        }
        let a = level as u32;
        if a >= ring.prec() {
            return Err(SeriesError::NotDivisibleByE);
        }
        let r1 = r.div_p_pow(a).map_err(|_| SeriesError::NotDivisibleByE)?;
        Ok(&quo + &(&p_pow_over_e(ring) * &r1))
    }
}

/// `H = p^a / E` in `𝔖_a`: from `0 = u^{ae} = (E - pε)^a = E·G + (-pε)^a`,
/// `H = -G·(-ε)^{-a}`.
pub(crate) fn p_pow_over_e(ring: &Ring) -> SeriesElem {
    let a = ring.level().expect("series ring") as u64;
    let e = ring.e_elem();
    let pe = ring.epsilon().scale(-(ring.p() as i128)); // -pε
    let mut g = ring.zero();
    let mut binom: i128 = 1;
    for k in 1..=a {
        binom = binom * (a - k + 1) as i128 / k as i128;
        let term = &e.pow(k - 1) * &pe.pow(a - k);
        g = &g + &term.scale(binom);
    }
    let neg_eps_inv = ring.epsilon().neg().invert().expect("epsilon is a unit");
    (&g * &neg_eps_inv.pow(a)).neg()
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a SeriesElem> for &'a SeriesElem {
            type Output = SeriesElem;
            fn $m(self, o: &'a SeriesElem) -> SeriesElem {
                self.$checked(o).expect("ring mismatch in series arithmetic")
            }
        }
        impl $tr<SeriesElem> for SeriesElem {
            type Output = SeriesElem;
            fn $m(self, o: SeriesElem) -> SeriesElem {
                self.$checked(&o).expect("ring mismatch in series arithmetic")
            }
        }
    };
}
forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &SeriesElem {
    type Output = SeriesElem;
    fn neg(self) -> SeriesElem {
        SeriesElem::neg(self)
    }
}

/// Graded lexicographic order on `(t_1..t_r, u)`: lower total degree first,
/// then larger exponent vectors first.
pub(crate) fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b.cmp(a))
}

impl fmt::Display for SeriesElem {
    /// Canonical rendering: terms in ascending graded-lex order, coefficients
    /// as least non-negative residues.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let frame = self.ring.frame();
        let mut terms: Vec<(Vec<u32>, usize, usize, u64)> = self
            .terms()
            .map(|(ti, j, c)| {
                let mut exp = frame.tbasis().exponent(ti).to_vec();
                exp.push(j as u32);
                (exp, ti, j, c)
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| grlex(&a.0, &b.0));
        let parts: Vec<String> = terms
            .iter()
            .map(|(_, ti, j, c)| {
                let mono = render_monomial(frame, *ti, *j);
                if mono.is_empty() {
                    c.to_string()
                } else if *c == 1 {
                    mono
                } else {
                    format!("{}*{}", c, mono)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{spec, Frame};

    fn frame(p: u64, r: usize, e: usize, a: usize, n: u32, d: usize, eq: &str) -> Arc<Frame> {
        Frame::new(spec(p, r, e, a, n, d, 2, eq)).unwrap()
    }

    #[test]
    fn add_u_and_three() {
        // with e = 1 the ring S_1 kills u, so use e = 2
        let f = frame(3, 0, 2, 1, 4, 0, "u^2 + 3");
        let s = Ring::series(&f, 1);
        assert_eq!((&s.u() + &s.from_int(3)).to_string(), "3 + u");
    }

    #[test]
    fn u_squared_truncates() {
        let f = frame(3, 0, 1, 1, 4, 0, "u + 3");
        let s = Ring::series(&f, 1);
        assert!((&s.u() * &s.u()).is_zero());
    }

    #[test]
    fn t_cap_product() {
        // (1+t)(1-t) = 1 - t^2 with D = 4; schoolbook oracle by hand
        let f = frame(3, 1, 1, 1, 4, 4, "u + 3");
        let s = Ring::series(&f, 1);
        let t = s.t(0);
        let x = &(&s.one() + &t) * &(&s.one() - &t);
        let expect = &s.one() - &(&t * &t);
        assert_eq!(x, expect);
        assert_eq!(x.to_string(), "1 + 80*t1^2");
    }

    #[test]
    fn frobenius_examples() {
        let f = frame(3, 1, 1, 4, 4, 6, "u + 3");
        let s = Ring::series(&f, 4);
        assert_eq!(s.u().frobenius().unwrap(), s.u().pow(3));
        assert_eq!(s.from_int(7).frobenius().unwrap(), s.from_int(7));
        let x = &s.t(0) + &s.u();
        assert_eq!(x.frobenius().unwrap(), &s.t(0).pow(3) + &s.u().pow(3));
        assert!(Ring::reduced(&f, 4).u().frobenius().is_err());
    }

    #[test]
    fn reduce_mod_e_examples() {
        // p=3, e=1, E=u+3: u^2 -> 9 (u = -3)
        let f = frame(3, 0, 1, 3, 6, 0, "u + 3");
        let s = Ring::series(&f, 3);
        let r = (&s.u() * &s.u()).reduce_mod_e().unwrap();
        assert_eq!(r, Ring::reduced(&f, 3).from_int(9));
        assert!(s.e_elem().reduce_mod_e().unwrap().is_zero());
        // p=3, e=2, E=u^2+3: u^3 -> -3u
        let f = frame(3, 0, 2, 2, 6, 0, "u^2 + 3");
        let s = Ring::series(&f, 2);
        let r = s.u().pow(3).reduce_mod_e().unwrap();
        assert_eq!(r, Ring::reduced(&f, 2).u().scale(-3));
        assert_eq!(r.ring().prec(), 2);
    }

    #[test]
    fn inverse_geometric_series() {
        let f = frame(3, 0, 1, 4, 5, 0, "u + 3");
        let s = Ring::series(&f, 4);
        let x = &s.one() + &s.u();
        let inv = x.invert().unwrap();
        // 1 - u + u^2 - u^3
        let mut expect = s.zero();
        for j in 0..4 {
            expect = &expect + &s.u().pow(j).scale(if j % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(inv, expect);
        assert!(!s.from_int(3).is_unit());
        assert_eq!(s.from_int(3).invert().unwrap_err(), SeriesError::NotUnit);
        assert!(s.epsilon().is_unit());
        assert_eq!(s.epsilon(), s.one());
    }

    #[test]
    fn division_by_e() {
        let f = frame(3, 1, 2, 3, 6, 3, "u^2 + 3t*u + 3(1+t)");
        let s = Ring::series(&f, 3);
        let h = p_pow_over_e(&s);
        assert_eq!(&h * &s.e_elem(), s.from_int(27));
        let y = &s.one() + &(&s.u() * &s.t(0));
        let z = &y * &s.e_elem();
        let q = z.div_by_e().unwrap();
        assert_eq!(&q * &s.e_elem(), z);
        assert_eq!(s.one().div_by_e().unwrap_err(), SeriesError::NotDivisibleByE);
    }

    #[test]
    fn mismatched_rings() {
        let f = frame(3, 0, 1, 2, 4, 0, "u + 3");
        let a = Ring::series(&f, 1).one();
        let b = Ring::series(&f, 2).one();
        assert!(matches!(a.checked_add(&b), Err(SeriesError::RingMismatch(..))));
    }
}
