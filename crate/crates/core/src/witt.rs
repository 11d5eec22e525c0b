//! Truncated p-typical Witt vectors over the rings of [`crate::series`].
//!
//! Arithmetic goes through ghost components. Every ring used here is a
//! quotient of a p-torsion-free ring by `p^k` (plus ideals that σ and the
//! Witt polynomials respect), so a vector of length `L` is lifted to
//! `L - 1` extra p-adic digits, combined ghost-wise, and recovered by the
//! recursion `x_n = (w_n - Σ_{i<n} p^i x_i^{p^{n-i}}) / p^n`, whose
//! divisions are exact.
//!
//! At finite length and nilpotent truncation, `Ŵ` and `W` coincide, so
//! plain truncated vectors are used throughout.

use std::fmt;

use thiserror::Error;

use crate::frame::Frame;
use crate::poly::IntPoly;
use crate::series::{Ring, RingTag, SeriesElem, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WittError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("Witt length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("Witt vector must have at least one component")]
    Empty,
    #[error("ghost recursion: component {0} is not divisible by p^{0}")]
    NotDivisible(usize),
    #[error("{0}")]
    Precision(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVec {
    comps: Vec<SeriesElem>,
}

/// `x^{p^k}` for `k = 0..=top`.
fn p_powers(x: &SeriesElem, p: u64, top: usize) -> Vec<SeriesElem> {
    let mut out = Vec::with_capacity(top + 1);
    out.push(x.clone());
    for k in 1..=top {
        let next = out[k - 1].pow(p);
        out.push(next);
    }
    out
}

/// Ghost components of `comps`, computed in the ring of the components.
fn ghosts_of(comps: &[SeriesElem]) -> Vec<SeriesElem> {
    let ring = comps[0].ring().clone();
    let p = ring.p();
    let len = comps.len();
    let pows: Vec<Vec<SeriesElem>> = comps.iter().enumerate().map(|(i, x)| p_powers(x, p, len - 1 - i)).collect();
    (0..len)
        .map(|n| {
            let mut acc = ring.zero();
            for (i, pw) in pows.iter().enumerate().take(n + 1) {
                acc = &acc + &pw[n - i].scale((p as i128).pow(i as u32));
            }
            acc
        })
        .collect()
}

/// Invert the ghost map over a lifted ring and reduce into `target`.
///
/// `ghosts` must be exact modulo the modulus of their ring, and that ring
/// must carry at least `len - 1` more digits than `target`.
pub(crate) fn from_ghost(ghosts: &[SeriesElem], target: &Ring) -> Result<WittVec, WittError> {
    if ghosts.is_empty() {
        return Err(WittError::Empty);
    }
    let lift = ghosts[0].ring().clone();
    let len = ghosts.len();
    if lift.prec() + 1 < target.prec() + len as u32 {
        return Err(WittError::Precision(format!(
            "ghost inversion needs {} digits, have {}",
            target.prec() + len as u32 - 1,
            lift.prec()
        )));
    }
    let p = lift.p();
    let mut comps: Vec<SeriesElem> = Vec::with_capacity(len);
    for n in 0..len {
        let mut rest = ghosts[n].clone();
        for (i, x) in comps.iter().enumerate() {
            let term = x.pow(p.pow((n - i) as u32)).scale((p as i128).pow(i as u32));
            rest = &rest - &term;
        }
        let xn = rest.div_p_pow(n as u32).map_err(|_| WittError::NotDivisible(n))?;
        comps.push(xn);
    }
    let comps = comps.iter().map(|x| x.coerce(target)).collect::<Result<Vec<_>, _>>()?;
    Ok(WittVec { comps })
}

impl WittVec {
    pub fn new(comps: Vec<SeriesElem>) -> Result<WittVec, WittError> {
        if comps.is_empty() {
            return Err(WittError::Empty);
        }
        let ring = comps[0].ring().clone();
        if let Some(bad) = comps.iter().find(|x| x.ring() != &ring) {
            return Err(SeriesError::RingMismatch(ring.to_string(), bad.ring().to_string()).into());
        }
        Ok(WittVec { comps })
    }

    pub fn zero(ring: &Ring, len: usize) -> WittVec {
        WittVec { comps: vec![ring.zero(); len] }
    }

    /// `[x] = (x, 0, 0, ..)`.
    pub fn teichmuller(x: &SeriesElem, len: usize) -> WittVec {
        let mut comps = vec![x.ring().zero(); len];
        comps[0] = x.clone();
        WittVec { comps }
    }

    pub fn one(ring: &Ring, len: usize) -> WittVec {
        WittVec::teichmuller(&ring.one(), len)
    }

    /// Image of the integer `n` under `Z → W(ring)`.
    pub fn from_int(ring: &Ring, len: usize, n: i128) -> WittVec {
        let lift = ring.with_prec(ring.prec() + len as u32 - 1);
        let ghosts = vec![lift.from_int(n); len];
        from_ghost(&ghosts, ring).expect("integers have exact ghost recursion")
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ring(&self) -> &Ring {
        self.comps[0].ring()
    }

    pub fn components(&self) -> &[SeriesElem] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &SeriesElem {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|x| x.is_zero())
    }

    /// A Witt vector is a unit exactly when its first component is.
    pub fn is_unit(&self) -> bool {
        self.comps[0].is_unit()
    }

    /// `𝐰_n(x) = Σ_{i≤n} p^i x_i^{p^{n-i}}`, evaluated in the ring of `x`.
    pub fn ghost(&self) -> Vec<SeriesElem> {
        ghosts_of(&self.comps)
    }

    fn lift_ring(&self) -> Ring {
        self.ring().with_prec(self.ring().prec() + self.len() as u32 - 1)
    }

    fn lifted_ghosts(&self, lift: &Ring) -> Vec<SeriesElem> {
        let comps: Vec<SeriesElem> = self.comps.iter().map(|x| x.coerce(lift).expect("same shape")).collect();
        ghosts_of(&comps)
    }

    fn check(&self, o: &WittVec) -> Result<(), WittError> {
        if self.len() != o.len() {
            return Err(WittError::LengthMismatch(self.len(), o.len()));
        }
        if self.ring() != o.ring() {
            return Err(SeriesError::RingMismatch(self.ring().to_string(), o.ring().to_string()).into());
        }
        Ok(())
    }

    fn combine(
        &self,
        o: &WittVec,
        f: impl Fn(&SeriesElem, &SeriesElem) -> SeriesElem,
    ) -> Result<WittVec, WittError> {
        self.check(o)?;
        let lift = self.lift_ring();
        let gx = self.lifted_ghosts(&lift);
        let gy = o.lifted_ghosts(&lift);
        let g: Vec<SeriesElem> = gx.iter().zip(&gy).map(|(a, b)| f(a, b)).collect();
        from_ghost(&g, self.ring())
    }

    pub fn add(&self, o: &WittVec) -> Result<WittVec, WittError> {
        self.combine(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &WittVec) -> Result<WittVec, WittError> {
        self.combine(o, |a, b| a - b)
    }

    pub fn mul(&self, o: &WittVec) -> Result<WittVec, WittError> {
        self.combine(o, |a, b| a * b)
    }

    pub fn neg(&self) -> WittVec {
        WittVec::zero(self.ring(), self.len()).sub(self).expect("same ring")
    }

    pub fn scale_int(&self, n: i128) -> WittVec {
        self.mul(&WittVec::from_int(self.ring(), self.len(), n)).expect("same ring")
    }

    /// Witt Frobenius `F`, with ghost components `(𝐰_1, 𝐰_2, ..)`. The last
    /// ghost component is not determined by `L` components, so the result
    /// has length `L - 1`.
    pub fn frobenius(&self) -> Result<WittVec, WittError> {
        if self.len() < 2 {
            return Err(WittError::Precision("F needs Witt length at least 2".into()));
        }
        let lift = self.lift_ring();
        let g = self.lifted_ghosts(&lift);
        from_ghost(&g[1..], self.ring())
    }

    /// Verschiebung `V(x) = (0, x_0, .., x_{L-2})`, ghost `(0, p𝐰_0, p𝐰_1, ..)`.
    pub fn verschiebung(&self) -> WittVec {
        let mut comps = vec![self.ring().zero()];
        comps.extend(self.comps[..self.len() - 1].iter().cloned());
        WittVec { comps }
    }

    pub fn truncate(&self, len: usize) -> WittVec {
        assert!(len >= 1 && len <= self.len(), "bad truncation length");
        WittVec { comps: self.comps[..len].to_vec() }
    }

    /// Component-wise image under a ring map (`W` is a functor).
    pub fn coerce(&self, ring: &Ring) -> Result<WittVec, WittError> {
        let comps = self.comps.iter().map(|x| x.coerce(ring)).collect::<Result<Vec<_>, _>>()?;
        Ok(WittVec { comps })
    }

    /// Component-wise `𝔖_a → R/p^aR`.
    pub fn reduce_mod_e(&self) -> Result<WittVec, WittError> {
        let comps = self.comps.iter().map(|x| x.reduce_mod_e()).collect::<Result<Vec<_>, _>>()?;
        Ok(WittVec { comps })
    }
}

impl fmt::Display for WittVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `δ(x)`: the unique lift with `𝐰_n(δ(x)) = σ^n(x)`, a ring homomorphism
/// `𝔖_a → W_L(𝔖_a)`. Works at `N + L - 1` digits, reports at `N`.
pub fn delta(x: &SeriesElem, len: usize) -> Result<WittVec, WittError> {
    if len == 0 {
        return Err(WittError::Empty);
    }
    if matches!(x.ring().tag(), RingTag::Reduced { .. }) {
        return Err(SeriesError::WrongRing("series or constant").into());
    }
    let lift = x.ring().with_prec(x.ring().prec() + len as u32 - 1);
    let mut g = Vec::with_capacity(len);
    let mut cur = x.lift_prec(lift.prec());
    for n in 0..len {
        if n > 0 {
            cur = cur.frobenius()?;
        }
        g.push(cur.clone());
    }
    from_ghost(&g, x.ring())
}

/// `κ(x)`: `δ(x)` followed by reduction modulo `E`, landing in `W_L(R/p^aR)`.
pub fn kappa(x: &SeriesElem, len: usize) -> Result<WittVec, WittError> {
    delta(x, len)?.reduce_mod_e()
}

/// Image of `σ^k(E)` in `R̃ = ring` (a reduced ring), computed by
/// substituting `t ↦ t^{p^k}`, `u ↦ u^{p^k}` and reducing `u`-powers by `E`.
fn sigma_pow_e_reduced(frame: &Frame, ring: &Ring, k: u32) -> SeriesElem {
    let q = frame.p().pow(k);
    let r = frame.r();
    let uq = ring.u().pow(q);
    let mut acc = ring.zero();
    for (exp, c) in frame.e_poly().terms() {
        let texp: Vec<u32> = exp[..r].iter().map(|&a| a * q as u32).collect();
        let mut tpart = IntPoly::monomial(texp.iter().copied().chain([0]).collect(), c);
        if texp.iter().any(|&a| a as usize > frame.tdeg()) {
            tpart = IntPoly::zero(r);
        }
        let term = &ring.from_poly(&tpart) * &uq.pow(exp[r] as u64);
        acc = &acc + &term;
    }
    acc
}

/// `τ = κ_∞(σ(E)) / p`, reduced to `W_L(R/p^{level}R)`.
///
/// `R` is p-torsion free, so `τ` is recovered from its ghost components
/// `σ^{n+1}(E)/p mod E`, computed in `R` at `min(level, N) + L` digits.
pub fn tau(frame: &std::sync::Arc<Frame>, level: usize, len: usize) -> Result<WittVec, WittError> {
    if len == 0 {
        return Err(WittError::Empty);
    }
    let target = Ring::reduced(frame, level);
    let work = target.with_prec(target.prec() + len as u32);
    let mut ghosts = Vec::with_capacity(len);
    let below = target.with_prec(work.prec() - 1);
    for n in 0..len {
        let g = sigma_pow_e_reduced(frame, &work, n as u32 + 1);
        let g = g.div_p_pow(1).map_err(|_| WittError::NotDivisible(n))?;
        ghosts.push(g.coerce(&below)?);
    }
    from_ghost(&ghosts, &target)
}
