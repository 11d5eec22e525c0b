//! Universal Witt addition and multiplication polynomials `S_n`, `P_n`.
//!
//! The coefficients are integers, but they grow quickly (`p = 5`, `n = 3`
//! already needs more than 128 bits in intermediate steps), so the table is
//! built and stored modulo `p^prec`. That is all an evaluation over a ring of
//! characteristic dividing `p^prec` can see. The recursion works with
//! `len - 1` extra digits so that its divisions by `p^n` stay exact.

use std::collections::BTreeMap;
use std::fmt;

use crate::series::{addmod, mulmod, submod, SeriesElem};
use crate::witt::{WittError, WittVec};

/// A polynomial in `x_0..x_{L-1}, y_0..y_{L-1}` with coefficients mod `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittPoly {
    len: usize,
    modulus: u64,
    terms: BTreeMap<Vec<u16>, u64>,
}

impl WittPoly {
    fn zero(len: usize, modulus: u64) -> WittPoly {
        WittPoly { len, modulus, terms: BTreeMap::new() }
    }

    fn var(len: usize, modulus: u64, k: usize) -> WittPoly {
        let mut exp = vec![0u16; 2 * len];
        exp[k] = 1;
        let mut p = WittPoly::zero(len, modulus);
        p.terms.insert(exp, 1);
        p
    }

    fn add_term(&mut self, exp: Vec<u16>, c: u64) {
        let m = self.modulus;
        let v = self.terms.entry(exp.clone()).or_insert(0);
        *v = addmod(*v, c % m, m);
        if *v == 0 {
            self.terms.remove(&exp);
        }
    }

    fn add(&self, o: &WittPoly) -> WittPoly {
        let mut out = self.clone();
        for (e, &c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    fn sub(&self, o: &WittPoly) -> WittPoly {
        let mut out = self.clone();
        for (e, &c) in &o.terms {
            out.add_term(e.clone(), submod(0, c, self.modulus));
        }
        out
    }

    fn scale(&self, k: u64) -> WittPoly {
        let mut out = WittPoly::zero(self.len, self.modulus);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), mulmod(c, k % self.modulus, self.modulus));
        }
        out
    }

    fn mul(&self, o: &WittPoly) -> WittPoly {
        let m = self.modulus;
        let mut acc: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = acc.entry(e).or_insert(0);
                *v = addmod(*v, mulmod(c1, c2, m), m);
            }
        }
        acc.retain(|_, v| *v != 0);
        WittPoly { len: self.len, modulus: m, terms: acc }
    }

    fn pow(&self, k: u64) -> WittPoly {
        let mut out = WittPoly::zero(self.len, self.modulus);
        out.terms.insert(vec![0; 2 * self.len], 1 % self.modulus);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    fn div_exact(&self, d: u64) -> Option<WittPoly> {
        let mut out = WittPoly::zero(self.len, self.modulus);
        for (e, &c) in &self.terms {
            if c % d != 0 {
                return None;
            }
            out.terms.insert(e.clone(), c / d);
        }
        Some(out)
    }

    fn reduce(&self, modulus: u64) -> WittPoly {
        let mut out = WittPoly::zero(self.len, modulus);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), c % modulus);
        }
        out
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x^a y^b` as the residue of least absolute value.
    pub fn coeff(&self, x_exp: &[u16], y_exp: &[u16]) -> i128 {
        let mut e = vec![0u16; 2 * self.len];
        e[..x_exp.len()].copy_from_slice(x_exp);
        e[self.len..self.len + y_exp.len()].copy_from_slice(y_exp);
        let c = self.terms.get(&e).copied().unwrap_or(0);
        signed(c, self.modulus)
    }

    /// Evaluate at ring elements `x_0..x_{L-1}, y_0..y_{L-1}`.
    pub fn eval(&self, x: &[SeriesElem], y: &[SeriesElem]) -> SeriesElem {
        let ring = x[0].ring().clone();
        let vals: Vec<&SeriesElem> = x.iter().chain(y.iter()).collect();
        let mut max_exp = vec![0u16; vals.len()];
        for e in self.terms.keys() {
            for (k, &a) in e.iter().enumerate().take(vals.len()) {
                max_exp[k] = max_exp[k].max(a);
            }
        }
        let pows: Vec<Vec<SeriesElem>> = vals
            .iter()
            .zip(&max_exp)
            .map(|(v, &m)| {
                let mut row = vec![ring.one()];
                for k in 1..=m as usize {
                    let next = &row[k - 1] * v;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = ring.zero();
        for (e, &c) in &self.terms {
            let mut term = ring.from_int(signed(c, self.modulus));
            for (k, &a) in e.iter().enumerate().take(vals.len()) {
                if a > 0 {
                    term = &term * &pows[k][a as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }
}

fn signed(c: u64, m: u64) -> i128 {
    if c > m / 2 {
        c as i128 - m as i128
    } else {
        c as i128
    }
}

impl fmt::Display for WittPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in &self.terms {
            let c = signed(c, self.modulus);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(k, &a)| {
                    let name = if k < self.len { format!("x{}", k) } else { format!("y{}", k - self.len) };
                    if a == 1 {
                        name
                    } else {
                        format!("{}^{}", name, a)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag == 1 {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

/// `S_n`, `P_n` for `n < len`, with coefficients mod `p^prec`.
#[derive(Clone, Debug)]
pub struct WittPolyTable {
    p: u64,
    len: usize,
    prec: u32,
    sums: Vec<WittPoly>,
    prods: Vec<WittPoly>,
}

/// Build the table by solving the ghost equations degree by degree.
pub fn witt_polys(p: u64, len: usize, prec: u32) -> WittPolyTable {
    assert!(len >= 1 && prec >= 1);
    let work = p.pow(prec + len as u32 - 1);
    let xs: Vec<WittPoly> = (0..len).map(|i| WittPoly::var(len, work, i)).collect();
    let ys: Vec<WittPoly> = (0..len).map(|i| WittPoly::var(len, work, len + i)).collect();
    let ghost = |v: &[WittPoly], n: usize| -> WittPoly {
        let mut acc = WittPoly::zero(len, work);
        for (i, vi) in v.iter().enumerate().take(n + 1) {
            acc = acc.add(&vi.pow(p.pow((n - i) as u32)).scale(p.pow(i as u32)));
        }
        acc
    };
    let solve = |target: Vec<WittPoly>| -> Vec<WittPoly> {
        // powers[i][k] = S_i^{p^k}
        let mut powers: Vec<Vec<WittPoly>> = Vec::new();
        let mut out = Vec::new();
        for (n, t) in target.into_iter().enumerate() {
            let mut rest = t;
            for (i, pw) in powers.iter_mut().enumerate() {
                while pw.len() <= n - i {
                    let next = pw.last().unwrap().pow(p);
                    pw.push(next);
                }
                rest = rest.sub(&pw[n - i].scale(p.pow(i as u32)));
            }
            let s = rest.div_exact(p.pow(n as u32)).expect("Witt recursion divides exactly");
            powers.push(vec![s.clone()]);
            out.push(s);
        }
        out
    };
    let sum_targets: Vec<WittPoly> = (0..len).map(|n| ghost(&xs, n).add(&ghost(&ys, n))).collect();
    let prod_targets: Vec<WittPoly> = (0..len).map(|n| ghost(&xs, n).mul(&ghost(&ys, n))).collect();
    let modulus = p.pow(prec);
    let sums = solve(sum_targets).iter().map(|s| s.reduce(modulus)).collect();
    let prods = solve(prod_targets).iter().map(|s| s.reduce(modulus)).collect();
    WittPolyTable { p, len, prec, sums, prods }
}

impl WittPolyTable {
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn prec(&self) -> u32 {
        self.prec
    }
    pub fn sum(&self, n: usize) -> &WittPoly {
        &self.sums[n]
    }
    pub fn prod(&self, n: usize) -> &WittPoly {
        &self.prods[n]
    }

    fn eval(&self, polys: &[WittPoly], x: &WittVec, y: &WittVec) -> Result<WittVec, WittError> {
        if x.len() != y.len() || x.len() > self.len {
            return Err(WittError::LengthMismatch(x.len(), y.len()));
        }
        if x.ring().prec() > self.prec {
            return Err(WittError::Precision(format!(
                "table holds {} digits, ring needs {}",
                self.prec,
                x.ring().prec()
            )));
        }
        let pad = |v: &WittVec| {
            let mut c = v.components().to_vec();
            c.resize(self.len, v.ring().zero());
            c
        };
        let (xc, yc) = (pad(x), pad(y));
        let comps = (0..x.len()).map(|n| polys[n].eval(&xc, &yc)).collect();
        WittVec::new(comps)
    }

    /// Witt sum by direct evaluation of `S_n`.
    pub fn eval_add(&self, x: &WittVec, y: &WittVec) -> Result<WittVec, WittError> {
        self.eval(&self.sums, x, y)
    }

    /// Witt product by direct evaluation of `P_n`.
    pub fn eval_mul(&self, x: &WittVec, y: &WittVec) -> Result<WittVec, WittError> {
        self.eval(&self.prods, x, y)
    }
}
