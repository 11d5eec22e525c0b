//! Integer polynomials in `t1..tr, u` and the text parser for them.
//!
//! These are the exact, untruncated inputs read from frame and window
//! blocks. Truncation and reduction modulo `p^N` happen when an
//! [`IntPoly`] is converted into a ring element.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Exponent vector `(α_1, .., α_r, j)`: the t-exponents followed by the u-exponent.
pub type Exponent = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based column inside the parsed string.
    pub column: usize,
    pub message: String,
}

/// A polynomial with integer coefficients in `r` t-variables and `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, i128>,
}

impl IntPoly {
    pub fn zero(r: usize) -> Self {
        IntPoly { nvars: r + 1, terms: BTreeMap::new() }
    }

    pub fn constant(r: usize, c: i128) -> Self {
        let mut p = Self::zero(r);
        p.add_term(vec![0; r + 1], c);
        p
    }

    pub fn monomial(exp: Exponent, c: i128) -> Self {
        let mut p = IntPoly { nvars: exp.len(), terms: BTreeMap::new() };
        p.add_term(exp, c);
        p
    }

    /// Number of t-variables.
    pub fn r(&self) -> usize {
        self.nvars - 1
    }

    pub fn add_term(&mut self, exp: Exponent, c: i128) {
        assert_eq!(exp.len(), self.nvars, "exponent length mismatch");
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(exp.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, i128)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn u_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[self.nvars - 1]).max()
    }

    /// Coefficient of `u^j` as a polynomial in the t-variables (u-exponent 0).
    pub fn u_coefficient(&self, j: u32) -> IntPoly {
        let mut out = IntPoly::zero(self.r());
        for (e, c) in self.terms() {
            if e[self.nvars - 1] == j {
                let mut k = e.clone();
                k[self.nvars - 1] = 0;
                out.add_term(k, c);
            }
        }
        out
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in o.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero(self.r());
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut out = IntPoly::constant(self.r(), 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Parse a polynomial such as `u^2 + 3*t1*u + 3(1+t1)`.
    ///
    /// Variables are `t1..tr` and `u`; `t` is accepted for `t1` when `r = 1`.
    /// The identifier `p` is substituted by `prime` when given.
    pub fn parse(src: &str, r: usize, prime: Option<u64>) -> Result<IntPoly, ParseError> {
        let mut parser = Parser { src: src.as_bytes(), pos: 0, r, prime };
        parser.skip_ws();
        if parser.pos >= parser.src.len() {
            return Err(parser.error("empty polynomial"));
        }
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos < parser.src.len() {
            return Err(parser.error(&format!("unexpected character '{}'", parser.src[parser.pos] as char)));
        }
        Ok(p)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let mono = monomial_string(e);
            match (mag, mono.is_empty()) {
                (m, true) => write!(f, "{}", m)?,
                (1, false) => write!(f, "{}", mono)?,
                (m, false) => write!(f, "{}*{}", m, mono)?,
            }
        }
        Ok(())
    }
}

/// Render `t1^a*..*u^j`; empty string for the constant monomial.
pub fn monomial_string(exp: &[u32]) -> String {
    let r = exp.len() - 1;
    let mut parts = Vec::new();
    for (i, &a) in exp.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let name = if i == r { "u".to_string() } else { format!("t{}", i + 1) };
        if a == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, a));
        }
    }
    parts.join("*")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    r: usize,
    prime: Option<u64>,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError { column: self.pos + 1, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IntPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                // implicit multiplication: `3t`, `3(1+t)`, `t u`
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let k = self.integer()?;
            if k > 4096 {
                self.pos = start;
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i128, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<i128>().map_err(|_| ParseError { column: start + 1, message: "integer overflow".into() })
    }

    fn atom(&mut self) -> Result<IntPoly, ParseError> {
        let r = self.r;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(IntPoly::constant(r, self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                // identifiers are a letter followed by digits
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let mut exp = vec![0u32; r + 1];
                match name {
                    "u" => exp[r] = 1,
                    "t" if r == 1 => exp[0] = 1,
                    "p" if self.prime.is_some() => {
                        return Ok(IntPoly::constant(r, self.prime.unwrap() as i128));
                    }
                    _ if name.starts_with('t') && name.len() > 1 => {
                        let i: usize = name[1..].parse().unwrap_or(0);
                        if i == 0 || i > r {
                            return Err(ParseError {
                                column: start + 1,
                                message: format!("unknown variable '{}' (r = {})", name, r),
                            });
                        }
                        exp[i - 1] = 1;
                    }
                    _ => {
                        return Err(ParseError {
                            column: start + 1,
                            message: format!("unknown variable '{}'", name),
                        })
                    }
                }
                Ok(IntPoly::monomial(exp, 1))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eisenstein_examples() {
        let e = IntPoly::parse("u^2 + 3t*u + 3(1+t)", 1, None).unwrap();
        assert_eq!(e.u_coefficient(2), IntPoly::constant(1, 1));
        assert_eq!(e.u_coefficient(1), IntPoly::monomial(vec![1, 0], 3));
        let a0 = e.u_coefficient(0);
        assert_eq!(a0, IntPoly::constant(1, 3).add(&IntPoly::monomial(vec![1, 0], 3)));
    }

    #[test]
    fn parses_prime_and_negatives() {
        let e = IntPoly::parse("-p*u - 2", 0, Some(5)).unwrap();
        assert_eq!(e.to_string(), "-2 - 5*u");
    }

    #[test]
    fn positional_errors() {
        let err = IntPoly::parse("u + t2", 1, None).unwrap_err();
        assert_eq!(err.column, 5);
        let err = IntPoly::parse("u + (3", 0, None).unwrap_err();
        assert_eq!(err.column, 7);
        let err = IntPoly::parse("u $", 0, None).unwrap_err();
        assert_eq!(err.column, 3);
    }

    #[test]
    fn cancellation_removes_terms() {
        let e = IntPoly::parse("u - u + 1", 0, None).unwrap();
        assert_eq!(e, IntPoly::constant(0, 1));
    }
}
