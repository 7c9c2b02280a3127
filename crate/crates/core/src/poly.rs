//! Small sparse multivariate polynomials over a `Field`, plus the shared
//! term printer.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{CoreError, Result};
use crate::field::{Field, GaussQ};

/// Sparse polynomial in `nvars` commuting variables. Exponent vectors map to
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<C: Field> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Field> SparsePoly<C> {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `x_k` with coefficient `one`.
    pub fn var(nvars: usize, k: usize, one: C) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        let mut p = SparsePoly::zero(nvars);
        p.terms.insert(e, one);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Vec<u32>, C> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant term if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.iter().next().filter(|(e, _)| e.iter().all(|&x| x == 0)).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    fn accumulate(map: &mut BTreeMap<Vec<u32>, C>, e: Vec<u32>, c: C) {
        if c.is_zero() {
            return;
        }
        match map.get_mut(&e) {
            Some(slot) => {
                let s = slot.plus(&c);
                if s.is_zero() {
                    map.remove(&e);
                } else {
                    *slot = s;
                }
            }
            None => {
                map.insert(e, c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            Self::accumulate(&mut terms, e.clone(), c.clone());
        }
        SparsePoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negated())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.times(s))).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                Self::accumulate(&mut terms, e, ca.times(cb));
            }
        }
        SparsePoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32, one: &C) -> Self {
        let mut acc = SparsePoly::constant(self.nvars, one.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative in variable `k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            let factor = c.from_gauss(&GaussQ::from_int(e[k] as i64));
            Self::accumulate(&mut terms, e2, c.times(&factor));
        }
        SparsePoly { nvars: self.nvars, terms }
    }

    /// Evaluates at a point whose entries live in the coefficient field.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(CoreError::ArityMismatch(format!(
                "polynomial in {} variables evaluated at a point of length {}",
                self.nvars,
                point.len()
            )));
        }
        let mut acc: Option<C> = None;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.times(x);
                }
            }
            acc = Some(match acc {
                Some(a) => a.plus(&t),
                None => t,
            });
        }
        Ok(acc.unwrap_or_else(|| point.first().map(|p| p.zero_like()).unwrap_or_else(|| {
            self.terms.values().next().map(|c| c.zero_like()).expect("nonempty point or polynomial")
        })))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

/// Renders a coefficient as a factor in front of a monomial.
pub(crate) fn format_coeff(c: &GaussQ) -> String {
    let ratio = |r: &num_rational::BigRational| {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    };
    match (c.re().is_zero(), c.im().is_zero()) {
        (_, true) => ratio(c.re()),
        (true, false) => {
            let m = c.im();
            if m.abs().is_one() {
                if m.is_negative() { "-i".into() } else { "i".into() }
            } else {
                format!("{}*i", ratio(m))
            }
        }
        (false, false) => {
            let sign = if c.im().is_negative() { "-" } else { "+" };
            let m = c.im().abs();
            let im = if m.is_one() {
                "i".to_string()
            } else {
                format!("{}*i", ratio(&m))
            };
            format!("({}{sign}{im})", ratio(c.re()))
        }
    }
}

/// Sign and body of the term `c·mono`; an empty `mono` is the constant term.
pub(crate) fn gauss_piece(c: &GaussQ, mono: &str) -> (bool, String) {
    let negative_real = c.is_real() && c.re().is_negative();
    let negative_imag = c.re().is_zero() && c.im().is_negative();
    let (neg, mag) = if negative_real || negative_imag { (true, -c) } else { (false, c.clone()) };
    let body = if mono.is_empty() {
        format_coeff(&mag)
    } else if mag.is_one() {
        mono.to_string()
    } else {
        format!("{}*{mono}", format_coeff(&mag))
    };
    (neg, body)
}

/// Joins signed pieces into `a - b + c`; empty input renders as `0`.
pub(crate) fn join_signed(pieces: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in pieces {
        match (out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Joins `(coefficient, monomial)` pairs into `a*m1 - b*m2 + …`.
pub(crate) fn join_terms<'a>(terms: impl IntoIterator<Item = (&'a GaussQ, String)>) -> String {
    join_signed(terms.into_iter().map(|(c, mono)| gauss_piece(c, &mono)))
}

/// `Σ coeffs[k]·var^(minexp+k)`, highest power first.
pub(crate) fn format_laurent(coeffs: &[GaussQ], minexp: i64, var: &str) -> String {
    join_terms(coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
        let e = minexp + k as i64;
        let mono = match e {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{e}"),
        };
        (c, mono)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_format() {
        let c = [GaussQ::from_int(-1), GaussQ::zero(), GaussQ::ratio(3, 4), GaussQ::complex(1, 1, -2, 1)];
        assert_eq!(format_laurent(&c, -1, "q"), "(1-2*i)*q^2 + 3/4*q - q^-1");
        assert_eq!(format_laurent(&[], 0, "q"), "0");
        assert_eq!(format_laurent(&[GaussQ::complex(0, 1, -1, 1)], 1, "q"), "-i*q");
    }

    #[test]
    fn derivative_and_eval() {
        // p = x^2 y + 3 y
        let x = SparsePoly::var(2, 0, GaussQ::one());
        let y = SparsePoly::var(2, 1, GaussQ::one());
        let p = x.mul(&x).mul(&y).add(&y.scale(&GaussQ::from_int(3)));
        let dp = p.derivative(0);
        let pt = [GaussQ::from_int(2), GaussQ::from_int(5)];
        assert_eq!(dp.eval(&pt).unwrap(), GaussQ::from_int(20));
        assert_eq!(p.eval(&pt).unwrap(), GaussQ::from_int(35));
    }
}
