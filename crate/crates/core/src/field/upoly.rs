use std::fmt;

use super::GaussQ;
use crate::error::{CoreError, Result};

/// Dense univariate polynomial over `GaussQ`, coefficients in ascending
/// order with no trailing zeros. The zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<GaussQ>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<GaussQ>) -> Self {
        while coeffs.last().is_some_and(GaussQ::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: GaussQ) -> Self {
        UPoly::new(vec![c])
    }

    pub fn one() -> Self {
        UPoly::constant(GaussQ::one())
    }

    /// `c·X^e`.
    pub fn monomial(c: GaussQ, e: usize) -> Self {
        let mut v = vec![GaussQ::zero(); e + 1];
        v[e] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[GaussQ] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> GaussQ {
        self.coeffs.get(e).cloned().unwrap_or_else(GaussQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> GaussQ {
        self.coeffs.last().cloned().unwrap_or_else(GaussQ::zero)
    }

    /// Number of leading zero coefficients, i.e. the power of `X` dividing `self`.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divides by `X^k`; the caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> UPoly {
        debug_assert!(k <= self.low_order() || self.is_zero());
        UPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![GaussQ::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|e| &self.coeff(e) + &rhs.coeff(e)).collect())
    }

    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|e| &self.coeff(e) - &rhs.coeff(e)).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &GaussQ) -> UPoly {
        if s.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        let mut out = vec![GaussQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division: `self = q·rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &UPoly) -> Result<(UPoly, UPoly)> {
        let dr = rhs.degree().ok_or(CoreError::DivisionByZero)?;
        let inv_lc = rhs.lc().checked_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut quot = vec![GaussQ::zero(); rem.len() - dr];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dr] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&c * b);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dr);
        Ok((UPoly::new(quot), UPoly::new(rem)))
    }

    /// Exact quotient; errors if `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &UPoly) -> Result<UPoly> {
        let (q, r) = self.div_rem(rhs)?;
        if !r.is_zero() {
            return Err(CoreError::PreconditionViolated("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().checked_inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &UPoly) -> UPoly {
        if self.is_constant() && !self.is_zero() || rhs.is_constant() && !rhs.is_zero() {
            return UPoly::one();
        }
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(e, c)| c * &GaussQ::from_int(e as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &GaussQ) -> GaussQ {
        self.coeffs.iter().rev().fold(GaussQ::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Substitutes a polynomial for the variable.
    pub fn compose(&self, inner: &UPoly) -> UPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UPoly::zero(), |acc, c| acc.mul(inner).add(&UPoly::constant(c.clone())))
    }

    pub fn sum_coeffs(&self) -> GaussQ {
        self.coeffs.iter().fold(GaussQ::zero(), |a, c| &a + c)
    }

    pub fn weight(&self) -> usize {
        self.coeffs.len() * 4 + self.coeffs.iter().map(|c| c.bit_weight()).sum::<usize>() / 16
    }

    /// Sylvester resultant; zero if either polynomial is zero.
    pub fn resultant(&self, rhs: &UPoly) -> GaussQ {
        let (Some(m), Some(n)) = (self.degree(), rhs.degree()) else {
            return GaussQ::zero();
        };
        if m + n == 0 {
            return GaussQ::one();
        }
        let size = m + n;
        let mut rows = Vec::with_capacity(size);
        for (poly, deg, copies) in [(self, m, n), (rhs, n, m)] {
            for shift in 0..copies {
                let mut row = vec![GaussQ::zero(); size];
                for e in 0..=deg {
                    row[shift + deg - e] = poly.coeff(e);
                }
                rows.push(row);
            }
        }
        crate::linalg::determinant(&rows, &GaussQ::zero())
    }

    /// The polynomial of degree `< xs.len()` through the points `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[GaussQ], ys: &[GaussQ]) -> Result<UPoly> {
        let mut acc = UPoly::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = UPoly::constant(yi.clone());
            for (k, xk) in xs.iter().enumerate() {
                if k != i {
                    let scale = (xi - xk).checked_inv()?;
                    basis = basis.mul(&UPoly::new(vec![-xk, GaussQ::one()])).scale(&scale);
                }
            }
            acc = acc.add(&basis);
        }
        Ok(acc)
    }

    /// Squarefree test in characteristic zero.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::poly::format_laurent(&self.coeffs, 0, "X"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&c| GaussQ::from_int(c)).collect())
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, -3, 2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn resultant_detects_common_root() {
        let a = p(&[-1, 1]).mul(&p(&[2, 1]));
        assert!(!a.resultant(&p(&[1, 1])).is_zero());
        assert!(a.resultant(&p(&[-2, 2])).is_zero());
        // Res(X^2 - 2, X - 1) = 1 - 2
        assert_eq!(p(&[-2, 0, 1]).resultant(&p(&[-1, 1])), GaussQ::from_int(-1));
    }

    #[test]
    fn interpolation() {
        let f = p(&[3, -1, 2]);
        let xs: Vec<GaussQ> = (0..3).map(GaussQ::from_int).collect();
        let ys: Vec<GaussQ> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(UPoly::interpolate(&xs, &ys).unwrap(), f);
    }

    #[test]
    fn gcd_of_products() {
        let common = p(&[-1, 1]);
        let a = common.mul(&p(&[2, 1]));
        let b = common.mul(&p(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn squarefree() {
        assert!(p(&[-1, 0, 1]).is_squarefree());
        assert!(!p(&[1, 2, 1]).is_squarefree());
    }

    #[test]
    fn compose() {
        // (X+1)^2 at X -> X - 1 gives X^2
        assert_eq!(p(&[1, 2, 1]).compose(&p(&[-1, 1])), p(&[0, 0, 1]));
    }
}
