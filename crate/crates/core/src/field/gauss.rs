use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Field;
use crate::error::{CoreError, Result};

/// Exact Gaussian rational `re + im·i`.
///
/// Both parts are kept as reduced fractions with positive denominators, so
/// derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussQ {
    re: BigRational,
    im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    pub fn zero() -> Self {
        GaussQ::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussQ::from_int(1)
    }

    pub fn i() -> Self {
        GaussQ::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        GaussQ::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    /// `num/den`, real.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussQ::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(a/b) + (c/d)·i`.
    pub fn complex(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        GaussQ::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussQ::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_div(&self, rhs: &GaussQ) -> Result<GaussQ> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn checked_inv(&self) -> Result<GaussQ> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let n = self.norm();
        Ok(GaussQ::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> GaussQ {
        let mut base = self.clone();
        let mut acc = GaussQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i64) -> Result<GaussQ> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.checked_inv()
        } else {
            Ok(p)
        }
    }

    /// The four decimal strings `(re_num, re_den, im_num, im_den)` of the wire format.
    pub fn to_parts(&self) -> [String; 4] {
        [
            self.re.numer().to_string(),
            self.re.denom().to_string(),
            self.im.numer().to_string(),
            self.im.denom().to_string(),
        ]
    }

    pub fn from_parts(parts: &[String]) -> Result<GaussQ> {
        if parts.len() != 4 {
            return Err(CoreError::Parse(format!(
                "Gaussian rational needs 4 integer strings, got {}",
                parts.len()
            )));
        }
        let int = |s: &str| {
            BigInt::from_str(s).map_err(|_| CoreError::Parse(format!("bad integer '{s}'")))
        };
        let (rn, rd, inum, id) = (int(&parts[0])?, int(&parts[1])?, int(&parts[2])?, int(&parts[3])?);
        if rd.is_zero() || id.is_zero() {
            return Err(CoreError::Parse("zero denominator".into()));
        }
        Ok(GaussQ::new(BigRational::new(rn, rd), BigRational::new(inum, id)))
    }

    /// Rough size in bits, used to pick cheap pivots.
    pub fn bit_weight(&self) -> usize {
        let b = |r: &BigRational| (r.numer().bits() + r.denom().bits()) as usize;
        b(&self.re) + b(&self.im)
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussQ {
    /// `a/b+c/d i`, dropping whichever part is zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: &BigRational, lead: bool| -> fmt::Result {
            let sign = if im.is_negative() { "-" } else if lead { "" } else { "+" };
            let mag = im.abs();
            if mag.is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{} i", fmt_ratio(&mag))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_ratio(&self.re)),
            (true, false) => imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", fmt_ratio(&self.re))?;
                imag(f, &self.im, false)
            }
        }
    }
}

impl FromStr for GaussQ {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_gauss(s)
    }
}

impl<'a> Add<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn add(self, rhs: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn sub(self, rhs: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn mul(self, rhs: &GaussQ) -> GaussQ {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussQ::new(&self.re * &rhs.re, BigRational::zero());
        }
        GaussQ::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re, -self.im)
    }
}

impl Field for GaussQ {
    fn zero_like(&self) -> Self {
        GaussQ::zero()
    }
    fn one_like(&self) -> Self {
        GaussQ::one()
    }
    fn is_zero(&self) -> bool {
        GaussQ::is_zero(self)
    }
    fn is_one(&self) -> bool {
        GaussQ::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        self.checked_inv()
    }
    fn from_gauss(&self, g: &GaussQ) -> Self {
        g.clone()
    }
    fn weight(&self) -> usize {
        self.bit_weight()
    }
    fn scale_by(&self, g: &GaussQ) -> Self {
        self * g
    }
    fn as_gauss(&self) -> Option<GaussQ> {
        Some(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_identity() {
        let a = GaussQ::complex(1, 1, 2, 1);
        assert_eq!(&a * &a.conj(), GaussQ::from_int(5));
    }

    #[test]
    fn i_squared() {
        assert_eq!(&GaussQ::i() * &GaussQ::i(), GaussQ::from_int(-1));
    }

    #[test]
    fn conjugate_sum() {
        let a = GaussQ::complex(1, 2, 1, 3);
        assert_eq!(&a + &a.conj(), GaussQ::one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(GaussQ::one().checked_div(&GaussQ::zero()), Err(CoreError::DivisionByZero));
    }

    #[test]
    fn parts_are_lowest_terms() {
        let a = GaussQ::complex(2, -4, 6, 9);
        assert_eq!(a.to_parts(), ["-1", "2", "2", "3"].map(String::from));
        assert_eq!(GaussQ::from_parts(&a.to_parts()).unwrap(), a);
    }

    #[test]
    fn display() {
        assert_eq!(GaussQ::complex(1, 2, 3, 4).to_string(), "1/2+3/4 i");
        assert_eq!(GaussQ::complex(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(GaussQ::complex(1, 1, -1, 1).to_string(), "1-i");
        assert_eq!(GaussQ::ratio(-7, 3).to_string(), "-7/3");
    }
}
