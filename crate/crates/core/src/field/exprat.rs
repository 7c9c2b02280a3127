use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Field, GaussQ, UPoly};
use crate::error::{CoreError, Result};
use crate::poly::format_laurent;

/// Exponent weights `c = (c_1, …, c_n)` of the transcendental `q = exp(Σ c_j x_j)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpContext {
    c: Vec<GaussQ>,
}

impl ExpContext {
    pub fn new(c: Vec<GaussQ>) -> Arc<Self> {
        Arc::new(ExpContext { c })
    }

    pub fn weights(&self) -> &[GaussQ] {
        &self.c
    }

    /// Number of spatial variables.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// `c = 0`, so `q = 1` is not transcendental and `K` collapses to `GaussQ`.
    pub fn is_degenerate(&self) -> bool {
        self.c.iter().all(GaussQ::is_zero)
    }
}

/// Element of `K = GaussQ(q)`.
///
/// Canonical form `q^minexp · num(q) / den(q)` where `num(0) ≠ 0` (or `num = 0`),
/// `den` is monic with `den(0) ≠ 0`, and `gcd(num, den) = 1`. Two values are
/// equal iff their canonical forms are structurally equal.
#[derive(Clone, Debug)]
pub struct ExpRat {
    ctx: Arc<ExpContext>,
    minexp: i64,
    num: UPoly,
    den: UPoly,
}

impl PartialEq for ExpRat {
    fn eq(&self, other: &Self) -> bool {
        self.minexp == other.minexp
            && self.num == other.num
            && self.den == other.den
            && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }
}

impl ExpRat {
    pub fn zero(ctx: &Arc<ExpContext>) -> Self {
        ExpRat { ctx: ctx.clone(), minexp: 0, num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one(ctx: &Arc<ExpContext>) -> Self {
        ExpRat::constant(ctx, GaussQ::one())
    }

    pub fn constant(ctx: &Arc<ExpContext>, c: GaussQ) -> Self {
        ExpRat { ctx: ctx.clone(), minexp: 0, num: UPoly::constant(c), den: UPoly::one() }
    }

    /// `q^e`; equals 1 in a degenerate context.
    pub fn q_pow(ctx: &Arc<ExpContext>, e: i64) -> Self {
        if ctx.is_degenerate() {
            return ExpRat::one(ctx);
        }
        ExpRat { ctx: ctx.clone(), minexp: e, num: UPoly::one(), den: UPoly::one() }
    }

    pub fn q(ctx: &Arc<ExpContext>) -> Self {
        ExpRat::q_pow(ctx, 1)
    }

    /// Builds `q^minexp · num / den` and canonicalizes it.
    pub fn from_parts(ctx: &Arc<ExpContext>, minexp: i64, num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        normalize(ctx, minexp, num, den, true)
    }

    /// Laurent polynomial `Σ coeffs[k] q^(minexp + k)`.
    pub fn laurent(ctx: &Arc<ExpContext>, minexp: i64, coeffs: Vec<GaussQ>) -> Self {
        normalize(ctx, minexp, UPoly::new(coeffs), UPoly::one(), false).expect("unit denominator")
    }

    pub fn context(&self) -> &Arc<ExpContext> {
        &self.ctx
    }

    pub fn minexp(&self) -> i64 {
        self.minexp
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.minexp == 0 && self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<&GaussQ> {
        if self.is_zero() {
            return None;
        }
        (self.minexp == 0 && self.num.is_constant() && self.den.is_one()).then(|| &self.num.coeffs()[0])
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    fn same_ctx(&self, rhs: &ExpRat) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &rhs.ctx) || self.ctx == rhs.ctx {
            Ok(())
        } else {
            Err(CoreError::ContextMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &ExpRat) -> Result<ExpRat> {
        self.same_ctx(rhs)?;
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        let m = self.minexp.min(rhs.minexp);
        let a = self.num.shift_up((self.minexp - m) as usize);
        let b = rhs.num.shift_up((rhs.minexp - m) as usize);
        if self.den == rhs.den {
            let reduce = !self.den.is_one();
            return normalize(&self.ctx, m, a.add(&b), self.den.clone(), reduce);
        }
        let g = self.den.gcd(&rhs.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (self.den.div_exact(&g)?, rhs.den.div_exact(&g)?)
        };
        let num = a.mul(&d2).add(&b.mul(&d1));
        normalize(&self.ctx, m, num, self.den.mul(&d2), true)
    }

    pub fn checked_sub(&self, rhs: &ExpRat) -> Result<ExpRat> {
        self.checked_add(&rhs.neg_ref())
    }

    pub fn checked_mul(&self, rhs: &ExpRat) -> Result<ExpRat> {
        self.same_ctx(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(ExpRat::zero(&self.ctx));
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1)? };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.div_exact(&g1)? };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.div_exact(&g2)? };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2)? };
        normalize(&self.ctx, self.minexp + rhs.minexp, n1.mul(&n2), d1.mul(&d2), false)
    }

    pub fn checked_inv(&self) -> Result<ExpRat> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        normalize(&self.ctx, -self.minexp, self.den.clone(), self.num.clone(), false)
    }

    pub fn checked_div(&self, rhs: &ExpRat) -> Result<ExpRat> {
        self.same_ctx(rhs)?;
        self.checked_mul(&rhs.checked_inv()?)
    }

    pub fn neg_ref(&self) -> ExpRat {
        ExpRat { ctx: self.ctx.clone(), minexp: self.minexp, num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, s: &GaussQ) -> ExpRat {
        if s.is_zero() {
            return ExpRat::zero(&self.ctx);
        }
        ExpRat { ctx: self.ctx.clone(), minexp: self.minexp, num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn powi(&self, e: i64) -> Result<ExpRat> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = ExpRat::one(&self.ctx);
        for _ in 0..e.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }

    /// Applies `∂_{x_j}`, using `∂_{x_j} q = c_j q`.
    pub fn derive(&self, j: usize) -> Result<ExpRat> {
        let n = self.ctx.n();
        if j >= n {
            return Err(CoreError::IndexOutOfRange { index: j, n });
        }
        let cj = &self.ctx.c[j];
        if cj.is_zero() || self.is_zero() || (self.minexp == 0 && self.num.is_constant() && self.den.is_one()) {
            return Ok(ExpRat::zero(&self.ctx));
        }
        // q·d/dq (q^e N/D) = q^e (e·N·D + q·N'·D - q·N·D') / D²
        let e = GaussQ::from_int(self.minexp);
        let nd = self.num.mul(&self.den);
        let mut top = nd.scale(&e).add(&self.num.derivative().mul(&self.den).shift_up(1));
        if !self.den.is_one() {
            top = top.sub(&self.num.mul(&self.den.derivative()).shift_up(1));
        }
        normalize(&self.ctx, self.minexp, top.scale(cj), self.den.mul(&self.den), !self.den.is_one())
    }

    /// Value after substituting a number for `q`.
    pub fn eval_q(&self, q: &GaussQ) -> Result<GaussQ> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        Ok(&(&self.num.eval(q) * &q.powi(self.minexp)?) * &d.checked_inv()?)
    }

    /// Size proxy used for pivot selection.
    pub fn complexity(&self) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let deg = |p: &UPoly| p.degree().unwrap_or(0);
        8 * (deg(&self.num) + 2 * deg(&self.den)) + self.num.weight() + self.den.weight()
    }

    /// Numerator coefficients in ascending `q`-power order starting at `minexp`.
    pub fn num_coeffs(&self) -> &[GaussQ] {
        self.num.coeffs()
    }

    pub fn den_coeffs(&self) -> &[GaussQ] {
        self.den.coeffs()
    }
}

fn normalize(ctx: &Arc<ExpContext>, minexp: i64, num: UPoly, den: UPoly, reduce: bool) -> Result<ExpRat> {
    if den.is_zero() {
        return Err(CoreError::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(ExpRat::zero(ctx));
    }
    if ctx.is_degenerate() {
        let d = den.sum_coeffs();
        if d.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        return Ok(ExpRat::constant(ctx, num.sum_coeffs().checked_div(&d)?));
    }
    let a = num.low_order();
    let b = den.low_order();
    let (mut num, mut den) = (num.shift_down(a), den.shift_down(b));
    let minexp = minexp + a as i64 - b as i64;
    if reduce && !den.is_constant() {
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g)?;
            den = den.div_exact(&g)?;
        }
    }
    let lc = den.lc();
    if !lc.is_one() {
        let inv = lc.checked_inv()?;
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Ok(ExpRat { ctx: ctx.clone(), minexp, num, den })
}

impl fmt::Display for ExpRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = format_laurent(self.num.coeffs(), self.minexp, "q");
        if self.den.is_one() {
            return write!(f, "{top}");
        }
        let bottom = format_laurent(self.den.coeffs(), 0, "q");
        let single = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && !top.contains(['+', ' ']);
        if single {
            write!(f, "{top}/({bottom})")
        } else {
            write!(f, "({top})/({bottom})")
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a ExpRat> for &'a ExpRat {
            type Output = ExpRat;
            fn $m(self, rhs: &ExpRat) -> ExpRat {
                self.$checked(rhs).unwrap_or_else(|e| panic!("ExpRat::{}: {e}", stringify!($m)))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &ExpRat {
    type Output = ExpRat;
    fn neg(self) -> ExpRat {
        self.neg_ref()
    }
}

impl Field for ExpRat {
    fn zero_like(&self) -> Self {
        ExpRat::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        ExpRat::one(&self.ctx)
    }
    fn is_zero(&self) -> bool {
        ExpRat::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ExpRat::is_one(self)
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
        self.neg_ref()
    }
    fn inverse(&self) -> Result<Self> {
        self.checked_inv()
    }
    fn from_gauss(&self, g: &GaussQ) -> Self {
        ExpRat::constant(&self.ctx, g.clone())
    }
    fn weight(&self) -> usize {
        self.complexity()
    }
    fn scale_by(&self, g: &GaussQ) -> Self {
        self.scale(g)
    }
    fn as_gauss(&self) -> Option<GaussQ> {
        if self.is_zero() {
            return Some(GaussQ::zero());
        }
        self.as_constant().cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(c: &[GaussQ]) -> Arc<ExpContext> {
        ExpContext::new(c.to_vec())
    }

    fn r(ctx: &Arc<ExpContext>, s: &str) -> ExpRat {
        crate::parse::parse_exprat(s, ctx).unwrap()
    }

    #[test]
    fn telescoping() {
        let k = ctx(&[GaussQ::one(), GaussQ::from_int(-1)]);
        assert!((&r(&k, "q/(q-1)") - &r(&k, "1/(q-1)")).is_one());
    }

    #[test]
    fn factorization() {
        let k = ctx(&[GaussQ::one(), GaussQ::from_int(-1)]);
        assert_eq!(r(&k, "(q^2-1)/(q-1)"), r(&k, "q+1"));
    }

    #[test]
    fn canonical_denominator_is_monic_without_q_factor() {
        let k = ctx(&[GaussQ::one()]);
        let v = r(&k, "(2*q^3)/(4*q^5 - 2*q^4)");
        assert_eq!(v.minexp(), -1);
        assert!(v.denom().lc().is_one());
        assert!(!v.denom().coeffs()[0].is_zero());
        assert_eq!(v, r(&k, "1/(2*q^2-q)"));
    }

    #[test]
    fn derive_q() {
        let m_i = -GaussQ::i();
        let k = ctx(&[m_i.clone(), m_i.clone()]);
        assert_eq!(ExpRat::q(&k).derive(0).unwrap(), ExpRat::q(&k).scale(&m_i));
    }

    #[test]
    fn derive_quotient_rule() {
        let k = ctx(&[GaussQ::one(), GaussQ::from_int(-1)]);
        let v = r(&k, "q/(q-1)");
        assert_eq!(v.derive(0).unwrap(), r(&k, "-q/(q-1)^2"));
        assert_eq!(v.derive(1).unwrap(), r(&k, "q/(q-1)^2"));
    }

    #[test]
    fn derive_constant_and_range() {
        let k = ctx(&[GaussQ::one(), GaussQ::one()]);
        assert!(ExpRat::constant(&k, GaussQ::from_int(7)).derive(1).unwrap().is_zero());
        assert_eq!(
            ExpRat::q(&k).derive(2),
            Err(CoreError::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn degenerate_context_collapses_q() {
        let k = ctx(&[GaussQ::zero(), GaussQ::zero()]);
        assert!(ExpRat::q(&k).is_one());
        assert_eq!(r(&k, "(q^2+q)/2"), ExpRat::one(&k));
        assert_eq!(crate::parse::parse_exprat("1/(q-1)", &k), Err(CoreError::DivisionByZero));
    }

    #[test]
    fn context_mismatch() {
        let a = ExpRat::q(&ctx(&[GaussQ::one()]));
        let b = ExpRat::q(&ctx(&[GaussQ::from_int(2)]));
        assert_eq!(a.checked_add(&b), Err(CoreError::ContextMismatch));
    }

    #[test]
    fn division_by_zero() {
        let k = ctx(&[GaussQ::one()]);
        assert_eq!(ExpRat::q(&k).checked_div(&ExpRat::zero(&k)), Err(CoreError::DivisionByZero));
    }
}
