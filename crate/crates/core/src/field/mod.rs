//! Exact coefficient arithmetic: Gaussian rationals and the exponential
//! differential field `K = Q(i)(q)`, `q = exp(c·x)`.

mod exprat;
mod gauss;
mod upoly;

pub use exprat::{ExpContext, ExpRat};
pub use gauss::GaussQ;
pub use upoly::UPoly;

use std::fmt;

use crate::error::Result;

/// The operations the generic linear algebra and form code need from a
/// coefficient field.
///
/// `zero_like`/`one_like` take a witness because `ExpRat` values carry their
/// exponential context.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    /// Embeds a scalar into the same field (same context) as `self`.
    fn from_gauss(&self, g: &GaussQ) -> Self;
    /// Pivot cost; smaller is cheaper to eliminate with.
    fn weight(&self) -> usize;

    fn scale_by(&self, g: &GaussQ) -> Self {
        self.times(&self.from_gauss(g))
    }

    /// The value as a scalar, when it does not involve `q`.
    fn as_gauss(&self) -> Option<GaussQ>;

    fn quotient(&self, rhs: &Self) -> Result<Self> {
        Ok(self.times(&rhs.inverse()?))
    }
}
