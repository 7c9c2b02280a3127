//! Exact Baker-Akhiezer modules on the rational varieties `Γ` and `Ω` and the
//! commuting matrix differential operators `D(λ)` they induce.
//!
//! All arithmetic is exact: scalars are Gaussian rationals and operator
//! coefficients live in `K = Q(i)(q)` with `q = exp(c·x)`.

pub mod biform;
pub mod cli;
pub mod config;
pub mod diffop;
pub mod embedding;
pub mod error;
pub mod field;
pub mod golden;
pub mod json;
pub mod linalg;
pub mod mero;
pub mod module;
pub mod parse;
pub mod poly;
pub mod presets;
pub mod spectral;

pub use error::{CoreError, Result};
pub use field::{ExpContext, ExpRat, Field, GaussQ, UPoly};
