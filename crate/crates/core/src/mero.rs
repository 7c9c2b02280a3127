//! Meromorphic functions `λ = num / f^d` on the variety, where `num` is a
//! bidegree-`(d, d)` form whose values descend through the gluing.

use std::fmt;
use std::sync::Arc;

use crate::biform::{monomials, BiForm};
use crate::error::{CoreError, Result};
use crate::field::GaussQ;
use crate::linalg;
use crate::spectral::SpectralData;

#[derive(Clone, Debug)]
pub struct MeroFunc {
    data: Arc<SpectralData>,
    num: BiForm<GaussQ>,
}

impl PartialEq for MeroFunc {
    fn eq(&self, other: &Self) -> bool {
        self.data.f() == other.data.f() && self.num == other.num
    }
}

/// `num(1,0,t) - S^d · partner(num)`.
fn descent_residual(data: &SpectralData, num: &BiForm<GaussQ>) -> Result<BiForm<GaussQ>> {
    data.gluing_residual(num, &data.scale().pow(num.dz()))
}

/// Whether `num / f^d` is a well-defined function on the variety.
pub fn check_descent(data: &SpectralData, num: &BiForm<GaussQ>) -> Result<bool> {
    if num.dz() != num.dt() {
        return Ok(false);
    }
    Ok(descent_residual(data, num)?.is_zero())
}

impl MeroFunc {
    pub fn new(data: &Arc<SpectralData>, num: BiForm<GaussQ>) -> Result<Self> {
        let (dz, dt) = num.bidegree();
        if dz != dt || num.n() != data.n() {
            return Err(CoreError::ArityMismatch(format!(
                "numerator must have bidegree (d, d) in {} t-variables, got ({dz}, {dt}) in {}",
                data.n(),
                num.n()
            )));
        }
        if !check_descent(data, &num)? {
            return Err(CoreError::NotAdmissible(format!(
                "{} / f^{dz} does not descend to the variety",
                num.display_with(data.block_prefix())
            )));
        }
        Ok(MeroFunc { data: data.clone(), num })
    }

    /// `num` given as text, `d` its degree (needed when `num` is zero).
    pub fn parse(data: &Arc<SpectralData>, num: &str, d: u32) -> Result<Self> {
        let form = BiForm::parse(num, data.n(), Some((d, d)))?;
        MeroFunc::new(data, form)
    }

    /// Reads `"num = <form>; d = <degree>"`.
    pub fn parse_spec(data: &Arc<SpectralData>, spec: &str) -> Result<Self> {
        let mut num = None;
        let mut d = None;
        for part in spec.split(';') {
            let Some((key, value)) = part.split_once('=') else {
                return Err(CoreError::Parse(format!("expected 'key = value' in '{part}'")));
            };
            match key.trim() {
                "num" => num = Some(value.trim().to_string()),
                "d" => {
                    d = Some(
                        value
                            .trim()
                            .parse::<u32>()
                            .map_err(|_| CoreError::Parse(format!("bad degree '{}'", value.trim())))?,
                    )
                }
                other => return Err(CoreError::Parse(format!("unknown key '{other}' in function spec"))),
            }
        }
        let num = num.ok_or_else(|| CoreError::Parse(format!("missing 'num' in '{spec}'")))?;
        let d = d.ok_or_else(|| CoreError::Parse(format!("missing 'd' in '{spec}'")))?;
        MeroFunc::parse(data, &num, d)
    }

    pub fn constant(data: &Arc<SpectralData>, c: GaussQ) -> Self {
        let n = data.n();
        let num = BiForm::from_terms(n, 0, 0, [(crate::biform::Mono::new(0, vec![0; n]), c)]).expect("constant");
        MeroFunc { data: data.clone(), num }
    }

    pub fn data(&self) -> &Arc<SpectralData> {
        &self.data
    }

    pub fn numerator(&self) -> &BiForm<GaussQ> {
        &self.num
    }

    pub fn degree(&self) -> u32 {
        self.num.dz()
    }

    /// Same function over `f^(d+e)`.
    pub fn lift(&self, e: u32) -> Self {
        let fe = self.data.f().pow(e, &GaussQ::one());
        MeroFunc { data: self.data.clone(), num: self.num.mul(&fe).expect("same arity") }
    }

    pub fn mul(&self, rhs: &MeroFunc) -> Result<Self> {
        if self.data.f() != rhs.data.f() {
            return Err(CoreError::VarietyMismatch);
        }
        Ok(MeroFunc { data: self.data.clone(), num: self.num.mul(&rhs.num)? })
    }

    pub fn add(&self, rhs: &MeroFunc) -> Result<Self> {
        if self.data.f() != rhs.data.f() {
            return Err(CoreError::VarietyMismatch);
        }
        let d = self.degree().max(rhs.degree());
        let a = self.lift(d - self.degree());
        let b = rhs.lift(d - rhs.degree());
        Ok(MeroFunc { data: self.data.clone(), num: a.num.add(&b.num)? })
    }

    pub fn scale(&self, c: &GaussQ) -> Self {
        MeroFunc { data: self.data.clone(), num: self.num.scale(c) }
    }
}

impl fmt::Display for MeroFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "num = {}; d = {}", self.num.display_with(self.data.block_prefix()), self.degree())
    }
}

/// Basis of the numerators of degree `d` that descend.
pub fn mero_basis(data: &Arc<SpectralData>, d: u32) -> Result<Vec<MeroFunc>> {
    let n = data.n();
    let zero = GaussQ::zero();
    let monos = monomials(n, d, d);
    let rows = monomials(n, 0, d).len();
    let s = data.scale().pow(d);
    let cols: Vec<Vec<GaussQ>> = monos
        .iter()
        .map(|m| {
            let unit = BiForm::from_terms(n, d, d, [(m.clone(), GaussQ::one())])?;
            Ok(data.gluing_residual(&unit, &s)?.to_vec(&zero))
        })
        .collect::<Result<_>>()?;
    let matrix: Vec<Vec<GaussQ>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    linalg::kernel(&matrix, monos.len(), &zero)
        .into_iter()
        .map(|v| Ok(MeroFunc { data: data.clone(), num: BiForm::from_vec(n, d, d, &v)? }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn preset_functions_descend() {
        for (data, lambdas) in [
            (presets::gamma_n2(), presets::gamma_n2_lambdas()),
            (presets::omega(), presets::omega_lambdas()),
        ] {
            for spec in lambdas {
                MeroFunc::parse_spec(&data, &spec).unwrap();
            }
        }
    }

    #[test]
    fn rejects_non_descending() {
        let data = presets::gamma_n2();
        let err = MeroFunc::parse(&data, "z1*t1", 1).unwrap_err();
        assert!(matches!(err, CoreError::NotAdmissible(_)));
    }

    #[test]
    fn closed_under_products_and_sums() {
        let data = presets::omega();
        let basis = mero_basis(&data, 1).unwrap();
        for a in &basis {
            for b in &basis {
                assert!(check_descent(&data, a.mul(b).unwrap().numerator()).unwrap());
                assert!(check_descent(&data, a.add(&b.lift(1)).unwrap().numerator()).unwrap());
            }
        }
    }
}
