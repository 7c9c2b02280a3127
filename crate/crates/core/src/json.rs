//! JSON wire format.
//!
//! A Gaussian rational is `[re_num, re_den, im_num, im_den]` as decimal
//! strings. A `K` element is `{minexp, num_coeffs, den_coeffs}` with
//! coefficients in ascending `q`-power order. Operators are
//! `{size, context_c, entries: [{row, col, alpha, coeff}]}`, listing nonzero
//! coefficients only.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biform::{BiForm, Mono};
use crate::diffop::{DiffOp, ScalarOp};
use crate::error::{CoreError, Result};
use crate::field::{ExpContext, ExpRat, Field, GaussQ, UPoly};

pub type GaussJson = [String; 4];

pub fn gauss_to_json(g: &GaussQ) -> GaussJson {
    g.to_parts()
}

pub fn gauss_from_json(j: &GaussJson) -> Result<GaussQ> {
    GaussQ::from_parts(j)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpRatJson {
    pub minexp: i64,
    pub num_coeffs: Vec<GaussJson>,
    pub den_coeffs: Vec<GaussJson>,
}

pub fn exprat_to_json(e: &ExpRat) -> ExpRatJson {
    ExpRatJson {
        minexp: e.minexp(),
        num_coeffs: e.num_coeffs().iter().map(gauss_to_json).collect(),
        den_coeffs: e.den_coeffs().iter().map(gauss_to_json).collect(),
    }
}

fn upoly_from_json(coeffs: &[GaussJson]) -> Result<UPoly> {
    Ok(UPoly::new(coeffs.iter().map(gauss_from_json).collect::<Result<_>>()?))
}

pub fn exprat_from_json(ctx: &Arc<ExpContext>, j: &ExpRatJson) -> Result<ExpRat> {
    ExpRat::from_parts(ctx, j.minexp, upoly_from_json(&j.num_coeffs)?, upoly_from_json(&j.den_coeffs)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson<C> {
    pub j: u32,
    pub alpha: Vec<u32>,
    pub coeff: C,
}

/// A bihomogeneous form; `j` is the power of `z1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiFormJson<C> {
    pub n: usize,
    pub dz: u32,
    pub dt: u32,
    pub terms: Vec<TermJson<C>>,
}

pub fn biform_to_json<C: Field, J>(f: &BiForm<C>, coeff: impl Fn(&C) -> J) -> BiFormJson<J> {
    BiFormJson {
        n: f.n(),
        dz: f.dz(),
        dt: f.dt(),
        terms: f
            .terms()
            .iter()
            .map(|(m, c)| TermJson { j: m.j, alpha: m.alpha.clone(), coeff: coeff(c) })
            .collect(),
    }
}

pub fn biform_from_json<C: Field, J>(j: &BiFormJson<J>, coeff: impl Fn(&J) -> Result<C>) -> Result<BiForm<C>> {
    let terms = j
        .terms
        .iter()
        .map(|t| Ok((Mono::new(t.j, t.alpha.clone()), coeff(&t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    BiForm::from_terms(j.n, j.dz, j.dt, terms)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub alpha: Vec<u32>,
    pub coeff: ExpRatJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub size: usize,
    pub context_c: Vec<GaussJson>,
    pub entries: Vec<EntryJson>,
}

pub fn operator_to_json(op: &DiffOp) -> OperatorJson {
    let mut entries = Vec::new();
    for (row, r) in op.rows().iter().enumerate() {
        for (col, e) in r.iter().enumerate() {
            for (alpha, c) in e.terms() {
                entries.push(EntryJson { row, col, alpha: alpha.clone(), coeff: exprat_to_json(c) });
            }
        }
    }
    OperatorJson {
        size: op.size(),
        context_c: op.context().weights().iter().map(gauss_to_json).collect(),
        entries,
    }
}

pub fn operator_from_json(j: &OperatorJson) -> Result<DiffOp> {
    let ctx = ExpContext::new(j.context_c.iter().map(gauss_from_json).collect::<Result<_>>()?);
    type Terms = Vec<(Vec<u32>, ExpRat)>;
    let mut terms: Vec<Vec<Terms>> = vec![vec![Vec::new(); j.size]; j.size];
    for e in &j.entries {
        if e.row >= j.size || e.col >= j.size {
            return Err(CoreError::Parse(format!("entry ({}, {}) outside a {} operator", e.row, e.col, j.size)));
        }
        if e.alpha.len() != ctx.n() {
            return Err(CoreError::Parse(format!("multi-index {:?} has wrong length", e.alpha)));
        }
        terms[e.row][e.col].push((e.alpha.clone(), exprat_from_json(&ctx, &e.coeff)?));
    }
    let rows = terms
        .into_iter()
        .map(|r| r.into_iter().map(|t| ScalarOp::from_terms(&ctx, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    DiffOp::from_rows(&ctx, rows)
}

/// Serializes one JSON line.
pub fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

pub fn from_line<T: for<'de> Deserialize<'de>>(line: &str) -> Result<T> {
    serde_json::from_str(line).map_err(|e| CoreError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::OperatorBuilder;
    use crate::presets;

    #[test]
    fn gauss_wire_form() {
        let g = GaussQ::complex(-3, 4, 1, 1);
        assert_eq!(gauss_to_json(&g), ["-3", "4", "1", "1"].map(String::from));
        assert_eq!(gauss_from_json(&gauss_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn exprat_round_trip() {
        let ctx = ExpContext::new(vec![GaussQ::one(), GaussQ::from_int(-1)]);
        let q = ExpRat::q(&ctx);
        let e = q.checked_div(&q.checked_sub(&ExpRat::one(&ctx)).unwrap().powi(2).unwrap()).unwrap();
        let j = exprat_to_json(&e);
        assert_eq!(j.minexp, 1);
        assert_eq!(exprat_from_json(&ctx, &j).unwrap(), e);
    }

    #[test]
    fn operators_round_trip_byte_identically() {
        let (_, basis, lambdas) = presets::load("omega").unwrap();
        let builder = OperatorBuilder::new(basis);
        for lambda in &lambdas {
            let op = builder.build(lambda).unwrap();
            let line = to_line(&operator_to_json(&op));
            let back = operator_from_json(&from_line(&line).unwrap()).unwrap();
            assert_eq!(back, op);
            assert_eq!(to_line(&operator_to_json(&back)), line);
        }
    }

    #[test]
    fn biform_round_trip() {
        let data = presets::gamma_n2();
        let f = data.f();
        let j = biform_to_json(f, gauss_to_json);
        assert_eq!(&biform_from_json(&j, gauss_from_json).unwrap(), f);
    }
}
