//! Reference operators for the built-in two-dimensional presets and an exact
//! entry-by-entry comparison against computed ones.

use serde::Deserialize;

use crate::diffop::{DiffOp, OperatorBuilder, ScalarOp};
use crate::error::{CoreError, Result};
use crate::presets;

pub const GAMMA_N2: &str = include_str!("../golden/gamma_n2.toml");
pub const OMEGA: &str = include_str!("../golden/omega.toml");

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenOperator {
    pub lambda: String,
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFile {
    pub preset: String,
    pub operators: Vec<GoldenOperator>,
}

impl GoldenFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))
    }

    pub fn builtin(preset: &str) -> Option<GoldenFile> {
        let text = match preset {
            "gamma-n2" => GAMMA_N2,
            "omega" => OMEGA,
            _ => return None,
        };
        Some(GoldenFile::parse(text).expect("embedded golden file parses"))
    }
}

/// One entry whose computed value differs from the reference.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub lambda: String,
    pub row: usize,
    pub col: usize,
    pub expected: ScalarOp,
    pub computed: ScalarOp,
}

impl Mismatch {
    /// `expected - computed`, the part that disagrees.
    pub fn difference(&self) -> ScalarOp {
        self.expected.sub(&self.computed)
    }
}

/// Outcome of recomputing every operator of a golden file.
#[derive(Clone, Debug)]
pub struct Reproduction {
    pub preset: String,
    pub operators: Vec<(String, DiffOp)>,
    pub mismatches: Vec<Mismatch>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Builds every listed operator with the preset's own basis and compares it
/// with the reference entries.
pub fn reproduce(golden: &GoldenFile) -> Result<Reproduction> {
    let (data, basis, _) = presets::load(&golden.preset)
        .ok_or_else(|| CoreError::Parse(format!("unknown preset '{}'", golden.preset)))?;
    let ctx = data.context().clone();
    let builder = OperatorBuilder::new(basis);
    let mut operators = Vec::new();
    let mut mismatches = Vec::new();
    for g in &golden.operators {
        let lambda = crate::mero::MeroFunc::parse_spec(&data, &g.lambda)?;
        let op = builder.build(&lambda)?;
        if g.entries.len() != op.size() {
            return Err(CoreError::SizeMismatch(op.size(), g.entries.len()));
        }
        for (i, row) in g.entries.iter().enumerate() {
            if row.len() != op.size() {
                return Err(CoreError::SizeMismatch(op.size(), row.len()));
            }
            for (j, text) in row.iter().enumerate() {
                let expected = ScalarOp::parse(text, &ctx)?;
                if &expected != op.entry(i, j) {
                    mismatches.push(Mismatch {
                        lambda: g.lambda.clone(),
                        row: i,
                        col: j,
                        expected,
                        computed: op.entry(i, j).clone(),
                    });
                }
            }
        }
        operators.push((g.lambda.clone(), op));
    }
    Ok(Reproduction { preset: golden.preset.clone(), operators, mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_file_reproduces() {
        let r = reproduce(&GoldenFile::builtin("gamma-n2").unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.operators.len(), 3);
    }

    #[test]
    fn omega_differences_are_located() {
        let r = reproduce(&GoldenFile::builtin("omega").unwrap()).unwrap();
        let at: Vec<(usize, usize, usize)> = r
            .mismatches
            .iter()
            .map(|m| {
                let k = r.operators.iter().position(|(l, _)| *l == m.lambda).unwrap();
                (k + 1, m.row + 1, m.col + 1)
            })
            .collect();
        assert_eq!(at, vec![(2, 2, 2), (3, 1, 2), (4, 2, 1)]);
    }

    #[test]
    fn tampered_entry_is_reported() {
        let text = GAMMA_N2.replace("[\"-1/2*(dx + dy)\"", "[\"-1/2*(dx - dy)\"");
        let r = reproduce(&GoldenFile::parse(&text).unwrap()).unwrap();
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!((r.mismatches[0].row, r.mismatches[0].col), (1, 0));
    }
}
