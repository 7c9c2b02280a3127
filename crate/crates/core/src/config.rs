//! TOML description of a spectral datum, an optional basis and a list of
//! meromorphic functions.
//!
//! ```toml
//! lambdas = ["num = 2*(z1*t2 + z2*t1); d = 1"]
//!
//! [gamma]
//! n = 2
//! P = ["0", "1", "1", "0"]
//! A = "1"
//! Lambda = "1"
//! f = "-z1*t1 - z2*t2"
//!
//! [[gamma.flows]]
//! form = "z1*t2 + z2*(t1 - i*t2)"
//! c = "-i"
//! ```

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biform::{BiForm, MatrixP};
use crate::error::{CoreError, Result};
use crate::field::GaussQ;
use crate::mero::MeroFunc;
use crate::module::ModuleBasis;
use crate::parse::parse_gauss;
use crate::spectral::{FlowForm, GammaData, OmegaData, SpectralData};

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FlowEntry {
    pub form: String,
    pub c: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub h: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GammaSection {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "Lambda", default = "one")]
    pub lambda: String,
    pub f: String,
    pub flows: Vec<FlowEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OmegaSection {
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "Lambda", default = "one")]
    pub lambda: String,
    pub g: String,
    pub flows: Vec<FlowEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisEntry>,
}

fn one() -> String {
    "1".into()
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSection>,
}

fn parse_flows(flows: &[FlowEntry], n: usize) -> Result<Vec<FlowForm>> {
    flows
        .iter()
        .map(|fl| Ok(FlowForm { form: BiForm::parse(&fl.form, n, Some((1, 1)))?, c: parse_gauss(&fl.c)? }))
        .collect()
}

fn check_point(p: &Option<String>, expected: (i64, i64), name: &str) -> Result<()> {
    let Some(text) = p else { return Ok(()) };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(CoreError::Parse(format!("{name} must be written 'a:b', got '{text}'")));
    }
    let a = parse_gauss(parts[0])?;
    let b = parse_gauss(parts[1])?;
    let (ea, eb) = (GaussQ::from_int(expected.0), GaussQ::from_int(expected.1));
    // Projective equality with the normalized point.
    if (&(&a * &eb) - &(&b * &ea)).is_zero() && !(a.is_zero() && b.is_zero()) {
        Ok(())
    } else {
        Err(CoreError::PreconditionViolated(format!(
            "{name} = {text}: gluing points must be normalized to p1 = 1:0 and p2 = 0:1"
        )))
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
        match (&cfg.gamma, &cfg.omega) {
            (Some(_), Some(_)) => Err(CoreError::Parse("config has both [gamma] and [omega]".into())),
            (None, None) => Err(CoreError::Parse("config needs a [gamma] or an [omega] table".into())),
            _ => Ok(cfg),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Parses every field into a spectral datum. Identities are not checked here.
    pub fn spectral_data(&self) -> Result<Arc<SpectralData>> {
        if let Some(g) = &self.gamma {
            check_point(&g.p1, (1, 0), "p1")?;
            check_point(&g.p2, (0, 1), "p2")?;
            if g.p.len() != g.n * g.n {
                return Err(CoreError::Parse(format!("P needs {} entries, got {}", g.n * g.n, g.p.len())));
            }
            let entries = g.p.iter().map(|s| parse_gauss(s)).collect::<Result<Vec<_>>>()?;
            SpectralData::gamma(GammaData {
                p: MatrixP::from_row_major(g.n, &entries)?,
                a: parse_gauss(&g.a)?,
                lambda: parse_gauss(&g.lambda)?,
                f: BiForm::parse(&g.f, g.n, Some((1, 1)))?,
                flows: parse_flows(&g.flows, g.n)?,
            })
        } else {
            let o = self.omega.as_ref().expect("checked on parse");
            SpectralData::omega(OmegaData {
                b: parse_gauss(&o.b)?,
                lambda: parse_gauss(&o.lambda)?,
                g: BiForm::parse(&o.g, 2, Some((1, 1)))?,
                flows: parse_flows(&o.flows, 2)?,
            })
        }
    }

    fn basis_texts(&self) -> Vec<&str> {
        let entries = match (&self.gamma, &self.omega) {
            (Some(g), _) => &g.basis,
            (_, Some(o)) => &o.basis,
            _ => return Vec::new(),
        };
        entries.iter().map(|b| b.h.as_str()).collect()
    }

    /// The supplied basis if any, else the echelon basis.
    pub fn basis(&self, data: &Arc<SpectralData>) -> Result<ModuleBasis> {
        let texts = self.basis_texts();
        if texts.is_empty() {
            ModuleBasis::canonical(data)
        } else {
            ModuleBasis::parse(data, &texts)
        }
    }

    pub fn has_basis(&self) -> bool {
        !self.basis_texts().is_empty()
    }

    pub fn lambdas(&self, data: &Arc<SpectralData>) -> Result<Vec<MeroFunc>> {
        self.lambdas.iter().map(|s| MeroFunc::parse_spec(data, s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn presets_round_trip() {
        for text in [presets::GAMMA_N2, presets::OMEGA, presets::GAMMA_N3] {
            let cfg = ConfigFile::parse(text).unwrap();
            assert_eq!(ConfigFile::parse(&cfg.to_toml()).unwrap(), cfg);
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = presets::GAMMA_N2.replace("[gamma]", "[gamma]\ncolour = \"red\"");
        assert!(matches!(ConfigFile::parse(&text), Err(CoreError::Parse(_))));
    }

    #[test]
    fn points_must_be_normalized() {
        let text = presets::GAMMA_N2.replace("[gamma]", "[gamma]\np1 = \"2:0\"\np2 = \"1:1\"");
        let cfg = ConfigFile::parse(&text).unwrap();
        assert!(matches!(cfg.spectral_data(), Err(CoreError::PreconditionViolated(_))));
        let ok = presets::GAMMA_N2.replace("[gamma]", "[gamma]\np1 = \"3:0\"\np2 = \"0:1\"");
        ConfigFile::parse(&ok).unwrap().spectral_data().unwrap();
    }
}
