//! Built-in spectral data: the two worked two-dimensional examples and a
//! three-dimensional `Γ` used for rank and flow-space checks.

use std::sync::Arc;

use crate::config::ConfigFile;
use crate::mero::MeroFunc;
use crate::module::ModuleBasis;
use crate::spectral::SpectralData;

pub const GAMMA_N2: &str = r#"lambdas = [
    "num = 2*(z1*t2 + z2*t1); d = 1",
    "num = i*z1*z2*(t2^2 - t1^2); d = 2",
    "num = z1^2*t2^2 + 3*z1*z2*t1*t2 + z2^2*t1^2; d = 2",
]

[gamma]
n = 2
P = ["0", "1", "1", "0"]
A = "1"
Lambda = "1"
f = "-z1*t1 - z2*t2"

[[gamma.flows]]
form = "z1*t2 + z2*(t1 - i*t2)"
c = "-i"

[[gamma.flows]]
form = "-z1*t2 - z2*(t1 + i*t2)"
c = "-i"

[[gamma.basis]]
h = "z1*t1 + q*z2*t2"

[[gamma.basis]]
h = "z1*t2 + q*z2*t1"
"#;

pub const OMEGA: &str = r#"lambdas = [
    "num = z2*w1; d = 1",
    "num = z1*z2*w1^2; d = 2",
    "num = z1*w1*z2*w2; d = 2",
    "num = z1*z2*w2^2 + z1^2*w1*w2; d = 2",
]

[omega]
B = "1"
Lambda = "1"
g = "z1*w1 + z1*w2 + z2*w2"

[[omega.flows]]
form = "z1*w1 + 2*z2*w1 - z2*w2"
c = "1"

[[omega.flows]]
form = "-z1*w1 + 2*z2*w1 + z2*w2"
c = "-1"

[[omega.basis]]
h = "z2*w1"

[[omega.basis]]
h = "q^-1*z1*w1 + z1*w2 + q*z2*w2"
"#;

pub const GAMMA_N3: &str = r#"[gamma]
n = 3
P = ["1", "1", "0", "0", "2", "1", "0", "0", "3"]
A = "1"
Lambda = "1"
f = "z1*(t1 + 3*t2 + 4*t3) + z2*(t1 + t2 + t3)"

[[gamma.flows]]
form = "z1*(2*t1 + 4*t2 + 4*t3) + z2*t1"
c = "1"

[[gamma.flows]]
form = "z1*(2*t1 + 8*t2 + 9*t3) + z2*t2"
c = "2"

[[gamma.flows]]
form = "-z1*(t1 + 3*t2 + t3) + z2*t3"
c = "-1"
"#;

pub const NAMES: [&str; 3] = ["gamma-n2", "omega", "gamma-n3"];

/// TOML text of a preset by name.
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "gamma-n2" => Some(GAMMA_N2),
        "omega" => Some(OMEGA),
        "gamma-n3" => Some(GAMMA_N3),
        _ => None,
    }
}

pub fn config(name: &str) -> Option<ConfigFile> {
    source(name).map(|s| ConfigFile::parse(s).expect("preset parses"))
}

fn data(text: &str) -> Arc<SpectralData> {
    ConfigFile::parse(text).and_then(|c| c.spectral_data()).expect("preset is well formed")
}

pub fn gamma_n2() -> Arc<SpectralData> {
    data(GAMMA_N2)
}

pub fn omega() -> Arc<SpectralData> {
    data(OMEGA)
}

pub fn gamma_n3() -> Arc<SpectralData> {
    data(GAMMA_N3)
}

pub fn gamma_n2_lambdas() -> Vec<String> {
    ConfigFile::parse(GAMMA_N2).expect("preset parses").lambdas
}

pub fn omega_lambdas() -> Vec<String> {
    ConfigFile::parse(OMEGA).expect("preset parses").lambdas
}

/// Spectral datum, its listed basis and its listed functions.
pub fn load(name: &str) -> Option<(Arc<SpectralData>, ModuleBasis, Vec<MeroFunc>)> {
    let cfg = config(name)?;
    let data = cfg.spectral_data().expect("preset is well formed");
    let basis = cfg.basis(&data).expect("preset basis is free");
    let lambdas = cfg.lambdas(&data).expect("preset functions descend");
    Some((data, basis, lambdas))
}
