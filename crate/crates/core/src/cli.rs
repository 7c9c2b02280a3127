//! Command-line front end. `run` takes the argument list and two sinks and
//! returns the process exit code: 0 success, 1 mathematical failure, 2 usage
//! or parse failure.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::config::ConfigFile;
use crate::diffop::{DiffOp, OperatorBuilder};
use crate::embedding::{injectivity_probe, EmbeddingMap, ProbeReport};
use crate::error::{CoreError, Result};
use crate::golden::{self, GoldenFile};
use crate::json::{self, BiFormJson, ExpRatJson, OperatorJson};
use crate::mero::MeroFunc;
use crate::module::{self, ModuleBasis};
use crate::presets;
use crate::spectral::{self, SpectralData};

#[derive(Parser, Debug)]
#[command(name = "rational-ba", version, about = "Baker-Akhiezer modules and commuting operators on rational varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisMode {
    /// The basis listed in the config, or the echelon basis if none is listed.
    Supplied,
    Echelon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VarietyArg {
    Gamma,
    Omega,
}

#[derive(Args, Debug)]
struct Source {
    /// TOML config file.
    config: Option<PathBuf>,
    /// Built-in data set instead of a file: gamma-n2, omega or gamma-n3.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the gluing identities and genericity conditions.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Print a basis of one graded piece of the module.
    ModuleBasis {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1)]
        grade: u32,
        #[arg(long, value_enum, default_value_t = BasisMode::Supplied)]
        basis: BasisMode,
    },
    /// Build D(λ) for each function.
    Operator {
        #[command(flatten)]
        source: Source,
        /// "num = <form>; d = <degree>"; repeatable. Defaults to the config's list.
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
        /// Also verify the eigen-relation and all pairwise commutators.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = BasisMode::Supplied)]
        basis: BasisMode,
    },
    /// Pairwise commutators of the operators of the given functions.
    Commute {
        #[command(flatten)]
        source: Source,
        #[arg(long = "lambda")]
        lambdas: Vec<String>,
        #[arg(long, value_enum, default_value_t = BasisMode::Supplied)]
        basis: BasisMode,
    },
    /// Recompute the worked examples and diff them against the reference operators.
    Reproduce {
        #[arg(value_parser = ["gamma-n2", "omega"])]
        which: String,
        /// Reference file to use instead of the built-in one.
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Seeded probe of the projective embedding of a variety.
    EmbedCheck {
        #[arg(long, value_enum)]
        variety: VarietyArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Config supplying P for the first variety; defaults to the gamma-n2 preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

/// One JSON output line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Record {
    Check { name: String, passed: bool },
    Validation { variety: String, n: usize, passed: bool },
    BasisElement { index: usize, grade: u32, text: String, numerator: BiFormJson<ExpRatJson> },
    Grade { grade: u32, dimension: usize, expected: usize },
    Operator { lambda: String, text: Vec<String>, operator: OperatorJson },
    EigenRelation { lambda: String, row: usize, passed: bool },
    Commutator { a: String, b: String, zero: bool, operator: OperatorJson },
    Mismatch { lambda: String, row: usize, col: usize, alpha: Vec<u32>, expected: String, computed: String },
    Reproduction { preset: String, operators: usize, mismatches: usize, passed: bool },
    Probe(ProbeReport),
    Error { code: i32, message: String },
}

struct Out<'a> {
    format: Format,
    out: &'a mut dyn Write,
}

impl Out<'_> {
    fn emit(&mut self, record: &Record, text: impl FnOnce() -> String) {
        let line = match self.format {
            Format::Json => json::to_line(record),
            Format::Text => text(),
        };
        let _ = writeln!(self.out, "{line}");
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}

pub fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Parse(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let format = match &cli.command {
        Command::Validate { source }
        | Command::ModuleBasis { source, .. }
        | Command::Operator { source, .. }
        | Command::Commute { source, .. } => source.format,
        Command::Reproduce { format, .. } | Command::EmbedCheck { format, .. } => *format,
    };
    let mut o = Out { format, out };
    match dispatch(cli.command, &mut o) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let message = e.to_string();
            let _ = writeln!(err, "error: {message}");
            if format == Format::Json {
                o.emit(&Record::Error { code, message }, String::new);
            }
            code
        }
    }
}

fn dispatch(command: Command, o: &mut Out) -> Result<i32> {
    match command {
        Command::Validate { source } => validate(&load(&source)?, o),
        Command::ModuleBasis { source, grade, basis } => module_basis(&load(&source)?, grade, basis, o),
        Command::Operator { source, lambdas, check, basis } => operator(&load(&source)?, &lambdas, check, basis, o),
        Command::Commute { source, lambdas, basis } => commute(&load(&source)?, &lambdas, basis, o),
        Command::Reproduce { which, golden, .. } => reproduce(&which, golden, o),
        Command::EmbedCheck { variety, samples, seed, config, .. } => embed_check(variety, samples, seed, config, o),
    }
}

fn load(source: &Source) -> Result<ConfigFile> {
    match (&source.config, &source.preset) {
        (Some(path), _) => ConfigFile::load(path),
        (None, Some(name)) => presets::config(name).ok_or_else(|| {
            CoreError::Parse(format!("unknown preset '{name}', expected one of {}", presets::NAMES.join(", ")))
        }),
        (None, None) => Err(CoreError::Parse("give a config file or --preset".into())),
    }
}

fn variety_name(data: &SpectralData) -> &'static str {
    match data.variety() {
        spectral::Variety::Gamma => "gamma",
        spectral::Variety::Omega => "omega",
    }
}

fn validate(cfg: &ConfigFile, o: &mut Out) -> Result<i32> {
    let data = cfg.spectral_data()?;
    let mut all = true;
    let mut check = |o: &mut Out, name: String, passed: bool| {
        all &= passed;
        o.emit(&Record::Check { name: name.clone(), passed }, || format!("{} {name}", mark(passed)));
    };
    let identities = match spectral::report(&data) {
        Ok(report) => {
            check(o, "gluing identities".into(), true);
            Some(report)
        }
        Err(e @ CoreError::IdentityViolation { .. }) => {
            check(o, e.to_string(), false);
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(report) = &identities {
        for c in &report.checks {
            check(o, c.condition.to_string(), c.passed);
        }
        if report.passed() {
            if cfg.has_basis() {
                let ok = cfg.basis(&data).map(|_| true).or_else(tolerate)?;
                check(o, "supplied basis is a free basis of the module".into(), ok);
            }
            for spec in &cfg.lambdas {
                let ok = MeroFunc::parse_spec(&data, spec).map(|_| true).or_else(tolerate)?;
                check(o, format!("{spec} descends"), ok);
            }
        }
    }
    let passed = all;
    o.emit(&Record::Validation { variety: variety_name(&data).into(), n: data.n(), passed }, || {
        format!("{} {} data with n = {}", if passed { "valid" } else { "invalid" }, variety_name(&data), data.n())
    });
    Ok(if passed { 0 } else { 1 })
}

/// Turns mathematical failures into a failed check; parse errors still abort.
fn tolerate(e: CoreError) -> Result<bool> {
    match e {
        CoreError::Parse(_) => Err(e),
        _ => Ok(false),
    }
}

fn basis_for(cfg: &ConfigFile, data: &Arc<SpectralData>, mode: BasisMode) -> Result<ModuleBasis> {
    match mode {
        BasisMode::Supplied => cfg.basis(data),
        BasisMode::Echelon => ModuleBasis::canonical(data),
    }
}

fn checked_data(cfg: &ConfigFile) -> Result<Arc<SpectralData>> {
    let data = cfg.spectral_data()?;
    spectral::report(&data)?.ensure()?;
    Ok(data)
}

fn module_basis(cfg: &ConfigFile, grade: u32, mode: BasisMode, o: &mut Out) -> Result<i32> {
    let data = checked_data(cfg)?;
    let elements = if grade == 1 {
        basis_for(cfg, &data, mode)?.elements().to_vec()
    } else {
        module::grade_basis(&data, grade)?.elements().to_vec()
    };
    for (index, e) in elements.iter().enumerate() {
        let text = e.to_string();
        let numerator = json::biform_to_json(e.numerator(), json::exprat_to_json);
        o.emit(&Record::BasisElement { index, grade, text: text.clone(), numerator }, || {
            format!("psi{} = {text}", index + 1)
        });
    }
    let expected = module::expected_dimension(data.n(), grade);
    let dimension = elements.len();
    o.emit(&Record::Grade { grade, dimension, expected }, || {
        format!("grade {grade}: dimension {dimension} (expected {expected})")
    });
    Ok(if dimension == expected { 0 } else { 1 })
}

fn functions(cfg: &ConfigFile, data: &Arc<SpectralData>, given: &[String]) -> Result<Vec<(String, MeroFunc)>> {
    let specs: Vec<String> = if given.is_empty() { cfg.lambdas.clone() } else { given.to_vec() };
    if specs.is_empty() {
        return Err(CoreError::Parse("no functions: pass --lambda or list lambdas in the config".into()));
    }
    specs
        .into_iter()
        .map(|s| {
            let f = MeroFunc::parse_spec(data, &s)?;
            Ok((s, f))
        })
        .collect()
}

type Built = Vec<(String, MeroFunc, DiffOp)>;

fn build_all(cfg: &ConfigFile, lambdas: &[String], mode: BasisMode) -> Result<(OperatorBuilder, Built)> {
    let data = checked_data(cfg)?;
    let fs = functions(cfg, &data, lambdas)?;
    let builder = OperatorBuilder::new(basis_for(cfg, &data, mode)?);
    let ops = std::thread::scope(|s| {
        let handles: Vec<_> = fs
            .iter()
            .map(|(_, f)| {
                let builder = &builder;
                s.spawn(move || builder.build(f))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("operator worker")).collect::<Result<Vec<_>>>()
    })?;
    let built = fs.into_iter().zip(ops).map(|((s, f), op)| (s, f, op)).collect();
    Ok((builder, built))
}

fn emit_commutators(built: &[(String, MeroFunc, DiffOp)], o: &mut Out) -> Result<bool> {
    let mut all = true;
    for (i, (a, _, da)) in built.iter().enumerate() {
        for (b, _, db) in &built[i + 1..] {
            let c = da.commutator(db)?;
            let zero = c.is_zero();
            all &= zero;
            o.emit(
                &Record::Commutator { a: a.clone(), b: b.clone(), zero, operator: json::operator_to_json(&c) },
                || {
                    if zero {
                        format!("ok   [D({a}), D({b})] = 0")
                    } else {
                        format!("FAIL [D({a}), D({b})] =\n{}", c.to_text(false))
                    }
                },
            );
        }
    }
    Ok(all)
}

fn operator(cfg: &ConfigFile, lambdas: &[String], check: bool, mode: BasisMode, o: &mut Out) -> Result<i32> {
    let (builder, built) = build_all(cfg, lambdas, mode)?;
    let mut all = true;
    for (spec, f, op) in &built {
        let text: Vec<String> = op.to_text(false).lines().map(str::to_string).collect();
        o.emit(
            &Record::Operator { lambda: spec.clone(), text: text.clone(), operator: json::operator_to_json(op) },
            || format!("D({spec}) =\n{}", text.join("\n")),
        );
        if check {
            for (row, passed) in builder.eigen_relation(op, f)?.into_iter().enumerate() {
                all &= passed;
                o.emit(&Record::EigenRelation { lambda: spec.clone(), row, passed }, || {
                    format!("{} row {} of D({spec}) applied to the basis gives λ·psi{}", mark(passed), row + 1, row + 1)
                });
            }
        }
    }
    if check {
        all &= emit_commutators(&built, o)?;
    }
    Ok(if all { 0 } else { 1 })
}

fn commute(cfg: &ConfigFile, lambdas: &[String], mode: BasisMode, o: &mut Out) -> Result<i32> {
    let (_, built) = build_all(cfg, lambdas, mode)?;
    Ok(if emit_commutators(&built, o)? { 0 } else { 1 })
}

fn reproduce(which: &str, path: Option<PathBuf>, o: &mut Out) -> Result<i32> {
    let file = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CoreError::Parse(format!("cannot read {}: {e}", p.display())))?;
            let g = GoldenFile::parse(&text)?;
            if g.preset != which {
                return Err(CoreError::Parse(format!("{} holds operators for '{}', not '{which}'", p.display(), g.preset)));
            }
            g
        }
        None => GoldenFile::builtin(which).expect("value parser restricts the name"),
    };
    let r = golden::reproduce(&file)?;
    for m in &r.mismatches {
        let diff = m.difference();
        for alpha in diff.terms().keys() {
            let expected = m.expected.coeff(alpha).to_string();
            let computed = m.computed.coeff(alpha).to_string();
            let record = Record::Mismatch {
                lambda: m.lambda.clone(),
                row: m.row + 1,
                col: m.col + 1,
                alpha: alpha.clone(),
                expected: expected.clone(),
                computed: computed.clone(),
            };
            o.emit(&record, || {
                format!(
                    "mismatch D({})[{}{}] at alpha {:?}: expected {expected}, computed {computed}",
                    m.lambda,
                    m.row + 1,
                    m.col + 1,
                    alpha
                )
            });
        }
    }
    let passed = r.passed();
    let record = Record::Reproduction {
        preset: r.preset.clone(),
        operators: r.operators.len(),
        mismatches: r.mismatches.len(),
        passed,
    };
    o.emit(&record, || {
        format!(
            "{} {}: {} operators, {} mismatched entries",
            if passed { "reproduced" } else { "differs" },
            r.preset,
            r.operators.len(),
            r.mismatches.len()
        )
    });
    Ok(if passed { 0 } else { 1 })
}

fn embed_check(variety: VarietyArg, samples: usize, seed: u64, config: Option<PathBuf>, o: &mut Out) -> Result<i32> {
    let map = match variety {
        VarietyArg::Omega => EmbeddingMap::Phi2,
        VarietyArg::Gamma => {
            let cfg = match config {
                Some(p) => ConfigFile::load(&p)?,
                None => presets::config("gamma-n2").expect("preset"),
            };
            let data = cfg.spectral_data()?;
            let g = data
                .to_gamma()
                .ok_or_else(|| CoreError::Parse("embed-check --variety gamma needs a [gamma] config".into()))?;
            EmbeddingMap::Phi1(g.p)
        }
    };
    let report = injectivity_probe(&map, samples, seed)?;
    let passed = report.passed();
    let text = || {
        let mut lines = vec![format!(
            "{} {}: {} points, {} distinct pairs, {} glued pairs, {} duplicates skipped",
            if passed { "ok  " } else { "FAIL" },
            report.map,
            report.points,
            report.distinct_pairs,
            report.identified_pairs,
            report.skipped_duplicates
        )];
        lines.extend(report.point_failures.iter().map(|f| format!("  {} fails {}", f.point, f.check)));
        lines.extend(report.violations.iter().map(|v| format!("  {}: {} vs {}", v.kind, v.a, v.b)));
        lines.join("\n")
    };
    o.emit(&Record::Probe(report.clone()), text);
    Ok(if passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("rational-ba").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["validate"]).0, 2);
        assert_eq!(run_args(&["validate", "--preset", "nope"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn validate_presets() {
        for name in presets::NAMES {
            let (code, out, _) = run_args(&["validate", "--preset", name]);
            assert_eq!(code, 0, "{name}: {out}");
        }
    }

    #[test]
    fn json_lines_round_trip() {
        let (code, out, _) = run_args(&["operator", "--preset", "gamma-n2", "--check", "--format", "json"]);
        assert_eq!(code, 0);
        for line in out.lines() {
            let r: Record = json::from_line(line).unwrap();
            assert_eq!(json::to_line(&r), line);
        }
    }
}
