//! Python bindings: spectral data, module bases, meromorphic functions and
//! their operators, plus the reproduction and embedding probes.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rational_ba::config::ConfigFile;
use rational_ba::diffop::{DiffOp, OperatorBuilder};
use rational_ba::embedding::{injectivity_probe, EmbeddingMap};
use rational_ba::golden::{self, GoldenFile};
use rational_ba::mero::MeroFunc;
use rational_ba::module::{self, ModuleBasis};
use rational_ba::spectral::{self, Variety};
use rational_ba::{json, presets, CoreError};

create_exception!(rational_ba_py, MathError, PyException);

fn err(e: CoreError) -> PyErr {
    match e {
        CoreError::Parse(m) => PyValueError::new_err(m),
        other => MathError::new_err(other.to_string()),
    }
}

#[pyclass(name = "SpectralData", frozen)]
struct PySpectralData {
    inner: Arc<spectral::SpectralData>,
    config: ConfigFile,
}

#[pymethods]
impl PySpectralData {
    /// Reads a TOML description with a `[gamma]` or `[omega]` table.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let config = ConfigFile::parse(text).map_err(err)?;
        let inner = config.spectral_data().map_err(err)?;
        Ok(PySpectralData { inner, config })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let text = presets::source(name).ok_or_else(|| PyValueError::new_err(format!("unknown preset '{name}'")))?;
        PySpectralData::from_toml(text)
    }

    #[getter]
    fn variety(&self) -> &'static str {
        match self.inner.variety() {
            Variety::Gamma => "gamma",
            Variety::Omega => "omega",
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// `(condition, passed)` for every genericity condition; raises if an
    /// identity fails.
    fn validate(&self) -> PyResult<Vec<(String, bool)>> {
        let report = spectral::report(&self.inner).map_err(err)?;
        Ok(report.checks.iter().map(|c| (c.condition.to_string(), c.passed)).collect())
    }

    fn flow_space_dimension(&self) -> PyResult<usize> {
        Ok(self.inner.flow_space().map_err(err)?.len())
    }

    fn grade_dimension(&self, k: u32) -> PyResult<usize> {
        Ok(module::grade_basis(&self.inner, k).map_err(err)?.dimension())
    }

    /// Basis listed in the config, or the echelon basis.
    fn basis(&self) -> PyResult<PyModuleBasis> {
        Ok(PyModuleBasis::wrap(self.config.basis(&self.inner).map_err(err)?))
    }

    fn echelon_basis(&self) -> PyResult<PyModuleBasis> {
        Ok(PyModuleBasis::wrap(ModuleBasis::canonical(&self.inner).map_err(err)?))
    }

    /// Functions listed in the config.
    fn lambdas(&self) -> PyResult<Vec<PyMeroFunc>> {
        Ok(self.config.lambdas(&self.inner).map_err(err)?.into_iter().map(|inner| PyMeroFunc { inner }).collect())
    }

    /// Parses `"num = <form>; d = <degree>"`.
    fn function(&self, spec: &str) -> PyResult<PyMeroFunc> {
        Ok(PyMeroFunc { inner: MeroFunc::parse_spec(&self.inner, spec).map_err(err)? })
    }
}

#[pyclass(name = "MeroFunc", frozen)]
struct PyMeroFunc {
    inner: MeroFunc,
}

#[pymethods]
impl PyMeroFunc {
    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn __mul__(&self, other: &PyMeroFunc) -> PyResult<PyMeroFunc> {
        Ok(PyMeroFunc { inner: self.inner.mul(&other.inner).map_err(err)? })
    }

    fn __add__(&self, other: &PyMeroFunc) -> PyResult<PyMeroFunc> {
        Ok(PyMeroFunc { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(name = "ModuleBasis", frozen)]
struct PyModuleBasis {
    builder: Arc<OperatorBuilder>,
}

impl PyModuleBasis {
    fn wrap(basis: ModuleBasis) -> Self {
        PyModuleBasis { builder: Arc::new(OperatorBuilder::new(basis)) }
    }
}

#[pymethods]
impl PyModuleBasis {
    fn __len__(&self) -> usize {
        self.builder.basis().len()
    }

    fn elements(&self) -> Vec<String> {
        self.builder.basis().elements().iter().map(|e| e.to_string()).collect()
    }

    /// `D(λ)` in this basis.
    fn operator(&self, lambda: &PyMeroFunc) -> PyResult<PyOperator> {
        Ok(PyOperator { inner: self.builder.build(&lambda.inner).map_err(err)? })
    }

    /// Whether each row of `op` applied to the basis gives `λψ_i`.
    fn eigen_relation(&self, op: &PyOperator, lambda: &PyMeroFunc) -> PyResult<Vec<bool>> {
        self.builder.eigen_relation(&op.inner, &lambda.inner).map_err(err)
    }
}

#[pyclass(name = "Operator", frozen)]
struct PyOperator {
    inner: DiffOp,
}

#[pymethods]
impl PyOperator {
    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    fn entry(&self, row: usize, col: usize) -> PyResult<String> {
        let n = self.inner.size();
        if row >= n || col >= n {
            return Err(PyValueError::new_err(format!("entry ({row}, {col}) outside a {n}x{n} operator")));
        }
        Ok(self.inner.entry(row, col).to_text(false))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn to_json(&self) -> String {
        json::to_line(&json::operator_to_json(&self.inner))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyOperator> {
        let j = json::from_line(text).map_err(err)?;
        Ok(PyOperator { inner: json::operator_from_json(&j).map_err(err)? })
    }

    fn commutator(&self, other: &PyOperator) -> PyResult<PyOperator> {
        Ok(PyOperator { inner: self.inner.commutator(&other.inner).map_err(err)? })
    }

    fn __matmul__(&self, other: &PyOperator) -> PyResult<PyOperator> {
        Ok(PyOperator { inner: self.inner.compose(&other.inner).map_err(err)? })
    }

    fn __add__(&self, other: &PyOperator) -> PyResult<PyOperator> {
        Ok(PyOperator { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn __eq__(&self, other: &PyOperator) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_text(false)
    }
}

/// Recomputes the worked-example operators of a preset; returns the located
/// mismatches as `(lambda, row, col, expected, computed)`, 1-based.
#[pyfunction]
fn reproduce(preset: &str) -> PyResult<Vec<(String, usize, usize, String, String)>> {
    let file = GoldenFile::builtin(preset).ok_or_else(|| PyValueError::new_err(format!("no reference for '{preset}'")))?;
    let r = golden::reproduce(&file).map_err(err)?;
    Ok(r.mismatches
        .iter()
        .map(|m| (m.lambda.clone(), m.row + 1, m.col + 1, m.expected.to_text(false), m.computed.to_text(false)))
        .collect())
}

/// Seeded embedding probe; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (variety, samples = 100, seed = 0))]
fn embed_check(variety: &str, samples: usize, seed: u64) -> PyResult<String> {
    let map = match variety {
        "omega" => EmbeddingMap::Phi2,
        "gamma" => EmbeddingMap::Phi1(presets::gamma_n2().to_gamma().expect("gamma preset").p),
        other => return Err(PyValueError::new_err(format!("unknown variety '{other}'"))),
    };
    Ok(json::to_line(&injectivity_probe(&map, samples, seed).map_err(err)?))
}

/// Runs the command-line interface; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = rational_ba::cli::run(std::iter::once("rational-ba".to_string()).chain(args), &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
}

#[pymodule]
fn rational_ba_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectralData>()?;
    m.add_class::<PyMeroFunc>()?;
    m.add_class::<PyModuleBasis>()?;
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(embed_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("MathError", m.py().get_type::<MathError>())?;
    Ok(())
}
