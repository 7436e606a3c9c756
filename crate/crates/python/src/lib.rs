//! Python bindings: `import oisac`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sim::config::{self, ExperimentConfig};
use sim::dsp::{self as dsp, ComplexFrame, Direction, RealWaveform};
use sim::harness::{self, SweepPoint};
use sim::report;

create_exception!(oisac, ConfigError, PyValueError, "Invalid parameters or configuration.");
create_exception!(oisac, DataError, PyRuntimeError, "Malformed input to a valid operation.");

fn py_err(e: sim::Error) -> PyErr {
    match e {
        sim::Error::Config(m) => ConfigError::new_err(m),
        sim::Error::Data(m) => DataError::new_err(m),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for sim::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Unitary DFT of a power-of-two length sequence.
#[pyfunction]
#[pyo3(signature = (x, inverse = false))]
fn dft(x: Vec<Complex64>, inverse: bool) -> PyResult<Vec<Complex64>> {
    let dir = if inverse { Direction::Inverse } else { Direction::Forward };
    let f = ComplexFrame::new(x, 1.0).py()?;
    Ok(dsp::dft(&f, dir).py()?.into_samples())
}

/// Analytic signal of an even-length real sequence.
#[pyfunction]
fn hilbert_analytic(x: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let w = RealWaveform::new(x, 1.0).py()?;
    Ok(dsp::hilbert_analytic(&w).py()?.into_samples())
}

/// Maximal-length sequence of the given degree (2..=16) as 0/1 values.
#[pyfunction]
fn msequence(degree: u32) -> PyResult<Vec<u8>> {
    Ok(dsp::msequence(degree).py()?.into_iter().map(u8::from).collect())
}

/// Adds `kappa` standard deviations of bias and clips at zero.
/// Returns `(samples, {"bias", "clipped_fraction", "clipped_energy_fraction"})`.
#[pyfunction]
fn dc_bias_and_clip<'py>(py: Python<'py>, x: Vec<f64>, kappa: f64) -> PyResult<(Vec<f64>, Bound<'py, PyDict>)> {
    let w = RealWaveform::new(x, 1.0).py()?;
    let (y, s) = dsp::dc_bias_and_clip(&w, kappa).py()?;
    let d = PyDict::new(py);
    d.set_item("bias", s.bias)?;
    d.set_item("clipped_fraction", s.clipped_fraction)?;
    d.set_item("clipped_energy_fraction", s.clipped_energy_fraction)?;
    Ok((y.into_samples(), d))
}

/// Gaussian upper tail probability.
#[pyfunction]
fn q_function(x: f64) -> f64 {
    harness::q_function(x)
}

/// Runs the built-in invariant checks; returns `(name, passed, detail)`.
#[pyfunction]
fn selftest(py: Python<'_>) -> Vec<(String, bool, String)> {
    py.detach(sim::selftest::run_selftest)
        .into_iter()
        .map(|c| (c.name.to_string(), c.passed, c.detail))
        .collect()
}

/// Weighted-sum power allocation over subcarriers.
#[pyclass(name = "AllocationProblem", from_py_object)]
#[derive(Clone)]
struct PyAllocationProblem {
    inner: harness::AllocationProblem,
}

#[pymethods]
impl PyAllocationProblem {
    #[new]
    #[pyo3(signature = (gains_comm, gains_sense, noise_variance = 1.0, total_power = 1.0, weight = 0.5))]
    fn new(gains_comm: Vec<f64>, gains_sense: Vec<f64>, noise_variance: f64, total_power: f64, weight: f64) -> PyResult<Self> {
        let inner = harness::AllocationProblem { gains_comm, gains_sense, noise_variance, total_power, weight };
        inner.validate().py()?;
        Ok(Self { inner })
    }

    fn solve(&self) -> PyResult<Vec<f64>> {
        harness::allocate_power(&self.inner).py()
    }

    fn objective(&self, powers: Vec<f64>) -> f64 {
        self.inner.objective(&powers)
    }

    fn kkt_violation(&self, powers: Vec<f64>) -> f64 {
        self.inner.kkt_violation(&powers)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Aggregated sweep output.
#[pyclass(name = "SweepResult", frozen, skip_from_py_object)]
struct PySweepResult {
    inner: harness::SweepResult,
}

fn point_dict<'py>(py: Python<'py>, p: &SweepPoint) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("snr_db", p.snr_db)?;
    d.set_item("ber", p.ber)?;
    d.set_item("ber_ci_low", p.ber_ci_low)?;
    d.set_item("ber_ci_high", p.ber_ci_high)?;
    d.set_item("ber_ci95", p.ber_ci95)?;
    d.set_item("rmse_m", p.rmse_m)?;
    d.set_item("n_bits", p.n_bits)?;
    d.set_item("n_trials", p.n_trials)?;
    d.set_item("n_error_events", p.n_error_events)?;
    d.set_item("clip_fraction", p.clip_fraction)?;
    d.set_item("wall_time_s", p.wall_time_s)?;
    Ok(d)
}

#[pymethods]
impl PySweepResult {
    #[getter]
    fn scheme(&self) -> &'static str {
        self.inner.scheme.as_str()
    }

    #[getter]
    fn snr_db(&self) -> Vec<f64> {
        self.inner.points.iter().map(|p| p.snr_db).collect()
    }

    #[getter]
    fn ber(&self) -> Vec<f64> {
        self.inner.ber()
    }

    #[getter]
    fn rmse_m(&self) -> Vec<f64> {
        self.inner.rmse()
    }

    #[getter]
    fn quantization_floor_m(&self) -> f64 {
        self.inner.quantization_floor_m
    }

    #[getter]
    fn points<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner.points.iter().map(|p| point_dict(py, p)).collect()
    }

    fn ber_settling_snr(&self, threshold: f64) -> Option<f64> {
        self.inner.ber_settling_snr(threshold)
    }

    fn rmse_settling_snr(&self, factor: f64) -> Option<f64> {
        self.inner.rmse_settling_snr(factor)
    }

    fn to_csv(&self) -> String {
        report::sweep_csv(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }
}

/// A parsed and validated experiment configuration.
#[pyclass(name = "Experiment", skip_from_py_object)]
struct PyExperiment {
    cfg: ExperimentConfig,
}

#[pymethods]
impl PyExperiment {
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Self { cfg: config::parse_config(text).py()? })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self { cfg: config::load_config(&path).py()? })
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.cfg.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.cfg.seed = seed;
    }

    /// Fully resolved configuration as TOML.
    fn to_toml(&self) -> String {
        self.cfg.to_toml()
    }

    #[pyo3(signature = (threads = None))]
    fn sweep(&self, py: Python<'_>, threads: Option<usize>) -> PyResult<PySweepResult> {
        let spec = self.cfg.sweep_spec().py()?;
        let inner = py.detach(|| harness::with_threads(threads, || harness::run_sweep(&spec))).py()?.py()?;
        Ok(PySweepResult { inner })
    }

    /// Returns `[(bias_factor, SweepResult), ...]`.
    #[pyo3(signature = (threads = None))]
    fn scan_bias(&self, py: Python<'_>, threads: Option<usize>) -> PyResult<Vec<(f64, PySweepResult)>> {
        let spec = self.cfg.sweep_spec().py()?;
        let kappas = self.cfg.bias_factors.clone();
        let scan = py
            .detach(|| harness::with_threads(threads, || harness::bias_tradeoff_scan(&spec, &kappas)))
            .py()?
            .py()?;
        Ok(scan.into_iter().map(|e| (e.bias_factor, PySweepResult { inner: e.result })).collect())
    }

    fn allocation(&self) -> PyResult<PyAllocationProblem> {
        match &self.cfg.allocation {
            Some(p) => Ok(PyAllocationProblem { inner: p.clone() }),
            None => Err(ConfigError::new_err("allocation: section required")),
        }
    }

    /// One transmitted frame: `(optical, baseband or None)`.
    #[pyo3(signature = (scheme = None))]
    fn dump_waveform(&self, scheme: Option<&str>) -> PyResult<(Vec<f64>, Option<Vec<Complex64>>)> {
        let kind = match scheme {
            Some(s) => config::parse_scheme(s).ok_or_else(|| ConfigError::new_err(format!("unknown scheme {s:?}")))?,
            None => self.cfg.scheme.ok_or_else(|| ConfigError::new_err("experiment.scheme: required"))?,
        };
        let d = report::waveform_dump(&self.cfg.scheme_config(kind), self.cfg.channel.sample_rate_hz, self.cfg.seed).py()?;
        Ok((d.optical.into_samples(), d.baseband.map(ComplexFrame::into_samples)))
    }
}

#[pymodule]
fn oisac(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ConfigError", m.py().get_type::<ConfigError>())?;
    m.add("DataError", m.py().get_type::<DataError>())?;
    m.add("SWEEP_HEADER", report::SWEEP_HEADER)?;
    m.add_function(wrap_pyfunction!(dft, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(msequence, m)?)?;
    m.add_function(wrap_pyfunction!(dc_bias_and_clip, m)?)?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_class::<PyAllocationProblem>()?;
    m.add_class::<PySweepResult>()?;
    m.add_class::<PyExperiment>()?;
    Ok(())
}
