//! Python bindings: presets, the dispersion symbol, the norm oracle, the
//! grid solver, bound chains and growth fits.

use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

use imbq::growth::{self, DataFactors, SeriesSource};
use imbq::spectral::{self, AliasingPolicy, GridField, GridSpec, SpectralSolver};
use imbq::{BoundsVerifier, Dimension, GrowthKind, NormOracle, NormSeries, PresetKind, QuadratureConfig, VerifierConfig};

fn py_err(e: imbq::Error) -> PyErr {
    match e {
        imbq::Error::Domain(_) | imbq::Error::Usage(_) => PyValueError::new_err(e.to_string()),
        imbq::Error::Accuracy { .. } | imbq::Error::Resolution(_) => PyArithmeticError::new_err(e.to_string()),
        imbq::Error::Cache { .. } | imbq::Error::Io(_) => PyOSError::new_err(e.to_string()),
    }
}

fn dimension(n: usize) -> PyResult<Dimension> {
    Dimension::new(n).map_err(py_err)
}

fn quadrature(tol: f64) -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: tol,
        ..QuadratureConfig::default()
    }
}

/// Radial initial velocity `u₁`.
#[pyclass(frozen, name = "Preset")]
struct PyPreset {
    inner: imbq::DataPreset,
}

#[pymethods]
impl PyPreset {
    /// `spec` is `gaussian[:a=..]`, `bump`, `dog[:a=..,b=..]` or `zero`.
    #[new]
    #[pyo3(signature = (dim, spec = "gaussian", cache_dir = None))]
    fn new(dim: usize, spec: &str, cache_dir: Option<std::path::PathBuf>) -> PyResult<Self> {
        let kind = PresetKind::parse(spec).map_err(py_err)?;
        let inner = imbq::DataPreset::new(kind, dimension(dim)?, cache_dir.as_deref()).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim().n()
    }

    /// `P = ∫ u₁`.
    #[getter]
    fn mean(&self) -> f64 {
        self.inner.moments().mean
    }

    #[getter]
    fn l1_norm(&self) -> f64 {
        self.inner.moments().l1_norm
    }

    #[getter]
    fn l2_norm(&self) -> f64 {
        self.inner.moments().l2_norm
    }

    fn profile(&self, r: f64) -> f64 {
        self.inner.profile(r)
    }

    /// `ŵ₁(|ξ| = r)`.
    fn transform(&self, r: f64) -> f64 {
        self.inner.transform(r)
    }

    fn weighted_l1(&self, gamma: f64) -> PyResult<f64> {
        self.inner.weighted_l1(gamma).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Preset(dim={}, spec={:?})", self.inner.dim().n(), self.inner.name())
    }
}

#[pyclass(frozen, get_all, name = "QuadEstimate")]
struct PyQuadEstimate {
    value: f64,
    error_bound: f64,
    panels: usize,
}

#[pymethods]
impl PyQuadEstimate {
    fn __repr__(&self) -> String {
        format!(
            "QuadEstimate(value={:e}, error_bound={:e}, panels={})",
            self.value, self.error_bound, self.panels
        )
    }
}

#[pyclass(frozen, get_all, name = "BoundCheck")]
struct PyBoundCheck {
    name: String,
    t: f64,
    lhs: f64,
    rhs: f64,
    margin: f64,
    passed: bool,
    vacuous: bool,
    constants: Vec<(String, f64)>,
}

#[pymethods]
impl PyBoundCheck {
    fn __repr__(&self) -> String {
        format!(
            "BoundCheck({}, t={:e}, lhs={:e}, rhs={:e}, passed={})",
            self.name, self.t, self.lhs, self.rhs, self.passed
        )
    }
}

#[pyclass(frozen, get_all, name = "GrowthModel")]
struct PyGrowthModel {
    kind: String,
    coefficient: f64,
    intercept: f64,
    r_squared: f64,
    residual_norm: f64,
}

#[pymethods]
impl PyGrowthModel {
    fn __repr__(&self) -> String {
        format!(
            "GrowthModel({}, coefficient={:e}, intercept={:e}, r_squared={:.6})",
            self.kind, self.coefficient, self.intercept, self.r_squared
        )
    }
}

#[pyclass(frozen, get_all, name = "Sandwich")]
struct PySandwich {
    kind: String,
    c_low: f64,
    c_high: f64,
    c_low_normalized: f64,
    c_high_normalized: f64,
    lower_vacuous: bool,
}

/// `f(r) = r/√(1+r²)`.
#[pyfunction]
fn dispersion_f(r: f64) -> PyResult<f64> {
    imbq::multiplier::dispersion_f(r).map_err(py_err)
}

/// `sin(t f(r))/f(r)`.
#[pyfunction]
fn sine_multiplier(t: f64, r: f64) -> PyResult<f64> {
    imbq::multiplier::sine_multiplier(t, r).map_err(py_err)
}

/// `‖w(t,·)‖²_ξ` by quadrature.
#[pyfunction]
#[pyo3(signature = (preset, t, tol = 1e-8))]
fn norm_sq(preset: &PyPreset, t: f64, tol: f64) -> PyResult<PyQuadEstimate> {
    let e = imbq::oracle::norm_sq_exact(&preset.inner, t, &quadrature(tol)).map_err(py_err)?;
    Ok(PyQuadEstimate {
        value: e.value,
        error_bound: e.error_bound,
        panels: e.panels,
    })
}

/// `count` log-spaced times in `[lo, hi]`.
#[pyfunction]
fn log_spaced(lo: f64, hi: f64, count: usize) -> PyResult<Vec<f64>> {
    growth::log_spaced(lo, hi, count).map_err(py_err)
}

/// Sup over sampled `|ξ|` of the Hölder ratio of `ŵ₁`.
#[pyfunction]
fn holder_constant(preset: &PyPreset, gamma: f64) -> PyResult<f64> {
    let oracle = NormOracle::new(&preset.inner, QuadratureConfig::default()).map_err(py_err)?;
    Ok(oracle.holder_constant(gamma).map_err(py_err)?.constant)
}

/// Evolves `(0, u₁)` on a periodic grid; returns `(t, ‖u‖_x, ‖û‖_ξ, E)` rows.
#[pyfunction]
#[pyo3(signature = (preset, times, grid_r = None, grid_n = None))]
fn evolve(
    py: Python<'_>,
    preset: &PyPreset,
    times: Vec<f64>,
    grid_r: Option<f64>,
    grid_n: Option<usize>,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let p = &preset.inner;
    py.detach(|| {
        let spec = match (grid_r, grid_n) {
            (Some(r), Some(n)) => GridSpec::new(p.dim(), r, n)?,
            (None, None) => spectral::default_grid(p, times.iter().copied().fold(0.0, f64::max))?,
            _ => return Err(imbq::Error::Usage("grid_r and grid_n must be given together".into())),
        };
        let solver = SpectralSolver::new(spec, AliasingPolicy::Refuse);
        let u0 = GridField::zeros(spec);
        let u1 = GridField::from_preset(spec, p)?;
        times
            .iter()
            .map(|&t| {
                let ev = solver.evolve(&u0, &u1, t)?;
                let e = solver.energy(&ev.u, &ev.ut)?;
                Ok((t, spectral::l2_norm(&ev.u), solver.norm_xi_sq(&ev.u)?.sqrt(), e.total))
            })
            .collect()
    })
    .map_err(py_err)
}

/// Solves `u − v = f`, `P u + v = g` for row-major grid data.
#[pyfunction]
fn resolvent_solve(
    dim: usize,
    grid_r: f64,
    grid_n: usize,
    f: Vec<f64>,
    g: Vec<f64>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let spec = GridSpec::new(dimension(dim)?, grid_r, grid_n).map_err(py_err)?;
    let f = GridField::from_values(spec, f).map_err(py_err)?;
    let g = GridField::from_values(spec, g).map_err(py_err)?;
    let (u, v) = spectral::resolvent_solve(&f, &g).map_err(py_err)?;
    Ok((u.into_values(), v.into_values()))
}

/// Every bound chain for the preset's dimension over `times`.
#[pyfunction]
#[pyo3(signature = (preset, times, gamma = 1.0, delta0 = 0.99))]
fn verify_bounds(py: Python<'_>, preset: &PyPreset, times: Vec<f64>, gamma: f64, delta0: f64) -> PyResult<Vec<PyBoundCheck>> {
    let cfg = VerifierConfig {
        delta0,
        ..VerifierConfig::default()
    };
    let checks = py
        .detach(|| BoundsVerifier::new(&preset.inner, cfg)?.verify_all(&times, gamma))
        .map_err(py_err)?;
    Ok(checks
        .into_iter()
        .map(|c| PyBoundCheck {
            name: c.name,
            t: c.t,
            lhs: c.lhs,
            rhs: c.rhs,
            margin: c.margin,
            passed: c.pass,
            vacuous: c.vacuous,
            constants: c.constants.into_iter().collect(),
        })
        .collect())
}

fn series(dim: usize, times: Vec<f64>, values_sq: Vec<f64>) -> PyResult<NormSeries> {
    NormSeries::new(dimension(dim)?, "python", times, values_sq, SeriesSource::External).map_err(py_err)
}

fn window(times: &[f64], t_min: Option<f64>, t_max: Option<f64>) -> (f64, f64) {
    (
        t_min.unwrap_or(times.first().copied().unwrap_or(0.0)),
        t_max.unwrap_or(times.last().copied().unwrap_or(0.0)),
    )
}

/// Ranked least-squares fits of `values_sq` against `t`, `log t` and `1`.
#[pyfunction]
#[pyo3(signature = (dim, times, values_sq, t_min = None, t_max = None))]
fn fit_growth(
    dim: usize,
    times: Vec<f64>,
    values_sq: Vec<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
) -> PyResult<Vec<PyGrowthModel>> {
    let (lo, hi) = window(&times, t_min, t_max);
    let s = series(dim, times, values_sq)?;
    let models = growth::fit_growth(&s, lo, hi).map_err(py_err)?;
    Ok(models
        .into_iter()
        .map(|m| PyGrowthModel {
            kind: m.kind.to_string(),
            coefficient: m.coefficient,
            intercept: m.intercept,
            r_squared: m.r_squared,
            residual_norm: m.residual_norm,
        })
        .collect())
}

/// Envelope constants of `values_sq / g(t)` for the dimension's regime,
/// normalized by the preset's data factors.
#[pyfunction]
#[pyo3(signature = (preset, times, values_sq, t_min = None, t_max = None))]
fn sandwich_constants(
    preset: &PyPreset,
    times: Vec<f64>,
    values_sq: Vec<f64>,
    t_min: Option<f64>,
    t_max: Option<f64>,
) -> PyResult<PySandwich> {
    let (lo, hi) = window(&times, t_min, t_max);
    let dim = preset.inner.dim();
    let s = series(dim.n(), times, values_sq)?;
    let kind = GrowthKind::expected(dim);
    let c = growth::sandwich_constants(&s, DataFactors::from_preset(&preset.inner), kind, lo, hi).map_err(py_err)?;
    Ok(PySandwich {
        kind: c.kind.to_string(),
        c_low: c.c_low,
        c_high: c.c_high,
        c_low_normalized: c.c_low_normalized,
        c_high_normalized: c.c_high_normalized,
        lower_vacuous: c.lower_vacuous,
    })
}

#[pymodule]
fn pyimbq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPreset>()?;
    m.add_class::<PyQuadEstimate>()?;
    m.add_class::<PyBoundCheck>()?;
    m.add_class::<PyGrowthModel>()?;
    m.add_class::<PySandwich>()?;
    m.add_function(wrap_pyfunction!(dispersion_f, m)?)?;
    m.add_function(wrap_pyfunction!(sine_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(norm_sq, m)?)?;
    m.add_function(wrap_pyfunction!(log_spaced, m)?)?;
    m.add_function(wrap_pyfunction!(holder_constant, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(resolvent_solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(fit_growth, m)?)?;
    m.add_function(wrap_pyfunction!(sandwich_constants, m)?)?;
    Ok(())
}
