//! Python bindings: families, the stability / stabilizability pipelines and
//! their certificates.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use lyapoly::bounds::{self, AnalysisConfig, AnalysisMode, LyapunovBounds};
use lyapoly::family::{self, EntryLaw, MatrixFamily};
use lyapoly::linalg::{self, Matrix};
use lyapoly::polytope::{self as poly, HullKind};
use lyapoly::products::{self, SearchMode, SearchOptions, SearchStrategy};
use lyapoly::report::{self, ReportFormat};

create_exception!(pylyapoly, LyapolyError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    LyapolyError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(err)
}

fn strategy(s: &str) -> PyResult<SearchStrategy> {
    match s {
        "exhaustive" => Ok(SearchStrategy::Exhaustive),
        "branch-bound" => Ok(SearchStrategy::BranchBound),
        "two-block-template" => Ok(SearchStrategy::TwoBlockTemplate),
        _ => Err(PyValueError::new_err(format!("unknown search strategy {s:?}"))),
    }
}

/// A finite family of square generator matrices.
#[pyclass(name = "Family", module = "pylyapoly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFamily {
    inner: MatrixFamily,
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (matrices, labels=None))]
    fn new(matrices: Vec<Vec<Vec<f64>>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let ms = matrices.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
        let inner = match labels {
            Some(l) => MatrixFamily::with_labels(ms, l),
            None => MatrixFamily::new(ms),
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        family::load_family(path).map(|inner| Self { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        MatrixFamily::from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn is_metzler(&self) -> bool {
        self.inner.is_metzler()
    }

    fn matrices(&self) -> Vec<Vec<Vec<f64>>> {
        self.inner.matrices().iter().map(Matrix::to_rows).collect()
    }

    /// Matrix exponentials `e^{τA}` of the generators.
    fn exponentials(&self, tau: f64) -> PyResult<Vec<Vec<Vec<f64>>>> {
        let e = self.inner.exponentials(tau).map_err(err)?;
        Ok(e.iter().map(Matrix::to_rows).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Family(dim={}, len={}, metzler={})", self.inner.dim(), self.inner.len(), self.inner.is_metzler())
    }
}

/// Certificate polytope: symmetric, monotone or infinite hull of its vertices.
#[pyclass(name = "Polytope", module = "pylyapoly", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: poly::Polytope,
}

#[pymethods]
impl PyPolytope {
    #[new]
    fn new(hull: &str, vertices: Vec<Vec<f64>>) -> PyResult<Self> {
        let hull = match hull {
            "symmetric" => HullKind::Symmetric,
            "monotone" => HullKind::Monotone,
            "infinite" => HullKind::Infinite,
            _ => return Err(PyValueError::new_err(format!("unknown hull {hull:?}"))),
        };
        Ok(Self { inner: poly::Polytope::new(hull, vertices) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        poly::Polytope::from_json(text).map(|inner| Self { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn hull(&self) -> &'static str {
        self.inner.hull.as_str()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<f64>> {
        self.inner.vertices.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Gauge value of `z`: ≤ 1 inside a norm ball, ≥ 1 inside an infinite hull.
    fn membership(&self, z: Vec<f64>) -> PyResult<f64> {
        self.inner.membership(&z).map_err(err)
    }

    /// Boundary polyline for planar polytopes, `None` otherwise.
    fn boundary_2d(&self) -> Option<Vec<(f64, f64)>> {
        self.inner.boundary_2d().map(|v| v.into_iter().map(|p| (p[0], p[1])).collect())
    }

    /// Largest invariance violation of the polytope under `matrices`.
    fn invariance_excess(&self, matrices: Vec<Vec<Vec<f64>>>) -> PyResult<f64> {
        let ms = matrices.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
        poly::verify_invariance(&self.inner, &ms).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Two-sided bounds for one dwell time, with the certificate polytope.
#[pyclass(name = "Bounds", module = "pylyapoly", frozen, skip_from_py_object)]
struct PyBounds {
    inner: LyapunovBounds,
    polytope: poly::Polytope,
}

#[pymethods]
impl PyBounds {
    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }
    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }
    #[getter]
    fn alpha(&self) -> Option<f64> {
        self.inner.alpha
    }
    #[getter]
    fn lower(&self) -> Option<f64> {
        self.inner.lower
    }
    #[getter]
    fn upper(&self) -> Option<f64> {
        self.inner.upper
    }
    #[getter]
    fn gamma(&self) -> Option<f64> {
        self.inner.gamma
    }
    #[getter]
    fn product(&self) -> String {
        self.inner.product.clone()
    }
    #[getter]
    fn word(&self) -> Vec<usize> {
        self.inner.candidate.word.clone()
    }
    #[getter]
    fn averaged_rho(&self) -> f64 {
        self.inner.candidate.averaged_rho
    }
    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count
    }
    #[getter]
    fn terminated(&self) -> bool {
        self.inner.terminated
    }
    #[getter]
    fn sweeps(&self) -> usize {
        self.inner.sweeps
    }
    #[getter]
    fn invariance_excess(&self) -> Option<f64> {
        self.inner.invariance_excess
    }
    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.as_str()
    }
    #[getter]
    fn hull(&self) -> &'static str {
        self.inner.hull.as_str()
    }
    #[getter]
    fn polytope(&self) -> PyPolytope {
        PyPolytope { inner: self.polytope.clone() }
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.inner).expect("bounds serialize")
    }

    fn __repr__(&self) -> String {
        let a = self.inner.alpha.map(|a| format!("{a:.9}")).unwrap_or_else(|| "None".into());
        format!(
            "Bounds(tau={}, beta={:.9}, alpha={a}, product='{}', vertices={}, verdict='{}')",
            self.inner.tau,
            self.inner.beta,
            self.inner.product,
            self.inner.vertex_count,
            self.inner.verdict.as_str()
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn config(
    max_word_len: usize,
    nu: f64,
    delta: f64,
    delta_check: bool,
    search: &str,
    max_vertices: Option<usize>,
    max_sweeps: Option<usize>,
    prune: bool,
    force_symmetric: bool,
) -> PyResult<AnalysisConfig> {
    let mut cfg = AnalysisConfig {
        max_word_len,
        nu,
        delta_lp: delta,
        delta_check,
        search: strategy(search)?,
        prune,
        force_symmetric,
        ..Default::default()
    };
    if let Some(v) = max_vertices {
        cfg.caps.max_vertices = v;
    }
    if let Some(s) = max_sweeps {
        cfg.caps.max_sweeps = s;
    }
    Ok(cfg)
}

/// Bounds on the Lyapunov exponent (`mode="stability"`) or on the lower
/// Lyapunov exponent (`mode="stabilizability"`) at dwell time `tau`.
#[pyfunction]
#[pyo3(signature = (
    family, tau, mode="stability", max_word_len=8, nu=0.0, delta=lyapoly::lp::DEFAULT_DELTA,
    delta_check=true, search="branch-bound", max_vertices=None, max_sweeps=None, prune=true,
    force_symmetric=false
))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    py: Python<'_>,
    family: &PyFamily,
    tau: f64,
    mode: &str,
    max_word_len: usize,
    nu: f64,
    delta: f64,
    delta_check: bool,
    search: &str,
    max_vertices: Option<usize>,
    max_sweeps: Option<usize>,
    prune: bool,
    force_symmetric: bool,
) -> PyResult<PyBounds> {
    let mut cfg = config(max_word_len, nu, delta, delta_check, search, max_vertices, max_sweeps, prune, force_symmetric)?;
    cfg.taus = vec![tau];
    let fam = family.inner.clone();
    let run = match mode {
        "stability" => {
            cfg.mode = AnalysisMode::Stability;
            py.detach(|| bounds::analyze_stability(&fam, tau, &cfg))
        }
        "stabilizability" => {
            cfg.mode = AnalysisMode::Stabilizability;
            py.detach(|| bounds::analyze_stabilizability(&fam, tau, &cfg))
        }
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    }
    .map_err(err)?;
    Ok(PyBounds {
        inner: run.bounds,
        polytope: run.polytope,
    })
}

/// Spectrum maximizing (`mode="max"`) or minimizing (`mode="min"`) product
/// among words of length ≤ `max_len` in `matrices`. Returns
/// `(word, averaged_rho)`.
#[pyfunction]
#[pyo3(signature = (matrices, max_len, mode="max", search="branch-bound"))]
fn search_product(
    py: Python<'_>,
    matrices: Vec<Vec<Vec<f64>>>,
    max_len: usize,
    mode: &str,
    search: &str,
) -> PyResult<(Vec<usize>, f64)> {
    let ms = matrices.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
    let mode = match mode {
        "max" => SearchMode::Max,
        "min" => SearchMode::Min,
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    };
    let opts = SearchOptions::new(max_len, mode, strategy(search)?);
    let c = py.detach(|| products::search_candidate(&ms, &opts)).map_err(err)?;
    Ok((c.word, c.averaged_rho))
}

type FibrillationRow = (f64, usize, f64, String);

/// `(tau, smp_length, beta, product)` per dwell time and the fibrillation flag.
#[pyfunction]
#[pyo3(signature = (family, taus, max_word_len=8))]
fn fibrillation_scan(
    py: Python<'_>,
    family: &PyFamily,
    taus: Vec<f64>,
    max_word_len: usize,
) -> PyResult<(Vec<FibrillationRow>, bool)> {
    let cfg = AnalysisConfig {
        mode: AnalysisMode::Fibrillation,
        taus,
        max_word_len,
        ..Default::default()
    };
    let fam = family.inner.clone();
    let r = py.detach(|| bounds::fibrillation_scan(&fam, &cfg)).map_err(err)?;
    let rows = r.rows.into_iter().map(|row| (row.tau, row.smp_length, row.beta, row.product)).collect();
    Ok((rows, r.flagged))
}

#[pyfunction]
#[pyo3(signature = (matrix, t=1.0))]
fn mat_exp(matrix: Vec<Vec<f64>>, t: f64) -> PyResult<Vec<Vec<f64>>> {
    let m = self::matrix(matrix)?;
    linalg::mat_exp(&m, t).map(|e| e.to_rows()).map_err(err)
}

#[pyfunction]
fn spectral_radius(matrix: Vec<Vec<f64>>) -> PyResult<f64> {
    linalg::spectral_radius(&self::matrix(matrix)?).map_err(err)
}

#[pyfunction]
fn spectral_abscissa(matrix: Vec<Vec<f64>>) -> PyResult<f64> {
    linalg::spectral_abscissa(&self::matrix(matrix)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (dim, count=2, law="sign", seed=0))]
fn random_metzler(dim: usize, count: usize, law: &str, seed: u64) -> PyResult<PyFamily> {
    let law = match law {
        "sign" => EntryLaw::Sign,
        "uniform" => EntryLaw::Uniform,
        _ => return Err(PyValueError::new_err(format!("unknown law {law:?}"))),
    };
    family::random_metzler(dim, count, law, seed)
        .map(|inner| PyFamily { inner })
        .map_err(err)
}

/// Bounds table in `"markdown"`, `"csv"` or `"json"`.
#[pyfunction]
#[pyo3(signature = (rows, format="markdown"))]
fn render(rows: Vec<PyRef<'_, PyBounds>>, format: &str) -> PyResult<String> {
    let format = match format {
        "markdown" => ReportFormat::Markdown,
        "csv" => ReportFormat::Csv,
        "json" => ReportFormat::Json,
        _ => return Err(PyValueError::new_err(format!("unknown format {format:?}"))),
    };
    let rows: Vec<LyapunovBounds> = rows.iter().map(|b| b.inner.clone()).collect();
    Ok(report::render_bounds(&rows, format))
}

#[pymodule]
fn pylyapoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LyapolyError", m.py().get_type::<LyapolyError>())?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyBounds>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(search_product, m)?)?;
    m.add_function(wrap_pyfunction!(fibrillation_scan, m)?)?;
    m.add_function(wrap_pyfunction!(mat_exp, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_abscissa, m)?)?;
    m.add_function(wrap_pyfunction!(random_metzler, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    Ok(())
}
