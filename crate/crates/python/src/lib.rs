//! Python bindings: graphs, spectra, pair density matrices, concurrence,
//! closed forms and the verification checks.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spinent::analytic::{self, Rational};
use spinent::graph::{self, XmgParams};
use spinent::rdm::{self, MixedDensity};
use spinent::spectra::{self, DEFAULT_DEGENERACY_TOL};
use spinent::sweep::{self, SweepConfig};
use spinent::verify;

create_exception!(pyspinent, SpinentError, PyValueError);

fn err(e: spinent::Error) -> PyErr {
    SpinentError::new_err(e.to_string())
}

fn from_json<'py>(py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (s,))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*r.numer(), *r.denom()))
}

#[pyclass(name = "SpinGraph", module = "pyspinent", frozen)]
pub struct PySpinGraph {
    inner: spinent::SpinGraph,
}

#[pymethods]
impl PySpinGraph {
    /// Graph on `n_spins` sites from `(i, j, J)` terms; repeated pairs add up.
    #[new]
    fn new(n_spins: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let inner = spinent::SpinGraph::new(n_spins, edges).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, g1=-1.0, g2=0.0, g3=0.0))]
    fn ring(n: usize, g1: f64, g2: f64, g3: f64) -> PyResult<Self> {
        let inner = graph::ring_xmg(&XmgParams::new(n, g1, g2, g3, true)).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, g1=-1.0, g2=0.0, g3=0.0))]
    fn open_chain(n: usize, g1: f64, g2: f64, g3: f64) -> PyResult<Self> {
        let inner = graph::open_chain_xmg(&XmgParams::new(n, g1, g2, g3, false)).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (rows, cols, periodic=false, coupling=-1.0))]
    fn grid(rows: usize, cols: usize, periodic: bool, coupling: f64) -> PyResult<Self> {
        let inner = graph::grid_graph(rows, cols, periodic, coupling).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (coupling=-1.0))]
    fn cube(coupling: f64) -> Self {
        PySpinGraph {
            inner: graph::cube_graph(coupling),
        }
    }

    #[staticmethod]
    #[pyo3(signature = (n, coupling=-1.0))]
    fn star(n: usize, coupling: f64) -> PyResult<Self> {
        let inner = graph::star_graph(n, coupling).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n, edge_probability=0.5, j_lo=-2.0, j_hi=-0.1, seed=0))]
    fn random(n: usize, edge_probability: f64, j_lo: f64, j_hi: f64, seed: u64) -> PyResult<Self> {
        let inner = graph::random_graph(n, edge_probability, (j_lo, j_hi), seed).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let inner = spinent::SpinGraph::from_json(s).map_err(err)?;
        Ok(PySpinGraph { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n_spins(&self) -> usize {
        self.inner.n_spins()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.i, e.j, e.coupling))
            .collect()
    }

    fn coupling(&self, a: usize, b: usize) -> f64 {
        self.inner.coupling(a, b)
    }

    fn total_coupling(&self) -> f64 {
        self.inner.total_coupling()
    }

    fn is_ferromagnetic(&self) -> bool {
        self.inner.is_ferromagnetic()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn __repr__(&self) -> String {
        format!(
            "SpinGraph(n_spins={}, edges={})",
            self.inner.n_spins(),
            self.inner.edges().len()
        )
    }
}

#[pyclass(name = "Spectrum", module = "pyspinent", frozen)]
pub struct PySpectrum {
    inner: spectra::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn n_spins(&self) -> usize {
        self.inner.n_spins
    }

    #[getter]
    fn b_field(&self) -> f64 {
        self.inner.b_field
    }

    /// `(n_up, index, energy)` for every level.
    fn levels(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .levels()
            .map(|l| (l.n_up, l.index, l.energy))
            .collect()
    }

    /// Eigenvalues of one magnetization sector, ascending.
    fn sector_eigenvalues(&self, n_up: usize) -> PyResult<Vec<f64>> {
        if n_up > self.inner.n_spins {
            return Err(err(spinent::Error::InvalidSector {
                n_spins: self.inner.n_spins,
                n_up,
            }));
        }
        Ok(self.inner.sector(n_up).eigenvalues.clone())
    }

    fn min_energy(&self) -> f64 {
        self.inner.min_energy()
    }

    #[pyo3(signature = (tol=DEFAULT_DEGENERACY_TOL))]
    fn ground_degeneracy(&self, tol: f64) -> usize {
        spectra::ground_subspace(&self.inner, tol).components.len()
    }

    #[pyo3(signature = (tol=DEFAULT_DEGENERACY_TOL))]
    fn gap(&self, tol: f64) -> Option<f64> {
        self.inner.gap(tol)
    }

    /// Same eigenvectors, energies moved to field `b_field`.
    fn with_field(&self, b_field: f64) -> PySpectrum {
        PySpectrum {
            inner: self.inner.with_field(b_field),
        }
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Pair density matrices of the thermal state at `temperature`
    /// (`0` is the ground multiplet). All pairs when `pairs` is omitted.
    #[pyo3(signature = (temperature=0.0, pairs=None, tol=DEFAULT_DEGENERACY_TOL))]
    fn pair_rdms(
        &self,
        temperature: f64,
        pairs: Option<Vec<(usize, usize)>>,
        tol: f64,
    ) -> PyResult<Vec<PyTwoQubitRdm>> {
        let mix = sweep::thermal_mixture(&self.inner, temperature, tol).map_err(err)?;
        let density = MixedDensity::new(&mix, &self.inner).map_err(err)?;
        pairs
            .unwrap_or_else(|| rdm::all_pairs(self.inner.n_spins))
            .into_iter()
            .map(|p| {
                density
                    .pair(p)
                    .map(|inner| PyTwoQubitRdm { inner })
                    .map_err(err)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(n_spins={}, b_field={}, levels={})",
            self.inner.n_spins,
            self.inner.b_field,
            self.inner.len()
        )
    }
}

#[pyclass(name = "TwoQubitRDM", module = "pyspinent", frozen)]
pub struct PyTwoQubitRdm {
    inner: rdm::TwoQubitRDM,
}

#[pymethods]
impl PyTwoQubitRdm {
    #[getter]
    fn pair(&self) -> (usize, usize) {
        self.inner.pair
    }

    /// 4x4 nested list in the basis (uu, ud, du, dd).
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        (0..4)
            .map(|a| (0..4).map(|b| self.inner.matrix[(a, b)]).collect())
            .collect()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// `(alpha, beta, gamma, delta, epsilon)`; raises if the matrix is not
    /// X-shaped.
    fn x_entries(&self) -> PyResult<(f64, f64, Complex64, f64, f64)> {
        let x = self.inner.x_state().map_err(err)?;
        Ok((x.alpha, x.beta, x.gamma, x.delta, x.epsilon))
    }

    /// Wootters concurrence, clamped to `[0, 1]`.
    fn concurrence(&self) -> f64 {
        rdm::concurrence_wootters(&self.inner)
    }

    /// `2(|gamma| - sqrt(alpha epsilon))` before clamping.
    fn concurrence_raw(&self) -> PyResult<f64> {
        Ok(rdm::concurrence_x_raw(&self.inner.x_state().map_err(err)?))
    }

    fn sxsx(&self) -> f64 {
        rdm::sxsx_correlator(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("TwoQubitRDM(pair={:?})", self.inner.pair)
    }
}

/// Full spectrum of `graph` in field `b_field`, by magnetization sector.
#[pyfunction]
#[pyo3(signature = (graph, b_field=0.0))]
fn spectrum(py: Python<'_>, graph: &PySpinGraph, b_field: f64) -> PyResult<PySpectrum> {
    let g = graph.inner.clone();
    let inner = py
        .detach(move || spectra::full_spectrum(&g, b_field))
        .map_err(err)?;
    Ok(PySpectrum { inner })
}

/// Concurrence of the X-state with the given entries.
#[pyfunction]
fn concurrence_x(
    alpha: f64,
    beta: f64,
    gamma: Complex64,
    delta: f64,
    epsilon: f64,
) -> PyResult<f64> {
    let x = rdm::XStateRDM::new(alpha, beta, gamma, delta, epsilon);
    x.validate().map_err(err)?;
    Ok(rdm::concurrence_x(&x))
}

/// Exact pair RDM entries of the `n_up` symmetric state as `Fraction`s.
#[pyfunction]
fn symmetric_rdm_entries<'py>(
    py: Python<'py>,
    n_total: usize,
    n_up: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let e = analytic::symmetric_rdm_entries(n_total, n_up).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("alpha", fraction(py, &e.alpha)?)?;
    d.set_item("beta", fraction(py, &e.beta)?)?;
    d.set_item("gamma", fraction(py, &e.gamma)?)?;
    d.set_item("delta", fraction(py, &e.delta)?)?;
    d.set_item("epsilon", fraction(py, &e.epsilon)?)?;
    Ok(d)
}

#[pyfunction]
fn concurrence_symmetric(n_total: usize, n_up: usize) -> PyResult<f64> {
    analytic::concurrence_symmetric(n_total, n_up).map_err(err)
}

#[pyfunction]
fn concurrence_pairwise_mixed(n_total: usize, n_up: usize) -> PyResult<f64> {
    analytic::concurrence_pairwise_mixed(n_total, n_up).map_err(err)
}

/// `(lower, upper, members)` of the entangled zone for `n_total` spins.
#[pyfunction]
fn zone(n_total: usize) -> PyResult<(f64, f64, Vec<usize>)> {
    let z = analytic::zone(n_total).map_err(err)?;
    Ok((z.lower, z.upper, z.members))
}

#[pyfunction]
fn zone_mixture_concurrence(n_total: usize) -> PyResult<f64> {
    analytic::zone_mixture_concurrence(n_total).map_err(err)
}

/// Universality check of the ground multiplet; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (graph, graph_id="graph", tol=verify::DEFAULT_RDM_TOL))]
fn verify_universal<'py>(
    py: Python<'py>,
    graph: &PySpinGraph,
    graph_id: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = verify::verify_universal(graph_id, &graph.inner, tol).map_err(err)?;
    from_json(py, &serde_json::to_string(&r).expect("serializable"))
}

/// Ground degeneracy and energy check; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (graph, graph_id="graph"))]
fn verify_degeneracy<'py>(
    py: Python<'py>,
    graph: &PySpinGraph,
    graph_id: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let r = verify::verify_degeneracy(graph_id, &graph.inner).map_err(err)?;
    from_json(py, &serde_json::to_string(&r).expect("serializable"))
}

/// Runs a sweep from TOML text and returns a summary dict.
#[pyfunction]
#[pyo3(signature = (config_toml, resume=false))]
fn run_sweep<'py>(
    py: Python<'py>,
    config_toml: &str,
    resume: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = SweepConfig::from_toml(config_toml).map_err(err)?;
    let out = py
        .detach(|| sweep::run_sweep(&config, resume))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("total_points", out.total_points)?;
    d.set_item("computed", out.records.len())?;
    d.set_item("resumed_from", out.resumed_from)?;
    d.set_item("max_concurrence_raw", out.max_concurrence_raw)?;
    d.set_item("violations", out.violations)?;
    d.set_item("passed", out.passed(config.threshold))?;
    Ok(d)
}

#[pymodule]
fn pyspinent(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SpinentError", m.py().get_type::<SpinentError>())?;
    m.add_class::<PySpinGraph>()?;
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyTwoQubitRdm>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_x, m)?)?;
    m.add_function(wrap_pyfunction!(symmetric_rdm_entries, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_pairwise_mixed, m)?)?;
    m.add_function(wrap_pyfunction!(zone, m)?)?;
    m.add_function(wrap_pyfunction!(zone_mixture_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(verify_universal, m)?)?;
    m.add_function(wrap_pyfunction!(verify_degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
