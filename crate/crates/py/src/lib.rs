//! Python bindings. Channels and conditionals are passed around as objects
//! parsed from the same TOML documents the CLI reads; results come back as
//! plain tuples and dicts.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lr::gaussian::{self, GaussianParams, SweepGrid};
use lr::gaussverify::{self, SampleRanges, VerificationReport};
use lr::prob::{self as prob, AuxCards, AuxConditional, ChannelSpec};
use lr::region::{self, RateQuintuple, RegionFrontier, SearchConfig, Verdict};
use lr::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::Numerical(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type Quint = (f64, f64, f64, f64, f64);
/// `(gamma, rho1, rho2, r1, r2, e1, e2)`
type SweepRow = (f64, f64, f64, f64, f64, f64, f64);

fn quint(q: &RateQuintuple) -> Quint {
    let [a, b, c, d, e] = q.as_array();
    (a, b, c, d, e)
}

fn frontier_points(f: &RegionFrontier) -> Vec<Quint> {
    f.points.iter().map(quint).collect()
}

#[pyclass(name = "Channel", module = "leakregion", frozen)]
struct PyChannel(ChannelSpec);

#[pymethods]
impl PyChannel {
    #[staticmethod]
    #[pyo3(signature = (text, tol = prob::INPUT_TOL))]
    fn from_toml(text: &str, tol: f64) -> PyResult<Self> {
        lr::io::parse_channel_with_tolerance(text, tol).map(PyChannel).map_err(to_py)
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = lr::io::read_input(path.as_ref()).map_err(to_py)?;
        lr::io::parse_channel(&text).map(PyChannel).map_err(to_py)
    }

    fn to_toml(&self) -> String {
        lr::io::emit_channel(&self.0)
    }

    /// `(|S|, |X|, |Y1|, |Y2|)`
    #[getter]
    fn cards(&self) -> (usize, usize, usize, usize) {
        (self.0.card_s(), self.0.card_x(), self.0.card_y1(), self.0.card_y2())
    }

    #[getter]
    fn state_pmf(&self) -> Vec<f64> {
        self.0.state_pmf().probs().to_vec()
    }

    fn __repr__(&self) -> String {
        let (s, x, y1, y2) = self.cards();
        format!("Channel(|S|={s}, |X|={x}, |Y1|={y1}, |Y2|={y2})")
    }
}

#[pyclass(name = "Conditional", module = "leakregion", frozen)]
struct PyConditional(AuxConditional);

#[pymethods]
impl PyConditional {
    #[staticmethod]
    fn from_toml(text: &str, channel: &PyChannel) -> PyResult<Self> {
        lr::io::parse_conditional(text, &channel.0).map(PyConditional).map_err(to_py)
    }

    /// From a flat table indexed `(s, w, u, v, x)` row-major.
    #[staticmethod]
    fn from_table(channel: &PyChannel, cards: (usize, usize, usize), table: Vec<f64>) -> PyResult<Self> {
        let ch = &channel.0;
        AuxConditional::new(ch.card_s(), ch.card_x(), AuxCards::new(cards.0, cards.1, cards.2), table)
            .map(PyConditional)
            .map_err(to_py)
    }

    fn to_toml(&self) -> String {
        lr::io::emit_conditional(&self.0)
    }

    #[getter]
    fn cards(&self) -> (usize, usize, usize) {
        let c = self.0.cards();
        (c.w, c.u, c.v)
    }

    #[getter]
    fn table(&self) -> Vec<f64> {
        self.0.table().to_vec()
    }
}

fn joint(channel: &PyChannel, cond: &PyConditional) -> PyResult<prob::AuxiliaryJoint> {
    prob::assemble_joint(&channel.0, &cond.0).map_err(to_py)
}

fn dict<'py>(py: Python<'py>, items: &[(&str, f64)]) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (k, v) in items {
        d.set_item(k, v)?;
    }
    Ok(d)
}

/// Printed inner-bound values plus the leakage guarantees, in bits.
#[pyfunction]
fn inner_bounds<'py>(py: Python<'py>, channel: &PyChannel, cond: &PyConditional) -> PyResult<Bound<'py, PyDict>> {
    let v = region::inner_bounds(&joint(channel, cond)?).map_err(to_py)?;
    dict(
        py,
        &[
            ("r0", v.b_r0),
            ("r01", v.b_r01),
            ("r02", v.b_r02),
            ("sum", v.b_rsum),
            ("eliminated_sum", v.appendix_sum),
            ("l1", v.l1),
            ("l2", v.l2),
        ],
    )
}

#[pyfunction]
fn outer_bounds<'py>(py: Python<'py>, channel: &PyChannel, cond: &PyConditional) -> PyResult<Bound<'py, PyDict>> {
    let v = region::outer_bounds(&joint(channel, cond)?).map_err(to_py)?;
    dict(
        py,
        &[
            ("r0", v.c_r0),
            ("r01", v.c_r01),
            ("r02", v.c_r02),
            ("sum1", v.c_sum1),
            ("sum2", v.c_sum2),
            ("m1", v.m1),
            ("m2", v.m2),
        ],
    )
}

/// Binning region: support values, covering budget and polytope vertices.
#[pyfunction]
fn binning<'py>(py: Python<'py>, channel: &PyChannel, cond: &PyConditional) -> PyResult<Bound<'py, PyDict>> {
    let j = joint(channel, cond)?;
    let r = region::binning_region(&j).map_err(to_py)?;
    let b = region::binning_budget(&j).map_err(to_py)?;
    let v = r.values;
    let d = dict(
        py,
        &[
            ("r0", v.b_r0),
            ("r01", v.b_r01),
            ("r02", v.b_r02),
            ("sum", v.b_rsum),
            ("l1", v.l1),
            ("l2", v.l2),
            ("rt0", b.rt0),
            ("rt2", b.rt2),
            ("rt1s", b.rt1s),
            ("rt12", b.rt12),
        ],
    )?;
    let vertices: Vec<(f64, f64, f64)> = r.polytope.vertices().iter().map(|p| (p[0], p[1], p[2])).collect();
    d.set_item("vertices", vertices)?;
    d.set_item("feasible", r.is_feasible())?;
    Ok(d)
}

/// Zero-rate leakage frontier as `(r0, r1, r2, e1, e2)` tuples.
#[pyfunction]
#[pyo3(signature = (channel, steps = 32))]
fn zero_rate(py: Python<'_>, channel: &PyChannel, steps: usize) -> PyResult<Vec<Quint>> {
    let f = py.detach(|| region::zero_rate_region(&channel.0, steps)).map_err(to_py)?;
    Ok(frontier_points(&f))
}

/// Seeded search over auxiliary conditionals. Returns the frontier points
/// and, for each, the conditional that produced it.
#[pyfunction]
#[pyo3(signature = (channel, cards, seed = 0, samples = 16, local_iters = 20))]
fn search(
    py: Python<'_>,
    channel: &PyChannel,
    cards: (usize, usize, usize),
    seed: u64,
    samples: usize,
    local_iters: usize,
) -> PyResult<Vec<(Quint, Option<PyConditional>)>> {
    let cfg = SearchConfig { seed, samples, local_iters, ..SearchConfig::default() };
    let cards = AuxCards::new(cards.0, cards.1, cards.2);
    let f = py.detach(|| region::search_inner_region(&channel.0, cards, &cfg)).map_err(to_py)?;
    Ok(f.points
        .iter()
        .zip(f.provenance)
        .map(|(q, p)| (quint(q), p.conditional.map(PyConditional)))
        .collect())
}

/// Checks a point against a list of frontier points. Returns the label and
/// the time-sharing weights `[(index, weight)]` when inside.
#[pyfunction]
fn check(points: Vec<Quint>, point: Quint) -> PyResult<(String, Vec<(usize, f64)>)> {
    let q = |t: Quint| RateQuintuple::new(t.0, t.1, t.2, t.3, t.4).map_err(to_py);
    let rows = points.into_iter().enumerate().map(|(i, t)| Ok((q(t)?, i))).collect::<PyResult<Vec<_>>>()?;
    let f = lr::io::frontier_from_rows(rows);
    let v = region::check_point(&f, &q(point)?).map_err(to_py)?;
    let label = v.label().to_string();
    Ok(match v {
        Verdict::Inside { weights } => (label, weights),
        Verdict::OutsideOfFound => (label, Vec::new()),
    })
}

#[allow(clippy::too_many_arguments)]
fn params(p: f64, n1: f64, n2: f64, q1: f64, q2: f64, gamma: f64, rho1: f64, rho2: f64) -> PyResult<GaussianParams> {
    GaussianParams::new(p, n1, n2, q1, q2, gamma, rho1, rho2).map_err(to_py)
}

/// Closed-form `(r1, r2, e1, e2)` of the scalar Gaussian region.
#[pyfunction]
#[pyo3(signature = (p, n1, n2, q1 = 0.0, q2 = 0.0, gamma = 0.5, rho1 = 0.0, rho2 = 0.0))]
#[allow(clippy::too_many_arguments)]
fn gaussian_region(p: f64, n1: f64, n2: f64, q1: f64, q2: f64, gamma: f64, rho1: f64, rho2: f64) -> PyResult<(f64, f64, f64, f64)> {
    let v = gaussian::gaussian_rate_region(&params(p, n1, n2, q1, q2, gamma, rho1, rho2)?).map_err(to_py)?;
    Ok((v.r1, v.r2, v.e1, v.e2))
}

#[pyfunction]
#[pyo3(signature = (p, n1, n2, q1 = 0.0, q2 = 0.0, gamma = 0.5, rho1 = 0.0, rho2 = 0.0))]
#[allow(clippy::too_many_arguments)]
fn gaussian_coefficients<'py>(
    py: Python<'py>,
    p: f64,
    n1: f64,
    n2: f64,
    q1: f64,
    q2: f64,
    gamma: f64,
    rho1: f64,
    rho2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = gaussian::gaussian_coefficients(&params(p, n1, n2, q1, q2, gamma, rho1, rho2)?).map_err(to_py)?;
    dict(
        py,
        &[
            ("beta1", c.beta1),
            ("beta2", c.beta2),
            ("alpha10", c.alpha10),
            ("alpha11", c.alpha11),
            ("alpha12", c.alpha12),
            ("alpha21", c.alpha21),
            ("alpha22", c.alpha22),
        ],
    )
}

/// Non-dominated grid points as `(gamma, rho1, rho2, r1, r2, e1, e2)`.
#[pyfunction]
#[pyo3(signature = (p, n1, n2, q1 = 0.0, q2 = 0.0, gamma_steps = 33, rho_steps = 33))]
#[allow(clippy::too_many_arguments)]
fn gaussian_sweep(
    py: Python<'_>,
    p: f64,
    n1: f64,
    n2: f64,
    q1: f64,
    q2: f64,
    gamma_steps: usize,
    rho_steps: usize,
) -> PyResult<Vec<SweepRow>> {
    let base = params(p, n1, n2, q1, q2, 0.5, 0.0, 0.0)?;
    let pts = py.detach(|| gaussian::sweep_region(&base, SweepGrid { gamma_steps, rho_steps })).map_err(to_py)?;
    Ok(pts.iter().map(|g| (g.gamma, g.rho1, g.rho2, g.value.r1, g.value.r2, g.value.e1, g.value.e2)).collect())
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = dict(
        py,
        &[
            ("r1", r.closed_form.r1),
            ("r2", r.closed_form.r2),
            ("e1", r.closed_form.e1),
            ("e2", r.closed_form.e2),
            ("residual_r1", r.residual_r1),
            ("residual_r2", r.residual_r2),
            ("residual_e1", r.residual_e1),
            ("residual_e2", r.residual_e2),
            ("masking1", r.masking1),
            ("masking2", r.masking2),
            ("power_residual", r.power_residual),
            ("max_residual", r.max_residual()),
        ],
    )?;
    d.set_item("state_entropy_residual", r.state_entropy_residual)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

/// Log-determinant verification of one parameter set.
#[pyfunction]
#[pyo3(signature = (p, n1, n2, q1 = 0.0, q2 = 0.0, gamma = 0.5, rho1 = 0.0, rho2 = 0.0))]
#[allow(clippy::too_many_arguments)]
fn verify_gaussian<'py>(
    py: Python<'py>,
    p: f64,
    n1: f64,
    n2: f64,
    q1: f64,
    q2: f64,
    gamma: f64,
    rho1: f64,
    rho2: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = gaussverify::verify_gaussian_point(&params(p, n1, n2, q1, q2, gamma, rho1, rho2)?).map_err(to_py)?;
    report_dict(py, &r)
}

/// Seeded batch verification over the default parameter ranges.
#[pyfunction]
#[pyo3(signature = (seed = 0, samples = 100))]
fn verify_batch<'py>(py: Python<'py>, seed: u64, samples: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let reports = py.detach(|| gaussverify::verify_batch(seed, samples, &SampleRanges::default())).map_err(to_py)?;
    reports.iter().map(|r| report_dict(py, r)).collect()
}

#[pymodule]
fn leakregion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChannel>()?;
    m.add_class::<PyConditional>()?;
    m.add_function(wrap_pyfunction!(inner_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(outer_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(binning, m)?)?;
    m.add_function(wrap_pyfunction!(zero_rate, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_region, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(verify_batch, m)?)?;
    m.add("FRONTIER_HEADER", lr::io::FRONTIER_HEADER)?;
    Ok(())
}
