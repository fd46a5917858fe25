//! Python bindings: distance functions, closed and numeric moment functions,
//! star-body volumes, counting and the verification suites.

use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mdist::counting::{self, CoefficientField};
use mdist::distfun::RootFunctionKind;
use mdist::forms::MonicFamily;
use mdist::moments::{self, MomentClosedForm, MomentType, OracleRule, Volume, VolumeRoute};
use mdist::polyroots::{self, Polynomial};
use mdist::quadrature::QuadratureSpec;
use mdist::verify::{self, Suite, VerifyOptions};

create_exception!(mdist_py, BudgetExceededError, PyException);

fn to_py(err: mdist::Error) -> PyErr {
    use mdist::Error as E;
    match err {
        E::BudgetExceeded(msg) => BudgetExceededError::new_err(msg),
        e @ (E::ZeroPolynomial
        | E::NonFiniteCoefficient
        | E::InvalidArgument(_)
        | E::ConvergenceViolation { .. }
        | E::SymmetryViolation(_)
        | E::NotReciprocal
        | E::OddDegree(_)
        | E::DimensionMismatch(_)) => PyValueError::new_err(e.to_string()),
        e => PyArithmeticError::new_err(e.to_string()),
    }
}

fn kind(text: &str) -> PyResult<RootFunctionKind> {
    text.parse().map_err(to_py)
}

fn moment_type(text: &str) -> PyResult<MomentType> {
    match text {
        "H" | "h" => Ok(MomentType::H),
        "F" | "f" => Ok(MomentType::F),
        other => Err(PyValueError::new_err(format!("moment type must be 'H' or 'F', got '{other}'"))),
    }
}

fn field(text: &str) -> PyResult<CoefficientField> {
    match text {
        "real" => Ok(CoefficientField::Real),
        "complex" => Ok(CoefficientField::Complex),
        other => Err(PyValueError::new_err(format!("field must be 'real' or 'complex', got '{other}'"))),
    }
}

fn rational_arg(text: &str) -> PyResult<BigRational> {
    text.trim()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("not a rational number: '{text}'")))
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_string(),))
}

/// A root function, named `mahler`, `reciprocal` or `trec:<t>`.
#[pyclass(name = "RootFunction", frozen)]
struct PyRootFunction {
    inner: RootFunctionKind,
}

#[pymethods]
impl PyRootFunction {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self { inner: kind(name)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    fn __call__(&self, z: Complex64) -> f64 {
        self.inner.root_value(z)
    }

    /// Distance of the polynomial with the given coefficients, leading first.
    fn distance(&self, coeffs: Vec<f64>) -> PyResult<f64> {
        mdist::distfun::distance(&self.inner, &Polynomial::from_real(&coeffs))
            .map(|d| d.0)
            .map_err(to_py)
    }

    fn root_bound(&self, xi: f64) -> f64 {
        self.inner.root_bound(xi)
    }

    fn __repr__(&self) -> String {
        format!("RootFunction('{}')", self.inner.label())
    }
}

/// A moment function in closed form.
#[pyclass(name = "ClosedForm", frozen)]
struct PyClosedForm {
    inner: MomentClosedForm,
}

#[pymethods]
impl PyClosedForm {
    #[getter]
    fn pi_power(&self) -> u32 {
        self.inner.pi_power
    }

    #[getter]
    fn constant<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.constant)
    }

    /// Value at a real `s`, including the power of pi.
    fn __call__(&self, s: f64) -> f64 {
        self.inner.eval_f64(s)
    }

    /// Exact value at a rational `s` (given as a string), divided by `pi^k`.
    fn exact<'py>(&self, py: Python<'py>, s: &str) -> PyResult<Bound<'py, PyAny>> {
        let value = self.inner.eval_rational_part(&rational_arg(s)?).map_err(to_py)?;
        fraction(py, &value)
    }

    /// Poles as `(location, order)` pairs.
    fn poles(&self) -> Vec<(i64, u32)> {
        self.inner.poles()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ClosedForm('{}')", self.inner)
    }
}

/// Distance of a polynomial (coefficients leading first).
#[pyfunction]
fn distance(kind_name: &str, coeffs: Vec<f64>) -> PyResult<f64> {
    mdist::distfun::distance(&kind(kind_name)?, &Polynomial::from_real(&coeffs))
        .map(|d| d.0)
        .map_err(to_py)
}

/// Roots of a polynomial (coefficients leading first).
#[pyfunction]
fn roots(coeffs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
    polyroots::roots(&Polynomial::new(coeffs), polyroots::DEFAULT_ROOT_TOL)
        .map(|r| r.roots)
        .map_err(to_py)
}

#[pyfunction]
fn closed_form(kind_name: &str, moment: &str, n: usize) -> PyResult<PyClosedForm> {
    let inner = MomentClosedForm::for_kind(&kind(kind_name)?, moment_type(moment)?, n).map_err(to_py)?;
    Ok(PyClosedForm { inner })
}

/// Moment function by numerical integration of the bilinear forms.
#[pyfunction]
#[pyo3(signature = (kind_name, moment, n, s, rel_tol = 1e-10))]
fn moment_numeric(py: Python<'_>, kind_name: &str, moment: &str, n: usize, s: f64, rel_tol: f64) -> PyResult<f64> {
    let k = kind(kind_name)?;
    let mt = moment_type(moment)?;
    let spec = QuadratureSpec {
        rel_tol,
        ..QuadratureSpec::default()
    };
    py.detach(|| {
        let family = MonicFamily::monomials(n);
        match mt {
            MomentType::H => moments::h_numeric(&k, s, &family, &spec),
            MomentType::F => moments::f_numeric(&k, s, &family, &spec),
        }
    })
    .map_err(to_py)
}

/// Moment function by direct integration over root space; returns
/// `(value, error_estimate)`.
#[pyfunction]
fn moment_oracle(py: Python<'_>, kind_name: &str, moment: &str, n: usize, s: f64) -> PyResult<(f64, f64)> {
    let k = kind(kind_name)?;
    let mt = moment_type(moment)?;
    let rule = OracleRule::default();
    let est = py
        .detach(|| match mt {
            MomentType::H => moments::rootspace_oracle_h(&k, s, n, &rule),
            MomentType::F => moments::rootspace_oracle_f(&k, s, n, &rule),
        })
        .map_err(to_py)?;
    Ok((est.value, est.delta))
}

/// Star-body volume as a float.
#[pyfunction]
#[pyo3(signature = (kind_name, n, field_name = "real", route = "closed"))]
fn star_volume(py: Python<'_>, kind_name: &str, n: usize, field_name: &str, route: &str) -> PyResult<f64> {
    let k = kind(kind_name)?;
    let route = match route {
        "closed" => VolumeRoute::Closed,
        "numeric" => VolumeRoute::Numeric,
        other => return Err(PyValueError::new_err(format!("route must be 'closed' or 'numeric', got '{other}'"))),
    };
    let spec = QuadratureSpec::default();
    let v = py
        .detach(|| match field(field_name)? {
            CoefficientField::Real => moments::star_volume_real(&k, n, route, &spec).map_err(to_py),
            CoefficientField::Complex => moments::star_volume_complex(&k, n, route, &spec).map_err(to_py),
        })?;
    Ok(v.to_f64())
}

/// Exact star-body volume as `(pi_power, Fraction)`.
#[pyfunction]
#[pyo3(signature = (kind_name, n, field_name = "real"))]
fn star_volume_exact<'py>(
    py: Python<'py>,
    kind_name: &str,
    n: usize,
    field_name: &str,
) -> PyResult<(u32, Bound<'py, PyAny>)> {
    let k = kind(kind_name)?;
    let spec = QuadratureSpec::default();
    let v = match field(field_name)? {
        CoefficientField::Real => moments::star_volume_real(&k, n, VolumeRoute::Closed, &spec),
        CoefficientField::Complex => moments::star_volume_complex(&k, n, VolumeRoute::Closed, &spec),
    }
    .map_err(to_py)?;
    match v {
        Volume::Exact { pi_power, value } => Ok((pi_power, fraction(py, &value)?)),
        Volume::Approximate(_) => Err(PyValueError::new_err("no exact volume for this root function")),
    }
}

/// Leading constants of the reciprocal counting function, `N = 0..=11`.
#[pyfunction]
fn table_coefficients<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for (n, c) in counting::table_coefficients() {
        out.set_item(n, fraction(py, &c)?)?;
    }
    Ok(out)
}

/// Exhaustive count of reciprocal integer polynomials with measure at most `t`.
#[pyfunction]
#[pyo3(signature = (n, t, threads = None, force = false))]
fn count_reciprocal<'py>(
    py: Python<'py>,
    n: usize,
    t: f64,
    threads: Option<usize>,
    force: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let r = py
        .detach(|| counting::enumerate_reciprocal(n, t, threads, force))
        .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("N", r.n)?;
    out.set_item("T", r.t)?;
    out.set_item("exact", r.exact_count)?;
    out.set_item("predicted", r.predicted)?;
    out.set_item("leading", fraction(py, &r.predicted_leading)?)?;
    out.set_item("per_degree", r.per_degree)?;
    out.set_item("elapsed", r.elapsed.as_secs_f64())?;
    Ok(out)
}

/// Monte Carlo estimate of the distribution function; `(value, std_error)`.
#[pyfunction]
#[pyo3(signature = (kind_name, n, xi, field_name = "real", samples = 1_000_000, seed = 1, threads = None))]
fn mc_distribution(
    py: Python<'_>,
    kind_name: &str,
    n: usize,
    xi: f64,
    field_name: &str,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<(f64, f64)> {
    let k = kind(kind_name)?;
    let f = field(field_name)?;
    let e = py
        .detach(|| counting::mc_distribution(&k, n, xi, f, samples, seed, threads))
        .map_err(to_py)?;
    Ok((e.value, e.std_error))
}

/// Monte Carlo estimate of the star-body volume; `(value, std_error)`.
#[pyfunction]
#[pyo3(signature = (kind_name, n, field_name = "real", samples = 1_000_000, seed = 1, threads = None))]
fn mc_star_volume(
    py: Python<'_>,
    kind_name: &str,
    n: usize,
    field_name: &str,
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<(f64, f64)> {
    let k = kind(kind_name)?;
    let f = field(field_name)?;
    let e = py
        .detach(|| counting::mc_star_volume(&k, n, f, samples, seed, threads))
        .map_err(to_py)?;
    Ok((e.value, e.std_error))
}

/// Zeros and poles of `H_N(mu_t)` or `F_N(mu_t)` as
/// `(t, feature, index, location)` tuples; `ts` are rationals such as "1/2".
#[pyfunction]
fn trajectory(py: Python<'_>, moment: &str, n: usize, ts: Vec<String>) -> PyResult<Vec<(f64, String, i64, Complex64)>> {
    let grid = ts.iter().map(|t| rational_arg(t)).collect::<PyResult<Vec<_>>>()?;
    let points = match moment_type(moment)? {
        MomentType::H => moments::trajectory_h(n, &grid),
        MomentType::F => py.detach(|| moments::trajectory_f(n, &grid, &QuadratureSpec::default()).map(|t| t.points)),
    }
    .map_err(to_py)?;
    Ok(points
        .into_iter()
        .map(|p| (p.t, p.feature.as_str().to_string(), p.index, p.location))
        .collect())
}

/// Runs one verification suite; returns `(passed, [(name, passed, detail)])`.
#[pyfunction]
#[pyo3(signature = (suite, trials = None, samples = 1_000_000, seed = 20240607))]
fn run_verify(
    py: Python<'_>,
    suite: &str,
    trials: Option<usize>,
    samples: u64,
    seed: u64,
) -> PyResult<(bool, Vec<(String, bool, String)>)> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let options = VerifyOptions {
        trials,
        samples,
        seed,
        ..VerifyOptions::default()
    };
    let report = py.detach(|| verify::run_suite(suite, &options));
    Ok((
        report.passed(),
        report
            .checks
            .into_iter()
            .map(|c| (c.name, c.passed, c.detail))
            .collect(),
    ))
}

#[pymodule]
fn mdist_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class, function and exception to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootFunction>()?;
    m.add_class::<PyClosedForm>()?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(moment_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(moment_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(star_volume, m)?)?;
    m.add_function(wrap_pyfunction!(star_volume_exact, m)?)?;
    m.add_function(wrap_pyfunction!(table_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(count_reciprocal, m)?)?;
    m.add_function(wrap_pyfunction!(mc_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(mc_star_volume, m)?)?;
    m.add_function(wrap_pyfunction!(trajectory, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(moment_type("h").unwrap(), MomentType::H);
        assert!(moment_type("G").is_err());
        assert!(matches!(field("complex").unwrap(), CoefficientField::Complex));
        assert!(field("quaternion").is_err());
        assert_eq!(rational_arg(" 3/4 ").unwrap(), BigRational::new(3.into(), 4.into()));
    }
}
