use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<R>(job: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> PyResult<R>) -> R {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "mdist_py")?;
        mdist_py::register(&m)?;
        job(py, &m)
    })
    .expect("python call succeeds")
}

#[test]
fn distance_through_python() {
    let d: f64 = with_module(|_, m| m.getattr("distance")?.call1(("mahler", vec![1.0, -1.0, -1.0]))?.extract());
    assert!((d - 1.618_033_988_749_895).abs() < 1e-12);
}

#[test]
fn closed_form_constant_is_a_fraction() {
    let text: String = with_module(|_, m| {
        let form = m.getattr("closed_form")?.call1(("reciprocal", "F", 2usize))?;
        form.getattr("constant")?.str()?.extract()
    });
    assert_eq!(text, "32/3");
}

#[test]
fn argument_errors_raise_value_error() {
    let raised = with_module(|py, m| {
        let err = m.getattr("distance")?.call1(("bogus", vec![1.0])).unwrap_err();
        Ok(err.is_instance_of::<pyo3::exceptions::PyValueError>(py))
    });
    assert!(raised);
}

#[test]
fn budget_has_its_own_exception() {
    let name = with_module(|py, m| {
        let err = m.getattr("count_reciprocal")?.call1((8usize, 1000.0)).unwrap_err();
        err.get_type(py).name()?.extract::<String>()
    });
    assert_eq!(name, "BudgetExceededError");
}
