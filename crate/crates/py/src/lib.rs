//! Python bindings. Structured results cross the boundary as JSON and are
//! decoded with the standard `json` module, so callers get plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use kvcheck::dpctl::{kvv_scan, negative_control as run_negative_control, sample_config};
use kvcheck::gf::{field_of_order, Elem};
use kvcheck::insep::{classify_all_members, fiber_census as run_fiber_census};
use kvcheck::lattice::{all_points_blowup, contraction_data};
use kvcheck::report::{kmk_checks as run_kmk_checks, run_report, ReportOptions};
use kvcheck::{AllPointsBlowup, DivClass, Field, ProjPoint};

create_exception!(kvcheck_py, KvcheckError, PyValueError);

fn err(e: kvcheck::Error) -> PyErr {
    KvcheckError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// A finite field GF(p^e). Elements are integers in `0..order`, the base-p
/// digits of the integer being the coefficients over the prime field.
#[pyclass(name = "GaloisField", module = "kvcheck_py", frozen)]
struct PyField {
    inner: Field,
}

impl PyField {
    fn elem(&self, x: u32) -> PyResult<Elem> {
        if u64::from(x) >= self.inner.order() {
            return Err(KvcheckError::new_err(format!(
                "{x} is not an element of GF({})",
                self.inner.order()
            )));
        }
        Ok(self.inner.elem(x))
    }
}

#[pymethods]
impl PyField {
    #[new]
    fn new(order: u64) -> PyResult<Self> {
        Ok(PyField {
            inner: field_of_order(order).map_err(err)?,
        })
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Monic modulus, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.add(self.elem(a)?, self.elem(b)?).index())
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.sub(self.elem(a)?, self.elem(b)?).index())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(a)?, self.elem(b)?).index())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        Ok(self.inner.inv(self.elem(a)?).map_err(err)?.index())
    }

    fn pow(&self, a: u32, n: u64) -> PyResult<u32> {
        Ok(self.inner.pow(self.elem(a)?, n).index())
    }

    fn coeffs(&self, a: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.coeffs(self.elem(a)?))
    }

    fn __repr__(&self) -> String {
        format!("GaloisField({})", self.inner.order())
    }
}

/// The blowup of the plane over GF(q) at all of its rational points.
#[pyclass(name = "Surface", module = "kvcheck_py", frozen)]
struct PySurface {
    inner: AllPointsBlowup,
}

fn point_ints(p: &ProjPoint) -> [u32; 3] {
    p.coords().map(Elem::index)
}

#[pymethods]
impl PySurface {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PySurface {
            inner: all_points_blowup(q).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Centers of the exceptional curves, in the order of `E_1, E_2, ...`.
    fn points(&self) -> Vec<[u32; 3]> {
        self.inner
            .incidence()
            .points()
            .iter()
            .map(point_ints)
            .collect()
    }

    /// Cohomology of `a H - sum m_i E_i` as a dict with keys h0, h1, h2, chi.
    fn cohomology<'py>(&self, py: Python<'py>, a: i64, m: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let d = DivClass::from_ints(self.inner.surface(), a, &m).map_err(err)?;
        let t = kvcheck::linsys::cohomology(self.inner.surface(), &d).map_err(err)?;
        to_py(py, &t.to_json())
    }

    /// Cohomology of `K + B` with `B` the sum of the strict transforms of all lines.
    fn cohomology_k_plus_b<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.classes().k_plus_b();
        let t = kvcheck::linsys::cohomology(self.inner.surface(), &d).map_err(err)?;
        to_py(py, &t.to_json())
    }

    /// Data for the contraction of the strict transforms of the lines.
    fn contraction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(
            py,
            &contraction_data(&self.inner.classes())
                .map_err(err)?
                .to_json(),
        )
    }

    /// For each member of |M| with rational coefficients: its singular
    /// point index and the indices of the lines it contains.
    fn members(&self) -> PyResult<Vec<(usize, Vec<usize>)>> {
        let members = classify_all_members(&self.inner).map_err(err)?;
        Ok(members.into_iter().map(|m| (m.center, m.lines)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Surface(q={})", self.inner.q())
    }
}

/// Full check report for q as a dict.
#[pyfunction]
#[pyo3(signature = (q, seed = 0))]
fn report<'py>(py: Python<'py>, q: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py
        .detach(|| {
            run_report(
                q,
                ReportOptions {
                    seed,
                    timings: false,
                },
            )
        })
        .map_err(err)?;
    to_py(py, &r.to_json())
}

/// Fiber sizes of the inseparable map at sampled points over GF(q^ext).
#[pyfunction]
#[pyo3(signature = (q, ext, samples = 50, seed = 0))]
fn fiber_census<'py>(
    py: Python<'py>,
    q: u64,
    ext: u32,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let c = py
        .detach(|| run_fiber_census(q, ext, samples, seed))
        .map_err(err)?;
    to_py(py, &c.to_json())
}

/// Strange-conic, projectivity and lattice checks over GF(2) or GF(4).
#[pyfunction]
fn kmk_checks<'py>(py: Python<'py>, order: u64) -> PyResult<Bound<'py, PyAny>> {
    let checks = run_kmk_checks(order).map_err(err)?;
    to_py(py, &serde_json::to_value(checks).expect("plain data"))
}

/// Vanishing scan on a sampled del Pezzo configuration.
#[pyfunction]
#[pyo3(signature = (points, field_order = 32, trials = 25, seed = 0))]
fn dpcontrol<'py>(
    py: Python<'py>,
    points: usize,
    field_order: u64,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let scan = py
        .detach(|| {
            let field = field_of_order(field_order)?;
            let config = sample_config(points, &field, seed)?;
            kvv_scan(&config, trials, seed)
        })
        .map_err(err)?;
    to_py(py, &scan.to_json())
}

/// The q = 2 configuration run through the del Pezzo pipeline.
#[pyfunction]
fn negative_control<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    let ctl = run_negative_control().map_err(err)?;
    to_py(py, &serde_json::to_value(ctl).expect("plain data"))
}

#[pymodule]
fn kvcheck_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("KvcheckError", m.py().get_type::<KvcheckError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PySurface>()?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(fiber_census, m)?)?;
    m.add_function(wrap_pyfunction!(kmk_checks, m)?)?;
    m.add_function(wrap_pyfunction!(dpcontrol, m)?)?;
    m.add_function(wrap_pyfunction!(negative_control, m)?)?;
    Ok(())
}
