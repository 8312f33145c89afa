use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use cyclecx::cobordism::{CobordismCycle, CycleData};
use cyclecx::configuration::{EmbeddedConfiguration, EmbeddedData};
use cyclecx::dual_graph::{self, WeightedConfiguration};
use cyclecx::enumeration;
use cyclecx::error::{CobordismError, CurveError, EnumerationError, ReductionError, SurfaceError, SurgeryError};
use cyclecx::homology::HomologyClass;
use cyclecx::multicurve::OrientedMulticurve;
use cyclecx::rational::{self, Rational};
use cyclecx::surface::CombinatorialSurface;
use cyclecx::surgery::{star_insertion, SurgeryState};

create_exception!(pycyclecx, CycleError, PyException, "Raised by every library operation; args are (name, message).");

trait Named: std::fmt::Display {
    fn error_name(&self) -> &'static str;
}

macro_rules! named {
    ($($t:ty),*) => {$(
        impl Named for $t {
            fn error_name(&self) -> &'static str {
                self.name()
            }
        }
    )*};
}

named!(SurfaceError, CurveError, CobordismError, ReductionError, SurgeryError, EnumerationError);

fn err<E: Named>(e: E) -> PyErr {
    CycleError::new_err((e.error_name(), e.to_string()))
}

fn bad_json(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Hands a serializable value to Python as plain dicts and lists.
fn to_py<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(bad_json)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn weights_from(ws: &[String]) -> PyResult<Vec<Rational>> {
    ws.iter().map(|w| rational::parse(w).map_err(PyValueError::new_err)).collect()
}

#[pyclass(name = "Surface", module = "pycyclecx", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySurface {
    inner: Arc<CombinatorialSurface>,
}

#[pymethods]
impl PySurface {
    /// One-vertex surface of genus `g`.
    #[staticmethod]
    fn standard(g: usize) -> PyResult<Self> {
        if g == 0 {
            return Err(PyValueError::new_err("genus must be at least 1"));
        }
        Ok(PySurface { inner: Arc::new(CombinatorialSurface::standard(g)) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let data = serde_json::from_str(text).map_err(bad_json)?;
        Ok(PySurface { inner: Arc::new(CombinatorialSurface::from_gluings(&data).map_err(err)?) })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_gluings()).map_err(bad_json)
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn num_triangles(&self) -> usize {
        self.inner.num_triangles()
    }

    fn __repr__(&self) -> String {
        format!("Surface(genus={}, triangles={})", self.inner.genus(), self.inner.num_triangles())
    }
}

#[pyclass(name = "Multicurve", module = "pycyclecx", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMulticurve {
    inner: OrientedMulticurve,
}

#[pymethods]
impl PyMulticurve {
    /// Normal coordinates plus one sign per component; signs default to +1.
    #[new]
    #[pyo3(signature = (surface, weights, orientations=None))]
    fn new(surface: &PySurface, weights: Vec<usize>, orientations: Option<Vec<i64>>) -> PyResult<Self> {
        let inner = match orientations {
            Some(o) => OrientedMulticurve::new(surface.inner.clone(), &weights, &o),
            None => OrientedMulticurve::positive(surface.inner.clone(), &weights),
        }
        .map_err(err)?;
        Ok(PyMulticurve { inner })
    }

    #[getter]
    fn weights(&self) -> Vec<usize> {
        self.inner.weights()
    }

    #[getter]
    fn orientations(&self) -> Vec<i8> {
        self.inner.orientations().to_vec()
    }

    #[getter]
    fn num_components(&self) -> usize {
        self.inner.num_components()
    }

    fn homology_class(&self) -> Vec<i64> {
        self.inner.homology_class().0
    }

    fn is_reduced(&self) -> bool {
        self.inner.is_reduced()
    }

    fn reduced_subcycle(&self) -> Option<PyMulticurve> {
        self.inner.reduced_subcycle().map(|inner| PyMulticurve { inner })
    }

    fn regions(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.complementary_regions())
    }

    fn canonical_key(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.canonical_key())
    }

    fn geometric_intersection(&self, other: &PyMulticurve) -> PyResult<usize> {
        self.inner.geometric_intersection(&other.inner).map_err(err)
    }

    fn algebraic_intersection(&self, other: &PyMulticurve) -> PyResult<i64> {
        self.inner.algebraic_intersection(&other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Multicurve(weights={:?}, orientations={:?})", self.inner.weights(), self.inner.orientations())
    }
}

#[pyclass(name = "CobordismCycle", module = "pycyclecx", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCobordismCycle {
    inner: CobordismCycle,
}

#[pymethods]
impl PyCobordismCycle {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let d: CycleData = serde_json::from_str(text).map_err(bad_json)?;
        Ok(PyCobordismCycle { inner: CobordismCycle::new(d.levels).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(bad_json)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn level_euler(&self) -> Vec<i64> {
        (0..self.inner.levels().len()).map(|i| self.inner.level_euler(i)).collect()
    }

    fn validate(&self, py: Python<'_>, genus: i64) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.validate(genus).map_err(err)?)
    }

    fn face(&self, i: usize) -> PyResult<Self> {
        Ok(PyCobordismCycle { inner: self.inner.face(i).map_err(err)? })
    }

    fn extend_to_top(&self, genus: i64) -> PyResult<Self> {
        Ok(PyCobordismCycle { inner: self.inner.extend_to_top(genus).map_err(err)? })
    }

    fn canonical_form(&self) -> Self {
        PyCobordismCycle { inner: self.inner.canonical_form() }
    }

    fn __eq__(&self, other: &PyCobordismCycle) -> bool {
        self.inner.canonical_form() == other.inner.canonical_form()
    }

    fn __repr__(&self) -> String {
        format!("CobordismCycle(k={})", self.inner.k())
    }
}

/// Sink/source elimination on an abstract cycle with weights like "1/3".
#[pyfunction]
fn reduce(py: Python<'_>, cycle: &PyCobordismCycle, weights: Vec<String>) -> PyResult<Py<PyAny>> {
    let w = WeightedConfiguration::new(cycle.inner.clone(), weights_from(&weights)?).map_err(err)?;
    let (out, log) = dual_graph::reduce(&w).map_err(err)?;
    to_py(py, &serde_json::json!({ "config": out, "log": log }))
}

fn embedded(surface: &PySurface, config: &str) -> PyResult<EmbeddedConfiguration> {
    let d: EmbeddedData = serde_json::from_str(config).map_err(bad_json)?;
    EmbeddedConfiguration::from_data(surface.inner.clone(), &d).map_err(err)
}

/// Retraction of an embedded configuration (JSON) toward the star of `base`.
#[pyfunction]
fn retract_to_star(py: Python<'_>, surface: &PySurface, config: &str, base: &PyMulticurve) -> PyResult<Py<PyAny>> {
    let st = SurgeryState::new(embedded(surface, config)?, base.inner.clone()).map_err(err)?;
    to_py(py, &st.retract_to_star().map_err(err)?)
}

/// Adds `base` to a configuration that misses it.
#[pyfunction(name = "star_insertion")]
fn py_star_insertion(py: Python<'_>, surface: &PySurface, config: &str, base: &PyMulticurve) -> PyResult<Py<PyAny>> {
    to_py(py, &star_insertion(&embedded(surface, config)?, &base.inner).map_err(err)?)
}

/// Reduced cycles in a class up to a weight bound.
#[pyfunction]
fn enumerate_vertices(surface: &PySurface, class_: Vec<i64>, bound: usize) -> PyResult<Vec<PyMulticurve>> {
    let v = enumeration::enumerate_cycles(&surface.inner, &HomologyClass(class_), bound).map_err(err)?;
    Ok(v.into_iter().map(|inner| PyMulticurve { inner }).collect())
}

#[pyfunction]
fn are_adjacent(py: Python<'_>, c0: &PyMulticurve, c1: &PyMulticurve) -> PyResult<Py<PyAny>> {
    to_py(py, &enumeration::are_adjacent(&c0.inner, &c1.inner).map_err(err)?)
}

/// Snapshot of the bounded subcomplex, as a dict.
#[pyfunction]
fn build_subcomplex(py: Python<'_>, surface: &PySurface, class_: Vec<i64>, bound: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &enumeration::build_subcomplex(&surface.inner, &HomologyClass(class_), bound).map_err(err)?)
}

#[pymodule]
fn pycyclecx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CycleError", m.py().get_type::<CycleError>())?;
    m.add_class::<PySurface>()?;
    m.add_class::<PyMulticurve>()?;
    m.add_class::<PyCobordismCycle>()?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(retract_to_star, m)?)?;
    m.add_function(wrap_pyfunction!(py_star_insertion, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(are_adjacent, m)?)?;
    m.add_function(wrap_pyfunction!(build_subcomplex, m)?)?;
    Ok(())
}
