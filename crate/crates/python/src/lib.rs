//! Python bindings. Results come back as plain dicts with the same layout as
//! the command-line JSON output.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use spencerlab::cli::{self, Along, CertifyComplex, Command, SceneFile, SpencerModule};
use spencerlab::ring::{parse_polynomial, AffineScene, Ideal, WeightedDegree, WeightedRing};
use spencerlab::Error;

create_exception!(spencerlab_py, SpencerlabError, PyException);
create_exception!(spencerlab_py, BudgetExceeded, SpencerlabError);
create_exception!(spencerlab_py, InvariantViolation, SpencerlabError);

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        2 => BudgetExceeded::new_err(e.to_string()),
        3 => InvariantViolation::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// Polynomial ring with positive integer variable weights.
#[pyclass(module = "spencerlab_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Ring(WeightedRing);

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (names, weights=None))]
    fn new(names: Vec<String>, weights: Option<Vec<i64>>) -> PyResult<Self> {
        let weights = weights.unwrap_or_else(|| vec![1; names.len()]);
        WeightedRing::new(names, weights).map(Ring).map_err(to_py)
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<i64> {
        self.0.weights().to_vec()
    }

    fn parse(&self, text: &str) -> PyResult<Polynomial> {
        parse_polynomial(text, &self.0).map(Polynomial).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let vars: Vec<String> = self.0.names().iter().zip(self.0.weights()).map(|(n, w)| format!("{n}:{w}")).collect();
        format!("Ring({})", vars.join(", "))
    }
}

#[pyclass(module = "spencerlab_py", frozen, from_py_object)]
#[derive(Clone)]
struct Polynomial(spencerlab::ring::Polynomial);

impl Polynomial {
    fn same_ring(&self, other: &Polynomial) -> PyResult<()> {
        if self.0.ring() == other.0.ring() {
            Ok(())
        } else {
            Err(PyValueError::new_err("polynomials live in different rings"))
        }
    }
}

#[pymethods]
impl Polynomial {
    /// Weighted degree, or None if the polynomial is not homogeneous.
    fn degree(&self) -> PyResult<Option<i64>> {
        match self.0.weighted_degree().map_err(to_py)? {
            WeightedDegree::Homogeneous(d) => Ok(Some(d)),
            WeightedDegree::Inhomogeneous => Ok(None),
        }
    }

    fn derivative(&self, index: usize) -> PyResult<Polynomial> {
        self.0.partial_derivative(index).map(Polynomial).map_err(to_py)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.same_ring(other)?;
        Ok(Polynomial(self.0.add(&other.0)))
    }

    fn __sub__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.same_ring(other)?;
        Ok(Polynomial(self.0.sub(&other.0)))
    }

    fn __mul__(&self, other: &Polynomial) -> PyResult<Polynomial> {
        self.same_ring(other)?;
        Ok(Polynomial(self.0.mul(&other.0)))
    }

    fn __eq__(&self, other: &Polynomial) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial('{}')", self.0)
    }
}

/// A ring together with a weighted-homogeneous ideal.
#[pyclass(module = "spencerlab_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Scene(SceneFile);

#[pymethods]
impl Scene {
    #[new]
    #[pyo3(signature = (ring, ideal=Vec::new(), name="scene".to_string()))]
    fn new(ring: &Ring, ideal: Vec<Polynomial>, name: String) -> PyResult<Self> {
        let gens = ideal.into_iter().map(|p| p.0).collect();
        let ideal = Ideal::new(&ring.0, gens).map_err(to_py)?;
        let scene = AffineScene::new(ring.0.clone(), ideal).map_err(to_py)?;
        Ok(Scene(SceneFile { name, scene }))
    }

    #[staticmethod]
    #[pyo3(signature = (text, name="scene"))]
    fn from_text(text: &str, name: &str) -> PyResult<Self> {
        cli::parse_scene(text, name).map(Scene).map_err(to_py)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        cli::load_scene(&path).map(Scene).map_err(to_py)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name.clone()
    }

    #[getter]
    fn ring(&self) -> Ring {
        Ring(self.0.scene.ring().clone())
    }

    #[getter]
    fn ideal(&self) -> Vec<Polynomial> {
        self.0.scene.ideal().generators().iter().cloned().map(Polynomial).collect()
    }

    fn __repr__(&self) -> String {
        format!("Scene('{}')", self.0.name)
    }
}

fn along(value: Option<Bound<'_, PyAny>>) -> PyResult<Along> {
    let Some(value) = value else { return Ok(Along::SelfIdeal) };
    if let Ok(scene) = value.cast::<Scene>() {
        return Ok(Along::Scene(Box::new(scene.get().0.clone())));
    }
    match value.extract::<String>()?.as_str() {
        "self" => Ok(Along::SelfIdeal),
        "vars" => Ok(Along::Variables),
        other => Err(PyValueError::new_err(format!("along must be 'self', 'vars' or a Scene, got '{other}'"))),
    }
}

fn option<'py, T: FromPyObjectOwned<'py>>(kwargs: Option<&Bound<'py, PyDict>>, key: &str) -> PyResult<Option<T>> {
    match kwargs.map(|k| k.get_item(key)).transpose()?.flatten() {
        Some(v) if !v.is_none() => Ok(Some(v.extract::<T>().map_err(Into::into)?)),
        _ => Ok(None),
    }
}

/// Runs a command by its command-line name and returns the result document.
/// Options are the command-line flags with underscores (`r`, `p`, `n`,
/// `module`, `elements`, `complex`, `along`, `r_max`, `extended_scene`).
#[pyfunction]
#[pyo3(signature = (command, scene=None, degree_bound=cli::DEFAULT_DEGREE_BOUND, **kwargs))]
fn run<'py>(
    py: Python<'py>,
    command: &str,
    scene: Option<&Scene>,
    degree_bound: i64,
    kwargs: Option<&Bound<'py, PyDict>>,
) -> PyResult<Bound<'py, PyAny>> {
    let required = |key: &str| -> PyResult<u32> {
        option::<u32>(kwargs, key)?.ok_or_else(|| PyValueError::new_err(format!("`{command}` needs `{key}`")))
    };
    let along_arg = kwargs.map(|k| k.get_item("along")).transpose()?.flatten();
    let cmd = match command {
        "derham" => Command::DeRham,
        "jet" => Command::Jet { r: required("r")? },
        "spencer" => {
            let module = option::<String>(kwargs, "module")?.unwrap_or_else(|| "O".into());
            Command::Spencer { module: module.parse::<SpencerModule>().map_err(to_py)? }
        }
        "koszul" => Command::Koszul { elements: option(kwargs, "elements")? },
        "filtered-spencer" => Command::FilteredSpencer { n: option(kwargs, "n")?, p: required("p")? },
        "kashiwara" => Command::Kashiwara { p: required("p")? },
        "euler-certify" => {
            let complex = option::<String>(kwargs, "complex")?.unwrap_or_else(|| "derham".into());
            Command::EulerCertify { complex: complex.parse::<CertifyComplex>().map_err(to_py)? }
        }
        "milnor" => Command::Milnor,
        "smooth" => Command::Smooth,
        "spencer-h0" => Command::SpencerH0,
        "complete" => Command::Complete { along: along(along_arg)?, r_max: option(kwargs, "r_max")? },
        "derived-complete" => Command::DerivedComplete {
            along: match along_arg {
                Some(a) => along(Some(a))?,
                None => Along::Variables,
            },
            r_max: option(kwargs, "r_max")?,
        },
        "independence" => {
            let extended = kwargs
                .map(|k| k.get_item("extended_scene"))
                .transpose()?
                .flatten()
                .ok_or_else(|| PyValueError::new_err("`independence` needs `extended_scene`"))?;
            let extended = extended.cast::<Scene>()?.get().0.clone();
            Command::Independence { extended: Box::new(extended), r_max: option(kwargs, "r_max")? }
        }
        other => return Err(PyValueError::new_err(format!("unknown command '{other}'"))),
    };
    let scene = scene.map(|s| s.0.clone());
    let doc = py.detach(|| cli::run(&cmd, scene.as_ref(), degree_bound)).map_err(to_py)?;
    json_to_py(py, &doc)
}

#[pymodule]
fn spencerlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<Polynomial>()?;
    m.add_class::<Scene>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("SpencerlabError", m.py().get_type::<SpencerlabError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("InvariantViolation", m.py().get_type::<InvariantViolation>())?;
    Ok(())
}
