//! Python bindings for `flowbrace`.
//!
//! Scalars cross the boundary as strings (`"3/4"`, or a residue such as `"5"`),
//! so nothing is ever rounded. Fields are named `"Q"` or by a prime, e.g. `"7"`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use flowbrace::format::AlgebraFile;
use flowbrace::sampling::DEFAULT_SEED;
use flowbrace::{
    bch, corpus, flows, format, free_expansion, limits, Error, Scalar, ScalarField, Vector,
};

create_exception!(
    flowbrace_py,
    ViolationError,
    PyValueError,
    "An axiom or exact check failed."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotPreLie(_)
        | Error::InvalidBrace(_)
        | Error::NotNilpotent
        | Error::CharacteristicTooSmall { .. }
        | Error::NotLieElement(_)
        | Error::InternalInconsistency(_) => ViolationError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn check(result: flowbrace::CheckResult) -> PyResult<()> {
    result.map_err(|v| ViolationError::new_err(v.to_string()))
}

fn field_of(name: &str) -> PyResult<ScalarField> {
    name.parse::<ScalarField>().map_err(to_py)
}

fn vector(field: ScalarField, values: Vec<String>) -> PyResult<Vector> {
    let refs: Vec<&str> = values.iter().map(String::as_str).collect();
    Vector::parse(field, &refs).map_err(to_py)
}

fn strings(v: &Vector) -> Vec<String> {
    v.entries().iter().map(Scalar::to_string).collect()
}

/// A nilpotent pre-Lie algebra given by structure constants.
#[pyclass(name = "PreLieAlgebra", module = "flowbrace_py", frozen)]
struct PyPreLie {
    inner: flowbrace::PreLieAlgebra,
}

#[pymethods]
impl PyPreLie {
    /// `entries` lists `(i, j, k, c)` meaning `e_i·e_j` has `c` at `e_k`, 0-based.
    #[new]
    #[pyo3(signature = (field, dim, entries))]
    fn new(field: &str, dim: usize, entries: Vec<(usize, usize, usize, String)>) -> PyResult<Self> {
        let f = field_of(field)?;
        let entries = entries
            .into_iter()
            .map(|(i, j, k, c)| Ok((i, j, k, f.parse(&c).map_err(to_py)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = flowbrace::PreLieAlgebra::from_entries(f, dim, &entries).map_err(to_py)?;
        Ok(PyPreLie { inner })
    }

    /// A member of the bundled corpus: zero_d1..3, n2, h3, f4, graft5.
    #[staticmethod]
    #[pyo3(signature = (name, field = "Q"))]
    fn corpus(name: &str, field: &str) -> PyResult<Self> {
        let inner = corpus::by_name(name, field_of(field)?)
            .ok_or_else(|| PyValueError::new_err(format!("no corpus algebra named {name:?}")))?;
        Ok(PyPreLie { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    /// Nilpotency index s: all products of s elements vanish.
    fn nilpotency_index(&self) -> PyResult<usize> {
        self.inner.class().map_err(to_py)
    }

    fn entries(&self) -> Vec<(usize, usize, usize, String)> {
        self.inner
            .entries()
            .into_iter()
            .map(|(i, j, k, c)| (i, j, k, c.to_string()))
            .collect()
    }

    fn multiply(&self, x: Vec<String>, y: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &self
                .inner
                .multiply(&vector(f, x)?, &vector(f, y)?)
                .map_err(to_py)?,
        ))
    }

    fn lie_bracket(&self, x: Vec<String>, y: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &self
                .inner
                .lie_bracket(&vector(f, x)?, &vector(f, y)?)
                .map_err(to_py)?,
        ))
    }

    /// Raise `ViolationError` naming the first failing basis triple.
    fn check_prelie_identity(&self) -> PyResult<()> {
        check(self.inner.check_prelie_identity())
    }

    fn omega(&self, a: Vec<String>) -> PyResult<Vec<String>> {
        let a = vector(self.inner.field(), a)?;
        Ok(strings(&flows::omega(&self.inner, &a).map_err(to_py)?))
    }

    fn w(&self, a: Vec<String>) -> PyResult<Vec<String>> {
        let a = vector(self.inner.field(), a)?;
        Ok(strings(&flows::w_map(&self.inner, &a).map_err(to_py)?))
    }

    /// The group of flows product.
    fn circ(&self, a: Vec<String>, b: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &flows::circ(&self.inner, &vector(f, a)?, &vector(f, b)?).map_err(to_py)?,
        ))
    }

    fn to_brace(&self) -> PyResult<PyBrace> {
        Ok(PyBrace {
            inner: flows::to_brace(&self.inner).map_err(to_py)?,
        })
    }

    fn roundtrip(&self) -> PyResult<()> {
        check(limits::roundtrip_prelie(&self.inner).map_err(to_py)?)
    }

    /// Check W(a)∘W(b) = W(C(a,b)) on random pairs.
    #[pyo3(signature = (trials = 50, seed = DEFAULT_SEED))]
    fn verify_bch(&self, trials: usize, seed: u64) -> PyResult<()> {
        check(bch::verify_flows_bch(&self.inner, trials, seed).map_err(to_py)?)
    }

    fn to_json(&self) -> String {
        format::to_string(&AlgebraFile::PreLie(self.inner.clone()))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "PreLieAlgebra(field={}, dim={})",
            self.inner.field(),
            self.inner.dim()
        )
    }
}

/// A strongly nilpotent brace stored as graded multilinear maps.
#[pyclass(name = "GradedBrace", module = "flowbrace_py", frozen)]
struct PyBrace {
    inner: flowbrace::GradedBrace,
}

#[pymethods]
impl PyBrace {
    #[staticmethod]
    #[pyo3(signature = (dim, field = "Q"))]
    fn trivial(dim: usize, field: &str) -> PyResult<Self> {
        Ok(PyBrace {
            inner: flowbrace::GradedBrace::trivial(field_of(field)?, dim),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn class_bound(&self) -> usize {
        self.inner.class_bound()
    }

    fn star(&self, a: Vec<String>, b: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &self
                .inner
                .star(&vector(f, a)?, &vector(f, b)?)
                .map_err(to_py)?,
        ))
    }

    fn circ(&self, a: Vec<String>, b: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &self
                .inner
                .circ(&vector(f, a)?, &vector(f, b)?)
                .map_err(to_py)?,
        ))
    }

    fn circ_inverse(&self, a: Vec<String>) -> PyResult<Vec<String>> {
        let a = vector(self.inner.field(), a)?;
        Ok(strings(&self.inner.circ_inverse(&a).map_err(to_py)?))
    }

    /// The limit 2^n((a/2^n)*b), which is the pre-Lie product.
    fn dot(&self, a: Vec<String>, b: Vec<String>) -> PyResult<Vec<String>> {
        let f = self.inner.field();
        Ok(strings(
            &limits::dot(&self.inner, &vector(f, a)?, &vector(f, b)?).map_err(to_py)?,
        ))
    }

    fn validate(&self) -> PyResult<()> {
        self.inner.validate().map_err(to_py)
    }

    /// Dimensions of the left, right and strong radical chains, and the
    /// strong nilpotency index (None if the strong chain stalls).
    fn chains(&self) -> PyResult<(Vec<usize>, Vec<usize>, Vec<usize>, Option<usize>)> {
        let r = self.inner.radical_chains().map_err(to_py)?;
        let dims = |c: &[flowbrace::Subspace]| c.iter().map(|s| s.dim()).collect();
        Ok((
            dims(&r.left),
            dims(&r.right),
            dims(&r.strong),
            r.strong_index,
        ))
    }

    /// `(k, left, j, out, coefficient)` for every nonzero Λ_k entry.
    fn entries(&self) -> Vec<(usize, Vec<usize>, usize, usize, String)> {
        self.inner
            .entries()
            .into_iter()
            .map(|(k, l, j, o, c)| (k, l, j, o, c.to_string()))
            .collect()
    }

    fn to_prelie(&self) -> PyResult<PyPreLie> {
        Ok(PyPreLie {
            inner: limits::to_prelie(&self.inner).map_err(to_py)?,
        })
    }

    fn roundtrip(&self) -> PyResult<()> {
        check(limits::roundtrip_brace(&self.inner).map_err(to_py)?)
    }

    fn to_json(&self) -> String {
        format::to_string(&AlgebraFile::Brace(self.inner.clone()))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.same_tensors(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "GradedBrace(field={}, dim={}, class_bound={})",
            self.inner.field(),
            self.inner.dim(),
            self.inner.class_bound()
        )
    }
}

/// Read an algebra or brace file; `field` overrides the one in the file.
#[pyfunction]
#[pyo3(signature = (path, field = None))]
fn load(py: Python<'_>, path: PathBuf, field: Option<&str>) -> PyResult<Py<PyAny>> {
    let field = field.map(field_of).transpose()?;
    Ok(match format::read(&path, field).map_err(to_py)? {
        AlgebraFile::PreLie(inner) => Py::new(py, PyPreLie { inner })?.into_any(),
        AlgebraFile::Brace(inner) => Py::new(py, PyBrace { inner })?.into_any(),
    })
}

/// Words of E_{x,y} and the doubling matrix rows, as strings.
#[pyfunction]
fn doubling_matrix(degree: usize) -> PyResult<(Vec<String>, Vec<Vec<String>>)> {
    let dm = free_expansion::doubling_matrix(degree).map_err(to_py)?;
    let words = dm.words.iter().map(|w| w.to_string()).collect();
    let rows = (0..dm.matrix.rows())
        .map(|i| {
            (0..dm.matrix.cols())
                .map(|j| dm.matrix.get(i, j).to_string())
                .collect()
        })
        .collect();
    Ok((words, rows))
}

/// log(exp X exp Y) up to degree `s`, as `{word: coefficient}` over the letters X, Y.
#[pyfunction]
#[pyo3(signature = (s, field = "Q"))]
fn bch_series(s: usize, field: &str) -> PyResult<BTreeMap<String, String>> {
    let c = bch::bch_series(field_of(field)?, s).map_err(to_py)?;
    Ok(c.terms()
        .map(|(w, k)| (w.to_string(), k.to_string()))
        .collect())
}

/// The same series written with left-normed brackets, e.g. `"1/2 [X,Y]"`.
#[pyfunction]
#[pyo3(signature = (s, field = "Q"))]
fn bch_brackets(s: usize, field: &str) -> PyResult<Vec<String>> {
    let c = bch::bch_series(field_of(field)?, s).map_err(to_py)?;
    Ok(bch::dsw_project(&c)
        .map_err(to_py)?
        .terms
        .iter()
        .map(|t| t.to_string())
        .collect())
}

/// Expansion of `(a+b)*c` for single-letter generators, as `{word: coefficient}`.
#[pyfunction]
#[pyo3(signature = (a = 'x', b = 'y', c = 'z', degree_bound = 3))]
fn sum_star_rhs(
    a: char,
    b: char,
    c: char,
    degree_bound: usize,
) -> PyResult<BTreeMap<String, String>> {
    use free_expansion::StarExpr;
    let e = free_expansion::sum_star_rhs(
        &StarExpr::symbol(a),
        &StarExpr::symbol(b),
        &StarExpr::symbol(c),
        degree_bound,
    )
    .map_err(to_py)?;
    Ok(e.terms()
        .map(|(w, k)| (w.to_string(), k.to_string()))
        .collect())
}

#[pymodule]
fn flowbrace_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPreLie>()?;
    m.add_class::<PyBrace>()?;
    m.add("ViolationError", m.py().get_type::<ViolationError>())?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(doubling_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(bch_series, m)?)?;
    m.add_function(wrap_pyfunction!(bch_brackets, m)?)?;
    m.add_function(wrap_pyfunction!(sum_star_rhs, m)?)?;
    Ok(())
}
