//! Python bindings for the `formality` crate.

use formality::formats;
use formality::graphs::{self, AdmissibleGraph, Edge, Vertex};
use formality::linfinity::formality::{bound_operator, formality_residual, star_product, KontsevichMorphism};
use formality::weights::{self, McConfig, MonteCarloProvider};
use formality::{MultiVector, PolyDiffOperator};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: formality::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(samples: usize, seed: u64, normalization: &str) -> PyResult<McConfig> {
    let norm = formats::parse_normalization(normalization)
        .ok_or_else(|| PyValueError::new_err(format!("unknown normalization {:?}", normalization)))?;
    Ok(McConfig::default().with_samples(samples).with_seed(seed).with_normalization(norm))
}

/// Polynomial multivector field on R^d.
#[pyclass(name = "MultiVector", module = "formality_py")]
#[derive(Clone)]
struct PyMultiVector(MultiVector);

#[pymethods]
impl PyMultiVector {
    /// Parse the `multivector <dim> <order>` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        formats::parse_multivector(text).map(PyMultiVector).map_err(err)
    }

    fn to_text(&self) -> String {
        formats::write_multivector(&self.0)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn wedge(&self, other: &Self) -> Self {
        PyMultiVector(self.0.wedge(&other.0))
    }

    fn bullet(&self, other: &Self) -> Self {
        PyMultiVector(self.0.bullet(&other.0))
    }

    fn schouten(&self, other: &Self) -> Self {
        PyMultiVector(self.0.schouten(&other.0))
    }

    /// Reversed bracket `[a, b]' = -[b, a]`.
    fn bracket(&self, other: &Self) -> Self {
        PyMultiVector(self.0.bracket_prime(&other.0))
    }

    fn __add__(&self, other: &Self) -> Self {
        PyMultiVector(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyMultiVector(self.0.sub(&other.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("MultiVector(dim={}, order={}, terms={})", self.0.dim(), self.0.order(), self.0.components().count())
    }
}

/// Polydifferential operator with rational polynomial coefficients.
#[pyclass(name = "Operator", module = "formality_py")]
#[derive(Clone)]
struct PyOperator(PolyDiffOperator);

#[pymethods]
impl PyOperator {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        formats::parse_operator(text).map(PyOperator).map_err(err)
    }

    #[staticmethod]
    fn multiplication(dim: usize) -> Self {
        PyOperator(PolyDiffOperator::multiplication(dim))
    }

    fn to_text(&self) -> String {
        formats::write_operator(&self.0)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn hochschild(&self) -> Self {
        PyOperator(self.0.hochschild())
    }

    fn coboundary(&self) -> Self {
        PyOperator(self.0.coboundary())
    }

    fn circ(&self, other: &Self) -> Self {
        PyOperator(self.0.circ(&other.0))
    }

    fn gerstenhaber(&self, other: &Self) -> Self {
        PyOperator(self.0.gerstenhaber(&other.0))
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyOperator(self.0.sub(&other.0))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim={}, arity={}, terms={})", self.0.dim(), self.0.arity(), self.0.num_terms())
    }
}

/// Admissible graph; edges are `(source, "p" | "q", target)` with 1-based indices.
#[pyclass(name = "Graph", module = "formality_py")]
#[derive(Clone)]
struct PyGraph(AdmissibleGraph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, m: usize, edges: Vec<(usize, String, usize)>) -> PyResult<Self> {
        let mut es = Vec::new();
        for (s, kind, t) in edges {
            if s == 0 || t == 0 {
                return Err(PyValueError::new_err("vertex indices are 1-based"));
            }
            let target = match kind.as_str() {
                "p" => Vertex::Aerial(t - 1),
                "q" => Vertex::Ground(t - 1),
                k => return Err(PyValueError::new_err(format!("unknown vertex kind {:?}", k))),
            };
            es.push(Edge::new(s - 1, target));
        }
        AdmissibleGraph::new(n, m, es).map(PyGraph).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn edges(&self) -> Vec<(usize, String, usize)> {
        self.0
            .edges()
            .iter()
            .map(|e| match e.target {
                Vertex::Aerial(t) => (e.source + 1, "p".to_string(), t + 1),
                Vertex::Ground(t) => (e.source + 1, "q".to_string(), t + 1),
            })
            .collect()
    }

    fn key(&self) -> String {
        self.0.key()
    }

    fn hash(&self) -> u64 {
        self.0.hash()
    }

    fn __repr__(&self) -> String {
        format!("Graph({})", self.0.key())
    }
}

#[pyfunction]
fn enumerate_graphs(n: usize, m: usize, edges: usize) -> Vec<PyGraph> {
    graphs::enumerate_graphs(n, m, edges).into_iter().map(PyGraph).collect()
}

/// Monte Carlo weight of a graph as a dict.
#[pyfunction]
#[pyo3(signature = (graph, samples = 100_000, seed = 1, normalization = "ordered"))]
fn weight<'py>(py: Python<'py>, graph: &PyGraph, samples: usize, seed: u64, normalization: &str) -> PyResult<Bound<'py, PyDict>> {
    let w = weights::weight_mc(&graph.0, &config(samples, seed, normalization)?).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("mean", w.mean)?;
    d.set_item("stderr", w.stderr)?;
    d.set_item("samples", w.samples)?;
    d.set_item("rejected", w.rejected)?;
    d.set_item("seed", w.seed)?;
    d.set_item("normalization", w.normalization.name())?;
    Ok(d)
}

/// Signed sum of boundary-face integrals, as `(total, stderr)`.
#[pyfunction]
#[pyo3(signature = (graph, samples = 100_000, seed = 1))]
fn stokes_residual(graph: &PyGraph, samples: usize, seed: u64) -> PyResult<(f64, f64)> {
    let r = weights::stokes_residual(&graph.0, &config(samples, seed, "ordered")?).map_err(err)?;
    Ok((r.total, r.stderr))
}

/// Star product coefficients `B_0, B_1, ..` as numeric operator texts.
#[pyfunction]
#[pyo3(signature = (pi, order, samples = 100_000, seed = 1))]
fn star_product_text(pi: &PyMultiVector, order: usize, samples: usize, seed: u64) -> PyResult<String> {
    let provider = MonteCarloProvider::new(config(samples, seed, "ordered")?);
    let star = star_product(&pi.0, order, &provider).map_err(err)?;
    Ok(formats::write_star(&star.numeric()))
}

/// Largest coefficient of the formality residual with its propagated error.
#[pyfunction]
#[pyo3(signature = (alphas, samples = 100_000, seed = 1))]
fn formality_residual_bound<'py>(
    py: Python<'py>,
    alphas: Vec<PyMultiVector>,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let provider = MonteCarloProvider::new(config(samples, seed, "ordered")?);
    let u = KontsevichMorphism::new(&provider);
    let alphas: Vec<MultiVector> = alphas.into_iter().map(|a| a.0).collect();
    let res = formality_residual(&u, &alphas).map_err(err)?;
    let b = bound_operator(res.as_ref(), &u.estimates().map_err(err)?);
    let d = PyDict::new_bound(py);
    d.set_item("max_abs", b.max_abs)?;
    d.set_item("max_sigma", b.max_sigma)?;
    d.set_item("worst_ratio", b.worst_ratio)?;
    d.set_item("exact_zero", b.exact_zero)?;
    Ok(d)
}

#[pymodule]
fn formality_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMultiVector>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(enumerate_graphs, m)?)?;
    m.add_function(wrap_pyfunction!(weight, m)?)?;
    m.add_function(wrap_pyfunction!(stokes_residual, m)?)?;
    m.add_function(wrap_pyfunction!(star_product_text, m)?)?;
    m.add_function(wrap_pyfunction!(formality_residual_bound, m)?)?;
    Ok(())
}
