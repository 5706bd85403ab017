use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hypertri::bench::run_trials as run_trials_impl;
use hypertri::oracle::exact_count_with_cap;
use hypertri::synthetic::uniform_sizes_stream;
use hypertri::{
    AlgorithmConfig, AlgorithmKind, Estimator, ExactCounts, HtCount as CoreHtCount, HtCountConfig,
    HtCountP as CoreHtCountP, HtCountPConfig, Hyperedge, Hypergraph, Quantity, Routing,
    TriangleEstimates,
};

fn err(e: hypertri::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn graph(edges: Vec<Vec<u32>>) -> PyResult<Hypergraph> {
    Hypergraph::from_vertex_lists(edges).map_err(err)
}

fn routing(name: &str) -> PyResult<Routing> {
    match name {
        "catch-up" => Ok(Routing::CatchUp),
        "below-mean" => Ok(Routing::BelowMean),
        other => Err(PyValueError::new_err(format!("unknown routing '{other}'"))),
    }
}

fn estimates_dict<'py>(py: Python<'py>, e: &TriangleEstimates) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("inner", e.inner)?;
    for q in &Quantity::ALL[1..] {
        d.set_item(q.name(), e.get(*q))?;
    }
    Ok(d)
}

fn exact_dict<'py>(py: Python<'py>, c: &ExactCounts) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for q in Quantity::ALL {
        d.set_item(q.name(), c.get(q))?;
    }
    Ok(d)
}

/// Exact counts for a list of hyperedges (each a list of vertex ids).
#[pyfunction]
#[pyo3(signature = (edges, max_edges = hypertri::oracle::DEFAULT_EDGE_CAP))]
fn exact_count<'py>(
    py: Python<'py>,
    edges: Vec<Vec<u32>>,
    max_edges: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let h = graph(edges)?;
    let counts = exact_count_with_cap(&h, max_edges).map_err(err)?;
    exact_dict(py, &counts)
}

/// A seeded synthetic stream with uniformly drawn edge sizes.
#[pyfunction]
#[pyo3(signature = (edges, min_size, max_size, universe, seed = 0))]
fn uniform_stream(
    edges: usize,
    min_size: usize,
    max_size: usize,
    universe: u32,
    seed: u64,
) -> PyResult<Vec<Vec<u32>>> {
    let h = uniform_sizes_stream(edges, min_size, max_size, universe, seed).map_err(err)?;
    Ok(h.edges()
        .iter()
        .map(|e| e.vertices().iter().map(|v| v.0).collect())
        .collect())
}

/// Runs `trials` seeded estimators and returns per-quantity summaries.
#[pyfunction]
#[pyo3(signature = (edges, algo, budget, trials, seed = 0, tau = None))]
fn run_trials<'py>(
    py: Python<'py>,
    edges: Vec<Vec<u32>>,
    algo: &str,
    budget: usize,
    trials: usize,
    seed: u64,
    tau: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: AlgorithmKind = algo.parse().map_err(err)?;
    let mut config = match kind {
        AlgorithmKind::HtCount => AlgorithmConfig::htcount(budget),
        AlgorithmKind::HtCountP => AlgorithmConfig::htcount_p(budget),
    };
    if let Some(tau) = tau {
        config = config.with_tau(tau);
    }
    let h = graph(edges)?;
    let stats = py
        .detach(|| run_trials_impl(&h, &config, trials, seed))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("exact", exact_dict(py, &stats.exact)?)?;
    out.set_item("memory_violations", stats.memory_violations())?;
    for s in &stats.summaries {
        let d = PyDict::new(py);
        d.set_item("mean", s.mean)?;
        d.set_item("variance", s.variance)?;
        d.set_item("stderr", s.stderr)?;
        d.set_item("variance_bound", s.variance_bound)?;
        d.set_item("relative_error_of_mean", s.relative_error_of_mean)?;
        d.set_item("mean_relative_error", s.mean_relative_error)?;
        out.set_item(s.quantity.name(), d)?;
    }
    Ok(out)
}

macro_rules! estimator_class {
    ($name:ident, $pyname:literal, $inner:ty, { $($extra:tt)* }) => {
        #[pyclass(name = $pyname)]
        struct $name {
            inner: $inner,
            next_arrival: u64,
        }

        impl $name {
            fn push(&mut self, vertices: Vec<u32>) -> PyResult<()> {
                let e = Hyperedge::new(self.next_arrival, vertices).map_err(err)?;
                self.next_arrival += 1;
                self.inner.process(&e);
                Ok(())
            }
        }

        #[pymethods]
        impl $name {
            /// Feeds one hyperedge.
            fn process(&mut self, edge: Vec<u32>) -> PyResult<()> {
                self.push(edge)
            }

            /// Feeds hyperedges in order.
            fn process_all(&mut self, edges: Vec<Vec<u32>>) -> PyResult<()> {
                edges.into_iter().try_for_each(|e| self.push(e))
            }

            fn estimates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
                estimates_dict(py, self.inner.estimates())
            }

            #[getter]
            fn observed(&self) -> u64 {
                self.inner.observed()
            }

            #[getter]
            fn sampled(&self) -> usize {
                self.inner.sampled()
            }

            #[getter]
            fn memory_used(&self) -> usize {
                self.inner.memory_used()
            }

            #[getter]
            fn memory_budget(&self) -> usize {
                self.inner.memory_budget()
            }

            #[getter]
            fn utilization(&self) -> f64 {
                self.inner.utilization()
            }

            $($extra)*
        }
    };
}

estimator_class!(PyHtCount, "HTCount", CoreHtCount, {
    #[new]
    #[pyo3(signature = (budget, seed = 0, count_evicted = false))]
    fn new(budget: usize, seed: u64, count_evicted: bool) -> PyResult<Self> {
        let config = HtCountConfig {
            budget,
            count_evicted,
        };
        Ok(PyHtCount {
            inner: CoreHtCount::new(config, seed).map_err(err)?,
            next_arrival: 1,
        })
    }
});

estimator_class!(PyHtCountP, "HTCountP", CoreHtCountP, {
    #[new]
    #[pyo3(signature = (budget, seed = 0, tau = None, max_subsets = 10, routing = "catch-up"))]
    fn new(
        budget: usize,
        seed: u64,
        tau: Option<f64>,
        max_subsets: usize,
        routing: &str,
    ) -> PyResult<Self> {
        let mut config = HtCountPConfig::new(budget);
        if let Some(tau) = tau {
            config.tau = tau;
        }
        config.max_subsets = max_subsets;
        config.routing = self::routing(routing)?;
        Ok(PyHtCountP {
            inner: CoreHtCountP::new(config, seed).map_err(err)?,
            next_arrival: 1,
        })
    }

    /// Current per-subset memory allocations.
    fn allocations(&self) -> Vec<usize> {
        self.inner.allocations()
    }
});

#[pymodule]
fn pyhypertri(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(exact_count, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_stream, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_class::<PyHtCount>()?;
    m.add_class::<PyHtCountP>()?;
    Ok(())
}
