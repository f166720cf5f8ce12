//! Python bindings for the analogical inference library.
//!
//! The module mirrors the CLI surface: knowledge-base queries, the three
//! inference rules, edit distances, selection probabilities, and the numeric
//! case studies. Structured results cross the boundary as plain dicts and
//! lists so Python callers need no wrapper classes.

use analogia_core as core_lib;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::Value;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Value::Null => py.None().into_bound(py),
        Value::Bool(flag) => PyBool::new(py, *flag).to_owned().into_any(),
        Value::Number(number) => {
            if let Some(integer) = number.as_i64() {
                integer.into_pyobject(py)?.into_any()
            } else if let Some(unsigned) = number.as_u64() {
                unsigned.into_pyobject(py)?.into_any()
            } else {
                number
                    .as_f64()
                    .expect("JSON numbers are i64, u64, or f64")
                    .into_pyobject(py)?
                    .into_any()
            }
        }
        Value::String(text) => PyString::new(py, text).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(entries) => {
            let dict = PyDict::new(py);
            for (key, entry) in entries {
                dict.set_item(key, json_to_py(py, entry)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_python<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(value_error)?;
    json_to_py(py, &json)
}

fn parse_global_index(name: &str) -> PyResult<core_lib::GlobalIndexKind> {
    match name {
        "city-block" => Ok(core_lib::GlobalIndexKind::CityBlock),
        "euclidean" => Ok(core_lib::GlobalIndexKind::Euclidean),
        "simple-matching-coefficient" | "smc" => Ok(core_lib::GlobalIndexKind::SimpleMatching),
        other => Err(PyValueError::new_err(format!(
            "unknown index `{other}`; expected city-block, euclidean, or simple-matching-coefficient"
        ))),
    }
}

fn parse_local_index(name: &str) -> PyResult<core_lib::LocalIndexKind> {
    match name {
        "set-complement-ratio" => Ok(core_lib::LocalIndexKind::SetComplementRatio),
        "overlap-indicator" => Ok(core_lib::LocalIndexKind::OverlapIndicator),
        other => Err(PyValueError::new_err(format!(
            "unknown local index `{other}`; expected set-complement-ratio or overlap-indicator"
        ))),
    }
}

fn locals_for(local: Option<&str>) -> PyResult<core_lib::LocalAssignment> {
    match local {
        None => Ok(core_lib::LocalAssignment::default()),
        Some(name) => {
            core_lib::LocalAssignment::with_symbolic_default(parse_local_index(name)?)
                .map_err(value_error)
        }
    }
}

fn parse_operations(names: Option<Vec<String>>) -> PyResult<core_lib::EditOperationSet> {
    let Some(names) = names else {
        return Ok(core_lib::EditOperationSet::substitution_only());
    };
    for name in &names {
        if !matches!(name.as_str(), "substitution" | "reversal" | "sign-flip") {
            return Err(PyValueError::new_err(format!(
                "unknown operation `{name}`; expected substitution, reversal, or sign-flip"
            )));
        }
    }
    let contains = |op: &str| names.iter().any(|n| n == op);
    core_lib::EditOperationSet::new(
        contains("substitution"),
        contains("reversal"),
        contains("sign-flip"),
    )
    .map_err(value_error)
}

/// A validated store of schema, instances, connections, and concepts.
#[pyclass(frozen)]
struct KnowledgeBase {
    inner: core_lib::KnowledgeBase,
}

impl KnowledgeBase {
    fn lookup(&self, id: &str) -> PyResult<&core_lib::Instance> {
        self.inner
            .instance(id)
            .ok_or_else(|| PyValueError::new_err(format!("unknown instance `{id}`")))
    }

    fn connection(&self, selector: Option<&str>) -> PyResult<&core_lib::Connection> {
        let matches: Vec<&core_lib::Connection> = match selector {
            None => self.inner.connections.iter().collect(),
            Some(wanted) => self
                .inner
                .connections
                .iter()
                .filter(|c| c.label() == wanted || c.q == wanted)
                .collect(),
        };
        match matches.as_slice() {
            [only] => Ok(only),
            [] => Err(PyValueError::new_err(match selector {
                Some(wanted) => format!("no connection matches `{wanted}`"),
                None => "the knowledge base declares no connections".to_string(),
            })),
            _ => Err(PyValueError::new_err(
                "several connections match; pass the full label such as `[country -> currency]`",
            )),
        }
    }
}

#[pymethods]
impl KnowledgeBase {
    /// Parse and validate a knowledge base from its JSON text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = core_lib::load_knowledge_base(text).map_err(value_error)?;
        Ok(KnowledgeBase { inner })
    }

    /// Read and validate a knowledge base from a JSON file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("cannot read `{path}`: {e}")))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn instance_ids(&self) -> Vec<String> {
        self.inner.instances.iter().map(|i| i.id.clone()).collect()
    }

    fn aspect_names(&self) -> Vec<String> {
        self.inner.schema.iter().map(|a| a.name.clone()).collect()
    }

    fn connection_labels(&self) -> Vec<String> {
        self.inner.connections.iter().map(|c| c.label()).collect()
    }

    fn concept_ids(&self) -> Vec<String> {
        self.inner.concepts.iter().map(|c| c.id.clone()).collect()
    }

    /// Global similarity of two instances under the named index.
    #[pyo3(signature = (a, b, index = "city-block", local = None))]
    fn similarity(&self, a: &str, b: &str, index: &str, local: Option<&str>) -> PyResult<f64> {
        let kind = parse_global_index(index)?;
        let locals = locals_for(local)?;
        core_lib::global_sim(&self.inner, kind, self.lookup(a)?, self.lookup(b)?, &locals)
            .map_err(value_error)
    }

    /// Exhaustive metric-axiom audit over all stored instances.
    #[pyo3(signature = (index = "city-block", local = None))]
    fn audit<'py>(
        &self,
        py: Python<'py>,
        index: &str,
        local: Option<&str>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let kind = parse_global_index(index)?;
        let locals = locals_for(local)?;
        let report =
            core_lib::audit_metric_axioms(&self.inner, kind, &locals, &self.inner.instances)
                .map_err(value_error)?;
        to_python(py, &report)
    }

    /// Rank every other instance as a source for the target, best first.
    fn rank<'py>(&self, py: Python<'py>, target: &str, j: usize) -> PyResult<Bound<'py, PyAny>> {
        let target_instance = self.lookup(target)?;
        let candidates: Vec<core_lib::Instance> = self
            .inner
            .instances
            .iter()
            .filter(|i| i.id != target)
            .cloned()
            .collect();
        let ranked =
            core_lib::rank_sources(target_instance, &candidates, j).map_err(value_error)?;
        to_python(py, &ranked)
    }

    /// Re-derive every stored connection's status from the instances.
    fn verify_connections<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let list = PyList::empty(py);
        for connection in &self.inner.connections {
            let verification =
                core_lib::verify_connection(&self.inner, connection).map_err(value_error)?;
            let entry = PyDict::new(py);
            entry.set_item("connection", connection.label())?;
            entry.set_item("verified", to_python(py, &verification.status())?)?;
            if let core_lib::Verification::Incomplete { witness } = &verification {
                entry.set_item("witness", (witness.0.clone(), witness.1.clone()))?;
            }
            list.append(entry)?;
        }
        Ok(list.into_any())
    }

    /// Deductive projection along a total connection.
    #[pyo3(signature = (source, target, connection = None))]
    fn det1<'py>(
        &self,
        py: Python<'py>,
        source: &str,
        target: &str,
        connection: Option<&str>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let connection = self.connection(connection)?;
        let conclusion = core_lib::apply_det1(&self.inner, connection, source, target)
            .map_err(value_error)?;
        to_python(py, &conclusion)
    }

    /// Plausible projection along a connection that is not known total.
    #[pyo3(signature = (source, target, connection = None))]
    fn det2<'py>(
        &self,
        py: Python<'py>,
        source: &str,
        target: &str,
        connection: Option<&str>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let connection = self.connection(connection)?;
        let conclusion = core_lib::apply_det2(&self.inner, connection, source, target)
            .map_err(value_error)?;
        to_python(py, &conclusion)
    }

    /// Project the relevant aspect of a typical source onto a target below it.
    fn typ<'py>(
        &self,
        py: Python<'py>,
        concept: &str,
        source: &str,
        target: &str,
        aspect: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let concept = self
            .inner
            .concept(concept)
            .ok_or_else(|| PyValueError::new_err(format!("unknown concept `{concept}`")))?;
        let conclusion = core_lib::apply_typ(&self.inner, concept, source, target, aspect)
            .map_err(value_error)?;
        to_python(py, &conclusion)
    }

    /// Exceptions and typical examples of a stored concept's order.
    fn typicality<'py>(&self, py: Python<'py>, concept: &str) -> PyResult<Bound<'py, PyAny>> {
        let concept = self
            .inner
            .concept(concept)
            .ok_or_else(|| PyValueError::new_err(format!("unknown concept `{concept}`")))?;
        let exceptions = core_lib::exceptions(concept).map_err(value_error)?;
        let typical = core_lib::typical_examples(concept).map_err(value_error)?;
        let dict = PyDict::new(py);
        dict.set_item("concept", concept.id.clone())?;
        dict.set_item("exceptions", exceptions.into_iter().collect::<Vec<_>>())?;
        dict.set_item("typical", typical.into_iter().collect::<Vec<_>>())?;
        Ok(dict.into_any())
    }

    fn __len__(&self) -> usize {
        self.inner.instances.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "KnowledgeBase(instances={}, connections={}, concepts={})",
            self.inner.instances.len(),
            self.inner.connections.len(),
            self.inner.concepts.len()
        )
    }
}

/// Fraction of the target's aspects matched by the source.
#[pyfunction]
fn degree_of_similarity(i: usize, m: usize) -> PyResult<f64> {
    core_lib::degree_of_similarity(i, m).map_err(value_error)
}

/// Probability that j relevant aspects all fall inside the s matched ones.
#[pyfunction]
fn relevant_match_probability(s: usize, j: usize, m: usize) -> PyResult<f64> {
    core_lib::relevant_match_probability(s, j, m).map_err(value_error)
}

/// The same probability as an exact (numerator, denominator) pair.
#[pyfunction]
fn relevant_match_ratio(s: usize, j: usize, m: usize) -> PyResult<(u128, u128)> {
    core_lib::relevant_match_ratio(s, j, m).map_err(value_error)
}

/// Fewest edit operations turning one sign string into the other.
#[pyfunction]
#[pyo3(signature = (s, t, operations = None, max_depth = 16))]
fn transformational_distance(
    s: &str,
    t: &str,
    operations: Option<Vec<String>>,
    max_depth: u32,
) -> PyResult<u32> {
    let ops = parse_operations(operations)?;
    core_lib::transformational_distance(s, t, &ops, max_depth).map_err(value_error)
}

/// Partial inverse-square sum with its limit residual and tail bounds.
#[pyfunction]
fn basel_check<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
    let check = core_lib::basel_limit_check(n).map_err(value_error)?;
    to_python(py, &check)
}

/// Truncated product expansion of the sine.
#[pyfunction]
fn sin_via_product(x: f64, factors: usize) -> PyResult<f64> {
    core_lib::sin_via_product(x, factors).map_err(value_error)
}

/// Gap between the product's quadratic coefficient and the series value.
#[pyfunction]
fn coefficient_identity_residual(factors: usize) -> PyResult<f64> {
    core_lib::coefficient_identity_residual(factors).map_err(value_error)
}

/// The three sine-identity checks at the given truncation and tolerance.
#[pyfunction]
#[pyo3(signature = (factors = 10_000, grid = None, tolerance = core_lib::DEFAULT_CORROBORATION_TOLERANCE))]
fn identity_checks<'py>(
    py: Python<'py>,
    factors: usize,
    grid: Option<Vec<f64>>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let grid = grid.unwrap_or_else(|| vec![0.1, 0.5, 1.0, 1.5]);
    let checks = core_lib::sine_identity_checks(factors, &grid, tolerance).map_err(value_error)?;
    to_python(py, &checks)
}

/// Averaged alternating partial sums against their quarter-circle limit.
#[pyfunction]
#[pyo3(signature = (n = 10_000, iterations = 4))]
fn accelerated_leibniz<'py>(
    py: Python<'py>,
    n: usize,
    iterations: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = core_lib::leibniz_corroboration(n, iterations).map_err(value_error)?;
    to_python(py, &report)
}

/// Block partial sums of the alternating unit series under a grouping.
#[pyfunction]
#[pyo3(signature = (scheme = "pairs", blocks = core_lib::DEFAULT_REGROUP_HORIZON))]
fn regroup_grandi<'py>(py: Python<'py>, scheme: &str, blocks: usize) -> PyResult<Bound<'py, PyAny>> {
    let grouping = match scheme {
        "pairs" => core_lib::GroupingScheme::pairs(),
        "one-then-pairs" => core_lib::GroupingScheme::one_then_pairs(),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown scheme `{other}`; expected pairs or one-then-pairs"
            )))
        }
    };
    let outcome = core_lib::regroup_series(core_lib::SeriesId::Grandi, &grouping, blocks)
        .map_err(value_error)?;
    to_python(py, &outcome)
}

/// Regrouped versus plain total of a finite term list.
#[pyfunction]
#[pyo3(signature = (terms, prefix, repeating = 1))]
fn finite_regroup_control<'py>(
    py: Python<'py>,
    terms: Vec<f64>,
    prefix: Vec<usize>,
    repeating: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let scheme = core_lib::GroupingScheme::new(prefix, repeating).map_err(value_error)?;
    let control = core_lib::finite_regroup_control(&terms, &scheme).map_err(value_error)?;
    to_python(py, &control)
}

/// Run the multiple-analogy loop on a problem description.
///
/// Returns one dict per iteration: candidate matches, the hypothesis so far,
/// corroboration reports, and open sub-hypotheses.
#[pyfunction]
#[pyo3(signature = (problem_json, kb_json = None, iterations = 10))]
fn heuristic_loop<'py>(
    py: Python<'py>,
    problem_json: &str,
    kb_json: Option<&str>,
    iterations: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let problem = core_lib::load_problem(problem_json).map_err(value_error)?;
    let kb = match kb_json {
        Some(text) => {
            let kb = core_lib::load_knowledge_base(text).map_err(value_error)?;
            problem.validate_against(&kb).map_err(value_error)?;
            kb
        }
        None => core_lib::KnowledgeBase::default(),
    };
    let registry = core_lib::CheckerRegistry::standard();
    let trace =
        core_lib::heuristic_loop(&problem, &kb, iterations, &registry).map_err(value_error)?;
    to_python(py, &trace)
}

#[pymodule]
fn analogia(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<KnowledgeBase>()?;
    m.add_function(wrap_pyfunction!(degree_of_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(relevant_match_probability, m)?)?;
    m.add_function(wrap_pyfunction!(relevant_match_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(transformational_distance, m)?)?;
    m.add_function(wrap_pyfunction!(basel_check, m)?)?;
    m.add_function(wrap_pyfunction!(sin_via_product, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(identity_checks, m)?)?;
    m.add_function(wrap_pyfunction!(accelerated_leibniz, m)?)?;
    m.add_function(wrap_pyfunction!(regroup_grandi, m)?)?;
    m.add_function(wrap_pyfunction!(finite_regroup_control, m)?)?;
    m.add_function(wrap_pyfunction!(heuristic_loop, m)?)?;
    m.add("PI_SQUARED_OVER_SIX", core_lib::PI_SQUARED_OVER_SIX)?;
    m.add("PI_OVER_FOUR", core_lib::PI_OVER_FOUR)?;
    m.add("AXIOM_TOLERANCE", core_lib::AXIOM_TOLERANCE)?;
    Ok(())
}
