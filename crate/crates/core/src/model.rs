//! Shared data model: aspect schemas, feature values, instances, and the
//! knowledge base that every inference rule reads from.
//!
//! A knowledge base is loaded from a JSON document with top-level keys
//! `schema`, `instances`, `connections`, `concepts`. Loading validates the
//! whole document and reports the path of the first offending element;
//! a loaded knowledge base is immutable and safe to share across threads.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::determination::{Connection, ConnectionStatus};
use crate::typicality::Concept;

/// Errors from loading or querying the data model.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    /// The document is not well-formed JSON (or not the expected envelope).
    #[error("parse error: {0}")]
    Parse(String),
    /// The document parsed but violates a model invariant.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    /// Two instances have no mutually assigned aspect and cannot be compared.
    #[error("instances `{a}` and `{b}` share no assigned aspects")]
    DisjointDescriptions { a: String, b: String },
    /// A referenced aspect or instance id does not resolve.
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
}

impl ModelError {
    fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ModelError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Value domain of an aspect.
#[derive(Debug, Clone, PartialEq)]
pub enum AspectKind {
    /// A finite set of symbols.
    SymbolicSet,
    /// A real scalar constrained to `[lower, upper]`.
    Numeric { lower: f64, upper: f64 },
}

/// Declaration of one named part of an object's description.
#[derive(Debug, Clone, PartialEq)]
pub struct AspectSchema {
    pub name: String,
    pub kind: AspectKind,
    /// Positive symbol for binary agree/disagree codings; required by the
    /// simple-matching global index, ignored elsewhere.
    pub positive: Option<String>,
}

impl AspectSchema {
    pub fn symbolic(name: impl Into<String>) -> Self {
        AspectSchema {
            name: name.into(),
            kind: AspectKind::SymbolicSet,
            positive: None,
        }
    }

    pub fn numeric(name: impl Into<String>, lower: f64, upper: f64) -> Self {
        AspectSchema {
            name: name.into(),
            kind: AspectKind::Numeric { lower, upper },
            positive: None,
        }
    }

    pub fn with_positive(mut self, symbol: impl Into<String>) -> Self {
        self.positive = Some(symbol.into());
        self
    }

    /// Width of the numeric range (the normalizer of the numeric local
    /// similarity index); `None` for symbolic aspects.
    pub fn range_width(&self) -> Option<f64> {
        match self.kind {
            AspectKind::Numeric { lower, upper } => Some((upper - lower).abs()),
            AspectKind::SymbolicSet => None,
        }
    }
}

/// A value assigned to one aspect of one instance.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue {
    Symbols(BTreeSet<String>),
    Number(f64),
}

impl FeatureValue {
    pub fn symbols<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FeatureValue::Symbols(symbols.into_iter().map(Into::into).collect())
    }

    pub fn number(value: f64) -> Self {
        FeatureValue::Number(value)
    }

    pub fn as_symbols(&self) -> Option<&BTreeSet<String>> {
        match self {
            FeatureValue::Symbols(s) => Some(s),
            FeatureValue::Number(_) => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            FeatureValue::Number(x) => Some(*x),
            FeatureValue::Symbols(_) => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FeatureValue::Symbols(_) => "symbolic-set",
            FeatureValue::Number(_) => "numeric",
        }
    }
}

impl std::fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FeatureValue::Symbols(set) => {
                write!(f, "{{")?;
                for (i, symbol) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{symbol}")?;
                }
                write!(f, "}}")
            }
            FeatureValue::Number(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for FeatureValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            FeatureValue::Symbols(set) => set.serialize(serializer),
            FeatureValue::Number(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for FeatureValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match ValueDoc::deserialize(deserializer)? {
            ValueDoc::Symbols(list) => FeatureValue::symbols(list),
            ValueDoc::Number(x) => FeatureValue::Number(x),
        })
    }
}

/// An entity described by aspect-to-value assignments. Descriptions may be
/// partial: comparisons operate on the intersection of assigned aspects.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub id: String,
    pub values: BTreeMap<String, FeatureValue>,
}

impl Instance {
    pub fn new(id: impl Into<String>) -> Self {
        Instance {
            id: id.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with_value(mut self, aspect: impl Into<String>, value: FeatureValue) -> Self {
        self.values.insert(aspect.into(), value);
        self
    }

    pub fn value(&self, aspect: &str) -> Option<&FeatureValue> {
        self.values.get(aspect)
    }

    /// Aspect names assigned in both `self` and `other`, in sorted order.
    pub fn shared_aspects<'a>(&'a self, other: &'a Instance) -> Vec<&'a str> {
        self.values
            .keys()
            .filter(|a| other.values.contains_key(*a))
            .map(String::as_str)
            .collect()
    }
}

/// The shared substrate of every inference module: schema declarations,
/// instances, declared connections, and concepts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeBase {
    pub schema: Vec<AspectSchema>,
    pub instances: Vec<Instance>,
    pub connections: Vec<Connection>,
    pub concepts: Vec<Concept>,
}

impl KnowledgeBase {
    pub fn aspect(&self, name: &str) -> Option<&AspectSchema> {
        self.schema.iter().find(|a| a.name == name)
    }

    pub fn instance(&self, id: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.id == id)
    }

    pub fn concept(&self, id: &str) -> Option<&Concept> {
        self.concepts.iter().find(|c| c.id == id)
    }

    /// A copy of this knowledge base with one more instance, revalidated.
    pub fn with_instance(&self, instance: Instance) -> Result<KnowledgeBase, ModelError> {
        let mut kb = self.clone();
        kb.instances.push(instance);
        kb.instances.sort_by(|a, b| a.id.cmp(&b.id));
        validate(&kb)?;
        Ok(kb)
    }

    /// A copy with the status of the connection at `index` replaced.
    pub fn with_connection_status(&self, index: usize, status: ConnectionStatus) -> KnowledgeBase {
        let mut kb = self.clone();
        if let Some(c) = kb.connections.get_mut(index) {
            c.status = status;
        }
        kb
    }

    /// Serialize to the normalized JSON document format. Reloading the
    /// output yields an identical knowledge base.
    pub fn to_json_string(&self) -> String {
        let doc = KbDoc::from(self);
        serde_json::to_string_pretty(&doc).expect("knowledge base serializes")
    }
}

/// Count value matches between two instances: `(i, m)` where `m` is the
/// number of mutually assigned aspects and `i` of them carry equal values.
/// Equality is exact: set equality for symbols, scalar equality for numbers.
pub fn instance_match_counts(a: &Instance, b: &Instance) -> Result<(usize, usize), ModelError> {
    let shared = a.shared_aspects(b);
    if shared.is_empty() {
        return Err(ModelError::DisjointDescriptions {
            a: a.id.clone(),
            b: b.id.clone(),
        });
    }
    let matched = shared
        .iter()
        .filter(|aspect| a.values[**aspect] == b.values[**aspect])
        .count();
    Ok((matched, shared.len()))
}

/// Parse and validate a knowledge-base document.
pub fn load_knowledge_base(text: &str) -> Result<KnowledgeBase, ModelError> {
    load_knowledge_base_with_warnings(text).map(|(kb, _)| kb)
}

/// As [`load_knowledge_base`], also returning non-fatal warnings
/// (currently: duplicate symbols collapsed inside a symbol set).
pub fn load_knowledge_base_with_warnings(
    text: &str,
) -> Result<(KnowledgeBase, Vec<String>), ModelError> {
    let doc: KbDoc =
        serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
    let mut warnings = Vec::new();
    let mut kb = doc.into_domain(&mut warnings)?;

    kb.schema.sort_by(|a, b| a.name.cmp(&b.name));
    kb.instances.sort_by(|a, b| a.id.cmp(&b.id));
    kb.concepts.sort_by(|a, b| a.id.cmp(&b.id));
    kb.connections
        .sort_by(|a, b| (&a.q, &a.p).cmp(&(&b.q, &b.p)));

    validate(&kb)?;
    Ok((kb, warnings))
}

fn validate(kb: &KnowledgeBase) -> Result<(), ModelError> {
    let mut aspect_names = BTreeSet::new();
    for (i, aspect) in kb.schema.iter().enumerate() {
        let path = format!("schema[{i}]");
        if !aspect_names.insert(aspect.name.clone()) {
            return Err(ModelError::invalid(
                path,
                format!("duplicate aspect name `{}`", aspect.name),
            ));
        }
        match aspect.kind {
            AspectKind::Numeric { lower, upper } => {
                if !(lower.is_finite() && upper.is_finite()) {
                    return Err(ModelError::invalid(path, "numeric bounds must be finite"));
                }
                if upper <= lower {
                    return Err(ModelError::invalid(
                        path,
                        format!("aspect `{}` requires upper > lower, got [{lower}, {upper}]", aspect.name),
                    ));
                }
                if aspect.positive.is_some() {
                    return Err(ModelError::invalid(
                        path,
                        format!("aspect `{}` is numeric and cannot declare a positive symbol", aspect.name),
                    ));
                }
            }
            AspectKind::SymbolicSet => {}
        }
    }

    let mut instance_ids = BTreeSet::new();
    for (i, instance) in kb.instances.iter().enumerate() {
        let path = format!("instances[{i}]");
        if !instance_ids.insert(instance.id.clone()) {
            return Err(ModelError::invalid(
                path,
                format!("duplicate instance id `{}`", instance.id),
            ));
        }
        for (aspect_name, value) in &instance.values {
            let vpath = format!("instances[{i}].values.{aspect_name}");
            let aspect = kb.aspect(aspect_name).ok_or_else(|| {
                ModelError::invalid(
                    &vpath,
                    format!("instance `{}` assigns undeclared aspect `{aspect_name}`", instance.id),
                )
            })?;
            match (&aspect.kind, value) {
                (AspectKind::SymbolicSet, FeatureValue::Symbols(_)) => {}
                (AspectKind::Numeric { lower, upper }, FeatureValue::Number(x)) => {
                    if !(x.is_finite() && *lower <= *x && *x <= *upper) {
                        return Err(ModelError::invalid(
                            vpath,
                            format!(
                                "value {x} for aspect `{aspect_name}` lies outside [{lower}, {upper}]"
                            ),
                        ));
                    }
                }
                (_, v) => {
                    return Err(ModelError::invalid(
                        vpath,
                        format!(
                            "aspect `{aspect_name}` expects a {} value, got {}",
                            match aspect.kind {
                                AspectKind::SymbolicSet => "symbolic-set",
                                AspectKind::Numeric { .. } => "numeric",
                            },
                            v.kind_name()
                        ),
                    ));
                }
            }
        }
    }

    for (i, connection) in kb.connections.iter().enumerate() {
        let path = format!("connections[{i}]");
        if connection.p.is_empty() {
            return Err(ModelError::invalid(path, "connection requires a nonempty aspect set `p`"));
        }
        if connection.p.contains(&connection.q) {
            return Err(ModelError::invalid(
                path,
                format!("determined aspect `{}` must not appear in `p`", connection.q),
            ));
        }
        for aspect in connection.p.iter().chain(std::iter::once(&connection.q)) {
            if kb.aspect(aspect).is_none() {
                return Err(ModelError::invalid(
                    &path,
                    format!("connection references undeclared aspect `{aspect}`"),
                ));
            }
        }
    }

    let mut concept_ids = BTreeSet::new();
    for (i, concept) in kb.concepts.iter().enumerate() {
        let path = format!("concepts[{i}]");
        if !concept_ids.insert(concept.id.clone()) {
            return Err(ModelError::invalid(
                path,
                format!("duplicate concept id `{}`", concept.id),
            ));
        }
        for member in &concept.members {
            if kb.instance(member).is_none() {
                return Err(ModelError::invalid(
                    &path,
                    format!("concept `{}` lists unknown member `{member}`", concept.id),
                ));
            }
        }
        for (j, (lo, hi)) in concept.order.iter().enumerate() {
            for end in [lo, hi] {
                if !concept.members.contains(end) {
                    return Err(ModelError::invalid(
                        format!("{path}.order[{j}]"),
                        format!("order pair references non-member `{end}`"),
                    ));
                }
            }
        }
        for (member, aspects) in &concept.relevant {
            if !concept.members.contains(member) {
                return Err(ModelError::invalid(
                    format!("{path}.relevant.{member}"),
                    format!("relevance declared for non-member `{member}`"),
                ));
            }
            for aspect in aspects {
                if kb.aspect(aspect).is_none() {
                    return Err(ModelError::invalid(
                        format!("{path}.relevant.{member}"),
                        format!("relevance references undeclared aspect `{aspect}`"),
                    ));
                }
            }
        }
    }

    Ok(())
}

// --- document layer -------------------------------------------------------
//
// Mirrors the JSON format exactly; symbol values stay as plain arrays here
// so duplicate entries can be detected and warned about before collapsing.

#[derive(Debug, Serialize, Deserialize)]
struct KbDoc {
    #[serde(default)]
    schema: Vec<AspectDoc>,
    #[serde(default)]
    instances: Vec<InstanceDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    connections: Vec<Connection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    concepts: Vec<Concept>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AspectDoc {
    name: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positive: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceDoc {
    id: String,
    #[serde(default)]
    values: BTreeMap<String, ValueDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueDoc {
    Symbols(Vec<String>),
    Number(f64),
}

impl KbDoc {
    fn into_domain(self, warnings: &mut Vec<String>) -> Result<KnowledgeBase, ModelError> {
        let mut schema = Vec::with_capacity(self.schema.len());
        for (i, a) in self.schema.into_iter().enumerate() {
            let path = format!("schema[{i}]");
            let kind = match a.kind.as_str() {
                "symbolic-set" => {
                    if a.lower.is_some() || a.upper.is_some() {
                        return Err(ModelError::invalid(
                            path,
                            format!("symbolic-set aspect `{}` must not declare bounds", a.name),
                        ));
                    }
                    AspectKind::SymbolicSet
                }
                "numeric" => match (a.lower, a.upper) {
                    (Some(lower), Some(upper)) => AspectKind::Numeric { lower, upper },
                    _ => {
                        return Err(ModelError::invalid(
                            path,
                            format!("numeric aspect `{}` requires both lower and upper", a.name),
                        ))
                    }
                },
                other => {
                    return Err(ModelError::invalid(
                        path,
                        format!("unknown aspect kind `{other}` (expected symbolic-set or numeric)"),
                    ))
                }
            };
            schema.push(AspectSchema {
                name: a.name,
                kind,
                positive: a.positive,
            });
        }

        let mut instances = Vec::with_capacity(self.instances.len());
        for (i, inst) in self.instances.into_iter().enumerate() {
            let mut values = BTreeMap::new();
            for (aspect, value) in inst.values {
                let value = match value {
                    ValueDoc::Number(x) => FeatureValue::Number(x),
                    ValueDoc::Symbols(list) => {
                        let mut set = BTreeSet::new();
                        for symbol in list {
                            if !set.insert(symbol.clone()) {
                                warnings.push(format!(
                                    "instances[{i}].values.{aspect}: duplicate symbol `{symbol}` collapsed"
                                ));
                            }
                        }
                        FeatureValue::Symbols(set)
                    }
                };
                values.insert(aspect, value);
            }
            instances.push(Instance {
                id: inst.id,
                values,
            });
        }

        Ok(KnowledgeBase {
            schema,
            instances,
            connections: self.connections,
            concepts: self.concepts,
        })
    }
}

impl From<&KnowledgeBase> for KbDoc {
    fn from(kb: &KnowledgeBase) -> Self {
        KbDoc {
            schema: kb
                .schema
                .iter()
                .map(|a| {
                    let (kind, lower, upper) = match a.kind {
                        AspectKind::SymbolicSet => ("symbolic-set", None, None),
                        AspectKind::Numeric { lower, upper } => {
                            ("numeric", Some(lower), Some(upper))
                        }
                    };
                    AspectDoc {
                        name: a.name.clone(),
                        kind: kind.to_string(),
                        lower,
                        upper,
                        positive: a.positive.clone(),
                    }
                })
                .collect(),
            instances: kb
                .instances
                .iter()
                .map(|inst| InstanceDoc {
                    id: inst.id.clone(),
                    values: inst
                        .values
                        .iter()
                        .map(|(aspect, value)| {
                            let doc = match value {
                                FeatureValue::Symbols(set) => {
                                    ValueDoc::Symbols(set.iter().cloned().collect())
                                }
                                FeatureValue::Number(x) => ValueDoc::Number(*x),
                            };
                            (aspect.clone(), doc)
                        })
                        .collect(),
                })
                .collect(),
            connections: kb.connections.clone(),
            concepts: kb.concepts.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_only_doc() -> &'static str {
        r#"{"schema": [{"name": "color", "kind": "symbolic-set"},
                       {"name": "size", "kind": "numeric", "lower": 0, "upper": 10}]}"#
    }

    #[test]
    fn empty_document_loads_schema_only() {
        let kb = load_knowledge_base(schema_only_doc()).unwrap();
        assert_eq!(kb.instances.len(), 0);
        assert_eq!(kb.schema.len(), 2);
    }

    #[test]
    fn out_of_bounds_numeric_names_the_aspect() {
        let text = r#"{
            "schema": [{"name": "size", "kind": "numeric", "lower": 0, "upper": 10}],
            "instances": [{"id": "a", "values": {"size": 12}}]
        }"#;
        let err = load_knowledge_base(text).unwrap_err();
        match err {
            ModelError::Invalid { path, message } => {
                assert_eq!(path, "instances[0].values.size");
                assert!(message.contains("size"), "message: {message}");
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn dangling_aspect_reference_is_rejected() {
        let text = r#"{
            "schema": [],
            "instances": [{"id": "a", "values": {"ghost": ["x"]}}]
        }"#;
        assert!(matches!(
            load_knowledge_base(text),
            Err(ModelError::Invalid { .. })
        ));
    }

    #[test]
    fn duplicate_instance_id_is_rejected() {
        let text = r#"{
            "schema": [{"name": "c", "kind": "symbolic-set"}],
            "instances": [{"id": "a", "values": {}}, {"id": "a", "values": {}}]
        }"#;
        assert!(matches!(
            load_knowledge_base(text),
            Err(ModelError::Invalid { .. })
        ));
    }

    #[test]
    fn duplicate_symbols_collapse_with_warning() {
        let text = r#"{
            "schema": [{"name": "color", "kind": "symbolic-set"}],
            "instances": [{"id": "a", "values": {"color": ["red", "red", "blue"]}}]
        }"#;
        let (kb, warnings) = load_knowledge_base_with_warnings(text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("red"));
        let set = kb.instances[0].values["color"].as_symbols().unwrap();
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn match_counts_identity() {
        let a = Instance::new("a")
            .with_value("p", FeatureValue::symbols(["x"]))
            .with_value("q", FeatureValue::number(1.0))
            .with_value("r", FeatureValue::symbols(["y", "z"]))
            .with_value("s", FeatureValue::number(2.0));
        assert_eq!(instance_match_counts(&a, &a).unwrap(), (4, 4));
    }

    #[test]
    fn match_counts_three_of_four() {
        let a = Instance::new("a")
            .with_value("p", FeatureValue::symbols(["x"]))
            .with_value("q", FeatureValue::number(1.0))
            .with_value("r", FeatureValue::symbols(["y"]))
            .with_value("s", FeatureValue::number(2.0));
        let b = Instance::new("b")
            .with_value("p", FeatureValue::symbols(["x"]))
            .with_value("q", FeatureValue::number(1.0))
            .with_value("r", FeatureValue::symbols(["y"]))
            .with_value("s", FeatureValue::number(3.0));
        assert_eq!(instance_match_counts(&a, &b).unwrap(), (3, 4));
    }

    #[test]
    fn match_counts_symmetric() {
        let a = Instance::new("a")
            .with_value("p", FeatureValue::symbols(["x"]))
            .with_value("q", FeatureValue::number(1.0));
        let b = Instance::new("b")
            .with_value("p", FeatureValue::symbols(["y"]))
            .with_value("q", FeatureValue::number(1.0))
            .with_value("r", FeatureValue::symbols(["z"]));
        assert_eq!(
            instance_match_counts(&a, &b).unwrap(),
            instance_match_counts(&b, &a).unwrap()
        );
    }

    #[test]
    fn disjoint_descriptions_error() {
        let a = Instance::new("a").with_value("p", FeatureValue::symbols(["x"]));
        let b = Instance::new("b").with_value("q", FeatureValue::symbols(["x"]));
        assert!(matches!(
            instance_match_counts(&a, &b),
            Err(ModelError::DisjointDescriptions { .. })
        ));
    }

    #[test]
    fn round_trip_is_identity() {
        let text = r#"{
            "schema": [
                {"name": "color", "kind": "symbolic-set", "positive": "red"},
                {"name": "size", "kind": "numeric", "lower": 0, "upper": 10}
            ],
            "instances": [
                {"id": "b", "values": {"color": ["blue"], "size": 3.5}},
                {"id": "a", "values": {"color": ["red", "green"]}}
            ],
            "connections": [{"p": ["color"], "q": "size"}],
            "concepts": [{"id": "k", "members": ["a", "b"], "order": [["a", "b"]],
                          "relevant": {"b": ["color"]}}]
        }"#;
        let kb = load_knowledge_base(text).unwrap();
        let reloaded = load_knowledge_base(&kb.to_json_string()).unwrap();
        assert_eq!(kb, reloaded);
    }
}
