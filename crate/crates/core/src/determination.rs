//! Determination-based inference: declared connections between aspect sets,
//! functional-dependency verification over a finite knowledge base, and the
//! projection rules `DET1` (deductive, total connection) and `DET2`
//! (plausible, incomplete or unverified connection).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FeatureValue, Instance, KnowledgeBase, ModelError};

/// Verification state of a connection.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectionStatus {
    /// The premise aspects functionally determine the conclusion aspect
    /// across every instance that assigns all of them.
    Total,
    /// At least one instance pair agrees on the premises but not on the
    /// conclusion.
    Incomplete,
    /// Not yet checked against the instance data.
    #[default]
    Unverified,
}

impl fmt::Display for ConnectionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConnectionStatus::Total => "total",
            ConnectionStatus::Incomplete => "incomplete",
            ConnectionStatus::Unverified => "unverified",
        })
    }
}

/// A declared dependence of aspect `q` on the aspect set `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub p: BTreeSet<String>,
    pub q: String,
    #[serde(default)]
    pub status: ConnectionStatus,
}

impl Connection {
    pub fn new<I, S>(p: I, q: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Connection {
            p: p.into_iter().map(Into::into).collect(),
            q: q.into(),
            status: ConnectionStatus::Unverified,
        }
    }

    pub fn with_status(mut self, status: ConnectionStatus) -> Self {
        self.status = status;
        self
    }

    /// Human-readable label, e.g. `[country -> currency]`.
    pub fn label(&self) -> String {
        let premises: Vec<&str> = self.p.iter().map(String::as_str).collect();
        format!("[{} -> {}]", premises.join(", "), self.q)
    }

    /// Aspects an instance must assign to be consulted during verification.
    fn consulted_aspects(&self) -> impl Iterator<Item = &String> {
        self.p.iter().chain(std::iter::once(&self.q))
    }
}

/// Outcome of checking a connection against the instance data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verification {
    Total,
    /// The witness pair agrees on every premise aspect but differs on the
    /// conclusion aspect.
    Incomplete { witness: (String, String) },
}

impl Verification {
    pub fn status(&self) -> ConnectionStatus {
        match self {
            Verification::Total => ConnectionStatus::Total,
            Verification::Incomplete { .. } => ConnectionStatus::Incomplete,
        }
    }
}

/// How a projected value relates to what the target already stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetConsistency {
    /// The target does not assign the aspect.
    Unassigned,
    /// The target already stores the same value.
    Consistent,
    /// The target stores a different value; the conclusion needs revision.
    Conflicting,
}

/// Epistemic force of a conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Deductive,
    Plausible,
}

/// Which inference rule produced a conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InferenceRule {
    #[serde(rename = "DET1")]
    Det1,
    #[serde(rename = "DET2")]
    Det2,
    #[serde(rename = "TYP")]
    Typ,
    #[serde(rename = "SIM")]
    Sim,
}

impl fmt::Display for InferenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InferenceRule::Det1 => "DET1",
            InferenceRule::Det2 => "DET2",
            InferenceRule::Typ => "TYP",
            InferenceRule::Sim => "SIM",
        })
    }
}

/// Where a conclusion came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    /// Ids of the source instances the projected value was read from.
    pub sources: Vec<String>,
    /// Label of the connection applied, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connection: Option<String>,
    /// Id of the concept applied, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
    /// Caveats, e.g. an unverified connection status.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A value projected onto a target by one of the inference rules.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalogicalConclusion {
    pub target: String,
    pub aspect: String,
    pub value: FeatureValue,
    pub modality: Modality,
    pub rule: InferenceRule,
    pub provenance: Provenance,
    pub consistency: TargetConsistency,
}

/// Errors from verification and the DET rules.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum DeterminationError {
    /// No instance assigns every consulted aspect, so the dependency can
    /// neither be confirmed nor refuted.
    #[error("connection {connection} is unverifiable: no instance assigns every consulted aspect")]
    Unverifiable { connection: String },
    /// A premise of the invoked rule does not hold.
    #[error("rule {rule} inapplicable: {premise}")]
    RuleInapplicable { rule: InferenceRule, premise: String },
    /// The rule was invoked with a connection of the wrong status.
    #[error("rule {rule} requires a {required} connection, found {found}")]
    ModalityViolation {
        rule: InferenceRule,
        required: &'static str,
        found: ConnectionStatus,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Check whether the instance data is consistent with `connection.p`
/// functionally determining `connection.q`. Only instances assigning every
/// aspect in `p ∪ {q}` are consulted; zero such instances is an error and
/// the status stays unverified.
pub fn verify_connection(
    kb: &KnowledgeBase,
    connection: &Connection,
) -> Result<Verification, DeterminationError> {
    let consulted: Vec<&Instance> = kb
        .instances
        .iter()
        .filter(|inst| {
            connection
                .consulted_aspects()
                .all(|a| inst.values.contains_key(a))
        })
        .collect();
    if consulted.is_empty() {
        return Err(DeterminationError::Unverifiable {
            connection: connection.label(),
        });
    }
    for (i, a) in consulted.iter().enumerate() {
        for b in &consulted[i + 1..] {
            let premises_agree = connection.p.iter().all(|asp| a.values[asp] == b.values[asp]);
            if premises_agree && a.values[&connection.q] != b.values[&connection.q] {
                return Ok(Verification::Incomplete {
                    witness: (a.id.clone(), b.id.clone()),
                });
            }
        }
    }
    Ok(Verification::Total)
}

/// Deductive projection: under a total connection, a target agreeing with a
/// source on every premise aspect receives the source's conclusion value.
pub fn apply_det1(
    kb: &KnowledgeBase,
    connection: &Connection,
    source: &str,
    target: &str,
) -> Result<AnalogicalConclusion, DeterminationError> {
    if connection.status != ConnectionStatus::Total {
        return Err(DeterminationError::ModalityViolation {
            rule: InferenceRule::Det1,
            required: "total",
            found: connection.status,
        });
    }
    project(kb, connection, source, target, InferenceRule::Det1)
}

/// Plausible projection: as [`apply_det1`] but for incomplete or unverified
/// connections; the conclusion is never deductive.
pub fn apply_det2(
    kb: &KnowledgeBase,
    connection: &Connection,
    source: &str,
    target: &str,
) -> Result<AnalogicalConclusion, DeterminationError> {
    if connection.status == ConnectionStatus::Total {
        return Err(DeterminationError::ModalityViolation {
            rule: InferenceRule::Det2,
            required: "incomplete or unverified",
            found: connection.status,
        });
    }
    project(kb, connection, source, target, InferenceRule::Det2)
}

fn project(
    kb: &KnowledgeBase,
    connection: &Connection,
    source: &str,
    target: &str,
    rule: InferenceRule,
) -> Result<AnalogicalConclusion, DeterminationError> {
    let s = kb.instance(source).ok_or_else(|| ModelError::UnknownId {
        kind: "instance",
        id: source.to_string(),
    })?;
    let t = kb.instance(target).ok_or_else(|| ModelError::UnknownId {
        kind: "instance",
        id: target.to_string(),
    })?;

    let inapplicable = |premise: String| DeterminationError::RuleInapplicable { rule, premise };
    for aspect in &connection.p {
        let sv = s
            .value(aspect)
            .ok_or_else(|| inapplicable(format!("source `{source}` does not assign `{aspect}`")))?;
        let tv = t
            .value(aspect)
            .ok_or_else(|| inapplicable(format!("target `{target}` does not assign `{aspect}`")))?;
        if sv != tv {
            return Err(inapplicable(format!(
                "source `{source}` and target `{target}` differ on premise aspect `{aspect}`"
            )));
        }
    }
    let value = s.value(&connection.q).ok_or_else(|| {
        inapplicable(format!(
            "source `{source}` does not assign determined aspect `{}`",
            connection.q
        ))
    })?;

    let consistency = match t.value(&connection.q) {
        None => TargetConsistency::Unassigned,
        Some(stored) if stored == value => TargetConsistency::Consistent,
        Some(_) => TargetConsistency::Conflicting,
    };
    let modality = match rule {
        InferenceRule::Det1 => Modality::Deductive,
        _ => Modality::Plausible,
    };
    let note = (connection.status == ConnectionStatus::Unverified)
        .then(|| "connection status unverified at inference time".to_string());

    Ok(AnalogicalConclusion {
        target: target.to_string(),
        aspect: connection.q.clone(),
        value: value.clone(),
        modality,
        rule,
        provenance: Provenance {
            sources: vec![source.to_string()],
            connection: Some(connection.label()),
            concept: None,
            note,
        },
        consistency,
    })
}
