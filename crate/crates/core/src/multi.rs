//! Multiple-source analogical workflow: decidable solvability conditions
//! matched against a source corpus, hypotheses formed from source support,
//! corroboration by further sources with dual-use provenance (one source may
//! both generate and justify), and an iterative heuristic loop that feeds
//! newly available sources through the whole pipeline.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FeatureValue, Instance, KnowledgeBase, ModelError};
use crate::series::{
    leibniz_corroboration, sine_identity_checks, CorroborationReport,
    DEFAULT_CORROBORATION_TOLERANCE,
};

/// Errors from the multiple-analogy workflow.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MultiAnalogyError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("condition `{condition}` references aspect `{aspect}`, which no corpus element assigns")]
    UnknownConditionAspect { condition: String, aspect: String },
    #[error("condition matching needs a nonempty corpus")]
    EmptyCorpus,
    #[error("cannot form a hypothesis from an empty source list")]
    CannotForm,
    #[error("no checker named `{name}` is registered")]
    UnknownChecker { name: String },
    #[error("heuristic loop needs {what}")]
    LoopPrecondition { what: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A decidable requirement on an instance description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionPattern {
    /// The aspect's symbol set contains the symbol.
    HasSymbol(String),
    /// The aspect's numeric value lies in `[min, max]`.
    InRange { min: f64, max: f64 },
    /// The aspect carries exactly this value.
    Equals(FeatureValue),
}

/// A named condition over one aspect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub aspect: String,
    #[serde(flatten)]
    pub pattern: ConditionPattern,
}

impl Condition {
    /// Whether an instance satisfies this condition. An unassigned aspect
    /// or a value of the wrong shape never satisfies.
    pub fn satisfied_by(&self, instance: &Instance) -> bool {
        let Some(value) = instance.value(&self.aspect) else {
            return false;
        };
        match &self.pattern {
            ConditionPattern::HasSymbol(symbol) => value
                .as_symbols()
                .is_some_and(|set| set.contains(symbol)),
            ConditionPattern::InRange { min, max } => value
                .as_number()
                .is_some_and(|x| *min <= x && x <= *max),
            ConditionPattern::Equals(expected) => value == expected,
        }
    }
}

/// When a declared source takes part in the workflow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Feeds hypothesis formation.
    #[default]
    Generation,
    /// Feeds corroboration only.
    Justification,
    /// Feeds both, earning both provenance roles.
    Both,
}

fn default_available_from() -> usize {
    1
}

/// A candidate source: either described inline or resolved from the
/// knowledge base by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceDecl {
    pub id: String,
    /// Inline description; falls back to the knowledge-base instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<String, FeatureValue>>,
    /// Interpretation this source speaks for, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<String>,
    #[serde(default)]
    pub phase: Phase,
    /// First loop iteration at which the source is available; models a
    /// corpus that grows over time.
    #[serde(default = "default_available_from")]
    pub available_from: usize,
    /// Names of unproven claims this source's analogy rests on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub depends_on: Vec<String>,
}

/// A problem to solve by analogy: target evidence, solvability conditions,
/// candidate sources, and optionally named numeric checkers to run during
/// the heuristic loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub id: String,
    #[serde(default)]
    pub target: Vec<Condition>,
    #[serde(default)]
    pub conditions: Vec<Condition>,
    #[serde(default)]
    pub sources: Vec<SourceDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkers: Vec<String>,
}

impl Problem {
    /// Resolve every declared source to an instance: inline values win,
    /// otherwise the knowledge base is consulted by id.
    pub fn resolve_corpus(&self, kb: &KnowledgeBase) -> Result<Vec<Instance>, MultiAnalogyError> {
        self.sources
            .iter()
            .map(|source| match &source.values {
                Some(values) => Ok(Instance {
                    id: source.id.clone(),
                    values: values.clone(),
                }),
                None => kb
                    .instance(&source.id)
                    .cloned()
                    .ok_or_else(|| {
                        ModelError::UnknownId {
                            kind: "instance",
                            id: source.id.clone(),
                        }
                        .into()
                    }),
            })
            .collect()
    }

    /// Check every condition against a schema: the aspect must exist and
    /// the pattern must fit its kind.
    pub fn validate_against(&self, kb: &KnowledgeBase) -> Result<(), MultiAnalogyError> {
        for (list, name) in [(&self.target, "target"), (&self.conditions, "conditions")] {
            for (i, condition) in list.iter().enumerate() {
                let path = format!("{name}[{i}]");
                let aspect = kb.aspect(&condition.aspect).ok_or_else(|| {
                    MultiAnalogyError::Invalid {
                        path: path.clone(),
                        message: format!(
                            "condition `{}` references undeclared aspect `{}`",
                            condition.name, condition.aspect
                        ),
                    }
                })?;
                let symbolic = matches!(aspect.kind, crate::model::AspectKind::SymbolicSet);
                let fits = match &condition.pattern {
                    ConditionPattern::HasSymbol(_) => symbolic,
                    ConditionPattern::InRange { .. } => !symbolic,
                    ConditionPattern::Equals(FeatureValue::Symbols(_)) => symbolic,
                    ConditionPattern::Equals(FeatureValue::Number(_)) => !symbolic,
                };
                if !fits {
                    return Err(MultiAnalogyError::Invalid {
                        path,
                        message: format!(
                            "condition `{}` pattern does not fit the {} aspect `{}`",
                            condition.name,
                            if symbolic { "symbolic" } else { "numeric" },
                            condition.aspect
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Parse and structurally validate a problem document.
pub fn load_problem(text: &str) -> Result<Problem, MultiAnalogyError> {
    let problem: Problem =
        serde_json::from_str(text).map_err(|e| MultiAnalogyError::Parse(e.to_string()))?;
    for (list, name) in [(&problem.target, "target"), (&problem.conditions, "conditions")] {
        let mut seen = BTreeSet::new();
        for (i, condition) in list.iter().enumerate() {
            if !seen.insert(condition.name.clone()) {
                return Err(MultiAnalogyError::Invalid {
                    path: format!("{name}[{i}]"),
                    message: format!("duplicate condition name `{}`", condition.name),
                });
            }
        }
    }
    let mut ids = BTreeSet::new();
    for (i, source) in problem.sources.iter().enumerate() {
        let path = format!("sources[{i}]");
        if !ids.insert(source.id.clone()) {
            return Err(MultiAnalogyError::Invalid {
                path,
                message: format!("duplicate source id `{}`", source.id),
            });
        }
        if source.available_from == 0 {
            return Err(MultiAnalogyError::Invalid {
                path,
                message: "available_from counts iterations from 1".to_string(),
            });
        }
    }
    Ok(problem)
}

/// Which solvability conditions one corpus element satisfies (its positive
/// analogy) and which it does not (its negative analogy).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceMatch {
    pub source: String,
    pub satisfied: BTreeSet<String>,
    pub unsatisfied: BTreeSet<String>,
}

/// Evaluate the problem's conditions over the corpus. Elements satisfying
/// no condition are omitted; the rest are ranked by satisfied count
/// descending, ties by id. Every condition aspect must be assigned by at
/// least one corpus element.
pub fn match_conditions(
    problem: &Problem,
    corpus: &[Instance],
) -> Result<Vec<SourceMatch>, MultiAnalogyError> {
    if corpus.is_empty() {
        return Err(MultiAnalogyError::EmptyCorpus);
    }
    for condition in &problem.conditions {
        if !corpus.iter().any(|i| i.values.contains_key(&condition.aspect)) {
            return Err(MultiAnalogyError::UnknownConditionAspect {
                condition: condition.name.clone(),
                aspect: condition.aspect.clone(),
            });
        }
    }
    let mut matches: Vec<SourceMatch> = corpus
        .iter()
        .map(|element| {
            let mut satisfied = BTreeSet::new();
            let mut unsatisfied = BTreeSet::new();
            for condition in &problem.conditions {
                if condition.satisfied_by(element) {
                    satisfied.insert(condition.name.clone());
                } else {
                    unsatisfied.insert(condition.name.clone());
                }
            }
            SourceMatch {
                source: element.id.clone(),
                satisfied,
                unsatisfied,
            }
        })
        .filter(|m| !m.satisfied.is_empty())
        .collect();
    matches.sort_by(|a, b| {
        b.satisfied
            .len()
            .cmp(&a.satisfied.len())
            .then_with(|| a.source.cmp(&b.source))
    });
    Ok(matches)
}

/// Provenance role of a source relative to a hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Generation,
    Justification,
}

/// A disjunction of named interpretations, each backed by a set of
/// supporting sources, with per-source provenance roles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub id: String,
    /// Interpretation name to supporting source ids.
    pub interpretations: BTreeMap<String, BTreeSet<String>>,
    /// Source id to the roles it has played.
    pub provenance: BTreeMap<String, BTreeSet<Role>>,
}

impl Hypothesis {
    /// Support-set cardinality per interpretation.
    pub fn scores(&self) -> BTreeMap<String, usize> {
        self.interpretations
            .iter()
            .map(|(name, support)| (name.clone(), support.len()))
            .collect()
    }

    fn absorb(&mut self, support: &[(String, String)], role: Role) {
        for (source, interpretation) in support {
            self.interpretations
                .entry(interpretation.clone())
                .or_default()
                .insert(source.clone());
            self.provenance
                .entry(source.clone())
                .or_default()
                .insert(role);
        }
    }
}

/// Form a hypothesis from sources and the interpretations they speak for.
/// Every listed source is recorded with the generation role.
pub fn form_hypothesis(
    problem: &Problem,
    support: &[(String, String)],
) -> Result<Hypothesis, MultiAnalogyError> {
    if support.is_empty() {
        return Err(MultiAnalogyError::CannotForm);
    }
    let mut hypothesis = Hypothesis {
        id: problem.id.clone(),
        interpretations: BTreeMap::new(),
        provenance: BTreeMap::new(),
    };
    hypothesis.absorb(support, Role::Generation);
    Ok(hypothesis)
}

/// Extend a hypothesis with further sources, recorded with the
/// justification role. A source already present keeps its earlier roles and
/// gains justification: the same analogy may discover and justify.
pub fn corroborate(hypothesis: &Hypothesis, support: &[(String, String)]) -> Hypothesis {
    let mut extended = hypothesis.clone();
    extended.absorb(support, Role::Justification);
    extended
}

/// Named numeric checkers the heuristic loop can run while corroborating.
pub struct CheckerRegistry {
    checkers: BTreeMap<String, fn() -> Vec<CorroborationReport>>,
}

fn sine_identity_checker() -> Vec<CorroborationReport> {
    sine_identity_checks(10_000, &[0.1, 0.5, 1.0, 1.5], DEFAULT_CORROBORATION_TOLERANCE)
        .expect("fixed parameters are valid")
}

fn series_acceleration_checker() -> Vec<CorroborationReport> {
    let report = leibniz_corroboration(10_000, 4).expect("fixed parameters are valid");
    vec![CorroborationReport {
        check: "series-acceleration".to_string(),
        k: report.n,
        grid: vec![],
        max_residual: report.residual,
        tolerance: 1e-8,
        passed: report.residual < 1e-8,
    }]
}

impl CheckerRegistry {
    /// Registry with the bundled checkers: `sine-identities` (the three
    /// product-form identity checks) and `series-acceleration` (the
    /// accelerated alternating-series estimate).
    pub fn standard() -> Self {
        let mut registry = CheckerRegistry {
            checkers: BTreeMap::new(),
        };
        registry.register("sine-identities", sine_identity_checker);
        registry.register("series-acceleration", series_acceleration_checker);
        registry
    }

    pub fn empty() -> Self {
        CheckerRegistry {
            checkers: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, checker: fn() -> Vec<CorroborationReport>) {
        self.checkers.insert(name.to_string(), checker);
    }

    pub fn run(&self, name: &str) -> Option<Vec<CorroborationReport>> {
        self.checkers.get(name).map(|checker| checker())
    }
}

/// One iteration of the heuristic loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopStep {
    pub iteration: usize,
    /// Sources newly matched this iteration, ranked.
    pub candidates: Vec<SourceMatch>,
    /// Hypothesis state after this iteration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Hypothesis>,
    /// Checker reports run this iteration.
    pub reports: Vec<CorroborationReport>,
    /// All unproven claims the matched analogies rest on so far.
    pub open: Vec<String>,
}

/// Run the match → form → corroborate cycle until no new source matches or
/// the iteration bound is reached. Sources enter the corpus at their
/// declared iteration; generation-phase sources arriving after a hypothesis
/// exists corroborate instead. Declared checkers run on every iteration
/// that updates the hypothesis. The final step of a naturally terminated
/// trace has no candidates.
pub fn heuristic_loop(
    problem: &Problem,
    kb: &KnowledgeBase,
    max_iterations: usize,
    registry: &CheckerRegistry,
) -> Result<Vec<LoopStep>, MultiAnalogyError> {
    if problem.conditions.is_empty() {
        return Err(MultiAnalogyError::LoopPrecondition {
            what: "at least one condition".to_string(),
        });
    }
    if max_iterations == 0 {
        return Err(MultiAnalogyError::LoopPrecondition {
            what: "at least one iteration".to_string(),
        });
    }
    for name in &problem.checkers {
        if registry.run(name).is_none() {
            return Err(MultiAnalogyError::UnknownChecker { name: name.clone() });
        }
    }
    let corpus = problem.resolve_corpus(kb)?;

    let mut matched_ever: BTreeSet<String> = BTreeSet::new();
    let mut hypothesis: Option<Hypothesis> = None;
    let mut open: BTreeSet<String> = BTreeSet::new();
    let mut trace = Vec::new();

    for iteration in 1..=max_iterations {
        let available: Vec<Instance> = corpus
            .iter()
            .zip(&problem.sources)
            .filter(|(_, decl)| decl.available_from <= iteration)
            .map(|(instance, _)| instance.clone())
            .collect();
        let matches = if available.is_empty() {
            Vec::new()
        } else {
            match_conditions(problem, &available)?
        };
        let new: Vec<SourceMatch> = matches
            .into_iter()
            .filter(|m| !matched_ever.contains(&m.source))
            .collect();

        if new.is_empty() {
            trace.push(LoopStep {
                iteration,
                candidates: Vec::new(),
                hypothesis: hypothesis.clone(),
                reports: Vec::new(),
                open: open.iter().cloned().collect(),
            });
            break;
        }
        matched_ever.extend(new.iter().map(|m| m.source.clone()));

        let support_of = |m: &SourceMatch, phases: &[Phase]| -> Option<(String, String)> {
            let decl = problem.sources.iter().find(|s| s.id == m.source)?;
            if !phases.contains(&decl.phase) {
                return None;
            }
            decl.supports
                .as_ref()
                .map(|interpretation| (m.source.clone(), interpretation.clone()))
        };
        let mut generating: Vec<(String, String)> = new
            .iter()
            .filter_map(|m| support_of(m, &[Phase::Generation, Phase::Both]))
            .collect();
        let mut justifying: Vec<(String, String)> = new
            .iter()
            .filter_map(|m| support_of(m, &[Phase::Justification, Phase::Both]))
            .collect();

        let updated = !(generating.is_empty() && justifying.is_empty());
        if hypothesis.is_none() {
            if !generating.is_empty() {
                hypothesis = Some(form_hypothesis(problem, &generating)?);
            }
        } else if !generating.is_empty() {
            // Discovery is over; late generation-phase sources can only
            // justify.
            justifying.append(&mut generating);
        }
        if let (Some(h), false) = (&hypothesis, justifying.is_empty()) {
            hypothesis = Some(corroborate(h, &justifying));
        }

        let reports = if updated && hypothesis.is_some() {
            problem
                .checkers
                .iter()
                .flat_map(|name| registry.run(name).expect("validated above"))
                .collect()
        } else {
            Vec::new()
        };

        for m in &new {
            if let Some(decl) = problem.sources.iter().find(|s| s.id == m.source) {
                open.extend(decl.depends_on.iter().cloned());
            }
        }

        trace.push(LoopStep {
            iteration,
            candidates: new,
            hypothesis: hypothesis.clone(),
            reports,
            open: open.iter().cloned().collect(),
        });
    }
    Ok(trace)
}
