//! Similarity and dissimilarity indices over instance descriptions, a
//! metric-axiom auditor, the Tversky contrast model, and transformational
//! (edit) distance over signed strings.
//!
//! The indices deliberately mix conventions: the set-complement ratio and
//! the normalized numeric difference are distance-like (0 means identical)
//! while the overlap indicator and the simple matching coefficient are
//! similarity-like (1 means overlapping/agreeing). Every formula is
//! computed exactly as defined; [`audit_metric_axioms`] reports which
//! metric axioms the chosen combination breaks instead of normalizing.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{AspectKind, AspectSchema, FeatureValue, Instance, KnowledgeBase, ModelError};

/// Absolute tolerance for the metric-axiom checks. All indices are plain
/// double-precision arithmetic over at most a handful of aspects, so any
/// genuine violation exceeds this by many orders of magnitude.
pub const AXIOM_TOLERANCE: f64 = 1e-12;

/// Per-aspect similarity formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalIndexKind {
    /// `(|a ∪ b| − |a ∩ b|) / |a ∪ b|` over symbol sets; 0 means identical.
    SetComplementRatio,
    /// 1 if the symbol sets overlap, 0 if disjoint.
    OverlapIndicator,
    /// `|a − b| / (upper − lower)` over a bounded numeric aspect.
    NormalizedNumericDifference,
}

impl fmt::Display for LocalIndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalIndexKind::SetComplementRatio => "set-complement-ratio",
            LocalIndexKind::OverlapIndicator => "overlap-indicator",
            LocalIndexKind::NormalizedNumericDifference => "normalized-numeric-difference",
        })
    }
}

/// Aggregation of per-aspect indices into one score per instance pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalIndexKind {
    /// Mean of the per-aspect indices.
    CityBlock,
    /// Root of the mean of squared per-aspect indices.
    Euclidean,
    /// `(α + δ) / (α + β + γ + δ)` over binary positive/negative codings.
    SimpleMatching,
}

impl fmt::Display for GlobalIndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlobalIndexKind::CityBlock => "city-block",
            GlobalIndexKind::Euclidean => "euclidean",
            GlobalIndexKind::SimpleMatching => "simple-matching-coefficient",
        })
    }
}

/// Chooses the local index per aspect: overrides win, otherwise symbolic
/// aspects use the configured default and numeric aspects always use the
/// normalized numeric difference.
#[derive(Debug, Clone)]
pub struct LocalAssignment {
    symbolic_default: LocalIndexKind,
    overrides: BTreeMap<String, LocalIndexKind>,
}

impl Default for LocalAssignment {
    fn default() -> Self {
        LocalAssignment {
            symbolic_default: LocalIndexKind::SetComplementRatio,
            overrides: BTreeMap::new(),
        }
    }
}

impl LocalAssignment {
    pub fn with_symbolic_default(kind: LocalIndexKind) -> Result<Self, SimilarityError> {
        if kind == LocalIndexKind::NormalizedNumericDifference {
            return Err(SimilarityError::InvalidConfiguration {
                reason: "normalized-numeric-difference cannot serve as the symbolic default"
                    .to_string(),
            });
        }
        Ok(LocalAssignment {
            symbolic_default: kind,
            overrides: BTreeMap::new(),
        })
    }

    pub fn with_override(mut self, aspect: impl Into<String>, kind: LocalIndexKind) -> Self {
        self.overrides.insert(aspect.into(), kind);
        self
    }

    pub fn resolve(&self, aspect: &AspectSchema) -> LocalIndexKind {
        if let Some(kind) = self.overrides.get(&aspect.name) {
            return *kind;
        }
        match aspect.kind {
            AspectKind::SymbolicSet => self.symbolic_default,
            AspectKind::Numeric { .. } => LocalIndexKind::NormalizedNumericDifference,
        }
    }
}

/// Errors from the similarity indices and distances.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SimilarityError {
    /// Formula (set-complement ratio) applied to two empty sets.
    #[error("set-complement ratio undefined for aspect `{aspect}`: both symbol sets are empty")]
    UndefinedRatio { aspect: String },
    /// A value's shape does not match the chosen local index.
    #[error("{index} expects {expected} values for aspect `{aspect}`, got {found}")]
    ValueShape {
        index: LocalIndexKind,
        aspect: String,
        expected: &'static str,
        found: &'static str,
    },
    /// An aspect cannot be coded positive/negative for simple matching.
    #[error("aspect `{aspect}` has no binary coding: {reason}")]
    CodingError { aspect: String, reason: String },
    /// Contrast model applied to instances sharing no symbolic features.
    #[error("contrast model inapplicable: instances `{a}` and `{b}` share no symbolic aspects")]
    InapplicableModel { a: String, b: String },
    /// A weight or configuration parameter is out of its domain.
    #[error("invalid configuration: {reason}")]
    InvalidConfiguration { reason: String },
    /// Metric audit invoked with no instances.
    #[error("metric audit requires a nonempty sample")]
    EmptySample,
    /// A signed string contains a character outside `{+, -}`.
    #[error("invalid character `{ch}` at position {position}: signed strings use only `+` and `-`")]
    AlphabetViolation { ch: char, position: usize },
    /// Signed strings of different lengths cannot be related by the
    /// length-preserving operation set.
    #[error("signed strings differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    /// Signed strings longer than 64 symbols are not supported.
    #[error("signed string of length {len} exceeds the supported maximum of 64")]
    StringTooLong { len: usize },
    /// Breadth-first search exhausted its depth bound (or the whole
    /// reachable space) without finding the target.
    #[error("target not reachable within {within} operations")]
    NotReachable { within: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn symbol_pair<'v>(
    index: LocalIndexKind,
    a: &'v FeatureValue,
    b: &'v FeatureValue,
    aspect: &AspectSchema,
) -> Result<(&'v std::collections::BTreeSet<String>, &'v std::collections::BTreeSet<String>), SimilarityError> {
    match (a.as_symbols(), b.as_symbols()) {
        (Some(sa), Some(sb)) => Ok((sa, sb)),
        _ => Err(SimilarityError::ValueShape {
            index,
            aspect: aspect.name.clone(),
            expected: "symbolic-set",
            found: if a.as_symbols().is_none() {
                a.kind_name()
            } else {
                b.kind_name()
            },
        }),
    }
}

/// Per-aspect similarity of two values under the chosen formula.
pub fn local_sim(
    kind: LocalIndexKind,
    a: &FeatureValue,
    b: &FeatureValue,
    aspect: &AspectSchema,
) -> Result<f64, SimilarityError> {
    match kind {
        LocalIndexKind::SetComplementRatio => {
            let (sa, sb) = symbol_pair(kind, a, b, aspect)?;
            let union = sa.union(sb).count();
            if union == 0 {
                return Err(SimilarityError::UndefinedRatio {
                    aspect: aspect.name.clone(),
                });
            }
            let intersection = sa.intersection(sb).count();
            Ok((union - intersection) as f64 / union as f64)
        }
        LocalIndexKind::OverlapIndicator => {
            let (sa, sb) = symbol_pair(kind, a, b, aspect)?;
            Ok(if sa.intersection(sb).next().is_some() {
                1.0
            } else {
                0.0
            })
        }
        LocalIndexKind::NormalizedNumericDifference => {
            let (xa, xb) = match (a.as_number(), b.as_number()) {
                (Some(xa), Some(xb)) => (xa, xb),
                _ => {
                    return Err(SimilarityError::ValueShape {
                        index: kind,
                        aspect: aspect.name.clone(),
                        expected: "numeric",
                        found: if a.as_number().is_none() {
                            a.kind_name()
                        } else {
                            b.kind_name()
                        },
                    })
                }
            };
            let width = aspect.range_width().ok_or_else(|| SimilarityError::ValueShape {
                index: kind,
                aspect: aspect.name.clone(),
                expected: "a bounded numeric aspect",
                found: "symbolic-set aspect",
            })?;
            if width <= 0.0 {
                return Err(SimilarityError::InvalidConfiguration {
                    reason: format!("aspect `{}` has a degenerate numeric range", aspect.name),
                });
            }
            Ok((xa - xb).abs() / width)
        }
    }
}

/// Positive/negative agreement counts for the simple matching coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SmcCounts {
    /// α: both coded positive.
    pub positive_agreements: usize,
    /// β: first positive, second negative.
    pub first_only: usize,
    /// γ: first negative, second positive.
    pub second_only: usize,
    /// δ: both coded negative.
    pub negative_agreements: usize,
}

impl SmcCounts {
    pub fn coefficient(&self) -> f64 {
        let agree = self.positive_agreements + self.negative_agreements;
        let total = agree + self.first_only + self.second_only;
        agree as f64 / total as f64
    }
}

/// Count positive/negative agreements over the mutually assigned aspects.
/// Each consulted aspect must declare a positive symbol; an instance codes
/// positive on an aspect when its symbol set contains that symbol.
pub fn smc_counts(
    kb: &KnowledgeBase,
    a: &Instance,
    b: &Instance,
) -> Result<SmcCounts, SimilarityError> {
    let shared = a.shared_aspects(b);
    if shared.is_empty() {
        return Err(ModelError::DisjointDescriptions {
            a: a.id.clone(),
            b: b.id.clone(),
        }
        .into());
    }
    let mut counts = SmcCounts {
        positive_agreements: 0,
        first_only: 0,
        second_only: 0,
        negative_agreements: 0,
    };
    for name in shared {
        let aspect = kb.aspect(name).ok_or(ModelError::UnknownId {
            kind: "aspect",
            id: name.to_string(),
        })?;
        let positive = aspect.positive.as_ref().ok_or_else(|| SimilarityError::CodingError {
            aspect: name.to_string(),
            reason: "no positive symbol declared in the schema".to_string(),
        })?;
        let code = |value: &FeatureValue| -> Result<bool, SimilarityError> {
            value
                .as_symbols()
                .map(|set| set.contains(positive))
                .ok_or_else(|| SimilarityError::CodingError {
                    aspect: name.to_string(),
                    reason: "numeric values carry no positive/negative coding".to_string(),
                })
        };
        match (code(&a.values[name])?, code(&b.values[name])?) {
            (true, true) => counts.positive_agreements += 1,
            (true, false) => counts.first_only += 1,
            (false, true) => counts.second_only += 1,
            (false, false) => counts.negative_agreements += 1,
        }
    }
    Ok(counts)
}

/// Aggregate similarity of two instances over their mutually assigned
/// aspects.
pub fn global_sim(
    kb: &KnowledgeBase,
    kind: GlobalIndexKind,
    a: &Instance,
    b: &Instance,
    locals: &LocalAssignment,
) -> Result<f64, SimilarityError> {
    if kind == GlobalIndexKind::SimpleMatching {
        return Ok(smc_counts(kb, a, b)?.coefficient());
    }
    let shared = a.shared_aspects(b);
    if shared.is_empty() {
        return Err(ModelError::DisjointDescriptions {
            a: a.id.clone(),
            b: b.id.clone(),
        }
        .into());
    }
    let mut sum = 0.0;
    for name in &shared {
        let aspect = kb.aspect(name).ok_or(ModelError::UnknownId {
            kind: "aspect",
            id: name.to_string(),
        })?;
        let local = local_sim(locals.resolve(aspect), &a.values[*name], &b.values[*name], aspect)?;
        sum += match kind {
            GlobalIndexKind::CityBlock => local,
            GlobalIndexKind::Euclidean => local * local,
            GlobalIndexKind::SimpleMatching => unreachable!(),
        };
    }
    let mean = sum / shared.len() as f64;
    Ok(match kind {
        GlobalIndexKind::CityBlock => mean,
        GlobalIndexKind::Euclidean => mean.sqrt(),
        GlobalIndexKind::SimpleMatching => unreachable!(),
    })
}

/// The three metric axioms checked by the auditor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricAxiom {
    Symmetry,
    TriangleInequality,
    Minimality,
}

impl fmt::Display for MetricAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricAxiom::Symmetry => "symmetry",
            MetricAxiom::TriangleInequality => "triangle-inequality",
            MetricAxiom::Minimality => "minimality",
        })
    }
}

/// A concrete counterexample to one axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomWitness {
    pub instances: Vec<String>,
    pub detail: String,
}

/// Pass/fail verdict for one axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: MetricAxiom,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

/// Verdicts for all three axioms over one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub index: GlobalIndexKind,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: MetricAxiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("report carries every axiom")
    }
}

/// Exhaustively check symmetry, the triangle inequality, and minimality
/// (`SIM(A,B) ≥ SIM(A,A) = 0`, a distance convention) over every pair and
/// triple from the sample, to within [`AXIOM_TOLERANCE`]. Violations are
/// reported with the first witness found; they are results, not errors.
pub fn audit_metric_axioms(
    kb: &KnowledgeBase,
    kind: GlobalIndexKind,
    locals: &LocalAssignment,
    sample: &[Instance],
) -> Result<AxiomReport, SimilarityError> {
    if sample.is_empty() {
        return Err(SimilarityError::EmptySample);
    }
    let n = sample.len();
    let mut sim = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            sim[i][j] = global_sim(kb, kind, &sample[i], &sample[j], locals)?;
        }
    }

    let mut symmetry = AxiomCheck {
        axiom: MetricAxiom::Symmetry,
        passed: true,
        witness: None,
    };
    'sym: for i in 0..n {
        for j in (i + 1)..n {
            if (sim[i][j] - sim[j][i]).abs() > AXIOM_TOLERANCE {
                symmetry.passed = false;
                symmetry.witness = Some(AxiomWitness {
                    instances: vec![sample[i].id.clone(), sample[j].id.clone()],
                    detail: format!("SIM({0},{1}) = {2} but SIM({1},{0}) = {3}",
                        sample[i].id, sample[j].id, sim[i][j], sim[j][i]),
                });
                break 'sym;
            }
        }
    }

    let mut triangle = AxiomCheck {
        axiom: MetricAxiom::TriangleInequality,
        passed: true,
        witness: None,
    };
    'tri: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if sim[i][j] + sim[j][k] + AXIOM_TOLERANCE < sim[i][k] {
                    triangle.passed = false;
                    triangle.witness = Some(AxiomWitness {
                        instances: vec![
                            sample[i].id.clone(),
                            sample[j].id.clone(),
                            sample[k].id.clone(),
                        ],
                        detail: format!(
                            "SIM({0},{1}) + SIM({1},{2}) = {3} + {4} < SIM({0},{2}) = {5}",
                            sample[i].id, sample[j].id, sample[k].id,
                            sim[i][j], sim[j][k], sim[i][k]),
                    });
                    break 'tri;
                }
            }
        }
    }

    let mut minimality = AxiomCheck {
        axiom: MetricAxiom::Minimality,
        passed: true,
        witness: None,
    };
    'min: for i in 0..n {
        if sim[i][i].abs() > AXIOM_TOLERANCE {
            minimality.passed = false;
            minimality.witness = Some(AxiomWitness {
                instances: vec![sample[i].id.clone(), sample[i].id.clone()],
                detail: format!("SIM({0},{0}) = {1}, expected 0", sample[i].id, sim[i][i]),
            });
            break 'min;
        }
        for j in 0..n {
            if sim[i][j] < sim[i][i] - AXIOM_TOLERANCE {
                minimality.passed = false;
                minimality.witness = Some(AxiomWitness {
                    instances: vec![sample[i].id.clone(), sample[j].id.clone()],
                    detail: format!(
                        "SIM({0},{1}) = {2} < SIM({0},{0}) = {3}",
                        sample[i].id, sample[j].id, sim[i][j], sim[i][i]),
                });
                break 'min;
            }
        }
    }

    Ok(AxiomReport {
        index: kind,
        checks: vec![symmetry, triangle, minimality],
    })
}

/// Feature salience `f` of the contrast model.
#[derive(Debug, Clone, PartialEq)]
pub enum Salience {
    /// `f` counts symbols.
    Cardinality,
    /// `f` sums per-symbol weights; unlisted symbols weigh 1.
    Weighted(BTreeMap<String, f64>),
}

/// Parameters of the contrast model `α·f(A∩B) − β·f(A−B) − γ·f(B−A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub salience: Salience,
}

impl Default for ContrastWeights {
    fn default() -> Self {
        ContrastWeights {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            salience: Salience::Cardinality,
        }
    }
}

impl ContrastWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, SimilarityError> {
        Self::with_salience(alpha, beta, gamma, Salience::Cardinality)
    }

    pub fn with_salience(
        alpha: f64,
        beta: f64,
        gamma: f64,
        salience: Salience,
    ) -> Result<Self, SimilarityError> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(SimilarityError::InvalidConfiguration {
                    reason: format!("{name} must be a nonnegative finite number, got {value}"),
                });
            }
        }
        if let Salience::Weighted(weights) = &salience {
            for (symbol, weight) in weights {
                if !(weight.is_finite() && *weight >= 0.0) {
                    return Err(SimilarityError::InvalidConfiguration {
                        reason: format!(
                            "salience weight for `{symbol}` must be nonnegative, got {weight}"
                        ),
                    });
                }
            }
        }
        Ok(ContrastWeights {
            alpha,
            beta,
            gamma,
            salience,
        })
    }

    fn measure<'s>(&self, symbols: impl Iterator<Item = &'s String>) -> f64 {
        match &self.salience {
            Salience::Cardinality => symbols.count() as f64,
            Salience::Weighted(weights) => symbols
                .map(|s| weights.get(s).copied().unwrap_or(1.0))
                .sum(),
        }
    }
}

/// Tversky's contrast model over the symbolic features two instances share
/// aspects for: `α·f(common) − β·f(A-only) − γ·f(B-only)`. Asymmetric by
/// design whenever `β ≠ γ`; may be negative. Numeric aspects carry no
/// symbols and are skipped.
pub fn contrast_model(
    a: &Instance,
    b: &Instance,
    weights: &ContrastWeights,
) -> Result<f64, SimilarityError> {
    let shared = a.shared_aspects(b);
    if shared.is_empty() {
        return Err(ModelError::DisjointDescriptions {
            a: a.id.clone(),
            b: b.id.clone(),
        }
        .into());
    }
    let mut common = 0.0;
    let mut a_only = 0.0;
    let mut b_only = 0.0;
    let mut saw_symbolic = false;
    for name in shared {
        if let (Some(sa), Some(sb)) = (a.values[name].as_symbols(), b.values[name].as_symbols()) {
            saw_symbolic = true;
            common += weights.measure(sa.intersection(sb));
            a_only += weights.measure(sa.difference(sb));
            b_only += weights.measure(sb.difference(sa));
        }
    }
    if !saw_symbolic {
        return Err(SimilarityError::InapplicableModel {
            a: a.id.clone(),
            b: b.id.clone(),
        });
    }
    Ok(weights.alpha * common - weights.beta * a_only - weights.gamma * b_only)
}

/// Which length-preserving operations the transformational distance may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EditOperationSet {
    pub substitution: bool,
    pub reversal: bool,
    pub sign_flip: bool,
}

impl EditOperationSet {
    pub fn new(substitution: bool, reversal: bool, sign_flip: bool) -> Result<Self, SimilarityError> {
        if !(substitution || reversal || sign_flip) {
            return Err(SimilarityError::InvalidConfiguration {
                reason: "at least one edit operation must be enabled".to_string(),
            });
        }
        Ok(EditOperationSet {
            substitution,
            reversal,
            sign_flip,
        })
    }

    pub fn substitution_only() -> Self {
        EditOperationSet {
            substitution: true,
            reversal: false,
            sign_flip: false,
        }
    }

    pub fn all() -> Self {
        EditOperationSet {
            substitution: true,
            reversal: true,
            sign_flip: true,
        }
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.substitution {
            parts.push("substitution");
        }
        if self.reversal {
            parts.push("reversal");
        }
        if self.sign_flip {
            parts.push("sign-flip");
        }
        parts.join("+")
    }
}

fn parse_signed(s: &str) -> Result<(u64, usize), SimilarityError> {
    let mut bits = 0u64;
    let mut len = 0usize;
    for (position, ch) in s.chars().enumerate() {
        if position >= 64 {
            return Err(SimilarityError::StringTooLong { len: s.chars().count() });
        }
        match ch {
            '+' => bits |= 1u64 << position,
            '-' => {}
            _ => return Err(SimilarityError::AlphabetViolation { ch, position }),
        }
        len = position + 1;
    }
    Ok((bits, len))
}

/// Minimum number of enabled operations transforming `s` into `t`, found by
/// exhaustive breadth-first search over the reachable string space. All
/// enabled operations are self-inverse, so the distance is symmetric.
pub fn transformational_distance(
    s: &str,
    t: &str,
    ops: &EditOperationSet,
    max_depth: u32,
) -> Result<u32, SimilarityError> {
    if !(ops.substitution || ops.reversal || ops.sign_flip) {
        return Err(SimilarityError::InvalidConfiguration {
            reason: "at least one edit operation must be enabled".to_string(),
        });
    }
    let (start, n) = parse_signed(s)?;
    let (goal, m) = parse_signed(t)?;
    if n != m {
        return Err(SimilarityError::LengthMismatch { left: n, right: m });
    }
    if start == goal {
        return Ok(0);
    }
    // n ≥ 1 past this point: equal empty strings returned above.
    let full_mask = u64::MAX >> (64 - n);

    let neighbors = |state: u64, out: &mut Vec<u64>| {
        out.clear();
        if ops.substitution {
            for i in 0..n {
                out.push(state ^ (1u64 << i));
            }
        }
        if ops.reversal {
            out.push(state.reverse_bits() >> (64 - n));
        }
        if ops.sign_flip {
            out.push(state ^ full_mask);
        }
    };

    let mut visited: HashSet<u64> = HashSet::from([start]);
    let mut frontier = vec![start];
    let mut scratch = Vec::new();
    for depth in 1..=max_depth {
        let mut next = Vec::new();
        for &state in &frontier {
            neighbors(state, &mut scratch);
            for &candidate in &scratch {
                if candidate == goal {
                    return Ok(depth);
                }
                if visited.insert(candidate) {
                    next.push(candidate);
                }
            }
        }
        if next.is_empty() {
            // Whole reachable component explored without hitting the goal.
            return Err(SimilarityError::NotReachable { within: depth });
        }
        frontier = next;
    }
    Err(SimilarityError::NotReachable { within: max_depth })
}
