//! Formal machinery for reasoning by analogy: similarity indices with a
//! metric-axiom audit, feature-contrast and transformational distances,
//! selection probabilities for source analogues, determination-based and
//! typicality-based inference rules, numeric series harnesses for classic
//! analogy-driven conjectures, and a multi-source heuristic workflow.

pub mod determination;
pub mod model;
pub mod multi;
pub mod selection;
pub mod series;
pub mod similarity;
pub mod typicality;

pub use determination::{
    apply_det1, apply_det2, verify_connection, AnalogicalConclusion, Connection, ConnectionStatus,
    DeterminationError, InferenceRule, Modality, Provenance, TargetConsistency, Verification,
};
pub use model::{
    load_knowledge_base, load_knowledge_base_with_warnings, AspectKind, AspectSchema,
    FeatureValue, Instance, KnowledgeBase, ModelError,
};
pub use multi::{
    corroborate, form_hypothesis, heuristic_loop, load_problem, match_conditions, CheckerRegistry,
    Condition, ConditionPattern, Hypothesis, LoopStep, MultiAnalogyError, Phase, Problem, Role,
    SourceDecl, SourceMatch,
};
pub use selection::{
    degree_of_similarity, rank_sources, relevant_match_probability, relevant_match_ratio,
    MatchStatistics, RankedSource, SelectionError, EXACT_BINOMIAL_LIMIT,
};
pub use series::{
    basel_limit_check, coefficient_identity_residual, cos_via_product, finite_regroup_control,
    leibniz_corroboration, partial_sum, sine_identity_checks, regroup_series, sin_via_product,
    sin_via_series, BaselCheck, CaseStudyError, CorroborationReport, FiniteControl,
    GroupingScheme, LeibnizReport, RegroupOutcome, RegroupVerdict, SeriesId,
    DEFAULT_CORROBORATION_TOLERANCE, DEFAULT_REGROUP_HORIZON, PI_OVER_FOUR, PI_SQUARED_OVER_SIX,
};
pub use similarity::{
    audit_metric_axioms, contrast_model, global_sim, local_sim, smc_counts,
    transformational_distance, AxiomCheck, AxiomReport, AxiomWitness, ContrastWeights,
    EditOperationSet, GlobalIndexKind, LocalAssignment, LocalIndexKind, MetricAxiom, Salience,
    SimilarityError, SmcCounts, AXIOM_TOLERANCE,
};
pub use typicality::{
    apply_typ, exceptions, typical_examples, validate_order, Concept, OrderClosure,
    OrderValidation, TypicalityError,
};
