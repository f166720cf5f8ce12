//! Command-line front end: every inference module exposed over the
//! knowledge-base document format, with human-readable tables or a
//! machine-readable `{"reports": [...]}` JSON envelope.
//!
//! Exit codes: 0 success, 1 validation or parse failure, 2 a numeric check
//! failed, 64 usage error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use analogia_core::{
    apply_det1, apply_det2, apply_typ, audit_metric_axioms, basel_limit_check,
    coefficient_identity_residual, exceptions, finite_regroup_control, global_sim, heuristic_loop,
    leibniz_corroboration, load_knowledge_base_with_warnings, load_problem, sine_identity_checks,
    rank_sources, regroup_series, typical_examples, validate_order, verify_connection,
    AnalogicalConclusion, CaseStudyError, CheckerRegistry, Connection, DeterminationError,
    GlobalIndexKind, GroupingScheme, Instance, KnowledgeBase, LocalAssignment, LocalIndexKind,
    LoopStep, ModelError, MultiAnalogyError, OrderValidation, RegroupVerdict, SelectionError,
    SeriesId, SimilarityError, TypicalityError, DEFAULT_CORROBORATION_TOLERANCE,
    DEFAULT_REGROUP_HORIZON,
};

#[derive(Parser)]
#[command(name = "analogia", version, about = "Analogical inference toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexArg {
    CityBlock,
    Euclidean,
    SimpleMatchingCoefficient,
}

impl From<IndexArg> for GlobalIndexKind {
    fn from(arg: IndexArg) -> Self {
        match arg {
            IndexArg::CityBlock => GlobalIndexKind::CityBlock,
            IndexArg::Euclidean => GlobalIndexKind::Euclidean,
            IndexArg::SimpleMatchingCoefficient => GlobalIndexKind::SimpleMatching,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LocalArg {
    SetComplementRatio,
    OverlapIndicator,
}

impl From<LocalArg> for LocalIndexKind {
    fn from(arg: LocalArg) -> Self {
        match arg {
            LocalArg::SetComplementRatio => LocalIndexKind::SetComplementRatio,
            LocalArg::OverlapIndicator => LocalIndexKind::OverlapIndicator,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Det1,
    Det2,
    Typ,
}

#[derive(Subcommand)]
enum Command {
    /// Global similarity between two instances.
    Sim {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = IndexArg::CityBlock)]
        index: IndexArg,
        /// Local index for symbolic aspects.
        #[arg(long, value_enum, default_value_t = LocalArg::SetComplementRatio)]
        local: LocalArg,
    },
    /// Audit the metric axioms over every instance in the knowledge base.
    Audit {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexArg::CityBlock)]
        index: IndexArg,
        #[arg(long, value_enum, default_value_t = LocalArg::SetComplementRatio)]
        local: LocalArg,
    },
    /// Rank candidate sources for a target by relevant-match probability.
    Rank {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        target: String,
        /// Number of relevant aspects the projection needs.
        #[arg(long)]
        j: usize,
    },
    /// Verify every declared connection against the stored instances.
    Determine {
        #[arg(long)]
        kb: PathBuf,
    },
    /// Project a value onto a target instance by rule.
    Infer {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// Connection selector (conclusion aspect or full label) for det rules.
        #[arg(long)]
        connection: Option<String>,
        /// Concept id for the typicality rule.
        #[arg(long)]
        concept: Option<String>,
        /// Aspect to project under the typicality rule.
        #[arg(long)]
        aspect: Option<String>,
    },
    /// Order validity, exceptions, and typical examples of a concept.
    Typicality {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        concept: String,
    },
    /// Numeric corroboration suite for the inverse-square series conjecture.
    Euler {
        /// Product truncation.
        #[arg(long = "K", default_value_t = 10_000)]
        factors: usize,
        /// Partial-sum length for the residual bound and the accelerated sum.
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Evaluation grid.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = vec![0.1, 0.5, 1.0, 1.5])]
        grid: Vec<f64>,
        /// Residual tolerance for the identity checks.
        #[arg(long, default_value_t = DEFAULT_CORROBORATION_TOLERANCE)]
        tolerance: f64,
    },
    /// Regroup the alternating unit series under both bracketings, with a
    /// finite control sum.
    Grandi {
        #[arg(long, default_value_t = DEFAULT_REGROUP_HORIZON)]
        blocks: usize,
    },
    /// Run the multiple-analogy heuristic loop on a problem document.
    Multi {
        #[arg(long)]
        problem: PathBuf,
        /// Knowledge base for resolving sources declared without values.
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Determination(#[from] DeterminationError),
    #[error(transparent)]
    Typicality(#[from] TypicalityError),
    #[error(transparent)]
    CaseStudy(#[from] CaseStudyError),
    #[error(transparent)]
    Multi(#[from] MultiAnalogyError),
    #[error("{0}")]
    Invalid(String),
}

/// Reports plus their table rendering; `failed` marks a numeric check that
/// did not pass (exit 2).
struct Outcome {
    reports: Vec<Value>,
    lines: Vec<String>,
    failed: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    64
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Table => outcome.lines.join("\n"),
                Format::Structured => {
                    let doc = json!({ "reports": outcome.reports });
                    serde_json::to_string_pretty(&doc).expect("serializable")
                }
            };
            // A closed pipe downstream is not a failure of this run.
            use std::io::Write;
            let _ = writeln!(std::io::stdout(), "{text}");
            if outcome.failed {
                2
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, CliError> {
    let (kb, warnings) = load_knowledge_base_with_warnings(&read(path)?)?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    Ok(kb)
}

fn find_instance<'a>(kb: &'a KnowledgeBase, id: &str) -> Result<&'a Instance, CliError> {
    kb.instance(id).ok_or_else(|| {
        CliError::Model(ModelError::UnknownId {
            kind: "instance",
            id: id.to_string(),
        })
    })
}

/// Select a connection by conclusion aspect or full label; unambiguous only.
fn select_connection<'a>(
    kb: &'a KnowledgeBase,
    selector: Option<&str>,
) -> Result<&'a Connection, CliError> {
    match selector {
        None => match kb.connections.as_slice() {
            [only] => Ok(only),
            [] => Err(CliError::Invalid(
                "the knowledge base declares no connections".to_string(),
            )),
            _ => Err(CliError::Invalid(
                "several connections are declared; pass --connection".to_string(),
            )),
        },
        Some(selector) => {
            let hits: Vec<&Connection> = kb
                .connections
                .iter()
                .filter(|c| c.label() == selector || c.q == selector)
                .collect();
            match hits.as_slice() {
                [only] => Ok(only),
                [] => Err(CliError::Invalid(format!(
                    "no connection matches `{selector}`"
                ))),
                _ => Err(CliError::Invalid(format!(
                    "`{selector}` is ambiguous; pass the full label"
                ))),
            }
        }
    }
}

fn tagged<T: Serialize>(kind: &str, value: &T) -> Value {
    let mut object = serde_json::to_value(value).expect("serializable");
    object
        .as_object_mut()
        .expect("report is an object")
        .insert("kind".to_string(), Value::String(kind.to_string()));
    object
}

fn enum_text<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value).expect("serializable") {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn pass_fail(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sim { kb, a, b, index, local } => sim(&kb, &a, &b, index, local),
        Command::Audit { kb, index, local } => audit(&kb, index, local),
        Command::Rank { kb, target, j } => rank(&kb, &target, j),
        Command::Determine { kb } => determine(&kb),
        Command::Infer { kb, rule, source, target, connection, concept, aspect } => {
            infer(&kb, rule, &source, &target, connection.as_deref(), concept.as_deref(), aspect.as_deref())
        }
        Command::Typicality { kb, concept } => typicality(&kb, &concept),
        Command::Euler { factors, n, grid, tolerance } => euler(factors, n, &grid, tolerance),
        Command::Grandi { blocks } => grandi(blocks),
        Command::Multi { problem, kb, iterations } => multi(&problem, kb.as_deref(), iterations),
    }
}

fn locals_for(local: LocalArg) -> Result<LocalAssignment, CliError> {
    Ok(LocalAssignment::with_symbolic_default(local.into())?)
}

fn sim(path: &Path, a: &str, b: &str, index: IndexArg, local: LocalArg) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    let first = find_instance(&kb, a)?;
    let second = find_instance(&kb, b)?;
    let locals = locals_for(local)?;
    let kind: GlobalIndexKind = index.into();
    let value = global_sim(&kb, kind, first, second, &locals)?;

    let mut lines = vec![format!("SIM({a}, {b}) under {kind}")];
    let report = if kind == GlobalIndexKind::SimpleMatching {
        let counts = analogia_core::smc_counts(&kb, first, second)?;
        lines.push(format!(
            "  agreements: positive={} negative={}  disagreements: first-only={} second-only={}",
            counts.positive_agreements,
            counts.negative_agreements,
            counts.first_only,
            counts.second_only
        ));
        json!({
            "kind": "similarity",
            "index": kind,
            "a": a,
            "b": b,
            "counts": counts,
            "value": value,
        })
    } else {
        let mut local_values = BTreeMap::new();
        for aspect_name in first.shared_aspects(second) {
            let schema = kb.aspect(aspect_name).expect("validated at load");
            let local_kind = locals.resolve(schema);
            let local_value = analogia_core::local_sim(
                local_kind,
                first.value(aspect_name).expect("shared"),
                second.value(aspect_name).expect("shared"),
                schema,
            )?;
            lines.push(format!("  {aspect_name} ({local_kind}): {local_value}"));
            local_values.insert(aspect_name.to_string(), local_value);
        }
        json!({
            "kind": "similarity",
            "index": kind,
            "a": a,
            "b": b,
            "locals": local_values,
            "value": value,
        })
    };
    lines.push(format!("  value: {value}"));
    Ok(Outcome { reports: vec![report], lines, failed: false })
}

fn audit(path: &Path, index: IndexArg, local: LocalArg) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    let locals = locals_for(local)?;
    let kind: GlobalIndexKind = index.into();
    let report = audit_metric_axioms(&kb, kind, &locals, &kb.instances)?;

    let mut lines = vec![format!(
        "metric-axiom audit of {kind} over {} instances",
        kb.instances.len()
    )];
    for check in &report.checks {
        let mut line = format!("  {}: {}", check.axiom, pass_fail(check.passed));
        if let Some(witness) = &check.witness {
            line.push_str(&format!(
                "  witness [{}]  {}",
                witness.instances.join(", "),
                witness.detail
            ));
        }
        lines.push(line);
    }
    Ok(Outcome {
        reports: vec![tagged("metric-audit", &report)],
        lines,
        failed: false,
    })
}

fn rank(path: &Path, target: &str, j: usize) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    let target_instance = find_instance(&kb, target)?;
    let candidates: Vec<Instance> = kb
        .instances
        .iter()
        .filter(|i| i.id != target)
        .cloned()
        .collect();
    let ranking = rank_sources(target_instance, &candidates, j)?;

    let mut lines = vec![format!("sources for {target} ranked on {j} relevant aspects")];
    for (position, source) in ranking.iter().enumerate() {
        lines.push(format!(
            "  {}. {}  matched={} shared={}  probability={}",
            position + 1,
            source.id,
            source.statistics.s,
            source.statistics.m,
            source.probability
        ));
    }
    let reports = ranking.iter().map(|r| tagged("ranked-source", r)).collect();
    Ok(Outcome { reports, lines, failed: false })
}

fn determine(path: &Path) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    if kb.connections.is_empty() {
        return Err(CliError::Invalid(
            "the knowledge base declares no connections".to_string(),
        ));
    }
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for connection in &kb.connections {
        let verification = verify_connection(&kb, connection)?;
        let verified = verification.status();
        lines.push(match &verification {
            analogia_core::Verification::Total => {
                format!("{}: total (stored {})", connection.label(), connection.status)
            }
            analogia_core::Verification::Incomplete { witness: (x, y) } => format!(
                "{}: incomplete, witness ({x}, {y}) (stored {})",
                connection.label(),
                connection.status
            ),
        });
        let mut report = tagged("connection-verification", &verification);
        let object = report.as_object_mut().expect("object");
        object.insert("connection".to_string(), Value::String(connection.label()));
        object.insert("stored".to_string(), serde_json::to_value(connection.status).expect("serializable"));
        object.insert("verified".to_string(), serde_json::to_value(verified).expect("serializable"));
        reports.push(report);
    }
    Ok(Outcome { reports, lines, failed: false })
}

fn conclusion_outcome(conclusion: AnalogicalConclusion) -> Outcome {
    let mut lines = vec![format!(
        "{}.{} = {}",
        conclusion.target, conclusion.aspect, conclusion.value
    )];
    lines.push(format!("  modality: {}", enum_text(&conclusion.modality)));
    lines.push(format!("  rule: {}", conclusion.rule));
    lines.push(format!("  sources: {}", conclusion.provenance.sources.join(", ")));
    if let Some(connection) = &conclusion.provenance.connection {
        lines.push(format!("  connection: {connection}"));
    }
    if let Some(concept) = &conclusion.provenance.concept {
        lines.push(format!("  concept: {concept}"));
    }
    if let Some(note) = &conclusion.provenance.note {
        lines.push(format!("  note: {note}"));
    }
    lines.push(format!("  consistency: {}", enum_text(&conclusion.consistency)));
    Outcome {
        reports: vec![tagged("conclusion", &conclusion)],
        lines,
        failed: false,
    }
}

fn infer(
    path: &Path,
    rule: RuleArg,
    source: &str,
    target: &str,
    connection: Option<&str>,
    concept: Option<&str>,
    aspect: Option<&str>,
) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    let conclusion = match rule {
        RuleArg::Det1 | RuleArg::Det2 => {
            let connection = select_connection(&kb, connection)?;
            match rule {
                RuleArg::Det1 => apply_det1(&kb, connection, source, target)?,
                _ => apply_det2(&kb, connection, source, target)?,
            }
        }
        RuleArg::Typ => {
            let concept_id = concept.ok_or_else(|| {
                CliError::Invalid("--rule typ requires --concept".to_string())
            })?;
            let aspect = aspect.ok_or_else(|| {
                CliError::Invalid("--rule typ requires --aspect".to_string())
            })?;
            let concept = kb.concept(concept_id).ok_or_else(|| {
                CliError::Model(ModelError::UnknownId {
                    kind: "concept",
                    id: concept_id.to_string(),
                })
            })?;
            apply_typ(&kb, concept, source, target, aspect)?
        }
    };
    Ok(conclusion_outcome(conclusion))
}

fn typicality(path: &Path, concept_id: &str) -> Result<Outcome, CliError> {
    let kb = load_kb(path)?;
    let concept = kb.concept(concept_id).ok_or_else(|| {
        CliError::Model(ModelError::UnknownId {
            kind: "concept",
            id: concept_id.to_string(),
        })
    })?;
    let mut lines = Vec::new();
    let report = match validate_order(concept) {
        OrderValidation::Violation { witness: (x, y) } => {
            lines.push(format!(
                "concept {concept_id}: order invalid, antisymmetry witness ({x}, {y})"
            ));
            json!({
                "kind": "typicality",
                "concept": concept_id,
                "order_valid": false,
                "witness": [x, y],
            })
        }
        OrderValidation::Valid(_) => {
            let exceptional = exceptions(concept)?;
            let typical = typical_examples(concept)?;
            let list = |set: &std::collections::BTreeSet<String>| {
                if set.is_empty() {
                    "(none)".to_string()
                } else {
                    set.iter().cloned().collect::<Vec<_>>().join(", ")
                }
            };
            lines.push(format!("concept {concept_id}: order valid"));
            lines.push(format!("  exceptions: {}", list(&exceptional)));
            lines.push(format!("  typical: {}", list(&typical)));
            json!({
                "kind": "typicality",
                "concept": concept_id,
                "order_valid": true,
                "exceptions": exceptional,
                "typical": typical,
            })
        }
    };
    Ok(Outcome { reports: vec![report], lines, failed: false })
}

fn euler(factors: usize, n: usize, grid: &[f64], tolerance: f64) -> Result<Outcome, CliError> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();

    let basel = basel_limit_check(n)?;
    lines.push(format!(
        "partial-sum-residual-bounds  n={}  residual={}  in ({}, {})  {}",
        basel.n,
        basel.residual,
        basel.lower_bound,
        basel.upper_bound,
        pass_fail(basel.within_bounds)
    ));
    let mut failed = !basel.within_bounds;
    reports.push(tagged("partial-sum-residual-bounds", &basel));

    let coefficient_residual = coefficient_identity_residual(factors)?;
    let coefficient_tolerance = 1.1 / (std::f64::consts::PI.powi(2) * factors as f64);
    let coefficient_passed = coefficient_residual <= coefficient_tolerance;
    lines.push(format!(
        "coefficient-identity  K={factors}  residual={coefficient_residual}  tolerance={coefficient_tolerance}  {}",
        pass_fail(coefficient_passed)
    ));
    failed |= !coefficient_passed;
    reports.push(json!({
        "kind": "coefficient-identity",
        "k": factors,
        "residual": coefficient_residual,
        "tolerance": coefficient_tolerance,
        "passed": coefficient_passed,
    }));

    for check in sine_identity_checks(factors, grid, tolerance)? {
        lines.push(format!(
            "{}  K={}  max-residual={}  tolerance={}  {}",
            check.check,
            check.k,
            check.max_residual,
            check.tolerance,
            pass_fail(check.passed)
        ));
        failed |= !check.passed;
        reports.push(tagged("identity-check", &check));
    }

    let leibniz = leibniz_corroboration(n, 4)?;
    let leibniz_passed = leibniz.residual <= 1e-8;
    lines.push(format!(
        "series-acceleration  n={}  iterations={}  residual={}  tolerance=0.00000001  {}",
        leibniz.n,
        leibniz.iterations,
        leibniz.residual,
        pass_fail(leibniz_passed)
    ));
    failed |= !leibniz_passed;
    let mut leibniz_report = tagged("series-acceleration", &leibniz);
    leibniz_report
        .as_object_mut()
        .expect("object")
        .insert("passed".to_string(), Value::Bool(leibniz_passed));
    reports.push(leibniz_report);

    Ok(Outcome { reports, lines, failed })
}

fn grandi(blocks: usize) -> Result<Outcome, CliError> {
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    let mut failed = false;

    let schemes = [
        ("pair-grouping", GroupingScheme::pairs(), 0.0),
        ("one-then-pair-grouping", GroupingScheme::one_then_pairs(), 1.0),
    ];
    for (name, scheme, expected) in &schemes {
        let outcome = regroup_series(SeriesId::Grandi, scheme, blocks)?;
        let (line, passed) = match outcome.verdict {
            RegroupVerdict::Stabilized { value } => (
                format!(
                    "{name}  {}  stabilized at {value}  {}",
                    scheme.describe(),
                    pass_fail(value == *expected)
                ),
                value == *expected,
            ),
            RegroupVerdict::NotStabilized => (
                format!("{name}  {}  not stabilized  FAIL", scheme.describe()),
                false,
            ),
        };
        lines.push(line);
        failed |= !passed;
        reports.push(json!({
            "kind": "regrouping",
            "scheme": name,
            "blocks": blocks,
            "verdict": outcome.verdict,
            "expected": expected,
            "passed": passed,
        }));
    }

    let control_terms = [1.0, -1.0, 1.0, -1.0, 1.0];
    let control_schemes = [
        ("pairs-then-tail", GroupingScheme::new(vec![2, 2, 1], 1).expect("nonzero blocks")),
        ("one-then-pairs", GroupingScheme::one_then_pairs()),
    ];
    for (name, scheme) in &control_schemes {
        let control = finite_regroup_control(&control_terms, scheme)?;
        let passed = control.regrouped_total == control.plain_total;
        lines.push(format!(
            "finite-control {name}  regrouped={} plain={}  {}",
            control.regrouped_total,
            control.plain_total,
            pass_fail(passed)
        ));
        failed |= !passed;
        let mut report = tagged("finite-control", &control);
        let object = report.as_object_mut().expect("object");
        object.insert("scheme".to_string(), Value::String(name.to_string()));
        object.insert("passed".to_string(), Value::Bool(passed));
        reports.push(report);
    }

    Ok(Outcome { reports, lines, failed })
}

fn step_lines(step: &LoopStep, lines: &mut Vec<String>) {
    lines.push(format!("iteration {}", step.iteration));
    if step.candidates.is_empty() {
        lines.push("  no new sources matched".to_string());
    } else {
        let listed: Vec<String> = step
            .candidates
            .iter()
            .map(|m| format!("{} ({} satisfied)", m.source, m.satisfied.len()))
            .collect();
        lines.push(format!("  candidates: {}", listed.join(", ")));
    }
    for report in &step.reports {
        lines.push(format!(
            "  check {}: max-residual={} tolerance={} {}",
            report.check,
            report.max_residual,
            report.tolerance,
            pass_fail(report.passed)
        ));
    }
    if !step.open.is_empty() {
        lines.push(format!("  open: {}", step.open.join(", ")));
    }
}

fn multi(problem_path: &Path, kb_path: Option<&Path>, iterations: usize) -> Result<Outcome, CliError> {
    let problem = load_problem(&read(problem_path)?)?;
    let kb = match kb_path {
        Some(path) => {
            let kb = load_kb(path)?;
            problem.validate_against(&kb)?;
            kb
        }
        None => KnowledgeBase::default(),
    };
    let trace = heuristic_loop(&problem, &kb, iterations, &CheckerRegistry::standard())?;

    let mut lines = Vec::new();
    let mut failed = false;
    for step in &trace {
        step_lines(step, &mut lines);
        failed |= step.reports.iter().any(|r| !r.passed);
    }
    if let Some(hypothesis) = trace.iter().rev().find_map(|s| s.hypothesis.as_ref()) {
        lines.push("support".to_string());
        for (interpretation, sources) in &hypothesis.interpretations {
            let listed: Vec<&str> = sources.iter().map(String::as_str).collect();
            lines.push(format!(
                "  {interpretation}: {{{}}}  score {}",
                listed.join(", "),
                sources.len()
            ));
        }
        lines.push("roles".to_string());
        for (source, roles) in &hypothesis.provenance {
            let listed: Vec<String> = roles.iter().map(enum_text).collect();
            lines.push(format!("  {source}: {}", listed.join("+")));
        }
    } else {
        lines.push("no hypothesis formed".to_string());
    }

    let reports = trace.iter().map(|s| tagged("loop-step", s)).collect();
    Ok(Outcome { reports, lines, failed })
}
