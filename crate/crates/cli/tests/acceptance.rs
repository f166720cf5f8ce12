//! Acceptance gate: one test per shipping criterion, each printing its own
//! pass/fail line through the harness. Numeric tolerances are pinned here.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use analogia_core::{
    apply_det1, apply_typ, audit_metric_axioms, coefficient_identity_residual,
    finite_regroup_control, leibniz_corroboration, load_knowledge_base, sine_identity_checks,
    regroup_series, relevant_match_probability, relevant_match_ratio, sin_via_product,
    transformational_distance, validate_order, verify_connection, Concept, EditOperationSet,
    FeatureValue, GlobalIndexKind, GroupingScheme, Instance, KnowledgeBase, LocalAssignment,
    LocalIndexKind, OrderValidation, RegroupVerdict, SeriesId, TargetConsistency, Verification,
    PI_SQUARED_OVER_SIX,
};

const BASEL_N: usize = 10_000;
const EULER_RUNTIME_LIMIT_MS: u128 = 1_000;
const PRODUCT_FACTORS: usize = 100_000;
const PRODUCT_RELATIVE_TOLERANCE: f64 = 1e-5;
const COEFFICIENT_FACTORS: usize = 10_000;
const COEFFICIENT_TOLERANCE: f64 = 1.1e-5;
const ODD_SYMMETRY_LIMIT: f64 = 1e-12;
const IDENTITY_TOLERANCE: f64 = 1e-3;
const CHECK_GRID: [f64; 4] = [0.1, 0.5, 1.0, 1.5];
const LEIBNIZ_ITERATIONS: usize = 4;
const LEIBNIZ_TOLERANCE: f64 = 1e-8;
const REGROUP_BLOCKS: usize = 1_000;
const RANDOM_SCHEMES: usize = 200;
const RANDOM_POSETS: usize = 200;
const RANDOM_STRING_TRIALS: usize = 500;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("fixtures")
        .join(name)
}

fn fixture_kb(name: &str) -> KnowledgeBase {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture readable");
    load_knowledge_base(&text).expect("fixture valid")
}

fn run_binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analogia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn structured_reports(output: &Output) -> Vec<Value> {
    let doc: Value = serde_json::from_slice(&output.stdout).expect("structured output parses");
    doc["reports"].as_array().expect("reports array").clone()
}

#[test]
fn criterion_01_partial_sum_residual_sits_strictly_inside_the_tail_bounds() {
    let start = Instant::now();
    let output = run_binary(&["euler", "--n", "10000", "--format", "structured"]);
    let elapsed = start.elapsed().as_millis();
    assert!(output.status.success(), "euler exited nonzero");
    assert!(
        elapsed < EULER_RUNTIME_LIMIT_MS,
        "euler took {elapsed} ms, limit {EULER_RUNTIME_LIMIT_MS} ms"
    );

    let reports = structured_reports(&output);
    let basel = reports
        .iter()
        .find(|r| r["kind"] == "partial-sum-residual-bounds")
        .expect("residual report present");
    assert_eq!(basel["n"], Value::from(BASEL_N));
    let residual = basel["residual"].as_f64().unwrap();
    let lower = basel["lower_bound"].as_f64().unwrap();
    let upper = basel["upper_bound"].as_f64().unwrap();
    assert_eq!(lower, 1.0 / (BASEL_N as f64 + 1.0));
    assert_eq!(upper, 1.0 / BASEL_N as f64);
    assert!(lower < residual && residual < upper, "residual {residual} outside ({lower}, {upper})");
}

#[test]
fn criterion_02_product_converges_to_the_sine_with_halving_error() {
    let at_pi_over_two = sin_via_product(std::f64::consts::FRAC_PI_2, PRODUCT_FACTORS).unwrap();
    assert!(
        (at_pi_over_two - 1.0).abs() <= PRODUCT_RELATIVE_TOLERANCE,
        "relative error {} above {PRODUCT_RELATIVE_TOLERANCE}",
        (at_pi_over_two - 1.0).abs()
    );

    let grid_max_error = |factors: usize| -> f64 {
        CHECK_GRID
            .iter()
            .map(|x| (sin_via_product(*x, factors).unwrap() - x.sin()).abs())
            .fold(0.0, f64::max)
    };
    let mut factors = 1_000;
    let mut previous = grid_max_error(factors);
    while factors < PRODUCT_FACTORS {
        factors *= 2;
        let current = grid_max_error(factors.min(PRODUCT_FACTORS));
        assert!(
            current < previous,
            "error did not fall doubling to K={factors}: {current} >= {previous}"
        );
        previous = current;
    }
}

#[test]
fn criterion_03_coefficient_identity_residual_is_small_and_strictly_falling() {
    let residual = coefficient_identity_residual(COEFFICIENT_FACTORS).unwrap();
    assert!(
        residual <= COEFFICIENT_TOLERANCE,
        "residual {residual} above {COEFFICIENT_TOLERANCE}"
    );
    let mut previous = coefficient_identity_residual(1).unwrap();
    for factors in 2..=100 {
        let current = coefficient_identity_residual(factors).unwrap();
        assert!(current < previous, "residual rose at K={factors}");
        previous = current;
    }
}

#[test]
fn criterion_04_identity_suite_passes_at_the_pinned_tolerances() {
    let checks = sine_identity_checks(COEFFICIENT_FACTORS, &CHECK_GRID, IDENTITY_TOLERANCE).unwrap();
    assert_eq!(checks.len(), 3);
    assert_eq!(checks[0].check, "sin-odd-symmetry");
    assert!(checks[0].max_residual <= ODD_SYMMETRY_LIMIT);
    for check in &checks[1..] {
        assert!(
            check.max_residual <= IDENTITY_TOLERANCE,
            "{} residual {} above {IDENTITY_TOLERANCE}",
            check.check,
            check.max_residual
        );
    }
    assert!(checks.iter().all(|c| c.passed));

    let output = run_binary(&["euler"]);
    assert!(output.status.success(), "euler defaults exited nonzero");
}

#[test]
fn criterion_05_accelerated_alternating_sum_hits_pi_over_four() {
    let report = leibniz_corroboration(BASEL_N, LEIBNIZ_ITERATIONS).unwrap();
    assert!(
        report.residual <= LEIBNIZ_TOLERANCE,
        "residual {} above {LEIBNIZ_TOLERANCE}",
        report.residual
    );
}

#[test]
fn criterion_06_regroupings_disagree_while_finite_controls_agree_exactly() {
    let pairs = regroup_series(SeriesId::Grandi, &GroupingScheme::pairs(), REGROUP_BLOCKS).unwrap();
    assert_eq!(pairs.verdict, RegroupVerdict::Stabilized { value: 0.0 });
    let shifted = regroup_series(
        SeriesId::Grandi,
        &GroupingScheme::one_then_pairs(),
        REGROUP_BLOCKS,
    )
    .unwrap();
    assert_eq!(shifted.verdict, RegroupVerdict::Stabilized { value: 1.0 });

    let control_terms = [1.0, -1.0, 1.0, -1.0, 1.0];
    for scheme in [
        GroupingScheme::new(vec![2, 2, 1], 1).unwrap(),
        GroupingScheme::one_then_pairs(),
    ] {
        let control = finite_regroup_control(&control_terms, &scheme).unwrap();
        assert_eq!(control.regrouped_total, 1.0);
        assert_eq!(control.plain_total, 1.0);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..RANDOM_SCHEMES {
        let mut composition = Vec::new();
        let mut remaining = control_terms.len();
        while remaining > 0 {
            let take = rng.random_range(1..=remaining.min(4));
            composition.push(take);
            remaining -= take;
        }
        let scheme = GroupingScheme::new(composition, 1).unwrap();
        let control = finite_regroup_control(&control_terms, &scheme).unwrap();
        assert_eq!(control.regrouped_total, 1.0, "scheme {}", scheme.describe());
        assert_eq!(control.plain_total, 1.0);
    }
}

#[test]
fn criterion_07_probability_matches_subset_enumeration_and_rises_with_matches() {
    for m in 1..=10usize {
        for s in 0..=m {
            for j in 0..=m {
                let mut favourable: u128 = 0;
                let mut total: u128 = 0;
                for mask in 0u32..(1 << m) {
                    if mask.count_ones() as usize != j {
                        continue;
                    }
                    total += 1;
                    if (mask >> s) == 0 {
                        favourable += 1;
                    }
                }
                let (numerator, denominator) = relevant_match_ratio(s, j, m).unwrap();
                assert_eq!(
                    favourable * denominator,
                    numerator * total,
                    "mismatch at s={s} j={j} m={m}"
                );
                let probability = relevant_match_probability(s, j, m).unwrap();
                assert!((probability - favourable as f64 / total as f64).abs() < 1e-15);
            }
        }
    }

    for m in 1..=12usize {
        for j in 0..=m {
            for s in 0..m {
                let lower = relevant_match_probability(s, j, m).unwrap();
                let higher = relevant_match_probability(s + 1, j, m).unwrap();
                assert!(
                    higher >= lower,
                    "probability fell from s={s} to s={} at j={j} m={m}",
                    s + 1
                );
            }
        }
    }
}

#[test]
fn criterion_08_edit_distances_match_the_recorded_values_and_metric_laws() {
    assert_eq!(
        transformational_distance("+++---", "+++--+", &EditOperationSet::substitution_only(), 8)
            .unwrap(),
        1
    );

    let text = std::fs::read_to_string(fixture("transform_distances.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let strings = doc["strings"].as_object().unwrap();
    for record in doc["distances"].as_array().unwrap() {
        let left = strings[record["left"].as_str().unwrap()].as_str().unwrap();
        let right = strings[record["right"].as_str().unwrap()].as_str().unwrap();
        let names: Vec<&str> = record["operations"]
            .as_array()
            .unwrap()
            .iter()
            .map(|op| op.as_str().unwrap())
            .collect();
        let ops = EditOperationSet::new(
            names.contains(&"substitution"),
            names.contains(&"reversal"),
            names.contains(&"sign-flip"),
        )
        .unwrap();
        let distance = transformational_distance(left, right, &ops, 16).unwrap();
        assert_eq!(
            u64::from(distance),
            record["distance"].as_u64().unwrap(),
            "recorded distance differs for {left} -> {right} under {}",
            ops.label()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let random_string = |len: usize, rng: &mut ChaCha8Rng| -> String {
        (0..len)
            .map(|_| if rng.random_bool(0.5) { '+' } else { '-' })
            .collect()
    };
    for _ in 0..RANDOM_STRING_TRIALS {
        let len = rng.random_range(1..=6);
        let ops = EditOperationSet::new(true, rng.random_bool(0.5), rng.random_bool(0.5)).unwrap();
        let (x, y, z) = (
            random_string(len, &mut rng),
            random_string(len, &mut rng),
            random_string(len, &mut rng),
        );
        let d = |a: &str, b: &str| transformational_distance(a, b, &ops, 16).unwrap();
        assert_eq!(d(&x, &y), d(&y, &x), "asymmetry for {x}, {y}");
        assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z), "triangle broken for {x}, {y}, {z}");
    }
}

#[test]
fn criterion_09_city_block_passes_the_audit_and_the_indicator_yields_a_witness() {
    let kb = fixture_kb("metric_audit.json");
    assert_eq!(kb.instances.len(), 6);

    let passing = audit_metric_axioms(
        &kb,
        GlobalIndexKind::CityBlock,
        &LocalAssignment::default(),
        &kb.instances,
    )
    .unwrap();
    assert!(passing.all_pass(), "{passing:?}");

    let indicator = LocalAssignment::with_symbolic_default(LocalIndexKind::OverlapIndicator).unwrap();
    let violating = audit_metric_axioms(
        &kb,
        GlobalIndexKind::CityBlock,
        &indicator,
        &kb.instances,
    )
    .unwrap();
    let witnesses: Vec<_> = violating
        .checks
        .iter()
        .filter_map(|c| c.witness.as_ref())
        .collect();
    assert!(!witnesses.is_empty(), "indicator audit produced no witness");
}

#[test]
fn criterion_10_dependency_checks_classify_and_never_conflict() {
    let kb = fixture_kb("currencies.json");
    let by_currency = &kb.connections[0];
    let by_language = &kb.connections[1];
    assert_eq!(by_currency.label(), "[country -> currency]");
    assert_eq!(by_language.label(), "[language -> currency]");

    assert_eq!(verify_connection(&kb, by_currency).unwrap(), Verification::Total);
    assert!(matches!(
        verify_connection(&kb, by_language).unwrap(),
        Verification::Incomplete { .. }
    ));

    for source in &kb.instances {
        for target in &kb.instances {
            if let Ok(conclusion) = apply_det1(&kb, by_currency, &source.id, &target.id) {
                assert_ne!(
                    conclusion.consistency,
                    TargetConsistency::Conflicting,
                    "deductive projection from {} onto {} conflicts",
                    source.id,
                    target.id
                );
            }
        }
    }

    let conflicting = Instance::new("t7")
        .with_value("country", FeatureValue::symbols(["usa"]))
        .with_value("currency", FeatureValue::symbols(["euro"]))
        .with_value("language", FeatureValue::symbols(["english"]));
    let extended = kb.with_instance(conflicting).unwrap();
    assert!(matches!(
        verify_connection(&extended, &extended.connections[0]).unwrap(),
        Verification::Incomplete { .. }
    ));
}

#[test]
fn criterion_11_typicality_projects_and_random_orders_keep_the_invariants() {
    let kb = fixture_kb("berlin_rome.json");
    let concept = kb.concept("european_city").unwrap();
    let conclusion = apply_typ(&kb, concept, "berlin", "rome", "public_transport").unwrap();
    assert_eq!(
        conclusion.value,
        FeatureValue::symbols(["underground", "buses", "taxis"])
    );

    let two_chains = Concept::new("chains")
        .with_members(["x1", "x2", "y1", "y2"])
        .with_pair("x1", "x2")
        .with_pair("y1", "y2");
    let OrderValidation::Valid(closure) = validate_order(&two_chains) else {
        panic!("two chains form a valid order");
    };
    assert_eq!(closure.typical().len(), 2);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..RANDOM_POSETS {
        let n = rng.random_range(2..=8usize);
        let mut concept = Concept::new("random")
            .with_members((0..n).map(|i| format!("e{i}")));
        for _ in 0..rng.random_range(0..=12usize) {
            let low = rng.random_range(0..n);
            let high = rng.random_range(0..n);
            if low < high {
                concept = concept.with_pair(format!("e{low}"), format!("e{high}"));
            }
        }
        let OrderValidation::Valid(closure) = validate_order(&concept) else {
            panic!("forward edges always validate");
        };
        let typical = closure.typical();
        assert!(typical.is_subset(&closure.maximal()));
        assert!(typical.is_disjoint(&closure.exceptions()));
    }
}

#[test]
fn criterion_12_the_bundled_workflow_splits_support_three_against_three() {
    let output = run_binary(&[
        "multi",
        "--problem",
        fixture("talaly.json").to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert!(output.status.success(), "multi exited nonzero");

    let reports = structured_reports(&output);
    let hypothesis = reports
        .iter()
        .rev()
        .find_map(|step| step.get("hypothesis").filter(|h| !h.is_null()))
        .expect("a hypothesis was formed");

    let support = |name: &str| -> BTreeSet<String> {
        hypothesis["interpretations"][name]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect()
    };
    let h_a = support("h_a");
    let h_b = support("h_b");
    assert_eq!(h_a, BTreeSet::from(["i".into(), "iv".into(), "vi".into()]));
    assert_eq!(h_b, BTreeSet::from(["ii".into(), "iii".into(), "v".into()]));
    assert_eq!(h_a.len(), 3);
    assert_eq!(h_b.len(), 3);

    let dual_role = hypothesis["provenance"]
        .as_object()
        .unwrap()
        .values()
        .any(|roles| roles.as_array().unwrap().len() == 2);
    assert!(dual_role, "no source carries both provenance roles");
}

#[test]
fn acceptance_suite_references_the_claimed_limit() {
    // Keeps the pinned constant in sync with the library's frozen value.
    assert!((PI_SQUARED_OVER_SIX - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
}
