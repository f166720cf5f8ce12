//! Numeric series harnesses: partial sums and limit checks for the
//! reciprocal-square series, truncated sine series and sine/cosine product
//! representations with corroboration checks of known identities, an
//! accelerated alternating-series estimate, and consecutive regrouping of
//! series terms with a finite-sum control.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

/// π²/6, the limit of Σ 1/k². Evaluated once with extended-precision
/// arithmetic (π²/6 = 1.64493406684822643647…) and rounded to the nearest
/// double; independent of the partial-sum code under test.
pub const PI_SQUARED_OVER_SIX: f64 = 1.6449340668482264;

/// π/4, the limit of 1 − 1/3 + 1/5 − …. Evaluated once with
/// extended-precision arithmetic (0.78539816339744830961…)
/// and rounded to the nearest double.
pub const PI_OVER_FOUR: f64 = 0.7853981633974483;

/// Tolerance for the structural odd-symmetry check: the product form is odd
/// by construction, so its residual is zero up to rounding.
pub const ODD_SYMMETRY_TOLERANCE: f64 = 1e-15;

/// Default tolerance for the truncation-limited corroboration checks at
/// the default truncation depth of 10⁴ factors.
pub const DEFAULT_CORROBORATION_TOLERANCE: f64 = 1e-3;

/// Default number of blocks evaluated when regrouping a series.
pub const DEFAULT_REGROUP_HORIZON: usize = 1000;

/// Errors from the series operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CaseStudyError {
    #[error("domain error: {reason}")]
    Domain { reason: String },
    #[error("grouping scheme mismatch: {reason}")]
    SchemeMismatch { reason: String },
}

fn domain(reason: impl Into<String>) -> CaseStudyError {
    CaseStudyError::Domain {
        reason: reason.into(),
    }
}

/// The three bundled series, as total term functions over 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesId {
    /// Σ 1/k² = 1 + 1/4 + 1/9 + …
    Basel,
    /// Σ (−1)^(k+1)/(2k−1) = 1 − 1/3 + 1/5 − …
    Leibniz,
    /// Σ (−1)^(k+1) = 1 − 1 + 1 − …
    Grandi,
}

impl SeriesId {
    /// The k-th term, k ≥ 1.
    pub fn term(&self, k: usize) -> f64 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        match self {
            SeriesId::Basel => 1.0 / (k as f64 * k as f64),
            SeriesId::Leibniz => sign / (2 * k - 1) as f64,
            SeriesId::Grandi => sign,
        }
    }
}

/// Partial sum of the first `n` terms, accumulated smallest-term-first to
/// limit rounding error.
pub fn partial_sum(series: SeriesId, n: usize) -> Result<f64, CaseStudyError> {
    if n == 0 {
        return Err(domain("partial sums need n >= 1"));
    }
    Ok((1..=n).rev().map(|k| series.term(k)).sum())
}

/// Partial sum of Σ 1/k² with its residual against π²/6 and the integral
/// tail bounds the residual must respect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselCheck {
    pub n: usize,
    pub partial_sum: f64,
    pub residual: f64,
    /// 1/(n+1), strict lower bound on the tail.
    pub lower_bound: f64,
    /// 1/n, strict upper bound on the tail.
    pub upper_bound: f64,
    pub within_bounds: bool,
}

/// Check the partial sum of Σ 1/k² against its limit: the residual
/// π²/6 − S_n must lie strictly inside (1/(n+1), 1/n).
pub fn basel_limit_check(n: usize) -> Result<BaselCheck, CaseStudyError> {
    if n < 2 {
        return Err(domain("the tail bounds need n >= 2"));
    }
    let partial = partial_sum(SeriesId::Basel, n)?;
    let residual = PI_SQUARED_OVER_SIX - partial;
    let lower_bound = 1.0 / (n + 1) as f64;
    let upper_bound = 1.0 / n as f64;
    Ok(BaselCheck {
        n,
        partial_sum: partial,
        residual,
        lower_bound,
        upper_bound,
        within_bounds: lower_bound < residual && residual < upper_bound,
    })
}

/// Truncated alternating power series of sin x:
/// `x − x³/3! + x⁵/5! − …`, `terms` terms, summed smallest-term-first.
pub fn sin_via_series(x: f64, terms: usize) -> Result<f64, CaseStudyError> {
    if terms == 0 {
        return Err(domain("the series needs at least one term"));
    }
    let mut all = Vec::with_capacity(terms);
    let mut term = x;
    all.push(term);
    for t in 1..terms {
        let even = (2 * t) as f64;
        term *= -(x * x) / (even * (even + 1.0));
        all.push(term);
    }
    Ok(all.iter().rev().sum())
}

/// Truncated product representation of sin x:
/// `x · ∏_{k=1..K} (1 − x²/(k²π²))`.
pub fn sin_via_product(x: f64, factors: usize) -> Result<f64, CaseStudyError> {
    if factors == 0 {
        return Err(domain("the product needs at least one factor"));
    }
    let x2 = x * x;
    let mut product = 1.0;
    for k in 1..=factors {
        let kpi = k as f64 * PI;
        product *= 1.0 - x2 / (kpi * kpi);
    }
    Ok(x * product)
}

/// Truncated product representation of cos x:
/// `∏_{k=1..K} (1 − x²/((k−½)²π²))`.
pub fn cos_via_product(x: f64, factors: usize) -> Result<f64, CaseStudyError> {
    if factors == 0 {
        return Err(domain("the product needs at least one factor"));
    }
    let x2 = x * x;
    let mut product = 1.0;
    for k in 1..=factors {
        let root = (k as f64 - 0.5) * PI;
        product *= 1.0 - x2 / (root * root);
    }
    Ok(product)
}

/// `|1/6 − Σ_{k=1..K} 1/(k²π²)|`: the residual of matching the quadratic
/// coefficient of the sine series against the expanded product. Strictly
/// decreasing in K.
pub fn coefficient_identity_residual(factors: usize) -> Result<f64, CaseStudyError> {
    if factors == 0 {
        return Err(domain("the identity needs at least one factor"));
    }
    let sum: f64 = (1..=factors)
        .rev()
        .map(|k| {
            let kpi = k as f64 * PI;
            1.0 / (kpi * kpi)
        })
        .sum();
    Ok((1.0 / 6.0 - sum).abs())
}

/// Outcome of evaluating one identity over a grid at a fixed truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorroborationReport {
    pub check: String,
    /// Truncation parameter (factors or terms).
    pub k: usize,
    pub grid: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CorroborationReport {
    fn over_grid(
        check: &str,
        k: usize,
        grid: &[f64],
        tolerance: f64,
        residual: impl Fn(f64) -> f64,
    ) -> Self {
        let max_residual = grid.iter().map(|&x| residual(x).abs()).fold(0.0, f64::max);
        CorroborationReport {
            check: check.to_string(),
            k,
            grid: grid.to_vec(),
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

/// Evaluate three known sine identities with the truncated product form
/// `P` (and cosine product `C`) over a grid:
/// odd symmetry `P(−x) + P(x)`, shift antisymmetry `P(x+π) + P(x)`, and
/// the half-angle product `P(x) − 2·P(x/2)·C(x/2)`. The first is structural
/// and judged at rounding level; the other two against `tolerance`.
pub fn sine_identity_checks(
    factors: usize,
    grid: &[f64],
    tolerance: f64,
) -> Result<Vec<CorroborationReport>, CaseStudyError> {
    if factors == 0 {
        return Err(domain("the product needs at least one factor"));
    }
    if grid.is_empty() {
        return Err(domain("the evaluation grid must be nonempty"));
    }
    for &x in grid {
        if !x.is_finite() || x.abs() > 2.0 * PI {
            return Err(domain(format!("grid point {x} outside [-2π, 2π]")));
        }
    }
    let p = |x: f64| sin_via_product(x, factors).expect("factors >= 1");
    let c = |x: f64| cos_via_product(x, factors).expect("factors >= 1");
    Ok(vec![
        CorroborationReport::over_grid(
            "sin-odd-symmetry",
            factors,
            grid,
            ODD_SYMMETRY_TOLERANCE,
            |x| p(-x) + p(x),
        ),
        CorroborationReport::over_grid(
            "sin-shift-antisymmetry",
            factors,
            grid,
            tolerance,
            |x| p(x + PI) + p(x),
        ),
        CorroborationReport::over_grid(
            "sin-half-angle-product",
            factors,
            grid,
            tolerance,
            |x| p(x) - 2.0 * p(x / 2.0) * c(x / 2.0),
        ),
    ])
}

/// Accelerated estimate of the alternating series 1 − 1/3 + 1/5 − ….
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeibnizReport {
    pub n: usize,
    pub iterations: usize,
    pub accelerated: f64,
    /// |accelerated − π/4|.
    pub residual: f64,
}

/// Estimate π/4 from the first `n` partial sums of the alternating odd
/// reciprocals, refined by `iterations` rounds of consecutive averaging
/// (each round replaces the sequence by the means of adjacent entries).
pub fn leibniz_corroboration(n: usize, iterations: usize) -> Result<LeibnizReport, CaseStudyError> {
    if n == 0 {
        return Err(domain("needs at least one partial sum"));
    }
    if iterations >= n {
        return Err(domain(format!(
            "{iterations} averaging rounds need more than {iterations} partial sums, got {n}"
        )));
    }
    let mut sums = Vec::with_capacity(n);
    let mut running = 0.0;
    for k in 1..=n {
        running += SeriesId::Leibniz.term(k);
        sums.push(running);
    }
    for _ in 0..iterations {
        sums = sums.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    }
    let accelerated = *sums.last().expect("iterations < n leaves entries");
    Ok(LeibnizReport {
        n,
        iterations,
        accelerated,
        residual: (accelerated - PI_OVER_FOUR).abs(),
    })
}

/// Consecutive-block regrouping: a finite prefix of block lengths followed
/// by a repeating tail block length. All lengths are at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupingScheme {
    prefix: Vec<usize>,
    repeating: usize,
}

impl GroupingScheme {
    pub fn new(prefix: Vec<usize>, repeating: usize) -> Result<Self, CaseStudyError> {
        if repeating == 0 || prefix.iter().any(|&b| b == 0) {
            return Err(domain("block lengths must be at least 1"));
        }
        Ok(GroupingScheme { prefix, repeating })
    }

    /// Blocks of two: (t₁ + t₂) + (t₃ + t₄) + ….
    pub fn pairs() -> Self {
        GroupingScheme {
            prefix: vec![],
            repeating: 2,
        }
    }

    /// A leading singleton, then blocks of two: t₁ + (t₂ + t₃) + ….
    pub fn one_then_pairs() -> Self {
        GroupingScheme {
            prefix: vec![1],
            repeating: 2,
        }
    }

    /// Infinite sequence of block lengths.
    pub fn block_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefix
            .iter()
            .copied()
            .chain(std::iter::repeat(self.repeating))
    }

    pub fn describe(&self) -> String {
        let prefix: Vec<String> = self.prefix.iter().map(|b| b.to_string()).collect();
        if prefix.is_empty() {
            format!("({}) repeating", self.repeating)
        } else {
            format!("{} then ({}) repeating", prefix.join(", "), self.repeating)
        }
    }
}

/// Verdict on the regrouped block partial sums at the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum RegroupVerdict {
    /// Block partial sums exactly constant over the last half of the
    /// horizon.
    Stabilized { value: f64 },
    /// Still drifting (or oscillating) at the horizon.
    NotStabilized,
}

/// Block sums and their partial sums for one regrouping of a series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegroupOutcome {
    pub block_sums: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub verdict: RegroupVerdict,
}

/// Sum `blocks` consecutive blocks of the series under the scheme and judge
/// whether the block partial sums have stabilized: exactly constant over
/// the last half of the computed horizon.
pub fn regroup_series(
    series: SeriesId,
    scheme: &GroupingScheme,
    blocks: usize,
) -> Result<RegroupOutcome, CaseStudyError> {
    if blocks == 0 {
        return Err(domain("needs at least one block"));
    }
    let mut block_sums = Vec::with_capacity(blocks);
    let mut partial_sums = Vec::with_capacity(blocks);
    let mut next_term = 1usize;
    let mut running = 0.0;
    for length in scheme.block_lengths().take(blocks) {
        let block: f64 = (next_term..next_term + length)
            .map(|k| series.term(k))
            .sum();
        next_term += length;
        running += block;
        block_sums.push(block);
        partial_sums.push(running);
    }
    let tail = &partial_sums[partial_sums.len() / 2..];
    let verdict = if tail.windows(2).all(|w| w[0] == w[1]) {
        RegroupVerdict::Stabilized {
            value: *tail.last().expect("horizon is nonempty"),
        }
    } else {
        RegroupVerdict::NotStabilized
    };
    Ok(RegroupOutcome {
        block_sums,
        partial_sums,
        verdict,
    })
}

/// Totals of a finite term list summed plainly and under a regrouping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteControl {
    pub block_totals: Vec<f64>,
    pub regrouped_total: f64,
    pub plain_total: f64,
}

/// Regroup a finite term list under the scheme and compare against the
/// plain left-to-right total. The scheme must cover the list exactly:
/// running out of terms mid-block is an error.
pub fn finite_regroup_control(
    terms: &[f64],
    scheme: &GroupingScheme,
) -> Result<FiniteControl, CaseStudyError> {
    let mut block_totals = Vec::new();
    let mut consumed = 0usize;
    for length in scheme.block_lengths() {
        if consumed == terms.len() {
            break;
        }
        if consumed + length > terms.len() {
            return Err(CaseStudyError::SchemeMismatch {
                reason: format!(
                    "block of {length} does not fit the remaining {} terms",
                    terms.len() - consumed
                ),
            });
        }
        block_totals.push(terms[consumed..consumed + length].iter().sum());
        consumed += length;
    }
    Ok(FiniteControl {
        regrouped_total: block_totals.iter().sum(),
        plain_total: terms.iter().sum(),
        block_totals,
    })
}
