//! Probabilistic rationales for similarity-based inference: the degree of
//! similarity of a target/source pair, the probability that matched aspects
//! cover the relevant ones, and source ranking built on it.

use num::rational::Ratio;
use num::traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::model::{instance_match_counts, Instance, ModelError};

/// Largest `m` handled by exact rational arithmetic; beyond it the
/// probability is computed as a telescoping product of ratios, accurate to
/// well under 1e-12 relative error.
pub const EXACT_BINOMIAL_LIMIT: usize = 64;

/// Match counts underlying the selection probabilities: of `m` mutually
/// assigned aspects, `i` (equivalently `s`) carry matching values and `j`
/// are deemed relevant for the projected aspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchStatistics {
    /// Matched aspects.
    pub i: usize,
    /// Mutually assigned aspects.
    pub m: usize,
    /// Matched aspects in the relevance setting; equals `i` when both are
    /// derived from the same instance pair.
    pub s: usize,
    /// Relevant aspects.
    pub j: usize,
}

impl MatchStatistics {
    pub fn new(i: usize, m: usize, s: usize, j: usize) -> Result<Self, SelectionError> {
        for (name, value) in [("i", i), ("s", s), ("j", j)] {
            if value > m {
                return Err(SelectionError::Domain {
                    reason: format!("{name} = {value} exceeds m = {m}"),
                });
            }
        }
        Ok(MatchStatistics { i, m, s, j })
    }

    /// Derive the counts for a target/candidate pair.
    pub fn from_instances(
        target: &Instance,
        candidate: &Instance,
        j: usize,
    ) -> Result<Self, SelectionError> {
        let (matched, shared) = instance_match_counts(target, candidate)?;
        MatchStatistics::new(matched, shared, matched, j)
    }

    /// Aspects shared but unmatched.
    pub fn remaining(&self) -> usize {
        self.m - self.i
    }
}

/// Errors from the selection probabilities.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SelectionError {
    /// No shared aspects: the fractions are undefined for `m = 0`.
    #[error("selection probability undefined for m = 0")]
    Undefined,
    /// A count lies outside its allowed range.
    #[error("invalid match statistics: {reason}")]
    Domain { reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Fraction of mutually assigned aspects that match: `i / m`.
pub fn degree_of_similarity(i: usize, m: usize) -> Result<f64, SelectionError> {
    if m == 0 {
        return Err(SelectionError::Undefined);
    }
    if i > m {
        return Err(SelectionError::Domain {
            reason: format!("i = {i} exceeds m = {m}"),
        });
    }
    Ok(i as f64 / m as f64)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for t in 1..=k {
        // Multiply before dividing; every prefix is itself a binomial, so
        // the division is exact.
        result = result * (n - k + t) as u128 / t as u128;
    }
    result
}

/// Exact reduced fraction `C(s,j) / C(m,j)` for `m ≤ 64`.
pub fn relevant_match_ratio(
    s: usize,
    j: usize,
    m: usize,
) -> Result<(u128, u128), SelectionError> {
    check_counts(s, j, m)?;
    if m > EXACT_BINOMIAL_LIMIT {
        return Err(SelectionError::Domain {
            reason: format!("exact ratio limited to m <= {EXACT_BINOMIAL_LIMIT}, got m = {m}"),
        });
    }
    if j > s {
        return Ok((0, 1));
    }
    let ratio = Ratio::new(binomial(s, j), binomial(m, j));
    Ok((*ratio.numer(), *ratio.denom()))
}

fn check_counts(s: usize, j: usize, m: usize) -> Result<(), SelectionError> {
    if m == 0 {
        return Err(SelectionError::Undefined);
    }
    for (name, value) in [("s", s), ("j", j)] {
        if value > m {
            return Err(SelectionError::Domain {
                reason: format!("{name} = {value} exceeds m = {m}"),
            });
        }
    }
    Ok(())
}

fn product_form(s: usize, j: usize, m: usize) -> f64 {
    // C(s,j)/C(m,j) = prod_{t=0}^{j-1} (s-t)/(m-t); every factor is in
    // (0, 1], so the product neither overflows nor loses precision.
    (0..j)
        .map(|t| (s - t) as f64 / (m - t) as f64)
        .product()
}

/// Probability that `j` relevant aspects all fall among the `s` matched
/// ones out of `m`: `C(s,j) / C(m,j)`. Zero when `j > s`; exact rational
/// arithmetic up to `m = 64`, telescoping product beyond.
pub fn relevant_match_probability(s: usize, j: usize, m: usize) -> Result<f64, SelectionError> {
    check_counts(s, j, m)?;
    if j > s {
        return Ok(0.0);
    }
    if m <= EXACT_BINOMIAL_LIMIT {
        let (numer, denom) = relevant_match_ratio(s, j, m)?;
        return Ok(Ratio::new(numer, denom).to_f64().expect("ratio fits f64"));
    }
    Ok(product_form(s, j, m))
}

/// One entry of a ranked candidate list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSource {
    pub id: String,
    pub statistics: MatchStatistics,
    pub probability: f64,
}

/// Rank candidate sources for a target by their probability of matching on
/// the `j` relevant aspects, most probable first; ties break on id. Every
/// candidate must share at least one aspect with the target.
pub fn rank_sources(
    target: &Instance,
    candidates: &[Instance],
    j: usize,
) -> Result<Vec<RankedSource>, SelectionError> {
    let mut ranked = Vec::with_capacity(candidates.len());
    for candidate in candidates {
        let statistics = MatchStatistics::from_instances(target, candidate, j)?;
        let probability = relevant_match_probability(statistics.s, j, statistics.m)?;
        ranked.push(RankedSource {
            id: candidate.id.clone(),
            statistics,
            probability,
        });
    }
    ranked.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(ranked)
}
