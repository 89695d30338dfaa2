//! Evaluation metrics: Precision(k) = R(k)/S, Recall(k) = R(k)/A, top-k
//! accuracy, and mean reciprocal rank with misses contributing zero.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("R(k)={r} exceeds supported count S={s}")]
    HitsExceedSupported { r: u64, s: u64 },
    #[error("supported count S={s} exceeds total A={a}")]
    SupportedExceedsTotal { s: u64, a: u64 },
}

/// A ratio that records whether its denominator was zero.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricValue<F> {
    pub value: F,
    pub defined: bool,
}

impl<F: Real> MetricValue<F> {
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            MetricValue {
                value: F::zero(),
                defined: false,
            }
        } else {
            MetricValue {
                value: F::from_count(num) / F::from_count(den),
                defined: true,
            }
        }
    }
}

pub fn precision_at_k<F: Real>(r_k: u64, s: u64, a: u64) -> Result<MetricValue<F>, MetricError> {
    check(r_k, s, a)?;
    Ok(MetricValue::ratio(r_k, s))
}

pub fn recall_at_k<F: Real>(r_k: u64, s: u64, a: u64) -> Result<MetricValue<F>, MetricError> {
    check(r_k, s, a)?;
    Ok(MetricValue::ratio(r_k, a))
}

fn check(r_k: u64, s: u64, a: u64) -> Result<(), MetricError> {
    if r_k > s {
        return Err(MetricError::HitsExceedSupported { r: r_k, s });
    }
    if s > a {
        return Err(MetricError::SupportedExceedsTotal { s, a });
    }
    Ok(())
}

/// Mean reciprocal rank over the full test set; misses contribute 0.
pub fn mrr<F: Real>(ranks: &[Option<usize>]) -> F {
    if ranks.is_empty() {
        return F::zero();
    }
    let sum: F = ranks
        .iter()
        .map(|r| match r {
            Some(rank) => F::one() / F::from_len(*rank),
            None => F::zero(),
        })
        .sum();
    sum / F::from_len(ranks.len())
}

pub const REPORTED_KS: [usize; 4] = [1, 3, 5, 10];

/// Hit counts and rank bookkeeping for one slice of the test set.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Tally {
    pub total: u64,
    pub supported: u64,
    pub hits_at: BTreeMap<usize, u64>,
    pub ranks: Vec<Option<usize>>,
}

impl Tally {
    pub fn record(&mut self, supported: bool, rank: Option<usize>) {
        self.total += 1;
        if supported {
            self.supported += 1;
        }
        for k in REPORTED_KS {
            if rank.is_some_and(|r| r <= k) {
                *self.hits_at.entry(k).or_insert(0) += 1;
            }
        }
        self.ranks.push(rank);
    }

    pub fn r_at(&self, k: usize) -> u64 {
        self.hits_at.get(&k).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KMetrics<F> {
    pub k: usize,
    pub r: u64,
    pub precision: MetricValue<F>,
    pub recall: MetricValue<F>,
    pub top_k_accuracy: MetricValue<F>,
}

/// The full evaluation report.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport<F> {
    pub scenario: String,
    /// Total number of requests in the test set.
    pub a: u64,
    /// Requests whose expected argument's expression type is supported and
    /// whose callee resolved.
    pub s: u64,
    pub at_k: Vec<KMetrics<F>>,
    pub mrr: F,
    /// Wall-clock observation, kept out of the serialized report so reports
    /// stay byte-identical across runs.
    #[serde(skip_serializing)]
    pub mean_latency_ms: F,
    pub by_expr_type: BTreeMap<String, Tally>,
    pub by_origin: BTreeMap<String, Tally>,
}

impl<F: Real> EvalReport<F> {
    pub fn from_tally(
        scenario: &str,
        tally: &Tally,
        by_expr_type: BTreeMap<String, Tally>,
        by_origin: BTreeMap<String, Tally>,
        mean_latency_ms: F,
    ) -> Result<Self, MetricError> {
        let mut at_k = Vec::new();
        for k in REPORTED_KS {
            let r = tally.r_at(k);
            at_k.push(KMetrics {
                k,
                r,
                precision: precision_at_k(r, tally.supported, tally.total)?,
                recall: recall_at_k(r, tally.supported, tally.total)?,
                top_k_accuracy: MetricValue::ratio(r, tally.total),
            });
        }
        Ok(EvalReport {
            scenario: scenario.to_string(),
            a: tally.total,
            s: tally.supported,
            at_k,
            mrr: mrr(&tally.ranks),
            mean_latency_ms,
            by_expr_type,
            by_origin,
        })
    }

    pub fn top1(&self) -> F {
        self.at_k
            .first()
            .map(|m| m.top_k_accuracy.value)
            .unwrap_or_else(F::zero)
    }

    pub fn r_at(&self, k: usize) -> u64 {
        self.at_k.iter().find(|m| m.k == k).map(|m| m.r).unwrap_or(0)
    }
}
