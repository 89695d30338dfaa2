//! Empirical probability tables for creating-distance and
//! accessing-recentness, fit from gold variable arguments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("recentness tables require at least one variable-argument training example")]
    EmptyTraining,
}

/// Bucketed distance counts with derived add-one-smoothed probabilities.
///
/// Distances 0..=cap each get a bucket; anything above pools into an
/// overflow bucket. The access table adds one more bucket for candidates
/// never seen before the call (`null` recentness). Raw counts are what gets
/// serialized; probabilities are derived on construction so the stored form
/// stays exact.
#[derive(Debug, Clone)]
pub struct RecentnessTables<F> {
    pub cap: u32,
    pub create_counts: Vec<u64>,
    pub access_counts: Vec<u64>,
    prob_create: Vec<F>,
    prob_access: Vec<F>,
}

/// Serialized form: counts only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableCounts {
    pub cap: u32,
    pub create: Vec<u64>,
    pub access: Vec<u64>,
}

pub const DEFAULT_BUCKET_CAP: u32 = 16;

impl<F: Real> RecentnessTables<F> {
    /// Fit from observations of gold variable arguments:
    /// (creating-distance, accessing-recentness or null).
    pub fn fit(observations: &[(u32, Option<u32>)], cap: u32) -> Result<Self, TableError> {
        if observations.is_empty() {
            return Err(TableError::EmptyTraining);
        }
        let mut create = vec![0u64; cap as usize + 2];
        let mut access = vec![0u64; cap as usize + 3];
        for (d, u) in observations {
            create[bucket(*d, cap)] += 1;
            match u {
                Some(u) => access[bucket(*u, cap)] += 1,
                None => *access.last_mut().unwrap() += 1,
            }
        }
        Ok(Self::from_counts(TableCounts {
            cap,
            create,
            access,
        }))
    }

    /// Rebuild from stored counts; add-one smoothing keeps every bucket
    /// strictly positive.
    pub fn from_counts(counts: TableCounts) -> Self {
        let prob_create = smooth(&counts.create);
        let prob_access = smooth(&counts.access);
        RecentnessTables {
            cap: counts.cap,
            create_counts: counts.create,
            access_counts: counts.access,
            prob_create,
            prob_access,
        }
    }

    pub fn counts(&self) -> TableCounts {
        TableCounts {
            cap: self.cap,
            create: self.create_counts.clone(),
            access: self.access_counts.clone(),
        }
    }

    pub fn prob_create(&self, d: u32) -> F {
        self.prob_create[bucket(d, self.cap)]
    }

    pub fn prob_access(&self, u: Option<u32>) -> F {
        match u {
            Some(u) => self.prob_access[bucket(u, self.cap)],
            None => *self.prob_access.last().unwrap(),
        }
    }

    /// `Prob(D = create_dis) * Prob(U = access_rec)`; only meaningful for
    /// variable candidates.
    pub fn recent_score(&self, create_dis: u32, access_rec: Option<u32>) -> F {
        self.prob_create(create_dis) * self.prob_access(access_rec)
    }

    pub fn prob_create_table(&self) -> &[F] {
        &self.prob_create
    }

    pub fn prob_access_table(&self) -> &[F] {
        &self.prob_access
    }
}

fn bucket(d: u32, cap: u32) -> usize {
    if d <= cap {
        d as usize
    } else {
        cap as usize + 1
    }
}

fn smooth<F: Real>(counts: &[u64]) -> Vec<F> {
    let total: u64 = counts.iter().sum();
    let den = F::from_count(total) + F::from_len(counts.len());
    counts
        .iter()
        .map(|c| (F::from_count(*c) + F::one()) / den)
        .collect()
}
