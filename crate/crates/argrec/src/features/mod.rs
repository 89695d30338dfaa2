//! Static recommending features: parameter similarity, creating-distance,
//! accessing-recentness, and the fitted recentness probability tables.

pub mod parasim;
pub mod recentness;
pub mod tables;

pub use parasim::{identifier_terms, normalize_parasim, parasim, parasim_of_terms};
pub use recentness::{accessing_recentness, creating_distance, VarProvenance};
pub use tables::{RecentnessTables, TableCounts, TableError, DEFAULT_BUCKET_CAP};

use crate::scalar::Real;

/// Static features of one candidate at one request.
#[derive(Debug, Clone)]
pub struct FeatureVector<F> {
    pub parasim_raw: F,
    pub parasim_norm: F,
    /// Defined for variable candidates only.
    pub create_dis: Option<u32>,
    /// Defined for variable candidates; `None` also encodes "never accessed".
    pub access_rec: Option<u32>,
    pub is_variable: bool,
}

impl<F: Real> FeatureVector<F> {
    pub fn non_variable(parasim_raw: F, lower_bound: F) -> Self {
        FeatureVector {
            parasim_raw,
            parasim_norm: normalize_parasim(parasim_raw, lower_bound),
            create_dis: None,
            access_rec: None,
            is_variable: false,
        }
    }
}
