//! CLI-facing surfaces: gold matching, evaluation metrics and scenarios,
//! bundle training, and the stdio recommendation service.

pub mod evaluate;
pub mod matching;
pub mod metrics;
pub mod serve;
pub mod train;

pub use evaluate::{evaluate, load_split, EvalError, Scenario, Split};
pub use matching::{gold_rank, matches_gold};
pub use metrics::{mrr, precision_at_k, recall_at_k, EvalReport, MetricValue, Tally};
pub use serve::{serve_loop, ServeState};
pub use train::{build_bundle, TrainError, TrainOptions, TrainSummary};
