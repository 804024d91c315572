//! Brute-force left-hand sides against the assembled main terms.

mod brute;
mod predict;
mod sweep;

pub use brute::{brute_lhs, required_table_limit, Variant};
pub use predict::{predict_main_terms, MainTermModel, PredictionConfig, MIN_TRUNCATION};
pub use sweep::{
    c5_from_sums, c5_stabilize, compare, compare_sweep, sweep_with_model, tau_leading_constant, C5Report,
    ComparisonReport, SweepReport, C5_DECADE_FACTOR,
};
