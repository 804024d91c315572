//! Fundamental constants, the correction polynomials `P_ℓ` and the singular
//! series `C_ℓ` with dyadic tail diagnostics.

mod constants;
mod series;

pub use constants::{fundamental_constants, FundamentalConstants, EULER_GAMMA, STIELTJES_GAMMA1, ZETA3, ZETA5};
pub use series::{
    fit_log_slope, p_ell, singular_series_partial, singular_series_term, tail_decay_fit, tail_decay_fit_with,
    DyadicBlock, LogSlopeFit, SingularSeriesEstimate, SingularSeriesTerms, TailFit, DEFAULT_TRUNCATION,
};
