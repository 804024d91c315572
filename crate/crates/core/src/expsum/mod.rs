//! Exponential sums: quadratic Gauss sums, Kloosterman sums, the cubic
//! Gauss-sum character sum with its multiplicative splitting, and the twisted
//! prime-modulus sum together with empirical bound surveys.

#![allow(non_snake_case)]

mod charsum;
mod gauss;
mod kloosterman;
mod survey;
mod twisted;

pub use charsum::{
    charsum_C_direct, charsum_C_factored, charsum_factors, charsum_size_bound, squarefree_piece_direct,
    CharSumParams, FactoredCharSum,
};
pub use gauss::{epsilon, gauss_sum, gauss_sum_at, gauss_sum_closed};
pub use kloosterman::{kloosterman, kloosterman_at, weil_bound};
pub use survey::{
    bound_survey, charsum_samples, factorization_check, gauss_survey, weil_survey, BoundSurvey, FactorizationCheck,
    GaussSurvey, PrimeSurvey,
    SurveyConfig, TwistedTuple, WeilSurvey,
};
pub use twisted::{
    twisted_T, twisted_T_closed, twisted_T_definition, twisted_discriminant, twisted_regime, TwistedRegime,
    TwistedTables,
};
