//! Fresnel-type integrals, window transforms and the singular integrals
//! `𝒥_ℓ`, `𝒦_ℓ`, `ℐ_ℓ(X)` with an independent geometric oracle.

mod fresnel;
mod window;

pub use fresnel::{fresnel_cs, fresnel_unit, fresnel_unit_envelope, psi0, ASYMPTOTIC_MIN_BETA};
pub use window::{window_envelope, window_shifted, window_transform, SINGULAR_SPLIT};

mod oracle;
mod region;
mod singular;

pub use oracle::{geometric_oracle, geometric_oracle_shell};
pub use region::{IntegralKind, Region};
pub use singular::{
    singular_integral, singular_integral_with, BetaQuadConfig, IntegralMethod, OscIntegralResult, MAX_ERR_ESTIMATE,
};
