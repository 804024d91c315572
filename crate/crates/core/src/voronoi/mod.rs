//! Voronoi summation for `τ₃` twisted by additive characters.

mod check;
mod kernel;
mod window;

pub use check::{default_dual_cutoff, voronoi_check, voronoi_check_with, MainTermNormalization, VoronoiReport};
pub use kernel::{
    asymptotic_coefficients, phi_asymptotic, phi_contour, phi_pm, ContourForm, KernelGrid, KernelSummary,
    MellinConfig, PhiPm, ASYMPTOTIC_MIN_YX,
};
pub use window::{make_bump, mellin_moments, ramp, TestWindow};
