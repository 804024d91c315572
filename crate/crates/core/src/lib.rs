//! Computation and verification toolkit for the asymptotic behaviour of
//! `Σ τ₃(n₁² + n₂² + n₃²)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: divisor sieves, three-square representation counts, modular
//!   arithmetic and the modulus splitting used by the character sums.
//! * [`expsum`]: Gauss, Kloosterman and twisted character sums.
//! * [`special`]: fundamental constants and the singular series.
//! * [`oscint`]: Fresnel-type integrals and the singular integrals.
//! * [`voronoi`]: the τ₃ Voronoi summation formula and its kernels.
//! * [`theorem`]: brute-force sums against the assembled main terms.
//! * [`cli`]: the `tau3` command-line front end.

pub mod arith;
pub mod cli;
pub mod error;
pub mod expsum;
pub mod numeric;
pub mod oscint;
pub mod special;
pub mod theorem;
pub mod voronoi;

pub use error::{Error, Result};
