//! Shared numerical kernels: compensated accumulation, quadrature rules,
//! the complex log-Gamma function and additive characters `e(x)`.

pub mod lgamma;
pub mod quad;
pub mod sum;

use num_complex::Complex64;
use std::f64::consts::TAU;

pub use lgamma::ln_gamma;
pub use quad::{GaussLegendre, Integrand, QuadResult, Tolerance};
pub use sum::{ComplexSum, RealSum};

/// The additive character `e(x) = exp(2πix)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// `e(k/q)` for every residue `k mod q`, evaluated from the reduced fraction
/// so the table carries no accumulated rotation error.
#[derive(Debug, Clone)]
pub struct UnitRoots {
    q: u64,
    table: Vec<Complex64>,
}

impl UnitRoots {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let table = (0..q).map(|k| e(k as f64 / q as f64)).collect();
        UnitRoots { q, table }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `e(k/q)` for an arbitrary signed `k`.
    #[inline]
    pub fn at(&self, k: i64) -> Complex64 {
        self.table[k.rem_euclid(self.q as i64) as usize]
    }

    /// `e(k/q)` for an already-reduced `k`.
    #[inline]
    pub fn at_reduced(&self, k: u64) -> Complex64 {
        self.table[k as usize]
    }
}
