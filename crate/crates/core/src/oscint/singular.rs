use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::fresnel::{fresnel_unit, fresnel_unit_envelope};
use super::region::{IntegralKind, Region};
use super::window::{window_envelope, window_shifted};
use crate::numeric::quad::{gk21, integrate, Tolerance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegralMethod {
    BetaQuadrature,
    GeometricOracle,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscIntegralResult {
    pub value: f64,
    pub err_estimate: f64,
    pub method: IntegralMethod,
    /// Outer truncation `B` of the β integral (zero for the oracle).
    pub beta_cutoff: f64,
    pub node_count: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaQuadConfig {
    /// Target for the envelope bound on `∫_{|β|>B}`.
    pub tail_target: f64,
    /// Width of the fixed Kronrod panels on `[0, B]`.
    pub panel_width: f64,
    pub max_cutoff: f64,
}

impl Default for BetaQuadConfig {
    fn default() -> Self {
        BetaQuadConfig {
            tail_target: 1e-6,
            panel_width: 0.25,
            max_cutoff: 2e5,
        }
    }
}

/// Error estimates above this raise a nonconvergence signal.
pub const MAX_ERR_ESTIMATE: f64 = 1e-3;

fn envelope(reg: &Region, beta: f64) -> f64 {
    fresnel_unit_envelope(beta).powi(3) * window_envelope(beta, reg.ell, reg.lo, reg.hi, reg.shift)
}

/// `2∫_B^∞` of the integrand envelope, integrated in `t = 1/β`.
fn tail_bound(reg: &Region, cutoff: f64) -> f64 {
    let r = integrate(
        |t: f64| envelope(reg, 1.0 / t) / (t * t),
        0.0,
        1.0 / cutoff,
        Tolerance::abs(1e-12).with_rel(1e-6),
    );
    2.0 * r.value
}

fn choose_cutoff(reg: &Region, cfg: &BetaQuadConfig) -> (f64, f64) {
    let mut hi = 16.0;
    while tail_bound(reg, hi) > cfg.tail_target && hi < cfg.max_cutoff {
        hi *= 2.0;
    }
    let mut hi = hi.min(cfg.max_cutoff);
    let mut lo = hi / 2.0;
    if tail_bound(reg, hi) <= cfg.tail_target {
        for _ in 0..12 {
            let mid = 0.5 * (lo + hi);
            if tail_bound(reg, mid) <= cfg.tail_target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let cutoff = (hi / cfg.panel_width).ceil() * cfg.panel_width;
    (cutoff, tail_bound(reg, cutoff))
}

/// `∫_ℝ (∫₀¹ e(βv²)dv)³ (∫_lo^hi (shift + log u)^ℓ e(−βu) du) dβ` for the
/// region of `kind`, by Kronrod panels on `|β| ≤ B`.
pub fn singular_integral(kind: IntegralKind, ell: usize, x: f64, big_x: f64) -> Result<OscIntegralResult> {
    singular_integral_with(kind, ell, x, big_x, &BetaQuadConfig::default())
}

pub fn singular_integral_with(
    kind: IntegralKind,
    ell: usize,
    x: f64,
    big_x: f64,
    cfg: &BetaQuadConfig,
) -> Result<OscIntegralResult> {
    let reg = Region::new(kind, ell, x, big_x)?;
    let (cutoff, tail) = choose_cutoff(&reg, cfg);
    let panels = (cutoff / cfg.panel_width).round() as usize;
    let integrand = |beta: f64| -> Complex64 {
        let f = fresnel_unit(beta);
        let w = window_shifted(beta, reg.ell, reg.lo, reg.hi, reg.shift).expect("region validated");
        f * f * f * w
    };
    let pieces: Vec<(Complex64, f64)> = (0..panels)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 * cfg.panel_width;
            gk21(&mut { integrand }, a, a + cfg.panel_width)
        })
        .collect();
    // The integrand at −β is the conjugate of that at β.
    let mut value = 0.0;
    let mut quad_err = 0.0;
    for (v, e) in pieces {
        value += 2.0 * v.re;
        quad_err += 2.0 * e;
    }
    let err_estimate = tail + quad_err;
    if !(err_estimate <= MAX_ERR_ESTIMATE) {
        return Err(Error::NonConvergence {
            what: "singular integral",
            err_estimate,
            tolerance: MAX_ERR_ESTIMATE,
        });
    }
    Ok(OscIntegralResult {
        value,
        err_estimate,
        method: IntegralMethod::BetaQuadrature,
        beta_cutoff: cutoff,
        node_count: panels * 21,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscint::geometric_oracle;
    use std::f64::consts::PI;

    #[test]
    fn cube_and_octant_volumes() {
        let j = singular_integral(IntegralKind::J, 0, 0.0, 0.0).unwrap();
        assert!((j.value - 1.0).abs() <= 1e-5, "{j:?}");
        let k = singular_integral(IntegralKind::K, 0, 0.0, 0.0).unwrap();
        assert!((k.value - PI / 6.0).abs() <= 1e-5, "{k:?}");
        assert!(j.err_estimate >= 0.0 && j.beta_cutoff > 0.0 && j.node_count > 0);
    }

    #[test]
    fn beta_route_matches_oracle_for_every_kind() {
        for (kind, x, big_x) in [
            (IntegralKind::J, 0.0, 0.0),
            (IntegralKind::K, 0.0, 0.0),
            (IntegralKind::I, 1000.0, 3000.0),
            (IntegralKind::I, 1000.0, 1300.0),
        ] {
            for ell in 0..=2 {
                let q = singular_integral(kind, ell, x, big_x).unwrap();
                let o = geometric_oracle(kind, ell, x, big_x).unwrap();
                let tol = (3.0 * q.err_estimate).max(1e-5);
                assert!((q.value - o).abs() <= tol, "{kind:?} ell={ell}: {} vs {o} (err {})", q.value, q.err_estimate);
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = singular_integral(IntegralKind::J, 2, 0.0, 0.0).unwrap();
        let b = singular_integral(IntegralKind::J, 2, 0.0, 0.0).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn preconditions() {
        assert!(singular_integral(IntegralKind::I, 0, 10.0, 40.0).is_err());
        assert!(singular_integral(IntegralKind::I, 0, 10.0, 1.0).is_err());
        assert!(singular_integral(IntegralKind::J, 3, 0.0, 0.0).is_err());
    }
}
