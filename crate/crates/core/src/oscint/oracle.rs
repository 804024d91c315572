//! Region integrals over the unit cube, by two independent routes: nested
//! Cartesian quadrature and a radial integral over spherical shells.

use std::f64::consts::FRAC_PI_4;

use super::region::{IntegralKind, Region};
use crate::numeric::quad::{integrate, integrate_with_breaks, Tolerance};
use crate::Result;

/// `∫_{[0,1]³} (shift + log|v|²)^ℓ 1{lo ≤ |v|² ≤ hi} dv` by nested adaptive
/// quadrature in `v₁, v₂, v₃`.
pub fn geometric_oracle(kind: IntegralKind, ell: usize, x: f64, big_x: f64) -> Result<f64> {
    Ok(cartesian(&Region::new(kind, ell, x, big_x)?))
}

/// The same quantity as [`geometric_oracle`], integrating the weight against
/// the solid angle of each sphere `|v| = r` inside the cube.
pub fn geometric_oracle_shell(kind: IntegralKind, ell: usize, x: f64, big_x: f64) -> Result<f64> {
    Ok(shells(&Region::new(kind, ell, x, big_x)?))
}

fn sorted_breaks(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.retain(|p| *p > lo && *p < hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

// ∫ over t ∈ [0,1] with lo ≤ s + t² ≤ hi of the weight at s + t².
fn innermost(reg: &Region, s: f64) -> f64 {
    let t0 = (reg.lo - s).max(0.0).sqrt();
    let top = (reg.hi - s).min(1.0);
    if top <= 0.0 {
        return 0.0;
    }
    let t1 = top.sqrt();
    if t1 <= t0 {
        return 0.0;
    }
    match reg.ell {
        0 => t1 - t0,
        1 if s > 0.0 => {
            let rs = s.sqrt();
            let anti = |t: f64| t * (s + t * t).ln() - 2.0 * t + 2.0 * rs * (t / rs).atan();
            anti(t1) - anti(t0) + reg.shift * (t1 - t0)
        }
        _ => integrate(|t: f64| reg.weight(s + t * t), t0, t1, Tolerance::abs(1e-14).with_rel(1e-14)).value,
    }
}

fn cartesian(reg: &Region) -> f64 {
    let levels = [reg.lo, reg.hi];
    let middle = |v1: f64| {
        let s1 = v1 * v1;
        let mut pts = Vec::new();
        for c in levels {
            for shift in [0.0, 1.0] {
                let d = c - shift - s1;
                if d > 0.0 {
                    pts.push(d.sqrt());
                }
            }
        }
        let breaks = sorted_breaks(pts, 0.0, 1.0);
        integrate_with_breaks(|v2: f64| innermost(reg, s1 + v2 * v2), &breaks, Tolerance::abs(1e-13).with_rel(1e-13)).value
    };
    let mut pts = Vec::new();
    for c in levels {
        for shift in [0.0, 1.0, 2.0] {
            let d = c - shift;
            if d > 0.0 {
                pts.push(d.sqrt());
            }
        }
    }
    let breaks = sorted_breaks(pts, 0.0, 1.0);
    integrate_with_breaks(middle, &breaks, Tolerance::abs(1e-12).with_rel(1e-12)).value
}

/// Solid angle of `{ω in the positive octant : rω ∈ [0,1]³}`.
pub(crate) fn octant_solid_angle(r: f64) -> f64 {
    if r <= 1.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let inv = 1.0 / r;
    // For azimuth φ ∈ [0, π/4] the binding side is cos φ; the polar angle runs
    // from arccos(1/r) up to arcsin(min(1, 1/(r cos φ))).
    let h = |phi: f64| {
        let m = (inv / phi.cos()).min(1.0);
        (inv - (1.0 - m * m).sqrt()).max(0.0)
    };
    let mut pts = vec![inv.acos()];
    if r * r > 2.0 {
        pts.push((1.0 / (r * r - 1.0).sqrt()).acos());
    }
    let breaks = sorted_breaks(pts, 0.0, FRAC_PI_4);
    2.0 * integrate_with_breaks(h, &breaks, Tolerance::abs(1e-15).with_rel(1e-14)).value
}

fn shells(reg: &Region) -> f64 {
    let r0 = reg.lo.sqrt();
    let r1 = reg.hi.min(3.0).sqrt();
    if r1 <= r0 {
        return 0.0;
    }
    let breaks = sorted_breaks(vec![1.0, 2f64.sqrt()], r0, r1);
    integrate_with_breaks(
        |r: f64| r * r * reg.weight(r * r) * octant_solid_angle(r),
        &breaks,
        Tolerance::abs(1e-13).with_rel(1e-13),
    )
    .value
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn both(kind: IntegralKind, ell: usize, x: f64, big_x: f64) -> (f64, f64) {
        (
            geometric_oracle(kind, ell, x, big_x).unwrap(),
            geometric_oracle_shell(kind, ell, x, big_x).unwrap(),
        )
    }

    #[test]
    fn volumes() {
        let (a, b) = both(IntegralKind::J, 0, 1.0, 2.0);
        assert!((a - 1.0).abs() < 1e-10 && (b - 1.0).abs() < 1e-10, "{a} {b}");
        let (a, b) = both(IntegralKind::K, 0, 1.0, 2.0);
        assert!((a - PI / 6.0).abs() < 1e-10 && (b - PI / 6.0).abs() < 1e-10);
        // shell between radii 1/√2 and 1
        let want = PI / 6.0 * (1.0 - 2f64.powf(-1.5));
        let (a, b) = both(IntegralKind::I, 0, 1000.0, 1000.0);
        assert!((a - want).abs() < 1e-10 && (b - want).abs() < 1e-10);
        assert!((want - 0.338_479).abs() < 1e-6);
    }

    #[test]
    fn octant_ball_log_moments() {
        // (π/2)∫₀¹ r² (2 log r)^ℓ dr
        for (ell, want) in [(1, -PI / 9.0), (2, 4.0 * PI / 27.0)] {
            let (a, b) = both(IntegralKind::K, ell, 1.0, 2.0);
            assert!((a - want).abs() < 1e-10 && (b - want).abs() < 1e-10, "ell={ell}: {a} {b} {want}");
        }
    }

    #[test]
    fn two_routes_agree_and_freeze() {
        let (j1, j1s) = both(IntegralKind::J, 1, 1.0, 2.0);
        let (j2, j2s) = both(IntegralKind::J, 2, 1.0, 2.0);
        assert!((j1 - j1s).abs() < 1e-9 && (j2 - j2s).abs() < 1e-9, "{j1} {j1s} {j2} {j2s}");
        assert!((j1 - J1_FROZEN).abs() < 1e-9, "{j1}");
        assert!((j2 - J2_FROZEN).abs() < 1e-9, "{j2}");
        for ell in 0..=2 {
            let (a, b) = both(IntegralKind::I, ell, 500.0, 1200.0);
            assert!((a - b).abs() < 1e-9, "I ell={ell}: {a} {b}");
        }
    }

    const J1_FROZEN: f64 = -0.187_704_523_394_039_6;
    const J2_FROZEN: f64 = 0.543_738_875_000_072;

    #[test]
    fn dyadic_shells_exhaust_the_cube() {
        let x = 1e12;
        let total: f64 = (1..=40)
            .map(|j| geometric_oracle(IntegralKind::I, 0, x, 3.0 * x / 2f64.powi(j - 1)).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-4, "{total}");
    }

    #[test]
    fn solid_angle_vanishes_at_the_far_corner() {
        assert!(octant_solid_angle(3f64.sqrt()).abs() < 1e-12);
        assert!((octant_solid_angle(0.5) - PI / 2.0).abs() < 1e-15);
    }
}
