use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::numeric::quad::{integrate_with_breaks, Tolerance};
use crate::numeric::e;
use crate::special::EULER_GAMMA;
use crate::{Error, Result};

/// Split point below which `(log u)^ℓ e(−βu)` is integrated by series.
pub const SINGULAR_SPLIT: f64 = 1e-6;
/// `ω·u` above which an endpoint at `u` is handled by its asymptotic expansion.
const ENDPOINT_ASYMPTOTIC: f64 = 40.0;

fn check(ell: usize, lo: f64, hi: f64) -> Result<()> {
    if ell > 2 {
        return Err(Error::Precondition(format!("log power {ell} is not 0, 1 or 2")));
    }
    if !(0.0 <= lo && lo < hi && hi.is_finite()) {
        return Err(Error::Precondition(format!("window needs 0 ≤ lo < hi, got [{lo}, {hi}]")));
    }
    Ok(())
}

/// `∫_lo^hi (log u)^ℓ e(−βu) du` for `ℓ ≤ 2`.
pub fn window_transform(beta: f64, ell: usize, lo: f64, hi: f64) -> Result<Complex64> {
    window_shifted(beta, ell, lo, hi, 0.0)
}

/// `∫_lo^hi (s + log u)^ℓ e(−βu) du`.
pub fn window_shifted(beta: f64, ell: usize, lo: f64, hi: f64, shift: f64) -> Result<Complex64> {
    check(ell, lo, hi)?;
    let v = if beta >= 0.0 {
        shifted_nonnegative(beta, ell, lo, hi, shift)
    } else {
        shifted_nonnegative(-beta, ell, lo, hi, shift).conj()
    };
    Ok(v)
}

fn shifted_nonnegative(beta: f64, ell: usize, lo: f64, hi: f64, shift: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    for j in (0..=ell).rev() {
        // binom = C(ℓ, j)
        acc += binom * shift.powi((ell - j) as i32) * log_power(beta, j, lo, hi);
        binom = binom * j as f64 / (ell - j + 1) as f64;
    }
    acc
}

fn log_power(beta: f64, ell: usize, lo: f64, hi: f64) -> Complex64 {
    if ell == 0 {
        return plain(beta, lo, hi);
    }
    let omega = TAU * beta;
    if lo == 0.0 && omega * hi >= ENDPOINT_ASYMPTOTIC {
        return half_line(omega, ell) - endpoint_tail(omega, ell, hi);
    }
    if lo > 0.0 && omega * lo >= ENDPOINT_ASYMPTOTIC {
        return endpoint_tail(omega, ell, lo) - endpoint_tail(omega, ell, hi);
    }
    by_quadrature(beta, ell, lo, hi)
}

/// `∫_lo^hi e(−βu) du` in closed form, stable as `β → 0`.
fn plain(beta: f64, lo: f64, hi: f64) -> Complex64 {
    let len = hi - lo;
    let t = TAU * beta * len;
    // (1 − e^{−it}) / (it)
    let ratio = if t.abs() < 1e-3 {
        Complex64::new(1.0 - t * t / 6.0, -t / 2.0 + t * t * t / 24.0)
    } else {
        (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -t)) / Complex64::new(0.0, t)
    };
    e(-beta * lo) * ratio * len
}

/// `∫₀^∞ (log u)^ℓ e^{−iωu} du = Q_ℓ(L)/(iω)` with `L = log ω + iπ/2`, from
/// the ℓ-th `s`-derivative of `Γ(s)(iω)^{−s}` at `s = 1`.
fn half_line(omega: f64, ell: usize) -> Complex64 {
    let l = Complex64::new(omega.ln(), PI / 2.0);
    let g = l + EULER_GAMMA;
    let q = match ell {
        0 => Complex64::new(1.0, 0.0),
        1 => -g,
        _ => g * g + PI * PI / 6.0,
    };
    q / Complex64::new(0.0, omega)
}

/// `∫_a^∞ (log u)^ℓ e^{−iωu} du = e^{−iωa} Σ_k g^{(k)}(a)/(iω)^{k+1}`, summed
/// to its smallest term.
fn endpoint_tail(omega: f64, ell: usize, a: f64) -> Complex64 {
    let la = a.ln();
    let iw = Complex64::new(0.0, omega);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale = iw.inv();
    let mut prev = f64::INFINITY;
    // factorial-like part (−1)^{k−1}(k−1)!/a^k, and harmonic numbers H_{k−1}
    let mut fact = 1.0 / a;
    let mut harmonic = 0.0;
    for k in 0..80 {
        let deriv = match (ell, k) {
            (_, 0) => la.powi(ell as i32),
            (1, _) => fact,
            (_, _) => 2.0 * fact * (la - harmonic),
        };
        let term = scale * deriv;
        let size = term.norm();
        if size > prev {
            break;
        }
        sum += term;
        if size > 0.0 {
            // g^{(k)}(a) can vanish at a = 1; only nonzero terms steer truncation
            prev = size;
            if size < 1e-18 * sum.norm() {
                break;
            }
        }
        if k >= 1 {
            harmonic += 1.0 / k as f64;
            fact *= -(k as f64) / a;
        }
        scale /= iw;
    }
    Complex64::from_polar(1.0, -omega * a) * sum
}

/// `∫₀^δ u^k (log u)^ℓ du`.
fn moment_near_zero(k: usize, ell: usize, delta: f64) -> f64 {
    let m = k as f64 + 1.0;
    let ld = delta.ln();
    let base = delta.powf(m);
    match ell {
        0 => base / m,
        1 => base * (ld / m - 1.0 / (m * m)),
        _ => base * (ld * ld / m - 2.0 * ld / (m * m) + 2.0 / (m * m * m)),
    }
}

fn by_quadrature(beta: f64, ell: usize, lo: f64, hi: f64) -> Complex64 {
    let omega = TAU * beta;
    let mut total = Complex64::new(0.0, 0.0);
    let mut start = lo;
    if lo == 0.0 {
        let delta = SINGULAR_SPLIT.min(hi / 2.0);
        // Σ_k (−iω)^k/k! ∫₀^δ u^k (log u)^ℓ du
        let mut coeff = Complex64::new(1.0, 0.0);
        for k in 0..60 {
            let term = coeff * moment_near_zero(k, ell, delta);
            total += term;
            if k > 2 && term.norm() < 1e-20 {
                break;
            }
            coeff *= Complex64::new(0.0, -omega) / (k + 1) as f64;
        }
        start = delta;
    }
    let mut breaks = vec![start];
    let mut b = start * 100.0;
    while b < hi {
        breaks.push(b);
        b *= 100.0;
    }
    // Extra breaks so that each panel spans at most about one oscillation.
    let periods = (beta * (hi - start)).ceil() as usize;
    let mut all: Vec<f64> = Vec::new();
    breaks.push(hi);
    for w in breaks.windows(2) {
        let pieces = ((periods as f64 * (w[1] - w[0]) / (hi - start)).ceil() as usize).max(1);
        for i in 0..pieces {
            all.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
        }
    }
    all.push(hi);
    let p = ell as i32;
    let r = integrate_with_breaks(
        |u: f64| e(-beta * u) * u.ln().powi(p),
        &all,
        Tolerance::abs(1e-13).with_rel(1e-14).with_max_intervals(50_000),
    );
    total + r.value
}

/// An upper envelope for `|window_shifted(β, ℓ, lo, hi, s)|` used to size the
/// outer truncation.
pub fn window_envelope(beta: f64, ell: usize, lo: f64, hi: f64, shift: f64) -> f64 {
    let g = |u: f64| (shift + u.ln()).abs().powi(ell as i32);
    let trivial = if lo == 0.0 {
        // ∫₀^hi |s + log u|^ℓ du ≤ hi·(|s| + |log hi| + 2)^ℓ
        hi * (shift.abs() + hi.ln().abs() + 2.0).powi(ell as i32)
    } else {
        (hi - lo) * g(lo).max(g(hi)).max(1.0)
    };
    let omega = TAU * beta.abs();
    if omega <= 1.0 {
        return trivial;
    }
    let mut env = 0.0;
    if lo == 0.0 {
        let l = (omega.ln().powi(2) + PI * PI / 4.0).sqrt() + EULER_GAMMA + shift.abs();
        env += (l.powi(ell as i32) + PI * PI / 6.0) / omega;
    } else {
        env += (g(lo) + 1.0 / (omega * lo)) / omega;
    }
    env += (g(hi) + 1.0 / (omega * hi)) / omega;
    (1.5 * env).min(trivial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quad::integrate;

    fn reference(beta: f64, ell: usize, lo: f64, hi: f64) -> Complex64 {
        // substitute u = t² near 0 to remove the log singularity
        let p = ell as i32;
        let r = integrate(
            |t: f64| e(-beta * t * t) * (t * t).ln().powi(p) * 2.0 * t,
            lo.sqrt(),
            hi.sqrt(),
            Tolerance::abs(1e-13).with_max_intervals(200_000),
        );
        r.value
    }

    #[test]
    fn examples() {
        assert!((window_transform(0.0, 0, 0.0, 3.0).unwrap() - 3.0).norm() < 1e-15);
        assert!((window_transform(0.0, 1, 0.0, 1.0).unwrap() + 1.0).norm() < 1e-12);
        assert!(window_transform(1.0, 0, 0.0, 3.0).unwrap().norm() < 1e-14);
        assert!(window_transform(0.0, 3, 0.0, 1.0).is_err());
        assert!(window_transform(0.0, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn plain_closed_form_against_quadrature() {
        for i in 0..50 {
            let beta = -100.0 + 200.0 * (i as f64 + 0.37) / 50.0;
            let c = window_transform(beta, 0, 0.5, 2.75).unwrap();
            let q = integrate(|u| e(-beta * u), 0.5, 2.75, Tolerance::abs(1e-14).with_max_intervals(10_000)).value;
            assert!((c - q).norm() < 1e-9, "beta={beta}");
        }
    }

    #[test]
    fn log_powers_against_substituted_quadrature() {
        for &(lo, hi) in &[(0.0, 3.0), (0.0, 1.0), (0.25, 0.5), (1.5, 3.0)] {
            for &beta in &[0.0, 0.3, -2.0, 5.0, 7.5, 25.0, -60.0, 300.0] {
                for ell in 1..=2 {
                    let w = window_transform(beta, ell, lo, hi).unwrap();
                    let r = reference(beta, ell, lo, hi);
                    assert!((w - r).norm() < 1e-9, "beta={beta} ell={ell} [{lo},{hi}]: {w} vs {r}");
                }
            }
        }
    }

    #[test]
    fn asymptotic_and_quadrature_paths_agree_at_the_seam() {
        for ell in 1..=2 {
            for (lo, hi) in [(0.0, 3.0), (0.5, 1.0)] {
                let a = if lo == 0.0 { hi } else { lo };
                let beta = ENDPOINT_ASYMPTOTIC / (TAU * a);
                let q = by_quadrature(beta * 1.0001, ell, lo, hi);
                let s = log_power(beta * 1.0001, ell, lo, hi);
                assert!((q - s).norm() < 1e-10, "ell={ell}: {q} vs {s}");
            }
        }
    }

    #[test]
    fn shift_expands_binomially() {
        let (s, beta) = (2.3, 1.7);
        let direct = integrate(
            |u: f64| e(-beta * u) * (s + u.ln()).powi(2),
            0.5,
            2.0,
            Tolerance::abs(1e-14),
        )
        .value;
        assert!((window_shifted(beta, 2, 0.5, 2.0, s).unwrap() - direct).norm() < 1e-11);
    }

    #[test]
    fn envelope_dominates() {
        for &(lo, hi, s) in &[(0.0, 3.0, 0.0), (0.0, 1.0, 0.0), (0.5, 1.0, 4.0)] {
            for &beta in &[0.1, 1.0, 10.0, 100.0, 1000.0, -50.0] {
                for ell in 0..=2 {
                    let w = window_shifted(beta, ell, lo, hi, s).unwrap().norm();
                    assert!(w <= window_envelope(beta, ell, lo, hi, s), "beta={beta} ell={ell}");
                }
            }
        }
    }
}
