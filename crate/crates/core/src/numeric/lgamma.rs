use num_complex::Complex64;

// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT_TARGET: f64 = 12.0;

/// Complex log-Gamma by the Stirling series after an upward shift.
///
/// The branch is the one obtained by continuing from the positive real axis
/// along the recurrence; differences of values are therefore only meaningful
/// modulo `2πi`, which is all the Gamma-ratio kernels need since they
/// exponentiate.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // Keep |z| away from the poles and in the Stirling region.
    while z.re < SHIFT_TARGET && z.norm() < 2.0 * SHIFT_TARGET {
        shift += z.ln();
        z += 1.0;
    }
    while z.re < 0.5 {
        shift += z.ln();
        z += 1.0;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut result = (z - 0.5) * z.ln() - z + half_ln_2pi;
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING {
        result += pow * c;
        pow *= inv2;
    }
    result - shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lg(re: f64, im: f64) -> Complex64 {
        ln_gamma(Complex64::new(re, im))
    }

    #[test]
    fn real_factorials() {
        for n in 1..20u32 {
            let f: f64 = (1..n).map(|k| k as f64).product();
            assert!((lg(n as f64, 0.0).re - f.ln()).abs() < 1e-12, "n={n}");
        }
        assert!((lg(0.5, 0.0).re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-13);
    }

    #[test]
    fn reflection_modulus_on_critical_line() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for t in [0.3, 2.0, 17.0, 150.0] {
            let lhs = 2.0 * lg(0.5, t).re;
            let rhs = std::f64::consts::PI.ln() - (std::f64::consts::PI * t).cosh().ln();
            assert!((lhs - rhs).abs() < 1e-10, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for (re, im) in [(-2.3, 0.7), (0.1, -5.0), (3.0, 40.0), (-7.5, 1.0)] {
            let z = Complex64::new(re, im);
            let lhs = (ln_gamma(z + 1.0) - ln_gamma(z) - z.ln()).exp();
            assert!((lhs - 1.0).norm() < 1e-12, "z={z}");
        }
    }
}
