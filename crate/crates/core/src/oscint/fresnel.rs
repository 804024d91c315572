use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// Below this `|β|` the power series is used.
const SERIES_MAX_BETA: f64 = 1.125;
/// Above this `|β|` the asymptotic expansion is used; in between, a
/// continued fraction.
pub const ASYMPTOTIC_MIN_BETA: f64 = 30.0;

/// `C(z) + i S(z) = ∫₀^z e^{iπt²/2} dt` for `z ≥ 0`.
pub fn fresnel_cs(z: f64) -> Complex64 {
    debug_assert!(z >= 0.0);
    let beta = 0.25 * z * z;
    if beta <= SERIES_MAX_BETA {
        fresnel_series(z)
    } else if beta <= ASYMPTOTIC_MIN_BETA {
        fresnel_continued_fraction(z)
    } else {
        fresnel_asymptotic(z)
    }
}

fn fresnel_series(z: f64) -> Complex64 {
    // Σ (iπ/2)^n z^{2n+1} / (n! (2n+1))
    let w = Complex64::new(0.0, FRAC_PI_2 * z * z);
    let mut power = Complex64::new(z, 0.0);
    let mut sum = power;
    for n in 1..60 {
        power = power * w / n as f64;
        let term = power / (2 * n + 1) as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

// Modified Lentz evaluation of the complementary error function continued
// fraction along the diagonal.
fn fresnel_continued_fraction(z: f64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let pix2 = PI * z * z;
    let mut b = Complex64::new(1.0, -pix2);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    for _ in 0..500 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(z, -z);
    let (s, co) = (0.5 * pix2).sin_cos();
    Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - Complex64::new(co, s) * h)
}

fn fresnel_asymptotic(z: f64) -> Complex64 {
    // C = ½ + f sin(πz²/2) − g cos(πz²/2), S = ½ − f cos(πz²/2) − g sin(πz²/2)
    let x = PI * z * z;
    let x2 = x * x;
    let (mut f, mut g) = (0.0, 0.0);
    let (mut tf, mut tg) = (1.0, 1.0);
    for m in 0..200 {
        f += tf;
        g += tg;
        let m = m as f64;
        let nf = -tf * (4.0 * m + 1.0) * (4.0 * m + 3.0) / x2;
        let ng = -tg * (4.0 * m + 3.0) * (4.0 * m + 5.0) / x2;
        if nf.abs() > tf.abs() || nf.abs() < 1e-18 {
            break;
        }
        tf = nf;
        tg = ng;
    }
    let f = f / (PI * z);
    let g = g / (PI * PI * z * z * z);
    let (s, c) = (0.5 * x).sin_cos();
    Complex64::new(0.5 + f * s - g * c, 0.5 - f * c - g * s)
}

/// `∫₀¹ e(βv²) dv`.
pub fn fresnel_unit(beta: f64) -> Complex64 {
    if beta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = 2.0 * beta.abs().sqrt();
    let v = fresnel_cs(z) / z;
    if beta < 0.0 {
        v.conj()
    } else {
        v
    }
}

/// `Ψ₀(β) = ∫₀^{√x} e(βu²) du = √x · ∫₀¹ e(βx v²) dv`.
pub fn psi0(beta: f64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Precondition(format!("psi0 needs x > 0, got {x}")));
    }
    Ok(x.sqrt() * fresnel_unit(beta * x))
}

/// `|∫₀¹ e(βv²) dv| ≤ 1/(2√(2|β|)) + 1/(2π|β|)`, from one integration by
/// parts on the tail beyond 1.
pub fn fresnel_unit_envelope(beta: f64) -> f64 {
    let b = beta.abs();
    if b <= 1.0 {
        return 1.0;
    }
    (1.0 / (2.0 * (2.0 * b).sqrt()) + 1.0 / (2.0 * PI * b)).min(1.0)
}
