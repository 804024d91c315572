use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::kernel::{KernelSummary, MellinConfig, PhiPm};
use super::window::{mellin_moments, TestWindow};
use crate::arith::{divisors, gcd, mod_inverse, sieve_divisor_tables, sigma00};
use crate::expsum::kloosterman;
use crate::numeric::{e, ComplexSum};
use crate::special::p_ell;
use crate::{Error, Result};

/// Scaling of the three polynomial main terms.
///
/// `Printed` uses the coefficients `1/2, 1/2, 1/4` on `φ̃(1), φ̃′(1), φ̃″(1)`.
/// `Residue` doubles them to `1, 1, 1/2`, which is the residue of
/// `ζ(s)³ φ̃(s)` at `s = 1` when `q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MainTermNormalization {
    Printed,
    #[default]
    Residue,
}

impl MainTermNormalization {
    pub fn factor(self) -> f64 {
        match self {
            MainTermNormalization::Printed => 1.0,
            MainTermNormalization::Residue => 2.0,
        }
    }
}

impl std::str::FromStr for MainTermNormalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(MainTermNormalization::Printed),
            "residue" => Ok(MainTermNormalization::Residue),
            _ => Err(Error::Usage(format!("unknown normalization {s:?} (expected printed or residue)"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VoronoiReport {
    pub q: u64,
    pub a: i64,
    pub window: TestWindow,
    pub dual_cutoff: u64,
    pub normalization: MainTermNormalization,
    pub lhs: Complex64,
    /// Main terms with `φ̃(1)`, `φ̃′(1)`, `φ̃″(1)` under the chosen normalization.
    pub main_terms: [Complex64; 3],
    pub dual: Complex64,
    pub rhs: Complex64,
    /// `|LHS − RHS| / |LHS|`.
    pub residual: f64,
    pub residual_printed: f64,
    pub residual_residue: f64,
    pub kernels: [KernelSummary; 2],
}

/// Truncation `⌈8 q³ M³ / X⌉` for the dual sum.
pub fn default_dual_cutoff(q: u64, w: &TestWindow) -> u64 {
    let q = q as f64;
    ((8.0 * q.powi(3) * w.sharpness.powi(3) / w.scale).ceil() as u64).max(1)
}

pub fn voronoi_check(q: u64, a: i64, w: &TestWindow, dual_cutoff: u64) -> Result<VoronoiReport> {
    voronoi_check_with(q, a, w, dual_cutoff, MainTermNormalization::default(), &MellinConfig::default())
}

/// Both sides of the `τ₃` Voronoi formula for `φ(n) = w(n)` twisted by `e(an/q)`.
pub fn voronoi_check_with(
    q: u64,
    a: i64,
    w: &TestWindow,
    dual_cutoff: u64,
    normalization: MainTermNormalization,
    cfg: &MellinConfig,
) -> Result<VoronoiReport> {
    if q == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    if gcd(a.unsigned_abs(), q) != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    if dual_cutoff == 0 {
        return Err(Error::Precondition("dual cutoff must be positive".into()));
    }
    let a_bar = mod_inverse(a, q)? as i64;
    let lhs = twisted_lhs(q, a, w)?;

    let [m0, m1, m2] = mellin_moments(w, 0.0);
    let qf = q as f64;
    let mut poly = [0.0; 3];
    for n in divisors(q) {
        let ram = kloosterman(0, a_bar, q / n).re;
        let tau = divisors(n).len() as f64;
        let base = n as f64 * tau * ram / (qf * qf);
        poly[0] += base * p_ell(2, n, q)?;
        poly[1] += base * p_ell(1, n, q)?;
        poly[2] += base;
    }
    let printed = [m0 * (0.5 * poly[0]), m1 * (0.5 * poly[1]), m2 * (0.25 * poly[2])];

    let pm = PhiPm::new(w, 0.0, dual_cutoff as f64 / qf, cfg)?;
    let dual = dual_sum(q, a_bar, dual_cutoff, &pm);

    let main_printed: Complex64 = printed.iter().sum();
    let residual_of = |f: f64| (lhs - (main_printed * f + dual)).norm() / lhs.norm();
    let factor = normalization.factor();
    let main_terms = printed.map(|t| t * factor);
    let rhs = main_printed * factor + dual;
    Ok(VoronoiReport {
        q,
        a,
        window: *w,
        dual_cutoff,
        normalization,
        lhs,
        main_terms,
        dual,
        rhs,
        residual: residual_of(factor),
        residual_printed: residual_of(MainTermNormalization::Printed.factor()),
        residual_residue: residual_of(MainTermNormalization::Residue.factor()),
        kernels: pm.summaries(),
    })
}

fn twisted_lhs(q: u64, a: i64, w: &TestWindow) -> Result<Complex64> {
    let top = w.scale.floor() as u64;
    let tables = sieve_divisor_tables(top.max(1))?;
    let lo = (w.scale / 2.0).ceil() as u64;
    let a = a.rem_euclid(q as i64) as u64;
    let mut acc = ComplexSum::new();
    for n in lo.max(1)..=top {
        let phi = w.eval(n as f64);
        if phi != 0.0 {
            acc += e(((a * (n % q)) % q) as f64 / q as f64) * (tables.tau3(n) as f64 * phi);
        }
    }
    Ok(acc.value())
}

// Σ_{n₁|n} Σ_{n₂|n/n₁} σ₀,₀(n/(n₁n₂), m)
fn sigma_weight(n: u64, m: u64) -> f64 {
    let mut total = 0;
    for n1 in divisors(n) {
        for n2 in divisors(n / n1) {
            total += sigma00(n / (n1 * n2), m);
        }
    }
    total as f64
}

fn dual_sum(q: u64, a_bar: i64, cutoff: u64, pm: &PhiPm) -> Complex64 {
    let qf = q as f64;
    let mut terms = Vec::new();
    for n in divisors(q) {
        let c = q / n;
        let per_m: Vec<Complex64> = (1..=cutoff)
            .into_par_iter()
            .map(|m| {
                let y = (m * n * n) as f64 / qf.powi(3);
                let [plus, minus] = pm.eval(y);
                let weight = sigma_weight(n, m) / (n * m) as f64;
                let s_plus = kloosterman(m as i64, a_bar, c);
                let s_minus = kloosterman(-(m as i64), a_bar, c);
                (s_plus * plus + s_minus * minus) * weight
            })
            .collect();
        terms.extend(per_m);
    }
    let total: ComplexSum = terms.into_iter().collect();
    total.value() * (qf / (2.0 * PI.powf(1.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voronoi::make_bump;

    #[test]
    fn lhs_for_trivial_twist_is_real() {
        let w = make_bump(500.0, 8.0).unwrap();
        let lhs = twisted_lhs(1, 1, &w).unwrap();
        assert!(lhs.im == 0.0 && lhs.re > 0.0);
    }

    #[test]
    fn sigma_weight_at_unit_modulus() {
        // σ₀,₀(1, m) = τ₃(m)
        for m in 1..30u64 {
            let tau3: usize = divisors(m).into_iter().map(|d| divisors(m / d).len()).sum();
            assert_eq!(sigma_weight(1, m), tau3 as f64);
        }
    }

    #[test]
    fn default_cutoff_formula() {
        let w = make_bump(2000.0, 8.0).unwrap();
        assert_eq!(default_dual_cutoff(1, &w), 3);
        assert_eq!(default_dual_cutoff(4, &w), 132);
    }

    #[test]
    fn rejects_non_coprime_twist() {
        let w = make_bump(500.0, 8.0).unwrap();
        assert!(matches!(voronoi_check(4, 2, &w, 4), Err(Error::NotInvertible { .. })));
    }
}
