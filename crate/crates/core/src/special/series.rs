use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::constants::fundamental_constants;
use crate::arith::{divisor_log_sums, divisors, gcd, mod_inverse};
use crate::expsum::{gauss_sum_at, kloosterman_at};
use crate::numeric::{ComplexSum, UnitRoots};
use crate::{Error, Result};

/// Default truncation for headline singular-series values.
pub const DEFAULT_TRUNCATION: u64 = 256;

/// Correction polynomial `P_ℓ(n, q)` attached to the `ℓ`-th singular series.
pub fn p_ell(ell: usize, n: u64, q: u64) -> Result<f64> {
    let c = fundamental_constants();
    let (g, g1) = (c.gamma, c.gamma1);
    let ln = (n as f64).ln();
    let lq = (q as f64).ln();
    let tau = divisors(n).len() as f64;
    let (s1, s2) = divisor_log_sums(n);
    match ell {
        0 => Ok(1.0),
        1 => Ok(5.0 / 3.0 * ln - 3.0 * lq + 3.0 * g - s1 / (3.0 * tau)),
        2 => Ok(ln * ln - 5.0 * lq * ln + 4.5 * lq * lq + 3.0 * g * g - 3.0 * g1 + 7.0 * g * ln - 9.0 * g * lq
            + ((ln + lq - 5.0 * g) * s1 - 1.5 * s2) / tau),
        _ => Err(Error::Precondition(format!("polynomial order {ell} is not 0, 1 or 2"))),
    }
}

/// `q⁻⁵ Σ_{n|q} n τ(n) P_ℓ(n,q) Σ*_{a mod q} G(a,0;q)³ S(−ā,0;q/n)` for `ℓ = 0, 1, 2`.
pub fn singular_series_term(q: u64) -> [Complex64; 3] {
    let roots = UnitRoots::new(q);
    let units: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1).collect();
    let cubes: Vec<Complex64> = units.iter().map(|&a| gauss_sum_at(&roots, a as i64, 0).powu(3)).collect();
    let inverses: Vec<u64> = units
        .iter()
        .map(|&a| mod_inverse(a as i64, q).expect("unit"))
        .collect();
    let mut out = [ComplexSum::new(), ComplexSum::new(), ComplexSum::new()];
    for n in divisors(q) {
        let k = q / n;
        let kl_roots = UnitRoots::new(k);
        let mut inner = ComplexSum::new();
        for (cube, &ai) in cubes.iter().zip(&inverses) {
            let s = kloosterman_at(&kl_roots, -((ai % k) as i64), 0);
            inner += cube * s;
        }
        let weight = (n * divisors(n).len() as u64) as f64;
        let inner = inner.value() * weight;
        for (ell, acc) in out.iter_mut().enumerate() {
            *acc += inner * p_ell(ell, n, q).expect("order in range");
        }
    }
    let scale = (q as f64).powi(-5);
    out.map(|s| s.value() * scale)
}

/// Per-modulus terms of all three singular series up to a bound, reusable for
/// any smaller truncation.
#[derive(Debug, Clone)]
pub struct SingularSeriesTerms {
    terms: Vec<[Complex64; 3]>,
}

impl SingularSeriesTerms {
    pub fn compute(q_max: u64) -> Self {
        let terms = (1..=q_max).into_par_iter().map(singular_series_term).collect();
        SingularSeriesTerms { terms }
    }

    pub fn q_max(&self) -> u64 {
        self.terms.len() as u64
    }

    /// Complex partial sum over `q ≤ big_q`, accumulated in ascending `q`.
    pub fn partial(&self, ell: usize, big_q: u64) -> Complex64 {
        assert!(big_q <= self.q_max() && ell <= 2);
        self.terms[..big_q as usize].iter().map(|t| t[ell]).collect::<ComplexSum>().value()
    }

    /// `|Σ_{lo < q ≤ hi} term|`.
    pub fn block(&self, ell: usize, lo: u64, hi: u64) -> f64 {
        self.terms[lo as usize..hi as usize]
            .iter()
            .map(|t| t[ell])
            .collect::<ComplexSum>()
            .value()
            .norm()
    }

    pub fn estimate(&self, ell: usize, big_q: u64) -> Result<SingularSeriesEstimate> {
        if ell > 2 {
            return Err(Error::Precondition(format!("series index {ell} is not 0, 1 or 2")));
        }
        if big_q == 0 || big_q > self.q_max() {
            return Err(Error::Precondition(format!("truncation {big_q} outside 1..={}", self.q_max())));
        }
        let total = self.partial(ell, big_q);
        // Dyadic blocks (Q/2^{j+1}, Q/2^j] down to the first modulus.
        let mut blocks = Vec::new();
        let mut hi = big_q;
        while hi > 1 {
            let lo = hi / 2;
            blocks.push(DyadicBlock {
                lo,
                hi,
                magnitude: self.block(ell, lo, hi),
            });
            hi = lo;
        }
        blocks.reverse();
        let usable: Vec<(f64, f64)> = blocks
            .iter()
            .filter(|b| b.lo >= 8 && b.magnitude > 0.0)
            .map(|b| (b.lo as f64, b.magnitude))
            .collect();
        let fit = fit_log_slope(&usable).ok();
        Ok(SingularSeriesEstimate {
            ell,
            big_q,
            value: total.re,
            imaginary: total.im,
            block_magnitudes: blocks,
            fitted_tail_exponent: fit.map(|f| f.slope),
            fit_residual: fit.map(|f| f.residual),
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DyadicBlock {
    pub lo: u64,
    pub hi: u64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularSeriesEstimate {
    pub ell: usize,
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub value: f64,
    /// Imaginary part of the complex accumulation; zero up to rounding.
    pub imaginary: f64,
    pub block_magnitudes: Vec<DyadicBlock>,
    /// Log-log slope of the block magnitudes from modulus 8 upward.
    pub fitted_tail_exponent: Option<f64>,
    pub fit_residual: Option<f64>,
}

pub fn singular_series_partial(ell: usize, big_q: u64) -> Result<SingularSeriesEstimate> {
    SingularSeriesTerms::compute(big_q).estimate(ell, big_q)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LogSlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Result<LogSlopeFit> {
    if points.iter().all(|&(_, y)| y == 0.0) {
        return Err(Error::DegenerateFit("all block magnitudes vanish".into()));
    }
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0 && y.is_finite())
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateFit(format!("{} usable points", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("abscissae coincide".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(LogSlopeFit {
        slope,
        intercept,
        residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TailFit {
    pub ell: usize,
    pub q_list: Vec<u64>,
    /// `|C_ℓ(2Q) − C_ℓ(Q)|` for each `Q` in the list.
    pub blocks: Vec<f64>,
    pub exponent: f64,
    pub residual: f64,
}

/// Slope of `log|C_ℓ(2Q) − C_ℓ(Q)|` against `log Q`.
pub fn tail_decay_fit(ell: usize, q_list: &[u64]) -> Result<TailFit> {
    let top = q_list.iter().copied().max().unwrap_or(0) * 2;
    tail_decay_fit_with(&SingularSeriesTerms::compute(top), ell, q_list)
}

pub fn tail_decay_fit_with(terms: &SingularSeriesTerms, ell: usize, q_list: &[u64]) -> Result<TailFit> {
    if q_list.len() < 3 {
        return Err(Error::Precondition("tail fit needs at least three truncations".into()));
    }
    if q_list.windows(2).any(|w| w[1] <= w[0]) || q_list[0] == 0 {
        return Err(Error::Precondition("truncations must be positive and increasing".into()));
    }
    if ell > 2 || 2 * q_list[q_list.len() - 1] > terms.q_max() {
        return Err(Error::Precondition("terms do not reach twice the largest truncation".into()));
    }
    let blocks: Vec<f64> = q_list.iter().map(|&q| terms.block(ell, q, 2 * q)).collect();
    let pts: Vec<(f64, f64)> = q_list.iter().zip(&blocks).map(|(&q, &b)| (q as f64, b)).collect();
    let fit = fit_log_slope(&pts)?;
    Ok(TailFit {
        ell,
        q_list: q_list.to_vec(),
        blocks,
        exponent: fit.slope,
        residual: fit.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::gauss_sum;
    use crate::special::{EULER_GAMMA, STIELTJES_GAMMA1};

    fn mobius(n: u64) -> f64 {
        let f = crate::arith::factorize(n);
        if f.iter().any(|&(_, e)| e > 1) {
            0.0
        } else if f.len() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(p_ell(0, 17, 34).unwrap(), 1.0);
        assert!((p_ell(1, 1, 1).unwrap() - 3.0 * EULER_GAMMA).abs() < 1e-15);
        assert!((p_ell(1, 1, 1).unwrap() - 1.731_647_0).abs() < 1e-7);
        let p2 = p_ell(2, 1, 1).unwrap();
        assert!((p2 - (3.0 * EULER_GAMMA * EULER_GAMMA - 3.0 * STIELTJES_GAMMA1)).abs() < 1e-15);
        assert!((p2 - 1.217_981_3).abs() < 1e-7);
        assert!(p_ell(3, 1, 1).is_err());
    }

    #[test]
    fn polynomials_match_rederivation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let q: u64 = rng.gen_range(1..5000);
            let divs: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
            let n = divs[rng.gen_range(0..divs.len())];
            let nd: Vec<f64> = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).ln()).collect();
            let t = nd.len() as f64;
            let l1: f64 = nd.iter().sum();
            let l2: f64 = nd.iter().map(|x| x * x).sum();
            let (ln, lq, g, g1) = ((n as f64).ln(), (q as f64).ln(), EULER_GAMMA, STIELTJES_GAMMA1);
            let p1 = 5.0 * ln / 3.0 - 3.0 * lq + 3.0 * g - l1 / (3.0 * t);
            let p2 = ln.powi(2) - 5.0 * lq * ln + 9.0 * lq.powi(2) / 2.0 + 3.0 * g.powi(2) - 3.0 * g1 + 7.0 * g * ln
                - 9.0 * g * lq
                + (ln + lq - 5.0 * g) * l1 / t
                - 3.0 * l2 / (2.0 * t);
            assert!((p_ell(1, n, q).unwrap() - p1).abs() < 1e-10);
            assert!((p_ell(2, n, q).unwrap() - p2).abs() < 1e-9);
        }
    }

    #[test]
    fn small_truncations() {
        let t = SingularSeriesTerms::compute(2);
        assert!((t.partial(0, 1) - 1.0).norm() < 1e-15);
        assert!((t.partial(0, 2) - 1.0).norm() < 1e-12);
        let p2 = p_ell(2, 1, 1).unwrap();
        assert!((t.partial(2, 1) - p2).norm() < 1e-15);
    }

    #[test]
    fn terms_match_ramanujan_sum_closed_form() {
        // S(−ā,0;k) = μ(k) for units a, so the inner sum factors.
        for q in 1..=60u64 {
            let g3: Complex64 = (0..q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| gauss_sum(a as i64, 0, q).powu(3))
                .sum();
            let term = singular_series_term(q);
            for ell in 0..3 {
                let w: f64 = divisors(q)
                    .into_iter()
                    .map(|n| (n * divisors(n).len() as u64) as f64 * p_ell(ell, n, q).unwrap() * mobius(q / n))
                    .sum();
                let want = g3 * w / (q as f64).powi(5);
                assert!((term[ell] - want).norm() < 1e-12, "q={q} ell={ell}");
            }
        }
    }

    #[test]
    fn partial_sums_are_real() {
        let t = SingularSeriesTerms::compute(512);
        for ell in 0..3 {
            let e = t.estimate(ell, 512).unwrap();
            assert!(e.imaginary.abs() <= 1e-6);
            assert_eq!(e.block_magnitudes.len(), 9);
            assert!(e.block_magnitudes.iter().all(|b| b.magnitude.is_finite()));
        }
    }

    #[test]
    fn stabilizes_dyadically() {
        let t = SingularSeriesTerms::compute(512);
        for ell in 0..3 {
            let late = (t.partial(ell, 512) - t.partial(ell, 256)).norm();
            let early = (t.partial(ell, 128) - t.partial(ell, 64)).norm();
            assert!(late < early, "ell={ell}: {late} vs {early}");
        }
    }

    #[test]
    fn degenerate_fits_are_rejected() {
        assert!(matches!(
            fit_log_slope(&[(1.0, 0.0), (2.0, 0.0), (4.0, 0.0)]),
            Err(Error::DegenerateFit(_))
        ));
        let f = fit_log_slope(&[(1.0, 1.0), (4.0, 0.5), (16.0, 0.25)]).unwrap();
        assert!((f.slope + 0.5).abs() < 1e-12 && f.residual < 1e-12);
        assert!(tail_decay_fit(0, &[4, 8]).is_err());
    }
}
