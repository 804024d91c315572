use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::charsum::{charsum_C_direct, charsum_C_factored, charsum_size_bound, CharSumParams};
use super::gauss::{gauss_sum_at, gauss_sum_closed};
use super::kloosterman::{kloosterman_at, weil_bound};
use super::twisted::{twisted_T_closed, twisted_regime, TwistedRegime, TwistedTables};
use crate::arith::{divisors, factorize, gcd};
use crate::numeric::UnitRoots;
use crate::Result;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurveyConfig {
    pub prime_max: u64,
    pub samples_per_prime: usize,
    pub seed: u64,
    /// Primes up to this bound are swept over every parameter tuple.
    pub exhaustive_prime_max: u64,
    /// Kloosterman moduli up to this bound are swept exhaustively.
    pub weil_modulus_max: u64,
}

impl SurveyConfig {
    pub fn new(prime_max: u64, samples_per_prime: usize, seed: u64) -> Self {
        SurveyConfig {
            prime_max,
            samples_per_prime,
            seed,
            exhaustive_prime_max: 13,
            weil_modulus_max: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct TwistedTuple {
    pub b: [i64; 3],
    pub r1: i64,
    pub r2m: i64,
    pub v: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeSurvey {
    pub p: u64,
    pub exhaustive: bool,
    pub tuples: u64,
    /// `max |T| / p^{5/2}` over all tuples.
    pub max_ratio: f64,
    pub argmax: TwistedTuple,
    /// Same maximum restricted to the generic regime.
    pub max_ratio_generic: f64,
    /// Largest deviation of a degenerate closed form from the definition.
    pub closed_form_max_error: f64,
    pub closed_form_checks: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeilSurvey {
    pub modulus_max: u64,
    /// `max |S(a,b;c)| / (τ(c) √gcd(a,b,c) √c)` over all `a, b mod c`.
    pub max_ratio: f64,
    pub argmax: (i64, i64, u64),
    pub max_ratio_prime_moduli: f64,
    pub max_imaginary: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSurvey {
    pub config: SurveyConfig,
    pub primes: Vec<PrimeSurvey>,
    pub weil: WeilSurvey,
}

impl BoundSurvey {
    pub fn max_twisted_ratio(&self) -> f64 {
        self.primes.iter().map(|p| p.max_ratio).fold(0.0, f64::max)
    }

    pub fn max_closed_form_error(&self) -> f64 {
        self.primes.iter().map(|p| p.closed_form_max_error).fold(0.0, f64::max)
    }
}

fn odd_primes_up_to(n: u64) -> Vec<u64> {
    (3..=n).filter(|&k| factorize(k).first() == Some(&(k, 1))).collect()
}

#[derive(Clone, Copy)]
struct Acc {
    max_ratio: f64,
    argmax: Option<TwistedTuple>,
    max_generic: f64,
    closed_err: f64,
    closed_checks: u64,
    tuples: u64,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            max_ratio: 0.0,
            argmax: None,
            max_generic: 0.0,
            closed_err: 0.0,
            closed_checks: 0,
            tuples: 0,
        }
    }

    // Ties keep the left operand, so the reduction order fixes the argmax.
    fn merge(self, o: Acc) -> Acc {
        let (max_ratio, argmax) = if o.max_ratio > self.max_ratio {
            (o.max_ratio, o.argmax)
        } else {
            (self.max_ratio, self.argmax)
        };
        Acc {
            max_ratio,
            argmax,
            max_generic: self.max_generic.max(o.max_generic),
            closed_err: self.closed_err.max(o.closed_err),
            closed_checks: self.closed_checks + o.closed_checks,
            tuples: self.tuples + o.tuples,
        }
    }
}

fn measure(tables: &TwistedTables, t: TwistedTuple) -> Acc {
    let p = tables.modulus();
    let value = tables.evaluate(t.b, t.r1, t.r2m, t.v);
    let ratio = value.norm() / (p as f64).powf(2.5);
    let mut acc = Acc {
        max_ratio: ratio,
        argmax: Some(t),
        tuples: 1,
        ..Acc::empty()
    };
    if twisted_regime(t.b, t.r2m, t.v, p) == TwistedRegime::Generic {
        acc.max_generic = ratio;
    }
    if let Ok(Some(closed)) = twisted_T_closed(t.b, t.r1, t.r2m, t.v, p) {
        acc.closed_err = (closed - value).norm();
        acc.closed_checks = 1;
    }
    acc
}

fn survey_prime(p: u64, cfg: &SurveyConfig) -> PrimeSurvey {
    let tables = TwistedTables::new(p);
    let pi = p as i64;
    let exhaustive = p <= cfg.exhaustive_prime_max;
    let acc = if exhaustive {
        // r₁ runs over units; b, v and r₂m over all residues.
        (0..pi.pow(4))
            .into_par_iter()
            .map(|idx| {
                let (b0, b1, b2, v) = (idx % pi, idx / pi % pi, idx / (pi * pi) % pi, idx / (pi * pi * pi));
                let mut acc = Acc::empty();
                for r1 in 1..pi {
                    for r2m in 0..pi {
                        acc = acc.merge(measure(&tables, TwistedTuple { b: [b0, b1, b2], r1, r2m, v }));
                    }
                }
                acc
            })
            .reduce(Acc::empty, Acc::merge)
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let tuples: Vec<TwistedTuple> = (0..cfg.samples_per_prime)
            .map(|_| TwistedTuple {
                b: [rng.gen_range(0..pi), rng.gen_range(0..pi), rng.gen_range(0..pi)],
                r1: rng.gen_range(1..pi),
                r2m: rng.gen_range(0..pi),
                v: rng.gen_range(0..pi),
            })
            .collect();
        tuples
            .par_iter()
            .map(|&t| measure(&tables, t))
            .reduce(Acc::empty, Acc::merge)
    };
    PrimeSurvey {
        p,
        exhaustive,
        tuples: acc.tuples,
        max_ratio: acc.max_ratio,
        argmax: acc.argmax.expect("at least one tuple"),
        max_ratio_generic: acc.max_generic,
        closed_form_max_error: acc.closed_err,
        closed_form_checks: acc.closed_checks,
    }
}

pub fn weil_survey(modulus_max: u64) -> WeilSurvey {
    let per_c: Vec<(f64, (i64, i64, u64), f64, f64)> = (1..=modulus_max)
        .into_par_iter()
        .map(|c| {
            let roots = UnitRoots::new(c);
            let prime = factorize(c).first() == Some(&(c, 1));
            let mut best = (0.0, (0, 0, c));
            let mut im: f64 = 0.0;
            for a in 0..c as i64 {
                for b in 0..c as i64 {
                    let s = kloosterman_at(&roots, a, b);
                    im = im.max(s.im.abs());
                    let r = s.norm() / weil_bound(a, b, c);
                    if r > best.0 {
                        best = (r, (a, b, c));
                    }
                }
            }
            (best.0, best.1, if prime { best.0 } else { 0.0 }, im)
        })
        .collect();
    let mut out = WeilSurvey {
        modulus_max,
        max_ratio: 0.0,
        argmax: (0, 0, 1),
        max_ratio_prime_moduli: 0.0,
        max_imaginary: 0.0,
    };
    for (r, arg, rp, im) in per_c {
        if r > out.max_ratio {
            out.max_ratio = r;
            out.argmax = arg;
        }
        out.max_ratio_prime_moduli = out.max_ratio_prime_moduli.max(rp);
        out.max_imaginary = out.max_imaginary.max(im);
    }
    out
}

/// Largest `|T|/p^{5/2}` over exhaustive small-prime sweeps and seeded samples
/// for larger primes, together with the Weil-bound ratio for Kloosterman sums.
pub fn bound_survey(cfg: SurveyConfig) -> Result<BoundSurvey> {
    if cfg.prime_max < 3 {
        return Err(crate::Error::Precondition("prime_max must be at least 3".into()));
    }
    let primes = odd_primes_up_to(cfg.prime_max).into_iter().map(|p| survey_prime(p, &cfg)).collect();
    Ok(BoundSurvey {
        config: cfg,
        primes,
        weil: weil_survey(cfg.weil_modulus_max),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussSurvey {
    pub modulus_max: u64,
    pub cases: u64,
    /// Largest componentwise `|direct − closed|`.
    pub max_error: f64,
    pub argmax: (i64, i64, u64),
}

/// Closed form against direct summation of `G(a, b; q)` for every odd
/// `q ≤ modulus_max`, every `a` coprime to `q` and every `|b| ≤ q`.
pub fn gauss_survey(modulus_max: u64) -> Result<GaussSurvey> {
    let rows: Vec<Result<(u64, f64, (i64, i64, u64))>> = (1..=modulus_max)
        .step_by(2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|q| {
            let roots = UnitRoots::new(q);
            let mut cases = 0;
            let mut best = (0.0, (0, 0, q));
            for a in 1..=q as i64 {
                if gcd(a as u64, q) != 1 {
                    continue;
                }
                for b in -(q as i64)..=q as i64 {
                    let d = gauss_sum_at(&roots, a, b);
                    let c = gauss_sum_closed(a, b, q)?;
                    let err = (d.re - c.re).abs().max((d.im - c.im).abs());
                    if err > best.0 {
                        best = (err, (a, b, q));
                    }
                    cases += 1;
                }
            }
            Ok((cases, best.0, best.1))
        })
        .collect();
    let mut out = GaussSurvey {
        modulus_max,
        cases: 0,
        max_error: 0.0,
        argmax: (0, 0, 1),
    };
    for row in rows {
        let (cases, err, arg) = row?;
        out.cases += cases;
        if err > out.max_error {
            out.max_error = err;
            out.argmax = arg;
        }
    }
    Ok(out)
}

/// Deterministic character-sum parameter samples with `q ≤ q_max`.
pub fn charsum_samples(count: usize, q_max: u64, seed: u64) -> Vec<CharSumParams> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=q_max);
            let divs = divisors(q);
            let n = divs[rng.gen_range(0..divs.len())];
            let span = q as i64;
            CharSumParams {
                b: [rng.gen_range(-span..=span), rng.gen_range(-span..=span), rng.gen_range(-span..=span)],
                n,
                m: rng.gen_range(-span..=span),
                v: rng.gen_range(-span..=span),
                q,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationCheck {
    pub samples: usize,
    /// `max |direct − factored| / q³`.
    pub max_scaled_error: f64,
    pub worst: Option<CharSumParams>,
    /// `max |C| / ((q1 q2 q3_ff)³ q3_sf^{5/2} / √n)`.
    pub max_size_ratio: f64,
}

pub fn factorization_check(samples: &[CharSumParams]) -> Result<FactorizationCheck> {
    let rows: Vec<Result<(f64, f64)>> = samples
        .par_iter()
        .map(|p| {
            let d = charsum_C_direct(p)?;
            let f = charsum_C_factored(p)?;
            Ok(((d - f).norm() / (p.q as f64).powi(3), d.norm() / charsum_size_bound(p)?))
        })
        .collect();
    let mut out = FactorizationCheck {
        samples: samples.len(),
        max_scaled_error: 0.0,
        worst: None,
        max_size_ratio: 0.0,
    };
    for (p, row) in samples.iter().zip(rows) {
        let (err, size) = row?;
        if err > out.max_scaled_error || out.worst.is_none() {
            out.max_scaled_error = out.max_scaled_error.max(err);
            out.worst = Some(*p);
        }
        out.max_size_ratio = out.max_size_ratio.max(size);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_prime_exhaustive() {
        let s = bound_survey(SurveyConfig::new(3, 10, 0)).unwrap();
        assert_eq!(s.primes.len(), 1);
        let p3 = &s.primes[0];
        assert!(p3.exhaustive);
        assert_eq!(p3.tuples, 3u64.pow(4) * 2 * 3);
        assert!(p3.max_ratio.is_finite() && p3.max_ratio <= 3.0);
        assert!(p3.closed_form_max_error <= 1e-6);
        assert!(s.weil.max_ratio_prime_moduli <= 1.0 + 1e-9);
    }

    #[test]
    fn generic_regime_at_five_is_small() {
        let s = bound_survey(SurveyConfig::new(5, 10, 0)).unwrap();
        assert!(s.primes[1].max_ratio_generic <= 2.0, "{}", s.primes[1].max_ratio_generic);
    }

    #[test]
    fn gauss_survey_small_moduli() {
        let s = gauss_survey(15).unwrap();
        // Σ over odd q ≤ 15 of φ(q)(2q + 1)
        assert_eq!(s.cases, 1 * 3 + 2 * 7 + 4 * 11 + 6 * 15 + 6 * 19 + 10 * 23 + 12 * 27 + 8 * 31);
        assert!(s.max_error < 1e-12);
    }

    #[test]
    fn sampling_is_seeded() {
        let a = charsum_samples(20, 60, 7);
        let b = charsum_samples(20, 60, 7);
        let c = charsum_samples(20, 60, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|p| p.q % p.n == 0 && p.q <= 60));
    }

    #[test]
    fn rejects_tiny_prime_bound() {
        assert!(bound_survey(SurveyConfig::new(2, 1, 0)).is_err());
    }
}
