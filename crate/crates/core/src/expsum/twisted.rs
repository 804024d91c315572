//! The twisted prime-modulus sum
//! `T(b, r₁, r₂m, v; p) = Σ*_z e(−v z̄/p) Π_i G(z, b_i; p) · S(−r₁ z̄, r₂m; p)`.

use num_complex::Complex64;
use serde::Serialize;

use super::gauss::{epsilon, gauss_sum_at, reduce};
use super::kloosterman::kloosterman_at;
use crate::arith::{factorize, jacobi_symbol, mod_inverse, mod_mul};
use crate::numeric::{ComplexSum, UnitRoots};
use crate::{Error, Result};

fn require_odd_prime(p: u64) -> Result<()> {
    let f = factorize(p);
    if p < 3 || p % 2 == 0 || f.len() != 1 || f[0].1 != 1 {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `N = 4v + b₁² + b₂² + b₃²` reduced mod `p`. The sum depends on `b` and
/// `v` only through this value.
pub fn twisted_discriminant(b: [i64; 3], v: i64, p: u64) -> u64 {
    let mut n = mod_mul(4, reduce(v, p), p);
    for bi in b {
        let r = reduce(bi, p);
        n = (n + mod_mul(r, r, p)) % p;
    }
    n
}

/// Which closed form, if any, applies to a parameter tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwistedRegime {
    /// `p | r₂m`: the Kloosterman factor collapses to `−1`.
    KloostermanDegenerate,
    /// `p ∤ r₂m`, `p | N`: the sum factors into two quadratic Gauss sums.
    DiscriminantDegenerate,
    Generic,
}

pub fn twisted_regime(b: [i64; 3], r2m: i64, v: i64, p: u64) -> TwistedRegime {
    if reduce(r2m, p) == 0 {
        TwistedRegime::KloostermanDegenerate
    } else if twisted_discriminant(b, v, p) == 0 {
        TwistedRegime::DiscriminantDegenerate
    } else {
        TwistedRegime::Generic
    }
}

/// `T` in its reduced single-sum form
/// `ε_p³ p^{3/2} Σ*_z (z/p) e(−4̄ N z̄ / p) S(−r₁ z̄, r₂m; p)`.
#[allow(non_snake_case)]
pub fn twisted_T(b: [i64; 3], r1: i64, r2m: i64, v: i64, p: u64) -> Result<Complex64> {
    require_odd_prime(p)?;
    let roots = UnitRoots::new(p);
    let four_inv = mod_inverse(4, p)?;
    let c = mod_mul(four_inv, twisted_discriminant(b, v, p), p);
    let r1 = reduce(r1, p);
    let mut acc = ComplexSum::new();
    for z in 1..p {
        let zi = mod_inverse(z as i64, p)?;
        let chi = jacobi_symbol(z as i64, p)? as f64;
        let phase = roots.at(-(mod_mul(c, zi, p) as i64));
        let kl = kloosterman_at(&roots, -(mod_mul(r1, zi, p) as i64), r2m);
        acc += phase * kl * chi;
    }
    let eps = epsilon(p);
    Ok(eps * eps * eps * (p as f64).powf(1.5) * acc.value())
}

/// `T` straight from its definition with Gauss and Kloosterman sums.
#[allow(non_snake_case)]
pub fn twisted_T_definition(b: [i64; 3], r1: i64, r2m: i64, v: i64, p: u64) -> Result<Complex64> {
    require_odd_prime(p)?;
    Ok(TwistedTables::new(p).evaluate(b, r1, r2m, v))
}

/// Closed forms in the two degenerate regimes (requires `p ∤ r₁`):
/// `−p²·(−N/p)` when `p | r₂m`, and `ε_p⁵ p^{5/2} (−r₁ r₂m / p)` when
/// `p ∤ r₂m` and `p | N`. `None` in the generic regime.
#[allow(non_snake_case)]
pub fn twisted_T_closed(b: [i64; 3], r1: i64, r2m: i64, v: i64, p: u64) -> Result<Option<Complex64>> {
    require_odd_prime(p)?;
    if reduce(r1, p) == 0 {
        return Ok(None);
    }
    let pf = p as f64;
    Ok(match twisted_regime(b, r2m, v, p) {
        TwistedRegime::KloostermanDegenerate => {
            let n = twisted_discriminant(b, v, p) as i64;
            let chi = jacobi_symbol(-n, p)? as f64;
            Some(Complex64::new(-pf * pf * chi, 0.0))
        }
        TwistedRegime::DiscriminantDegenerate => {
            let chi = jacobi_symbol(-(reduce(r1, p) as i64) * reduce(r2m, p) as i64 % p as i64, p)? as f64;
            Some(epsilon(p).powu(5) * pf.powf(2.5) * chi)
        }
        TwistedRegime::Generic => None,
    })
}

/// Precomputed `G(z, b; p)` and `S(x, y; p)` tables so that each `T`
/// evaluation by definition costs `O(p)`.
pub struct TwistedTables {
    p: u64,
    roots: UnitRoots,
    inverse: Vec<u64>,
    gauss: Vec<Complex64>,
    kloosterman: Vec<Complex64>,
}

impl TwistedTables {
    pub fn new(p: u64) -> Self {
        let roots = UnitRoots::new(p);
        let n = p as usize;
        let mut inverse = vec![0u64; n];
        for z in 1..p {
            inverse[z as usize] = mod_inverse(z as i64, p).expect("prime modulus");
        }
        let mut gauss = vec![Complex64::new(0.0, 0.0); n * n];
        let mut kloosterman = vec![Complex64::new(0.0, 0.0); n * n];
        for x in 0..p {
            for y in 0..p {
                gauss[x as usize * n + y as usize] = gauss_sum_at(&roots, x as i64, y as i64);
                kloosterman[x as usize * n + y as usize] = kloosterman_at(&roots, x as i64, y as i64);
            }
        }
        TwistedTables {
            p,
            roots,
            inverse,
            gauss,
            kloosterman,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn evaluate(&self, b: [i64; 3], r1: i64, r2m: i64, v: i64) -> Complex64 {
        let p = self.p;
        let n = p as usize;
        let b = b.map(|bi| reduce(bi, p) as usize);
        let (r1, r2m, v) = (reduce(r1, p), reduce(r2m, p) as usize, reduce(v, p));
        let mut acc = ComplexSum::new();
        for z in 1..p {
            let zi = self.inverse[z as usize];
            let row = z as usize * n;
            let g = self.gauss[row + b[0]] * self.gauss[row + b[1]] * self.gauss[row + b[2]];
            let kl_a = (p - mod_mul(r1, zi, p)) % p;
            let kl = self.kloosterman[kl_a as usize * n + r2m];
            acc += self.roots.at(-(mod_mul(v, zi, p) as i64)) * g * kl;
        }
        acc.value()
    }
}
