use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gauss::{gauss_sum_at, reduce};
use super::kloosterman::kloosterman_at;
use super::twisted::twisted_T;
use crate::arith::{factor_for_charsum, factorize, gcd, mod_inverse, mod_mul, TriFactorization};
use crate::numeric::{ComplexSum, UnitRoots};
use crate::{Error, Result};

/// Parameters of the cubic Gauss-sum character sum at modulus `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSumParams {
    pub b: [i64; 3],
    pub n: u64,
    pub m: i64,
    pub v: i64,
    pub q: u64,
}

impl CharSumParams {
    fn validate(&self) -> Result<()> {
        if self.q == 0 || self.n == 0 || self.q % self.n != 0 {
            return Err(Error::Precondition(format!("n = {} must divide q = {}", self.n, self.q)));
        }
        Ok(())
    }
}

/// `Σ*_{a mod r} e(−ā v / r) Π_i G(a, b_i; r) · S(−ā·twist, kl_b; kl_mod)`.
///
/// `kl_mod` must divide `r`.
fn twisted_cubic_sum(r: u64, b: &[i64; 3], v: i64, twist: u64, kl_b: i64, kl_mod: u64) -> Complex64 {
    debug_assert_eq!(r % kl_mod, 0);
    let roots = UnitRoots::new(r);
    let kl_roots = UnitRoots::new(kl_mod);
    let vr = reduce(v, r);
    let mut acc = ComplexSum::new();
    for a in 0..r {
        if gcd(a, r) != 1 {
            continue;
        }
        let a_inv = mod_inverse(a as i64, r).expect("unit");
        let phase = roots.at(-(mod_mul(a_inv, vr, r) as i64));
        let g: Complex64 = b.iter().map(|&bi| gauss_sum_at(&roots, a as i64, bi)).product();
        let kl_a = -(mod_mul(a_inv % kl_mod, twist % kl_mod, kl_mod) as i64);
        acc += phase * g * kloosterman_at(&kl_roots, kl_a, kl_b);
    }
    acc.value()
}

/// Direct evaluation `Σ*_{a mod q} e(−ā v/q) G(a,b₁;q)G(a,b₂;q)G(a,b₃;q) S(−ā, m; q/n)`.
pub fn charsum_C_direct(p: &CharSumParams) -> Result<Complex64> {
    p.validate()?;
    Ok(twisted_cubic_sum(p.q, &p.b, p.v, 1, p.m, p.q / p.n))
}

fn inv_mod(x: u64, q: u64) -> i64 {
    mod_inverse(x as i64, q).expect("coprime by construction") as i64
}

fn sq_mod(x: i64, q: u64) -> i64 {
    let r = reduce(x, q);
    mod_mul(r, r, q) as i64
}

/// Factors of the character sum along the modulus splitting.
#[derive(Debug, Clone, Serialize)]
pub struct FactoredCharSum {
    pub split: TriFactorization,
    /// Piece at `q1·q2` carrying the Kloosterman sum of modulus `q1·q2/n`.
    pub head: Complex64,
    /// One twisted prime sum per prime of the odd square-free part.
    pub prime_pieces: Vec<(u64, Complex64)>,
    /// Piece at the square-full remainder coprime to `n`.
    pub tail: Complex64,
}

impl FactoredCharSum {
    pub fn value(&self) -> Complex64 {
        self.prime_pieces.iter().fold(self.head * self.tail, |acc, (_, t)| acc * t)
    }
}

/// Evaluate the character sum as a product of independent sums over
/// `q' = q1·q2`, each prime of `q3_sf`, and `q3_ff`.
pub fn charsum_factors(p: &CharSumParams) -> Result<FactoredCharSum> {
    p.validate()?;
    let split = factor_for_charsum(p.q, p.n)?;
    let q_head = split.q1 * split.q2;
    let q_hat = q_head / p.n;
    let (sf, ff) = (split.q3_sf, split.q3_ff);
    let q3 = split.q3;

    let kl_b = mod_mul(reduce(p.m, q_hat), sq_mod(inv_mod(q3 % q_hat, q_hat), q_hat) as u64, q_hat);
    let head = twisted_cubic_sum(q_head, &p.b, p.v, q3 % q_hat, kl_b as i64, q_hat);

    // m·q̂⁻² reduced modulo each coprime piece of q3
    let m_twisted = |modulus: u64| -> u64 {
        let hat_inv = inv_mod(q_hat % modulus, modulus);
        mod_mul(reduce(p.m, modulus), sq_mod(hat_inv, modulus) as u64, modulus)
    };

    let tail = if ff == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        let kl_b = mod_mul(m_twisted(ff), sq_mod(inv_mod(sf % ff, ff), ff) as u64, ff);
        twisted_cubic_sum(ff, &p.b, p.v, mod_mul(sf % ff, q_head % ff, ff), kl_b as i64, ff)
    };

    let mut prime_pieces = Vec::new();
    for (prime, _) in factorize(sf) {
        let cof = sf / prime;
        let r1 = mod_mul(mod_mul(q_head % prime, ff % prime, prime), cof % prime, prime);
        let ff_inv = sq_mod(inv_mod(ff % prime, prime), prime) as u64;
        let cof_inv = sq_mod(inv_mod(cof % prime, prime), prime) as u64;
        let r2m = mod_mul(mod_mul(m_twisted(prime), ff_inv, prime), cof_inv, prime);
        let t = twisted_T(p.b, r1 as i64, r2m as i64, p.v, prime)?;
        prime_pieces.push((prime, t));
    }
    Ok(FactoredCharSum {
        split,
        head,
        prime_pieces,
        tail,
    })
}

pub fn charsum_C_factored(p: &CharSumParams) -> Result<Complex64> {
    Ok(charsum_factors(p)?.value())
}

/// Size bound `(q1·q2·q3_ff)³ · q3_sf^{5/2} / √n` without its constant.
pub fn charsum_size_bound(p: &CharSumParams) -> Result<f64> {
    let s = factor_for_charsum(p.q, p.n)?;
    let full = (s.q1 * s.q2 * s.q3_ff) as f64;
    Ok(full.powi(3) * (s.q3_sf as f64).powf(2.5) / (p.n as f64).sqrt())
}

/// The sum over the odd square-free part evaluated directly at its own
/// modulus, for checking the per-prime product.
pub fn squarefree_piece_direct(p: &CharSumParams) -> Result<Complex64> {
    p.validate()?;
    let s = factor_for_charsum(p.q, p.n)?;
    let q_head = s.q1 * s.q2;
    let q_hat = q_head / p.n;
    let sf = s.q3_sf;
    if sf == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let hat_inv = inv_mod(q_hat % sf, sf);
    let ff_inv = inv_mod(s.q3_ff % sf, sf);
    let kl_b = mod_mul(
        mod_mul(reduce(p.m, sf), sq_mod(hat_inv, sf) as u64, sf),
        sq_mod(ff_inv, sf) as u64,
        sf,
    );
    let twist = mod_mul(s.q3_ff % sf, q_head % sf, sf);
    Ok(twisted_cubic_sum(sf, &p.b, p.v, twist, kl_b as i64, sf))
}
