use serde::Serialize;

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Splitting `q = q1·q2·q3`, `q3 = q3_sf·q3_ff` relative to a divisor `n` of `q`.
///
/// `q1` collects the prime powers of `q` that divide `n` exactly, `q2` the
/// remaining primes of `n` (necessarily to exponent at least 2), and `q3` the
/// primes coprime to `n`. Inside `q3`, `q3_sf` is the product of odd primes
/// occurring to the first power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriFactorization {
    pub q: u64,
    pub n: u64,
    pub q1: u64,
    pub q2: u64,
    pub q3: u64,
    pub q3_sf: u64,
    pub q3_ff: u64,
}

impl TriFactorization {
    /// `q1·q2`, the part of `q` supported on the primes of `n`.
    pub fn q_prime(&self) -> u64 {
        self.q1 * self.q2
    }
}

pub fn factor_for_charsum(q: u64, n: u64) -> crate::Result<TriFactorization> {
    if q == 0 || n == 0 || q % n != 0 {
        return Err(crate::Error::Precondition(format!("{n} must divide {q}")));
    }
    let mut f = TriFactorization {
        q,
        n,
        q1: 1,
        q2: 1,
        q3: 1,
        q3_sf: 1,
        q3_ff: 1,
    };
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if n % p == 0 {
            if n % pe == 0 {
                f.q1 *= pe;
            } else {
                f.q2 *= pe;
            }
        } else {
            f.q3 *= pe;
            if p != 2 && e == 1 {
                f.q3_sf *= p;
            } else {
                f.q3_ff *= pe;
            }
        }
    }
    Ok(f)
}
