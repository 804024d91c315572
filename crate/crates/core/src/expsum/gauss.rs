use num_complex::Complex64;

use crate::arith::{gcd, jacobi_symbol, mod_inverse, mod_mul};
use crate::numeric::{ComplexSum, UnitRoots};
use crate::{Error, Result};

#[inline]
pub(crate) fn reduce(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

/// `ε_q`: `1` for `q ≡ 1 (mod 4)`, `i` for `q ≡ 3 (mod 4)`.
pub fn epsilon(q: u64) -> Complex64 {
    if q % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, 1.0)
    }
}

/// Quadratic Gauss sum `G(a, b; q) = Σ_{d mod q} e((a d² + b d)/q)` by direct summation.
pub fn gauss_sum(a: i64, b: i64, q: u64) -> Complex64 {
    gauss_sum_at(&UnitRoots::new(q), a, b)
}

pub fn gauss_sum_at(roots: &UnitRoots, a: i64, b: i64) -> Complex64 {
    let q = roots.modulus();
    let (a, b) = (reduce(a, q), reduce(b, q));
    let mut acc = ComplexSum::new();
    for d in 0..q {
        let k = (mod_mul(mod_mul(a, d, q), d, q) + mod_mul(b, d, q)) % q;
        acc += roots.at_reduced(k);
    }
    acc.value()
}

/// `G(a, b; q)` from the completed-square and quadratic-character closed forms.
/// Requires `q` odd and `gcd(a, q) = 1`.
pub fn gauss_sum_closed(a: i64, b: i64, q: u64) -> Result<Complex64> {
    if q % 2 == 0 {
        return Err(Error::EvenModulus(q));
    }
    if gcd(a.unsigned_abs(), q) != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    if q == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let a_inv = mod_inverse(a, q)?;
    let four_inv = mod_inverse(4, q)?;
    let bb = mod_mul(reduce(b, q), reduce(b, q), q);
    let shift = mod_mul(mod_mul(four_inv, a_inv, q), bb, q);
    let twist = UnitRoots::new(q).at(-(shift as i64));
    let chi = jacobi_symbol(a, q)? as f64;
    Ok(twist * epsilon(q) * (chi * (q as f64).sqrt()))
}
