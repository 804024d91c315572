use num_complex::Complex64;

use super::gauss::reduce;
use crate::arith::{gcd, mod_inverse, mod_mul};
use crate::numeric::{ComplexSum, UnitRoots};

/// Kloosterman sum `S(a, b; c) = Σ_{x mod c, (x,c)=1} e((a x + b x̄)/c)`.
pub fn kloosterman(a: i64, b: i64, c: u64) -> Complex64 {
    kloosterman_at(&UnitRoots::new(c), a, b)
}

pub fn kloosterman_at(roots: &UnitRoots, a: i64, b: i64) -> Complex64 {
    let c = roots.modulus();
    if c == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let (a, b) = (reduce(a, c), reduce(b, c));
    let mut acc = ComplexSum::new();
    for x in 1..c {
        if gcd(x, c) != 1 {
            continue;
        }
        if b == 0 {
            acc += roots.at_reduced(mod_mul(a, x, c));
            continue;
        }
        let xi = mod_inverse(x as i64, c).expect("unit");
        acc += roots.at_reduced((mod_mul(a, x, c) + mod_mul(b, xi, c)) % c);
    }
    acc.value()
}

/// Right side of the Weil bound, `τ(c)·gcd(a,b,c)^{1/2}·c^{1/2}`.
pub fn weil_bound(a: i64, b: i64, c: u64) -> f64 {
    let g = gcd(gcd(a.unsigned_abs(), b.unsigned_abs()), c);
    let tau = crate::arith::divisors(c).len() as f64;
    tau * (g as f64).sqrt() * (c as f64).sqrt()
}
