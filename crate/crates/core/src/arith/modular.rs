use crate::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mod_mul(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Inverse of `a` modulo `q`, returned in `[1, q]` (so `q = 1` yields `1`).
pub fn mod_inverse(a: i64, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Precondition("modulus must be positive".into()));
    }
    if q == 1 {
        return Ok(1);
    }
    let a_red = a.rem_euclid(q as i64) as i128;
    let (mut r0, mut r1) = (q as i128, a_red);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    Ok(s0.rem_euclid(q as i128) as u64)
}

/// Jacobi symbol `(a/q)` for odd positive `q`.
pub fn jacobi_symbol(a: i64, q: u64) -> Result<i8> {
    if q % 2 == 0 {
        return Err(Error::EvenModulus(q));
    }
    let mut a = a.rem_euclid(q as i64) as u64;
    let mut n = q;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn euler_criterion(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        let mut r = 1u64;
        let mut base = a;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = mod_mul(r, base, p);
            }
            base = mod_mul(base, base, p);
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 9).unwrap(), 1);
        assert_eq!(mod_inverse(1, 1).unwrap(), 1);
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(-3, 7).unwrap(), 2);
        assert!(matches!(mod_inverse(2, 4), Err(Error::NotInvertible { a: 2, q: 4 })));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(2, 3).unwrap(), -1);
        assert_eq!(jacobi_symbol(4, 15).unwrap(), 1);
        assert_eq!(jacobi_symbol(5, 15).unwrap(), 0);
        assert_eq!(jacobi_symbol(7, 1).unwrap(), 1);
        assert!(matches!(jacobi_symbol(3, 8), Err(Error::EvenModulus(8))));
    }

    #[test]
    fn jacobi_matches_euler_criterion_for_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 97, 101] {
            for a in -150..150 {
                assert_eq!(jacobi_symbol(a, p).unwrap(), euler_criterion(a, p), "a={a} p={p}");
            }
        }
    }

    proptest! {
        #[test]
        fn inverse_is_an_inverse(a in -10_000i64..10_000, q in 1u64..5_000) {
            match mod_inverse(a, q) {
                Ok(inv) => {
                    prop_assert!((1..=q).contains(&inv));
                    prop_assert_eq!(mod_mul(a.rem_euclid(q as i64) as u64, inv, q), 1 % q);
                }
                Err(_) => prop_assert!(gcd(a.unsigned_abs(), q) > 1),
            }
        }

        #[test]
        fn jacobi_is_multiplicative_in_the_modulus(a in -500i64..500, m in 0u64..200, n in 0u64..200) {
            let (m, n) = (2 * m + 1, 2 * n + 1);
            let lhs = jacobi_symbol(a, m * n).unwrap();
            prop_assert_eq!(lhs, jacobi_symbol(a, m).unwrap() * jacobi_symbol(a, n).unwrap());
        }
    }
}
