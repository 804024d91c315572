use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{r3_counts, DivisorTables, R3Mode};
use crate::{Error, Result};

/// Which brute-force sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `Σ_{1 ≤ n₁,n₂,n₃ ≤ √x} τ₃(n₁²+n₂²+n₃²)`.
    Tau3Box,
    /// `Σ_{n ∈ ℤ³, 1 ≤ |n|² ≤ x} τ₃(|n|²)`, via `Σ_{n ≤ x} τ₃(n) r₃(n)`.
    Tau3Ball,
    /// `Σ_{1 ≤ n₁,n₂,n₃ ≤ √x} τ(n₁²+n₂²+n₃²)`.
    TauBox,
    /// `Σ_{n ∈ ℤ³, 1 ≤ |n|² ≤ x} τ₃(|n|²)` by a lattice loop.
    #[serde(rename = "identity-1.5-left")]
    IdentityLeft,
    /// `Σ_{n ≤ x} τ₃(n) r₃(n)` with each `r₃(n)` counted directly.
    #[serde(rename = "identity-1.5-right")]
    IdentityRight,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Tau3Box => "tau3-box",
            Variant::Tau3Ball => "tau3-ball",
            Variant::TauBox => "tau-box",
            Variant::IdentityLeft => "identity-1.5-left",
            Variant::IdentityRight => "identity-1.5-right",
        }
    }

    fn is_box(self) -> bool {
        matches!(self, Variant::Tau3Box | Variant::TauBox)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Variant::Tau3Box,
            Variant::Tau3Ball,
            Variant::TauBox,
            Variant::IdentityLeft,
            Variant::IdentityRight,
        ]
        .into_iter()
        .find(|v| v.name() == s)
        .ok_or_else(|| Error::Usage(format!("unknown variant {s:?}")))
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn floor_limit(x: f64) -> Result<u64> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::Precondition(format!("summation limit must be at least 1, got {x}")));
    }
    Ok(x.floor() as u64)
}

/// Largest table entry the sum for `variant` at `x` reads.
pub fn required_table_limit(variant: Variant, x: f64) -> Result<u64> {
    let n = floor_limit(x)?;
    Ok(if variant.is_box() { 3 * isqrt(n).pow(2) } else { n })
}

/// The left-hand side of `variant` at `x`, as an exact integer.
pub fn brute_lhs(variant: Variant, x: f64, tables: &DivisorTables) -> Result<u64> {
    let n = floor_limit(x)?;
    tables.require(required_table_limit(variant, x)?)?;
    Ok(match variant {
        Variant::Tau3Box => box_sum(isqrt(n), tables.tau3_slice()),
        Variant::TauBox => box_sum(isqrt(n), tables.tau_slice()),
        Variant::Tau3Ball => {
            let r3 = r3_table(n);
            (1..=n).map(|m| tables.tau3(m) as u64 * r3[m as usize]).sum()
        }
        Variant::IdentityLeft => lattice_ball_sum(n, tables.tau3_slice()),
        Variant::IdentityRight => (1..=n)
            .into_par_iter()
            .map(|m| tables.tau3(m) as u64 * r3_counts(m, R3Mode::AllIntegers))
            .sum(),
    })
}

fn box_sum(root: u64, f: &[u32]) -> u64 {
    (1..=root)
        .into_par_iter()
        .map(|a| {
            let mut acc = 0u64;
            for b in 1..=root {
                let ab = (a * a + b * b) as usize;
                acc += (1..=root as usize).map(|c| f[ab + c * c] as u64).sum::<u64>();
            }
            acc
        })
        .sum()
}

// Loop over a, b, c ≥ 0 and weight each point by its number of sign patterns.
fn lattice_ball_sum(n: u64, f: &[u32]) -> u64 {
    let signs = |v: u64| if v == 0 { 1 } else { 2 };
    (0..=isqrt(n))
        .into_par_iter()
        .map(|a| {
            let mut acc = 0u64;
            let ra = n - a * a;
            for b in 0..=isqrt(ra) {
                let rb = ra - b * b;
                for c in 0..=isqrt(rb) {
                    let m = a * a + b * b + c * c;
                    if m > 0 {
                        acc += signs(a) * signs(b) * signs(c) * f[m as usize] as u64;
                    }
                }
            }
            acc
        })
        .sum()
}

// r₃(m) for m ≤ n from r₂ and one more square.
fn r3_table(n: u64) -> Vec<u64> {
    let len = n as usize + 1;
    let mut r2 = vec![0u64; len];
    let root = isqrt(n);
    for a in 0..=root {
        for b in 0..=isqrt(n - a * a) {
            let w = if a == 0 { 1 } else { 2 } * if b == 0 { 1 } else { 2 };
            r2[(a * a + b * b) as usize] += w;
        }
    }
    (0..len)
        .into_par_iter()
        .map(|m| {
            let m = m as u64;
            (0..=isqrt(m)).map(|c| if c == 0 { 1 } else { 2 } * r2[(m - c * c) as usize]).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_divisor_tables;

    #[test]
    fn small_boxes_by_hand() {
        let t = sieve_divisor_tables(100).unwrap();
        assert_eq!(brute_lhs(Variant::Tau3Box, 1.0, &t).unwrap(), 3);
        assert_eq!(brute_lhs(Variant::Tau3Box, 4.0, &t).unwrap(), 66);
        // τ(3) + 3τ(6) + 3τ(9) + τ(12) = 2 + 12 + 9 + 6
        assert_eq!(brute_lhs(Variant::TauBox, 4.0, &t).unwrap(), 29);
    }

    #[test]
    fn identity_holds_exactly() {
        let t = sieve_divisor_tables(10_000).unwrap();
        for x in [1.0, 2.0, 10.0, 100.0, 1000.0, 10_000.0] {
            let left = brute_lhs(Variant::IdentityLeft, x, &t).unwrap();
            assert_eq!(left, brute_lhs(Variant::IdentityRight, x, &t).unwrap(), "x={x}");
            assert_eq!(left, brute_lhs(Variant::Tau3Ball, x, &t).unwrap(), "x={x}");
        }
    }

    #[test]
    fn r3_table_matches_direct_counts() {
        let table = r3_table(500);
        for m in 0..=500u64 {
            assert_eq!(table[m as usize], r3_counts(m, R3Mode::AllIntegers), "m={m}");
        }
    }

    #[test]
    fn tables_too_small() {
        let t = sieve_divisor_tables(100).unwrap();
        assert!(matches!(
            brute_lhs(Variant::Tau3Box, 100.0, &t),
            Err(Error::TablesTooSmall { have: 100, need: 300 })
        ));
        assert!(brute_lhs(Variant::Tau3Ball, 100.0, &t).is_ok());
        assert!(brute_lhs(Variant::Tau3Box, 0.5, &t).is_err());
    }

    #[test]
    fn larger_tables_do_not_change_the_sum() {
        let small = sieve_divisor_tables(3 * 400).unwrap();
        let big = sieve_divisor_tables(5000).unwrap();
        let mut prev = 0;
        for x in [10.0, 50.0, 120.0, 400.0] {
            let a = brute_lhs(Variant::Tau3Box, x, &small).unwrap();
            assert_eq!(a, brute_lhs(Variant::Tau3Box, x, &big).unwrap());
            assert!(a >= prev);
            prev = a;
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in [
            Variant::Tau3Box,
            Variant::Tau3Ball,
            Variant::TauBox,
            Variant::IdentityLeft,
            Variant::IdentityRight,
        ] {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{}\"", v.name()));
        }
    }
}
