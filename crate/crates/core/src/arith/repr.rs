use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum R3Mode {
    /// All `(n₁, n₂, n₃) ∈ ℤ³`.
    AllIntegers,
    /// Coordinates restricted to `[1, bound]`.
    PositiveBox { bound: f64 },
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Number of representations of `n` as `n₁² + n₂² + n₃²` under `mode`.
pub fn r3_counts(n: u64, mode: R3Mode) -> u64 {
    let root = isqrt(n);
    match mode {
        R3Mode::AllIntegers => {
            let mut count = 0;
            for a in 0..=root {
                let ra = n - a * a;
                for b in 0..=isqrt(ra) {
                    let rb = ra - b * b;
                    let c = isqrt(rb);
                    if c * c == rb {
                        let signs = |v: u64| if v == 0 { 1 } else { 2 };
                        count += signs(a) * signs(b) * signs(c);
                    }
                }
            }
            count
        }
        R3Mode::PositiveBox { bound } => {
            let cap = if bound >= 1.0 { bound.floor() as u64 } else { 0 };
            let hi = root.min(cap);
            let mut count = 0;
            for a in 1..=hi {
                let ra = n - a * a;
                for b in 1..=isqrt(ra).min(hi) {
                    let rb = ra - b * b;
                    let c = isqrt(rb);
                    if c >= 1 && c <= hi && c * c == rb {
                        count += 1;
                    }
                }
            }
            count
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre_excluded(mut n: u64) -> bool {
        while n % 4 == 0 {
            n /= 4;
        }
        n % 8 == 7
    }

    #[test]
    fn examples() {
        assert_eq!(r3_counts(3, R3Mode::PositiveBox { bound: 2.0 }), 1);
        assert_eq!(r3_counts(1, R3Mode::AllIntegers), 6);
        assert_eq!(r3_counts(7, R3Mode::AllIntegers), 0);
        assert_eq!(r3_counts(3, R3Mode::AllIntegers), 8);
    }

    #[test]
    fn three_square_criterion() {
        for n in 1..=10_000u64 {
            assert_eq!(r3_counts(n, R3Mode::AllIntegers) == 0, legendre_excluded(n), "n={n}");
        }
    }

    #[test]
    fn positive_box_matches_triple_loop() {
        let bound = 12.5f64;
        let b = bound as u64;
        let mut direct = vec![0u64; (3 * b * b + 1) as usize];
        for x in 1..=b {
            for y in 1..=b {
                for z in 1..=b {
                    direct[(x * x + y * y + z * z) as usize] += 1;
                }
            }
        }
        for (n, &want) in direct.iter().enumerate().skip(1) {
            assert_eq!(r3_counts(n as u64, R3Mode::PositiveBox { bound }), want, "n={n}");
        }
    }

    #[test]
    fn isqrt_exact_near_squares() {
        for r in [0u64, 1, 2, 1000, 3_037_000_499] {
            assert_eq!(isqrt(r * r), r);
            if r > 0 {
                assert_eq!(isqrt(r * r - 1), r - 1);
            }
        }
    }
}
