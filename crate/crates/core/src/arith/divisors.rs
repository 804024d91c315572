use super::modular::gcd;

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Number of pairs `(d₁, d₂)` with `d₁ | l`, `d₂ | l/d₁` and `gcd(d₂, k) = 1`.
pub fn sigma00(k: u64, l: u64) -> u64 {
    divisors(l)
        .into_iter()
        .map(|d1| divisors(l / d1).into_iter().filter(|&d2| gcd(d2, k) == 1).count() as u64)
        .sum()
}

/// `(Σ_{d|n} log d, Σ_{d|n} (log d)²)` in natural logarithms.
pub fn divisor_log_sums(n: u64) -> (f64, f64) {
    divisors(n).into_iter().fold((0.0, 0.0), |(s1, s2), d| {
        let l = (d as f64).ln();
        (s1 + l, s2 + l * l)
    })
}
