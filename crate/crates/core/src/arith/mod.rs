//! Integer kernel: divisor sieves, representation counts, modular arithmetic
//! and modulus factorization.

mod divisors;
mod factor;
mod modular;
mod repr;
mod sieve;

pub use divisors::{divisor_log_sums, divisors, sigma00};
pub use factor::{factor_for_charsum, factorize, TriFactorization};
pub use modular::{gcd, jacobi_symbol, mod_inverse, mod_mul};
pub use repr::{r3_counts, R3Mode};
pub use sieve::{sieve_divisor_tables, sieve_divisor_tables_with_budget, DivisorTables, DEFAULT_ENTRY_BUDGET};
