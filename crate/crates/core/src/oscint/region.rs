use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which singular integral: the full cube, the unit octant, or a dyadic shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegralKind {
    J,
    K,
    I,
}

impl std::str::FromStr for IntegralKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(IntegralKind::J),
            "K" | "k" => Ok(IntegralKind::K),
            "I" | "i" => Ok(IntegralKind::I),
            _ => Err(Error::Usage(format!("unknown integral kind {s:?} (expected J, K or I)"))),
        }
    }
}

/// The set `lo ≤ |v|² ≤ hi` inside `[0,1]³`, weighted by `(shift + log|v|²)^ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
    pub shift: f64,
    pub ell: usize,
}

impl Region {
    /// `J`: `|v|² ≤ 3`; `K`: `|v|² ≤ 1`; `I`: `X/2 ≤ x|v|² ≤ X` with weight
    /// `(log x|v|²)^ℓ`. `x` and `big_x` are ignored for `J` and `K`.
    pub fn new(kind: IntegralKind, ell: usize, x: f64, big_x: f64) -> Result<Region> {
        if ell > 2 {
            return Err(Error::Precondition(format!("log power {ell} is not 0, 1 or 2")));
        }
        Ok(match kind {
            IntegralKind::J => Region {
                lo: 0.0,
                hi: 3.0,
                shift: 0.0,
                ell,
            },
            IntegralKind::K => Region {
                lo: 0.0,
                hi: 1.0,
                shift: 0.0,
                ell,
            },
            IntegralKind::I => {
                if !(1.0 < big_x && big_x <= 3.0 * x && x.is_finite()) {
                    return Err(Error::Precondition(format!("shell integral needs 1 < X ≤ 3x, got x={x}, X={big_x}")));
                }
                Region {
                    lo: big_x / (2.0 * x),
                    hi: big_x / x,
                    shift: x.ln(),
                    ell,
                }
            }
        })
    }

    pub fn weight(&self, u: f64) -> f64 {
        (self.shift + u.ln()).powi(self.ell as i32)
    }
}
