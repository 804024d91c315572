use serde::{Deserialize, Serialize};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// First Stieltjes constant, `ζ(s) = 1/(s−1) + γ − γ₁(s−1) + …`.
pub const STIELTJES_GAMMA1: f64 = -0.072_815_845_483_676_72;
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
pub const ZETA5: f64 = 1.036_927_755_143_37;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalConstants {
    pub gamma: f64,
    pub gamma1: f64,
    pub zeta3: f64,
    pub zeta5: f64,
}

impl FundamentalConstants {
    /// Leading coefficient `4ζ(3) / (5ζ(5))` of the divisor-function analogue.
    pub fn tau_leading_constant(&self) -> f64 {
        4.0 * self.zeta3 / (5.0 * self.zeta5)
    }
}

pub fn fundamental_constants() -> FundamentalConstants {
    FundamentalConstants {
        gamma: EULER_GAMMA,
        gamma1: STIELTJES_GAMMA1,
        zeta3: ZETA3,
        zeta5: ZETA5,
    }
}
