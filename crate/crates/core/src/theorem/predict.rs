use serde::Serialize;

use super::brute::Variant;
use crate::oscint::{singular_integral_with, BetaQuadConfig, IntegralKind};
use crate::special::SingularSeriesTerms;
use crate::voronoi::MainTermNormalization;
use crate::{Error, Result};

/// Everything the prediction depends on besides `x`.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionConfig {
    pub variant: Variant,
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub normalization: MainTermNormalization,
    /// `𝒞₀, 𝒞₁, 𝒞₂` truncated at `Q`.
    pub series: [f64; 3],
    /// `𝒥_ℓ` (box) or `𝒦_ℓ` (ball) for `ℓ = 0, 1, 2`.
    pub integrals: [f64; 3],
    pub integral_err: [f64; 3],
    pub quadrature: BetaQuadConfig,
}

/// Main-term coefficients of `x^{3/2}(log x)^{2−j}`, `j = 0, 1, 2`.
#[derive(Debug, Clone, Serialize)]
pub struct MainTermModel {
    pub config: PredictionConfig,
    pub coefficients: [f64; 3],
}

/// Smallest accepted singular-series truncation.
pub const MIN_TRUNCATION: u64 = 64;

impl MainTermModel {
    pub fn new(
        variant: Variant,
        big_q: u64,
        quad: &BetaQuadConfig,
        normalization: MainTermNormalization,
    ) -> Result<MainTermModel> {
        let terms = SingularSeriesTerms::compute(big_q.max(MIN_TRUNCATION));
        Self::with_terms(variant, big_q, &terms, quad, normalization)
    }

    /// As [`MainTermModel::new`], reusing precomputed singular-series terms.
    pub fn with_terms(
        variant: Variant,
        big_q: u64,
        terms: &SingularSeriesTerms,
        quad: &BetaQuadConfig,
        normalization: MainTermNormalization,
    ) -> Result<MainTermModel> {
        if big_q < MIN_TRUNCATION {
            return Err(Error::Precondition(format!("truncation Q = {big_q} is below {MIN_TRUNCATION}")));
        }
        if big_q > terms.q_max() {
            return Err(Error::Precondition(format!(
                "truncation Q = {big_q} exceeds the {} precomputed terms",
                terms.q_max()
            )));
        }
        let kind = match variant {
            Variant::Tau3Box => IntegralKind::J,
            Variant::Tau3Ball => IntegralKind::K,
            _ => {
                return Err(Error::Precondition(format!("no main-term prediction for {variant}")));
            }
        };
        let series: [f64; 3] = std::array::from_fn(|l| terms.partial(l, big_q).re);
        let mut integrals = [0.0; 3];
        let mut integral_err = [0.0; 3];
        for l in 0..3 {
            let r = singular_integral_with(kind, l, 0.0, 0.0, quad)?;
            integrals[l] = r.value;
            integral_err[l] = r.err_estimate;
        }
        let [c0, c1, c2] = series;
        let [g0, g1, g2] = integrals;
        let printed = match variant {
            Variant::Tau3Box => [
                c0 * g0 / 4.0,
                0.5 * (c1 * g0 + c0 * g1),
                0.5 * (c2 * g0 + c1 * g1 + 0.5 * c0 * g2),
            ],
            _ => [
                2.0 * c0 * g0,
                4.0 * (c1 * g0 + c0 * g1),
                4.0 * (c2 * g0 + c1 * g1 + 0.5 * c0 * g2),
            ],
        };
        let f = normalization.factor();
        Ok(MainTermModel {
            config: PredictionConfig {
                variant,
                big_q,
                normalization,
                series,
                integrals,
                integral_err,
                quadrature: *quad,
            },
            coefficients: printed.map(|c| c * f),
        })
    }

    /// `(t1, t2, t3)` at `x`.
    pub fn terms(&self, x: f64) -> [f64; 3] {
        let l = x.ln();
        let scale = x.powf(1.5);
        let [a, b, c] = self.coefficients;
        [a * scale * l * l, b * scale * l, c * scale]
    }

    /// The same model under another normalization.
    pub fn renormalized(&self, normalization: MainTermNormalization) -> MainTermModel {
        let r = normalization.factor() / self.config.normalization.factor();
        let mut out = self.clone();
        out.config.normalization = normalization;
        out.coefficients = self.coefficients.map(|c| c * r);
        out
    }
}

/// Main terms of `variant` at `x`: `(t1, t2, t3)` with coefficients of
/// `x^{3/2}(log x)²`, `x^{3/2} log x` and `x^{3/2}`.
pub fn predict_main_terms(
    variant: Variant,
    x: f64,
    big_q: u64,
    quad: &BetaQuadConfig,
    normalization: MainTermNormalization,
) -> Result<[f64; 3]> {
    Ok(MainTermModel::new(variant, big_q, quad, normalization)?.terms(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn model(variant: Variant) -> MainTermModel {
        MainTermModel::new(variant, 64, &BetaQuadConfig::default(), MainTermNormalization::Printed).unwrap()
    }

    #[test]
    fn unit_argument_keeps_only_the_constant_term() {
        let m = model(Variant::Tau3Box);
        let [t1, t2, t3] = m.terms(1.0);
        assert_eq!(t1, 0.0);
        assert_eq!(t2, 0.0);
        assert_eq!(t3, m.coefficients[2]);
    }

    #[test]
    fn leading_coefficients() {
        let m = model(Variant::Tau3Box);
        assert!((m.config.integrals[0] - 1.0).abs() < 1e-5);
        let c0 = m.config.series[0];
        let x = 1e4;
        let t1 = m.terms(x)[0];
        let want = c0 / 4.0 * x.powf(1.5) * x.ln().powi(2);
        assert!((t1 - want).abs() <= 1e-5 * want.abs());

        let b = model(Variant::Tau3Ball);
        let t1 = b.terms(E)[0];
        let want = 2.0 * c0 * PI / 6.0 * E.powf(1.5);
        assert!((t1 - want).abs() <= 1e-5 * want.abs());
    }

    #[test]
    fn residue_normalization_doubles() {
        let p = model(Variant::Tau3Box);
        let r = p.renormalized(MainTermNormalization::Residue);
        for j in 0..3 {
            assert_eq!(r.coefficients[j], 2.0 * p.coefficients[j]);
        }
    }

    #[test]
    fn preconditions() {
        let q = BetaQuadConfig::default();
        assert!(MainTermModel::new(Variant::Tau3Box, 32, &q, MainTermNormalization::Residue).is_err());
        assert!(MainTermModel::new(Variant::TauBox, 64, &q, MainTermNormalization::Residue).is_err());
    }

    #[test]
    fn deterministic() {
        let a = model(Variant::Tau3Box);
        let b = model(Variant::Tau3Box);
        for j in 0..3 {
            assert_eq!(a.coefficients[j].to_bits(), b.coefficients[j].to_bits());
        }
    }
}
