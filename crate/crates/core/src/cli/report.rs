//! Report types for the subcommands and their JSON / CSV rendering.

use serde::Serialize;

use super::verify::VerifyReport;
use crate::expsum::BoundSurvey;
use crate::oscint::{IntegralKind, OscIntegralResult};
use crate::special::{FundamentalConstants, SingularSeriesEstimate};
use crate::theorem::{PredictionConfig, SweepReport, Variant};
use crate::voronoi::VoronoiReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Row view of a report for CSV output. The header never depends on the data.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn render<R: Serialize + Tabular>(report: &R, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
            w.write_record(report.header()).map_err(csv_err)?;
            for row in report.rows() {
                w.write_record(&row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
        }
    }
}

// `Display` for f64 is the shortest string that parses back to the same value.
fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveReport {
    pub limit: u64,
    pub sum_tau: u64,
    pub sum_tau3: u64,
    pub max_tau3: u32,
    /// Table file used or written, when a cache directory was given.
    pub cache_file: Option<String>,
}

impl Tabular for SieveReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["limit", "sum_tau", "sum_tau3", "max_tau3"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.limit.to_string(),
            self.sum_tau.to_string(),
            self.sum_tau3.to_string(),
            self.max_tau3.to_string(),
        ]]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LhsReport {
    pub variant: Variant,
    pub x: f64,
    pub lhs: u64,
}

impl Tabular for LhsReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["variant", "x", "lhs"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![self.variant.to_string(), num(self.x), self.lhs.to_string()]]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    #[serde(rename = "Q")]
    pub big_q: u64,
    pub constants: FundamentalConstants,
    pub tau_leading_constant: f64,
    pub series: Vec<SingularSeriesEstimate>,
}

impl Tabular for ConstantsReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["name", "Q", "value", "imaginary", "tail_exponent"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        let c = &self.constants;
        let plain = [
            ("gamma", c.gamma),
            ("gamma1", c.gamma1),
            ("zeta3", c.zeta3),
            ("zeta5", c.zeta5),
            ("tau_leading_constant", self.tau_leading_constant),
        ];
        let mut rows: Vec<Vec<String>> = plain
            .iter()
            .map(|(n, v)| vec![n.to_string(), String::new(), num(*v), String::new(), String::new()])
            .collect();
        for s in &self.series {
            rows.push(vec![
                format!("C{}", s.ell),
                s.big_q.to_string(),
                num(s.value),
                num(s.imaginary),
                opt(s.fitted_tail_exponent),
            ]);
        }
        rows
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegralReport {
    pub kind: IntegralKind,
    pub ell: usize,
    pub x: f64,
    #[serde(rename = "X")]
    pub big_x: f64,
    pub value: f64,
    pub err_estimate: f64,
    pub oracle: f64,
    pub oracle_delta: f64,
    pub tolerance: f64,
    pub result: OscIntegralResult,
}

impl Tabular for IntegralReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["kind", "ell", "x", "X", "value", "err_estimate", "oracle", "oracle_delta"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            format!("{:?}", self.kind),
            self.ell.to_string(),
            num(self.x),
            num(self.big_x),
            num(self.value),
            num(self.err_estimate),
            num(self.oracle),
            num(self.oracle_delta),
        ]]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictRow {
    pub x: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictReport {
    pub config: PredictionConfig,
    pub coefficients: [f64; 3],
    pub predictions: Vec<PredictRow>,
}

impl Tabular for PredictReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["x", "t1", "t2", "t3", "predicted", "Q"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.predictions
            .iter()
            .map(|r| {
                vec![
                    num(r.x),
                    num(r.t1),
                    num(r.t2),
                    num(r.t3),
                    num(r.predicted),
                    self.config.big_q.to_string(),
                ]
            })
            .collect()
    }
}

impl Tabular for SweepReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["x", "lhs", "t1", "t2", "t3", "predicted", "ratio", "Q"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.reports
            .iter()
            .map(|r| {
                vec![
                    num(r.x),
                    r.lhs.to_string(),
                    num(r.t1),
                    num(r.t2),
                    num(r.t3),
                    num(r.predicted),
                    num(r.ratio),
                    r.config.big_q.to_string(),
                ]
            })
            .collect()
    }
}

impl Tabular for BoundSurvey {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "p",
            "exhaustive",
            "tuples",
            "max_ratio",
            "max_ratio_generic",
            "closed_form_max_error",
            "closed_form_checks",
        ]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.primes
            .iter()
            .map(|p| {
                vec![
                    p.p.to_string(),
                    p.exhaustive.to_string(),
                    p.tuples.to_string(),
                    num(p.max_ratio),
                    num(p.max_ratio_generic),
                    num(p.closed_form_max_error),
                    p.closed_form_checks.to_string(),
                ]
            })
            .collect()
    }
}

impl Tabular for VoronoiReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "q",
            "a",
            "X",
            "M",
            "dual_cutoff",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "residual",
            "residual_printed",
            "residual_residue",
        ]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.q.to_string(),
            self.a.to_string(),
            num(self.window.scale),
            num(self.window.sharpness),
            self.dual_cutoff.to_string(),
            num(self.lhs.re),
            num(self.lhs.im),
            num(self.rhs.re),
            num(self.rhs.im),
            num(self.residual),
            num(self.residual_printed),
            num(self.residual_residue),
        ]]
    }
}

impl Tabular for VerifyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["id", "title", "passed", "summary"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.criteria
            .iter()
            .map(|c| vec![c.id.to_string(), c.title.clone(), c.passed.to_string(), c.summary.clone()])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theorem::ComparisonReport;

    fn empty_sweep() -> SweepReport {
        SweepReport {
            reports: Vec::new(),
            deviations: Vec::new(),
            decay_exponent: None,
        }
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let s = render(&empty_sweep(), Format::Csv).unwrap();
        assert_eq!(s, "x,lhs,t1,t2,t3,predicted,ratio,Q\n");
    }

    #[test]
    fn csv_floats_round_trip() {
        for v in [0.1 + 0.2, 1.0 / 3.0, 6.02e23, -1.5e-300, 0.8862269254527580] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        let r = LhsReport {
            variant: Variant::Tau3Box,
            x: 1e4,
            lhs: 12,
        };
        assert_eq!(render(&r, Format::Csv).unwrap(), "variant,x,lhs\ntau3-box,10000,12\n");
    }

    #[test]
    fn comparison_row_has_eight_columns() {
        use crate::arith::sieve_divisor_tables;
        use crate::oscint::BetaQuadConfig;
        use crate::theorem::{compare, MainTermModel};
        use crate::voronoi::MainTermNormalization;
        let t = sieve_divisor_tables(300).unwrap();
        let m = MainTermModel::new(Variant::Tau3Box, 64, &BetaQuadConfig::default(), MainTermNormalization::Residue)
            .unwrap();
        let r: ComparisonReport = compare(&m, 100.0, &t).unwrap();
        let mut s = empty_sweep();
        s.reports.push(r);
        let rows = s.rows();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), 8);
        assert_eq!(rows[0][7], "64");
    }
}
