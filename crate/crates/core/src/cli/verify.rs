//! The acceptance checks behind `tau3 verify-all`.
//!
//! Each check returns a [`CriterionResult`] with the numbers it was judged on.
//! Reports never contain timings so that identical seeds give identical bytes.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{sieve_divisor_tables, DivisorTables};
use crate::expsum::{bound_survey, charsum_samples, factorization_check, gauss_survey, weil_survey, SurveyConfig};
use crate::oscint::{singular_integral_with, BetaQuadConfig, IntegralKind};
use crate::special::{tail_decay_fit_with, SingularSeriesTerms};
use crate::theorem::{brute_lhs, c5_stabilize, compare_sweep, required_table_limit, Variant};
use crate::voronoi::{
    default_dual_cutoff, make_bump, phi_asymptotic, phi_contour, voronoi_check_with, MainTermNormalization,
    MellinConfig,
};
use crate::{Error, Result};

/// Criteria run by `verify-all`, as `(id, title)`. Determinism of the report
/// itself is checked from outside by running the command twice.
pub const CRITERIA: [(usize, &str); 11] = [
    (1, "three-square identity"),
    (2, "singular integrals against geometry"),
    (3, "Gauss sum closed forms"),
    (4, "character sum factorization"),
    (5, "twisted sum bound"),
    (6, "Weil bound"),
    (7, "singular series tail decay"),
    (8, "Voronoi identity"),
    (9, "kernel against stationary phase"),
    (10, "main theorem trend"),
    (11, "tau leading constant"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub criteria: Vec<CriterionResult>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
}

impl VerifyOptions {
    fn tables(&self, limit: u64) -> Result<DivisorTables> {
        match &self.cache_dir {
            Some(dir) => DivisorTables::cached(dir, limit),
            None => sieve_divisor_tables(limit),
        }
    }
}

fn result(id: usize, passed: bool, summary: String, details: Value) -> CriterionResult {
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("", |c| c.1);
    CriterionResult {
        id,
        title: title.to_string(),
        passed,
        summary,
        details,
    }
}

pub fn run_criterion(id: usize, opts: &VerifyOptions) -> Result<CriterionResult> {
    match id {
        1 => identity(opts),
        2 => singular_integrals(),
        3 => gauss(),
        4 => factorization(opts),
        5 => twisted_bound(opts),
        6 => weil(),
        7 => series_tail(),
        8 => voronoi(),
        9 => kernel(),
        10 => trend(opts),
        11 => leading_constant(opts),
        _ => Err(Error::Usage(format!("no criterion {id}"))),
    }
}

/// Runs every criterion in order, calling `progress` after each one.
pub fn run_all(opts: &VerifyOptions, mut progress: impl FnMut(&CriterionResult)) -> Result<VerifyReport> {
    let mut criteria = Vec::with_capacity(CRITERIA.len());
    for (id, _) in CRITERIA {
        let r = run_criterion(id, opts)?;
        progress(&r);
        criteria.push(r);
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    Ok(VerifyReport {
        seed: opts.seed,
        passed,
        failed: criteria.len() - passed,
        criteria,
    })
}

fn identity(opts: &VerifyOptions) -> Result<CriterionResult> {
    let xs = [1e2, 1e3, 1e4];
    let tables = opts.tables(1e4 as u64)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for x in xs {
        let left = brute_lhs(Variant::IdentityLeft, x, &tables)?;
        let right = brute_lhs(Variant::IdentityRight, x, &tables)?;
        ok &= left == right;
        rows.push(json!({ "x": x, "left": left, "right": right }));
    }
    let last = &rows[rows.len() - 1];
    let summary = format!("left = right at x = 1e2, 1e3, 1e4 (x = 1e4: {} vs {})", last["left"], last["right"]);
    Ok(result(1, ok, summary, json!({ "sums": rows })))
}

fn singular_integrals() -> Result<CriterionResult> {
    let quad = BetaQuadConfig::default();
    let j = singular_integral_with(IntegralKind::J, 0, 0.0, 0.0, &quad)?;
    let k = singular_integral_with(IntegralKind::K, 0, 0.0, 0.0, &quad)?;
    let dj = (j.value - 1.0).abs();
    let dk = (k.value - PI / 6.0).abs();
    let ok = dj <= 1e-5 && dk <= 1e-5;
    let summary = format!("J0 = {:.9} (off {dj:.2e}), K0 = {:.9} (off {dk:.2e})", j.value, k.value);
    Ok(result(2, ok, summary, json!({ "J0": j, "K0": k, "J0_error": dj, "K0_error": dk, "tolerance": 1e-5 })))
}

fn gauss() -> Result<CriterionResult> {
    let s = gauss_survey(99)?;
    let ok = s.max_error <= 1e-9;
    let summary = format!("{} cases with odd q <= 99, max error {:.2e}", s.cases, s.max_error);
    Ok(result(3, ok, summary, json!({ "survey": s, "tolerance": 1e-9 })))
}

fn factorization(opts: &VerifyOptions) -> Result<CriterionResult> {
    let samples = charsum_samples(200, 60, opts.seed);
    let c = factorization_check(&samples)?;
    let ok = c.samples == 200 && c.max_scaled_error <= 1e-6;
    let summary = format!("{} samples with q <= 60, max error / q^3 = {:.2e}", c.samples, c.max_scaled_error);
    Ok(result(4, ok, summary, json!({ "check": c, "tolerance": 1e-6 })))
}

fn twisted_bound(opts: &VerifyOptions) -> Result<CriterionResult> {
    let s = bound_survey(SurveyConfig::new(97, 500, opts.seed))?;
    let ratio = s.max_twisted_ratio();
    let closed = s.max_closed_form_error();
    let ok = ratio <= 3.0 && closed <= 1e-6;
    let summary = format!(
        "{} primes <= 97, max |T|/p^(5/2) = {ratio:.4}, closed form error {closed:.2e}",
        s.primes.len()
    );
    let primes: Vec<Value> = s
        .primes
        .iter()
        .map(|p| {
            json!({
                "p": p.p,
                "exhaustive": p.exhaustive,
                "tuples": p.tuples,
                "max_ratio": p.max_ratio,
                "argmax": p.argmax,
                "closed_form_max_error": p.closed_form_max_error,
            })
        })
        .collect();
    Ok(result(
        5,
        ok,
        summary,
        json!({ "max_ratio": ratio, "closed_form_max_error": closed, "bound": 3.0, "primes": primes }),
    ))
}

fn weil() -> Result<CriterionResult> {
    let s = weil_survey(60);
    let ok = s.max_ratio <= 1.0 + 1e-9;
    let summary = format!(
        "c <= 60, max |S|/(tau(c) gcd^(1/2) c^(1/2)) = {:.6} at (a, b, c) = {:?}",
        s.max_ratio, s.argmax
    );
    Ok(result(6, ok, summary, json!({ "survey": s, "slack": 1e-9 })))
}

fn series_tail() -> Result<CriterionResult> {
    let q_list = [64, 128, 256, 512];
    let terms = SingularSeriesTerms::compute(1024);
    let limits = [-0.4, -0.3, -0.3];
    let mut fits = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    for (ell, limit) in limits.into_iter().enumerate() {
        let fit = tail_decay_fit_with(&terms, ell, &q_list)?;
        let pass = fit.exponent <= limit;
        ok &= pass;
        parts.push(format!("C{ell} {:.3}{}", fit.exponent, if pass { "" } else { " (too slow)" }));
        fits.push(json!({ "fit": fit, "limit": limit, "passed": pass }));
    }
    let summary = format!("decay exponents {}", parts.join(", "));
    Ok(result(7, ok, summary, json!({ "fits": fits })))
}

fn voronoi() -> Result<CriterionResult> {
    let w = make_bump(2000.0, 8.0)?;
    let cfg = MellinConfig::default();
    let norm = MainTermNormalization::Residue;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut parts = Vec::new();
    for (q, a) in [(1u64, 1i64), (3, 1), (4, 3)] {
        let cutoff = default_dual_cutoff(q, &w);
        let base = voronoi_check_with(q, a, &w, cutoff, norm, &cfg)?;
        let doubled = voronoi_check_with(q, a, &w, 2 * cutoff, norm, &cfg)?;
        let pass = base.residual <= 1e-2 && doubled.residual < base.residual;
        ok &= pass;
        parts.push(format!("({q},{a}) {:.2e} -> {:.2e}", base.residual, doubled.residual));
        rows.push(json!({
            "q": q,
            "a": a,
            "dual_cutoff": cutoff,
            "residual": base.residual,
            "residual_doubled_cutoff": doubled.residual,
            "residual_printed": base.residual_printed,
            "lhs": base.lhs,
            "rhs": base.rhs,
            "passed": pass,
        }));
    }
    let summary = format!("residuals at cutoff and doubled cutoff: {}", parts.join(", "));
    Ok(result(8, ok, summary, json!({ "window": w, "normalization": norm, "cases": rows })))
}

fn kernel() -> Result<CriterionResult> {
    let w = make_bump(2000.0, 8.0)?;
    let cfg = MellinConfig::default();
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let big_y = 10f64.powf(4.0 + i as f64 / 3.0);
        // frequency that puts the stationary point at u = 3X/4
        let beta = (big_y / 0.5625).cbrt() / w.scale;
        for k in 0..2 {
            let y = big_y / w.scale;
            let c = phi_contour(y, k, &w, &cfg, beta)?;
            let a = phi_asymptotic(y, k, &w, 1, beta)?;
            let rel = (c - a).norm() / c.norm();
            worst = worst.max(rel);
            rows.push(json!({ "yX": big_y, "k": k, "beta": beta, "contour": c, "asymptotic": a, "relative_gap": rel }));
        }
    }
    let ok = worst <= 1e-3;
    let summary = format!("20 points with yX in [1e4, 1e7], max relative gap {worst:.2e}");
    Ok(result(9, ok, summary, json!({ "window": w, "max_relative_gap": worst, "points": rows })))
}

fn trend(opts: &VerifyOptions) -> Result<CriterionResult> {
    let xs = [1e4, 65536.0, 1e6];
    let tables = opts.tables(required_table_limit(Variant::Tau3Box, 1e6)?)?;
    let s = compare_sweep(
        Variant::Tau3Box,
        &xs,
        256,
        &BetaQuadConfig::default(),
        MainTermNormalization::Residue,
        &tables,
    )?;
    let r = &s.reports;
    let mid = r[1].ratio;
    let ok = (0.4..=1.6).contains(&mid) && (r[2].ratio - 1.0).abs() < (r[0].ratio - 1.0).abs();
    let summary = format!(
        "ratios {:.5}, {:.5}, {:.5} at x = 1e4, 65536, 1e6 (printed normalization {:.4}, {:.4}, {:.4})",
        r[0].ratio, r[1].ratio, r[2].ratio, r[0].ratio_printed, r[1].ratio_printed, r[2].ratio_printed
    );
    Ok(result(10, ok, summary, json!({ "sweep": s })))
}

fn leading_constant(opts: &VerifyOptions) -> Result<CriterionResult> {
    let xs = [1e4, 1e5, 1e6];
    let tables = opts.tables(required_table_limit(Variant::TauBox, 1e6)?)?;
    let r = c5_stabilize(&xs, &tables)?;
    let summary = format!(
        "estimates {:.5}, {:.5}, {:.5}, deltas {:.4}, {:.4}",
        r.estimates[0], r.estimates[1], r.estimates[2], r.deltas[0], r.deltas[1]
    );
    Ok(result(11, r.strictly_shrinking, summary, json!({ "report": r })))
}
