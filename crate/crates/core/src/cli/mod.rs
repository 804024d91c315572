//! The `tau3` command-line front end.
//!
//! Every subcommand writes one machine-readable report (JSON or CSV) to stdout
//! or `--output`, and a short human summary to stderr. The exit status is 0
//! when all in-command assertions hold, 3 when the report was written but an
//! assertion failed, and [`Error::exit_code`] for every other failure.

pub mod report;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::arith::{sieve_divisor_tables, DivisorTables};
use crate::expsum::{bound_survey, SurveyConfig};
use crate::oscint::{geometric_oracle, singular_integral_with, BetaQuadConfig, IntegralKind};
use crate::special::{fundamental_constants, SingularSeriesTerms};
use crate::theorem::{brute_lhs, compare_sweep, required_table_limit, MainTermModel, Variant};
use crate::voronoi::{default_dual_cutoff, make_bump, voronoi_check_with, MainTermNormalization, MellinConfig};
use crate::{Error, Result};
use report::{
    render, ConstantsReport, Format, IntegralReport, LhsReport, PredictReport, PredictRow, SieveReport, Tabular,
};
use verify::{run_all, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "tau3", version, about = "Sums of the triple divisor function over sums of three squares")]
pub struct Cli {
    /// Seed for every sampled survey.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for cached divisor tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build (or load) the divisor tables up to a limit.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Brute-force left-hand side of one variant.
    Lhs {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        x: f64,
    },
    /// Fundamental constants and the truncated singular series.
    Constants {
        #[arg(long = "Q", default_value_t = 256)]
        big_q: u64,
    },
    /// A singular integral by β-quadrature, with its geometric oracle.
    Integrals {
        #[arg(long)]
        kind: IntegralKind,
        #[arg(long)]
        ell: usize,
        /// Summation length (shell integral only).
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Dyadic scale (shell integral only).
        #[arg(long = "X", default_value_t = 0.0)]
        big_x: f64,
    },
    /// Predicted main terms at one or more x.
    Predict {
        #[arg(long, default_value = "tau3-box")]
        variant: Variant,
        #[arg(long, num_args = 1.., required = true)]
        x: Vec<f64>,
        #[arg(long = "Q", default_value_t = 256)]
        big_q: u64,
        #[arg(long, default_value = "residue")]
        normalization: MainTermNormalization,
    },
    /// Brute force against the prediction over a list of x.
    Compare {
        #[arg(long, default_value = "tau3-box")]
        variant: Variant,
        #[arg(long, num_args = 1.., required = true)]
        x: Vec<f64>,
        #[arg(long = "Q", default_value_t = 256)]
        big_q: u64,
        #[arg(long, default_value = "residue")]
        normalization: MainTermNormalization,
    },
    /// Twisted-sum and Weil bound surveys.
    Charsum {
        #[arg(long, default_value_t = 97)]
        prime_max: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Both sides of the twisted Voronoi formula.
    Voronoi {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long = "X", default_value_t = 2000.0)]
        big_x: f64,
        #[arg(long = "M", default_value_t = 8.0)]
        sharpness: f64,
        /// Default: ⌈8q³M³/X⌉.
        #[arg(long)]
        dual_cutoff: Option<u64>,
        #[arg(long, default_value = "residue")]
        normalization: MainTermNormalization,
    },
    /// Run the acceptance criteria.
    VerifyAll,
}

/// A rendered report plus what to tell the user.
struct Outcome {
    text: String,
    summary: Vec<String>,
    failures: usize,
}

impl Outcome {
    fn new<R: serde::Serialize + Tabular>(report: &R, format: Format) -> Result<Outcome> {
        Ok(Outcome {
            text: render(report, format)?,
            summary: Vec::new(),
            failures: 0,
        })
    }

    fn note(mut self, line: String) -> Self {
        self.summary.push(line);
        self
    }

    fn check(mut self, ok: bool, what: String) -> Self {
        if !ok {
            self.failures += 1;
            self.summary.push(format!("assertion failed: {what}"));
        }
        self
    }
}

fn tables(cli: &Cli, limit: u64) -> Result<DivisorTables> {
    match &cli.cache_dir {
        Some(dir) => DivisorTables::cached(dir, limit),
        None => sieve_divisor_tables(limit),
    }
}

fn max_x(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(1.0, f64::max)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    match &cli.command {
        Command::Sieve { limit } => {
            let t = tables(cli, *limit)?;
            let tau = &t.tau_slice()[1..];
            let tau3 = &t.tau3_slice()[1..];
            let r = SieveReport {
                limit: t.limit(),
                sum_tau: tau.iter().map(|&v| v as u64).sum(),
                sum_tau3: tau3.iter().map(|&v| v as u64).sum(),
                max_tau3: tau3.iter().copied().max().unwrap_or(0),
                cache_file: cli
                    .cache_dir
                    .as_ref()
                    .map(|d| d.join(format!("divisor-tables-{limit}.bin")).display().to_string()),
            };
            let line = format!("tables to {}: sum tau = {}, sum tau3 = {}", r.limit, r.sum_tau, r.sum_tau3);
            Ok(Outcome::new(&r, format)?.note(line))
        }
        Command::Lhs { variant, x } => {
            let t = tables(cli, required_table_limit(*variant, *x)?)?;
            let r = LhsReport {
                variant: *variant,
                x: *x,
                lhs: brute_lhs(*variant, *x, &t)?,
            };
            let line = format!("{} at x = {}: {}", r.variant, r.x, r.lhs);
            Ok(Outcome::new(&r, format)?.note(line))
        }
        Command::Constants { big_q } => {
            if *big_q == 0 {
                return Err(Error::Usage("--Q must be positive".into()));
            }
            let terms = SingularSeriesTerms::compute(*big_q);
            let series = (0..3).map(|l| terms.estimate(l, *big_q)).collect::<Result<Vec<_>>>()?;
            let constants = fundamental_constants();
            let r = ConstantsReport {
                big_q: *big_q,
                constants,
                tau_leading_constant: constants.tau_leading_constant(),
                series,
            };
            let mut out = Outcome::new(&r, format)?;
            for s in &r.series {
                let tail = s.fitted_tail_exponent.map_or("n/a".to_string(), |e| format!("{e:.3}"));
                out = out.note(format!("C{} (Q = {}) = {:.12}, tail exponent {tail}", s.ell, s.big_q, s.value));
            }
            Ok(out)
        }
        Command::Integrals { kind, ell, x, big_x } => {
            let res = singular_integral_with(*kind, *ell, *x, *big_x, &BetaQuadConfig::default())?;
            let oracle = geometric_oracle(*kind, *ell, *x, *big_x)?;
            let delta = (res.value - oracle).abs();
            let tolerance = 1e-5;
            let r = IntegralReport {
                kind: *kind,
                ell: *ell,
                x: *x,
                big_x: *big_x,
                value: res.value,
                err_estimate: res.err_estimate,
                oracle,
                oracle_delta: delta,
                tolerance,
                result: res,
            };
            let line = format!("{kind:?}_{ell} = {:.9} (oracle {:.9}, delta {delta:.2e})", r.value, oracle);
            Ok(Outcome::new(&r, format)?
                .note(line)
                .check(delta <= tolerance, format!("oracle delta {delta:e} > {tolerance:e}")))
        }
        Command::Predict {
            variant,
            x,
            big_q,
            normalization,
        } => {
            let model = MainTermModel::new(*variant, *big_q, &BetaQuadConfig::default(), *normalization)?;
            let predictions = x
                .iter()
                .map(|&x| {
                    let [t1, t2, t3] = model.terms(x);
                    PredictRow {
                        x,
                        t1,
                        t2,
                        t3,
                        predicted: t1 + t2 + t3,
                    }
                })
                .collect();
            let r = PredictReport {
                config: model.config.clone(),
                coefficients: model.coefficients,
                predictions,
            };
            let mut out = Outcome::new(&r, format)?;
            for p in &r.predictions {
                out = out.note(format!("x = {}: predicted {:.6e}", p.x, p.predicted));
            }
            Ok(out)
        }
        Command::Compare {
            variant,
            x,
            big_q,
            normalization,
        } => {
            let t = tables(cli, required_table_limit(*variant, max_x(x))?)?;
            let s = compare_sweep(*variant, x, *big_q, &BetaQuadConfig::default(), *normalization, &t)?;
            let mut out = Outcome::new(&s, format)?;
            for r in &s.reports {
                out = out
                    .note(format!(
                        "x = {}: lhs {}, predicted {:.6e}, ratio {:.6} (printed {:.6}, residue {:.6})",
                        r.x, r.lhs, r.predicted, r.ratio, r.ratio_printed, r.ratio_residue
                    ))
                    .check(r.ratio.is_finite() && r.ratio > 0.0, format!("ratio at x = {} is {}", r.x, r.ratio));
            }
            Ok(out)
        }
        Command::Charsum { prime_max, samples } => {
            let s = bound_survey(SurveyConfig::new(*prime_max, *samples, cli.seed))?;
            let ratio = s.max_twisted_ratio();
            let closed = s.max_closed_form_error();
            let weil = s.weil.max_ratio;
            Ok(Outcome::new(&s, format)?
                .note(format!(
                    "{} primes, max |T|/p^(5/2) = {ratio:.4}, closed form error {closed:.2e}, Weil ratio {weil:.6}",
                    s.primes.len()
                ))
                .check(ratio <= 3.0, format!("twisted ratio {ratio} > 3"))
                .check(closed <= 1e-6, format!("closed form error {closed:e} > 1e-6"))
                .check(weil <= 1.0 + 1e-9, format!("Weil ratio {weil} > 1")))
        }
        Command::Voronoi {
            q,
            a,
            big_x,
            sharpness,
            dual_cutoff,
            normalization,
        } => {
            let w = make_bump(*big_x, *sharpness)?;
            let cutoff = dual_cutoff.unwrap_or_else(|| default_dual_cutoff(*q, &w));
            let r = voronoi_check_with(*q, *a, &w, cutoff, *normalization, &MellinConfig::default())?;
            let res = r.residual;
            Ok(Outcome::new(&r, format)?
                .note(format!(
                    "q = {q}, a = {a}, cutoff {cutoff}: residual {res:.3e} (printed {:.3e}, residue {:.3e})",
                    r.residual_printed, r.residual_residue
                ))
                .check(res <= 1e-2, format!("residual {res:e} > 1e-2")))
        }
        Command::VerifyAll => {
            let opts = VerifyOptions {
                seed: cli.seed,
                cache_dir: cli.cache_dir.clone(),
            };
            let mut clock = Instant::now();
            let r = run_all(&opts, |c| {
                eprintln!(
                    "criterion {:>2} {} {} ({:.1} s): {}",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.title,
                    clock.elapsed().as_secs_f64(),
                    c.summary
                );
                clock = Instant::now();
            })?;
            let mut out = Outcome::new(&r, format)?.note(format!("{} passed, {} failed", r.passed, r.failed));
            out.failures = r.failed;
            Ok(out)
        }
    }
}

fn emit(cli: &Cli, out: &Outcome) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, &out.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.text.as_bytes())?;
            stdout.flush()?;
        }
    }
    for line in &out.summary {
        eprintln!("{line}");
    }
    Ok(())
}

/// Runs a parsed command line. The report is written before any assertion
/// failure is returned.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be positive".into()));
        }
        // Only fails if a pool already exists, as when called twice in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = dispatch(cli)?;
    emit(cli, &out)?;
    match out.failures {
        0 => Ok(()),
        n => Err(Error::AssertionFailed(n)),
    }
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main_exit_code() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
