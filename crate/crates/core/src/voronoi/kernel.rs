//! The Mellin–Barnes kernels `Φ_k` by vertical-line quadrature, and their
//! first-order stationary-phase approximation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::window::TestWindow;
use crate::numeric::quad::{integrate_with_breaks, GaussLegendre, Tolerance};
use crate::numeric::{e, ln_gamma};
use crate::{Error, Result};

const PI3: f64 = PI * PI * PI;

/// Which way of writing the contour integral is evaluated.
///
/// `Unshifted`: `(π³y)^{−s} Γ((1+s+2k)/2)³/Γ(−s/2)³ φ̃(−s−k)`, legal for
/// `σ > −1−2k`. `Shifted`: `(π³y)^{k−s} Γ((1+s+k)/2)³/Γ((k−s)/2)³ φ̃(−s)`,
/// legal for `σ > −1−k`. The second is the first after `s ↦ s − k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContourForm {
    Unshifted,
    Shifted,
}

impl ContourForm {
    /// Left edge of the strip free of Gamma poles.
    pub fn strip_edge(self, k: usize) -> f64 {
        match self {
            ContourForm::Unshifted => -1.0 - 2.0 * k as f64,
            ContourForm::Shifted => -1.0 - k as f64,
        }
    }

    /// Abscissa on which the Gamma ratio has modulus one.
    pub fn balanced_sigma(self, k: usize) -> f64 {
        match self {
            ContourForm::Unshifted => -0.5 - k as f64,
            ContourForm::Shifted => -0.5,
        }
    }
}

/// Vertical-line quadrature settings. `None` fields are chosen automatically.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MellinConfig {
    pub form: ContourForm,
    pub sigma: Option<f64>,
    /// Truncation height `T`.
    pub height: Option<f64>,
    /// Trapezoid nodes on `[−T, T]`.
    pub nodes: Option<usize>,
    /// The tail beyond `T` must sit below this fraction of the peak integrand.
    pub tail_ratio: f64,
}

impl Default for MellinConfig {
    fn default() -> Self {
        MellinConfig {
            form: ContourForm::Unshifted,
            sigma: None,
            height: None,
            nodes: None,
            tail_ratio: 1e-12,
        }
    }
}

impl MellinConfig {
    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_form(mut self, form: ContourForm) -> Self {
        self.form = form;
        self
    }
}

const MAX_HEIGHT: f64 = 40_000.0;
const GL_ORDER: usize = 20;

/// Quadrature nodes for `v ↦ φ(v) e(−β'v) v^{w−1}` on `[1/2, 1]`.
struct MellinNodes {
    log_v: Vec<f64>,
    // weight · φ(v) · e(−β'v) · v^{c−1}
    coef: Vec<Complex64>,
}

impl MellinNodes {
    fn new(w: &TestWindow, beta_unit: f64, c: f64, height: f64) -> MellinNodes {
        let gl = GaussLegendre::new(GL_ORDER);
        // angular frequency of v^{−it} e(−β'v) is at most 2T + 2π|β'|
        let omega = 2.0 * height + 2.0 * PI * beta_unit.abs();
        let b = w.unit_breaks();
        let mut log_v = Vec::new();
        let mut coef = Vec::new();
        for (i, pair) in b.windows(2).enumerate() {
            let len = pair[1] - pair[0];
            let cycles = omega * len / (2.0 * PI);
            let floor = if i == 1 { 2 } else { 24 };
            let panels = ((cycles / 2.0).ceil() as usize).max(floor);
            let step = len / panels as f64;
            for p in 0..panels {
                let a = pair[0] + step * p as f64;
                for (v, wt) in gl.mapped(a, a + step) {
                    let phi = w.unit(v);
                    if phi == 0.0 {
                        continue;
                    }
                    let lv = v.ln();
                    log_v.push(lv);
                    coef.push(e(-beta_unit * v) * (wt * phi * ((c - 1.0) * lv).exp()));
                }
            }
        }
        MellinNodes { log_v, coef }
    }

    /// `φ̃(c − it)` at `t = t0 + j·h` for `j < count`.
    fn along(&self, t0: f64, h: f64, count: usize) -> Vec<Complex64> {
        let mut phase: Vec<Complex64> = self.log_v.iter().map(|l| Complex64::from_polar(1.0, -t0 * l)).collect();
        let step: Vec<Complex64> = self.log_v.iter().map(|l| Complex64::from_polar(1.0, -h * l)).collect();
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            if j > 0 && j % 512 == 0 {
                let t = t0 + h * j as f64;
                for (p, l) in phase.iter_mut().zip(&self.log_v) {
                    *p = Complex64::from_polar(1.0, -t * l);
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for ((c, p), s) in self.coef.iter().zip(phase.iter_mut()).zip(&step) {
                acc += c * *p;
                *p *= s;
            }
            out.push(acc);
        }
        out
    }
}

/// Precomputed vertical-line integrand for one window, `β`, `k` and contour.
///
/// Evaluates `Φ_k(Y)` on the unit scale (`φ` supported on `[1/2, 1]`); on
/// scale `X` one has `Φ_k(y) = X^{−k} Φ_k(yX)` for the unit-scale window.
#[derive(Debug, Clone)]
pub struct KernelGrid {
    k: usize,
    form: ContourForm,
    sigma: f64,
    step: f64,
    height: f64,
    // integrand at t = −T + j·step
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelSummary {
    pub k: usize,
    pub form: ContourForm,
    pub sigma: f64,
    pub height: f64,
    pub nodes: usize,
}

fn gamma_ratio(form: ContourForm, k: usize, s: Complex64) -> Complex64 {
    let kf = k as f64;
    let (num, den) = match form {
        ContourForm::Unshifted => ((1.0 + s + 2.0 * kf) / 2.0, -s / 2.0),
        ContourForm::Shifted => ((1.0 + s + kf) / 2.0, (kf - s) / 2.0),
    };
    (3.0 * (ln_gamma(num) - ln_gamma(den))).exp()
}

fn integrand_along(
    nodes: &MellinNodes,
    form: ContourForm,
    k: usize,
    sigma: f64,
    t0: f64,
    h: f64,
    count: usize,
) -> Vec<Complex64> {
    let chunk = 1024;
    let chunks: Vec<Vec<Complex64>> = (0..count.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let len = chunk.min(count - start);
            let first = t0 + h * start as f64;
            nodes
                .along(first, h, len)
                .into_iter()
                .enumerate()
                .map(|(j, m)| gamma_ratio(form, k, Complex64::new(sigma, first + h * j as f64)) * m)
                .collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

// Step for the trapezoid rule on the vertical line. The integrand oscillates
// at frequency up to `log(π³Y) + 3 log(T/2) + log 2`; moving the line by `d`
// toward the nearest Gamma pole (at distance `gap`) multiplies it by about
// `e^{dΩ}` and by `(gap − d)^{−3}` near the pole, against an error factor
// `e^{−2πd/h}`.
fn trapezoid_step(y_max: f64, height: f64, gap: f64) -> f64 {
    let omega = (PI3 * y_max).ln().abs() + 3.0 * (height / 2.0).ln().max(1.0) + 2f64.ln();
    let nyquist = PI / (2.0 * (omega + 2.0));
    let d = 0.75 * gap.min(2.0);
    let strip = 2.0 * PI * d / (d * omega + 32.0 + 3.0 * (1.0 / (gap - d)).ln().max(0.0));
    nyquist.min(strip)
}

impl KernelGrid {
    /// Build the grid for unit-scale arguments up to `y_max`, with `β'` the
    /// frequency on the unit scale (`β' = βX`).
    pub fn new(w: &TestWindow, beta_unit: f64, k: usize, y_max: f64, cfg: &MellinConfig) -> Result<KernelGrid> {
        if k > 1 {
            return Err(Error::Precondition(format!("kernel index {k} is not 0 or 1")));
        }
        let form = cfg.form;
        let sigma = cfg.sigma.unwrap_or_else(|| form.balanced_sigma(k));
        if !(sigma > form.strip_edge(k)) {
            return Err(Error::Precondition(format!(
                "contour abscissa {sigma} outside the strip σ > {}",
                form.strip_edge(k)
            )));
        }
        if !(y_max > 0.0) {
            return Err(Error::Precondition(format!("kernel argument must be positive, got {y_max}")));
        }
        // real part of the Mellin variable: φ̃(c − it)
        let c = match form {
            ContourForm::Unshifted => -sigma - k as f64,
            ContourForm::Shifted => -sigma,
        };
        let height = match cfg.height {
            Some(t) => t,
            None => Self::find_height(w, beta_unit, k, form, sigma, c, cfg.tail_ratio)?,
        };
        let count = match cfg.nodes {
            Some(n) => n.max(3),
            None => 2 * (height / trapezoid_step(y_max, height, sigma - form.strip_edge(k))).ceil() as usize + 1,
        };
        let step = 2.0 * height / (count - 1) as f64;
        let nodes = MellinNodes::new(w, beta_unit, c, height);
        let values = integrand_along(&nodes, form, k, sigma, -height, step, count);
        Ok(KernelGrid {
            k,
            form,
            sigma,
            step,
            height,
            values,
        })
    }

    // Scan the integrand on a coarse grid until it stays below `ratio` of its
    // peak on both sides.
    fn find_height(
        w: &TestWindow,
        beta_unit: f64,
        k: usize,
        form: ContourForm,
        sigma: f64,
        c: f64,
        ratio: f64,
    ) -> Result<f64> {
        let mut cap = 2.0 * PI * beta_unit.abs() + 1000.0;
        loop {
            let nodes = MellinNodes::new(w, beta_unit, c, cap);
            let dt = 2.0;
            let half = (cap / dt) as usize;
            let t0 = -dt * half as f64;
            let mags: Vec<f64> = integrand_along(&nodes, form, k, sigma, t0, dt, 2 * half + 1)
                .iter()
                .map(|z| z.norm())
                .collect();
            // rounding floor of the node sum, scaled by the Gamma ratio
            let mass: f64 = nodes.coef.iter().map(|c| c.norm()).sum();
            let floor = |j: usize| {
                let g = gamma_ratio(form, k, Complex64::new(sigma, t0 + dt * j as f64)).norm();
                1e3 * f64::EPSILON * mass * g
            };
            let peak = mags.iter().cloned().fold(0.0, f64::max);
            let loud = |j: usize| mags[j] > (ratio * peak).max(floor(j));
            let first = (0..mags.len()).find(|&j| loud(j)).unwrap_or(half);
            let last = (0..mags.len()).rev().find(|&j| loud(j)).unwrap_or(half);
            let reach = dt * (half.abs_diff(first).max(last.abs_diff(half))) as f64;
            // demand a quiet stretch of at least 200 beyond the loudest reach
            if reach + 200.0 < cap {
                return Ok((reach + 50.0).max(50.0));
            }
            if cap >= MAX_HEIGHT {
                let edge = mags[0].max(mags[mags.len() - 1]);
                return Err(Error::NonConvergence {
                    what: "kernel contour truncation",
                    err_estimate: edge / peak,
                    tolerance: ratio,
                });
            }
            cap = (cap * 2.0).min(MAX_HEIGHT);
        }
    }

    pub fn summary(&self) -> KernelSummary {
        KernelSummary {
            k: self.k,
            form: self.form,
            sigma: self.sigma,
            height: self.height,
            nodes: self.values.len(),
        }
    }

    /// `Φ_k(Y)` for the unit-scale window.
    pub fn eval(&self, y: f64) -> Complex64 {
        let l = (PI3 * y).ln();
        let t0 = -self.height;
        let rot = Complex64::from_polar(1.0, -self.step * l);
        let mut phase = Complex64::from_polar(1.0, -t0 * l);
        let mut acc = Complex64::new(0.0, 0.0);
        let last = self.values.len() - 1;
        for (j, h) in self.values.iter().enumerate() {
            if j > 0 && j % 256 == 0 {
                phase = Complex64::from_polar(1.0, -(t0 + self.step * j as f64) * l);
            }
            let wt = if j == 0 || j == last { 0.5 } else { 1.0 };
            acc += phase * *h * wt;
            phase *= rot;
        }
        let lead = match self.form {
            ContourForm::Unshifted => (-self.sigma * l).exp(),
            ContourForm::Shifted => ((self.k as f64 - self.sigma) * l).exp(),
        };
        acc * (lead * self.step / (2.0 * PI))
    }
}

/// `Φ_k(y)` for the window `φ(u/X) e(−βu)` by vertical-line quadrature.
pub fn phi_contour(y: f64, k: usize, w: &TestWindow, cfg: &MellinConfig, beta: f64) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::Precondition(format!("kernel argument must be positive, got {y}")));
    }
    let big_y = y * w.scale;
    let grid = KernelGrid::new(w, beta * w.scale, k, big_y, cfg)?;
    Ok(grid.eval(big_y) * w.scale.powi(-(k as i32)))
}

/// First-order coefficients `(a_k, b_k)` of the stationary-phase expansion.
pub fn asymptotic_coefficients(k: usize) -> Result<(Complex64, Complex64)> {
    let c = 2.0 * (3.0 * PI).sqrt() / (6.0 * PI);
    match k {
        0 => {
            let a = -c / Complex64::new(0.0, 1.0);
            Ok((a, -a))
        }
        1 => Ok((Complex64::new(-c, 0.0), Complex64::new(-c, 0.0))),
        _ => Err(Error::Precondition(format!("kernel index {k} is not 0 or 1"))),
    }
}

/// Smallest `yX` accepted by [`phi_asymptotic`].
pub const ASYMPTOTIC_MIN_YX: f64 = 100.0;

/// `(π³y)^{k+1} ∫ φ(u/X) e(−βu) (a_k e(3(yu)^{1/3}) + b_k e(−3(yu)^{1/3})) du/(π³yu)^{1/3}`.
pub fn phi_asymptotic(y: f64, k: usize, w: &TestWindow, terms: usize, beta: f64) -> Result<Complex64> {
    if terms == 0 {
        return Err(Error::Precondition("asymptotic expansion needs at least one term".into()));
    }
    if terms > 1 {
        return Err(Error::UnsupportedOrder(terms));
    }
    let (a, b) = asymptotic_coefficients(k)?;
    let x = w.scale;
    let big_y = y * x;
    if !(big_y >= ASYMPTOTIC_MIN_YX) {
        return Err(Error::RegimeViolation {
            yx: big_y,
            min: ASYMPTOTIC_MIN_YX,
        });
    }
    let beta_unit = beta * x;
    // phases 2π(±3(Yv)^{1/3} − β'v) have frequency ≤ 2π(2·Y^{1/3} + |β'|)
    let freq = 2.0 * big_y.cbrt() + beta_unit.abs();
    let mut breaks = Vec::new();
    for pair in w.unit_breaks().windows(2) {
        let pieces = ((freq * (pair[1] - pair[0])).ceil() as usize).max(4);
        for i in 0..pieces {
            breaks.push(pair[0] + (pair[1] - pair[0]) * i as f64 / pieces as f64);
        }
    }
    breaks.push(1.0);
    let integral = integrate_with_breaks(
        |v: f64| {
            let phase = 3.0 * (big_y * v).cbrt();
            (a * e(phase) + b * e(-phase)) * e(-beta_unit * v) * (w.unit(v) / (PI3 * big_y * v).cbrt())
        },
        &breaks,
        Tolerance::abs(1e-15).with_rel(1e-12).with_max_intervals(200_000),
    );
    Ok(integral.value * ((PI3 * y).powi(k as i32 + 1) * x))
}

/// `Φ^±(y) = Φ₀(y) ± Φ₁(y)/(iπ³y)`.
pub fn phi_pm(phi0: Complex64, phi1: Complex64, y: f64) -> [Complex64; 2] {
    let d = phi1 / Complex64::new(0.0, PI3 * y);
    [phi0 + d, phi0 - d]
}

/// Grids for `Φ₀` and `Φ₁` sharing one window, evaluating `Φ^±` directly.
#[derive(Debug, Clone)]
pub struct PhiPm {
    scale: f64,
    grids: [KernelGrid; 2],
}

impl PhiPm {
    pub fn new(w: &TestWindow, beta: f64, y_max: f64, cfg: &MellinConfig) -> Result<PhiPm> {
        let big = y_max * w.scale;
        Ok(PhiPm {
            scale: w.scale,
            grids: [
                KernelGrid::new(w, beta * w.scale, 0, big, cfg)?,
                KernelGrid::new(w, beta * w.scale, 1, big, cfg)?,
            ],
        })
    }

    /// `Φ₀(y)` and `Φ₁(y)` on the window's scale.
    pub fn parts(&self, y: f64) -> [Complex64; 2] {
        let big = y * self.scale;
        [self.grids[0].eval(big), self.grids[1].eval(big) / self.scale]
    }

    /// `[Φ⁺(y), Φ⁻(y)]`, with `Φ₁/(iπ³y)` formed on the unit scale.
    pub fn eval(&self, y: f64) -> [Complex64; 2] {
        let big = y * self.scale;
        let d = self.grids[1].eval(big) / Complex64::new(0.0, PI3 * big);
        let p0 = self.grids[0].eval(big);
        [p0 + d, p0 - d]
    }

    pub fn summaries(&self) -> [KernelSummary; 2] {
        [self.grids[0].summary(), self.grids[1].summary()]
    }
}
