use num_complex::Complex64;
use serde::Serialize;

use crate::numeric::e;
use crate::numeric::quad::{integrate_with_breaks, Tolerance};
use crate::{Error, Result};

/// Truncated Taylor jet `f, f', f''/2!, f'''/3!, f''''/4!`.
#[derive(Debug, Clone, Copy)]
struct Jet([f64; 5]);

impl Jet {
    fn var(t: f64) -> Jet {
        Jet([t, 1.0, 0.0, 0.0, 0.0])
    }

    fn constant(c: f64) -> Jet {
        Jet([c, 0.0, 0.0, 0.0, 0.0])
    }

    fn add(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }

    fn sub(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    fn mul(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|n| (0..=n).map(|k| self.0[k] * o.0[n - k]).sum()))
    }

    fn recip(self) -> Jet {
        let a = self.0;
        let mut b = [0.0; 5];
        b[0] = 1.0 / a[0];
        for n in 1..5 {
            b[n] = -(1..=n).map(|k| a[k] * b[n - k]).sum::<f64>() / a[0];
        }
        Jet(b)
    }

    fn exp(self) -> Jet {
        let a = self.0;
        let mut r = [0.0; 5];
        r[0] = a[0].exp();
        for n in 1..5 {
            r[n] = (1..=n).map(|k| k as f64 * a[k] * r[n - k]).sum::<f64>() / n as f64;
        }
        Jet(r)
    }

    fn scale_arg(self, s: f64) -> Jet {
        // jet of t ↦ f(s t) from the jet of f, at the matching point
        let mut p = 1.0;
        Jet(std::array::from_fn(|i| {
            let v = self.0[i] * p;
            p *= s;
            v
        }))
    }

    fn derivatives(self) -> [f64; 5] {
        let mut f = 1.0;
        std::array::from_fn(|i| {
            if i > 0 {
                f *= i as f64;
            }
            self.0[i] * f
        })
    }
}

/// `exp(−1/t)`-mollifier ramp, 0 for `t ≤ 0` and 1 for `t ≥ 1`, as a jet.
fn ramp_jet(t: f64) -> Jet {
    if t <= 0.0 {
        return Jet::constant(0.0);
    }
    if t >= 1.0 {
        return Jet::constant(1.0);
    }
    // f(t)/(f(t)+f(1−t)) = 1/(1 + exp(1/t − 1/(1−t)))
    let x = Jet::var(t);
    let g = x.recip().sub(Jet::constant(1.0).sub(x).recip());
    if g.0[0] > 600.0 {
        return Jet::constant(0.0);
    }
    Jet::constant(1.0).add(g.exp()).recip()
}

/// The mollifier ramp.
pub fn ramp(t: f64) -> f64 {
    ramp_jet(t).0[0]
}

/// Smooth window `u ↦ φ(u/X)` with `φ` supported on `[1/2, 1]` and equal to
/// one on `[1/2 + 1/M, 1 − 1/M]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestWindow {
    #[serde(rename = "X")]
    pub scale: f64,
    #[serde(rename = "M")]
    pub sharpness: f64,
}

pub fn make_bump(scale: f64, sharpness: f64) -> Result<TestWindow> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Precondition(format!("window scale must be positive, got {scale}")));
    }
    if !(sharpness > 4.0 && sharpness.is_finite()) {
        return Err(Error::Precondition(format!("window sharpness must exceed 4, got {sharpness}")));
    }
    Ok(TestWindow { scale, sharpness })
}

impl TestWindow {
    fn unit_jet(&self, v: f64) -> Jet {
        let m = self.sharpness;
        let left = ramp_jet((v - 0.5) * m).scale_arg(m);
        let right = ramp_jet((1.0 - v) * m).scale_arg(-m);
        left.mul(right)
    }

    /// `φ(v)` on the unit scale.
    pub fn unit(&self, v: f64) -> f64 {
        let m = self.sharpness;
        ramp((v - 0.5) * m) * ramp((1.0 - v) * m)
    }

    /// `φ(u/X)`.
    pub fn eval(&self, u: f64) -> f64 {
        self.unit(u / self.scale)
    }

    /// `φ^{(j)}(v)` for `j ≤ 4`.
    pub fn unit_derivatives(&self, v: f64) -> [f64; 5] {
        self.unit_jet(v).derivatives()
    }

    /// `(max_v |φ^{(j)}(v)|)^{1/j} / M` over a uniform grid of `points` on
    /// `[1/2, 1]`; the window obeys `|φ^{(j)}| ≤ (cM)^j` with this `c`.
    pub fn derivative_constant(&self, j: usize, points: usize) -> f64 {
        assert!((1..=4).contains(&j));
        let peak = (0..=points)
            .map(|i| 0.5 + 0.5 * i as f64 / points as f64)
            .map(|v| self.unit_derivatives(v)[j].abs())
            .fold(0.0, f64::max);
        peak.powf(1.0 / j as f64) / self.sharpness
    }

    /// Break points on the unit scale: support ends and plateau ends.
    pub fn unit_breaks(&self) -> [f64; 4] {
        let m = self.sharpness;
        [0.5, 0.5 + 1.0 / m, 1.0 - 1.0 / m, 1.0]
    }
}

/// `(φ̃_β(1), φ̃′_β(1), φ̃″_β(1))` with `φ̃_β^{(j)}(1) = ∫ φ(u/X) e(−βu) (log u)^j du`.
pub fn mellin_moments(w: &TestWindow, beta: f64) -> [Complex64; 3] {
    let x = w.scale;
    let lx = x.ln();
    let cycles = (beta.abs() * x * 0.5).ceil() as usize;
    let mut breaks = Vec::new();
    let unit = w.unit_breaks();
    for pair in unit.windows(2) {
        let pieces = ((cycles as f64 * (pair[1] - pair[0]) * 2.0).ceil() as usize).max(4);
        for i in 0..pieces {
            breaks.push(pair[0] + (pair[1] - pair[0]) * i as f64 / pieces as f64);
        }
    }
    breaks.push(1.0);
    std::array::from_fn(|j| {
        let tol = Tolerance::abs(1e-13 * (lx.abs() + 1.0).powi(j as i32)).with_rel(1e-14);
        // substitute u = X v
        let r = integrate_with_breaks(
            |v: f64| e(-beta * x * v) * (w.unit(v) * (lx + v.ln()).powi(j as i32)),
            &breaks,
            tol.with_max_intervals(100_000),
        );
        r.value * x
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_and_plateau() {
        let w = make_bump(1000.0, 8.0).unwrap();
        assert_eq!(w.eval(400.0), 0.0);
        assert_eq!(w.eval(1000.0), 0.0);
        assert_eq!(w.eval(750.0), 1.0);
        assert_eq!(w.eval(625.0), 1.0);
        assert_eq!(w.eval(875.0), 1.0);
        for i in 0..=1000 {
            let v = w.unit(0.5 + 0.0005 * i as f64);
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(make_bump(1.0, 4.0).is_err());
        assert!(make_bump(0.0, 8.0).is_err());
    }

    #[test]
    fn ramp_is_antisymmetric() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((ramp(t) + ramp(1.0 - t) - 1.0).abs() < 1e-15);
        }
        assert_eq!(ramp(0.5), 0.5);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let w = make_bump(1.0, 8.0).unwrap();
        for v in [0.53, 0.57, 0.9, 0.96] {
            let d = w.unit_derivatives(v);
            let h = 1e-5;
            let fd1 = (w.unit(v + h) - w.unit(v - h)) / (2.0 * h);
            let fd2 = (w.unit(v + h) - 2.0 * w.unit(v) + w.unit(v - h)) / (h * h);
            assert!((d[0] - w.unit(v)).abs() < 1e-15);
            assert!((d[1] - fd1).abs() < 1e-5 * (1.0 + d[1].abs()), "{v}: {} vs {fd1}", d[1]);
            assert!((d[2] - fd2).abs() < 1e-3 * (1.0 + d[2].abs()), "{v}: {} vs {fd2}", d[2]);
            let fd3 = (w.unit_derivatives(v + h)[2] - w.unit_derivatives(v - h)[2]) / (2.0 * h);
            let fd4 = (w.unit_derivatives(v + h)[3] - w.unit_derivatives(v - h)[3]) / (2.0 * h);
            assert!((d[3] - fd3).abs() < 1e-5 * (1.0 + d[3].abs()));
            assert!((d[4] - fd4).abs() < 1e-5 * (1.0 + d[4].abs()));
        }
    }

    #[test]
    fn derivative_constants_are_small() {
        for m in [5.0, 8.0, 20.0] {
            let w = make_bump(2000.0, m).unwrap();
            assert!(w.derivative_constant(1, 10_000) <= 4.0);
            for j in 1..=4 {
                let c = w.derivative_constant(j, 10_000);
                assert!(c.is_finite() && c <= 8.0, "M={m} j={j}: c={c}");
            }
        }
    }

    #[test]
    fn zeroth_moment_is_plateau_width() {
        // ∫φ = 1/2 − 1/M because each ramp integrates to half its width
        for (x, m) in [(1000.0, 8.0), (2000.0, 5.0)] {
            let w = make_bump(x, m).unwrap();
            let [m0, _, _] = mellin_moments(&w, 0.0);
            assert!((m0.re - x * (0.5 - 1.0 / m)).abs() < 1e-9 * x, "{m0}");
            assert!(m0.im.abs() < 1e-12);
            assert!(m0.re > x / 2.0 - 2.0 * x / m && m0.re < x / 2.0);
        }
    }

    #[test]
    fn moments_against_direct_sums() {
        // plain trapezoid at fine resolution as an independent check
        let w = make_bump(1000.0, 8.0).unwrap();
        let moments = mellin_moments(&w, 0.013);
        let n = 200_000;
        let h = 500.0 / n as f64;
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        for i in 0..=n {
            let u = 500.0 + h * i as f64;
            let f = w.eval(u) * e(-0.013 * u);
            for (j, a) in acc.iter_mut().enumerate() {
                *a += f * u.ln().powi(j as i32) * h;
            }
        }
        for j in 0..3 {
            assert!((moments[j] - acc[j]).norm() < 1e-6 * 1000.0, "j={j}");
        }
    }

    #[test]
    fn large_beta_moment_decays() {
        let w = make_bump(1000.0, 8.0).unwrap();
        for beta in [0.01, 0.1, 0.5] {
            let m0 = mellin_moments(&w, beta)[0].norm();
            assert!(m0 <= 1000.0 / (1.0 + beta * 1000.0) * 4.0, "beta={beta}: {m0}");
        }
    }
}
