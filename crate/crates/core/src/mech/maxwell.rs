//! One-term Maxwell relaxation, `F(t) = (K0 + K1·exp(−t/τ))·F_max`.
//!
//! For fixed τ the model is linear in K0 and K1, so the fit searches τ
//! alone: a log-spaced grid to find the basin, golden-section search inside
//! it, then a few Levenberg–Marquardt steps on all three parameters.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::{MechError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForceUnit {
    Newton,
    GramForce,
}

impl ForceUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            ForceUnit::Newton => "N",
            ForceUnit::GramForce => "gf",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxwellFit {
    pub k0: f64,
    pub k1: f64,
    /// s
    pub tau1: f64,
    pub f_max: f64,
    pub unit: ForceUnit,
    /// False when the trace does not relax, so any τ fits equally well.
    pub tau_identifiable: bool,
    /// Root-mean-square residual in force units.
    pub rms_residual: f64,
    pub samples: usize,
}

impl MaxwellFit {
    pub fn force(&self, t: f64) -> f64 {
        (self.k0 + self.k1 * (-t / self.tau1).exp()) * self.f_max
    }
}

/// Time after the peak until the force stays within 5% of `K0·F_max`.
pub fn settling_time(fit: &MaxwellFit) -> f64 {
    if fit.k1 <= 0.05 * fit.k0 {
        0.0
    } else {
        fit.tau1 * (fit.k1 / (0.05 * fit.k0)).ln()
    }
}

pub fn steady_state_force(fit: &MaxwellFit) -> f64 {
    fit.k0 * fit.f_max
}

const MIN_SAMPLES: usize = 10;
const GRID_PER_DECADE: usize = 8;

struct Trace {
    t: Vec<f64>,
    y: Vec<f64>,
}

impl Trace {
    /// Best (K0, K1) for fixed τ with K1 ≥ 0, and the residual sum of squares.
    fn linear(&self, tau: f64) -> (f64, f64, f64) {
        let n = self.t.len() as f64;
        let (mut su, mut suu, mut sy, mut suy) = (0.0, 0.0, 0.0, 0.0);
        for (&t, &y) in self.t.iter().zip(&self.y) {
            let u = (-t / tau).exp();
            su += u;
            suu += u * u;
            sy += y;
            suy += u * y;
        }
        let det = n * suu - su * su;
        let (mut k0, mut k1) = if det > 1e-14 * n * suu {
            ((suu * sy - su * suy) / det, (n * suy - su * sy) / det)
        } else {
            (sy / n, 0.0)
        };
        if k1 < 0.0 {
            k0 = sy / n;
            k1 = 0.0;
        }
        (k0, k1, self.sse(k0, k1, tau))
    }

    /// Best K0 for fixed τ under K0 + K1 = 1.
    fn anchored(&self, tau: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (&t, &y) in self.t.iter().zip(&self.y) {
            let u = (-t / tau).exp();
            let v = 1.0 - u;
            num += v * (y - u);
            den += v * v;
        }
        let k0 = if den > 0.0 { num / den } else { 1.0 };
        self.sse(k0, 1.0 - k0, tau)
    }

    fn sse(&self, k0: f64, k1: f64, tau: f64) -> f64 {
        self.t
            .iter()
            .zip(&self.y)
            .map(|(&t, &y)| (k0 + k1 * (-t / tau).exp() - y).powi(2))
            .sum()
    }
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Levenberg–Marquardt on (K0, K1, ln τ).
fn polish(trace: &Trace, start: (f64, f64, f64)) -> (f64, f64, f64) {
    let mut p = Vector3::new(start.0, start.1, start.2.ln());
    let mut cost = trace.sse(p[0], p[1], p[2].exp());
    let mut lambda = 1e-3;
    for _ in 0..100 {
        let tau = p[2].exp();
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&t, &y) in trace.t.iter().zip(&trace.y) {
            let u = (-t / tau).exp();
            let r = p[0] + p[1] * u - y;
            let j = Vector3::new(1.0, u, p[1] * u * t / tau);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        let mut improved = false;
        for _ in 0..20 {
            let mut a = jtj;
            for i in 0..3 {
                a[(i, i)] *= 1.0 + lambda;
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let q = p + step;
            let c = trace.sse(q[0], q[1], q[2].exp());
            if c.is_finite() && c <= cost && q[1] >= 0.0 {
                let done = cost - c <= 1e-30 + 1e-16 * cost;
                p = q;
                cost = c;
                lambda = (lambda / 10.0).max(1e-12);
                improved = !done;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (p[0], p[1], p[2].exp())
}

/// Fits a relaxation trace that starts at the peak force. Times are taken
/// relative to the first sample, whose force is `F_max`.
pub fn fit_maxwell(trace: &[(f64, f64)], unit: ForceUnit) -> Result<MaxwellFit> {
    if trace.len() < MIN_SAMPLES {
        return Err(MechError::Insufficient(format!(
            "relaxation fit needs at least {MIN_SAMPLES} samples, got {}",
            trace.len()
        )));
    }
    if trace.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(MechError::Degenerate(
            "time must be strictly increasing".into(),
        ));
    }
    if trace.iter().any(|p| !(p.1 > 0.0) || !p.0.is_finite()) {
        return Err(MechError::Domain(
            "forces must be positive and finite".into(),
        ));
    }
    let (t0, f_max) = trace[0];
    let tr = Trace {
        t: trace.iter().map(|p| p.0 - t0).collect(),
        y: trace.iter().map(|p| p.1 / f_max).collect(),
    };
    let duration = *tr.t.last().unwrap();
    let dt = tr.t[1];
    let spread = tr.y.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - tr.y.iter().fold(f64::INFINITY, |a, &b| a.min(b));

    let rms = |k0: f64, k1: f64, tau: f64| (tr.sse(k0, k1, tau) / tr.t.len() as f64).sqrt() * f_max;
    if spread <= 1e-12 {
        let k0 = tr.y.iter().sum::<f64>() / tr.y.len() as f64;
        return Ok(MaxwellFit {
            k0,
            k1: 0.0,
            tau1: duration,
            f_max,
            unit,
            tau_identifiable: false,
            rms_residual: rms(k0, 0.0, duration),
            samples: trace.len(),
        });
    }

    // grid from a tenth of the sampling interval to ten trace lengths
    let (lo, hi) = ((dt / 10.0).ln(), (duration * 10.0).ln());
    let steps = (((hi - lo) / std::f64::consts::LN_10) * GRID_PER_DECADE as f64).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let anchored_best = grid
        .iter()
        .enumerate()
        .min_by(|a, b| tr.anchored(a.1.exp()).total_cmp(&tr.anchored(b.1.exp())))
        .map(|(i, _)| i)
        .unwrap();
    let free = |s: f64| tr.linear(s.exp()).2;
    let free_best = grid
        .iter()
        .enumerate()
        .min_by(|a, b| free(*a.1).total_cmp(&free(*b.1)))
        .map(|(i, _)| i)
        .unwrap();
    let mut best = None;
    for i in [anchored_best, free_best] {
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(grid.len() - 1)];
        let s = golden(free, a, b);
        let (k0, k1, _) = tr.linear(s.exp());
        let (k0, k1, tau) = polish(&tr, (k0, k1, s.exp()));
        let cost = tr.sse(k0, k1, tau);
        if best.is_none_or(|(_, _, _, c)| cost < c) {
            best = Some((k0, k1, tau, cost));
        }
    }
    let (k0, k1, tau1, _) = best.unwrap();
    if !(k0.is_finite() && k1.is_finite() && tau1.is_finite() && tau1 > 0.0) {
        return Err(MechError::Divergent(format!("K0={k0}, K1={k1}, τ1={tau1}")));
    }
    if !(k0 > 0.0) {
        return Err(MechError::Divergent(format!(
            "non-positive steady-state fraction K0={k0}"
        )));
    }
    let identifiable = k1 > 1e-9 && tau1 < duration * 10.0 * (1.0 - 1e-9);
    Ok(MaxwellFit {
        k0,
        k1,
        tau1,
        f_max,
        unit,
        tau_identifiable: identifiable,
        rms_residual: rms(k0, k1, tau1),
        samples: trace.len(),
    })
}
