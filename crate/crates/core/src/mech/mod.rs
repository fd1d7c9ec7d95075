//! Mechanical property prediction and analysis of test records.

mod maxwell;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use maxwell::{fit_maxwell, settling_time, steady_state_force, ForceUnit, MaxwellFit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MechError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("optimizer diverged: {0}")]
    Divergent(String),
}

pub type Result<T> = std::result::Result<T, MechError>;

/// Shore-A hardness to Young's modulus (MPa).
pub fn shore_a_modulus(shore_a: f64) -> f64 {
    0.486 * (0.0345 * shore_a).exp()
}

/// `p = p_s · C · (1 − φ/100)^n`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawModel {
    pub property: String,
    /// Property of the bulk material, in its own units.
    pub p_s: f64,
    pub c: f64,
    pub n: f64,
}

pub fn property_powerlaw(phi: f64, model: &PowerLawModel) -> Result<f64> {
    if !(0.0..=100.0).contains(&phi) {
        return Err(MechError::Domain(format!(
            "porosity {phi} outside [0, 100]"
        )));
    }
    let rel = 1.0 - phi / 100.0;
    if rel == 0.0 && model.n < 0.0 {
        return Err(MechError::Domain(
            "zero relative density with a negative exponent".into(),
        ));
    }
    Ok(model.p_s * model.c * rel.powf(model.n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub schema: String,
    pub model: PowerLawModel,
    pub r_squared: f64,
    pub count: usize,
}

/// Least squares of `ln(p/p_s)` on `ln(1 − φ/100)`.
pub fn fit_powerlaw(points: &[(f64, f64)], p_s: f64, property: &str) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(MechError::Insufficient(format!(
            "power law needs at least 3 points, got {}",
            points.len()
        )));
    }
    if !(p_s > 0.0) {
        return Err(MechError::Domain(format!(
            "reference value {p_s} must be positive"
        )));
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(phi, p) in points {
        if !(0.0..100.0).contains(&phi) || !(p > 0.0) {
            return Err(MechError::Domain(format!(
                "point (φ={phi}, p={p}) outside the fit domain"
            )));
        }
        xs.push((1.0 - phi / 100.0).ln());
        ys.push((p / p_s).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 1e-300 {
        return Err(MechError::Degenerate(
            "all points share one porosity".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(PowerLawFit {
        schema: crate::schema::POWERLAW.to_string(),
        model: PowerLawModel {
            property: property.to_string(),
            p_s,
            c: intercept.exp(),
            n: slope,
        },
        r_squared,
        count: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Loading,
    Unloading,
}

/// One row of a compression record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressionSample {
    pub strain: f64,
    /// Pa
    pub stress: f64,
    pub direction: Axis,
    pub branch: Branch,
}

/// A loading branch followed by an optional unloading branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionCurve {
    pub direction: Axis,
    pub strain: Vec<f64>,
    pub stress: Vec<f64>,
    /// Index of the first unloading sample.
    pub split: usize,
}

impl CompressionCurve {
    pub fn new(direction: Axis, loading: &[(f64, f64)], unloading: &[(f64, f64)]) -> Result<Self> {
        if loading.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(MechError::Degenerate(
                "loading strain must be strictly increasing".into(),
            ));
        }
        if loading
            .iter()
            .chain(unloading)
            .any(|(e, s)| !e.is_finite() || !s.is_finite())
        {
            return Err(MechError::Domain("non-finite sample".into()));
        }
        let (mut strain, mut stress): (Vec<f64>, Vec<f64>) = loading.iter().copied().unzip();
        strain.extend(unloading.iter().map(|p| p.0));
        stress.extend(unloading.iter().map(|p| p.1));
        Ok(Self {
            direction,
            strain,
            stress,
            split: loading.len(),
        })
    }

    /// Groups rows by direction in order of first appearance.
    pub fn from_samples(samples: &[CompressionSample]) -> Result<Vec<Self>> {
        let mut axes: Vec<Axis> = Vec::new();
        for s in samples {
            if !axes.contains(&s.direction) {
                axes.push(s.direction);
            }
        }
        axes.into_iter()
            .map(|axis| {
                let pick = |b: Branch| -> Vec<(f64, f64)> {
                    samples
                        .iter()
                        .filter(|s| s.direction == axis && s.branch == b)
                        .map(|s| (s.strain, s.stress))
                        .collect()
                };
                Self::new(axis, &pick(Branch::Loading), &pick(Branch::Unloading))
            })
            .collect()
    }

    pub fn loading(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.strain[..self.split]
            .iter()
            .copied()
            .zip(self.stress[..self.split].iter().copied())
    }

    pub fn unloading(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.strain[self.split..]
            .iter()
            .copied()
            .zip(self.stress[self.split..].iter().copied())
    }
}

/// Samples in each modulus window.
pub const MODULUS_WINDOW: usize = 12;

/// Slope of the loading curve at each strain level: a quadratic is fitted
/// to the twelve samples at or below the level and differentiated there.
pub fn segment_modulus(curve: &CompressionCurve, levels: &[f64]) -> Result<Vec<(f64, f64)>> {
    let loading: Vec<(f64, f64)> = curve.loading().collect();
    let Some(&(last, _)) = loading.last() else {
        return Err(MechError::Insufficient("empty loading branch".into()));
    };
    levels
        .iter()
        .map(|&level| {
            if !(level <= last) {
                return Err(MechError::Domain(format!(
                    "strain level {level} beyond loading data (max {last})"
                )));
            }
            let upto = loading.partition_point(|p| p.0 <= level);
            if upto < MODULUS_WINDOW {
                return Err(MechError::Insufficient(format!(
                    "strain level {level} has {upto} preceding samples, need {MODULUS_WINDOW}"
                )));
            }
            let window = &loading[upto - MODULUS_WINDOW..upto];
            Ok((level, quadratic_slope(window, level)?))
        })
        .collect()
}

/// Derivative at `x0` of the least-squares quadratic through `pts`.
fn quadratic_slope(pts: &[(f64, f64)], x0: f64) -> Result<f64> {
    let span = pts.last().unwrap().0 - pts[0].0;
    if !(span > 0.0) {
        return Err(MechError::Degenerate("window spans no strain".into()));
    }
    let a =
        nalgebra::DMatrix::from_fn(pts.len(), 3, |i, j| ((pts[i].0 - x0) / span).powi(j as i32));
    let b = nalgebra::DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let coef = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| MechError::Degenerate(e.to_string()))?;
    Ok(coef[1] / span)
}

fn trapezoid(pts: &[(f64, f64)]) -> f64 {
    pts.windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum()
}

fn interpolate(sorted: &[(f64, f64)], x: f64) -> f64 {
    let i = sorted.partition_point(|p| p.0 < x);
    if i < sorted.len() && sorted[i].0 == x {
        return sorted[i].1;
    }
    let (a, b) = (sorted[i - 1], sorted[i]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// Energy lost over a loading/unloading cycle as a percentage of the work
/// done while loading, integrated over the strain range both branches share.
pub fn dissipation_ratio(curve: &CompressionCurve) -> Result<f64> {
    let loading: Vec<(f64, f64)> = curve.loading().collect();
    let mut unloading: Vec<(f64, f64)> = curve.unloading().collect();
    if loading.len() < 2 || unloading.len() < 2 {
        return Err(MechError::Insufficient(
            "both branches need two samples".into(),
        ));
    }
    unloading.sort_by(|a, b| a.0.total_cmp(&b.0));
    if unloading.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(MechError::Degenerate(
            "repeated strain on the unloading branch".into(),
        ));
    }
    let lo = loading[0].0.max(unloading[0].0);
    let hi = loading.last().unwrap().0.min(unloading.last().unwrap().0);
    if !(hi > lo) {
        return Err(MechError::Degenerate(
            "branches share no strain range".into(),
        ));
    }
    let mut grid: Vec<f64> = vec![lo];
    grid.extend(loading.iter().map(|p| p.0).filter(|&x| x > lo && x < hi));
    grid.push(hi);
    let on = |branch: &[(f64, f64)]| -> Vec<(f64, f64)> {
        grid.iter().map(|&x| (x, interpolate(branch, x))).collect()
    };
    let a_load = trapezoid(&on(&loading));
    let a_unload = trapezoid(&on(&unloading));
    if !(a_load > 0.0) {
        return Err(MechError::Degenerate(
            "loading branch encloses no area".into(),
        ));
    }
    Ok(100.0 * (a_load - a_unload) / a_load)
}

/// Curvature (1/mm) of the circle through three points. Collinear points
/// give zero.
pub fn curvature_from_points(p1: [f64; 2], p2: [f64; 2], p3: [f64; 2]) -> Result<f64> {
    let mut p = [p1, p2, p3];
    // fixed evaluation order so every permutation gives the same bits
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let [a, b, c] = p;
    let d = |u: [f64; 2], v: [f64; 2]| (u[0] - v[0]).hypot(u[1] - v[1]);
    let (ab, bc, ca) = (d(a, b), d(b, c), d(c, a));
    let scale = ab.max(bc).max(ca);
    if ab.min(bc).min(ca) <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(MechError::Degenerate("coincident points".into()));
    }
    let cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    Ok(2.0 * cross.abs() / (ab * bc * ca))
}
