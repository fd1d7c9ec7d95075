//! Calibration of the coiling model from printed line scans.
//!
//! Three artifacts come out of a calibration run: the coil radius as a linear
//! function of nozzle height, the extrusion constant `G` (fit through the
//! origin), and the shear-thinning factor that corrects the radius for the
//! screw speed `alpha * V_F`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coilcore::{self, CoilError};
use crate::schema;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibError {
    #[error("invalid scan record: {0}")]
    Measurement(#[from] CoilError),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
    #[error("log-domain error: {0}")]
    LogDomain(String),
    #[error("no mean radius for height H={h} mm")]
    MissingHeight { h: f64 },
    #[error("H={h} mm outside the calibrated interval [{h_min}, {h_max}] mm")]
    Extrapolation { h: f64, h_min: f64, h_max: f64 },
}

pub type Result<T> = std::result::Result<T, CalibError>;

/// One measured printed line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineScanRecord {
    #[serde(rename = "H")]
    pub h: f64,
    pub alpha: f64,
    #[serde(rename = "V_F")]
    pub v_f: f64,
    #[serde(rename = "W")]
    pub w: f64,
    pub dx: f64,
    pub d: f64,
}

/// A scan reduced to coil radius and density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedScan {
    pub h: f64,
    pub alpha: f64,
    pub v_f: f64,
    pub d: f64,
    pub w: f64,
    pub rc: f64,
    pub n: f64,
}

impl ReducedScan {
    pub fn screw_speed(&self) -> f64 {
        self.alpha * self.v_f
    }
}

/// Coil radius and density of one scan.
pub fn reduce_scan(rec: &LineScanRecord) -> Result<(f64, f64)> {
    if rec.w < rec.d {
        return Err(CoilError::Negative {
            name: "W - d",
            value: rec.w - rec.d,
        }
        .into());
    }
    let rc = (rec.w - rec.d) / 2.0;
    let n = coilcore::n_from_spacing(rec.w, rec.dx, rec.d)?;
    Ok((rc, n))
}

pub fn reduce(rec: &LineScanRecord) -> Result<ReducedScan> {
    let (rc, n) = reduce_scan(rec)?;
    Ok(ReducedScan {
        h: rec.h,
        alpha: rec.alpha,
        v_f: rec.v_f,
        d: rec.d,
        w: rec.w,
        rc,
        n,
    })
}

/// Forward model: the scan a line printed with coil radius `rc` and density
/// `n` would produce.
pub fn scan_from_pattern(
    h: f64,
    alpha: f64,
    v_f: f64,
    rc: f64,
    n: f64,
    d: f64,
) -> Result<LineScanRecord> {
    let w = coilcore::coil_width(rc, d)?;
    Ok(LineScanRecord {
        h,
        alpha,
        v_f,
        w,
        dx: coilcore::spacing_from_n(w, n, d)?,
        d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightInterval {
    pub h_min: f64,
    pub h_max: f64,
}

impl HeightInterval {
    pub fn contains(&self, h: f64) -> bool {
        h >= self.h_min && h <= self.h_max
    }
}

impl Default for HeightInterval {
    fn default() -> Self {
        Self {
            h_min: 2.5,
            h_max: 15.0,
        }
    }
}

/// `R_c = slope * H + intercept`, valid on `[h_min, h_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcLine {
    pub slope: f64,
    pub intercept: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl RcLine {
    pub fn eval(&self, h: f64) -> f64 {
        self.slope * h + self.intercept
    }

    pub fn validity(&self) -> HeightInterval {
        HeightInterval {
            h_min: self.h_min,
            h_max: self.h_max,
        }
    }

    /// Height at which the line reaches radius `rc`.
    pub fn height_for(&self, rc: f64) -> f64 {
        (rc - self.intercept) / self.slope
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    OutsideValidity,
    InvalidMeasurement,
    ZeroRadius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exclusion {
    pub index: usize,
    pub reason: ExclusionReason,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusSample {
    pub h: f64,
    pub rc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub line: RcLine,
    pub rms_residual: f64,
    pub used: usize,
    pub excluded: Vec<Exclusion>,
}

/// Ordinary least squares line through `(H, R_c)` samples inside `validity`.
pub fn fit_rc_vs_height(samples: &[RadiusSample], validity: HeightInterval) -> Result<LineFit> {
    if !(validity.h_min < validity.h_max) {
        return Err(CalibError::Degenerate(format!(
            "empty validity interval [{}, {}]",
            validity.h_min, validity.h_max
        )));
    }
    let mut excluded = Vec::new();
    let mut used = Vec::new();
    for (index, s) in samples.iter().enumerate() {
        if validity.contains(s.h) {
            used.push(*s);
        } else {
            excluded.push(Exclusion {
                index,
                reason: ExclusionReason::OutsideValidity,
                detail: format!("H={} mm", s.h),
            });
        }
    }
    let mut distinct: Vec<f64> = used.iter().map(|s| s.h).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(CalibError::Insufficient(format!(
            "{} distinct heights inside [{}, {}] mm, need 2",
            distinct.len(),
            validity.h_min,
            validity.h_max
        )));
    }
    let n = used.len() as f64;
    let mh = used.iter().map(|s| s.h).sum::<f64>() / n;
    let mr = used.iter().map(|s| s.rc).sum::<f64>() / n;
    let sxx: f64 = used.iter().map(|s| (s.h - mh).powi(2)).sum();
    let sxy: f64 = used.iter().map(|s| (s.h - mh) * (s.rc - mr)).sum();
    if sxx <= f64::EPSILON * mh.abs().max(1.0) {
        return Err(CalibError::Degenerate("zero variance in H".into()));
    }
    let slope = sxy / sxx;
    let intercept = mr - slope * mh;
    let rms_residual = (used
        .iter()
        .map(|s| (s.rc - slope * s.h - intercept).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(LineFit {
        line: RcLine {
            slope,
            intercept,
            h_min: validity.h_min,
            h_max: validity.h_max,
        },
        rms_residual,
        used: used.len(),
        excluded,
    })
}

/// Mean coil radius at one calibrated height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightMean {
    pub h: f64,
    pub rc_mean: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RcTable(pub Vec<HeightMean>);

fn height_key(h: f64) -> i64 {
    (h * 1e6).round() as i64
}

impl RcTable {
    pub fn from_scans(scans: &[ReducedScan]) -> Self {
        let mut groups: BTreeMap<i64, (f64, f64, usize)> = BTreeMap::new();
        for s in scans {
            let e = groups.entry(height_key(s.h)).or_insert((s.h, 0.0, 0));
            e.1 += s.rc;
            e.2 += 1;
        }
        Self(
            groups
                .into_values()
                .map(|(h, sum, count)| HeightMean {
                    h,
                    rc_mean: sum / count as f64,
                    count,
                })
                .collect(),
        )
    }

    pub fn lookup(&self, h: f64) -> Option<f64> {
        let key = height_key(h);
        self.0
            .iter()
            .find(|m| height_key(m.h) == key)
            .map(|m| m.rc_mean)
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().map(|m| m.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GFit {
    pub g: f64,
    pub rms_rel_residual: f64,
    pub count: usize,
}

/// The coil density multiplier `alpha W / (2π R_c)`.
pub fn density_multiplier(alpha: f64, w: f64, rc: f64) -> f64 {
    alpha * w / (2.0 * PI * rc)
}

/// Slope through the origin of `N` against the coil density multiplier.
///
/// With `rc_table` the multiplier uses the mean radius per height (and the
/// matching width); without it every scan uses its own reduced radius.
pub fn fit_g(scans: &[ReducedScan], rc_table: Option<&RcTable>) -> Result<GFit> {
    let mut pairs = Vec::with_capacity(scans.len());
    for s in scans {
        let (rc, w) = match rc_table {
            Some(t) => {
                let rc = t.lookup(s.h).ok_or(CalibError::MissingHeight { h: s.h })?;
                (rc, 2.0 * rc + s.d)
            }
            None => (s.rc, s.w),
        };
        if rc > 0.0 {
            pairs.push((density_multiplier(s.alpha, w, rc), s.n));
        }
    }
    if pairs.is_empty() {
        return Err(CalibError::Insufficient(
            "no scans with a positive radius".into(),
        ));
    }
    let sxx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
    if sxx == 0.0 {
        return Err(CalibError::Degenerate("all-zero density multiplier".into()));
    }
    let sxy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
    let g = sxy / sxx;
    let rel: Vec<f64> = pairs
        .iter()
        .filter(|(_, y)| *y != 0.0)
        .map(|(x, y)| ((y - g * x) / y).powi(2))
        .collect();
    let rms_rel_residual = if rel.is_empty() {
        0.0
    } else {
        (rel.iter().sum::<f64>() / rel.len() as f64).sqrt()
    };
    Ok(GFit {
        g,
        rms_rel_residual,
        count: pairs.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightShear {
    pub h: f64,
    pub a: f64,
    pub rms_rel_error: f64,
    pub max_rel_error: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShearFit {
    pub a: f64,
    pub exponent: f64,
    pub per_height: Vec<HeightShear>,
}

/// Fits `a` in `R_c = a (alpha V_F)^(n-1) R̂_c` per height in log space and
/// averages over heights (unweighted).
pub fn fit_shear_thinning(
    scans: &[ReducedScan],
    rc_means: &RcTable,
    exponent: f64,
) -> Result<ShearFit> {
    let mut groups: BTreeMap<i64, (f64, Vec<(f64, f64)>)> = BTreeMap::new();
    for s in scans {
        let speed = s.screw_speed();
        if s.rc <= 0.0 || speed <= 0.0 {
            return Err(CalibError::LogDomain(format!(
                "R_c={} mm, alpha*V_F={} rad/s at H={} mm",
                s.rc, speed, s.h
            )));
        }
        let mean = rc_means
            .lookup(s.h)
            .ok_or(CalibError::MissingHeight { h: s.h })?;
        if mean <= 0.0 {
            return Err(CalibError::LogDomain(format!(
                "mean R_c={mean} at H={}",
                s.h
            )));
        }
        groups
            .entry(height_key(s.h))
            .or_insert_with(|| (s.h, Vec::new()))
            .1
            .push((s.rc / mean, speed));
    }
    if groups.is_empty() {
        return Err(CalibError::Insufficient(
            "no scans for the shear fit".into(),
        ));
    }
    let per_height: Vec<HeightShear> = groups
        .into_values()
        .map(|(h, pts)| {
            let m = pts.len() as f64;
            let log_a = pts
                .iter()
                .map(|(ratio, speed)| ratio.ln() - exponent * speed.ln())
                .sum::<f64>()
                / m;
            let a = log_a.exp();
            let errs: Vec<f64> = pts
                .iter()
                .map(|(ratio, speed)| (a * speed.powf(exponent) / ratio - 1.0).abs())
                .collect();
            HeightShear {
                h,
                a,
                rms_rel_error: (errs.iter().map(|e| e * e).sum::<f64>() / m).sqrt(),
                max_rel_error: errs.iter().copied().fold(0.0, f64::max),
                count: pts.len(),
            }
        })
        .collect();
    let a = per_height.iter().map(|p| p.a).sum::<f64>() / per_height.len() as f64;
    Ok(ShearFit {
        a,
        exponent,
        per_height,
    })
}

/// Shear-thinning correction of the coil radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShearModel {
    pub a: f64,
    /// Viscosity power-law exponent `n - 1` (≤ 0).
    pub exponent: f64,
    /// Screw speed (rad/s) at which the correction is 1: the geometric mean
    /// speed of the calibration set.
    pub reference_speed: f64,
}

impl ShearModel {
    pub fn correction(&self, speed: f64) -> f64 {
        (speed / self.reference_speed).powf(self.exponent)
    }
}

/// Fitted calibration, serialized as `infoam-calib/1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationModel {
    pub schema: String,
    pub rc_line: RcLine,
    /// Extruded length per rad of screw rotation (mm/rad).
    pub g: f64,
    pub shear: ShearModel,
    pub rc_means: RcTable,
    pub temperature: f64,
    /// Rope diameter of the scans (mm).
    pub d: f64,
    pub residuals: FitResiduals,
    pub records_used: usize,
    pub exclusions: Vec<Exclusion>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResiduals {
    pub rc_line_rms: f64,
    pub g_rms_rel: f64,
    pub shear_per_height: Vec<HeightShear>,
}

impl CalibrationModel {
    pub fn validity(&self) -> HeightInterval {
        self.rc_line.validity()
    }

    /// Calibrated heights inside the validity interval, ascending.
    pub fn calibrated_heights(&self) -> Vec<f64> {
        let v = self.validity();
        self.rc_means.heights().filter(|h| v.contains(*h)).collect()
    }

    pub fn check(&self) -> Result<()> {
        if !(self.rc_line.slope > 0.0) {
            return Err(CalibError::Degenerate(format!(
                "R_c line slope {} must be positive",
                self.rc_line.slope
            )));
        }
        if !(self.g > 0.0) {
            return Err(CalibError::Degenerate(format!(
                "G={} must be positive",
                self.g
            )));
        }
        if self.shear.exponent > 0.0 {
            return Err(CalibError::Degenerate(format!(
                "shear exponent {} must be <= 0",
                self.shear.exponent
            )));
        }
        if !(self.shear.reference_speed > 0.0) || !(self.rc_line.h_min < self.rc_line.h_max) {
            return Err(CalibError::Degenerate(
                "invalid reference speed or validity".into(),
            ));
        }
        Ok(())
    }
}

/// Coil radius at height `h` and screw speed `alpha * v_f`.
pub fn predict_rc(h: f64, alpha: f64, v_f: f64, model: &CalibrationModel) -> Result<f64> {
    let v = model.validity();
    if !v.contains(h) {
        return Err(CalibError::Extrapolation {
            h,
            h_min: v.h_min,
            h_max: v.h_max,
        });
    }
    let speed = alpha * v_f;
    if !(speed > 0.0) {
        return Err(CalibError::LogDomain(format!("screw speed {speed} rad/s")));
    }
    Ok(model.rc_line.eval(h) * model.shear.correction(speed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibConfig {
    pub validity: HeightInterval,
    /// Viscosity exponent `n - 1` from rheometry.
    pub exponent: f64,
    pub temperature: f64,
}

impl Default for CalibConfig {
    fn default() -> Self {
        Self {
            validity: HeightInterval::default(),
            exponent: -0.09,
            temperature: crate::DEFAULT_TEMPERATURE,
        }
    }
}

/// Full calibration from raw scan records. Unusable records are excluded
/// with a reason before anything is fitted.
pub fn calibrate(records: &[LineScanRecord], config: &CalibConfig) -> Result<CalibrationModel> {
    if records.is_empty() {
        return Err(CalibError::Insufficient("no scan records".into()));
    }
    let mut exclusions = Vec::new();
    let mut used = Vec::new();
    for (index, rec) in records.iter().enumerate() {
        match reduce(rec) {
            Err(e) => exclusions.push(Exclusion {
                index,
                reason: ExclusionReason::InvalidMeasurement,
                detail: e.to_string(),
            }),
            Ok(s) if !config.validity.contains(s.h) => exclusions.push(Exclusion {
                index,
                reason: ExclusionReason::OutsideValidity,
                detail: format!("H={} mm", s.h),
            }),
            Ok(s) if s.rc <= 0.0 || s.screw_speed() <= 0.0 => exclusions.push(Exclusion {
                index,
                reason: ExclusionReason::ZeroRadius,
                detail: format!("R_c={} mm, alpha*V_F={}", s.rc, s.screw_speed()),
            }),
            Ok(s) => used.push(s),
        }
    }
    if used.len() < 3 {
        return Err(CalibError::Insufficient(format!(
            "{} usable scans, need at least 3",
            used.len()
        )));
    }
    let d = used[0].d;
    if used.iter().any(|s| (s.d - d).abs() > 1e-12) {
        return Err(CalibError::Degenerate("scans mix nozzle diameters".into()));
    }

    let reference_speed =
        (used.iter().map(|s| s.screw_speed().ln()).sum::<f64>() / used.len() as f64).exp();
    let normalized: Vec<RadiusSample> = used
        .iter()
        .map(|s| RadiusSample {
            h: s.h,
            rc: s.rc * (reference_speed / s.screw_speed()).powf(config.exponent),
        })
        .collect();
    let line = fit_rc_vs_height(&normalized, config.validity)?;
    let rc_means = RcTable::from_scans(&used);
    let shear = fit_shear_thinning(&used, &rc_means, config.exponent)?;
    let g = fit_g(&used, None)?;

    let model = CalibrationModel {
        schema: schema::CALIB.to_string(),
        rc_line: line.line,
        g: g.g,
        shear: ShearModel {
            a: shear.a,
            exponent: config.exponent,
            reference_speed,
        },
        rc_means,
        temperature: config.temperature,
        d,
        residuals: FitResiduals {
            rc_line_rms: line.rms_residual,
            g_rms_rel: g.rms_rel_residual,
            shear_per_height: shear.per_height,
        },
        records_used: used.len(),
        exclusions,
    };
    model.check()?;
    Ok(model)
}

/// Ground-truth coiling behaviour used to synthesize scans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardModel {
    pub slope: f64,
    pub intercept: f64,
    pub g: f64,
    pub exponent: f64,
    pub reference_speed: f64,
    pub d: f64,
}

impl ForwardModel {
    pub fn rc(&self, h: f64, speed: f64) -> f64 {
        (self.slope * h + self.intercept) * (speed / self.reference_speed).powf(self.exponent)
    }

    /// Noiseless scan of a line printed at `(h, alpha, v_f)`.
    pub fn scan(&self, h: f64, alpha: f64, v_f: f64) -> Result<LineScanRecord> {
        let rc = self.rc(h, alpha * v_f);
        let w = coilcore::coil_width(rc, self.d)?;
        let n = coilcore::n_from_extrusion(alpha, w, rc, self.g)?;
        scan_from_pattern(h, alpha, v_f, rc, n, self.d)
    }
}

/// Geometric mean of `alpha * v_f` over a print design.
pub fn geometric_mean_speed(design: &[(f64, f64, f64)]) -> f64 {
    (design.iter().map(|(_, a, v)| (a * v).ln()).sum::<f64>() / design.len() as f64).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    fn rec(h: f64, alpha: f64, v_f: f64, rc: f64, n: f64) -> LineScanRecord {
        scan_from_pattern(h, alpha, v_f, rc, n, 0.4).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let dx = (4.4f64 * 4.4 + 0.4 * 0.4).sqrt();
        let r = LineScanRecord {
            h: 6.0,
            alpha: 10.0,
            v_f: 10.0,
            w: 4.4,
            dx,
            d: 0.4,
        };
        let (rc, n) = reduce_scan(&r).unwrap();
        assert!(close(rc, 2.0, 1e-15) && close(n, 1.0, 1e-14));
        let zero = LineScanRecord {
            w: 0.4,
            dx: 1.0,
            ..r
        };
        assert_eq!(reduce_scan(&zero).unwrap().0, 0.0);
        let bad = LineScanRecord { dx: 0.3, ..r };
        assert!(reduce_scan(&bad).is_err());
    }

    #[test]
    fn reduce_recovers_twelve_generated_records() {
        for i in 0..12 {
            let rc = 0.5 + 0.37 * i as f64;
            let n = 1.1 + 0.9 * i as f64;
            let (r2, n2) = reduce_scan(&rec(4.0, 20.0, 10.0, rc, n)).unwrap();
            assert!(close(r2, rc, 1e-12) && close(n2, n, 1e-12), "{i}");
        }
    }

    #[test]
    fn line_through_two_points() {
        let s = [
            RadiusSample { h: 2.0, rc: 1.0 },
            RadiusSample { h: 15.0, rc: 4.9 },
        ];
        let fit = fit_rc_vs_height(
            &s,
            HeightInterval {
                h_min: 2.0,
                h_max: 15.0,
            },
        )
        .unwrap();
        assert!(close(fit.line.slope, 0.3, 1e-14) && close(fit.line.intercept, 0.4, 1e-14));
        assert!(fit.rms_residual < 1e-14);
    }

    #[test]
    fn line_noiseless_recovery() {
        let s: Vec<_> = [2.0, 4.0, 6.0, 8.0, 10.0, 15.0]
            .iter()
            .map(|&h| RadiusSample {
                h,
                rc: 0.5 * h + 0.1,
            })
            .collect();
        let fit = fit_rc_vs_height(
            &s,
            HeightInterval {
                h_min: 2.0,
                h_max: 15.0,
            },
        )
        .unwrap();
        assert!((fit.line.slope - 0.5).abs() < 1e-12);
        assert!((fit.line.intercept - 0.1).abs() < 1e-12);
    }

    #[test]
    fn line_exclusions_are_accounted() {
        let s: Vec<_> = [1.0, 2.0, 4.0, 15.0, 17.0, 20.0]
            .iter()
            .map(|&h| RadiusSample {
                h,
                rc: 0.3 * h + 0.4,
            })
            .collect();
        let fit = fit_rc_vs_height(&s, HeightInterval::default()).unwrap();
        assert_eq!(fit.used + fit.excluded.len(), s.len());
        assert_eq!(fit.used, 2);
        assert!(fit
            .excluded
            .iter()
            .all(|e| e.reason == ExclusionReason::OutsideValidity));
        let one = [
            RadiusSample { h: 5.0, rc: 1.0 },
            RadiusSample { h: 5.0, rc: 1.1 },
        ];
        assert!(matches!(
            fit_rc_vs_height(&one, HeightInterval::default()),
            Err(CalibError::Insufficient(_))
        ));
    }

    #[test]
    fn g_single_point_and_recovery() {
        let s = reduce(&rec(6.0, 30.0, 10.0, 2.2, 4.0)).unwrap();
        let x = density_multiplier(s.alpha, s.w, s.rc);
        let fit = fit_g(&[s], None).unwrap();
        assert!(close(fit.g, 4.0 / x, 1e-14));

        let fm = ForwardModel {
            slope: 0.3,
            intercept: 0.4,
            g: 0.17,
            exponent: 0.0,
            reference_speed: 100.0,
            d: 0.4,
        };
        let scans: Vec<_> = (1..10)
            .map(|i| reduce(&fm.scan(2.0 + i as f64, 5.0 * i as f64, 10.0).unwrap()).unwrap())
            .collect();
        let fit = fit_g(&scans, None).unwrap();
        assert!((fit.g - 0.17).abs() < 1e-12);
        // constant radius per height: the mean-radius route agrees
        let table = RcTable::from_scans(&scans);
        assert!((fit_g(&scans, Some(&table)).unwrap().g - 0.17).abs() < 1e-12);
    }

    #[test]
    fn g_rejects_zero_regressor() {
        let mut s = reduce(&rec(6.0, 30.0, 10.0, 2.2, 4.0)).unwrap();
        s.alpha = 0.0;
        assert!(matches!(fit_g(&[s], None), Err(CalibError::Degenerate(_))));
    }

    #[test]
    fn shear_recovery_and_zero_exponent() {
        let table = RcTable(vec![
            HeightMean {
                h: 4.0,
                rc_mean: 1.6,
                count: 3,
            },
            HeightMean {
                h: 8.0,
                rc_mean: 2.8,
                count: 3,
            },
        ]);
        let mut scans = Vec::new();
        for (h, mean) in [(4.0, 1.6), (8.0, 2.8)] {
            for speed in [100.0, 250.0, 700.0] {
                let rc = 1.2 * f64::powf(speed, -0.09) * mean;
                let mut s = reduce(&rec(h, speed / 10.0, 10.0, rc, 3.0)).unwrap();
                s.rc = rc;
                scans.push(s);
            }
        }
        let fit = fit_shear_thinning(&scans, &table, -0.09).unwrap();
        assert!((fit.a - 1.2).abs() < 1e-10);
        assert!(fit.per_height.iter().all(|p| p.max_rel_error < 1e-12));

        // exponent 0 collapses to the radius ratio
        for s in scans.iter_mut() {
            s.rc = if s.h == 4.0 { 1.1 * 1.6 } else { 0.9 * 2.8 };
        }
        let fit = fit_shear_thinning(&scans, &table, 0.0).unwrap();
        assert!((fit.a - 1.0).abs() < 1e-12);

        scans[0].rc = 0.0;
        assert!(matches!(
            fit_shear_thinning(&scans, &table, -0.09),
            Err(CalibError::LogDomain(_))
        ));
    }

    fn design() -> Vec<(f64, f64, f64)> {
        let mut d = Vec::new();
        for h in [2.0, 4.0, 6.0, 8.0, 10.0, 15.0] {
            for alpha in [20.0, 40.0, 60.0] {
                for v_f in [5.0, 10.0, 20.0] {
                    d.push((h, alpha, v_f));
                }
            }
        }
        d
    }

    fn forward() -> ForwardModel {
        ForwardModel {
            slope: 0.3,
            intercept: 0.4,
            g: 0.17,
            exponent: -0.09,
            reference_speed: geometric_mean_speed(&design()),
            d: 0.4,
        }
    }

    fn config() -> CalibConfig {
        CalibConfig {
            validity: HeightInterval {
                h_min: 2.0,
                h_max: 15.0,
            },
            ..CalibConfig::default()
        }
    }

    #[test]
    fn calibrate_recovers_forward_model() {
        let fm = forward();
        let recs: Vec<_> = design()
            .iter()
            .map(|&(h, a, v)| fm.scan(h, a, v).unwrap())
            .collect();
        let m = calibrate(&recs, &config()).unwrap();
        assert!((m.rc_line.slope - 0.3).abs() < 1e-10);
        assert!((m.rc_line.intercept - 0.4).abs() < 1e-10);
        assert!((m.g - 0.17).abs() < 1e-10);
        assert!((m.shear.reference_speed / fm.reference_speed - 1.0).abs() < 1e-12);
        assert_eq!(m.records_used + m.exclusions.len(), recs.len());

        // refit on data generated from the fitted model
        let fm2 = ForwardModel {
            slope: m.rc_line.slope,
            intercept: m.rc_line.intercept,
            g: m.g,
            exponent: m.shear.exponent,
            reference_speed: m.shear.reference_speed,
            d: m.d,
        };
        let recs2: Vec<_> = design()
            .iter()
            .map(|&(h, a, v)| fm2.scan(h, a, v).unwrap())
            .collect();
        let m2 = calibrate(&recs2, &config()).unwrap();
        assert!((m2.rc_line.slope - m.rc_line.slope).abs() < 1e-10);
        assert!((m2.rc_line.intercept - m.rc_line.intercept).abs() < 1e-10);
        assert!((m2.g - m.g).abs() < 1e-10);
        assert!((m2.shear.a - m.shear.a).abs() < 1e-10);
    }

    #[test]
    fn predict_examples() {
        let fm = forward();
        let recs: Vec<_> = design()
            .iter()
            .map(|&(h, a, v)| fm.scan(h, a, v).unwrap())
            .collect();
        let m = calibrate(&recs, &config()).unwrap();
        let s_ref = m.shear.reference_speed;
        let at_ref = predict_rc(m.rc_line.h_min, s_ref / 10.0, 10.0, &m).unwrap();
        assert!((at_ref - m.rc_line.eval(m.rc_line.h_min)).abs() < 1e-12);
        let r1 = predict_rc(6.0, 30.0, 10.0, &m).unwrap();
        let r2 = predict_rc(6.0, 30.0, 20.0, &m).unwrap();
        assert!((r2 / r1 - 2f64.powf(-0.09)).abs() < 1e-12);
        assert!(matches!(
            predict_rc(17.0, 30.0, 10.0, &m),
            Err(CalibError::Extrapolation { .. })
        ));
    }

    #[test]
    fn calibrate_reports_exclusions() {
        let fm = forward();
        let mut recs: Vec<_> = design()
            .iter()
            .map(|&(h, a, v)| fm.scan(h, a, v).unwrap())
            .collect();
        recs.push(LineScanRecord { h: 18.0, ..recs[0] });
        recs.push(LineScanRecord { dx: 0.1, ..recs[1] });
        let m = calibrate(&recs, &config()).unwrap();
        assert_eq!(m.records_used + m.exclusions.len(), recs.len());
        let reasons: Vec<_> = m.exclusions.iter().map(|e| e.reason).collect();
        assert!(reasons.contains(&ExclusionReason::OutsideValidity));
        assert!(reasons.contains(&ExclusionReason::InvalidMeasurement));
        assert!(matches!(
            calibrate(&[], &config()),
            Err(CalibError::Insufficient(_))
        ));
    }
}
