//! Coil geometry and porosity.
//!
//! Lengths are millimetres, the extrusion multiplier `alpha` is screw
//! rotation in rad per mm of printhead travel, and `g` is extruded length per
//! rad of screw rotation, so `g * alpha` is the dimensionless extruded length
//! per unit travel. Porosities are in percent.
//!
//! Every function here is pure.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoilError {
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("coil spacing dx={dx} mm must exceed the rope diameter d={d} mm")]
    UnresolvableSpacing { dx: f64, d: f64 },
    #[error("over-extrusion: solid volume exceeds spanned volume (porosity {phi:.3}%)")]
    OverExtrusion { phi: f64 },
    #[error("porosity {phi}% outside [0, 100]")]
    PorosityRange { phi: f64 },
    #[error("porosity {phi:.3}% infeasible; feasible interval is {lo:.3}%..{hi:.3}%")]
    InfeasibleTarget { phi: f64, lo: f64, hi: f64 },
    #[error("no coil pattern satisfies the regime limits for R_c={rc} mm")]
    EmptyRegime { rc: f64 },
    #[error("porosity inversion did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

pub type Result<T> = std::result::Result<T, CoilError>;

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(CoilError::Negative { name, value })
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CoilError::NonPositive { name, value })
    }
}

/// User-settable printer state for one deposition condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    /// Nozzle height above the deposition surface (mm).
    pub h: f64,
    /// Extrusion multiplier (rad/mm).
    pub alpha: f64,
    /// Printhead speed (mm/s).
    pub v_f: f64,
    /// Nozzle diameter (mm).
    pub d: f64,
    /// Nozzle temperature (°C).
    pub temperature: f64,
}

impl ProcessParams {
    pub fn new(h: f64, alpha: f64, v_f: f64, d: f64, temperature: f64) -> Result<Self> {
        non_negative("H", h)?;
        non_negative("alpha", alpha)?;
        positive("V_F", v_f)?;
        positive("d", d)?;
        Ok(Self {
            h,
            alpha,
            v_f,
            d,
            temperature,
        })
    }

    /// Screw rotational speed (rad/s).
    pub fn screw_speed(&self) -> f64 {
        self.alpha * self.v_f
    }
}

/// Geometry of one row of deposited coils.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoilPattern {
    /// Coil radius (mm).
    pub rc: f64,
    /// Pattern width (mm).
    pub w: f64,
    /// Coils per outer coil diameter.
    pub n: f64,
    /// Stacking angle (rad).
    pub theta: f64,
    /// Coil row height (mm).
    pub h_c: f64,
}

impl CoilPattern {
    /// Pattern for coil radius `rc` and density `n` of a rope of diameter `d`.
    pub fn new(rc: f64, n: f64, d: f64) -> Result<Self> {
        let w = coil_width(rc, d)?;
        non_negative("N", n)?;
        Ok(Self {
            rc,
            w,
            n,
            theta: stacking_angle(w, n, d),
            h_c: coil_height(w, n, d)?,
        })
    }
}

/// Void fraction target in percent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PorosityTarget(f64);

impl PorosityTarget {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_finite() && (0.0..100.0).contains(&phi) {
            Ok(Self(phi))
        } else {
            Err(CoilError::PorosityRange { phi })
        }
    }

    pub fn percent(self) -> f64 {
        self.0
    }

    pub fn solid_fraction(self) -> f64 {
        1.0 - self.0 / 100.0
    }
}

impl TryFrom<f64> for PorosityTarget {
    type Error = CoilError;
    fn try_from(phi: f64) -> Result<Self> {
        Self::new(phi)
    }
}

impl From<PorosityTarget> for f64 {
    fn from(p: PorosityTarget) -> f64 {
        p.0
    }
}

/// Pattern width `W = 2 R_c + d`.
pub fn coil_width(rc: f64, d: f64) -> Result<f64> {
    non_negative("R_c", rc)?;
    positive("d", d)?;
    Ok(2.0 * rc + d)
}

/// Coil density from the measured distance `dx` between neighbouring coils.
pub fn n_from_spacing(w: f64, dx: f64, d: f64) -> Result<f64> {
    non_negative("W", w)?;
    positive("d", d)?;
    non_negative("dx", dx)?;
    if dx <= d {
        return Err(CoilError::UnresolvableSpacing { dx, d });
    }
    Ok((w * w / (dx * dx - d * d)).sqrt())
}

/// Inverse of [`n_from_spacing`]: the coil spacing produced by density `n`.
pub fn spacing_from_n(w: f64, n: f64, d: f64) -> Result<f64> {
    non_negative("W", w)?;
    positive("N", n)?;
    positive("d", d)?;
    Ok((w * w / (n * n) + d * d).sqrt())
}

/// Coil density set by extrusion: extruded length over one pattern width
/// divided by the coil circumference.
pub fn n_from_extrusion(alpha: f64, w: f64, rc: f64, g: f64) -> Result<f64> {
    non_negative("alpha", alpha)?;
    non_negative("W", w)?;
    non_negative("G", g)?;
    positive("R_c", rc)?;
    Ok(g * alpha * w / (2.0 * PI * rc))
}

/// Extrusion multiplier giving coil density `n` (inverse of [`n_from_extrusion`]).
pub fn alpha_for_density(n: f64, w: f64, rc: f64, g: f64) -> Result<f64> {
    non_negative("N", n)?;
    positive("W", w)?;
    positive("R_c", rc)?;
    positive("G", g)?;
    Ok(2.0 * PI * rc * n / (g * w))
}

/// `theta = atan(N d / W)`.
pub fn stacking_angle(w: f64, n: f64, d: f64) -> f64 {
    (n * d).atan2(w)
}

/// Height of a coil row modelled as a tilted rectangle with rounded corners.
pub fn coil_height(w: f64, n: f64, d: f64) -> Result<f64> {
    positive("W", w)?;
    non_negative("N", n)?;
    positive("d", d)?;
    let s = stacking_angle(w, n, d).sin();
    Ok(w * s + (1.0 - s) * d)
}

/// Porosity of a coil scaffold: extruded volume over spanned volume `W h_c`.
pub fn porosity_estimate(alpha: f64, g: f64, d: f64, w: f64, h_c: f64) -> Result<f64> {
    non_negative("alpha", alpha)?;
    non_negative("G", g)?;
    positive("d", d)?;
    positive("W", w)?;
    positive("h_c", h_c)?;
    let phi = 100.0 * (1.0 - g * alpha * PI * d * d / (4.0 * w * h_c));
    if phi < 0.0 {
        Err(CoilError::OverExtrusion { phi })
    } else {
        Ok(phi)
    }
}

/// Porosity of the scaffold with coil radius `rc` and density `n`. The
/// extrusion constant cancels once `alpha` is expressed through `n`.
pub fn porosity_at_density(rc: f64, n: f64, d: f64) -> Result<f64> {
    positive("R_c", rc)?;
    let p = CoilPattern::new(rc, n, d)?;
    let phi = 100.0 * (1.0 - PI * PI * rc * n * d * d / (2.0 * p.w * p.w * p.h_c));
    if phi < 0.0 {
        Err(CoilError::OverExtrusion { phi })
    } else {
        Ok(phi)
    }
}

/// Density relation for a porous solid filled with a negligible-density fluid.
pub fn density_from_porosity(phi: f64, rho_bulk: f64) -> Result<f64> {
    if !(0.0..=100.0).contains(&phi) {
        return Err(CoilError::PorosityRange { phi });
    }
    positive("rho_bulk", rho_bulk)?;
    Ok(rho_bulk * (1.0 - phi / 100.0))
}

/// Exact inverse of [`density_from_porosity`].
pub fn porosity_from_density(rho: f64, rho_bulk: f64) -> Result<f64> {
    positive("rho_bulk", rho_bulk)?;
    if !(0.0..=rho_bulk).contains(&rho) {
        return Err(CoilError::Negative {
            name: "rho",
            value: rho,
        });
    }
    Ok(100.0 * (1.0 - rho / rho_bulk))
}

/// Bounds on the coil density that keep deposition in the coiling regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeLimits {
    /// Lowest admissible coil density (inclusive).
    pub n_min: f64,
    /// Coil height at which the stack reaches the nozzle (exclusive), i.e.
    /// `kappa * H`. `None` leaves the height unbounded.
    pub max_height: Option<f64>,
}

impl RegimeLimits {
    pub const fn unbounded() -> Self {
        Self {
            n_min: 0.0,
            max_height: None,
        }
    }

    pub fn for_nozzle_height(h: f64, kappa: f64) -> Self {
        Self {
            n_min: 1.0,
            max_height: Some(kappa * h),
        }
    }
}

/// Porosities reachable under some [`RegimeLimits`]. `hi` is attained at the
/// lowest density; `lo` is an open bound when the height limit binds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PorosityInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_inclusive: bool,
}

impl PorosityInterval {
    pub fn contains(&self, phi: f64) -> bool {
        let above = if self.lo_inclusive {
            phi >= self.lo
        } else {
            phi > self.lo
        };
        above && phi <= self.hi
    }
}

/// Largest coil density whose row height stays below `max_height`, or `None`
/// when every density fits.
pub fn max_density_for_height(w: f64, d: f64, max_height: f64) -> Option<f64> {
    if max_height >= w {
        return None;
    }
    if max_height <= d {
        return Some(0.0);
    }
    let s = (max_height - d) / (w - d);
    Some(w * s.asin().tan() / d)
}

/// Porosity interval reachable at coil radius `rc`.
pub fn feasible_porosity_interval(
    rc: f64,
    d: f64,
    limits: &RegimeLimits,
) -> Result<PorosityInterval> {
    let w = coil_width(positive("R_c", rc)?, d)?;
    let hi = porosity_at_density(rc, limits.n_min, d).map_err(|_| CoilError::EmptyRegime { rc })?;
    match limits
        .max_height
        .and_then(|m| max_density_for_height(w, d, m))
    {
        None => Ok(PorosityInterval {
            lo: 0.0,
            hi,
            lo_inclusive: true,
        }),
        Some(n_max) if n_max <= limits.n_min => Err(CoilError::EmptyRegime { rc }),
        Some(n_max) => {
            let lo = match porosity_at_density(rc, n_max, d) {
                Ok(phi) => phi,
                Err(CoilError::OverExtrusion { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            Ok(PorosityInterval {
                lo,
                hi,
                lo_inclusive: false,
            })
        }
    }
}

const SOLVE_MAX_ITER: usize = 100;
const SOLVE_TOL: f64 = 1e-11;

struct PorosityCurve {
    w: f64,
    d: f64,
    /// `G π d² / (4 W)`
    k: f64,
    /// `d tan(theta) / alpha = G d / (2π R_c)`
    c: f64,
}

impl PorosityCurve {
    fn new(rc: f64, d: f64, g: f64) -> Self {
        let w = 2.0 * rc + d;
        Self {
            w,
            d,
            k: g * PI * d * d / (4.0 * w),
            c: g * d / (2.0 * PI * rc),
        }
    }

    fn height(&self, alpha: f64) -> f64 {
        let x = self.c * alpha;
        let s = x / (1.0 + x * x).sqrt();
        self.d + (self.w - self.d) * s
    }

    fn phi(&self, alpha: f64) -> f64 {
        100.0 * (1.0 - self.k * alpha / self.height(alpha))
    }

    fn dphi(&self, alpha: f64) -> f64 {
        let x = self.c * alpha;
        let h = self.height(alpha);
        let dh = (self.w - self.d) * self.c / (1.0 + x * x).powf(1.5);
        -100.0 * self.k * (h - alpha * dh) / (h * h)
    }
}

/// Extrusion multiplier that produces porosity `phi` at coil radius `rc`,
/// with the coil height following the density the multiplier sets.
///
/// Porosity decreases strictly with `alpha`, so a damped Newton iteration
/// inside a shrinking bisection bracket always converges.
pub fn solve_alpha_for_porosity(phi: f64, rc: f64, d: f64, g: f64) -> Result<(f64, CoilPattern)> {
    if !(phi.is_finite() && (0.0..=100.0).contains(&phi)) {
        return Err(CoilError::PorosityRange { phi });
    }
    positive("R_c", rc)?;
    positive("d", d)?;
    positive("G", g)?;
    if phi == 100.0 {
        return Ok((0.0, CoilPattern::new(rc, 0.0, d)?));
    }
    let curve = PorosityCurve::new(rc, d, g);
    // h_c >= d, so the flat-row estimate never overshoots the target.
    let mut lo = (1.0 - phi / 100.0) * 4.0 * curve.w / (g * PI * d);
    let mut hi = lo.max(1e-12) * 2.0;
    while curve.phi(hi) > phi {
        lo = hi;
        hi *= 2.0;
    }
    let mut alpha = lo;
    for _ in 0..SOLVE_MAX_ITER {
        let f = curve.phi(alpha) - phi;
        if f.abs() < SOLVE_TOL {
            let n = n_from_extrusion(alpha, curve.w, rc, g)?;
            return Ok((alpha, CoilPattern::new(rc, n, d)?));
        }
        if f > 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let step = alpha - f / curve.dphi(alpha);
        alpha = if step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let f = curve.phi(alpha) - phi;
    if f.abs() <= 1e-9 {
        let n = n_from_extrusion(alpha, curve.w, rc, g)?;
        Ok((alpha, CoilPattern::new(rc, n, d)?))
    } else {
        Err(CoilError::NoConvergence {
            iterations: SOLVE_MAX_ITER,
        })
    }
}

/// [`solve_alpha_for_porosity`] restricted to the coiling regime.
pub fn solve_alpha_within(
    phi: f64,
    rc: f64,
    d: f64,
    g: f64,
    limits: &RegimeLimits,
) -> Result<(f64, CoilPattern)> {
    let interval = feasible_porosity_interval(rc, d, limits)?;
    if !interval.contains(phi) {
        return Err(CoilError::InfeasibleTarget {
            phi,
            lo: interval.lo,
            hi: interval.hi,
        });
    }
    solve_alpha_for_porosity(phi, rc, d, g)
}
