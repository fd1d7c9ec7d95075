//! Layer planning for graded-porosity parts.
//!
//! Every non-dense slab of a part is printed as a coil scaffold whose
//! porosity is the highest region porosity of the part. Regions that need
//! less porosity get extra material plotted into the scaffold with the nozzle
//! lowered to one bead diameter above the layer base. Slabs made only of
//! zero-porosity regions are plotted dense in layers one bead tall.

mod builtin;
mod fill;
mod part;
mod report;
mod toolpath;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calib::{self, CalibError, CalibrationModel};
use crate::coilcore::{self, CoilError, CoilPattern, RegimeLimits};
use crate::geometry::{self, Area, Point};
use crate::schema;

pub use builtin::{builtin_part, Builtin, BuiltinKind};
pub use fill::{coil_rows, dense_rows, CoilRows};
pub use part::{
    BoundingBox, HeightPolicy, LayerEntry, PartDefaults, PartSpec, Region, Role, Shape,
};
pub use report::{plan_report, LayerReport, PlanReport, ReportTotals};
pub use toolpath::{build_toolpath, Segment, SegmentKind, Toolpath, ToolpathError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid part: {0}")]
    Spec(String),
    #[error(
        "scaffold porosity {phi:.3}% infeasible at H={h} mm; feasible interval {lo:.3}%..{hi:.3}%"
    )]
    Infeasible { phi: f64, h: f64, lo: f64, hi: f64 },
    #[error("scaffold porosity {phi:.3}% infeasible at every calibrated height ({intervals})")]
    NoFeasibleHeight { phi: f64, intervals: String },
    #[error("layer entry {entry} region {region} is {width:.3} mm wide; minimum feature size is W={min:.3} mm")]
    FeatureTooSmall {
        entry: usize,
        region: usize,
        width: f64,
        min: f64,
    },
    #[error("coiling regime violated at H={h} mm: {detail}")]
    Regime { h: f64, detail: String },
    #[error(transparent)]
    Calib(#[from] CalibError),
    #[error(transparent)]
    Coil(#[from] CoilError),
}

pub type Result<T> = std::result::Result<T, PlanError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    /// Nozzle clearance factor: the coil stack must stay below `kappa * H`.
    pub kappa: f64,
    /// Lowest admissible coil density.
    pub n_min: f64,
    /// Smallest dense-plot line pitch as a multiple of the bead diameter.
    pub min_plot_pitch: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            n_min: 1.0,
            min_plot_pitch: 0.5,
        }
    }
}

impl PlannerConfig {
    fn limits(&self, h: f64) -> RegimeLimits {
        RegimeLimits {
            n_min: self.n_min,
            max_height: Some(self.kappa * h),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum RegimeViolation {
    /// The stacked coil would reach the nozzle.
    NozzleClearance { h_c: f64, limit: f64 },
    /// Coils sparser than one per diameter do not form a connected row.
    SubUnityDensity { n: f64, n_min: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeDecision {
    pub ok: bool,
    pub binding: Option<RegimeViolation>,
}

/// Accumulation-regime guard for a coil pattern printed at nozzle height `h`.
pub fn check_coiling_regime(h: f64, pattern: &CoilPattern, kappa: f64) -> RegimeDecision {
    let limit = kappa * h;
    let binding = if pattern.h_c >= limit {
        Some(RegimeViolation::NozzleClearance {
            h_c: pattern.h_c,
            limit,
        })
    } else if pattern.n < 1.0 {
        Some(RegimeViolation::SubUnityDensity {
            n: pattern.n,
            n_min: 1.0,
        })
    } else {
        None
    };
    RegimeDecision {
        ok: binding.is_none(),
        binding,
    }
}

/// One row of coils.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoilPass {
    pub region: usize,
    pub path: Vec<Point>,
    /// Nozzle height above the layer base (mm).
    pub h: f64,
    pub alpha: f64,
    pub v_f: f64,
    pub pattern: CoilPattern,
}

/// One plotted line with the nozzle lowered into the scaffold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensePass {
    pub region: usize,
    pub path: Vec<Point>,
    /// Nozzle height above the layer base (mm).
    pub plot_height: f64,
    /// Extruded length per unit travel.
    pub lambda: f64,
    pub v_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub region: usize,
    pub role: Role,
    pub phi: f64,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    Scaffold,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerPlan {
    pub index: usize,
    pub entry: usize,
    pub kind: LayerKind,
    pub z_base: f64,
    pub layer_height: f64,
    pub regions: Vec<RegionSummary>,
    pub coil_passes: Vec<CoilPass>,
    pub dense_passes: Vec<DensePass>,
}

impl LayerPlan {
    pub fn spanned_volume(&self) -> f64 {
        self.regions.iter().map(|r| r.area).sum::<f64>() * self.layer_height
    }

    /// Area-weighted target porosity of the layer.
    pub fn target_porosity(&self) -> f64 {
        let total: f64 = self.regions.iter().map(|r| r.area).sum();
        if total == 0.0 {
            return 100.0;
        }
        let solid: f64 = self
            .regions
            .iter()
            .map(|r| (1.0 - r.phi / 100.0) * r.area)
            .sum();
        100.0 * (1.0 - solid / total)
    }

    /// Distinct nozzle heights (absolute z) used by the layer's passes.
    pub fn nozzle_heights(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self
            .coil_passes
            .iter()
            .map(|p| self.z_base + p.h)
            .chain(
                self.dense_passes
                    .iter()
                    .map(|p| self.z_base + p.plot_height),
            )
            .collect();
        z.sort_by(f64::total_cmp);
        z.dedup();
        z
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSettings {
    /// Bead diameter used for all volume accounting (mm).
    pub d: f64,
    /// Extrusion constant (mm/rad).
    pub g: f64,
    pub v_f: f64,
    pub temperature: f64,
    pub kappa: f64,
    /// Part-level nozzle height, absent for all-dense parts.
    pub h: Option<f64>,
    /// Porosity of the coil scaffold (%).
    pub scaffold_phi: Option<f64>,
    pub alternate_rows: bool,
}

/// A planned part, serialized as `infoam-plan/1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub schema: String,
    pub name: String,
    pub bbox: BoundingBox,
    pub settings: PlanSettings,
    /// Designed z range of every layer entry of the part.
    pub entries: Vec<EntryExtent>,
    pub layers: Vec<LayerPlan>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryExtent {
    pub z_min: f64,
    pub z_max: f64,
}

impl Plan {
    pub fn from_json(text: &str) -> std::result::Result<Self, schema::SchemaError> {
        schema::from_json(text, schema::PLAN)
    }

    pub fn bead_area(&self) -> f64 {
        PI * self.settings.d * self.settings.d / 4.0
    }
}

/// Coil scaffold settled for a nozzle height, with the radius consistent
/// with the screw speed it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaffold {
    pub h: f64,
    pub alpha: f64,
    pub pattern: CoilPattern,
}

const SETTLE_MAX_ITER: usize = 100;

/// Solves the extrusion multiplier for porosity `phi` at height `h`. The coil
/// radius depends on the screw speed through the shear-thinning correction,
/// so radius and multiplier are iterated to a fixed point.
pub fn settle_scaffold(
    phi: f64,
    h: f64,
    calib: &CalibrationModel,
    d: f64,
    v_f: f64,
    cfg: &PlannerConfig,
) -> Result<Scaffold> {
    // start from the radius at the reference screw speed
    let mut rc = calib::predict_rc(h, calib.shear.reference_speed / v_f, v_f, calib)?;
    let limits = cfg.limits(h);
    for _ in 0..SETTLE_MAX_ITER {
        let (alpha, pattern) = match coilcore::solve_alpha_within(phi, rc, d, calib.g, &limits) {
            Ok(v) => v,
            Err(CoilError::InfeasibleTarget { phi, lo, hi }) => {
                return Err(PlanError::Infeasible { phi, h, lo, hi })
            }
            Err(CoilError::EmptyRegime { .. }) => {
                return Err(PlanError::Infeasible {
                    phi,
                    h,
                    lo: f64::NAN,
                    hi: f64::NAN,
                })
            }
            Err(e) => return Err(e.into()),
        };
        let next = calib::predict_rc(h, alpha, v_f, calib)?;
        if (next - rc).abs() <= 1e-12 * rc {
            let decision = check_coiling_regime(h, &pattern, cfg.kappa);
            if let Some(v) = decision.binding {
                return Err(PlanError::Regime {
                    h,
                    detail: format!("{v:?}"),
                });
            }
            return Ok(Scaffold { h, alpha, pattern });
        }
        rc = next;
    }
    Err(CoilError::NoConvergence {
        iterations: SETTLE_MAX_ITER,
    }
    .into())
}

/// Nozzle height for a part-level policy.
pub fn choose_height(
    phi: f64,
    policy: HeightPolicy,
    calib: &CalibrationModel,
    d: f64,
    v_f: f64,
    cfg: &PlannerConfig,
) -> Result<Scaffold> {
    match policy {
        HeightPolicy::Fixed { h } => settle_scaffold(phi, h, calib, d, v_f, cfg),
        HeightPolicy::TargetRadius { rc } => {
            settle_scaffold(phi, calib.rc_line.height_for(rc), calib, d, v_f, cfg)
        }
        HeightPolicy::SmallestFeasible => {
            let mut intervals = Vec::new();
            for h in calib.calibrated_heights() {
                match settle_scaffold(phi, h, calib, d, v_f, cfg) {
                    Ok(s) => return Ok(s),
                    Err(PlanError::Infeasible { lo, hi, .. }) => {
                        intervals.push(format!("H={h}: {lo:.2}..{hi:.2}%"))
                    }
                    Err(PlanError::Regime { detail, .. }) => {
                        intervals.push(format!("H={h}: {detail}"))
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(PlanError::NoFeasibleHeight {
                phi,
                intervals: intervals.join(", "),
            })
        }
    }
}

struct LayerCtx<'a> {
    entry_index: usize,
    entry: &'a LayerEntry,
    areas: &'a [Area],
    rotate: bool,
    d: f64,
    g: f64,
    v_f: f64,
    min_pitch: f64,
}

impl LayerCtx<'_> {
    fn frame(&self, a: &Area) -> Area {
        if self.rotate {
            a.map(geometry::quarter_turn_cw)
        } else {
            a.clone()
        }
    }

    fn unframe(&self, row: [Point; 2]) -> Vec<Point> {
        if self.rotate {
            row.iter().map(|&p| geometry::quarter_turn_ccw(p)).collect()
        } else {
            row.to_vec()
        }
    }

    fn bead(&self) -> f64 {
        PI * self.d * self.d / 4.0
    }

    fn dense(
        &self,
        region: usize,
        area: &Area,
        y_lo: f64,
        y_hi: f64,
        volume: f64,
        out: &mut Vec<DensePass>,
    ) {
        let slab = area.slab_area(y_lo, y_hi);
        if volume <= 1e-12 * slab.max(1.0) || slab <= 0.0 {
            return;
        }
        let pitch = (self.bead() * slab / volume).max(self.min_pitch);
        let rows = fill::dense_rows(area, y_lo, y_hi, pitch);
        let len = fill::length(&rows);
        if len <= 0.0 {
            return;
        }
        let lambda = volume / (len * self.bead());
        for row in rows {
            out.push(DensePass {
                region,
                path: self.unframe(row),
                plot_height: self.d,
                lambda,
                v_f: self.v_f,
            });
        }
    }

    fn summaries(&self) -> Vec<RegionSummary> {
        self.entry
            .regions
            .iter()
            .zip(self.areas)
            .enumerate()
            .map(|(i, (r, a))| RegionSummary {
                region: i,
                role: r.role,
                phi: r.phi,
                area: a.area(),
            })
            .collect()
    }

    fn scaffold_layer(
        &self,
        index: usize,
        z_base: f64,
        sc: &Scaffold,
        scaffold_phi: f64,
    ) -> LayerPlan {
        let t = sc.pattern.h_c;
        let w = sc.pattern.w;
        let mut coil_passes = Vec::new();
        let mut dense_passes = Vec::new();
        for (ri, (region, area)) in self.entry.regions.iter().zip(self.areas).enumerate() {
            let a = self.frame(area);
            let rows = fill::coil_rows(&a, w);
            for row in &rows.rows {
                coil_passes.push(CoilPass {
                    region: ri,
                    path: self.unframe(*row),
                    h: sc.h,
                    alpha: sc.alpha,
                    v_f: self.v_f,
                    pattern: sc.pattern,
                });
            }
            let solid = 1.0 - region.phi / 100.0;
            let coil_volume = self.g * sc.alpha * self.bead() * fill::length(&rows.rows);
            let (y0, y1) = a.y_range();
            let covered = solid * rows.covered_area * t - coil_volume;
            debug_assert!((scaffold_phi - region.phi) >= 0.0);
            self.dense(ri, &a, y0, rows.covered_top, covered, &mut dense_passes);
            let remainder = solid * a.slab_area(rows.covered_top, y1) * t;
            self.dense(ri, &a, rows.covered_top, y1, remainder, &mut dense_passes);
        }
        LayerPlan {
            index,
            entry: self.entry_index,
            kind: LayerKind::Scaffold,
            z_base,
            layer_height: t,
            regions: self.summaries(),
            coil_passes,
            dense_passes,
        }
    }

    fn dense_layer(&self, index: usize, z_base: f64) -> LayerPlan {
        let t = self.d;
        let mut dense_passes = Vec::new();
        for (ri, (region, area)) in self.entry.regions.iter().zip(self.areas).enumerate() {
            let a = self.frame(area);
            let (y0, y1) = a.y_range();
            let volume = (1.0 - region.phi / 100.0) * a.area() * t;
            self.dense(ri, &a, y0, y1, volume, &mut dense_passes);
        }
        LayerPlan {
            index,
            entry: self.entry_index,
            kind: LayerKind::Dense,
            z_base,
            layer_height: t,
            regions: self.summaries(),
            coil_passes: Vec::new(),
            dense_passes,
        }
    }
}

/// Plans every layer of `spec` against a calibration.
pub fn plan_part(spec: &PartSpec, calib: &CalibrationModel, cfg: &PlannerConfig) -> Result<Plan> {
    spec.validate()?;
    calib.check()?;
    let defaults = &spec.defaults;
    let d = defaults.bead_diameter();
    let v_f = defaults.v_f;

    let scaffold_phi = spec
        .layers
        .iter()
        .filter(|e| !e.all_dense())
        .flat_map(|e| e.regions.iter().map(|r| r.phi))
        .fold(None, |acc: Option<f64>, p| {
            Some(acc.map_or(p, |a| a.max(p)))
        });

    let part_scaffold = match scaffold_phi {
        Some(phi) => Some(choose_height(
            phi,
            defaults.height_policy,
            calib,
            d,
            v_f,
            cfg,
        )?),
        None => None,
    };

    let mut layers = Vec::new();
    let mut z_base = spec.bbox.min[2];
    for (ei, entry) in spec.layers.iter().enumerate() {
        let areas: Vec<Area> = entry.regions.iter().map(|r| r.shape.to_area()).collect();
        let scaffold = match (entry.all_dense(), scaffold_phi, entry.nozzle_height) {
            (true, _, _) => None,
            (false, Some(phi), Some(h)) => Some(settle_scaffold(phi, h, calib, d, v_f, cfg)?),
            (false, Some(_), None) => part_scaffold,
            (false, None, _) => unreachable!("non-dense entry implies a scaffold porosity"),
        };
        let layer_height = scaffold.map_or(d, |s| s.pattern.h_c);
        if let Some(sc) = &scaffold {
            for (ri, r) in entry.regions.iter().enumerate() {
                let width = r.shape.min_width();
                if width < sc.pattern.w {
                    return Err(PlanError::FeatureTooSmall {
                        entry: ei,
                        region: ri,
                        width,
                        min: sc.pattern.w,
                    });
                }
            }
        }
        let count = (((entry.z_max - entry.z_min) / layer_height).round() as usize).max(1);
        for _ in 0..count {
            let index = layers.len();
            let ctx = LayerCtx {
                entry_index: ei,
                entry,
                areas: &areas,
                rotate: defaults.alternate_rows && index % 2 == 1,
                d,
                g: calib.g,
                v_f,
                min_pitch: cfg.min_plot_pitch * d,
            };
            let layer = match &scaffold {
                Some(sc) => ctx.scaffold_layer(index, z_base, sc, scaffold_phi.unwrap_or(0.0)),
                None => ctx.dense_layer(index, z_base),
            };
            z_base += layer.layer_height;
            layers.push(layer);
        }
    }

    Ok(Plan {
        schema: schema::PLAN.to_string(),
        name: spec.name.clone(),
        bbox: spec.bbox,
        settings: PlanSettings {
            d,
            g: calib.g,
            v_f,
            temperature: defaults.temperature,
            kappa: cfg.kappa,
            h: part_scaffold.map(|s| s.h),
            scaffold_phi,
            alternate_rows: defaults.alternate_rows,
        },
        entries: spec
            .layers
            .iter()
            .map(|e| EntryExtent {
                z_min: e.z_min,
                z_max: e.z_max,
            })
            .collect(),
        layers,
    })
}
