//! Declarative part description (`infoam-part/1`).

use serde::{Deserialize, Serialize};

use crate::geometry::{self, Area, Point};
use crate::schema;

use super::PlanError;

/// Planar region outline in mm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// Rectangle with lower-left corner `(x, y)` before rotation, rotated by
    /// `angle_deg` about its centre.
    Rectangle {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        #[serde(default)]
        angle_deg: f64,
    },
    Disc {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Annulus {
        cx: f64,
        cy: f64,
        r_inner: f64,
        r_outer: f64,
    },
    /// Convex polygon.
    Polygon {
        points: Vec<Point>,
    },
}

impl Shape {
    pub fn rect(x: f64, y: f64, width: f64, height: f64) -> Self {
        Shape::Rectangle {
            x,
            y,
            width,
            height,
            angle_deg: 0.0,
        }
    }

    pub fn to_area(&self) -> Area {
        match self {
            Shape::Rectangle {
                x,
                y,
                width,
                height,
                angle_deg,
            } => {
                let corners = [
                    [*x, *y],
                    [x + width, *y],
                    [x + width, y + height],
                    [*x, y + height],
                ];
                if *angle_deg == 0.0 {
                    return Area::new(corners.to_vec(), None);
                }
                let (cx, cy) = (x + width / 2.0, y + height / 2.0);
                let (s, c) = angle_deg.to_radians().sin_cos();
                let pts = corners
                    .iter()
                    .map(|p| {
                        let (dx, dy) = (p[0] - cx, p[1] - cy);
                        [cx + c * dx - s * dy, cy + s * dx + c * dy]
                    })
                    .collect();
                Area::new(pts, None)
            }
            Shape::Disc { cx, cy, r } => Area::new(geometry::circle([*cx, *cy], *r), None),
            Shape::Annulus {
                cx,
                cy,
                r_inner,
                r_outer,
            } => Area::new(
                geometry::circle([*cx, *cy], *r_outer),
                Some(geometry::circle([*cx, *cy], *r_inner)),
            ),
            Shape::Polygon { points } => Area::new(points.clone(), None),
        }
    }

    /// Narrowest dimension of the shape.
    pub fn min_width(&self) -> f64 {
        match self {
            Shape::Rectangle { width, height, .. } => width.min(*height),
            Shape::Disc { r, .. } => 2.0 * r,
            Shape::Annulus {
                r_inner, r_outer, ..
            } => r_outer - r_inner,
            Shape::Polygon { points } => geometry::convex_width(points),
        }
    }

    fn check(&self) -> Result<(), String> {
        let ok = match self {
            Shape::Rectangle { width, height, .. } => *width > 0.0 && *height > 0.0,
            Shape::Disc { r, .. } => *r > 0.0,
            Shape::Annulus {
                r_inner, r_outer, ..
            } => *r_inner > 0.0 && r_outer > r_inner,
            Shape::Polygon { points } => geometry::is_convex(points),
        };
        if ok {
            Ok(())
        } else {
            Err(format!("degenerate or non-convex shape {self:?}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Scaffold,
    Spacer,
    Substrate,
    Skin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub shape: Shape,
    /// Target porosity (%). Zero marks a plotted-dense region.
    pub phi: f64,
    pub role: Role,
}

impl Region {
    pub fn new(shape: Shape, phi: f64, role: Role) -> Self {
        Self { shape, phi, role }
    }

    pub fn is_dense(&self) -> bool {
        self.phi == 0.0
    }
}

/// A slab of the part between `z_min` and `z_max` with one region layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerEntry {
    pub z_min: f64,
    pub z_max: f64,
    pub regions: Vec<Region>,
    /// Overrides the part-level nozzle height for this slab.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nozzle_height: Option<f64>,
}

impl LayerEntry {
    pub fn all_dense(&self) -> bool {
        !self.regions.is_empty() && self.regions.iter().all(Region::is_dense)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeightPolicy {
    /// Smallest calibrated height whose feasible porosity interval covers the
    /// scaffold porosity.
    SmallestFeasible,
    Fixed {
        h: f64,
    },
    /// Height at which the calibrated line gives this coil radius.
    TargetRadius {
        rc: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartDefaults {
    /// Nozzle diameter (mm).
    pub d: f64,
    pub temperature: f64,
    /// Printhead speed (mm/s).
    pub v_f: f64,
    pub height_policy: HeightPolicy,
    /// Turn the row direction by 90° on every other layer.
    #[serde(default)]
    pub alternate_rows: bool,
    /// Extrudate diameter when die swell makes it differ from `d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_diameter: Option<f64>,
}

impl Default for PartDefaults {
    fn default() -> Self {
        Self {
            d: crate::DEFAULT_NOZZLE_DIAMETER,
            temperature: crate::DEFAULT_TEMPERATURE,
            v_f: 10.0,
            height_policy: HeightPolicy::SmallestFeasible,
            alternate_rows: false,
            effective_diameter: None,
        }
    }
}

impl PartDefaults {
    pub fn bead_diameter(&self) -> f64 {
        self.effective_diameter.unwrap_or(self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoundingBox {
    pub fn size(&self) -> [f64; 3] {
        [
            self.max[0] - self.min[0],
            self.max[1] - self.min[1],
            self.max[2] - self.min[2],
        ]
    }

    pub fn volume(&self) -> f64 {
        let s = self.size();
        s[0] * s[1] * s[2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartSpec {
    pub schema: String,
    pub name: String,
    pub bbox: BoundingBox,
    pub defaults: PartDefaults,
    pub layers: Vec<LayerEntry>,
}

const GEOM_TOL: f64 = 1e-9;

impl PartSpec {
    pub fn new(name: impl Into<String>, bbox: BoundingBox, defaults: PartDefaults) -> Self {
        Self {
            schema: schema::PART.to_string(),
            name: name.into(),
            bbox,
            defaults,
            layers: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, schema::SchemaError> {
        schema::from_json(text, schema::PART)
    }

    /// Structural checks that do not need a calibration.
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |msg: String| Err(PlanError::Spec(msg));
        let d = &self.defaults;
        if !(d.d > 0.0) || !(d.v_f > 0.0) || !(d.bead_diameter() > 0.0) {
            return bad("d, effective diameter and V_F must be positive".into());
        }
        if !(d.temperature > 0.0 && d.temperature <= 300.0) {
            return bad(format!("temperature {} °C outside (0, 300]", d.temperature));
        }
        let s = self.bbox.size();
        if s.iter().any(|v| !(*v > 0.0)) {
            return bad(format!("bounding box {:?} has no volume", self.bbox));
        }
        let mut z = self.bbox.min[2];
        for (li, entry) in self.layers.iter().enumerate() {
            if (entry.z_min - z).abs() > GEOM_TOL {
                return bad(format!(
                    "layer entry {li} starts at z={} but the previous one ends at z={z}",
                    entry.z_min
                ));
            }
            if !(entry.z_max > entry.z_min) || entry.z_max > self.bbox.max[2] + GEOM_TOL {
                return bad(format!(
                    "layer entry {li} z range [{}, {}] is empty or leaves the bounding box",
                    entry.z_min, entry.z_max
                ));
            }
            if entry.regions.is_empty() {
                return bad(format!("layer entry {li} has no regions"));
            }
            if let Some(h) = entry.nozzle_height {
                if !(h > 0.0) {
                    return bad(format!(
                        "layer entry {li} nozzle height {h} must be positive"
                    ));
                }
            }
            z = entry.z_max;
            let areas: Vec<Area> = entry.regions.iter().map(|r| r.shape.to_area()).collect();
            for (ri, (region, a)) in entry.regions.iter().zip(&areas).enumerate() {
                if !(region.phi >= 0.0 && region.phi < 100.0) {
                    return bad(format!(
                        "layer entry {li} region {ri}: porosity {} outside [0, 100)",
                        region.phi
                    ));
                }
                region
                    .shape
                    .check()
                    .map_err(|m| PlanError::Spec(format!("layer entry {li} region {ri}: {m}")))?;
                if !(a.area() > 0.0) {
                    return bad(format!("layer entry {li} region {ri} has zero area"));
                }
                let (lo, hi) = geometry::bounds(&a.outer);
                if lo[0] < self.bbox.min[0] - GEOM_TOL
                    || lo[1] < self.bbox.min[1] - GEOM_TOL
                    || hi[0] > self.bbox.max[0] + GEOM_TOL
                    || hi[1] > self.bbox.max[1] + GEOM_TOL
                {
                    return bad(format!(
                        "layer entry {li} region {ri} leaves the bounding box"
                    ));
                }
            }
            for i in 0..areas.len() {
                for j in i + 1..areas.len() {
                    let ov = areas[i].overlap(&areas[j]);
                    if ov > 1e-6 * areas[i].area().min(areas[j].area()) {
                        return bad(format!(
                            "layer entry {li}: regions {i} and {j} overlap by {ov:.4} mm²"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
