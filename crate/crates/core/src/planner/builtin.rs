//! Demonstrator parts: a porosity cube and four soft vacuum actuators.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{self, Point};

use super::part::{BoundingBox, LayerEntry, PartDefaults, PartSpec, Region, Role, Shape};
use super::PlanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinKind {
    Cube,
    Bending,
    BendingSpacers,
    Twisting,
    Contraction,
    Screw,
}

impl BuiltinKind {
    pub const ALL: [BuiltinKind; 6] = [
        BuiltinKind::Cube,
        BuiltinKind::Bending,
        BuiltinKind::BendingSpacers,
        BuiltinKind::Twisting,
        BuiltinKind::Contraction,
        BuiltinKind::Screw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinKind::Cube => "cube",
            BuiltinKind::Bending => "bending",
            BuiltinKind::BendingSpacers => "bending_spacers",
            BuiltinKind::Twisting => "twisting",
            BuiltinKind::Contraction => "contraction",
            BuiltinKind::Screw => "screw",
        }
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for BuiltinKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BuiltinKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown part kind {s:?}"))
    }
}

/// Parameters of a demonstrator. `Builtin::new` fills in the dimensions
/// and porosities of the printed actuators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Builtin {
    pub kind: BuiltinKind,
    /// Outer size in mm. Contraction stacks use `size[0]` as the diameter.
    pub size: [f64; 3],
    /// Porosity of the compliant body (%).
    pub phi: f64,
    /// Porosity of the stiff features (%). The screw's
    /// two sections are always solid.
    pub spacer_phi: f64,
    pub spacer_width: f64,
    /// Spacer stripes, or discs in a contraction stack.
    pub count: usize,
    /// Thickness of the dense substrate, or of each contraction cap (mm).
    pub base: f64,
    pub defaults: PartDefaults,
}

impl Builtin {
    pub fn new(kind: BuiltinKind) -> Self {
        let actuator = Self {
            kind,
            size: [15.0, 75.0, 8.0],
            phi: 83.8,
            spacer_phi: 15.0,
            spacer_width: 5.0,
            count: 0,
            base: 1.0,
            defaults: PartDefaults::default(),
        };
        match kind {
            BuiltinKind::Cube => Self {
                size: [25.0, 25.0, 25.0],
                phi: 85.0,
                base: 0.0,
                ..actuator
            },
            BuiltinKind::Bending => actuator,
            BuiltinKind::BendingSpacers => Self {
                count: 4,
                ..actuator
            },
            BuiltinKind::Twisting => Self {
                count: 3,
                ..actuator
            },
            BuiltinKind::Contraction => Self {
                size: [20.0, 20.0, 20.0],
                phi: 85.0,
                spacer_width: 4.0,
                count: 6,
                ..actuator
            },
            BuiltinKind::Screw => Self {
                phi: 81.0,
                base: 0.0,
                ..actuator
            },
        }
    }

    pub fn cube(side: f64, phi: f64) -> Self {
        Self {
            size: [side; 3],
            phi,
            ..Self::new(BuiltinKind::Cube)
        }
    }

    pub fn part(&self) -> Result<PartSpec, PlanError> {
        builtin_part(self)
    }
}

pub fn builtin_part(b: &Builtin) -> Result<PartSpec, PlanError> {
    let [sx, sy, sz] = b.size;
    if !(sx > 0.0 && sy > 0.0 && sz > 0.0) || b.base < 0.0 || b.spacer_width <= 0.0 {
        return Err(PlanError::Spec(format!(
            "{} dimensions must be positive",
            b.kind
        )));
    }
    let bbox = BoundingBox {
        min: [0.0; 3],
        max: b.size,
    };
    let mut spec = PartSpec::new(b.kind.name(), bbox, b.defaults);
    let body = |shape: Shape| Region::new(shape, b.phi, Role::Scaffold);
    let spacer = |shape: Shape| Region::new(shape, b.spacer_phi, Role::Spacer);
    let entry = |z_min: f64, z_max: f64, regions: Vec<Region>| LayerEntry {
        z_min,
        z_max,
        regions,
        nozzle_height: None,
    };
    let footprint = Shape::rect(0.0, 0.0, sx, sy);

    let mut z = 0.0;
    let substrate = |spec: &mut PartSpec, z: &mut f64| {
        if b.base > 0.0 {
            spec.layers.push(entry(
                *z,
                *z + b.base,
                vec![Region::new(footprint.clone(), 0.0, Role::Substrate)],
            ));
            *z += b.base;
        }
    };

    match b.kind {
        BuiltinKind::Cube => {
            spec.layers
                .push(entry(0.0, sz, vec![body(footprint.clone())]));
        }
        BuiltinKind::Bending | BuiltinKind::BendingSpacers => {
            substrate(&mut spec, &mut z);
            let n = b.count as f64;
            let chamber = (sy - n * b.spacer_width) / (n + 1.0);
            if chamber <= 0.0 {
                return Err(PlanError::Spec(
                    "spacers do not fit along the actuator".into(),
                ));
            }
            let mut regions = Vec::new();
            let mut y = 0.0;
            for k in 0..=b.count {
                regions.push(body(Shape::rect(0.0, y, sx, chamber)));
                y += chamber;
                if k < b.count {
                    regions.push(spacer(Shape::rect(0.0, y, sx, b.spacer_width)));
                    y += b.spacer_width;
                }
            }
            spec.layers.push(entry(z, sz, regions));
        }
        BuiltinKind::Twisting => {
            substrate(&mut spec, &mut z);
            let regions = diagonal_stripes(sx, sy, b.count, b.spacer_width)?
                .into_iter()
                .enumerate()
                .map(|(i, pts)| {
                    let shape = Shape::Polygon { points: pts };
                    if i % 2 == 0 {
                        body(shape)
                    } else {
                        spacer(shape)
                    }
                })
                .collect();
            spec.layers.push(entry(z, sz, regions));
        }
        BuiltinKind::Contraction => {
            let r = sx / 2.0;
            let ring = b.spacer_width;
            if ring >= r || b.count == 0 {
                return Err(PlanError::Spec(
                    "ring must be thinner than the disc radius".into(),
                ));
            }
            let disc_t = (sz - 2.0 * b.base) / b.count as f64;
            if disc_t <= 0.0 {
                return Err(PlanError::Spec("caps leave no room for discs".into()));
            }
            let (cx, cy) = (r, sy / 2.0);
            let full = Shape::Disc { cx, cy, r };
            let cap = Region::new(full.clone(), b.spacer_phi, Role::Skin);
            if b.base > 0.0 {
                spec.layers.push(entry(0.0, b.base, vec![cap.clone()]));
                z = b.base;
            }
            for k in 0..b.count {
                let regions = if k % 2 == 0 {
                    vec![body(full.clone())]
                } else {
                    vec![
                        Region::new(
                            Shape::Annulus {
                                cx,
                                cy,
                                r_inner: r - ring,
                                r_outer: r,
                            },
                            b.spacer_phi,
                            Role::Skin,
                        ),
                        body(Shape::Disc {
                            cx,
                            cy,
                            r: r - ring,
                        }),
                    ]
                };
                spec.layers.push(entry(z, z + disc_t, regions));
                z += disc_t;
            }
            if b.base > 0.0 {
                spec.layers.push(entry(z, sz, vec![cap]));
            }
        }
        BuiltinKind::Screw => {
            // First half: an upright solid wall along the length. Second
            // half: a solid floor through mid-height, at right angles to it.
            let section = |shape: Shape| Region::new(shape, 0.0, Role::Spacer);
            let half = sy / 2.0;
            let wall = b.spacer_width.min(sx / 3.0);
            let side = (sx - wall) / 2.0;
            let first = || {
                vec![
                    body(Shape::rect(0.0, 0.0, side, half)),
                    section(Shape::rect(side, 0.0, wall, half)),
                    body(Shape::rect(side + wall, 0.0, side, half)),
                ]
            };
            let second = Shape::rect(0.0, half, sx, sy - half);
            let floor_lo = (sz - wall.min(sz / 3.0)) / 2.0;
            let floor_hi = sz - floor_lo;
            let mut lower = first();
            lower.push(body(second.clone()));
            let mut middle = first();
            middle.push(section(second.clone()));
            let mut upper = first();
            upper.push(body(second));
            spec.layers.push(entry(0.0, floor_lo, lower));
            spec.layers.push(entry(floor_lo, floor_hi, middle));
            spec.layers.push(entry(floor_hi, sz, upper));
        }
    }
    Ok(spec)
}

/// Splits a `wx` × `wy` rectangle into alternating chambers and stripes at
/// 45°. Every piece spans the full width so none degenerates into a sliver.
fn diagonal_stripes(
    wx: f64,
    wy: f64,
    stripes: usize,
    width: f64,
) -> Result<Vec<Vec<Point>>, PlanError> {
    let rect = vec![[0.0, 0.0], [wx, 0.0], [wx, wy], [0.0, wy]];
    let total = wx + wy;
    let sw = width * SQRT_2;
    let n = stripes as f64;
    // chamber extent in units of x + y; the end chambers also hold a corner
    let cw = (total - 2.0 * wx - n * sw) / (n + 1.0);
    if cw <= 0.0 || wy <= wx {
        return Err(PlanError::Spec(
            "stripes do not fit along the actuator".into(),
        ));
    }
    let mut cuts = vec![0.0];
    let mut c = wx + cw;
    for _ in 0..stripes {
        cuts.push(c);
        cuts.push(c + sw);
        c += sw + cw;
    }
    cuts.push(total);
    let normal = [1.0, 1.0];
    Ok(cuts
        .windows(2)
        .map(|w| {
            let below = geometry::clip_half_plane(&rect, normal, w[1]);
            geometry::clip_half_plane(&below, [-1.0, -1.0], -w[0])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_one_region() {
        let p = Builtin::cube(25.0, 85.0).part().unwrap();
        assert_eq!(p.layers.len(), 1);
        assert_eq!(p.layers[0].regions.len(), 1);
        p.validate().unwrap();
    }

    #[test]
    fn every_demonstrator_validates() {
        for kind in BuiltinKind::ALL {
            let p = Builtin::new(kind).part().unwrap();
            p.validate().unwrap_or_else(|e| panic!("{kind}: {e}"));
        }
    }

    #[test]
    fn stripes_tile_the_body() {
        let pieces = diagonal_stripes(15.0, 75.0, 3, 5.0).unwrap();
        assert_eq!(pieces.len(), 7);
        let total: f64 = pieces.iter().map(|p| geometry::area(p)).sum();
        assert!((total - 15.0 * 75.0).abs() < 1e-9);
        for p in &pieces[1..6] {
            // interior pieces are parallelograms
            assert_eq!(p.len(), 4);
        }
        let stripe = geometry::convex_width(&pieces[1]);
        assert!((stripe - 5.0).abs() < 1e-9, "{stripe}");
    }

    #[test]
    fn contraction_alternates() {
        let p = Builtin::new(BuiltinKind::Contraction).part().unwrap();
        let ring_layers = p
            .layers
            .iter()
            .filter(|e| {
                e.regions
                    .iter()
                    .any(|r| matches!(r.shape, Shape::Annulus { .. }))
            })
            .count();
        assert_eq!(ring_layers, 3);
        assert_eq!(p.layers.len(), 8);
        assert!(p
            .layers
            .iter()
            .flat_map(|e| &e.regions)
            .all(|r| r.phi < 20.0 || r.phi > 80.0));
    }

    #[test]
    fn screw_sections_are_perpendicular() {
        let p = Builtin::new(BuiltinKind::Screw).part().unwrap();
        assert_eq!(p.layers.len(), 3);
        // the wall runs through every slab, the floor only through the middle
        for e in &p.layers {
            assert_eq!(e.regions[1].role, Role::Spacer);
        }
        assert_eq!(p.layers[1].regions[3].role, Role::Spacer);
        assert_eq!(p.layers[0].regions[3].role, Role::Scaffold);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in BuiltinKind::ALL {
            assert_eq!(k.name().parse::<BuiltinKind>().unwrap(), k);
        }
    }
}
