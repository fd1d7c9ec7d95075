//! Flattening a plan into an ordered list of machine moves.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Plan;
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Travel,
    CoilExtrude,
    PlotExtrude,
}

impl SegmentKind {
    pub fn extrudes(self) -> bool {
        self != SegmentKind::Travel
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub start: [f64; 3],
    pub end: [f64; 3],
    /// mm/min
    pub feed: f64,
    /// Screw rotation over the segment (rad).
    pub screw: f64,
    pub layer: usize,
}

impl Segment {
    pub fn length(&self) -> f64 {
        let d: Vec<f64> = (0..3).map(|i| self.end[i] - self.start[i]).collect();
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }

    pub fn xy_length(&self) -> f64 {
        (self.end[0] - self.start[0]).hypot(self.end[1] - self.start[1])
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToolpathError {
    #[error("segment {index}: negative screw increment {screw}")]
    NegativeScrew { index: usize, screw: f64 },
    #[error("segment {index} starts {gap:.6} mm away from the previous end")]
    Discontinuous { index: usize, gap: f64 },
    #[error("segment {index} extrudes at z={z} below layer base {z_base}")]
    BelowLayer { index: usize, z: f64, z_base: f64 },
    #[error("segment {index} refers to unknown layer {layer}")]
    UnknownLayer { index: usize, layer: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Toolpath {
    pub segments: Vec<Segment>,
    /// Base z of every layer, by index.
    pub layer_z_base: Vec<f64>,
}

const CONTINUITY_TOL: f64 = 1e-9;

impl Toolpath {
    pub fn validate(&self) -> Result<(), ToolpathError> {
        let mut prev: Option<[f64; 3]> = None;
        for (index, s) in self.segments.iter().enumerate() {
            if s.screw < 0.0 {
                return Err(ToolpathError::NegativeScrew {
                    index,
                    screw: s.screw,
                });
            }
            if let Some(p) = prev {
                let gap = (0..3)
                    .map(|i| (s.start[i] - p[i]).abs())
                    .fold(0.0, f64::max);
                if gap > CONTINUITY_TOL {
                    return Err(ToolpathError::Discontinuous { index, gap });
                }
            }
            if s.kind.extrudes() {
                let z_base =
                    *self
                        .layer_z_base
                        .get(s.layer)
                        .ok_or(ToolpathError::UnknownLayer {
                            index,
                            layer: s.layer,
                        })?;
                let z = s.start[2].min(s.end[2]);
                if z < z_base - CONTINUITY_TOL {
                    return Err(ToolpathError::BelowLayer { index, z, z_base });
                }
            }
            prev = Some(s.end);
        }
        Ok(())
    }

    pub fn total_screw(&self) -> f64 {
        self.segments.iter().map(|s| s.screw).sum()
    }

    pub fn extrusion_length(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.kind.extrudes())
            .map(Segment::xy_length)
            .sum()
    }

    /// Print time in seconds.
    pub fn duration(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.feed > 0.0)
            .map(|s| s.length() / s.feed * 60.0)
            .sum()
    }
}

struct Builder {
    segments: Vec<Segment>,
    at: Option<[f64; 3]>,
    travel_feed: f64,
}

impl Builder {
    fn extrude(
        &mut self,
        kind: SegmentKind,
        path: &[Point],
        z: f64,
        feed: f64,
        screw_per_mm: f64,
        layer: usize,
    ) {
        for pair in path.windows(2) {
            let start = [pair[0][0], pair[0][1], z];
            let end = [pair[1][0], pair[1][1], z];
            if let Some(at) = self.at {
                if at != start {
                    self.segments.push(Segment {
                        kind: SegmentKind::Travel,
                        start: at,
                        end: start,
                        feed: self.travel_feed,
                        screw: 0.0,
                        layer,
                    });
                }
            }
            let len = (end[0] - start[0]).hypot(end[1] - start[1]);
            self.segments.push(Segment {
                kind,
                start,
                end,
                feed,
                screw: screw_per_mm * len,
                layer,
            });
            self.at = Some(end);
        }
    }
}

/// Orders every pass of the plan into one continuous move chain. Coil rows
/// of a layer come first, then its dense passes with the nozzle lowered.
pub fn build_toolpath(plan: &Plan, travel_feed: f64) -> Toolpath {
    let g = plan.settings.g;
    let mut b = Builder {
        segments: Vec::new(),
        at: None,
        travel_feed,
    };
    for layer in &plan.layers {
        for p in &layer.coil_passes {
            b.extrude(
                SegmentKind::CoilExtrude,
                &p.path,
                layer.z_base + p.h,
                p.v_f * 60.0,
                p.alpha,
                layer.index,
            );
        }
        for p in &layer.dense_passes {
            b.extrude(
                SegmentKind::PlotExtrude,
                &p.path,
                layer.z_base + p.plot_height,
                p.v_f * 60.0,
                p.lambda / g,
                layer.index,
            );
        }
    }
    Toolpath {
        segments: b.segments,
        layer_z_base: plan.layers.iter().map(|l| l.z_base).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(start: [f64; 3], end: [f64; 3], screw: f64) -> Segment {
        Segment {
            kind: SegmentKind::CoilExtrude,
            start,
            end,
            feed: 600.0,
            screw,
            layer: 0,
        }
    }

    #[test]
    fn validation_catches_faults() {
        let mut tp = Toolpath {
            segments: vec![
                seg([0.0, 0.0, 4.0], [10.0, 0.0, 4.0], 1.0),
                seg([10.0, 0.0, 4.0], [10.0, 5.0, 4.0], 0.5),
            ],
            layer_z_base: vec![0.0],
        };
        tp.validate().unwrap();
        assert!((tp.duration() - 1.5).abs() < 1e-12);

        tp.segments[1].screw = -0.1;
        assert!(matches!(
            tp.validate(),
            Err(ToolpathError::NegativeScrew { .. })
        ));
        tp.segments[1].screw = 0.5;
        tp.segments[1].start[0] = 9.0;
        assert!(matches!(
            tp.validate(),
            Err(ToolpathError::Discontinuous { .. })
        ));
        tp.segments[1].start[0] = 10.0;
        tp.layer_z_base[0] = 5.0;
        assert!(matches!(
            tp.validate(),
            Err(ToolpathError::BelowLayer { .. })
        ));
    }
}
