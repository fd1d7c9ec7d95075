//! Porosity check of a G-code program against the plan it was made from.
//!
//! Layer membership comes from nozzle z alone: each extrusion move is
//! matched to the first layer, at or after the current one, that prints at
//! that z. Comments in the file are not trusted.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::parse::{ParsedProgram, Z_BAND_TOL};
use super::{GcodeError, Result};
use crate::planner::{plan_report, Plan};
use crate::schema;

/// Allowed deviation of reconstructed porosity (absolute percent points).
pub const POROSITY_TOLERANCE: f64 = 2.0;
/// Allowed relative deviation of the total extruded volume.
pub const VOLUME_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerCheck {
    pub index: usize,
    pub z_base: f64,
    pub moves: usize,
    /// Extruded volume reconstructed from E (mm³).
    pub volume: f64,
    pub spanned_volume: f64,
    pub expected_phi: f64,
    pub measured_phi: f64,
    pub deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub name: String,
    pub pass: bool,
    pub porosity_tolerance: f64,
    pub volume_tolerance: f64,
    pub total_volume: f64,
    pub expected_volume: f64,
    pub volume_rel_error: f64,
    pub layers: Vec<LayerCheck>,
    /// Indices of layers outside tolerance.
    pub flagged: Vec<usize>,
}

/// Reconstructs per-layer porosity from `program` using the extrusion
/// constant `g` (mm/rad) and E `scale` (units per rad).
pub fn verify_porosity(
    program: &ParsedProgram,
    plan: &Plan,
    g: f64,
    scale: f64,
) -> Result<VerifyReport> {
    if !(g > 0.0) || !(scale > 0.0) {
        return Err(GcodeError::Profile(format!(
            "G={g} and scale={scale} must be positive"
        )));
    }
    let bead = PI * plan.settings.d * plan.settings.d / 4.0;
    let heights: Vec<Vec<f64>> = plan.layers.iter().map(|l| l.nozzle_heights()).collect();
    let matches = |k: usize, z: f64| heights[k].iter().any(|h| (h - z).abs() <= Z_BAND_TOL);

    let mut volume = vec![0.0; plan.layers.len()];
    let mut moves = vec![0usize; plan.layers.len()];
    let mut current = 0usize;
    for m in program.extrusion_moves() {
        let z = m.to[2];
        if (m.from[2] - z).abs() > Z_BAND_TOL && m.e != 0.0 {
            return Err(GcodeError::Structure(format!(
                "line {}: extrusion while changing z from {} to {}",
                m.line, m.from[2], z
            )));
        }
        let Some(k) = (current..plan.layers.len()).find(|&k| matches(k, z)) else {
            return Err(GcodeError::Structure(format!(
                "line {}: extrusion at z={z:.3} matches no remaining plan layer",
                m.line
            )));
        };
        current = k;
        volume[k] += m.e / scale * g * bead;
        moves[k] += 1;
    }

    let mut layers = Vec::with_capacity(plan.layers.len());
    for (k, l) in plan.layers.iter().enumerate() {
        let spanned = l.spanned_volume();
        let expected_phi = l.target_porosity();
        let measured_phi = 100.0 * (1.0 - volume[k] / spanned);
        let deviation = measured_phi - expected_phi;
        layers.push(LayerCheck {
            index: l.index,
            z_base: l.z_base,
            moves: moves[k],
            volume: volume[k],
            spanned_volume: spanned,
            expected_phi,
            measured_phi,
            deviation,
            pass: deviation.abs() <= POROSITY_TOLERANCE,
        });
    }
    let total_volume: f64 = volume.iter().sum();
    let expected_volume = plan_report(plan, crate::DEFAULT_BULK_DENSITY).totals.volume;
    let volume_rel_error = if expected_volume > 0.0 {
        (total_volume - expected_volume) / expected_volume
    } else {
        total_volume
    };
    let flagged: Vec<usize> = layers.iter().filter(|l| !l.pass).map(|l| l.index).collect();
    Ok(VerifyReport {
        schema: schema::VERIFY.to_string(),
        name: plan.name.clone(),
        pass: flagged.is_empty() && volume_rel_error.abs() <= VOLUME_TOLERANCE,
        porosity_tolerance: POROSITY_TOLERANCE,
        volume_tolerance: VOLUME_TOLERANCE,
        total_volume,
        expected_volume,
        volume_rel_error,
        layers,
        flagged,
    })
}
