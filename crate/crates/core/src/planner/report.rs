//! Material and time summary of a plan (`infoam-report/1`).

use serde::{Deserialize, Serialize};

use super::{LayerPlan, Plan};
use crate::schema;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub index: usize,
    pub z_base: f64,
    pub layer_height: f64,
    /// Extruded filament length (mm).
    pub length: f64,
    /// Deposited volume (mm³).
    pub volume: f64,
    pub mass_g: f64,
    /// Predicted porosity over the spanned volume (%).
    pub porosity: f64,
    /// Seconds spent extruding.
    pub time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTotals {
    pub layers: usize,
    pub height: f64,
    pub length: f64,
    pub volume: f64,
    pub mass_g: f64,
    pub porosity: f64,
    pub time_s: f64,
    /// Mass of the part as designed, before layer counts are rounded.
    pub nominal_mass_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub schema: String,
    pub name: String,
    pub bulk_density: f64,
    pub layers: Vec<LayerReport>,
    pub totals: ReportTotals,
}

/// Grams in a volume of mm³ at density kg/m³.
fn grams(volume_mm3: f64, rho: f64) -> f64 {
    volume_mm3 * 1e-9 * rho * 1e3
}

fn porosity(solid: f64, spanned: f64) -> f64 {
    if spanned > 0.0 {
        100.0 * (1.0 - solid / spanned)
    } else {
        0.0
    }
}

fn layer_report(plan: &Plan, layer: &LayerPlan, rho: f64) -> LayerReport {
    let bead = plan.bead_area();
    let g = plan.settings.g;
    let mut length = 0.0;
    let mut time_s = 0.0;
    for p in &layer.coil_passes {
        let travel = polyline(&p.path);
        length += g * p.alpha * travel;
        time_s += travel / p.v_f;
    }
    for p in &layer.dense_passes {
        let travel = polyline(&p.path);
        length += p.lambda * travel;
        time_s += travel / p.v_f;
    }
    let volume = length * bead;
    LayerReport {
        index: layer.index,
        z_base: layer.z_base,
        layer_height: layer.layer_height,
        length,
        volume,
        mass_g: grams(volume, rho),
        porosity: porosity(volume, layer.spanned_volume()),
        time_s,
    }
}

fn polyline(path: &[crate::geometry::Point]) -> f64 {
    path.windows(2)
        .map(|w| crate::geometry::distance(w[0], w[1]))
        .sum()
}

/// Per-layer and total predictions for `plan` at bulk density `rho_bulk`
/// (kg/m³).
pub fn plan_report(plan: &Plan, rho_bulk: f64) -> PlanReport {
    let layers: Vec<LayerReport> = plan
        .layers
        .iter()
        .map(|l| layer_report(plan, l, rho_bulk))
        .collect();
    let spanned: f64 = plan.layers.iter().map(LayerPlan::spanned_volume).sum();
    let volume: f64 = layers.iter().map(|l| l.volume).sum();
    let mut nominal = 0.0;
    for (ei, e) in plan.entries.iter().enumerate() {
        if let Some(l) = plan.layers.iter().find(|l| l.entry == ei) {
            let solid: f64 = l
                .regions
                .iter()
                .map(|r| (1.0 - r.phi / 100.0) * r.area)
                .sum();
            nominal += solid * (e.z_max - e.z_min);
        }
    }
    let totals = ReportTotals {
        layers: layers.len(),
        height: plan.layers.iter().map(|l| l.layer_height).sum(),
        length: layers.iter().map(|l| l.length).sum(),
        volume,
        mass_g: grams(volume, rho_bulk),
        porosity: porosity(volume, spanned),
        time_s: layers.iter().map(|l| l.time_s).sum(),
        nominal_mass_g: grams(nominal, rho_bulk),
    };
    PlanReport {
        schema: schema::REPORT.to_string(),
        name: plan.name.clone(),
        bulk_density: rho_bulk,
        layers,
        totals,
    }
}
