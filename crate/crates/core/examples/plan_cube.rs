//! Plans 25 mm cubes across the porosity range and compares their masses.
//!
//! ```text
//! cargo run --example plan_cube
//! ```

use infoam::calib::CalibrationModel;
use infoam::planner::{self, Builtin, PlannerConfig};
use infoam::schema;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/calib.json");
    let model: CalibrationModel =
        schema::from_json(&std::fs::read_to_string(path)?, schema::CALIB)?;
    let cfg = PlannerConfig::default();

    println!(
        "{:>5} {:>5} {:>7} {:>7} {:>7} {:>9} {:>8}",
        "phi", "H", "alpha", "h_c", "layers", "mass (g)", "time (s)"
    );
    let mut masses = Vec::new();
    for phi in [46.0, 65.0, 75.0, 85.0, 89.0] {
        let spec = Builtin::cube(25.0, phi).part()?;
        let plan = planner::plan_part(&spec, &model, &cfg)?;
        let report = planner::plan_report(&plan, infoam::DEFAULT_BULK_DENSITY);
        let coil = plan.layers.iter().flat_map(|l| &l.coil_passes).next();
        println!(
            "{phi:>5} {:>5} {:>7.3} {:>7.3} {:>7} {:>9.3} {:>8.0}",
            plan.settings.h.unwrap_or(0.0),
            coil.map_or(0.0, |c| c.alpha),
            plan.layers[0].layer_height,
            report.totals.layers,
            report.totals.mass_g,
            report.totals.time_s
        );
        masses.push((phi, report.totals.nominal_mass_g));
    }
    let m = |phi: f64| masses.iter().find(|p| p.0 == phi).unwrap().1;
    println!(
        "\nnominal mass ratio phi=46 / phi=89: {:.4} (54/11 = {:.4})",
        m(46.0) / m(89.0),
        54.0 / 11.0
    );
    Ok(())
}
