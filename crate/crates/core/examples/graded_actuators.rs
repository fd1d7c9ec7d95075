//! Plans every demonstrator part and writes its G-code.
//!
//! ```text
//! cargo run --example graded_actuators [out_dir]
//! ```

use std::path::PathBuf;

use infoam::calib::CalibrationModel;
use infoam::gcode::{self, GcodeProfile};
use infoam::planner::{self, Builtin, BuiltinKind, LayerKind, PlannerConfig};
use infoam::schema;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/calib.json");
    let model: CalibrationModel =
        schema::from_json(&std::fs::read_to_string(path)?, schema::CALIB)?;
    let out: Option<PathBuf> = std::env::args_os().nth(1).map(PathBuf::from);
    let profile = GcodeProfile::default();

    for kind in BuiltinKind::ALL {
        let spec = Builtin::new(kind).part()?;
        let plan = planner::plan_part(&spec, &model, &PlannerConfig::default())?;
        let report = planner::plan_report(&plan, infoam::DEFAULT_BULK_DENSITY);
        let dense = plan
            .layers
            .iter()
            .filter(|l| l.kind == LayerKind::Dense)
            .count();
        println!(
            "{kind:<16} {:>3} layers ({dense} dense), {:>6.2} mm tall, mean porosity {:>5.1}%, {:.2} g",
            plan.layers.len(),
            report.totals.height,
            report.totals.porosity,
            report.totals.mass_g
        );
        for (k, l) in plan.layers.iter().enumerate().take(4) {
            let phis: Vec<String> = l.regions.iter().map(|r| format!("{}", r.phi)).collect();
            println!(
                "    layer {k}: z={:.3} mm, regions at phi [{}]",
                l.z_base,
                phis.join(", ")
            );
        }
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            let tp = planner::build_toolpath(&plan, profile.travel_feed);
            std::fs::write(
                dir.join(format!("{kind}.gcode")),
                gcode::emit(&tp, &profile)?,
            )?;
        }
    }
    Ok(())
}
