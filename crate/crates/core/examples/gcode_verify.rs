//! Emits a cube, reads the program back, checks its porosity layer by
//! layer, then shows that an over-extruded layer is caught.
//!
//! ```text
//! cargo run --example gcode_verify
//! ```

use infoam::calib::CalibrationModel;
use infoam::gcode::{self, GcodeProfile};
use infoam::planner::{self, Builtin, PlannerConfig};
use infoam::schema;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/calib.json");
    let model: CalibrationModel =
        schema::from_json(&std::fs::read_to_string(path)?, schema::CALIB)?;
    let plan = planner::plan_part(
        &Builtin::cube(25.0, 65.0).part()?,
        &model,
        &PlannerConfig::default(),
    )?;
    let profile = GcodeProfile::default();
    let text = gcode::emit(
        &planner::build_toolpath(&plan, profile.travel_feed),
        &profile,
    )?;
    println!("{} lines of G-code; first ones:", text.lines().count());
    for line in text.lines().take(12) {
        println!("  {line}");
    }

    let program = gcode::parse(&text)?;
    println!(
        "\n{} moves, {} z bands",
        program.moves.len(),
        program.z_bands().len()
    );
    let report = gcode::verify_porosity(&program, &plan, model.g, profile.scale)?;
    for l in report.layers.iter().take(3) {
        println!(
            "  layer {}: expected {:.3}%, measured {:.3}%",
            l.index, l.expected_phi, l.measured_phi
        );
    }
    println!(
        "pass: {}, total volume error {:.2e}",
        report.pass, report.volume_rel_error
    );

    // twice the material on layer 2
    let mut layer = None;
    let tampered: Vec<String> = text
        .lines()
        .map(|line| {
            if let Some(k) = line.strip_prefix(";LAYER:") {
                layer = k.parse::<usize>().ok();
            }
            if layer == Some(2) && line.starts_with("G1") {
                line.split(' ')
                    .map(|w| match w.strip_prefix('E') {
                        Some(e) => format!("E{:.5}", 2.0 * e.parse::<f64>().unwrap()),
                        None => w.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            } else {
                line.to_string()
            }
        })
        .collect();
    let bad = gcode::verify_porosity(
        &gcode::parse(&tampered.join("\n"))?,
        &plan,
        model.g,
        profile.scale,
    )?;
    let l = &bad.layers[2];
    println!(
        "tampered: pass {}, flagged {:?}, layer 2 measured {:.1}% against {:.1}%",
        bad.pass, bad.flagged, l.measured_phi, l.expected_phi
    );
    Ok(())
}
