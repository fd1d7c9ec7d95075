//! Calibrates the coiling model from line scans, then predicts coil radii at
//! new print settings.
//!
//! ```text
//! cargo run --example calibrate_from_scans [scans.csv]
//! ```

use std::path::PathBuf;

use infoam::calib::{self, CalibConfig, HeightInterval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/scans.csv").into());
    let records = infoam::io::read_scans(&path)?;
    let config = CalibConfig {
        validity: HeightInterval {
            h_min: 2.0,
            h_max: 15.0,
        },
        ..CalibConfig::default()
    };
    let model = calib::calibrate(&records, &config)?;

    println!("{} scans, {} used", records.len(), model.records_used);
    for e in &model.exclusions {
        println!("  excluded #{}: {:?} ({})", e.index, e.reason, e.detail);
    }
    println!(
        "R_c = {:.4} H + {:.4} mm on [{}, {}] mm (rms {:.2e})",
        model.rc_line.slope,
        model.rc_line.intercept,
        model.rc_line.h_min,
        model.rc_line.h_max,
        model.residuals.rc_line_rms
    );
    println!(
        "G = {:.5} mm/rad (rms relative residual {:.2e})",
        model.g, model.residuals.g_rms_rel
    );
    println!(
        "shear: a = {:.5}, exponent {}, reference speed {:.1} rad/s",
        model.shear.a, model.shear.exponent, model.shear.reference_speed
    );
    for h in &model.residuals.shear_per_height {
        println!(
            "  H={:>4}: a={:.5}, max error {:.1}%",
            h.h,
            h.a,
            100.0 * h.max_rel_error
        );
    }

    println!("\npredicted coil radius (mm):");
    for (h, alpha, v_f) in [
        (4.0, 20.0, 10.0),
        (4.0, 40.0, 10.0),
        (4.0, 80.0, 10.0),
        (12.0, 40.0, 10.0),
    ] {
        println!(
            "  H={h:>4}  alpha={alpha:>4}  V_F={v_f}: {:.4}",
            calib::predict_rc(h, alpha, v_f, &model)?
        );
    }
    match calib::predict_rc(20.0, 40.0, 10.0, &model) {
        Err(e) => println!("  H=20: {e}"),
        Ok(r) => println!("  H=20: {r:.4}"),
    }
    Ok(())
}
