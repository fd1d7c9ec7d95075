//! Force relaxation and bending curvature of a printed actuator.
//!
//! ```text
//! cargo run --example actuator_response
//! ```

use std::path::Path;

use infoam::io::{self, ForceSample, PointSample};
use infoam::mech::{self, ForceUnit};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let rows: Vec<ForceSample> = io::read_csv(&dir.join("relax.csv"), io::FORCE_COLUMNS)?;
    let trace: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.f)).collect();
    let fit = mech::fit_maxwell(&trace, ForceUnit::GramForce)?;
    println!(
        "F(t) = {:.2} {} * ({:.4} + {:.4} exp(-t / {:.3} s)), rms residual {:.1e}",
        fit.f_max,
        fit.unit.symbol(),
        fit.k0,
        fit.k1,
        fit.tau1,
        fit.rms_residual
    );
    println!(
        "steady state {:.2} {}, settled within 5% after {:.2} s",
        mech::steady_state_force(&fit),
        fit.unit.symbol(),
        mech::settling_time(&fit)
    );

    let pts: Vec<PointSample> = io::read_csv(&dir.join("points.csv"), io::POINT_COLUMNS)?;
    println!("\nbending curvature from marker triples:");
    for t in pts.chunks(3) {
        let k = mech::curvature_from_points([t[0].x, t[0].y], [t[1].x, t[1].y], [t[2].x, t[2].y])?;
        if k > 0.0 {
            println!("  {k:.5} 1/mm (radius {:.1} mm)", 1.0 / k);
        } else {
            println!("  straight");
        }
    }
    Ok(())
}
