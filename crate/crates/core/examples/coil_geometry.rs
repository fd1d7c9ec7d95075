//! Coil geometry and porosity across the cube test matrix, and the
//! porosity range each nozzle height can reach.
//!
//! ```text
//! cargo run --example coil_geometry
//! ```

use infoam::calib::CalibrationModel;
use infoam::coilcore::{self, CoilPattern, RegimeLimits};
use infoam::planner::check_coiling_regime;
use infoam::schema;

const HEIGHTS: [f64; 6] = [2.0, 4.0, 6.0, 8.0, 10.0, 15.0];
const DENSITIES: [f64; 6] = [2.2, 3.0, 6.3, 8.5, 10.75, 12.75];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/calib.json");
    let model: CalibrationModel =
        schema::from_json(&std::fs::read_to_string(path)?, schema::CALIB)?;
    let d = model.d;

    println!("porosity (%) by nozzle height H and coil density N; '-' reaches the nozzle");
    print!("{:>6}", "H\\N");
    for n in DENSITIES {
        print!("{n:>8}");
    }
    println!();
    for h in HEIGHTS {
        let rc = model.rc_line.eval(h);
        print!("{h:>6}");
        for n in DENSITIES {
            let pattern = CoilPattern::new(rc, n, d)?;
            if check_coiling_regime(h, &pattern, 1.0).ok {
                print!("{:>8.1}", coilcore::porosity_at_density(rc, n, d)?);
            } else {
                print!("{:>8}", "-");
            }
        }
        println!();
    }

    println!("\nreachable porosity per height:");
    for h in HEIGHTS {
        let rc = model.rc_line.eval(h);
        let w = coilcore::coil_width(rc, d)?;
        let i =
            coilcore::feasible_porosity_interval(rc, d, &RegimeLimits::for_nozzle_height(h, 1.0))?;
        println!(
            "  H={h:>4} mm  R_c={rc:.2} mm  W={w:.2} mm  phi in ({:.1}, {:.1}]",
            i.lo, i.hi
        );
    }

    // the extrusion multiplier that hits 85% at H = 4 mm
    let rc = model.rc_line.eval(4.0);
    let (alpha, p) = coilcore::solve_alpha_for_porosity(85.0, rc, d, model.g)?;
    println!(
        "\nphi=85% at H=4 mm: alpha={alpha:.3} rad/mm, N={:.3}, h_c={:.3} mm, density {:.0} kg/m3",
        p.n,
        p.h_c,
        coilcore::density_from_porosity(85.0, infoam::DEFAULT_BULK_DENSITY)?
    );
    Ok(())
}
