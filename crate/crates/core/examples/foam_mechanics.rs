//! Compression analysis of a foam cube and a power-law fit of modulus
//! against porosity.
//!
//! ```text
//! cargo run --example foam_mechanics
//! ```

use std::path::Path;

use infoam::mech::{self, CompressionCurve};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let samples = infoam::io::read_compression(&dir.join("compression.csv"))?;
    for curve in CompressionCurve::from_samples(&samples)? {
        let modulus = mech::segment_modulus(&curve, &[0.15, 0.3, 0.45, 0.6])?;
        let m: Vec<String> = modulus
            .iter()
            .map(|(e, m)| format!("{e}: {:.1} kPa", m / 1e3))
            .collect();
        println!(
            "{:?}: dissipation {:.1}%, segment modulus {}",
            curve.direction,
            mech::dissipation_ratio(&curve)?,
            m.join(", ")
        );
    }

    let e_bulk = mech::shore_a_modulus(47.0);
    println!("\nbulk modulus of Shore 47A: {e_bulk:.3} MPa");
    let rows: Vec<infoam::io::PorositySample> =
        infoam::io::read_csv(&dir.join("modulus.csv"), infoam::io::POROSITY_COLUMNS)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.phi, r.value)).collect();
    let fit = mech::fit_powerlaw(&pts, e_bulk * 1e6, "modulus")?;
    println!(
        "E = E_s * {:.3} * (1 - phi/100)^{:.3}  (R^2 = {:.4}, {} points)",
        fit.model.c, fit.model.n, fit.r_squared, fit.count
    );
    for phi in [50.0, 70.0, 85.0, 90.0] {
        println!(
            "  phi={phi}: {:.1} kPa",
            mech::property_powerlaw(phi, &fit.model)? / 1e3
        );
    }
    Ok(())
}
