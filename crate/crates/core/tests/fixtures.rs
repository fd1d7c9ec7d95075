//! Shipped fixtures are regenerated here and compared byte for byte.
//! Run with `INFOAM_BLESS=1` to rewrite them after a deliberate change.

mod common;

use common::fixture;
use infoam::coilcore;
use infoam::gcode::{self, GcodeProfile};
use infoam::planner::{self, Builtin, BuiltinKind, PlannerConfig};
use infoam::schema;

fn golden(name: &str, fresh: &str) {
    let path = fixture(name);
    if std::env::var_os("INFOAM_BLESS").is_some() {
        std::fs::write(&path, fresh).unwrap();
        return;
    }
    let stored = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with INFOAM_BLESS=1)", path.display()));
    assert!(
        stored == fresh,
        "{name} is stale; rerun with INFOAM_BLESS=1 and review the diff"
    );
}

#[test]
fn scans() {
    golden("scans.csv", &common::scans_csv());
}

#[test]
fn calibration_document() {
    let records =
        infoam::io::parse_csv(&common::scans_csv(), infoam::io::SCAN_COLUMNS, "scans").unwrap();
    let model = infoam::calib::calibrate(&records, &common::calib_config()).unwrap();
    golden("calib.json", &schema::to_json(&model));
}

#[test]
fn part_documents() {
    golden(
        "cube85.json",
        &schema::to_json(&Builtin::cube(25.0, 85.0).part().unwrap()),
    );
    golden(
        "bending_spacers.json",
        &schema::to_json(&Builtin::new(BuiltinKind::BendingSpacers).part().unwrap()),
    );
}

#[test]
fn cube_gcode() {
    let spec = Builtin::cube(25.0, 85.0).part().unwrap();
    let plan =
        planner::plan_part(&spec, &common::calibration(), &PlannerConfig::default()).unwrap();
    let profile = GcodeProfile::default();
    let tp = planner::build_toolpath(&plan, profile.travel_feed);
    golden("cube85.gcode", &gcode::emit(&tp, &profile).unwrap());
}

#[test]
fn config_file() {
    golden("infoam.toml", "# Settings for the shipped scan fixture, which includes H = 2 mm lines.\nh_min = 2.0\nh_max = 15.0\n");
}

/// Loading and unloading along each axis of a high-porosity cube.
#[test]
fn compression_record() {
    let mut s = String::from("strain,stress,direction,branch\n");
    for (axis, e0, k) in [("x", 42e3, 1.1), ("y", 31e3, 0.9), ("z", 64e3, 0.35)] {
        let load = |e: f64| e0 * e * (1.0 + 6.0 * e.powi(3));
        for i in 0..=60 {
            let e = i as f64 * 0.01;
            s.push_str(&format!("{e},{},{axis},loading\n", load(e)));
        }
        for i in (0..=60).rev() {
            let e = i as f64 * 0.01;
            s.push_str(&format!(
                "{e},{},{axis},unloading\n",
                load(e) * (e / 0.6).powf(k)
            ));
        }
    }
    golden("compression.csv", &s);
}

#[test]
fn relaxation_trace() {
    let mut s = String::from("t,F\n");
    for i in 0..=120 {
        let t = i as f64 * 0.25;
        s.push_str(&format!("{t},{}\n", (0.6 + 0.4 * (-t / 3.0).exp()) * 67.2));
    }
    golden("relax.csv", &s);
}

#[test]
fn bend_points() {
    let mut s = String::from("x,y\n");
    for r in [50.0, 80.0, 125.0] {
        for a in [-0.3f64, 0.0, 0.3] {
            s.push_str(&format!("{},{}\n", r * a.sin(), r * a.cos() - r));
        }
    }
    for x in [0.0, 10.0, 20.0] {
        s.push_str(&format!("{x},0\n"));
    }
    golden("points.csv", &s);
}

/// z-axis modulus against porosity with a fixed scatter pattern.
#[test]
fn modulus_table() {
    let p_s = infoam::mech::shore_a_modulus(47.0) * 1e6;
    let scatter = [0.04, -0.03, 0.05, -0.02, 0.01, -0.04, 0.03];
    let mut s = String::from("phi,value\n");
    for (phi, dv) in [46.0f64, 55.0, 65.0, 75.0, 79.1, 85.0, 89.0]
        .iter()
        .zip(scatter)
    {
        let v = p_s * 0.9 * (1.0 - phi / 100.0).powi(2) * (1.0 + dv);
        s.push_str(&format!("{phi},{v}\n"));
    }
    golden("modulus.csv", &s);
}

/// Cube porosities for the two test series, offset from the model estimate
/// by a fixed scatter of a few porosity points.
#[test]
fn cube_porosity_table() {
    let model = common::calibration();
    let scatter = [1.8, -2.4, 3.1, -1.2, 2.6, -3.3, 0.9, -2.2, 2.9, -1.5, 3.4];
    let mut rows = Vec::new();
    for &n in &common::N_VALUES {
        rows.push((6.0, n));
    }
    for &h in &common::HEIGHTS {
        if h != 6.0 {
            rows.push((h, 3.0));
        }
    }
    let mut s = String::from("H,N,phi\n");
    for ((h, n), dv) in rows.into_iter().zip(scatter) {
        let phi = coilcore::porosity_at_density(model.rc_line.eval(h), n, model.d).unwrap();
        s.push_str(&format!("{h},{n},{:.1}\n", phi + dv));
    }
    golden("cube_porosity.csv", &s);
}

#[test]
fn model_matches_cube_porosities() {
    let model = common::calibration();
    let text = std::fs::read_to_string(fixture("cube_porosity.csv")).unwrap();
    let mut errors = Vec::new();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (h, n, measured) = (v[0], v[1], v[2]);
        let rc = model.rc_line.eval(h);
        let w = coilcore::coil_width(rc, model.d).unwrap();
        let alpha = coilcore::alpha_for_density(n, w, rc, model.g).unwrap();
        let h_c = coilcore::coil_height(w, n, model.d).unwrap();
        let phi = coilcore::porosity_estimate(alpha, model.g, model.d, w, h_c).unwrap();
        if h == 6.0 && n == 3.0 {
            assert!((phi - measured).abs() < 4.0, "H=6 N=3: {phi} vs {measured}");
        }
        errors.push((phi - measured).abs());
    }
    let mae = errors.iter().sum::<f64>() / errors.len() as f64;
    assert!(mae < 4.0, "mean absolute error {mae}");
}
