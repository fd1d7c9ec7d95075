//! Shared fixture definitions for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use infoam::calib::{
    self, CalibConfig, CalibrationModel, ForwardModel, HeightInterval, LineScanRecord,
};

pub const HEIGHTS: [f64; 6] = [2.0, 4.0, 6.0, 8.0, 10.0, 15.0];
pub const ALPHAS: [f64; 3] = [20.0, 40.0, 60.0];
pub const SPEEDS: [f64; 3] = [5.0, 10.0, 20.0];
pub const N_VALUES: [f64; 6] = [2.2, 3.0, 6.3, 8.5, 10.75, 12.75];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn design() -> Vec<(f64, f64, f64)> {
    let mut v = Vec::new();
    for &h in &HEIGHTS {
        for &a in &ALPHAS {
            for &s in &SPEEDS {
                v.push((h, a, s));
            }
        }
    }
    v
}

/// The coiling behaviour the scan fixture is generated from.
pub fn truth() -> ForwardModel {
    ForwardModel {
        slope: 0.3,
        intercept: 0.4,
        g: 0.17,
        exponent: -0.09,
        reference_speed: calib::geometric_mean_speed(&design()),
        d: 0.4,
    }
}

pub fn calib_config() -> CalibConfig {
    CalibConfig {
        validity: HeightInterval {
            h_min: 2.0,
            h_max: 15.0,
        },
        ..CalibConfig::default()
    }
}

/// Design scans followed by one line printed above the validity range and
/// one that did not coil.
pub fn scan_records() -> Vec<LineScanRecord> {
    let t = truth();
    let mut out: Vec<LineScanRecord> = design()
        .into_iter()
        .map(|(h, a, s)| t.scan(h, a, s).unwrap())
        .collect();
    out.push(t.scan(20.0, 40.0, 10.0).unwrap());
    out.push(LineScanRecord {
        h: 2.0,
        alpha: 40.0,
        v_f: 10.0,
        w: 0.4,
        dx: 0.9,
        d: 0.4,
    });
    out
}

pub fn scans_csv() -> String {
    let mut s = String::from("H,alpha,V_F,W,dx,d\n");
    for r in scan_records() {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.h, r.alpha, r.v_f, r.w, r.dx, r.d
        ));
    }
    s
}

pub fn calibration() -> CalibrationModel {
    let records = infoam::io::read_scans(&fixture("scans.csv")).unwrap();
    calib::calibrate(&records, &calib_config()).unwrap()
}
