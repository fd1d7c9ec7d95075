use std::fmt::Write;

use super::{GcodeError, GcodeProfile, Result, TemperaturePolicy, EMITTER_VERSION};
use crate::planner::{Segment, SegmentKind, Toolpath};

/// E is printed in units of 1e-5.
const E_QUANTUM: f64 = 1e5;

fn coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn e_units(units: i64) -> String {
    let sign = if units < 0 { "-" } else { "" };
    let a = units.unsigned_abs();
    format!("{sign}{}.{:05}", a / 100_000, a % 100_000)
}

fn feed(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

fn tag(kind: SegmentKind) -> &'static str {
    match kind {
        SegmentKind::CoilExtrude => "COIL",
        SegmentKind::PlotExtrude => "PLOT",
        SegmentKind::Travel => "TRAVEL",
    }
}

fn check_segment(index: usize, s: &Segment) -> Result<()> {
    let finite = s.start.iter().chain(&s.end).all(|v| v.is_finite())
        && s.feed.is_finite()
        && s.screw.is_finite();
    let message = if !finite {
        "non-finite coordinate, feed or screw increment"
    } else if s.screw < 0.0 {
        "negative screw increment"
    } else if !(s.feed > 0.0) {
        "feed must be positive"
    } else {
        return Ok(());
    };
    Err(GcodeError::Segment {
        index,
        message: message.to_string(),
    })
}

/// Renders a toolpath as G-code. Machine state starts at the origin; a
/// travel move is inserted when the first segment starts elsewhere.
///
/// E values are rounded so that the running total of the printed values
/// tracks the running total of screw rotation, which keeps the sum of the
/// file's E values equal to the toolpath's within one quantum.
pub fn emit(toolpath: &Toolpath, profile: &GcodeProfile) -> Result<String> {
    profile.check()?;
    for (i, s) in toolpath.segments.iter().enumerate() {
        check_segment(i, s)?;
    }

    let mut out = String::new();
    let line = |out: &mut String, s: &str| {
        out.push_str(s);
        out.push('\n');
    };
    line(&mut out, &format!("; generated by {EMITTER_VERSION}"));
    let t = feed(profile.temperature);
    match profile.temperature_policy {
        TemperaturePolicy::SetAndWait => {
            line(&mut out, &format!("M104 S{t}"));
            line(&mut out, &format!("M109 S{t}"));
        }
        TemperaturePolicy::Set => line(&mut out, &format!("M104 S{t}")),
        TemperaturePolicy::Omit => {}
    }
    line(&mut out, "G21");
    line(&mut out, "G90");
    line(&mut out, if profile.relative_e { "M83" } else { "M82" });
    for h in &profile.header {
        line(&mut out, h);
    }

    let mut preamble = None;
    if let Some(first) = toolpath.segments.first() {
        if first.start != [0.0; 3] {
            preamble = Some(Segment {
                kind: SegmentKind::Travel,
                start: [0.0; 3],
                end: first.start,
                feed: profile.travel_feed,
                screw: 0.0,
                layer: first.layer,
            });
        }
    }

    let mut layer = None;
    let mut kind = None;
    let mut modal_feed = None;
    let mut exact = 0.0f64;
    let mut printed: i64 = 0;
    for s in preamble.iter().chain(&toolpath.segments) {
        if layer != Some(s.layer) {
            layer = Some(s.layer);
            writeln!(out, ";LAYER:{}", s.layer).unwrap();
        }
        if s.kind.extrudes() && kind != Some(s.kind) {
            kind = Some(s.kind);
            writeln!(out, ";TYPE:{}", tag(s.kind)).unwrap();
        }
        let [x, y, z] = s.end;
        let cmd = if s.kind.extrudes() { "G1" } else { "G0" };
        write!(out, "{cmd} X{} Y{} Z{}", coord(x), coord(y), coord(z)).unwrap();
        if s.kind.extrudes() {
            exact += s.screw * profile.scale;
            let target = (exact * E_QUANTUM).round() as i64;
            let units = if profile.relative_e {
                target - printed
            } else {
                target
            };
            printed = target;
            write!(out, " E{}", e_units(units)).unwrap();
        }
        if modal_feed != Some(s.feed) {
            modal_feed = Some(s.feed);
            write!(out, " F{}", feed(s.feed)).unwrap();
        }
        out.push('\n');
    }

    for f in &profile.footer {
        line(&mut out, f);
    }
    line(&mut out, "M104 S0");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_toolpath_has_header_and_footer() {
        let tp = Toolpath {
            segments: vec![],
            layer_z_base: vec![],
        };
        let g = emit(&tp, &GcodeProfile::default()).unwrap();
        assert!(g.contains("M109 S230\nG21\nG90\nM83\n"));
        assert!(g.ends_with("M104 S0\n"));
        assert!(!g.contains("G1"));
    }

    #[test]
    fn single_coil_segment() {
        let tp = Toolpath {
            segments: vec![Segment {
                kind: SegmentKind::CoilExtrude,
                start: [0.0; 3],
                end: [10.0, 0.0, 4.0],
                feed: 600.0,
                screw: 18.0 * 10.0,
                layer: 0,
            }],
            layer_z_base: vec![0.0],
        };
        let g = emit(&tp, &GcodeProfile::default()).unwrap();
        assert!(
            g.contains("G1 X10.000 Y0.000 Z4.000 E180.00000 F600\n"),
            "{g}"
        );
    }

    #[test]
    fn rejects_bad_segments() {
        let mut s = Segment {
            kind: SegmentKind::CoilExtrude,
            start: [0.0; 3],
            end: [1.0, 0.0, 1.0],
            feed: 600.0,
            screw: -1.0,
            layer: 0,
        };
        let tp = |s: Segment| Toolpath {
            segments: vec![s],
            layer_z_base: vec![0.0],
        };
        assert!(emit(&tp(s), &GcodeProfile::default()).is_err());
        s.screw = f64::NAN;
        assert!(emit(&tp(s), &GcodeProfile::default()).is_err());
    }

    #[test]
    fn e_formatting() {
        assert_eq!(e_units(18_000_000), "180.00000");
        assert_eq!(e_units(1), "0.00001");
        assert_eq!(coord(-0.0004), "0.000");
        assert_eq!(feed(600.0), "600");
        assert_eq!(feed(12.5), "12.5");
    }
}
