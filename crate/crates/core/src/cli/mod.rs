//! `infoam` command line.
//!
//! ```text
//! infoam calibrate scans.csv --out calib.json
//! infoam plan part.json --calib calib.json --out plan.json
//! infoam plan --builtin bending_spacers --calib calib.json --dry-run
//! infoam gcode plan.json --out part.gcode
//! infoam verify part.gcode --plan plan.json --calib calib.json
//! infoam predict 85 modulus.json
//! infoam analyze force relax.csv --unit gf
//! ```
//!
//! Settings come from a TOML file (`--config`, or the path in
//! `INFOAM_CONFIG`) and `--set key=value` overrides, in that order.

mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::calib::{self, CalibConfig, CalibrationModel, HeightInterval};
use crate::error::{Error, Result};
use crate::gcode;
use crate::io;
use crate::mech::{self, CompressionCurve, ForceUnit, PowerLawFit};
use crate::planner::{self, Builtin, BuiltinKind, PartSpec, Plan};
use crate::schema;

pub use config::{RunConfig, CONFIG_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "infoam",
    version,
    about = "Graded-porosity printing by liquid rope coiling"
)]
pub struct Cli {
    /// TOML settings file; defaults to $INFOAM_CONFIG when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a setting, e.g. `--set rho_bulk=950`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a calibration from line-scan measurements.
    Calibrate {
        scans: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan the layers of a part.
    Plan {
        /// Part description (infoam-part/1).
        part: Option<PathBuf>,
        /// Plan a demonstrator instead of a part file.
        #[arg(long, value_parser = parse_kind, conflicts_with = "part")]
        builtin: Option<BuiltinKind>,
        #[arg(long)]
        calib: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the material report instead of writing the plan.
        #[arg(long)]
        dry_run: bool,
    },
    /// Emit G-code for a plan.
    Gcode {
        plan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the porosity of a G-code program against its plan.
    Verify {
        program: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        calib: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a fitted power law at a porosity (%).
    Predict { phi: f64, model: PathBuf },
    /// Analyse an experiment record.
    Analyze {
        kind: AnalysisKind,
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot-ready CSV next to the report.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Strain levels for the segment modulus (comma separated).
        #[arg(long, value_delimiter = ',')]
        levels: Vec<f64>,
        #[arg(long, value_enum, default_value_t = UnitArg::Gf)]
        unit: UnitArg,
        /// Bulk property for power-law fits; defaults to the Shore-A 47 modulus in Pa.
        #[arg(long)]
        p_s: Option<f64>,
        #[arg(long, default_value = "modulus")]
        property: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalysisKind {
    Compression,
    Force,
    Curvature,
    Powerlaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Gf,
    N,
}

fn parse_kind(s: &str) -> std::result::Result<BuiltinKind, String> {
    s.parse()
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Errors are reported on one stderr line.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind(), one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn emit_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => print_stdout(text),
    }
}

/// A reader that stops early (`infoam ... | head`) is not an error.
fn print_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn read_calib(path: &Path) -> Result<CalibrationModel> {
    let model: CalibrationModel = schema::from_json(&io::read_text(path)?, schema::CALIB)?;
    model.check()?;
    Ok(model)
}

fn read_plan(path: &Path) -> Result<Plan> {
    Ok(Plan::from_json(&io::read_text(path)?)?)
}

#[derive(Serialize)]
struct Analysis<T: Serialize> {
    schema: &'static str,
    kind: &'static str,
    source: String,
    #[serde(flatten)]
    result: T,
}

fn analysis<T: Serialize>(kind: &'static str, source: &Path, result: T) -> String {
    schema::to_json(&Analysis {
        schema: schema::ANALYSIS,
        kind,
        source: source.display().to_string(),
        result,
    })
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.set)?;
    match &cli.command {
        Command::Calibrate { scans, out } => {
            let records = io::read_scans(scans)?;
            let config = CalibConfig {
                validity: HeightInterval {
                    h_min: cfg.h_min,
                    h_max: cfg.h_max,
                },
                exponent: cfg.exponent,
                temperature: cfg.temperature.unwrap_or(crate::DEFAULT_TEMPERATURE),
            };
            let model = calib::calibrate(&records, &config)?;
            emit_output(out.as_deref(), &schema::to_json(&model))?;
            eprintln!(
                "calibrated from {} records ({} excluded): R_c = {:.4}·H + {:.4} mm, G = {:.5} mm/rad",
                model.records_used,
                model.exclusions.len(),
                model.rc_line.slope,
                model.rc_line.intercept,
                model.g
            );
            Ok(0)
        }
        Command::Plan {
            part,
            builtin,
            calib,
            out,
            dry_run,
        } => {
            let mut spec = match (part, builtin) {
                (Some(p), None) => PartSpec::from_json(&io::read_text(p)?)?,
                (None, Some(kind)) => Builtin::new(*kind).part()?,
                _ => return Err(Error::Config("give a part file or --builtin".into())),
            };
            cfg.apply_part_overrides(&mut spec.defaults);
            let mut model = read_calib(calib)?;
            model.g *= cfg.g_scale;
            let plan = planner::plan_part(&spec, &model, &cfg.planner())?;
            let report = planner::plan_report(&plan, cfg.rho_bulk);
            let t = &report.totals;
            let summary = format!(
                "plan {}: {} layers, {:.3} mm tall, H={} mm, scaffold φ={}, predicted mass {:.2} g, porosity {:.2}%, {:.0} s",
                plan.name,
                t.layers,
                t.height,
                plan.settings.h.map_or("-".into(), |h| format!("{h}")),
                plan.settings.scaffold_phi.map_or("-".into(), |p| format!("{p}%")),
                t.mass_g,
                t.porosity,
                t.time_s
            );
            if *dry_run {
                print_stdout(&format!("{summary}\n{}", schema::to_json(&report)))?;
            } else {
                emit_output(out.as_deref(), &schema::to_json(&plan))?;
                eprintln!("{summary}");
            }
            Ok(0)
        }
        Command::Gcode { plan, out } => {
            let plan = read_plan(plan)?;
            let profile = cfg.gcode_profile(plan.settings.temperature);
            let toolpath = planner::build_toolpath(&plan, profile.travel_feed);
            toolpath.validate().map_err(|e| Error::Data {
                path: "toolpath".into(),
                message: e.to_string(),
            })?;
            let text = gcode::emit(&toolpath, &profile)?;
            emit_output(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify {
            program,
            plan,
            calib,
            out,
        } => {
            let text = io::read_text(program)?;
            let parsed = gcode::parse(&text)?;
            let plan = read_plan(plan)?;
            let model = read_calib(calib)?;
            let report =
                gcode::verify_porosity(&parsed, &plan, model.g * cfg.g_scale, cfg.e_scale)?;
            emit_output(out.as_deref(), &schema::to_json(&report))?;
            if report.pass {
                Ok(0)
            } else {
                Err(Error::Verification(format!(
                    "layers {:?} outside ±{} porosity points, volume error {:.3}%",
                    report.flagged,
                    report.porosity_tolerance,
                    100.0 * report.volume_rel_error
                )))
            }
        }
        Command::Predict { phi, model } => {
            let fit: PowerLawFit = schema::from_json(&io::read_text(model)?, schema::POWERLAW)?;
            let v = mech::property_powerlaw(*phi, &fit.model)?;
            print_stdout(&format!("{v}\n"))?;
            Ok(0)
        }
        Command::Analyze {
            kind,
            data,
            out,
            csv,
            levels,
            unit,
            p_s,
            property,
        } => {
            let (json, table) = match kind {
                AnalysisKind::Compression => analyze_compression(data, levels)?,
                AnalysisKind::Force => analyze_force(data, *unit)?,
                AnalysisKind::Curvature => analyze_curvature(data)?,
                AnalysisKind::Powerlaw => {
                    let p_s = p_s.unwrap_or(mech::shore_a_modulus(47.0) * 1e6);
                    analyze_powerlaw(data, p_s, property)?
                }
            };
            emit_output(out.as_deref(), &json)?;
            if let Some(path) = csv {
                io::write_atomic(path, table.as_bytes())?;
            }
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct CompressionResult {
    direction: mech::Axis,
    samples: usize,
    dissipation_ratio: Option<f64>,
    modulus: Vec<(f64, f64)>,
}

fn default_levels(curve: &CompressionCurve) -> Vec<f64> {
    let loading: Vec<f64> = curve.loading().map(|p| p.0).collect();
    if loading.len() < mech::MODULUS_WINDOW {
        return Vec::new();
    }
    let first = loading[mech::MODULUS_WINDOW - 1];
    let last = *loading.last().unwrap();
    let mut levels: Vec<f64> = (1..=20)
        .map(|k| k as f64 * 0.05)
        .filter(|&l| l >= first && l <= last)
        .collect();
    if levels.last() != Some(&last) {
        levels.push(last);
    }
    levels
}

fn analyze_compression(data: &Path, levels: &[f64]) -> Result<(String, String)> {
    let samples = io::read_compression(data)?;
    let curves = CompressionCurve::from_samples(&samples)?;
    let mut results = Vec::new();
    let mut table = String::from("direction,strain,modulus\n");
    for c in &curves {
        let lv = if levels.is_empty() {
            default_levels(c)
        } else {
            levels.to_vec()
        };
        let modulus = mech::segment_modulus(c, &lv)?;
        for (e, m) in &modulus {
            table.push_str(&format!("{},{e},{m}\n", axis_name(c.direction)));
        }
        let dissipation_ratio = if c.split < c.strain.len() {
            Some(mech::dissipation_ratio(c)?)
        } else {
            None
        };
        results.push(CompressionResult {
            direction: c.direction,
            samples: c.strain.len(),
            dissipation_ratio,
            modulus,
        });
    }
    #[derive(Serialize)]
    struct Out {
        stress_unit: &'static str,
        curves: Vec<CompressionResult>,
    }
    let json = analysis(
        "compression",
        data,
        Out {
            stress_unit: "Pa",
            curves: results,
        },
    );
    Ok((json, table))
}

fn axis_name(a: mech::Axis) -> &'static str {
    match a {
        mech::Axis::X => "x",
        mech::Axis::Y => "y",
        mech::Axis::Z => "z",
    }
}

fn analyze_force(data: &Path, unit: UnitArg) -> Result<(String, String)> {
    let rows: Vec<io::ForceSample> = io::read_csv(data, io::FORCE_COLUMNS)?;
    let trace: Vec<(f64, f64)> = rows.iter().map(|r| (r.t, r.f)).collect();
    let unit = match unit {
        UnitArg::Gf => ForceUnit::GramForce,
        UnitArg::N => ForceUnit::Newton,
    };
    let fit = mech::fit_maxwell(&trace, unit)?;
    #[derive(Serialize)]
    struct Out {
        unit: &'static str,
        fit: mech::MaxwellFit,
        k_sum: f64,
        settling_time_s: f64,
        steady_state_force: f64,
    }
    let mut table = format!("t,F,F_fit ({})\n", unit.symbol());
    let t0 = trace[0].0;
    for (t, f) in &trace {
        table.push_str(&format!("{t},{f},{}\n", fit.force(t - t0)));
    }
    let json = analysis(
        "force",
        data,
        Out {
            unit: unit.symbol(),
            k_sum: fit.k0 + fit.k1,
            settling_time_s: mech::settling_time(&fit),
            steady_state_force: mech::steady_state_force(&fit),
            fit,
        },
    );
    Ok((json, table))
}

fn analyze_curvature(data: &Path) -> Result<(String, String)> {
    let rows: Vec<io::PointSample> = io::read_csv(data, io::POINT_COLUMNS)?;
    if !rows.len().is_multiple_of(3) {
        return Err(Error::Data {
            path: data.display().to_string(),
            message: format!("{} points do not form triples", rows.len()),
        });
    }
    let mut curvatures = Vec::new();
    let mut table = String::from("triple,curvature_per_mm,radius_mm\n");
    for (i, t) in rows.chunks(3).enumerate() {
        let k = mech::curvature_from_points([t[0].x, t[0].y], [t[1].x, t[1].y], [t[2].x, t[2].y])?;
        table.push_str(&format!(
            "{i},{k},{}\n",
            if k > 0.0 { 1.0 / k } else { f64::INFINITY }
        ));
        curvatures.push(k);
    }
    #[derive(Serialize)]
    struct Out {
        unit: &'static str,
        curvature: Vec<f64>,
    }
    let json = analysis(
        "curvature",
        data,
        Out {
            unit: "1/mm",
            curvature: curvatures,
        },
    );
    Ok((json, table))
}

fn analyze_powerlaw(data: &Path, p_s: f64, property: &str) -> Result<(String, String)> {
    let rows: Vec<io::PorositySample> = io::read_csv(data, io::POROSITY_COLUMNS)?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.phi, r.value)).collect();
    let fit = mech::fit_powerlaw(&pts, p_s, property)?;
    let mut table = String::from("phi,value,fitted\n");
    for (phi, v) in &pts {
        table.push_str(&format!(
            "{phi},{v},{}\n",
            mech::property_powerlaw(*phi, &fit.model)?
        ));
    }
    Ok((schema::to_json(&fit), table))
}
