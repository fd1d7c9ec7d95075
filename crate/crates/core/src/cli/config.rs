use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcode::GcodeProfile;
use crate::planner::{PartDefaults, PlannerConfig};

/// Environment variable naming the default settings file.
pub const CONFIG_ENV: &str = "INFOAM_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Nozzle diameter override (mm).
    pub d: Option<f64>,
    pub temperature: Option<f64>,
    /// Printhead speed override (mm/s).
    pub v_f: Option<f64>,
    /// kg/m³
    pub rho_bulk: f64,
    pub kappa: f64,
    pub n_min: f64,
    /// Multiplies the calibrated extrusion constant.
    pub g_scale: f64,
    /// E units per radian of screw rotation.
    pub e_scale: f64,
    /// mm/min
    pub travel_feed: f64,
    pub exponent: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub verbosity: u8,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let validity = crate::calib::HeightInterval::default();
        Self {
            d: None,
            temperature: None,
            v_f: None,
            rho_bulk: crate::DEFAULT_BULK_DENSITY,
            kappa: 1.0,
            n_min: 1.0,
            g_scale: 1.0,
            e_scale: 1.0,
            travel_feed: 3000.0,
            exponent: crate::calib::CalibConfig::default().exponent,
            h_min: validity.h_min,
            h_max: validity.h_max,
            verbosity: 0,
            seed: 0,
        }
    }
}

fn value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

impl RunConfig {
    /// Reads `path` (or the file named by `INFOAM_CONFIG`) and applies
    /// `key=value` overrides on top.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let env = std::env::var_os(CONFIG_ENV);
        let path = path.or(env.as_deref().map(Path::new));
        let mut table = match path {
            Some(p) => toml::from_str::<toml::Table>(&crate::io::read_text(p)?)
                .map_err(|e| Error::Config(format!("{}: {}", p.display(), e.message())))?,
            None => toml::Table::new(),
        };
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override {o:?} is not key=value")))?;
            table.insert(k.trim().to_string(), value(v.trim()));
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, v) in [("d", self.d), ("v_f", self.v_f)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return bad(format!("{name}={v} must be positive"));
                }
            }
        }
        if let Some(t) = self.temperature {
            if !(t > 0.0 && t <= 300.0) {
                return bad(format!("temperature {t} °C outside (0, 300]"));
            }
        }
        for (name, v) in [
            ("rho_bulk", self.rho_bulk),
            ("kappa", self.kappa),
            ("n_min", self.n_min),
            ("g_scale", self.g_scale),
            ("e_scale", self.e_scale),
            ("travel_feed", self.travel_feed),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name}={v} must be positive"));
            }
        }
        if self.exponent > 0.0 {
            return bad(format!("shear exponent {} must be <= 0", self.exponent));
        }
        if !(self.h_min > 0.0 && self.h_min < self.h_max) {
            return bad(format!(
                "height interval [{}, {}] is empty",
                self.h_min, self.h_max
            ));
        }
        Ok(())
    }

    pub fn apply_part_overrides(&self, defaults: &mut PartDefaults) {
        if let Some(d) = self.d {
            defaults.d = d;
        }
        if let Some(t) = self.temperature {
            defaults.temperature = t;
        }
        if let Some(v) = self.v_f {
            defaults.v_f = v;
        }
    }

    pub fn planner(&self) -> PlannerConfig {
        PlannerConfig {
            kappa: self.kappa,
            n_min: self.n_min,
            ..PlannerConfig::default()
        }
    }

    pub fn gcode_profile(&self, plan_temperature: f64) -> GcodeProfile {
        GcodeProfile {
            scale: self.e_scale,
            temperature: self.temperature.unwrap_or(plan_temperature),
            travel_feed: self.travel_feed,
            ..GcodeProfile::default()
        }
    }
}
