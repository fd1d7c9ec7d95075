//! Marlin-flavoured G-code: emission from a toolpath, parsing back into
//! moves, and porosity verification by independent volume accounting.
//!
//! The E axis carries screw rotation. One radian of screw turn is `scale`
//! E units; gearing between the motor and the screw belongs in the
//! firmware's steps-per-unit setting.

mod emit;
mod parse;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use emit::emit;
pub use parse::{parse, ModalChange, ModalState, Move, ParsedProgram, Warning, ZBand};
pub use verify::{verify_porosity, LayerCheck, VerifyReport, POROSITY_TOLERANCE, VOLUME_TOLERANCE};

/// Written into every header so outputs can be traced to the emitter.
pub const EMITTER_VERSION: &str = concat!("infoam ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcodeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("segment {index}: {message}")]
    Segment { index: usize, message: String },
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("program does not match the plan: {0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, GcodeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperaturePolicy {
    /// `M104` then blocking `M109` in the header.
    SetAndWait,
    /// `M104` only.
    Set,
    /// Leave the heater to the printer's start script.
    Omit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcodeProfile {
    /// E units per radian of screw rotation.
    pub scale: f64,
    pub temperature: f64,
    pub temperature_policy: TemperaturePolicy,
    /// mm/min
    pub travel_feed: f64,
    pub relative_e: bool,
    /// Extra lines after the standard header.
    #[serde(default)]
    pub header: Vec<String>,
    /// Extra lines before the heater is switched off.
    #[serde(default)]
    pub footer: Vec<String>,
}

impl Default for GcodeProfile {
    fn default() -> Self {
        Self {
            scale: 1.0,
            temperature: crate::DEFAULT_TEMPERATURE,
            temperature_policy: TemperaturePolicy::SetAndWait,
            travel_feed: 3000.0,
            relative_e: true,
            header: Vec::new(),
            footer: Vec::new(),
        }
    }
}

impl GcodeProfile {
    pub fn check(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(GcodeError::Profile(format!(
                "scale {} must be positive",
                self.scale
            )));
        }
        if !(self.temperature > 0.0 && self.temperature <= 300.0) {
            return Err(GcodeError::Profile(format!(
                "temperature {} °C outside (0, 300]",
                self.temperature
            )));
        }
        if !(self.travel_feed > 0.0) {
            return Err(GcodeError::Profile("travel feed must be positive".into()));
        }
        Ok(())
    }
}
