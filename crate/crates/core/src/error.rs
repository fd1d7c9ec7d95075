//! Crate-level error and the process exit codes the CLI maps it to.

use std::path::PathBuf;

use thiserror::Error;

use crate::calib::CalibError;
use crate::coilcore::CoilError;
use crate::gcode::GcodeError;
use crate::mech::MechError;
use crate::planner::PlanError;
use crate::schema::SchemaError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Data { path: String, message: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Coil(#[from] CoilError),
    #[error(transparent)]
    Calib(#[from] CalibError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Gcode(#[from] GcodeError),
    #[error(transparent)]
    Mech(#[from] MechError),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 2 for bad input, 3 when the part cannot be printed as specified, 4
    /// when a program fails verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Plan(
                PlanError::Infeasible { .. }
                | PlanError::NoFeasibleHeight { .. }
                | PlanError::FeatureTooSmall { .. }
                | PlanError::Regime { .. },
            )
            | Error::Coil(CoilError::InfeasibleTarget { .. } | CoilError::EmptyRegime { .. }) => 3,
            Error::Verification(_) | Error::Gcode(GcodeError::Structure(_)) => 4,
            _ => 2,
        }
    }

    /// Short machine-readable category for the one-line error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Data { .. } => "data",
            Error::Config(_) => "config",
            Error::Schema(_) => "schema",
            Error::Coil(_) => "coil",
            Error::Calib(_) => "calibration",
            Error::Plan(_) if self.exit_code() == 3 => "infeasible",
            Error::Plan(_) => "plan",
            Error::Gcode(_) if self.exit_code() == 4 => "verification",
            Error::Gcode(_) => "gcode",
            Error::Mech(_) => "mechanics",
            Error::Verification(_) => "verification",
        }
    }
}
