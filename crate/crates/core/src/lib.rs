//! Process model for printing graded-porosity soft structures by liquid rope
//! coiling.
//!
//! A thermoplastic elastomer extruded from a nozzle held well above the
//! deposition surface buckles into a repeatable row of circular coils. The
//! coil geometry sets the porosity of the printed structure, and the porosity
//! in turn sets its mechanical response. This crate covers the whole chain:
//!
//! - [`coilcore`] closed-form coil geometry and porosity, plus the inverse
//!   (porosity target to extrusion multiplier).
//! - [`calib`] fits the coiling model to line-scan measurements.
//! - [`planner`] turns a declarative part with porosity regions into
//!   feasibility-checked layer plans and a motion toolpath.
//! - [`gcode`] emits Marlin-flavoured G-code, parses it back, and verifies the
//!   porosity of a program by independent volume accounting.
//! - [`mech`] power-law property prediction and the analysis of mechanical
//!   test records.
//! - [`cli`] the `infoam` command-line front end.
//!
//! Runnable walkthroughs for each capability live in `examples/`:
//!
//! ```bash
//! cargo run -p infoam --example coil_geometry
//! cargo run -p infoam --example calibrate_from_scans
//! cargo run -p infoam --example plan_cube
//! cargo run -p infoam --example graded_actuators
//! cargo run -p infoam --example gcode_verify
//! cargo run -p infoam --example foam_mechanics
//! cargo run -p infoam --example actuator_response
//! ```

pub mod calib;
pub mod cli;
pub mod coilcore;
pub mod error;
pub mod gcode;
pub mod geometry;
pub mod io;
pub mod mech;
pub mod planner;
pub mod schema;

pub use error::{Error, Result};

/// Default nozzle diameter (mm).
pub const DEFAULT_NOZZLE_DIAMETER: f64 = 0.4;
/// Default printing temperature (°C).
pub const DEFAULT_TEMPERATURE: f64 = 230.0;
/// Bulk density of the SEBS elastomer (kg/m³).
pub const DEFAULT_BULK_DENSITY: f64 = 900.0;
