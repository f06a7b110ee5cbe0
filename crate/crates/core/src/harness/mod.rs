//! Scenario files, CSV output, sweeps and the spot-value regression suite.

pub mod config;
pub mod csv;
pub mod period;
pub mod scenario;
pub mod sweep;
pub mod verify;

pub use config::{Axis, AxisName, Config, Mode, Scenario};
pub use csv::{format_number, Cell, Table};
pub use period::{scan_from_config, scan_min_over_period, PeriodMin, PeriodScan};
pub use scenario::run_scenario;
pub use sweep::{run_sweep, run_sweep_serial, SweepGrid};
pub use verify::{verify_spot_values, Check, VerifyReport, VerifySettings};
