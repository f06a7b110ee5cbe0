//! Two-qubit Heisenberg XY spin chain with Dzyaloshinskii–Moriya coupling
//! under dissipative, noisy and dephasing Lindblad environments.
//!
//! The crate evolves a Werner initial state, either by fixed-step RK4 on the
//! master equation or by closed-form propagators, and tracks concurrence,
//! quantum discord, classical correlation and mutual information along the
//! way.
//!
//! ```
//! use spindyn_core::{werner_state, ModelParams, EnvSpec, EnvKind, evolve_analytic, correlation_report};
//!
//! let params = ModelParams::new(0.2, 0.0).unwrap();
//! let env = EnvSpec::new(EnvKind::Dissipative, 0.5).unwrap();
//! let rho = evolve_analytic(0.5, &params, &env, 3.0).unwrap();
//! let report = correlation_report(&rho).unwrap();
//! assert!(report.discord >= 0.0 && report.concurrence <= 1.0);
//! # let _ = werner_state(0.5);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolve;
pub mod harness;
pub mod linalg;
pub mod measures;
pub mod model;

pub use error::{Error, Result};
pub use evolve::{
    asymptotic_concurrence_dissipative, asymptotic_state, evolve_analytic, evolve_numeric, AnalyticAux, Sample,
    Trajectory,
};
pub use linalg::{ComplexMat2, ComplexMat4, Subsystem, C64};
pub use measures::{
    concurrence_general, concurrence_x, correlation_report, discord_and_classical, discord_bruteforce,
    mutual_information, theta_params, CorrelationReport,
};
pub use model::{
    build_hamiltonian, lindblad_rhs, werner_state, DensityMatrix, EnvKind, EnvSpec, Generator, ModelParams,
};
