//! Strategic-ambiguity laboratory.
//!
//! * [`game`] solves the two-party ambiguity game exactly.
//! * [`lab`] sweeps its phase diagram and checks it by simulation.
//! * [`panel`], [`econ`], [`synth`] and [`ingest`] form a panel-regression
//!   workflow for party blurriness data, real or synthetic; [`recipes`]
//!   bundles the study's specification sets.

pub mod econ;
pub mod game;
pub mod ingest;
pub mod lab;
pub mod panel;
pub mod recipes;
pub mod rng;
pub mod synth;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
