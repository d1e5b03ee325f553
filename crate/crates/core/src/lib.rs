//! Neural-network modelling of NOx emissions from gas-turbine process data.
//!
//! The pipeline: load yearly CSV logs ([`dataset`]), describe them
//! ([`stats`]), split records ([`trainer::split_temporal`],
//! [`trainer::split_stratified`]), fit a small mixed-activation network
//! ([`network`], [`trainer::train`]), score it ([`trainer::evaluate`]),
//! explain it ([`analysis`]) and search for low-emission settings
//! ([`optimizer`]). [`cli`] wires the steps to on-disk artifacts.

pub mod analysis;
pub mod artifacts;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod network;
pub mod optimizer;
pub mod report;
pub mod stats;
pub mod synth;
pub mod trainer;

pub use error::{Error, Result};
