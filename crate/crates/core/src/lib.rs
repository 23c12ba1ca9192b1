//! Simulation and security analysis of a semi-loss-tolerant strong quantum
//! coin flip built from a single photon and QND arrival detection, and of the
//! three-party dice roll built from two such flips.
//!
//! - [`qubit`]: real-amplitude qubit states, measurement and state discrimination.
//! - [`protocol`]: the message-level coin flip with transmission and memory loss.
//! - [`adversary`]: optimal cheating strategies and grid oracles certifying them.
//! - [`analysis`]: closed-form biases and the equal-bias operating point.
//! - [`dice`]: the dice-rolling tournament, its fairness solver and worst cases.
//! - [`experiment`]: Monte Carlo drivers over many coin flips.
//! - [`cli`]: the `qcf` command-line tool.

pub mod adversary;
pub mod analysis;
pub mod cli;
pub mod dice;
pub mod error;
pub mod experiment;
pub mod format;
pub mod protocol;
pub mod qubit;
pub mod sim;

pub use error::{Error, Result};
pub use qubit::{Angle, BasisBitPair, Bit, DensityOperator, MeasurementBasis, PureState};
