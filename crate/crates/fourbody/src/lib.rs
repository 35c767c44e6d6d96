//! Floating-point companion of `fourbody-core`: classical trajectories,
//! spectra, Monte Carlo quadrature, verification suites and the CLI.

pub mod compiled;
pub mod dynamics;
pub mod model;
pub mod spectrum;
pub mod orthogonality;
pub mod verify;
pub mod cli;
