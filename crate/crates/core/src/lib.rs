#![no_std]
//! Exact algebra for reduced few-body radial operators: rationals and
//! radical extensions, sparse polynomials, rational functions and
//! differential operators with rational-function coefficients.

extern crate alloc;

pub mod catalog;
pub mod diffop;
pub mod error;
pub mod gauge;
pub mod generators;
pub mod geometry;
pub mod identities;
pub mod linalg;
pub mod metric;
pub mod nbody;
pub mod parse;
pub mod poly;
pub mod pushforward;
pub mod qes;
pub mod rational;
pub mod ratfunc;
pub mod registry;
pub mod scalar;
pub mod symmetry;
pub mod univariate;

pub use diffop::DiffOp;
pub use error::{Error, Result};
pub use gauge::{gauge_conjugate, GaugeFactor};
pub use metric::{laplace_beltrami, MetricBundle};
pub use poly::{Monomial, Poly};
pub use rational::{q, Rational};
pub use ratfunc::RatFunc;
pub use registry::Registry;
pub use scalar::{Coeff, Surd};
