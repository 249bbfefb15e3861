//! Exact computation of type I and type II multiple orthogonal polynomials
//! for finite atomic measure systems, together with mechanical checks of
//! their zero-location and interlacing criteria.
//!
//! Every quantity is an arbitrary-precision rational; nothing in this crate
//! touches floating point.

pub mod criteria;
pub mod families;
pub mod linalg;
pub mod measures;
pub mod poly;
pub mod rational;
pub mod solver;

pub use poly::{IsolatingInterval, Polynomial, PolyError, SturmChain};
pub use rational::{Bound, Rational};
pub use measures::{DiscreteMeasure, Interval, MeasureError, MeasureSystem, SystemKind};
pub use solver::{MultiIndex, SolverError, Transform, TypeIVector};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
