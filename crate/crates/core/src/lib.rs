//! Random geometric graph laboratory.
//!
//! Samples Poisson point processes in boxes, builds Gilbert and
//! k-nearest-neighbour graphs, computes exact hitting radii for monotone
//! properties (connectivity, minimum degree, k-connectivity, Hamiltonicity),
//! and builds Hamilton cycles constructively from a tessellation of the box.
//! The [`experiments`] module wraps all of this in reproducible Monte Carlo
//! runs.

pub mod algorithms;
pub mod cli;
pub mod construct;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod hitting;
mod grid;
pub mod rng;

pub use error::{Error, Result};
