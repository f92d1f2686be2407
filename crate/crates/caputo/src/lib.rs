//! High-order block time stepping for Caputo fractional initial-value
//! problems `D^nu y = f(x, y)`, `y(0) = y0`, `0 < nu <= 1`.
//!
//! The discrete derivative comes from piecewise-quadratic interpolation over
//! two-step blocks, giving `3 - nu` convergence for smooth solutions with the
//! first two steps solved as a coupled pair. The crate bundles:
//!
//! - [`weights`]: the scheme coefficients (first-step rows, history rows);
//! - [`operator`]: grids and the discrete Caputo derivative;
//! - [`solver`]: Newton time stepping, plain and correction-augmented;
//! - [`corrections`]: starting weights for singular solutions;
//! - [`analysis`] and [`verification`]: the coefficient sequences from the
//!   stability/convergence analysis and numerical checks of every
//!   inequality they satisfy;
//! - [`problems`] and [`study`]: benchmark problems and the convergence
//!   harness behind the `caputo` CLI.
//!
//! See the `examples/` directory for one runnable example per capability.

// frozen oracle constants in tests carry more digits than f64 resolves
#![allow(clippy::excessive_precision)]

pub mod analysis;
pub mod corrections;
pub mod error;
mod linalg;
pub mod operator;
pub mod problems;
pub mod solver;
pub mod special;
pub mod study;
pub mod verification;
pub mod weights;

pub use error::{Error, Result};
pub use operator::{corrected_discrete_caputo, discrete_caputo, Grid};
pub use solver::{solve, solve_corrected, NewtonConfig, Problem, Trajectory};
pub use weights::Order;
