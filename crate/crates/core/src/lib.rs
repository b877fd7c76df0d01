//! Numerical verification toolkit for the class `U(lambda)` of normalized
//! analytic functions on the unit disk satisfying
//! `|(z/f(z))^2 f'(z) - 1| < lambda`.
//!
//! - [`tps`]: truncated complex power series.
//! - [`zoo`]: the concrete functions, Blaschke products and scalar formulas.
//! - [`membership`]: the functional `U_f`, grid suprema, class verdicts and
//!   boundary probes.
//! - [`geometry`]: convexity in a direction and subordination checks.
//! - [`harmonic`]: harmonic maps `H + conj(G)` built from `U_2(lambda)`.

pub mod geometry;
pub mod harmonic;
pub mod holomorphic;
pub mod membership;
pub mod tps;
pub mod zoo;

pub use holomorphic::{FnMap, Holomorphic};
pub use num_complex::Complex64;
pub use tps::TruncatedSeries;
