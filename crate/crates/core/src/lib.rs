//! Numerical laboratory for zeta sums and their moments.
//!
//! The crate computes, at desk scale, the objects that appear in upper-bound
//! arguments for moments of partial sums of n^{-it}: the sums themselves on
//! dense t-grids, moment integrals over [T, 2T], shifted moments of the zeta
//! function on and right of the critical line, smooth cutoffs with their
//! Mellin transforms, and truncated Perron contours with explicit error
//! terms. Every bound evaluator sets implied constants to 1 and reports
//! ratios; nothing here proves an inequality, it measures one.

pub mod bounds;
pub mod dd;
pub mod dirichlet;
pub mod error;
pub mod kahan;
pub mod moments;
pub mod oracle;
pub mod perron;
pub mod quad;
pub mod smoothing;
pub mod verify;
pub mod zeta;

pub use error::{LabError, Result};
