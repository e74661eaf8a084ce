//! Numerical privacy accounting with trade-off functions (f-DP).
//!
//! Curves are [`TradeoffCurve`] values: closed-form families where they
//! exist, piecewise-linear grids otherwise. On top of that sit duality with
//! `(ε, δ)`-DP, moment and divergence functionals, composition (exact and
//! central-limit), amplification by subsampling, and a NoisySGD accountant.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod accountant;
pub mod catalog;
pub mod compose;
pub mod curves;
pub mod error;
pub mod functionals;
pub mod duality;
pub mod numerics;
pub mod subsample;

pub use catalog::{DiscretePair, LocationCdf};
pub use curves::{from_grid, GridCurve, TradeoffCurve, ValidationReport, Violation};
pub use error::{FdpError, Result};
pub use numerics::Tolerance;
