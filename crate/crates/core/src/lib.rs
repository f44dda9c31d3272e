//! Conditional convex risk measures for portfolio vectors on finite filtered
//! probability spaces, with the `L^0`-module convex-analysis toolkit used to
//! verify their dual representation: gauges, concatenation hulls, projections,
//! separation, polars and Fenchel duality.
//!
//! Every computation decomposes over the blocks of the conditioning algebra;
//! see the crate examples for one runnable walk-through per capability.

pub mod cli;
pub mod convex;
pub mod duality;
pub mod error;
pub mod linprog;
pub mod lpmod;
pub mod optim;
pub mod prob;
pub mod randvar;
pub mod risk;
pub mod scenario;

pub use error::{Error, Result};
pub use lpmod::{Cone, DualElement, Position};
pub use prob::{ProbSpace, SubAlgebra};
pub use randvar::{AtomSet, ExtRandVar, RandVar};
pub use risk::{RiskKind, RiskMeasure};
