//! Exact computations for approval-based committee voting games.
//!
//! Voters approve subsets of alternatives; a committee of `k` alternatives is
//! scored under AV, SAV, CC or PAV. Coalitions may claim a proportional share
//! of seats, which defines transferable (TU) and non-transferable (NTU)
//! utility games whose cores this crate computes and checks. All arithmetic
//! is exact.

pub mod constructive;
mod engine;
pub mod error;
pub mod games;
pub mod guard;
pub mod io;
pub mod model;
pub mod rational;
pub mod reductions;
pub mod scoring;
pub mod shapley;
pub mod simplex;

pub use error::{Error, Result};
pub use guard::EnumerationGuard;
pub use model::{ApprovalProfile, Coalition, Committee, Instance, Rule, UtilityVector};
pub use rational::Rational;
