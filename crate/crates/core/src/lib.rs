//! Helper selection for regenerating codes.
//!
//! Exact min-cut formulas for blind, family and family-plus helper selection,
//! an information flow graph simulator with exact max-flow used as an
//! independent oracle, optimality classification and tradeoff curves.

pub mod classify;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod formulas;
pub mod ifg;
pub mod limits;
pub mod model;
pub mod perms;
pub mod scalar;
pub mod tradeoff;

pub use error::{Error, Result};
pub use limits::Limits;
pub use model::{FamilyStructure, GroupPartition, SystemParams};
pub use scalar::ExactScalar;
