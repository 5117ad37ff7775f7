//! Better-behaved GKZ hypergeometric systems over finitely generated abelian
//! groups with torsion, in exact arithmetic.

pub mod binomial;
pub mod cli;
pub mod error;
pub mod exact_algebra;
pub mod group_lattice;
pub mod hypergeometric;
pub mod polyhedral;
pub mod rank_duality;
pub mod semigroup;

pub use error::{Error, Result};
