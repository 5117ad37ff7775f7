//! Exact integer linear algebra and arithmetic in `N = F ⊕ Z^d`: Smith and
//! Hermite normal forms, relation lattices of a configuration, lattice
//! indices and the standing hypotheses.

mod group;
mod lattice;
mod matrix;

pub use group::{AbelianGroup, Functional, GroupElement};
pub use lattice::{
    check_hypotheses, free_matrix, kernel_lattice, kernel_lattice_free, lattice_index, HypothesesReport, LatticeIndex,
};
pub use matrix::{
    hermite_normal_form, hnf_contains, hnf_coordinates, integer_kernel, is_unimodular, smith_normal_form, IntMatrix,
    SmithDecomposition,
};
