//! The cone `K_ℝ = ℝ≥0·π(𝒜)`: facets, faces, pointedness, normalized
//! volume, `ε_A` and the homogenizing functional.

mod arrangement;
mod cone;
mod config;
mod volume;

pub use arrangement::{membership_in_arrangement, AffineSubspace, Arrangement};
pub use cone::{
    epsilon_a, face_lattice, facet_normals, facets, full_face, homogenizing_functional, is_pointed, positive_grading,
    Face,
};
pub(crate) use cone::{combinations, det_i64, dot};
pub use config::PointConfig;
pub use volume::{normalized_volume, placing_triangulation, Triangulation};
