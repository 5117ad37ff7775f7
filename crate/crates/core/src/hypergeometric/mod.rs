//! Weyl algebra, Euler operators, the better-behaved GKZ presentations and
//! the Euler–Koszul vanishing test through quasi-degrees.

mod system;
mod weyl;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub use system::{
    bbgkz_primitive_presentation, bbgkz_relations, default_binomial_bound, euler_operators, h0_face_presentation,
    EulerSet, Relation, RelationKind, SystemPresentation,
};
pub use weyl::{weyl_multiply, WeylElement, WeylMonomial};

use crate::error::Result;
use crate::exact_algebra::Cyclotomic;
use crate::group_lattice::Functional;
use crate::polyhedral::{
    dot, facet_normals, face_lattice, homogenizing_functional, membership_in_arrangement, AffineSubspace, Arrangement,
    Face, PointConfig,
};
use crate::semigroup::{elements_up_to, SemigroupModule};

/// Modules whose quasi-degrees are computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleSpec {
    K,
    KInterior,
    KModKInterior,
    /// `shift + C(A ∩ τ)`; the character does not affect the degrees.
    Face { face: Face, shift: Vec<BigRational> },
}

/// `h`-degree up to which boundary degrees of `K/K°` are enumerated.
pub const BOUNDARY_ENUMERATION_BOUND: i64 = 4;

/// Zariski closure of the degrees of the module, as a union of affine spans.
pub fn quasi_degrees(spec: &ModuleSpec, config: &PointConfig) -> Result<Arrangement> {
    let d = config.d();
    let all: Vec<usize> = (0..config.n()).collect();
    let subspaces = match spec {
        ModuleSpec::K | ModuleSpec::KInterior => {
            vec![AffineSubspace::new(config, vec![BigRational::zero(); d], all)]
        }
        ModuleSpec::KModKInterior => {
            let k = SemigroupModule::k(config)?;
            let interior = SemigroupModule::k_interior(config)?;
            let boundary: Vec<Vec<i64>> = elements_up_to(&k, BOUNDARY_ENUMERATION_BOUND)
                .into_iter()
                .filter(|t| !interior.contains(t))
                .map(|t| t.free)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let normals = facet_normals(config)?;
            let faces = face_lattice(config)?;
            let mut out = BTreeSet::new();
            for nrm in &normals {
                let on: Vec<&Vec<i64>> = boundary.iter().filter(|t| dot(nrm, t) == 0).collect();
                if on.is_empty() {
                    continue;
                }
                let facet = faces
                    .iter()
                    .find(|f| f.normal_functionals.len() == 1 && &f.normal_functionals[0] == nrm)
                    .expect("every facet normal cuts out a face");
                // boundary points on a facet lie in its span
                out.insert(AffineSubspace::new(config, vec![BigRational::zero(); d], facet.column_indices.clone()));
            }
            out.into_iter().collect()
        }
        ModuleSpec::Face { face, shift } => {
            vec![AffineSubspace::new(config, shift.clone(), face.column_indices.clone())]
        }
    };
    Ok(Arrangement { subspaces })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Vanishing {
    Vanishes,
    Nonvanishing,
}

/// `H_0` is nonzero exactly when `β` lies in the quasi-degrees.
pub fn vanishing_test(spec: &ModuleSpec, config: &PointConfig, beta: &[Cyclotomic]) -> Result<Vanishing> {
    let arr = quasi_degrees(spec, config)?;
    Ok(if membership_in_arrangement(beta, &arr) { Vanishing::Nonvanishing } else { Vanishing::Vanishes })
}

/// A functional with `h·ā_j = 1` for all `j`, which certifies regular
/// holonomic homology.
pub fn regularity_certificate(config: &PointConfig) -> Option<Functional> {
    homogenizing_functional(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arrangements() {
        let c = PointConfig::free(&[vec![1, 0], vec![1, 2]]).unwrap();
        let k = quasi_degrees(&ModuleSpec::K, &c).unwrap();
        assert_eq!(k.subspaces.len(), 1);
        assert!(membership_in_arrangement(&[Cyclotomic::from_rational(q(1, 3)), Cyclotomic::from_int(7)], &k));
        let bd = quasi_degrees(&ModuleSpec::KModKInterior, &c).unwrap();
        let cols: Vec<Vec<usize>> = bd.subspaces.iter().map(|s| s.columns.clone()).collect();
        assert_eq!(cols, vec![vec![0], vec![1]]);
        assert!(bd.subspaces.iter().all(|s| s.shift.iter().all(Zero::is_zero)));

        let a = PointConfig::free(&[vec![1]]).unwrap();
        let zero = face_lattice(&a).unwrap().remove(0);
        let spec = ModuleSpec::Face { face: zero, shift: vec![BigRational::zero()] };
        assert_eq!(vanishing_test(&spec, &a, &[Cyclotomic::zero()]).unwrap(), Vanishing::Nonvanishing);
        assert_eq!(vanishing_test(&spec, &a, &[Cyclotomic::from_int(5)]).unwrap(), Vanishing::Vanishes);
        assert_eq!(
            vanishing_test(&ModuleSpec::K, &a, &[Cyclotomic::from_rational(q(-7, 2))]).unwrap(),
            Vanishing::Nonvanishing
        );
    }

    #[test]
    fn certificates() {
        let c = PointConfig::free(&[vec![1, 0], vec![1, 2]]).unwrap();
        let h = regularity_certificate(&c).unwrap();
        assert_eq!(h.free_part, vec![BigRational::one(), BigRational::zero()]);
        assert!(regularity_certificate(&PointConfig::free(&[vec![1], vec![2]]).unwrap()).is_none());
        let h1 = regularity_certificate(&PointConfig::free(&[vec![1]]).unwrap()).unwrap();
        assert_eq!(h1.free_part, vec![BigRational::one()]);
    }
}
