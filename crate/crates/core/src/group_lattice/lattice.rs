use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::group::{AbelianGroup, GroupElement};
use super::matrix::{hermite_normal_form, integer_kernel, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};
use crate::polyhedral::{is_pointed, PointConfig};

/// `[N : Z𝒜]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(x) => Some(x),
            LatticeIndex::Infinite => None,
        }
    }
}

fn check_columns(columns: &[GroupElement], group: &AbelianGroup) -> Result<()> {
    if columns.is_empty() {
        return Err(Error::DimensionMismatch("configuration has no columns".into()));
    }
    if let Some(c) = columns.iter().find(|c| !group.contains(c)) {
        return Err(Error::DimensionMismatch(format!("column {c} does not live in {group}")));
    }
    Ok(())
}

/// Presentation of `N / Z𝒜` as the cokernel of a `(k+d) × (n+k)` matrix: the
/// columns `a_j`, followed by the torsion relations `ℓ_i e_i`.
fn presentation(columns: &[GroupElement], group: &AbelianGroup) -> IntMatrix {
    let k = group.torsion_rank();
    let d = group.free_rank();
    let n = columns.len();
    let mut p = IntMatrix::zeros(k + d, n + k);
    for (j, c) in columns.iter().enumerate() {
        for i in 0..k {
            p.set(i, j, BigInt::from(c.torsion[i]));
        }
        for i in 0..d {
            p.set(k + i, j, BigInt::from(c.free[i]));
        }
    }
    for (i, &o) in group.torsion_orders().iter().enumerate() {
        p.set(i, n + i, BigInt::from(o));
    }
    p
}

/// The free-part matrix `A` (`d × n`).
pub fn free_matrix(columns: &[GroupElement], d: usize) -> IntMatrix {
    let mut a = IntMatrix::zeros(d, columns.len());
    for (j, c) in columns.iter().enumerate() {
        for i in 0..d {
            a.set(i, j, BigInt::from(c.free[i]));
        }
    }
    a
}

/// HNF basis of `{u ∈ Z^n : Σ u_j a_j = 0 in N}`.
pub fn kernel_lattice(columns: &[GroupElement], group: &AbelianGroup) -> Result<IntMatrix> {
    check_columns(columns, group)?;
    let n = columns.len();
    let ker = integer_kernel(&presentation(columns, group));
    let projected: Vec<Vec<BigInt>> = ker.row_vecs().into_iter().map(|r| r[..n].to_vec()).collect();
    Ok(hermite_normal_form(&IntMatrix::from_big_rows(projected, n)))
}

/// HNF basis of `ker_Z(A)`.
pub fn kernel_lattice_free(a: &IntMatrix) -> IntMatrix {
    integer_kernel(a)
}

pub fn lattice_index(columns: &[GroupElement], group: &AbelianGroup) -> Result<LatticeIndex> {
    check_columns(columns, group)?;
    let snf = smith_normal_form(&presentation(columns, group));
    let ambient = group.torsion_rank() + group.free_rank();
    if snf.rank() < ambient {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(snf.invariant_factors.iter().product()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesesReport {
    pub spans: bool,
    pub pointed: bool,
    pub delta_divides_ell: bool,
    pub delta: LatticeIndex,
    pub ell: i64,
}

impl HypothesesReport {
    pub fn all_hold(&self) -> bool {
        self.spans && self.pointed && self.delta_divides_ell
    }

    pub fn require(&self) -> Result<()> {
        if self.all_hold() {
            return Ok(());
        }
        let mut failed = Vec::new();
        if !self.spans {
            failed.push("A does not span the free lattice");
        }
        if !self.pointed {
            failed.push("cone is not pointed");
        }
        if !self.delta_divides_ell {
            failed.push("index of Z𝒜 does not divide the torsion index");
        }
        Err(Error::Hypotheses(failed.join("; ")))
    }
}

pub fn check_hypotheses(config: &PointConfig) -> HypothesesReport {
    let a = config.free_matrix();
    let snf = smith_normal_form(a);
    let spans = snf.rank() == config.d() && snf.invariant_factors.iter().all(One::is_one);
    let delta = config.delta().clone();
    let ell = config.ell();
    let delta_divides_ell = match &delta {
        LatticeIndex::Finite(x) => !x.is_zero() && (BigInt::from(ell) % x).is_zero(),
        LatticeIndex::Infinite => false,
    };
    HypothesesReport { spans, pointed: is_pointed(config), delta_divides_ell, delta, ell }
}
