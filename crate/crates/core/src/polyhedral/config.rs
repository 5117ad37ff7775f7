use crate::error::{Error, Result};
use crate::group_lattice::{free_matrix, lattice_index, AbelianGroup, GroupElement, IntMatrix, LatticeIndex};

/// The multi-set `𝒜 = {a_1, …, a_n} ⊆ N`, kept as an ordered column list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    group: AbelianGroup,
    columns: Vec<GroupElement>,
    a: IntMatrix,
    delta: LatticeIndex,
}

impl PointConfig {
    pub fn from_columns(group: AbelianGroup, columns: Vec<GroupElement>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::DimensionMismatch("configuration has no columns".into()));
        }
        let mut reduced = Vec::with_capacity(columns.len());
        for c in columns {
            reduced.push(group.element(c.torsion, c.free)?);
        }
        let delta = lattice_index(&reduced, &group)?;
        let a = free_matrix(&reduced, group.free_rank());
        Ok(PointConfig { group, columns: reduced, a, delta })
    }

    /// Columns given as parallel per-column torsion and free coordinates.
    pub fn new(group: AbelianGroup, torsion: Vec<Vec<i64>>, free: Vec<Vec<i64>>) -> Result<Self> {
        if torsion.len() != free.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} torsion parts for {} free parts",
                torsion.len(),
                free.len()
            )));
        }
        let cols = torsion.into_iter().zip(free).map(|(t, f)| GroupElement { torsion: t, free: f }).collect();
        Self::from_columns(group, cols)
    }

    /// Torsion-free configuration in `Z^d`, `d` = length of the first column.
    pub fn free(columns: &[Vec<i64>]) -> Result<Self> {
        let d = columns.first().map(Vec::len).ok_or_else(|| Error::DimensionMismatch("no columns".into()))?;
        let group = AbelianGroup::free(d);
        Self::new(group, vec![Vec::new(); columns.len()], columns.to_vec())
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn columns(&self) -> &[GroupElement] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &GroupElement {
        &self.columns[j]
    }

    /// `A`, the `d × n` matrix of free parts.
    pub fn free_matrix(&self) -> &IntMatrix {
        &self.a
    }

    /// `ā_j` for every column.
    pub fn free_columns(&self) -> Vec<Vec<i64>> {
        self.columns.iter().map(|c| c.free.clone()).collect()
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn d(&self) -> usize {
        self.group.free_rank()
    }

    /// `ℓ = |F|`.
    pub fn ell(&self) -> i64 {
        self.group.torsion_index()
    }

    /// `δ = [N : Z𝒜]`.
    pub fn delta(&self) -> &LatticeIndex {
        &self.delta
    }

    pub fn is_torsion_free(&self) -> bool {
        self.group.torsion_rank() == 0
    }

    /// Indices of the columns with nonzero free part.
    pub fn non_unit_columns(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| !self.columns[j].is_free_zero()).collect()
    }

    /// The same configuration with columns reordered: `perm[k]` is the old
    /// index of the new `k`-th column.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::from_columns(self.group.clone(), perm.iter().map(|&j| self.columns[j].clone()).collect())
    }

    /// The torsion-free configuration `A` of free parts.
    pub fn forget_torsion(&self) -> Result<Self> {
        Self::new(AbelianGroup::free(self.d()), vec![Vec::new(); self.n()], self.free_columns())
    }
}
