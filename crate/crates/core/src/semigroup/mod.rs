//! The semigroup `ℕ𝒜`, its units, the modules `K` and `K°`, membership and
//! primitive elements `T_prim`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_lattice::GroupElement;
use crate::polyhedral::{
    det_i64, dot, facet_normals, is_pointed, placing_triangulation, positive_grading, PointConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModuleKind {
    K,
    KInterior,
    Explicit,
}

impl ModuleKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModuleKind::K => "K",
            ModuleKind::KInterior => "K_interior",
            ModuleKind::Explicit => "explicit",
        }
    }
}

/// A module `T ⊆ N` over `ℕ𝒜`: `K`, `K°`, or `∪_g (g + ℕ𝒜)`.
#[derive(Debug, Clone)]
pub struct SemigroupModule {
    kind: ModuleKind,
    config: PointConfig,
    generators: Vec<GroupElement>,
    normals: Vec<Vec<i64>>,
    h: Vec<i64>,
    units: Vec<GroupElement>,
}

impl SemigroupModule {
    fn build(kind: ModuleKind, config: &PointConfig, generators: Vec<GroupElement>) -> Result<Self> {
        if !is_pointed(config) {
            return Err(Error::NotPointed);
        }
        let normals = facet_normals(config)?;
        let h = positive_grading(config)?;
        let units = units(config);
        Ok(SemigroupModule { kind, config: config.clone(), generators, normals, h, units })
    }

    pub fn k(config: &PointConfig) -> Result<Self> {
        Self::build(ModuleKind::K, config, Vec::new())
    }

    pub fn k_interior(config: &PointConfig) -> Result<Self> {
        Self::build(ModuleKind::KInterior, config, Vec::new())
    }

    pub fn of_kind(kind: ModuleKind, config: &PointConfig) -> Result<Self> {
        match kind {
            ModuleKind::K => Self::k(config),
            ModuleKind::KInterior => Self::k_interior(config),
            ModuleKind::Explicit => Err(Error::Malformed("explicit modules need generators".into())),
        }
    }

    /// `∪_g (g + ℕ𝒜)`; every generator must lie in `K`.
    pub fn explicit(config: &PointConfig, generators: Vec<GroupElement>) -> Result<Self> {
        let mut reduced = Vec::new();
        for g in generators {
            reduced.push(config.group().element(g.torsion, g.free)?);
        }
        let m = Self::build(ModuleKind::Explicit, config, reduced)?;
        if let Some(bad) = m.generators.iter().find(|g| !m.in_cone(&g.free, false)) {
            return Err(Error::Malformed(format!("explicit generator {bad} is not in K")));
        }
        if m.generators.is_empty() {
            return Err(Error::Malformed("explicit module has no generators".into()));
        }
        Ok(m)
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn config(&self) -> &PointConfig {
        &self.config
    }

    pub fn explicit_generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn facet_normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    /// The grading `h`, strictly positive on every non-unit column.
    pub fn grading(&self) -> &[i64] {
        &self.h
    }

    pub fn h_degree(&self, free: &[i64]) -> i64 {
        dot(&self.h, free)
    }

    pub fn units(&self) -> &[GroupElement] {
        &self.units
    }

    fn in_cone(&self, free: &[i64], strict: bool) -> bool {
        self.normals.iter().all(|n| {
            let v = dot(n, free);
            if strict {
                v > 0
            } else {
                v >= 0
            }
        })
    }

    pub fn contains(&self, t: &GroupElement) -> bool {
        match self.kind {
            ModuleKind::K => self.in_cone(&t.free, false),
            ModuleKind::KInterior => self.in_cone(&t.free, true),
            ModuleKind::Explicit => {
                let mut memo = HashMap::new();
                self.generators.iter().any(|g| {
                    let x = self.config.group().sub(t, g);
                    self.in_semigroup(&x, &mut memo)
                })
            }
        }
    }

    /// `x ∈ ℕ𝒜`, by search on decreasing `h`.
    fn in_semigroup(&self, x: &GroupElement, memo: &mut HashMap<GroupElement, bool>) -> bool {
        if self.h_degree(&x.free) < 0 || !self.in_cone(&x.free, false) {
            return false;
        }
        if x.is_free_zero() {
            return self.units.contains(x);
        }
        if let Some(&known) = memo.get(x) {
            return known;
        }
        let group = self.config.group();
        let result = self.config.non_unit_columns().into_iter().any(|j| {
            let y = group.sub(x, self.config.column(j));
            self.units.iter().any(|u| self.in_semigroup(&group.sub(&y, u), memo))
        });
        memo.insert(x.clone(), result);
        result
    }

    /// Whether `t` is in `S₊ • T`, i.e. `t − a_j ∈ T` for a non-unit column.
    pub fn is_reducible(&self, t: &GroupElement) -> bool {
        let group = self.config.group();
        self.config.non_unit_columns().into_iter().any(|j| self.contains(&group.sub(t, self.config.column(j))))
    }
}

/// The subgroup of `ℕ𝒜` generated by the columns with zero free part.
pub fn units(config: &PointConfig) -> Vec<GroupElement> {
    let group = config.group();
    let gens: Vec<&GroupElement> = config.columns().iter().filter(|c| c.is_free_zero()).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(group.zero());
    queue.push_back(group.zero());
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let v = group.add(&u, g);
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn membership(t: &GroupElement, module: &SemigroupModule) -> bool {
    module.contains(t)
}

/// `T_prim` together with the free degrees `π(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimitiveSet {
    pub elements: Vec<GroupElement>,
    pub degrees: Vec<Vec<i64>>,
}

impl PrimitiveSet {
    fn from_elements(mut elements: Vec<GroupElement>) -> Self {
        elements.sort();
        elements.dedup();
        let degrees = elements.iter().map(|e| e.free.clone()).collect();
        PrimitiveSet { elements, degrees }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, t: &GroupElement) -> bool {
        self.elements.binary_search(t).is_ok()
    }
}

/// Lattice points `Σ μ_j v_j` with `0 ≤ μ_j < 1` (half open) or `≤ 1`
/// (closed) for linearly independent `v_1, …, v_d`.
pub(crate) fn box_points(gens: &[Vec<i64>], closed: bool) -> Vec<Vec<i64>> {
    let d = gens.len();
    let det = det_i64(&transpose(gens)).to_i64().expect("determinant fits in i64");
    assert!(det != 0, "box generators must be independent");
    let adj = adjugate(gens);
    let lo: Vec<i64> = (0..d).map(|i| gens.iter().map(|g| g[i].min(0)).sum()).collect();
    let hi: Vec<i64> = (0..d).map(|i| gens.iter().map(|g| g[i].max(0)).sum()).collect();
    let mut out = Vec::new();
    let mut p = lo.clone();
    loop {
        // μ_j·det = (adj·p)_j
        let ok = adj.iter().all(|row| {
            let v = dot(row, &p) * det.signum();
            v >= 0 && if closed { v <= det.abs() } else { v < det.abs() }
        });
        if ok {
            out.push(p.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i];
            i += 1;
        }
    }
}

fn transpose(v: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = v.len();
    (0..d).map(|i| v.iter().map(|g| g[i]).collect()).collect()
}

/// Rows `r_j` with `r_j · v_k = det·[j = k]`, where `v_k` are the columns.
fn adjugate(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = gens.len();
    (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    // cofactor of entry (i, j) of the matrix with columns v_k
                    let minor: Vec<Vec<i64>> = (0..d)
                        .filter(|&r| r != i)
                        .map(|r| (0..d).filter(|&c| c != j).map(|c| gens[c][r]).collect())
                        .collect();
                    let m = det_i64(&minor).to_i64().expect("minor fits in i64");
                    if (i + j) % 2 == 0 {
                        m
                    } else {
                        -m
                    }
                })
                .collect()
        })
        .collect()
}

fn lift_fibers(config: &PointConfig, frees: impl IntoIterator<Item = Vec<i64>>) -> Vec<GroupElement> {
    let tors = config.group().torsion_elements();
    frees
        .into_iter()
        .flat_map(|f| tors.iter().map(move |t| GroupElement { torsion: t.clone(), free: f.clone() }).collect::<Vec<_>>())
        .collect()
}

/// Free parts of the `T_prim` candidates for `K` or `K°`.
fn candidate_degrees(module: &SemigroupModule) -> BTreeSet<Vec<i64>> {
    let closed = module.kind == ModuleKind::KInterior;
    placing_triangulation(&module.config)
        .cones_at_origin()
        .iter()
        .flat_map(|gens| box_points(gens, closed))
        .collect()
}

/// `T_prim` for `K` or `K°` (explicit modules delegate to
/// [`primitive_elements`]).
pub fn module_generators(module: &SemigroupModule) -> Result<PrimitiveSet> {
    if module.kind == ModuleKind::Explicit {
        return primitive_elements(module);
    }
    let config = &module.config;
    let zero_t = config.group().zero().torsion;
    let prim_free: Vec<Vec<i64>> = candidate_degrees(module)
        .into_iter()
        .filter(|p| {
            let t = GroupElement { torsion: zero_t.clone(), free: p.clone() };
            module.contains(&t) && !module.is_reducible(&t)
        })
        .collect();
    Ok(PrimitiveSet::from_elements(lift_fibers(config, prim_free)))
}

/// The generators of an explicit module not in `S₊ • T`.
pub fn primitive_elements(module: &SemigroupModule) -> Result<PrimitiveSet> {
    if module.kind != ModuleKind::Explicit {
        return Err(Error::Malformed("primitive_elements expects an explicit generator list".into()));
    }
    let kept = module.generators.iter().filter(|g| !module.is_reducible(g)).cloned().collect();
    Ok(PrimitiveSet::from_elements(kept))
}

/// All `t ∈ T` with `h(π(t)) ≤ bound`, sorted.
pub fn elements_up_to(module: &SemigroupModule, bound: i64) -> Vec<GroupElement> {
    let config = &module.config;
    let group = config.group();
    match module.kind {
        ModuleKind::K | ModuleKind::KInterior => {
            let mut frees = BTreeSet::new();
            for gens in placing_triangulation(config).cones_at_origin() {
                let mut queue: VecDeque<Vec<i64>> = box_points(&gens, false).into_iter().collect();
                let mut seen: BTreeSet<Vec<i64>> = queue.iter().cloned().collect();
                while let Some(p) = queue.pop_front() {
                    if module.h_degree(&p) > bound {
                        continue;
                    }
                    frees.insert(p.clone());
                    for g in &gens {
                        let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
                        if seen.insert(q.clone()) {
                            queue.push_back(q);
                        }
                    }
                }
            }
            let mut out: Vec<GroupElement> =
                lift_fibers(config, frees).into_iter().filter(|t| module.contains(t)).collect();
            out.sort();
            out
        }
        ModuleKind::Explicit => {
            let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
            let mut queue = VecDeque::new();
            for g in &module.generators {
                if module.h_degree(&g.free) <= bound && seen.insert(g.clone()) {
                    queue.push_back(g.clone());
                }
            }
            while let Some(t) = queue.pop_front() {
                for c in config.columns() {
                    let s = group.add(&t, c);
                    if module.h_degree(&s.free) <= bound && seen.insert(s.clone()) {
                        queue.push_back(s);
                    }
                }
            }
            seen.into_iter().collect()
        }
    }
}

/// Subtract non-unit columns while staying in `T`; the result is primitive.
pub fn greedy_reduce(module: &SemigroupModule, t: &GroupElement) -> GroupElement {
    let config = &module.config;
    let group = config.group();
    let mut cur = t.clone();
    'outer: loop {
        for j in config.non_unit_columns() {
            let next = group.sub(&cur, config.column(j));
            if module.contains(&next) {
                cur = next;
                continue 'outer;
            }
        }
        return cur;
    }
}
