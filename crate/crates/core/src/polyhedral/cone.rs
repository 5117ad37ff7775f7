use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::config::PointConfig;
use crate::error::{Error, Result};
use crate::exact_algebra::solve_rational;
use crate::group_lattice::{hermite_normal_form, hnf_coordinates, Functional, IntMatrix};

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn int_rank(rows: &[Vec<i64>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(rows, cols).rank()
}

pub(crate) fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    IntMatrix::from_rows(rows, n).determinant()
}

/// Distinct nonzero free parts, in first-occurrence order.
pub(crate) fn distinct_rays(config: &PointConfig) -> Vec<Vec<i64>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in config.columns() {
        if !c.is_free_zero() && seen.insert(c.free.clone()) {
            out.push(c.free.clone());
        }
    }
    out
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g <= 1 {
        return v;
    }
    v.into_iter().map(|x| x / g).collect()
}

/// Normal to the hyperplane spanned by `d − 1` vectors of `Z^d`: the
/// cofactor vector, so that `normal · v = det[v; rows]`.
fn cross(rows: &[Vec<i64>], d: usize) -> Vec<i64> {
    (0..d)
        .map(|i| {
            let minor: Vec<Vec<i64>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, &x)| x).collect()).collect();
            let m = det_i64(&minor).to_i64().expect("minor fits in i64");
            if i % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

/// Facet normals of the cone spanned by `rays`, assumed full dimensional in
/// `Z^d`. Sorted, primitive, inner.
fn facet_normals_full(rays: &[Vec<i64>], d: usize) -> Vec<Vec<i64>> {
    let mut found = BTreeSet::new();
    for subset in combinations(rays.len(), d - 1) {
        let rows: Vec<Vec<i64>> = subset.iter().map(|&i| rays[i].clone()).collect();
        let normal = cross(&rows, d);
        if normal.iter().all(|&x| x == 0) {
            continue;
        }
        let normal = primitive(normal);
        let values: Vec<i64> = rays.iter().map(|r| dot(&normal, r)).collect();
        if values.iter().all(|&v| v >= 0) {
            found.insert(normal);
        } else if values.iter().all(|&v| v <= 0) {
            found.insert(normal.into_iter().map(|x| -x).collect());
        }
    }
    found.into_iter().collect()
}

/// Primitive inner facet normals as integer vectors, lexicographically sorted.
pub fn facet_normals(config: &PointConfig) -> Result<Vec<Vec<i64>>> {
    let rays = distinct_rays(config);
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    let d = config.d();
    let r = int_rank(&rays, d);
    if r < d {
        return Err(Error::NotFullDimensional { rank: r, dim: d });
    }
    Ok(facet_normals_full(&rays, d))
}

/// The facet functionals `𝓕_K`.
pub fn facets(config: &PointConfig) -> Result<Vec<Functional>> {
    Ok(facet_normals(config)?.iter().map(|v| Functional::from_integers(v)).collect())
}

fn pointed_rays(rays: &[Vec<i64>], d: usize) -> bool {
    if rays.is_empty() {
        return true;
    }
    let r = int_rank(rays, d);
    if r < d {
        // rewrite the rays in a basis of the lattice they span
        let span = IntMatrix::from_rows(rays, d);
        let basis = hermite_normal_form(&span);
        let coords: Vec<Vec<i64>> = rays
            .iter()
            .map(|v| {
                let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
                hnf_coordinates(&basis, &big)
                    .expect("ray lies in its own span")
                    .iter()
                    .map(|c| c.to_i64().expect("coordinate fits in i64"))
                    .collect()
            })
            .collect();
        return pointed_rays(&coords, r);
    }
    let normals = facet_normals_full(rays, d);
    int_rank(&normals, d) == d
}

/// Whether some functional is strictly positive on every nonzero `ā_j`.
pub fn is_pointed(config: &PointConfig) -> bool {
    pointed_rays(&distinct_rays(config), config.d())
}

/// An integral functional strictly positive on every nonzero `ā_j`: the sum
/// of the facet normals.
pub fn positive_grading(config: &PointConfig) -> Result<Vec<i64>> {
    let normals = facet_normals(config)?;
    if !is_pointed(config) {
        return Err(Error::NotPointed);
    }
    let d = config.d();
    let h: Vec<i64> = (0..d).map(|i| normals.iter().map(|n| n[i]).sum()).collect();
    debug_assert!(distinct_rays(config).iter().all(|r| dot(&h, r) > 0));
    Ok(h)
}

/// A face `τ` of the cone, identified with the columns lying on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face {
    pub dim: usize,
    pub column_indices: Vec<usize>,
    /// Facet normals vanishing on `τ`.
    pub normal_functionals: Vec<Vec<i64>>,
}

impl Face {
    pub fn contains_column(&self, j: usize) -> bool {
        self.column_indices.binary_search(&j).is_ok()
    }

    /// Columns off the face.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| !self.contains_column(j)).collect()
    }
}

fn make_face(config: &PointConfig, cols: Vec<usize>, normals: &[Vec<i64>]) -> Face {
    let free: Vec<Vec<i64>> = cols.iter().map(|&j| config.column(j).free.clone()).collect();
    let dim = int_rank(&free, config.d());
    let normal_functionals = normals.iter().filter(|n| free.iter().all(|v| dot(n, v) == 0)).cloned().collect();
    Face { dim, column_indices: cols, normal_functionals }
}

/// The full cone as a face.
pub fn full_face(config: &PointConfig) -> Face {
    make_face(config, (0..config.n()).collect(), &[])
}

/// All faces from `{0}` to the full cone, sorted by dimension then columns.
pub fn face_lattice(config: &PointConfig) -> Result<Vec<Face>> {
    if !is_pointed(config) {
        return Err(Error::NotPointed);
    }
    let normals = facet_normals(config)?;
    let n = config.n();
    let zero_sets: Vec<BTreeSet<usize>> = normals
        .iter()
        .map(|nv| (0..n).filter(|&j| dot(nv, &config.column(j).free) == 0).collect())
        .collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    faces.insert((0..n).collect());
    loop {
        let mut fresh = Vec::new();
        for f in &faces {
            for z in &zero_sets {
                let g: BTreeSet<usize> = f.intersection(z).copied().collect();
                if !faces.contains(&g) {
                    fresh.push(g);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        faces.extend(fresh);
    }
    let mut out: Vec<Face> =
        faces.into_iter().map(|s| make_face(config, s.into_iter().collect(), &normals)).collect();
    out.sort_by(|a, b| (a.dim, &a.column_indices).cmp(&(b.dim, &b.column_indices)));
    Ok(out)
}

/// `ε_A = Σ_j ā_j`.
pub fn epsilon_a(config: &PointConfig) -> Vec<i64> {
    (0..config.d()).map(|i| config.columns().iter().map(|c| c.free[i]).sum()).collect()
}

/// A rational `h̄` with `h̄·ā_j = 1` for every `j`, if one exists.
pub fn homogenizing_functional(config: &PointConfig) -> Option<Functional> {
    let d = config.d();
    let a = config.free_matrix();
    let rows: Vec<Vec<BigRational>> =
        (0..d).map(|i| a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let ones = vec![BigRational::one(); config.n()];
    solve_rational(&rows, &ones).map(|h| Functional { free_part: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_lattice::AbelianGroup;

    fn cfg(cols: &[&[i64]]) -> PointConfig {
        PointConfig::free(&cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn facet_examples() {
        assert_eq!(facet_normals(&cfg(&[&[1, 0], &[1, 2]])).unwrap(), vec![vec![0, 1], vec![2, -1]]);
        assert_eq!(facet_normals(&cfg(&[&[1]])).unwrap(), vec![vec![1]]);
        assert_eq!(facet_normals(&cfg(&[&[1, 0], &[1, 1], &[1, 2]])).unwrap(), vec![vec![0, 1], vec![2, -1]]);
        let g = AbelianGroup::new(vec![2], 1).unwrap();
        let torsion_only = PointConfig::new(g, vec![vec![1]], vec![vec![0]]).unwrap();
        assert_eq!(facet_normals(&torsion_only), Err(Error::EmptyCone));
        assert!(matches!(facet_normals(&cfg(&[&[1, 1]])), Err(Error::NotFullDimensional { rank: 1, dim: 2 })));
    }

    #[test]
    fn pointedness() {
        assert!(is_pointed(&cfg(&[&[1], &[2]])));
        assert!(!is_pointed(&cfg(&[&[1], &[-1]])));
        assert!(is_pointed(&cfg(&[&[1, 0], &[1, 2]])));
        assert!(!is_pointed(&cfg(&[&[1, 0], &[-1, 0], &[0, 1]])));
        // lower dimensional but pointed
        assert!(is_pointed(&cfg(&[&[1, 1, 0], &[2, 2, 0]])));
        assert!(!is_pointed(&cfg(&[&[1, 1, 0], &[-2, -2, 0]])));
        assert!(is_pointed(&cfg(&[&[1, 0, 0], &[0, 1, 0]])));
    }

    #[test]
    fn faces() {
        let f = face_lattice(&cfg(&[&[1], &[2]])).unwrap();
        let cols: Vec<_> = f.iter().map(|x| x.column_indices.clone()).collect();
        assert_eq!(cols, vec![vec![], vec![0, 1]]);

        let f = face_lattice(&cfg(&[&[1, 0], &[1, 1], &[1, 2]])).unwrap();
        let cols: Vec<_> = f.iter().map(|x| x.column_indices.clone()).collect();
        assert_eq!(cols, vec![vec![], vec![0], vec![2], vec![0, 1, 2]]);
        assert_eq!(f[0].normal_functionals.len(), 2);
        assert_eq!(f[3].dim, 2);
        assert!(matches!(face_lattice(&cfg(&[&[1], &[-1]])), Err(Error::NotPointed)));
    }

    #[test]
    fn epsilon_and_homogenizing() {
        assert_eq!(epsilon_a(&cfg(&[&[1, 0], &[1, 0], &[1, 2]])), vec![3, 2]);
        assert_eq!(homogenizing_functional(&cfg(&[&[1, 0], &[1, 2]])).unwrap(), Functional::from_integers(&[1, 0]));
        assert!(homogenizing_functional(&cfg(&[&[1], &[2]])).is_none());
        assert_eq!(homogenizing_functional(&cfg(&[&[1]])).unwrap(), Functional::from_integers(&[1]));
    }

    #[test]
    fn grading_is_positive() {
        let c = cfg(&[&[1, 0], &[1, 1], &[1, 2]]);
        let h = positive_grading(&c).unwrap();
        assert_eq!(h, vec![2, 0]);
    }
}
