use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::cone::{det_i64, distinct_rays, int_rank};
use super::config::PointConfig;

/// Placing triangulation of `conv({0} ∪ A)`. `points[0]` is the origin and
/// the rest are the distinct nonzero `ā_j`; simplices index into `points`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub points: Vec<Vec<i64>>,
    pub simplices: Vec<Vec<usize>>,
}

impl Triangulation {
    /// Maximal simplices having the origin as a vertex, given by their other
    /// `d` vertices. Their cones cover the cone of `A`.
    pub fn cones_at_origin(&self) -> Vec<Vec<Vec<i64>>> {
        self.simplices
            .iter()
            .filter(|s| s.contains(&0))
            .map(|s| s.iter().filter(|&&i| i != 0).map(|&i| self.points[i].clone()).collect())
            .collect()
    }
}

fn edge_det(points: &[Vec<i64>], simplex: &[usize]) -> BigInt {
    let base = &points[simplex[0]];
    let rows: Vec<Vec<i64>> =
        simplex[1..].iter().map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    det_i64(&rows)
}

/// Sign of `det[p_1 − p_0, …, p_{d−1} − p_0, q − p_0]` for a facet `p` and a point `q`.
fn orientation(points: &[Vec<i64>], facet: &[usize], q: &[i64]) -> i32 {
    let base = &points[facet[0]];
    let mut rows: Vec<Vec<i64>> =
        facet[1..].iter().map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rows.push(q.iter().zip(base).map(|(a, b)| a - b).collect());
    let det = det_i64(&rows);
    if det.is_zero() {
        0
    } else if det.is_positive() {
        1
    } else {
        -1
    }
}

pub fn placing_triangulation(config: &PointConfig) -> Triangulation {
    let d = config.d();
    let mut points = vec![vec![0; d]];
    points.extend(distinct_rays(config));
    if int_rank(&points[1..], d) < d || d == 0 {
        return Triangulation { points, simplices: Vec::new() };
    }
    // initial simplex: greedily extend the origin by points raising the rank
    let mut initial = vec![0];
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for i in 1..points.len() {
        if initial.len() == d + 1 {
            break;
        }
        let mut trial = basis.clone();
        trial.push(points[i].clone());
        if int_rank(&trial, d) == trial.len() {
            basis = trial;
            initial.push(i);
        }
    }
    let mut simplices = vec![initial.clone()];
    for i in 1..points.len() {
        if initial.contains(&i) {
            continue;
        }
        // boundary facets: d-subsets lying in exactly one simplex
        let mut count: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
        for (s_idx, s) in simplices.iter().enumerate() {
            for skip in 0..s.len() {
                let facet: Vec<usize> = s.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                let e = count.entry(facet).or_insert((0, s_idx));
                e.0 += 1;
                e.1 = s_idx;
            }
        }
        let mut added = Vec::new();
        for (facet, (c, s_idx)) in count {
            if c != 1 {
                continue;
            }
            let opposite = *simplices[s_idx].iter().find(|v| !facet.contains(v)).unwrap();
            let inside = orientation(&points, &facet, &points[opposite]);
            let new = orientation(&points, &facet, &points[i]);
            if new != 0 && new == -inside {
                let mut s = facet.clone();
                s.push(i);
                s.sort_unstable();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    simplices.sort();
    Triangulation { points, simplices }
}

/// `vol(conv({0} ∪ A))`, normalised so the unit simplex has volume 1.
pub fn normalized_volume(config: &PointConfig) -> BigInt {
    let t = placing_triangulation(config);
    t.simplices.iter().map(|s| edge_det(&t.points, s).abs()).sum()
}
