//! Shared configurations and independent oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tgkz::group_lattice::{check_hypotheses, AbelianGroup};
use tgkz::polyhedral::PointConfig;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn prod_struct() -> PointConfig {
    PointConfig::new(AbelianGroup::new(vec![2], 1).unwrap(), vec![vec![1]], vec![vec![1]]).unwrap()
}

pub fn z4() -> PointConfig {
    PointConfig::new(AbelianGroup::new(vec![4], 1).unwrap(), vec![vec![1], vec![1]], vec![vec![1], vec![2]]).unwrap()
}

pub fn free(cols: &[&[i64]]) -> PointConfig {
    PointConfig::free(&cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Configurations that satisfy all hypotheses, with names.
pub fn battery() -> Vec<(&'static str, PointConfig)> {
    let out = vec![
        ("prod_struct", prod_struct()),
        ("z4", z4()),
        ("segment3", free(&[&[1, 0], &[1, 1], &[1, 2]])),
        ("a12", free(&[&[1], &[2]])),
        ("a1", free(&[&[1]])),
        ("a123", free(&[&[1], &[2], &[3]])),
        ("square", free(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[1, 1, 1]])),
        (
            "z2_wedge",
            PointConfig::new(AbelianGroup::new(vec![2], 2).unwrap(), vec![vec![0], vec![1]], vec![vec![1, 0], vec![1, 1]])
                .unwrap(),
        ),
        (
            "z3_plane",
            PointConfig::new(
                AbelianGroup::new(vec![3], 2).unwrap(),
                vec![vec![1], vec![0], vec![2]],
                vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            )
            .unwrap(),
        ),
    ];
    for (name, c) in &out {
        assert!(check_hypotheses(c).all_hold(), "battery config {name} fails the hypotheses");
    }
    out
}

/// Homogeneous battery members: all columns on an affine hyperplane at height 1.
pub fn homogeneous_names() -> BTreeSet<&'static str> {
    ["prod_struct", "segment3", "a1", "square", "z2_wedge"].into_iter().collect()
}

/// A random pointed, full-dimensional configuration with `d ≤ 2`, `n ≤ 4`,
/// entries `≤ 3` and at most one torsion factor from `{2, 3, 4}`.
pub fn random_config(rng: &mut ChaCha8Rng) -> PointConfig {
    loop {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d..=4);
        let orders: Vec<i64> = if rng.gen_bool(0.6) { vec![[2, 3, 4][rng.gen_range(0..3)]] } else { Vec::new() };
        let free: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..=3)).collect()).collect();
        let torsion: Vec<Vec<i64>> = (0..n).map(|_| orders.iter().map(|&o| rng.gen_range(0..o)).collect()).collect();
        if free.iter().all(|c| c.iter().all(|&x| x == 0)) {
            continue;
        }
        let group = AbelianGroup::new(orders, d).unwrap();
        let Ok(c) = PointConfig::new(group, torsion, free) else { continue };
        if c.free_matrix().rank() == d {
            return c;
        }
    }
}

/// Primitive integer vectors `v ≠ 0` with `|v_i| ≤ bound`.
fn primitive_vectors(d: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|p: Vec<i64>| (-bound..=bound).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out.into_iter()
        .filter(|v| {
            let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
            g == 1
        })
        .collect()
}

fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    rational_rank(&mut m)
}

pub fn rational_rank(m: &mut [Vec<BigRational>]) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let v = &m[r][k] * &f;
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Facet normals by scanning every primitive normal within the
/// Hadamard-type bound on the `(d−1)`-minors.
pub fn brute_force_facets(cols: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let d = cols[0].len();
    if d == 1 {
        return [vec![1]].into_iter().collect();
    }
    let m = cols.iter().flatten().map(|x| x.abs()).max().unwrap_or(1);
    let bound = (1..d as i64).product::<i64>() * m.pow(d as u32 - 1);
    primitive_vectors(d, bound)
        .into_iter()
        .filter(|v| {
            let vals: Vec<i64> = cols.iter().map(|c| c.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
            if vals.iter().any(|&x| x < 0) {
                return false;
            }
            let zero: Vec<Vec<i64>> = cols.iter().zip(&vals).filter(|(_, &x)| x == 0).map(|(c, _)| c.clone()).collect();
            rank_i64(&zero) == d - 1
        })
        .collect()
}

/// `d!·area` of `conv(A ∪ {0})` for `d ≤ 2`, from the convex hull.
pub fn volume_oracle(cols: &[Vec<i64>]) -> BigInt {
    let d = cols[0].len();
    if d == 1 {
        return BigInt::from(cols.iter().map(|c| c[0].abs()).max().unwrap());
    }
    assert_eq!(d, 2);
    let mut pts: Vec<(i64, i64)> = cols.iter().map(|c| (c[0], c[1])).collect();
    pts.push((0, 0));
    pts.sort();
    pts.dedup();
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let twice: i64 = (0..hull.len())
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum();
    BigInt::from(twice.abs())
}

/// A Weyl algebra operator with rational coefficients, as a map from
/// `(x-exponents, ∂-exponents)` to coefficients.
pub type Op = BTreeMap<(Vec<u32>, Vec<u32>), BigRational>;

fn choose(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// `P·Q`, normal ordered one variable at a time.
pub fn op_mul(p: &Op, q: &Op) -> Op {
    let mut out = Op::new();
    for ((a, b), c1) in p {
        for ((c, d), c2) in q {
            let n = a.len();
            // per variable: ∂^b x^c = Σ_k C(b,k)·c^(k) x^{c−k} ∂^{b−k}
            let mut partial: Vec<(Vec<u32>, Vec<u32>, BigInt)> = vec![(Vec::new(), Vec::new(), BigInt::one())];
            for j in 0..n {
                let mut next = Vec::new();
                for (xs, ds, w) in &partial {
                    for k in 0..=b[j].min(c[j]) {
                        let mut xs = xs.clone();
                        let mut ds = ds.clone();
                        xs.push(a[j] + c[j] - k);
                        ds.push(b[j] - k + d[j]);
                        next.push((xs, ds, w * choose(b[j], k) * falling(c[j], k)));
                    }
                }
                partial = next;
            }
            for (xs, ds, w) in partial {
                let e = out.entry((xs.clone(), ds.clone())).or_insert_with(BigRational::zero);
                *e += c1 * c2 * BigRational::from_integer(w);
                if e.is_zero() {
                    out.remove(&(xs, ds));
                }
            }
        }
    }
    out
}

pub fn op_degree(p: &Op) -> u32 {
    p.keys().map(|(a, b)| a.iter().chain(b).sum()).max().unwrap_or(0)
}

fn monomials_up_to(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..vars {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                let used: u32 = p.iter().sum();
                (0..=deg - used).map(move |e| [p.clone(), vec![e]].concat())
            })
            .collect();
    }
    out
}

/// Whether `1` is a left combination `Σ P_k·R_k` with `deg P_k + deg R_k ≤ degree`.
pub fn one_in_left_ideal(n: usize, relations: &[Op], degree: u32) -> bool {
    let mut rows: Vec<Op> = Vec::new();
    for r in relations {
        let rd = op_degree(r);
        if rd > degree {
            continue;
        }
        for m in monomials_up_to(2 * n, degree - rd) {
            let mult: Op = [((m[..n].to_vec(), m[n..].to_vec()), BigRational::one())].into_iter().collect();
            let prod = op_mul(&mult, r);
            if !prod.is_empty() {
                rows.push(prod);
            }
        }
    }
    // sparse elimination; the unit monomial is the smallest key
    let one_key = (vec![0; n], vec![0; n]);
    let mut pivots: BTreeMap<(Vec<u32>, Vec<u32>), Op> = BTreeMap::new();
    let reduce = |mut v: Op, pivots: &BTreeMap<(Vec<u32>, Vec<u32>), Op>| -> Op {
        loop {
            let Some(lead) = v.keys().rev().find(|k| pivots.contains_key(*k)).cloned() else { return v };
            let c = v[&lead].clone();
            for (k, pc) in &pivots[&lead] {
                let e = v.entry(k.clone()).or_insert_with(BigRational::zero);
                *e -= &c * pc;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
    };
    for r in rows {
        let v = reduce(r, &pivots);
        if let Some((lead, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            let v: Op = v.into_iter().map(|(k, x)| (k, x / &c)).collect();
            pivots.insert(lead, v);
        }
    }
    let target: Op = [(one_key, BigRational::one())].into_iter().collect();
    reduce(target, &pivots).is_empty()
}

/// The relations of `D/(∂_j : j ∉ τ, lattice binomials of τ, E − β)` for
/// trivial characters, built directly from the columns.
pub fn face_module_relations(cols: &[Vec<i64>], face: &[usize], beta: &[BigRational]) -> Vec<Op> {
    let n = cols.len();
    let d = cols[0].len();
    let unit = |j: usize| {
        let mut e = vec![0u32; n];
        e[j] = 1;
        e
    };
    let mut rels = Vec::new();
    for j in 0..n {
        if !face.contains(&j) {
            rels.push([((vec![0; n], unit(j)), BigRational::one())].into_iter().collect());
        }
    }
    // lattice binomials among the face columns, small moves only
    for u in small_kernel_moves(cols, face) {
        let plus: Vec<u32> = u.iter().map(|&x| x.max(0) as u32).collect();
        let minus: Vec<u32> = u.iter().map(|&x| (-x).max(0) as u32).collect();
        let mut op = Op::new();
        op.insert((vec![0; n], plus), BigRational::one());
        op.insert((vec![0; n], minus), -BigRational::one());
        rels.push(op);
    }
    for i in 0..d {
        let mut op = Op::new();
        for j in 0..n {
            if cols[j][i] != 0 {
                op.insert((unit(j), unit(j)), BigRational::from_integer(cols[j][i].into()));
            }
        }
        if !beta[i].is_zero() {
            op.insert((vec![0; n], vec![0; n]), -beta[i].clone());
        }
        rels.push(op);
    }
    rels
}

fn small_kernel_moves(cols: &[Vec<i64>], face: &[usize]) -> Vec<Vec<i64>> {
    let n = cols.len();
    let d = cols[0].len();
    let mut out = Vec::new();
    let mut vecs = vec![Vec::new()];
    for j in 0..n {
        let range: Vec<i64> = if face.contains(&j) { (-4..=4).collect() } else { vec![0] };
        vecs = vecs.into_iter().flat_map(|p: Vec<i64>| range.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    for v in vecs {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        if (0..d).all(|i| (0..n).map(|j| v[j] * cols[j][i]).sum::<i64>() == 0) {
            out.push(v);
        }
    }
    out
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-40..=40);
    let den = rng.gen_range(1..=9);
    q(num, den)
}

pub fn is_nonneg_int(x: &BigRational) -> bool {
    x.is_integer() && !x.is_negative()
}
