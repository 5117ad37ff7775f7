use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share a length; `cols`
    /// is needed to describe a matrix with zero rows.
    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        IntMatrix { rows: nrows, cols, data }
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        Self::from_big_rows(
            rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Rows as `i64`; panics if an entry does not fit.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| i64::try_from(x).expect("entry exceeds i64")).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let rows = (0..self.rows).map(|i| cols.iter().map(|&j| self.get(i, j).clone()).collect()).collect();
        IntMatrix::from_big_rows(rows, cols.len())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).invariant_factors.len()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

/// `U * M * V = D`, `U` and `V` unimodular, `D` diagonal with a divisibility chain.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = d.get(i, j);
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                let k = -q;
                d.add_row_multiple(i, t, &k);
                u.add_row_multiple(i, t, &k);
                if !d.get(i, t).is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let k = -q;
                d.add_col_multiple(j, t, &k);
                v.add_col_multiple(j, t, &k);
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // row and column are clear; enforce divisibility on the remainder
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let invariant_factors = (0..rows.min(cols)).map(|i| d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect();
    SmithDecomposition { u, d, v, invariant_factors }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon
/// form, positive pivots, entries above each pivot reduced into `[0, pivot)`,
/// zero rows dropped. The result is a canonical basis of the row lattice.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let cols = m.cols;
    let mut rows: Vec<Vec<BigInt>> = m.row_vecs();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                for j in 0..cols {
                    let x = &rows[r][j] * &q;
                    rows[i][j] -= x;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in 0..cols {
                let x = &rows[r][j] * &q;
                rows[i][j] -= x;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    IntMatrix::from_big_rows(rows, cols)
}

fn pivot_column(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Coordinates of `v` with respect to an HNF basis, or `None` when `v` is not
/// in the lattice.
pub fn hnf_coordinates(hnf: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(hnf.cols(), v.len());
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(hnf.rows());
    for i in 0..hnf.rows() {
        let row = hnf.row(i);
        let p = pivot_column(row).expect("HNF rows are nonzero");
        let (q, rem) = rest[p].div_rem(&row[p]);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..rest.len() {
            rest[j] -= &row[j] * &q;
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

pub fn hnf_contains(hnf: &IntMatrix, v: &[BigInt]) -> bool {
    hnf_coordinates(hnf, v).is_some()
}

/// A `Z`-basis (HNF rows) of `{x in Z^n : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let rows: Vec<Vec<BigInt>> = (r..n).map(|j| snf.v.column(j)).collect();
    hermite_normal_form(&IntMatrix::from_big_rows(rows, n))
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && m.determinant().abs().is_one()
}
