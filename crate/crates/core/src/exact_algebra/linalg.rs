use super::cyclotomic::Cyclotomic;

/// Row echelon form in place; returns the pivot columns and the sign of the
/// row permutation.
fn echelon(m: &mut [Vec<Cyclotomic>]) -> (Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut flipped = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            flipped = !flipped;
        }
        let inv = m[r][c].inverse().unwrap();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..cols {
                let v = &f * &m[r][j];
                m[i][j] = &m[i][j] - &v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, flipped)
}

pub fn rank(rows: &[Vec<Cyclotomic>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).0.len()
}

pub fn determinant(rows: &[Vec<Cyclotomic>]) -> Cyclotomic {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut m = rows.to_vec();
    let (pivots, flipped) = echelon(&mut m);
    if pivots.len() < n {
        return Cyclotomic::zero();
    }
    let mut det = Cyclotomic::one();
    for (i, row) in m.iter().enumerate() {
        det = &det * &row[i];
    }
    if flipped {
        -&det
    } else {
        det
    }
}
