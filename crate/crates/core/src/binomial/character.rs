use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{solve_rational, Cyclotomic, Polynomial};
use crate::group_lattice::{hermite_normal_form, hnf_coordinates, smith_normal_form, IntMatrix};
use crate::polyhedral::combinations;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// `∏ values_i^{k_i}`.
fn power_product(values: &[Cyclotomic], exps: &[BigInt]) -> Cyclotomic {
    let mut acc = Cyclotomic::one();
    for (v, k) in values.iter().zip(exps) {
        let k = k.to_i64().expect("exponent fits in i64");
        if k != 0 {
            acc = &acc * &v.pow(k).expect("character values are nonzero");
        }
    }
    acc
}

/// Rational coordinates of `v` in the row basis `rows`, if `v` is in their span.
fn rational_coords(rows: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let cols: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let rhs: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    solve_rational(&cols, &rhs)
}

/// A character `ρ: L_ρ → C*` on a sublattice of `Z^n`, stored by its values
/// on the HNF basis of `L_ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialCharacter {
    n: usize,
    basis: Vec<Vec<i64>>,
    values: Vec<Cyclotomic>,
}

#[derive(Serialize)]
struct CharacterView {
    lattice_basis: Vec<Vec<i64>>,
    values: Vec<String>,
}

impl Serialize for PartialCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterView { lattice_basis: self.basis.clone(), values: self.values.iter().map(|v| v.to_string()).collect() }
            .serialize(s)
    }
}

impl PartialCharacter {
    /// From values on an arbitrary basis of `L_ρ` (rows of `basis`).
    pub fn new(n: usize, basis: Vec<Vec<i64>>, values: Vec<Cyclotomic>) -> Result<Self> {
        if basis.len() != values.len() {
            return Err(Error::DimensionMismatch(format!("{} basis rows for {} values", basis.len(), values.len())));
        }
        if basis.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("lattice vectors must have length {n}")));
        }
        if values.iter().any(Cyclotomic::is_zero) {
            return Err(Error::UnsupportedCharacterValue("character values must be nonzero".into()));
        }
        if basis.is_empty() {
            return Ok(PartialCharacter { n, basis, values });
        }
        let hnf = hermite_normal_form(&IntMatrix::from_rows(&basis, n));
        if hnf.rows() != basis.len() {
            return Err(Error::Malformed("lattice basis rows are dependent".into()));
        }
        let hnf_rows = hnf.to_i64_rows();
        let mut hnf_values = Vec::with_capacity(hnf_rows.len());
        for row in &hnf_rows {
            let coords = rational_coords(&basis, row).expect("HNF row lies in the lattice");
            if !coords.iter().all(|c| c.is_integer()) {
                return Err(Error::Consistency("HNF row has fractional coordinates".into()));
            }
            let ints: Vec<BigInt> = coords.iter().map(|c| c.to_integer()).collect();
            hnf_values.push(power_product(&values, &ints));
        }
        Ok(PartialCharacter { n, basis: hnf_rows, values: hnf_values })
    }

    pub fn trivial(n: usize, basis: Vec<Vec<i64>>) -> Result<Self> {
        let k = basis.len();
        Self::new(n, basis, vec![Cyclotomic::one(); k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// HNF basis of `L_ρ`.
    pub fn lattice_basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Cyclotomic::is_one)
    }

    pub fn lattice_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.basis, self.n)
    }

    /// `ρ(u)`, or `None` if `u ∉ L_ρ`.
    pub fn evaluate(&self, u: &[i64]) -> Option<Cyclotomic> {
        if u.iter().all(|&x| x == 0) {
            return Some(Cyclotomic::one());
        }
        if self.basis.is_empty() {
            return None;
        }
        let coords = hnf_coordinates(&self.lattice_matrix(), &big(u))?;
        Some(power_product(&self.values, &coords))
    }

    /// `Z^n / L_ρ` torsion free.
    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        smith_normal_form(&self.lattice_matrix()).invariant_factors.iter().all(One::is_one)
    }

    /// Restriction to a sublattice given by rows.
    pub fn restrict(&self, rows: Vec<Vec<i64>>) -> Result<PartialCharacter> {
        let mut vals = Vec::with_capacity(rows.len());
        for r in &rows {
            vals.push(self.evaluate(r).ok_or(Error::LatticeMismatch)?);
        }
        PartialCharacter::new(self.n, rows, vals)
    }
}

/// A character on all of `Z^n`, given by its values on `e_1, …, e_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullCharacter {
    pub values: Vec<Cyclotomic>,
}

impl FullCharacter {
    pub fn evaluate(&self, u: &[i64]) -> Cyclotomic {
        power_product(&self.values, &big(u))
    }
}

/// Unimodular completion of a saturated lattice basis: the rows to append.
fn complement(basis: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let r = basis.len();
    for coords in combinations(n, n - r) {
        let mut rows = basis.to_vec();
        for &c in &coords {
            let mut e = vec![0; n];
            e[c] = 1;
            rows.push(e);
        }
        let det = IntMatrix::from_rows(&rows, n).determinant();
        if det == BigInt::one() || det == -BigInt::one() {
            return rows[r..].to_vec();
        }
    }
    // U·W·V = [I 0]: the last n − r rows of V^{-1} complete W
    let snf = smith_normal_form(&IntMatrix::from_rows(basis, n));
    let v = snf.v.to_i64_rows();
    (r..n)
        .map(|k| {
            // row k of V^{-1}: solve x·V = e_k
            let mut e = vec![0; n];
            e[k] = 1;
            let x = rational_coords(&v, &e).expect("V is invertible");
            x.iter().map(|q| q.to_integer().to_i64().expect("entry fits in i64")).collect()
        })
        .collect()
}

/// Extend a saturated `ρ` to `ρ′` on `Z^n`, trivial on a unimodular
/// complement of `L_ρ` (the lexicographically first coordinate complement
/// when one exists).
pub fn extend_character(rho: &PartialCharacter) -> Result<FullCharacter> {
    if !rho.is_saturated() {
        return Err(Error::NotSaturated);
    }
    let n = rho.n;
    let comp = complement(&rho.basis, n);
    let mut full = rho.basis.clone();
    full.extend(comp);
    let mut values = rho.values.clone();
    values.extend(std::iter::repeat(Cyclotomic::one()).take(n - rho.basis.len()));
    let out = (0..n)
        .map(|k| {
            let mut e = vec![0; n];
            e[k] = 1;
            let coords = rational_coords(&full, &e).expect("completed basis spans Z^n");
            let ints: Vec<BigInt> = coords.iter().map(|q| q.to_integer()).collect();
            power_product(&values, &ints)
        })
        .collect();
    Ok(FullCharacter { values: out })
}

/// `∂^u ↦ ρ′(u)·∂^u`.
pub fn twist_automorphism(f: &Polynomial, rho: &FullCharacter) -> Polynomial {
    f.map_coefficients(|m, c| {
        let u: Vec<i64> = m.iter().map(|&x| x as i64).collect();
        c * &rho.evaluate(&u)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn values_follow_basis_change() {
        let i = Cyclotomic::root_of_unity(4, 1);
        // basis {(2,-1)} with value i, given as its negative with value -i... i^-1
        let rho = PartialCharacter::new(2, vec![vec![-2, 1]], vec![i.inverse().unwrap()]).unwrap();
        assert_eq!(rho.lattice_basis(), &[vec![2, -1]]);
        assert_eq!(rho.values(), &[i.clone()]);
        assert_eq!(rho.evaluate(&[4, -2]).unwrap(), Cyclotomic::from_int(-1));
        assert!(rho.evaluate(&[1, 0]).is_none());
        assert!(rho.is_saturated());
    }

    #[test]
    fn extension_examples() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let rho = PartialCharacter::new(2, vec![vec![2, -1]], vec![i.clone()]).unwrap();
        let ext = extend_character(&rho).unwrap();
        assert_eq!(ext.evaluate(&[2, -1]), i);
        let f = Polynomial::binomial(&[2, 0], &i, &[0, 1]);
        let g = twist_automorphism(&f, &ext);
        let target = Polynomial::binomial(&[2, 0], &Cyclotomic::one(), &[0, 1]);
        // unit multiple of d1^2 - d2
        let (_, lead) = g.leading_term(&Default::default()).unwrap();
        assert_eq!(g.scale(&lead.inverse().unwrap()), target);

        let triv = PartialCharacter::trivial(2, vec![vec![2, -1]]).unwrap();
        let ext = extend_character(&triv).unwrap();
        assert!(ext.values.iter().all(Cyclotomic::is_one));

        let unsat = PartialCharacter::new(2, vec![vec![2, 0]], vec![i]).unwrap();
        assert_eq!(extend_character(&unsat), Err(Error::NotSaturated));
    }

    #[test]
    fn snf_complement_fallback() {
        // neither e_1 nor e_2 completes this basis
        let basis = vec![vec![2, 3, 0], vec![0, 0, 1]];
        let rho = PartialCharacter::trivial(3, basis).unwrap();
        let ext = extend_character(&rho).unwrap();
        assert!(ext.values.iter().all(Cyclotomic::is_one));
        let comp = complement(&[vec![2, 3, 5]], 3);
        let mut rows = vec![vec![2, 3, 5]];
        rows.extend(comp);
        assert_eq!(IntMatrix::from_rows(&rows, 3).determinant().abs(), BigInt::one());
    }
}
