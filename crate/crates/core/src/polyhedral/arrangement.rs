use num_rational::BigRational;
use serde::Serialize;

use super::config::PointConfig;
use crate::exact_algebra::{rank, Cyclotomic};

/// `shift + C·{ā_j : j ∈ columns}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AffineSubspace {
    #[serde(serialize_with = "ser_rationals")]
    pub shift: Vec<BigRational>,
    pub columns: Vec<usize>,
    /// The spanning vectors `ā_j`, kept so membership needs no config.
    #[serde(skip)]
    pub span: Vec<Vec<i64>>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

impl AffineSubspace {
    pub fn new(config: &PointConfig, shift: Vec<BigRational>, columns: Vec<usize>) -> Self {
        let span = columns.iter().map(|&j| config.column(j).free.clone()).collect();
        AffineSubspace { shift, columns, span }
    }

    pub fn contains(&self, beta: &[Cyclotomic]) -> bool {
        let rows: Vec<Vec<Cyclotomic>> =
            self.span.iter().map(|v| v.iter().map(|&x| Cyclotomic::from_int(x)).collect()).collect();
        let target: Vec<Cyclotomic> =
            beta.iter().zip(&self.shift).map(|(b, s)| b - &Cyclotomic::from_rational(s.clone())).collect();
        let r = rank(&rows);
        let mut aug = rows;
        aug.push(target);
        rank(&aug) == r
    }
}

/// A finite union of affine subspaces of `C^d`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Arrangement {
    pub subspaces: Vec<AffineSubspace>,
}

pub fn membership_in_arrangement(beta: &[Cyclotomic], arr: &Arrangement) -> bool {
    arr.subspaces.iter().any(|s| s.contains(beta))
}
