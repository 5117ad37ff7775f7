use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N = F ⊕ Z^d` with `F = ⊕ Z/ℓ_i`, `ℓ_1 | ℓ_2 | …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    torsion_orders: Vec<i64>,
    free_rank: usize,
}

impl AbelianGroup {
    pub fn new(torsion_orders: Vec<i64>, free_rank: usize) -> Result<Self> {
        if let Some(bad) = torsion_orders.iter().find(|&&o| o < 2) {
            return Err(Error::Malformed(format!("torsion order {bad} must be at least 2")));
        }
        for w in torsion_orders.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Malformed(format!(
                    "torsion orders must form a divisibility chain, {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(AbelianGroup { torsion_orders, free_rank })
    }

    pub fn free(free_rank: usize) -> Self {
        AbelianGroup { torsion_orders: Vec::new(), free_rank }
    }

    pub fn torsion_orders(&self) -> &[i64] {
        &self.torsion_orders
    }

    pub fn torsion_rank(&self) -> usize {
        self.torsion_orders.len()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// `ℓ = |F|`.
    pub fn torsion_index(&self) -> i64 {
        self.torsion_orders.iter().product()
    }

    /// Exponent of `F` (the largest invariant factor), 1 when `F = 0`.
    pub fn torsion_exponent(&self) -> i64 {
        self.torsion_orders.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { torsion: vec![0; self.torsion_rank()], free: vec![0; self.free_rank] }
    }

    pub fn element(&self, torsion: Vec<i64>, free: Vec<i64>) -> Result<GroupElement> {
        if torsion.len() != self.torsion_rank() || free.len() != self.free_rank {
            return Err(Error::DimensionMismatch(format!(
                "element has {} torsion and {} free coordinates, group expects {} and {}",
                torsion.len(),
                free.len(),
                self.torsion_rank(),
                self.free_rank
            )));
        }
        Ok(self.reduce(GroupElement { torsion, free }))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.torsion.len() == self.torsion_rank() && g.free.len() == self.free_rank
    }

    fn reduce(&self, mut g: GroupElement) -> GroupElement {
        for (t, &o) in g.torsion.iter_mut().zip(&self.torsion_orders) {
            *t = t.mod_floor(&o);
        }
        g
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            torsion: a.torsion.iter().map(|x| -x).collect(),
            free: a.free.iter().map(|x| -x).collect(),
        })
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.reduce(GroupElement {
            torsion: a.torsion.iter().map(|x| k * x).collect(),
            free: a.free.iter().map(|x| k * x).collect(),
        })
    }

    /// All torsion coordinate vectors, in lexicographic order.
    pub fn torsion_elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &o in &self.torsion_orders {
            out = out.into_iter().flat_map(|prefix| (0..o).map(move |r| {
                let mut p = prefix.clone();
                p.push(r);
                p
            })).collect();
        }
        out
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion_orders.iter().map(|o| format!("Z/{o}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element `u ∈ N`. Torsion coordinates are kept reduced by the owning
/// [`AbelianGroup`]; ordering is by free part first, then torsion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub torsion: Vec<i64>,
    pub free: Vec<i64>,
}

impl GroupElement {
    /// `π(u)`.
    pub fn free_part(&self) -> &[i64] {
        &self.free
    }

    pub fn is_free_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0)
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.free.cmp(&other.free).then_with(|| self.torsion.cmp(&other.torsion))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.torsion, self.free)
    }
}

/// A functional `μ ∈ Hom(N, Z) ⊗ Q`; torsion is annihilated so only the free
/// part is stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functional {
    pub free_part: Vec<BigRational>,
}

impl Functional {
    pub fn from_integers(v: &[i64]) -> Self {
        Functional { free_part: v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect() }
    }

    pub fn apply(&self, free: &[i64]) -> BigRational {
        self.free_part
            .iter()
            .zip(free)
            .fold(BigRational::zero(), |acc, (a, &x)| acc + a * BigRational::from_integer(BigInt::from(x)))
    }

    /// Integer entries, if every entry is integral.
    pub fn as_integers(&self) -> Option<Vec<i64>> {
        self.free_part.iter().map(|q| q.is_integer().then(|| i64::try_from(q.numer()).ok()).flatten()).collect()
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.free_part.iter().map(|q| q.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}
