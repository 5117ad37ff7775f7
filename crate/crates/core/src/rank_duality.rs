//! The rank `ℓ·vol`, the duality shift `β ↦ −β − ε_A`, the sign twist and
//! the splitting of `𝕂[K]` by the characters of the torsion group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Result;
use crate::exact_algebra::{determinant, Cyclotomic};
use crate::group_lattice::check_hypotheses;
use crate::hypergeometric::{bbgkz_primitive_presentation, SystemPresentation};
use crate::polyhedral::{epsilon_a, normalized_volume, PointConfig};
use crate::semigroup::{elements_up_to, ModuleKind, SemigroupModule};

/// `ℓ·vol(A ∪ {0})`, the same for `K` and `K°`.
pub fn rank_formula(config: &PointConfig, _kind: ModuleKind) -> Result<BigInt> {
    check_hypotheses(config).require()?;
    Ok(BigInt::from(config.ell()) * normalized_volume(config))
}

/// `−β − ε_A`.
pub fn dual_parameter(beta: &[Cyclotomic], config: &PointConfig) -> Vec<Cyclotomic> {
    beta.iter().zip(epsilon_a(config)).map(|(b, e)| &(-b) - &Cyclotomic::from_int(e)).collect()
}

fn ser_values<S: serde::Serializer>(v: &[Cyclotomic], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    #[serde(serialize_with = "ser_values")]
    pub beta: Vec<Cyclotomic>,
    pub epsilon_a: Vec<i64>,
    #[serde(serialize_with = "ser_values")]
    pub dual_parameter: Vec<Cyclotomic>,
    #[serde(serialize_with = "ser_big")]
    pub rank_primal: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub rank_dual: BigInt,
    pub twisted: bool,
}

/// The sign-twisted primitive presentation of `M_{K°}` at `−β − ε_A`.
pub fn dual_system(
    config: &PointConfig,
    beta: &[Cyclotomic],
    binomial_degree_bound: i64,
) -> Result<(SystemPresentation, DualityReport)> {
    check_hypotheses(config).require()?;
    let dual = dual_parameter(beta, config);
    let interior = SemigroupModule::k_interior(config)?;
    let presentation = bbgkz_primitive_presentation(&interior, &dual, binomial_degree_bound)?.sign_twist();
    let report = DualityReport {
        beta: beta.to_vec(),
        epsilon_a: epsilon_a(config),
        dual_parameter: dual,
        rank_primal: rank_formula(config, ModuleKind::K)?,
        rank_dual: rank_formula(config, ModuleKind::KInterior)?,
        twisted: true,
    };
    Ok((presentation, report))
}

/// One graded piece of the splitting check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPiece {
    pub degree: Vec<i64>,
    pub torsion_basis: Vec<Vec<i64>>,
    #[serde(serialize_with = "ser_cyclo")]
    pub determinant: Cyclotomic,
}

fn ser_cyclo<S: serde::Serializer>(v: &Cyclotomic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// The maps `φ_r` and the per-degree certificate that `⊕ φ_r` is bijective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterSplit {
    /// The tuples `r`, `φ_r(y_i) = ζ_{ℓ_i}^{r_i}`.
    pub maps: Vec<Vec<i64>>,
    pub truncation: i64,
    pub pieces: Vec<SplitPiece>,
    pub certified: bool,
}

impl CharacterSplit {
    /// The matrix `[φ_r(y^f)]` shared by all pieces.
    pub fn matrix(&self, torsion_orders: &[i64], basis: &[Vec<i64>]) -> Vec<Vec<Cyclotomic>> {
        character_matrix(&self.maps, torsion_orders, basis)
    }
}

fn character_matrix(maps: &[Vec<i64>], orders: &[i64], basis: &[Vec<i64>]) -> Vec<Vec<Cyclotomic>> {
    maps.iter()
        .map(|r| {
            basis
                .iter()
                .map(|f| {
                    (0..orders.len()).fold(Cyclotomic::one(), |acc, i| {
                        &acc * &Cyclotomic::root_of_unity(orders[i] as u64, r[i] * f[i])
                    })
                })
                .collect()
        })
        .collect()
}

/// Default `h`-degree truncation for [`character_split`].
pub const DEFAULT_TRUNCATION: i64 = 10;

/// Builds `φ_r` for every `r ∈ ∏ Z/ℓ_i` and checks each graded piece of
/// `𝕂[K]` with `h ≤ truncation`.
pub fn character_split(config: &PointConfig, truncation: i64) -> Result<CharacterSplit> {
    check_hypotheses(config).require()?;
    let orders = config.group().torsion_orders().to_vec();
    let maps = config.group().torsion_elements();
    let k = SemigroupModule::k(config)?;
    let mut by_degree: BTreeMap<Vec<i64>, Vec<Vec<i64>>> = BTreeMap::new();
    for t in elements_up_to(&k, truncation) {
        by_degree.entry(t.free).or_default().push(t.torsion);
    }
    let pieces: Vec<SplitPiece> = by_degree
        .into_iter()
        .map(|(degree, mut torsion_basis)| {
            torsion_basis.sort();
            let m = character_matrix(&maps, &orders, &torsion_basis);
            let det = if m.len() == torsion_basis.len() { determinant(&m) } else { Cyclotomic::zero() };
            SplitPiece { degree, torsion_basis, determinant: det }
        })
        .collect();
    let certified = pieces.iter().all(|p| !p.determinant.is_zero());
    Ok(CharacterSplit { maps, truncation, pieces, certified })
}
