use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::character::PartialCharacter;
use crate::error::{Error, Result};
use crate::exact_algebra::{
    ideal_equal, ideal_intersect, ideal_member, normal_form, saturate_wrt_variables, Cyclotomic, GroebnerEngine,
    IdealBasis, MonomialOrder, Polynomial,
};
use crate::group_lattice::{
    hermite_normal_form, hnf_coordinates, integer_kernel, kernel_lattice, smith_normal_form, IntMatrix,
};
use crate::polyhedral::{face_lattice, Face, PointConfig};

fn split(m: &[i64]) -> (Vec<u32>, Vec<u32>) {
    let plus = m.iter().map(|&x| x.max(0) as u32).collect();
    let minus = m.iter().map(|&x| (-x).max(0) as u32).collect();
    (plus, minus)
}

/// `∂^{m⁺} − c·∂^{m⁻}`.
pub fn binomial_of(m: &[i64], c: &Cyclotomic) -> Polynomial {
    let (p, q) = split(m);
    Polynomial::binomial(&p, c, &q)
}

/// Lattice ideal `(∂^{m⁺} − ∂^{m⁻} : m ∈ L)` in the variables `vars`, from a
/// basis of `L` supported on `vars`.
fn lattice_ideal(n: usize, basis: &[Vec<i64>], vars: &[usize], engine: &GroebnerEngine) -> Result<IdealBasis> {
    if basis.is_empty() {
        return Ok(IdealBasis::zero(n));
    }
    let gens: Vec<Polynomial> = basis.iter().map(|m| binomial_of(m, &Cyclotomic::one())).collect();
    saturate_wrt_variables(&IdealBasis::new(n, gens), vars, engine)
}

/// Exponent vectors `a − b` of the binomials `∂^a − ∂^b` in a reduced
/// Gröbner basis of an untwisted lattice ideal.
fn moves_of(gb: &IdealBasis) -> Result<Vec<Vec<i64>>> {
    gb.generators
        .iter()
        .map(|g| {
            let terms: Vec<_> = g.sorted_terms(&gb.order);
            if terms.len() != 2 || !terms[0].1.is_one() || terms[1].1 != Cyclotomic::from_int(-1) {
                return Err(Error::Consistency(format!("lattice ideal generator {g} is not a pure binomial")));
            }
            Ok(terms[0].0.iter().zip(&terms[1].0).map(|(&a, &b)| a as i64 - b as i64).collect())
        })
        .collect()
}

pub fn kernel_basis_free(config: &PointConfig) -> Vec<Vec<i64>> {
    integer_kernel(config.free_matrix()).to_i64_rows()
}

/// `I_A`.
pub fn toric_ideal_ia(config: &PointConfig, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let n = config.n();
    lattice_ideal(n, &kernel_basis_free(config), &(0..n).collect::<Vec<_>>(), engine)
}

/// `I_𝒜`, the lattice ideal of `ker 𝒜 ⊆ Z^n`.
pub fn toric_ideal_icala(config: &PointConfig, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let n = config.n();
    let basis = kernel_lattice(config.columns(), config.group())?.to_i64_rows();
    lattice_ideal(n, &basis, &(0..n).collect::<Vec<_>>(), engine)
}

/// Markov basis of `ker A`: the moves of the reduced Gröbner basis of `I_A`.
pub fn markov_basis(config: &PointConfig, engine: &GroebnerEngine) -> Result<Vec<Vec<i64>>> {
    moves_of(&toric_ideal_ia(config, engine)?)
}

/// `I_𝒜^[ℓ] = (∂^{ℓm⁺} − ∂^{ℓm⁻} : m Markov)`.
pub fn power_ideal(config: &PointConfig, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let ell = config.ell();
    let gens: Vec<Polynomial> = markov_basis(config, engine)?
        .iter()
        .map(|m| binomial_of(&m.iter().map(|x| x * ell).collect::<Vec<_>>(), &Cyclotomic::one()))
        .collect();
    if gens.is_empty() {
        return Ok(IdealBasis::zero(config.n()));
    }
    IdealBasis::new(config.n(), gens).reduced(engine)
}

/// Twisted lattice ideal `I₊(ρ)` restricted to `vars`, given `ρ` on a lattice
/// supported on `vars`.
fn twisted_lattice_ideal(
    n: usize,
    rho: &PartialCharacter,
    vars: &[usize],
    engine: &GroebnerEngine,
) -> Result<IdealBasis> {
    let untwisted = lattice_ideal(n, rho.lattice_basis(), vars, engine)?;
    if untwisted.is_zero_ideal() || rho.is_trivial() {
        return Ok(untwisted);
    }
    let mut gens = Vec::new();
    for m in moves_of(&untwisted)? {
        let c = rho.evaluate(&m).ok_or(Error::LatticeMismatch)?;
        gens.push(binomial_of(&m, &c));
    }
    saturate_wrt_variables(&IdealBasis::new(n, gens), vars, engine)
}

/// `I_{A,ρ}` for `ρ` defined on `L_ρ = ker_Z(A)`.
pub fn twisted_ideal(config: &PointConfig, rho: &PartialCharacter, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let kernel = kernel_basis_free(config);
    if rho.n() != config.n() || rho.lattice_basis() != kernel.as_slice() {
        return Err(Error::LatticeMismatch);
    }
    let n = config.n();
    twisted_lattice_ideal(n, rho, &(0..n).collect::<Vec<_>>(), engine)
}

/// HNF basis of `ker A ∩ Z^τ`, embedded in `Z^n`.
pub fn face_kernel(config: &PointConfig, face: &Face) -> Vec<Vec<i64>> {
    let n = config.n();
    let cols = &face.column_indices;
    if cols.is_empty() {
        return Vec::new();
    }
    let sub = config.free_matrix().select_columns(cols);
    let ker = integer_kernel(&sub).to_i64_rows();
    let embedded: Vec<Vec<BigInt>> = ker
        .iter()
        .map(|k| {
            let mut v = vec![BigInt::from(0); n];
            for (pos, &j) in cols.iter().enumerate() {
                v[j] = BigInt::from(k[pos]);
            }
            v
        })
        .collect();
    if embedded.is_empty() {
        return Vec::new();
    }
    hermite_normal_form(&IntMatrix::from_big_rows(embedded, n)).to_i64_rows()
}

/// `I^τ_{A,ρ}` from `ρ` already restricted to the face kernel.
pub fn face_ideal_with_face_character(
    config: &PointConfig,
    face: &Face,
    rho_face: &PartialCharacter,
    engine: &GroebnerEngine,
) -> Result<IdealBasis> {
    let n = config.n();
    if rho_face.lattice_basis() != face_kernel(config, face).as_slice() {
        return Err(Error::LatticeMismatch);
    }
    let inner = twisted_lattice_ideal(n, rho_face, &face.column_indices, engine)?;
    let outside: Vec<Polynomial> = face.complement(n).into_iter().map(|j| Polynomial::var(n, j)).collect();
    inner.with_generators(&outside).reduced(engine)
}

/// `I^τ_{A,ρ} = (∂_j : ā_j ∉ τ) + I₊(ρ|_{ker B})`.
pub fn face_twisted_ideal(
    config: &PointConfig,
    face: &Face,
    rho: &PartialCharacter,
    engine: &GroebnerEngine,
) -> Result<IdealBasis> {
    let restricted = rho.restrict(face_kernel(config, face))?;
    face_ideal_with_face_character(config, face, &restricted, engine)
}

/// A minimal prime `I_{A,ρ_k}` of `I_𝒜`.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalPrime {
    pub character: PartialCharacter,
    #[serde(serialize_with = "ser_ideal")]
    pub ideal: IdealBasis,
}

pub(crate) fn ser_ideal<S: serde::Serializer>(i: &IdealBasis, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(i.to_text())
}

/// Characters of `ker A` trivial on `ker 𝒜`, in lexicographic order of their
/// Smith coordinates.
pub fn characters_trivial_on_icala(config: &PointConfig) -> Result<Vec<PartialCharacter>> {
    let n = config.n();
    let b = kernel_basis_free(config);
    if b.is_empty() {
        return Ok(vec![PartialCharacter::trivial(n, Vec::new())?]);
    }
    let bm = IntMatrix::from_rows(&b, n);
    let c = kernel_lattice(config.columns(), config.group())?;
    let r = b.len();
    if c.rows() != r {
        return Err(Error::Consistency("ker 𝒜 does not have full rank in ker A".into()));
    }
    // C = X·B
    let x_rows: Vec<Vec<BigInt>> = c
        .row_vecs()
        .iter()
        .map(|row| hnf_coordinates(&bm, row).ok_or_else(|| Error::Consistency("ker 𝒜 ⊄ ker A".into())))
        .collect::<Result<_>>()?;
    let snf = smith_normal_form(&IntMatrix::from_big_rows(x_rows, r));
    let d: Vec<u64> = (0..r).map(|i| snf.d.get(i, i).to_u64().expect("invariant factor fits in u64")).collect();
    let v = snf.v.to_i64_rows();
    let mut ks: Vec<Vec<u64>> = vec![Vec::new()];
    for &di in &d {
        ks = ks.into_iter().flat_map(|p| (0..di).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    ks.into_iter()
        .map(|k| {
            let values: Vec<Cyclotomic> = (0..r)
                .map(|j| {
                    (0..r).fold(Cyclotomic::one(), |acc, i| {
                        let e = k[i] as i64 * v[j][i];
                        if e == 0 {
                            acc
                        } else {
                            &acc * &Cyclotomic::root_of_unity(d[i], e)
                        }
                    })
                })
                .collect();
            PartialCharacter::new(n, b.clone(), values)
        })
        .collect()
}

/// The minimal primes of `I_𝒜`. Their intersection is checked against
/// `I_𝒜`.
pub fn minimal_primes_icala(config: &PointConfig, engine: &GroebnerEngine) -> Result<Vec<MinimalPrime>> {
    let chars = characters_trivial_on_icala(config)?;
    let n = config.n();
    let primes: Vec<MinimalPrime> = chars
        .into_par_iter()
        .map(|character| {
            let ideal = if character.lattice_basis().is_empty() {
                IdealBasis::zero(n)
            } else {
                twisted_ideal(config, &character, engine)?
            };
            Ok(MinimalPrime { character, ideal })
        })
        .collect::<Result<_>>()?;
    let mut inter = primes[0].ideal.clone();
    for p in &primes[1..] {
        inter = ideal_intersect(&inter, &p.ideal, engine)?;
    }
    if !ideal_equal(&inter, &toric_ideal_icala(config, engine)?, engine)? {
        return Err(Error::Consistency("minimal primes do not intersect to I_𝒜".into()));
    }
    Ok(primes)
}

#[derive(Debug, Clone, Serialize)]
pub enum Classification {
    Prime { face: Face, character: PartialCharacter },
    NotOfForm { reason: String },
}

fn a_degree(config: &PointConfig, m: &[u32]) -> Vec<i64> {
    (0..config.d()).map(|i| m.iter().enumerate().map(|(j, &e)| e as i64 * config.column(j).free[i]).sum()).collect()
}

/// Decide whether `I` equals some `I^τ_{A,ρ}` and recover `(τ, ρ)`.
pub fn classify_graded_binomial_prime(
    ideal: &IdealBasis,
    config: &PointConfig,
    engine: &GroebnerEngine,
) -> Result<Classification> {
    let n = config.n();
    for g in &ideal.generators {
        let mut degs = g.terms().map(|(m, _)| a_degree(config, m));
        if let Some(first) = degs.next() {
            if degs.any(|x| x != first) {
                return Ok(Classification::NotOfForm {
                    reason: format!("{}: generator {g} is not A-homogeneous", Error::NotGraded.code()),
                });
            }
        }
    }
    let gb = ideal.reduced(engine)?;
    let mut vars_in = Vec::new();
    for j in 0..n {
        if ideal_member(&Polynomial::var(n, j), &gb, engine)? {
            vars_in.push(j);
        }
    }
    let on_face: Vec<usize> = (0..n).filter(|j| !vars_in.contains(j)).collect();
    let Some(face) = face_lattice(config)?.into_iter().find(|f| f.column_indices == on_face) else {
        return Ok(Classification::NotOfForm { reason: "variables in I are not the complement of a face".into() });
    };
    let kernel = face_kernel(config, &face);
    let mut values = Vec::with_capacity(kernel.len());
    for m in &kernel {
        let (p, q) = split(m);
        let np = normal_form(&Polynomial::monomial(n, p, Cyclotomic::one()), &gb.generators, &MonomialOrder::GrevLex);
        let nq = normal_form(&Polynomial::monomial(n, q, Cyclotomic::one()), &gb.generators, &MonomialOrder::GrevLex);
        let ratio = match (np.terms().next(), nq.terms().next()) {
            (Some((mp, cp)), Some((mq, cq))) if np.len() == 1 && nq.len() == 1 && mp == mq => cp.div(cq),
            _ => None,
        };
        match ratio {
            Some(r) => values.push(r),
            None => {
                return Ok(Classification::NotOfForm {
                    reason: format!("no twisted binomial for the face move {m:?}"),
                })
            }
        }
    }
    let character = PartialCharacter::new(n, kernel, values)?;
    let candidate = face_ideal_with_face_character(config, &face, &character, engine)?;
    if ideal_equal(&candidate, &gb, engine)? {
        Ok(Classification::Prime { face, character })
    } else {
        Ok(Classification::NotOfForm { reason: "ideal differs from the reconstructed I^τ_{A,ρ}".into() })
    }
}
