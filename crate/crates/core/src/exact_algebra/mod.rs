//! Exact coefficient fields `Q(ζ_e)` and commutative polynomial algebra over
//! them: monomial orders, Buchberger, normal forms, saturation, intersection.

mod cyclotomic;
mod groebner;
mod ideal;
mod linalg;
mod order;
mod polynomial;
mod text;

pub use cyclotomic::{cyclotomic_polynomial, CycloField, Cyclotomic};
pub(crate) use cyclotomic::solve_rational;
pub use groebner::{groebner_basis, is_groebner, normal_form, GroebnerEngine, DEFAULT_PAIR_BUDGET};
pub use ideal::{ideal_contains, ideal_equal, ideal_intersect, ideal_member, saturate_wrt_variables, IdealBasis};
pub use linalg::{determinant, rank};
pub use order::MonomialOrder;
pub use polynomial::{rational, Monomial, Polynomial};
pub(crate) use polynomial::{format_terms, monomial_text_with};
pub use text::{parse_cyclotomic, parse_polynomial};

/// `ζ_e^power`.
pub fn cyclotomic_embed(e: u64, power: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(e, power)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> crate::error::Result<IdealBasis> {
    let n = gens.first().map_or(0, Polynomial::nvars);
    let gb = groebner_basis(gens, &order)?;
    let mut basis = IdealBasis::new(n, gb);
    basis.order = order;
    basis.is_groebner = true;
    Ok(basis)
}
