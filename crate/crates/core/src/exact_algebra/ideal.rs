use std::fmt;

use super::cyclotomic::Cyclotomic;
use super::groebner::{normal_form, GroebnerEngine};
use super::order::MonomialOrder;
use super::polynomial::Polynomial;
use crate::error::Result;

/// Generators of an ideal of `Q(ζ)[d1, …, dn]`, optionally known to be a
/// reduced Gröbner basis for `order`.
#[derive(Clone, PartialEq, Eq)]
pub struct IdealBasis {
    nvars: usize,
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub is_groebner: bool,
}

impl IdealBasis {
    pub fn new(nvars: usize, generators: Vec<Polynomial>) -> Self {
        assert!(generators.iter().all(|g| g.nvars() == nvars), "generator variable count");
        IdealBasis { nvars, generators, order: MonomialOrder::GrevLex, is_groebner: false }
    }

    pub fn zero(nvars: usize) -> Self {
        IdealBasis { nvars, generators: Vec::new(), order: MonomialOrder::GrevLex, is_groebner: true }
    }

    /// The ideal generated by the given variables.
    pub fn variables(nvars: usize, vars: &[usize]) -> Self {
        Self::new(nvars, vars.iter().map(|&i| Polynomial::var(nvars, i)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.iter().all(Polynomial::is_zero)
    }

    pub fn is_unit_ideal(&self, engine: &GroebnerEngine) -> Result<bool> {
        let gb = self.reduced(engine)?;
        Ok(gb.generators.len() == 1 && gb.generators[0].total_degree() == 0)
    }

    /// Reduced Gröbner basis in grevlex.
    pub fn reduced(&self, engine: &GroebnerEngine) -> Result<IdealBasis> {
        if self.is_groebner && self.order == MonomialOrder::GrevLex {
            return Ok(self.clone());
        }
        let gb = engine.basis(&self.generators, &MonomialOrder::GrevLex)?;
        Ok(IdealBasis { nvars: self.nvars, generators: gb, order: MonomialOrder::GrevLex, is_groebner: true })
    }

    pub fn with_generators(&self, extra: &[Polynomial]) -> IdealBasis {
        let mut g = self.generators.clone();
        g.extend_from_slice(extra);
        IdealBasis::new(self.nvars, g)
    }

    pub fn to_text(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_text_with(&self.order)).collect()
    }
}

impl fmt::Debug for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_text().join(", "))
    }
}

impl fmt::Display for IdealBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_text().join(", "))
    }
}

/// Polynomials of the elimination ideal `I ∩ Q(ζ)[rest]` after dropping the
/// first `k` variables.
fn eliminate_leading(gens: &[Polynomial], k: usize, n: usize, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let gb = engine.basis(gens, &MonomialOrder::BlockGrevLex { split: k })?;
    let kept: Vec<Polynomial> = gb.iter().filter_map(|g| g.drop_leading_vars(k)).collect();
    IdealBasis::new(n, kept).reduced(engine)
}

/// `(I : (∏ vars)^∞)`.
pub fn saturate_wrt_variables(i: &IdealBasis, vars: &[usize], engine: &GroebnerEngine) -> Result<IdealBasis> {
    let n = i.nvars;
    if vars.is_empty() || i.is_zero_ideal() {
        return i.reduced(engine);
    }
    let mut gens: Vec<Polynomial> = i.generators.iter().map(|g| g.prepend_vars(1)).collect();
    let mut e = vec![0u32; n + 1];
    e[0] = 1;
    for &v in vars {
        e[v + 1] += 1;
    }
    gens.push(&Polynomial::monomial(n + 1, e, Cyclotomic::one()) - &Polynomial::one(n + 1));
    eliminate_leading(&gens, 1, n, engine)
}

/// `I ∩ J` via `t·I + (1 − t)·J`.
pub fn ideal_intersect(i: &IdealBasis, j: &IdealBasis, engine: &GroebnerEngine) -> Result<IdealBasis> {
    let n = i.nvars;
    assert_eq!(n, j.nvars, "variable count");
    if i.is_zero_ideal() || j.is_zero_ideal() {
        return Ok(IdealBasis::zero(n));
    }
    let t = Polynomial::var(n + 1, 0);
    let one_minus_t = &Polynomial::one(n + 1) - &t;
    let mut gens = Vec::new();
    for g in &i.generators {
        gens.push(&t * &g.prepend_vars(1));
    }
    for g in &j.generators {
        gens.push(&one_minus_t * &g.prepend_vars(1));
    }
    eliminate_leading(&gens, 1, n, engine)
}

pub fn ideal_member(f: &Polynomial, i: &IdealBasis, engine: &GroebnerEngine) -> Result<bool> {
    let gb = i.reduced(engine)?;
    Ok(normal_form(f, &gb.generators, &gb.order).is_zero())
}

pub fn ideal_equal(i: &IdealBasis, j: &IdealBasis, engine: &GroebnerEngine) -> Result<bool> {
    Ok(i.reduced(engine)?.generators == j.reduced(engine)?.generators)
}

/// `J ⊆ I`.
pub fn ideal_contains(i: &IdealBasis, j: &IdealBasis, engine: &GroebnerEngine) -> Result<bool> {
    let gb = i.reduced(engine)?;
    Ok(j.generators.iter().all(|f| normal_form(f, &gb.generators, &gb.order).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    fn eng() -> GroebnerEngine {
        GroebnerEngine::default()
    }

    #[test]
    fn saturation_examples() {
        let f = &d(2, 0).pow(2) - &d(2, 1);
        let i = IdealBasis::new(2, vec![f.clone()]);
        let s = saturate_wrt_variables(&i, &[0, 1], &eng()).unwrap();
        assert!(ideal_equal(&s, &i, &eng()).unwrap());

        let g = &d(2, 0) * &(&d(2, 0) - &d(2, 1));
        let s = saturate_wrt_variables(&IdealBasis::new(2, vec![g]), &[0], &eng()).unwrap();
        assert_eq!(s.generators, vec![&d(2, 0) - &d(2, 1)]);

        let h = &d(2, 0).pow(8) - &d(2, 1).pow(4);
        let s = saturate_wrt_variables(&IdealBasis::new(2, vec![h.clone()]), &[0, 1], &eng()).unwrap();
        assert_eq!(s.generators, vec![h]);
    }

    #[test]
    fn intersection_and_membership() {
        let a = IdealBasis::new(2, vec![&d(2, 0).pow(2) - &d(2, 1)]);
        let b = IdealBasis::new(2, vec![&d(2, 0).pow(2) + &d(2, 1)]);
        let c = ideal_intersect(&a, &b, &eng()).unwrap();
        assert_eq!(c.generators, vec![&d(2, 0).pow(4) - &d(2, 1).pow(2)]);
        let f = &d(2, 0).pow(4) - &d(2, 1).pow(2);
        assert!(ideal_member(&f, &a, &eng()).unwrap());
        assert!(!ideal_member(&d(2, 1), &a, &eng()).unwrap());
        assert!(ideal_equal(&a, &a, &eng()).unwrap());
        assert!(ideal_contains(&a, &c, &eng()).unwrap());
    }
}
