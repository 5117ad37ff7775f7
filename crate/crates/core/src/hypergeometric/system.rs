use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use serde::Serialize;

use super::weyl::WeylElement;
use crate::binomial::{face_twisted_ideal, markov_basis, PartialCharacter};
use crate::error::{Error, Result};
use crate::exact_algebra::{Cyclotomic, GroebnerEngine, MonomialOrder, Polynomial};
use crate::group_lattice::GroupElement;
use crate::polyhedral::{Face, PointConfig};
use crate::semigroup::{elements_up_to, module_generators, SemigroupModule};

/// The Euler operators `E_1, …, E_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerSet {
    pub operators: Vec<WeylElement>,
}

impl EulerSet {
    /// `E_μ = Σ μ_i E_i`.
    pub fn combination(&self, mu: &[BigRational]) -> WeylElement {
        let n = self.operators.first().map_or(0, WeylElement::nvars);
        self.operators
            .iter()
            .zip(mu)
            .fold(WeylElement::zero(n), |acc, (e, m)| &acc + &e.scale(&Cyclotomic::from_rational(m.clone())))
    }
}

pub fn euler_operators(config: &PointConfig) -> EulerSet {
    let n = config.n();
    let operators = (0..config.d())
        .map(|i| {
            let mut e = WeylElement::zero(n);
            for j in 0..n {
                let a = config.column(j).free[i];
                if a != 0 {
                    let mut u = vec![0; n];
                    u[j] = 1;
                    e.add_term((u.clone(), u), Cyclotomic::from_int(a));
                }
            }
            e
        })
        .collect();
    EulerSet { operators }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Binomial,
    Euler,
    Ideal,
}

/// `Σ P_g·1_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub terms: Vec<(usize, WeylElement)>,
}

impl Relation {
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, p)| p.text_with_suffix(&format!("g{g}")))
            .collect();
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        out
    }

    pub fn sign_twist(&self) -> Relation {
        Relation { kind: self.kind, terms: self.terms.iter().map(|(g, p)| (*g, p.sign_twist())).collect() }
    }
}

#[derive(Serialize)]
struct TermView<'a> {
    generator_index: usize,
    operator: &'a WeylElement,
}

#[derive(Serialize)]
struct RelationView<'a> {
    kind: RelationKind,
    terms: Vec<TermView<'a>>,
    text: String,
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelationView {
            kind: self.kind,
            terms: self.terms.iter().map(|(g, p)| TermView { generator_index: *g, operator: p }).collect(),
            text: self.to_text(),
        }
        .serialize(s)
    }
}

fn ser_values<S: serde::Serializer>(v: &[Cyclotomic], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

/// A left `D`-module given by generators `1_u` and relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemPresentation {
    #[serde(serialize_with = "ser_values")]
    pub beta: Vec<Cyclotomic>,
    pub module: String,
    pub torsion_orders: Vec<i64>,
    pub columns: Vec<GroupElement>,
    pub generators: Vec<GroupElement>,
    pub relations: Vec<Relation>,
    /// Bound on the `h`-degree of the fibres (primitive form) or of the slice.
    pub degree_bound: i64,
    /// The relation list did not change when the bound was raised by 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilized: Option<bool>,
    pub sign_twisted: bool,
}

impl SystemPresentation {
    fn empty(config: &PointConfig, beta: &[Cyclotomic], module: &str, degree_bound: i64) -> Self {
        SystemPresentation {
            beta: beta.to_vec(),
            module: module.to_string(),
            torsion_orders: config.group().torsion_orders().to_vec(),
            columns: config.columns().to_vec(),
            generators: Vec::new(),
            relations: Vec::new(),
            degree_bound,
            stabilized: None,
            sign_twisted: false,
        }
    }

    pub fn binomial_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.kind == RelationKind::Binomial)
    }

    pub fn euler_relations(&self) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(|r| r.kind == RelationKind::Euler)
    }

    pub fn relation_texts(&self) -> Vec<String> {
        self.relations.iter().map(Relation::to_text).collect()
    }

    /// Applies `(−)⁻` to every relation.
    pub fn sign_twist(&self) -> SystemPresentation {
        SystemPresentation {
            relations: self.relations.iter().map(Relation::sign_twist).collect(),
            sign_twisted: !self.sign_twisted,
            ..self.clone()
        }
    }
}

fn check_beta(config: &PointConfig, beta: &[Cyclotomic]) -> Result<()> {
    if beta.len() != config.d() {
        return Err(Error::DimensionMismatch(format!("β has length {}, expected d = {}", beta.len(), config.d())));
    }
    Ok(())
}

/// `(E_i − (β − u)_i)·1_u` for `i = 1..d`.
fn euler_relations(euler: &EulerSet, beta: &[Cyclotomic], index: usize, u: &GroupElement) -> Vec<Relation> {
    euler
        .operators
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let shift = &beta[i] - &Cyclotomic::from_int(u.free[i]);
            let op = e - &WeylElement::constant(e.nvars(), shift);
            Relation { kind: RelationKind::Euler, terms: vec![(index, op)] }
        })
        .collect()
}

fn unit_vector(n: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[j] = 1;
    e
}

fn required_bound(module: &SemigroupModule) -> Result<i64> {
    let prim = module_generators(module)?;
    Ok(prim.elements.iter().map(|t| module.h_degree(&t.free)).max().unwrap_or(0))
}

/// The full relation family on the slice `h(π(t)) ≤ degree_bound` of `T`.
pub fn bbgkz_relations(module: &SemigroupModule, beta: &[Cyclotomic], degree_bound: i64) -> Result<SystemPresentation> {
    let config = module.config();
    check_beta(config, beta)?;
    let needed = required_bound(module)?;
    if degree_bound < needed {
        return Err(Error::SliceTooSmall { needed, bound: degree_bound });
    }
    let n = config.n();
    let group = config.group();
    let gens = elements_up_to(module, degree_bound);
    let index: HashMap<&GroupElement, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let euler = euler_operators(config);
    let mut out = SystemPresentation::empty(config, beta, module.kind().label(), degree_bound);
    for (i, u) in gens.iter().enumerate() {
        for j in 0..n {
            if let Some(&k) = index.get(&group.add(u, config.column(j))) {
                let dj = WeylElement::monomial(n, vec![0; n], unit_vector(n, j), Cyclotomic::one());
                out.relations.push(Relation {
                    kind: RelationKind::Binomial,
                    terms: vec![(i, dj), (k, WeylElement::constant(n, Cyclotomic::from_int(-1)))],
                });
            }
        }
        out.relations.extend(euler_relations(&euler, beta, i, u));
    }
    out.generators = gens;
    Ok(out)
}

/// Exponents `u` with `h(Σ u_j ā_j) ≤ budget`; a unit column runs up to
/// its order in `F`, past which its powers repeat.
fn slice_exponents(module: &SemigroupModule, budget: i64) -> Vec<Vec<u32>> {
    if budget < 0 {
        return Vec::new();
    }
    let config = module.config();
    let group = config.group();
    let caps: Vec<(i64, u32)> = config
        .columns()
        .iter()
        .map(|a| {
            let h = module.h_degree(&a.free);
            if h > 0 {
                return (h, u32::MAX);
            }
            let order = (1..=group.torsion_index()).find(|&k| group.scale(k, a) == group.zero()).unwrap_or(1);
            (0, order as u32)
        })
        .collect();
    let mut out = vec![(Vec::new(), 0i64)];
    for &(h, cap) in &caps {
        out = out
            .into_iter()
            .flat_map(|(u, used): (Vec<u32>, i64)| {
                let top = if h > 0 { ((budget - used) / h) as u32 } else { cap };
                (0..=top).map(move |k| ([u.clone(), vec![k]].concat(), used + h * k as i64))
            })
            .collect();
    }
    out.into_iter().map(|(u, _)| u).collect()
}

/// Default fibre bound: `2 + 2ℓ·max h(A·m⁺)` over the Markov basis.
pub fn default_binomial_bound(module: &SemigroupModule, engine: &GroebnerEngine) -> Result<i64> {
    let config = module.config();
    let max_h = markov_basis(config, engine)?
        .iter()
        .map(|m| {
            let plus: Vec<i64> = (0..config.d())
                .map(|i| (0..config.n()).map(|j| m[j].max(0) * config.column(j).free[i]).sum())
                .collect();
            module.h_degree(&plus)
        })
        .max()
        .unwrap_or(0);
    Ok(2 + 2 * config.ell() * max_h)
}

/// A term `∂^u·1_g` of the free module.
type FreeMonomial = (usize, Vec<u32>);

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // the smaller index stays the root
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

fn dominates(u: &[u32], v: &[u32]) -> bool {
    u.iter().zip(v).all(|(a, b)| a >= b)
}

/// Minimal binomial relations `∂^u·1_{u′} − ∂^v·1_{v′}` in the fibres of
/// `h`-degree at most `bound`. Every such fibre is enumerated in full.
fn primitive_binomials(module: &SemigroupModule, prim: &[GroupElement], bound: i64) -> Vec<(FreeMonomial, FreeMonomial)> {
    let config = module.config();
    let group = config.group();
    let n = config.n();
    let grevlex = MonomialOrder::GrevLex;
    let mut fibres: BTreeMap<(i64, GroupElement), Vec<FreeMonomial>> = BTreeMap::new();
    for (g, base) in prim.iter().enumerate() {
        for u in slice_exponents(module, bound - module.h_degree(&base.free)) {
            let shift = (0..n).fold(group.zero(), |acc, j| group.add(&acc, &group.scale(u[j] as i64, config.column(j))));
            let deg = group.add(base, &shift);
            fibres.entry((module.h_degree(&deg.free), deg)).or_default().push((g, u));
        }
    }
    // larger first: total degree, then grevlex, then smaller generator index
    let key_cmp = |p: &FreeMonomial, q: &FreeMonomial| {
        let (dp, dq): (u32, u32) = (p.1.iter().sum(), q.1.iter().sum());
        dq.cmp(&dp).then_with(|| grevlex.cmp(&q.1, &p.1)).then_with(|| p.0.cmp(&q.0))
    };
    let mut chosen: Vec<(FreeMonomial, FreeMonomial)> = Vec::new();
    for (_, mut mons) in fibres {
        if mons.len() < 2 {
            continue;
        }
        mons.sort_by(key_cmp);
        let pos: HashMap<&FreeMonomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut uf = UnionFind((0..mons.len()).collect());
        for (i, (g, u)) in mons.iter().enumerate() {
            for ((g1, u1), (g2, u2)) in &chosen {
                for (ga, ua, gb, ub) in [(g1, u1, g2, u2), (g2, u2, g1, u1)] {
                    if ga == g && dominates(u, ua) {
                        let w: Vec<u32> = (0..n).map(|k| u[k] - ua[k] + ub[k]).collect();
                        if let Some(&k) = pos.get(&(*gb, w)) {
                            uf.union(i, k);
                        }
                    }
                }
            }
        }
        let mut roots: BTreeSet<usize> = BTreeSet::new();
        for i in 0..mons.len() {
            roots.insert(uf.find(i));
        }
        let roots: Vec<usize> = roots.into_iter().collect();
        for pair in roots.windows(2) {
            chosen.push((mons[pair[0]].clone(), mons[pair[1]].clone()));
        }
    }
    chosen
}

fn assemble_primitive(
    module: &SemigroupModule,
    prim: &[GroupElement],
    beta: &[Cyclotomic],
    bound: i64,
) -> SystemPresentation {
    let config = module.config();
    let n = config.n();
    let mut out = SystemPresentation::empty(config, beta, module.kind().label(), bound);
    let mut binomials: Vec<Relation> = primitive_binomials(module, prim, bound)
        .into_iter()
        .map(|((g, u), (h, v))| {
            let left = WeylElement::monomial(n, vec![0; n], u, Cyclotomic::one());
            let right = WeylElement::monomial(n, vec![0; n], v, Cyclotomic::from_int(-1));
            Relation { kind: RelationKind::Binomial, terms: vec![(g, left), (h, right)] }
        })
        .collect();
    binomials.sort_by_key(|r| r.to_text());
    binomials.dedup();
    out.relations = binomials;
    let euler = euler_operators(config);
    for (i, u) in prim.iter().enumerate() {
        out.relations.extend(euler_relations(&euler, beta, i, u));
    }
    out.generators = prim.to_vec();
    out
}

/// The presentation on `T_prim`, with binomial relations enumerated in the
/// fibres of `h`-degree at most `binomial_degree_bound` and checked for stability at bound + 2.
pub fn bbgkz_primitive_presentation(
    module: &SemigroupModule,
    beta: &[Cyclotomic],
    binomial_degree_bound: i64,
) -> Result<SystemPresentation> {
    check_beta(module.config(), beta)?;
    let prim = module_generators(module)?.elements;
    let mut out = assemble_primitive(module, &prim, beta, binomial_degree_bound);
    let next = assemble_primitive(module, &prim, beta, binomial_degree_bound + 2);
    out.stabilized = Some(next.relations == out.relations);
    Ok(out)
}

/// `D_A / D_A(I^τ_{A,ρ}, E − β)`.
pub fn h0_face_presentation(
    config: &PointConfig,
    face: &Face,
    rho: &PartialCharacter,
    beta: &[Cyclotomic],
    engine: &GroebnerEngine,
) -> Result<SystemPresentation> {
    check_beta(config, beta)?;
    let ideal = face_twisted_ideal(config, face, rho, engine)?;
    let mut out = SystemPresentation::empty(config, beta, &format!("face{:?}", face.column_indices), 0);
    out.generators = vec![config.group().zero()];
    out.relations = ideal
        .generators
        .iter()
        .map(|f: &Polynomial| Relation { kind: RelationKind::Ideal, terms: vec![(0, WeylElement::from_polynomial(f))] })
        .collect();
    let euler = euler_operators(config);
    out.relations.extend(euler_relations(&euler, beta, 0, &config.group().zero()));
    Ok(out)
}
