use std::cmp::Ordering;
use std::collections::HashSet;

use super::cyclotomic::Cyclotomic;
use super::order::MonomialOrder;
use super::polynomial::{Monomial, Polynomial};
use crate::error::{Error, Result};

pub const DEFAULT_PAIR_BUDGET: usize = 5000;

type Term = (Monomial, Cyclotomic);

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// `p − c·x^shift·g`, both operands sorted in decreasing order.
fn sub_scaled(p: &[Term], g: &[Term], shift: &[u32], c: &Cyclotomic, order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &Term| -> Monomial { t.0.iter().zip(shift).map(|(a, b)| a + b).collect() };
    let mut gj = g.first().map(shifted);
    while i < p.len() || j < g.len() {
        let ord = match (&gj, p.get(i)) {
            (Some(m), Some(t)) => order.cmp(&t.0, m),
            (None, _) => Ordering::Greater,
            (_, None) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(p[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gj.take().unwrap(), -&(c * &g[j].1)));
                j += 1;
                gj = g.get(j).map(shifted);
            }
            Ordering::Equal => {
                let v = &p[i].1 - &(c * &g[j].1);
                if !v.is_zero() {
                    out.push((gj.take().unwrap(), v));
                }
                i += 1;
                j += 1;
                gj = g.get(j).map(shifted);
            }
        }
    }
    out
}

/// Full reduction of `f` modulo a list of monic polynomials.
fn reduce(f: Vec<Term>, basis: &[&[Term]], order: &MonomialOrder) -> Vec<Term> {
    let mut rem = Vec::new();
    let mut p = f;
    let mut start = 0;
    while start < p.len() {
        let (m, c) = &p[start];
        match basis.iter().find(|g| divides(&g[0].0, m)) {
            Some(g) => {
                let shift: Monomial = m.iter().zip(&g[0].0).map(|(a, b)| a - b).collect();
                let c = c.clone();
                p = sub_scaled(&p[start..], g, &shift, &c, order);
                start = 0;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    rem
}

fn monic(mut t: Vec<Term>) -> Vec<Term> {
    if let Some((_, c)) = t.first() {
        if !c.is_one() {
            let inv = c.inverse().expect("nonzero leading coefficient");
            for x in &mut t {
                x.1 = &x.1 * &inv;
            }
        }
    }
    t
}

fn to_terms(p: &Polynomial, order: &MonomialOrder) -> Vec<Term> {
    p.sorted_terms(order)
}

fn from_terms(n: usize, t: Vec<Term>) -> Polynomial {
    Polynomial::from_terms(n, t)
}

/// Buchberger's algorithm with a pair budget.
#[derive(Debug, Clone, Copy)]
pub struct GroebnerEngine {
    pub pair_budget: usize,
}

impl Default for GroebnerEngine {
    fn default() -> Self {
        GroebnerEngine { pair_budget: DEFAULT_PAIR_BUDGET }
    }
}

impl GroebnerEngine {
    pub fn with_budget(pair_budget: usize) -> Self {
        GroebnerEngine { pair_budget }
    }

    /// Reduced Gröbner basis: monic, interreduced, sorted by increasing
    /// leading monomial.
    pub fn basis(&self, gens: &[Polynomial], order: &MonomialOrder) -> Result<Vec<Polynomial>> {
        let Some(n) = gens.first().map(Polynomial::nvars) else { return Ok(Vec::new()) };
        let mut g: Vec<Vec<Term>> = Vec::new();
        let mut live: Vec<bool> = Vec::new();
        let mut queue: Vec<(usize, usize)> = Vec::new();
        // pairs already reduced or discarded by a criterion
        let mut done: HashSet<(usize, usize)> = HashSet::new();

        let mut input: Vec<Vec<Term>> =
            gens.iter().filter(|p| !p.is_zero()).map(|p| monic(to_terms(p, order))).collect();
        input.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));

        let add = |h: Vec<Term>,
                   g: &mut Vec<Vec<Term>>,
                   live: &mut Vec<bool>,
                   queue: &mut Vec<(usize, usize)>| {
            let k = g.len();
            for i in 0..k {
                if live[i] {
                    queue.push((i, k));
                }
            }
            // an old element whose lead is a multiple of the new lead is redundant
            for i in 0..k {
                if live[i] && divides(&h[0].0, &g[i][0].0) {
                    live[i] = false;
                }
            }
            g.push(h);
            live.push(true);
        };

        for f in input {
            let basis: Vec<&[Term]> = g.iter().zip(&live).filter(|(_, l)| **l).map(|(t, _)| t.as_slice()).collect();
            let r = reduce(f, &basis, order);
            if !r.is_empty() {
                add(monic(r), &mut g, &mut live, &mut queue);
            }
        }

        let mut processed = 0usize;
        while !queue.is_empty() {
            // normal selection strategy: smallest lcm first
            let (pos, _) = queue
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let la = lcm(&g[a.0][0].0, &g[a.1][0].0);
                    let lb = lcm(&g[b.0][0].0, &g[b.1][0].0);
                    order.cmp(&la, &lb).then_with(|| a.cmp(b))
                })
                .unwrap();
            let (i, j) = queue.swap_remove(pos);
            done.insert((i, j));
            let (li, lj) = (&g[i][0].0, &g[j][0].0);
            if coprime(li, lj) {
                continue;
            }
            let l = lcm(li, lj);
            let chain = (0..g.len()).any(|k| {
                k != i
                    && k != j
                    && divides(&g[k][0].0, &l)
                    && done.contains(&(i.min(k), i.max(k)))
                    && done.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            processed += 1;
            if processed > self.pair_budget {
                return Err(Error::BudgetExceeded { budget: self.pair_budget });
            }
            let si: Monomial = l.iter().zip(li).map(|(a, b)| a - b).collect();
            let sj: Monomial = l.iter().zip(lj).map(|(a, b)| a - b).collect();
            let a = sub_scaled(&[], &g[i], &si, &Cyclotomic::from_int(-1), order);
            let s = sub_scaled(&a, &g[j], &sj, &Cyclotomic::one(), order);
            let basis: Vec<&[Term]> = g.iter().zip(&live).filter(|(_, l)| **l).map(|(t, _)| t.as_slice()).collect();
            let r = reduce(s, &basis, order);
            if !r.is_empty() {
                add(monic(r), &mut g, &mut live, &mut queue);
            }
        }

        Ok(interreduce(n, g.into_iter().zip(live).filter(|(_, l)| *l).map(|(t, _)| t).collect(), order))
    }
}

fn interreduce(n: usize, mut g: Vec<Vec<Term>>, order: &MonomialOrder) -> Vec<Polynomial> {
    g.sort_by(|a, b| order.cmp(&a[0].0, &b[0].0));
    let mut minimal: Vec<Vec<Term>> = Vec::new();
    for t in g {
        if !minimal.iter().any(|m| divides(&m[0].0, &t[0].0)) {
            minimal.push(t);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<&[Term]> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, t)| t.as_slice()).collect();
        let lead = minimal[k][0].clone();
        let tail = reduce(minimal[k][1..].to_vec(), &others, order);
        let mut t = vec![lead];
        t.extend(tail);
        out.push(from_terms(n, monic(t)));
    }
    out
}

pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder) -> Result<Vec<Polynomial>> {
    GroebnerEngine::default().basis(gens, order)
}

/// Remainder of `f` on division by a Gröbner basis.
pub fn normal_form(f: &Polynomial, gb: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let basis: Vec<Vec<Term>> = gb.iter().filter(|p| !p.is_zero()).map(|p| monic(to_terms(p, order))).collect();
    let refs: Vec<&[Term]> = basis.iter().map(Vec::as_slice).collect();
    from_terms(f.nvars(), reduce(to_terms(f, order), &refs, order))
}

/// Whether every S-polynomial of `gb` reduces to zero.
pub fn is_groebner(gb: &[Polynomial], order: &MonomialOrder) -> bool {
    let basis: Vec<Vec<Term>> = gb.iter().filter(|p| !p.is_zero()).map(|p| monic(to_terms(p, order))).collect();
    let refs: Vec<&[Term]> = basis.iter().map(Vec::as_slice).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
            let l = lcm(li, lj);
            let si: Monomial = l.iter().zip(li).map(|(a, b)| a - b).collect();
            let sj: Monomial = l.iter().zip(lj).map(|(a, b)| a - b).collect();
            let a = sub_scaled(&[], &basis[i], &si, &Cyclotomic::from_int(-1), order);
            let s = sub_scaled(&a, &basis[j], &sj, &Cyclotomic::one(), order);
            if !reduce(s, &refs, order).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn single_binomial_is_reduced() {
        let f = &d(2, 0).pow(2) - &d(2, 1);
        let gb = groebner_basis(&[f.clone()], &MonomialOrder::Lex).unwrap();
        assert_eq!(gb, vec![f]);
    }

    #[test]
    fn one_reduction_step() {
        let f = &d(2, 0).pow(2) - &d(2, 1);
        let gb = groebner_basis(&[f, d(2, 1)], &MonomialOrder::Lex).unwrap();
        assert_eq!(gb, vec![d(2, 1), d(2, 0).pow(2)]);
    }

    #[test]
    fn twisted_pair_over_gaussian_rationals() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let f = Polynomial::binomial(&[2, 0], &i, &[0, 1]);
        let g = Polynomial::binomial(&[2, 0], &(-&i), &[0, 1]);
        let gb = groebner_basis(&[f, g], &MonomialOrder::Lex).unwrap();
        assert_eq!(gb, vec![d(2, 1), d(2, 0).pow(2)]);
    }

    #[test]
    fn unit_ideal() {
        let f = &d(1, 0) - &Polynomial::one(1);
        let gb = groebner_basis(&[f, d(1, 0)], &MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb, vec![Polynomial::one(1)]);
    }

    #[test]
    fn budget_is_enforced() {
        let x = d(3, 0);
        let y = d(3, 1);
        let z = d(3, 2);
        let gens = vec![&(&x * &y) - &z.pow(2), &(&y * &z) - &x.pow(2), &(&x * &z) - &y.pow(2)];
        let err = GroebnerEngine::with_budget(1).basis(&gens, &MonomialOrder::GrevLex).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 1 });
        let gb = GroebnerEngine::default().basis(&gens, &MonomialOrder::GrevLex).unwrap();
        assert!(is_groebner(&gb, &MonomialOrder::GrevLex));
    }
}
