use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::Serialize;

use crate::exact_algebra::{format_terms, monomial_text_with, Cyclotomic, MonomialOrder, Polynomial};

/// `x^a ∂^b`, the `x` part first.
pub type WeylMonomial = (Vec<u32>, Vec<u32>);

/// An element of the Weyl algebra in `n` variables, normally ordered.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylMonomial, Cyclotomic>,
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i))
}

/// All `k ≤ b` componentwise.
fn boxes(b: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &bi in b {
        out = out.into_iter().flat_map(|p| (0..=bi).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Cyclotomic) -> Self {
        Self::monomial(n, vec![0; n], vec![0; n], c)
    }

    pub fn monomial(n: usize, x: Vec<u32>, d: Vec<u32>, c: Cyclotomic) -> Self {
        let mut w = Self::zero(n);
        w.add_term((x, d), c);
        w
    }

    pub fn x(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Self::monomial(n, e, vec![0; n], Cyclotomic::one())
    }

    pub fn d(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Self::monomial(n, vec![0; n], e, Cyclotomic::one())
    }

    /// A polynomial in the `∂` variables.
    pub fn from_polynomial(f: &Polynomial) -> Self {
        let n = f.nvars();
        let mut w = Self::zero(n);
        for (m, c) in f.terms() {
            w.add_term((vec![0; n], m.clone()), c.clone());
        }
        w
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, x: &[u32], d: &[u32]) -> Cyclotomic {
        self.terms.get(&(x.to_vec(), d.to_vec())).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Cyclotomic::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut w = Self::zero(self.n);
        for (m, v) in &self.terms {
            w.add_term(m.clone(), v * c);
        }
        w
    }

    /// `A`-degree `A·(b − a)` of each monomial `x^a ∂^b`, if all agree.
    pub fn a_degree(&self, columns: &[Vec<i64>]) -> Option<Vec<i64>> {
        let d = columns.first().map_or(0, Vec::len);
        let mut degs = self.terms.keys().map(|(a, b)| {
            (0..d)
                .map(|i| (0..self.n).map(|j| (b[j] as i64 - a[j] as i64) * columns[j][i]).sum())
                .collect::<Vec<i64>>()
        });
        let first = degs.next()?;
        degs.all(|g| g == first).then_some(first)
    }

    /// `x_j ↦ −x_j`, `∂_j ↦ −∂_j`.
    pub fn sign_twist(&self) -> Self {
        let mut w = Self::zero(self.n);
        for ((a, b), c) in &self.terms {
            let deg: u32 = a.iter().chain(b).sum();
            let c = if deg % 2 == 1 { -c } else { c.clone() };
            w.add_term((a.clone(), b.clone()), c);
        }
        w
    }

    /// Terms by decreasing total degree, then grevlex on `∂`, then on `x`.
    pub fn sorted_terms(&self) -> Vec<(&WeylMonomial, &Cyclotomic)> {
        let order = MonomialOrder::GrevLex;
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(p, _), (q, _)| {
            let dp: u32 = p.0.iter().chain(&p.1).sum();
            let dq: u32 = q.0.iter().chain(&q.1).sum();
            dq.cmp(&dp).then_with(|| order.cmp(&q.1, &p.1)).then_with(|| order.cmp(&q.0, &p.0))
        });
        v
    }

    pub fn to_text(&self) -> String {
        self.text_with_suffix("")
    }

    /// Text of `P·g` where `g` is printed as `suffix`.
    pub(crate) fn text_with_suffix(&self, suffix: &str) -> String {
        format_terms(self.sorted_terms().into_iter().map(|((a, b), c)| {
            let parts: Vec<String> =
                [monomial_text_with(a, "x"), monomial_text_with(b, "d"), suffix.to_string()]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect();
            (parts.join("*"), c)
        }))
    }
}

/// Normally ordered product.
pub fn weyl_multiply(p: &WeylElement, q: &WeylElement) -> WeylElement {
    assert_eq!(p.n, q.n, "Weyl elements over different variable counts");
    let n = p.n;
    let mut out = WeylElement::zero(n);
    for ((a, b), c1) in &p.terms {
        for ((c, d), c2) in &q.terms {
            // ∂^b x^c = Σ_k Π C(b_j,k_j)·c_j!/(c_j−k_j)! x^{c−k} ∂^{b−k}
            let coeff = c1 * c2;
            for k in boxes(b) {
                if k.iter().zip(c).any(|(ki, ci)| ki > ci) {
                    continue;
                }
                let mult = (0..n).fold(BigInt::from(1), |acc, j| acc * binom(b[j], k[j]) * falling(c[j], k[j]));
                let x: Vec<u32> = (0..n).map(|j| a[j] + c[j] - k[j]).collect();
                let dd: Vec<u32> = (0..n).map(|j| b[j] - k[j] + d[j]).collect();
                out.add_term((x, dd), coeff.scale(&mult.into()));
            }
        }
    }
    out
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, o: &WeylElement) -> WeylElement {
        let mut w = self.clone();
        for (m, c) in &o.terms {
            w.add_term(m.clone(), c.clone());
        }
        w
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&Cyclotomic::from_int(-1))
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, o: &WeylElement) -> WeylElement {
        self + &(-o)
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, o: &WeylElement) -> WeylElement {
        weyl_multiply(self, o)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize)]
struct TermView {
    coefficient: String,
    d: Vec<u32>,
    x: Vec<u32>,
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.sorted_terms().into_iter().map(|((a, b), c)| TermView {
            coefficient: c.to_string(),
            d: b.clone(),
            x: a.clone(),
        }))
    }
}
