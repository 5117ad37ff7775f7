use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use super::cyclotomic::Cyclotomic;
use super::order::MonomialOrder;

pub type Monomial = Vec<u32>;

/// A polynomial in `d1, …, dn` with coefficients in a cyclotomic field.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Cyclotomic>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Cyclotomic) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Cyclotomic::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: Cyclotomic) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Cyclotomic::one())
    }

    /// `∂^plus − c·∂^minus`.
    pub fn binomial(plus: &[u32], c: &Cyclotomic, minus: &[u32]) -> Self {
        let n = plus.len();
        let a = Self::monomial(n, plus.to_vec(), Cyclotomic::one());
        let b = Self::monomial(n, minus.to_vec(), c.clone());
        &a - &b
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Cyclotomic)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> Option<&Cyclotomic> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: Monomial, c: Cyclotomic) {
        assert_eq!(m.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Terms sorted from largest to smallest monomial.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, Cyclotomic)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Cyclotomic)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&Monomial, &Cyclotomic) -> Cyclotomic) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))))
    }

    /// Embed into a ring with `k` new variables placed before the existing ones.
    pub fn prepend_vars(&self, k: usize) -> Self {
        Polynomial {
            nvars: self.nvars + k,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; k];
                    e.extend_from_slice(m);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Drop the first `k` variables; `None` if any of them occurs.
    pub fn drop_leading_vars(&self, k: usize) -> Option<Self> {
        if self.terms.keys().any(|m| m[..k].iter().any(|&x| x > 0)) {
            return None;
        }
        Some(Polynomial {
            nvars: self.nvars - k,
            terms: self.terms.iter().map(|(m, c)| (m[k..].to_vec(), c.clone())).collect(),
        })
    }

    /// Substitute variables by polynomials (`images[i]` for `d_{i+1}`).
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let n = images.first().map_or(0, |p| p.nvars);
        let mut out = Polynomial::zero(n);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(n, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e);
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Canonical text with the default (grevlex) term order.
    pub fn to_text(&self) -> String {
        self.to_text_with(&MonomialOrder::GrevLex)
    }

    pub fn to_text_with(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".into();
        }
        format_terms(self.sorted_terms(order).iter().map(|(m, c)| (monomial_text(m), c)))
    }
}

/// Signed sum of `coefficient*monomial` terms in the given order.
pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (String, &'a Cyclotomic)>) -> String {
    let mut out = String::new();
    for (mono, c) in terms {
        let (negative, coeff) = match c.to_rational() {
            Some(q) => (q.is_negative(), Some(q.abs()).filter(|a| !num_traits::One::is_one(a)).map(|a| a.to_string())),
            None => (false, Some(c.to_string())),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match (coeff, mono.is_empty()) {
            (Some(cf), true) => out.push_str(&cf),
            (Some(cf), false) => out.push_str(&format!("{cf}*{mono}")),
            (None, true) => out.push('1'),
            (None, false) => out.push_str(&mono),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn monomial_text(m: &[u32]) -> String {
    monomial_text_with(m, "d")
}

pub(crate) fn monomial_text_with(m: &[u32], name: &str) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("{name}{}", i + 1) } else { format!("{name}{}^{e}", i + 1) })
        .collect();
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = Polynomial::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let m: Monomial = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(m, x * y);
            }
        }
        out
    }
}

pub fn rational(n: i64, d: i64) -> Cyclotomic {
    Cyclotomic::from_rational(BigRational::new(n.into(), d.into()))
}
