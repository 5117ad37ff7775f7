use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `Q(ζ_e) = Q[x] / Φ_e(x)`.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u64,
    /// Coefficients of the monic `Φ_e`, lowest degree first.
    modulus: Vec<BigInt>,
}

impl CycloField {
    pub fn new(order: u64) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        thread_local! {
            static FIELDS: RefCell<HashMap<u64, Arc<CycloField>>> = RefCell::new(HashMap::new());
        }
        FIELDS.with(|cache| {
            cache
                .borrow_mut()
                .entry(order)
                .or_insert_with(|| Arc::new(CycloField { order, modulus: cyclotomic_polynomial(order) }))
                .clone()
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic integer polynomial.
fn int_poly_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for k in (dd..num.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        q[k - dd] = c.clone();
        for (i, di) in den.iter().enumerate() {
            rem[k - dd + i] -= &c * di;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `Φ_e(x) = ∏_{d | e} (x^d − 1)^{μ(e/d)}`.
pub fn cyclotomic_polynomial(e: u64) -> Vec<BigInt> {
    let x_pow_minus_one = |d: u64| {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = BigInt::from(-1);
        p[d as usize] = BigInt::one();
        p
    };
    let divisors: Vec<u64> = (1..=e).filter(|d| e % d == 0).collect();
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for &d in &divisors {
        match mobius(e / d) {
            1 => num = int_poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = int_poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    // den is monic up to sign; normalise so the division sees a monic divisor
    if den.last().unwrap().is_negative() {
        den.iter_mut().for_each(|c| *c = -&*c);
        num.iter_mut().for_each(|c| *c = -&*c);
    }
    int_poly_div_monic(&num, &den)
}

/// An element of `Q(ζ_e)` in the power basis `1, ζ, …, ζ^{φ(e)−1}`.
///
/// Binary operations on elements of different fields lift both operands into
/// `Q(ζ_lcm)`; equality is exact across fields.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl Cyclotomic {
    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { field: CycloField::new(1), coeffs: vec![q] }
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(rat(x))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_e^power`.
    pub fn root_of_unity(e: u64, power: i64) -> Self {
        let field = CycloField::new(e);
        let k = power.mod_floor(&(e as i64)) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        Self::reduce_raw(field, raw)
    }

    /// Element of `Q(ζ_e)` from power-basis coefficients (any length; reduced
    /// modulo `Φ_e`).
    pub fn from_coeffs(e: u64, coeffs: Vec<BigRational>) -> Self {
        Self::reduce_raw(CycloField::new(e), coeffs)
    }

    fn reduce_raw(field: Arc<CycloField>, mut raw: Vec<BigRational>) -> Self {
        let deg = field.degree();
        for k in (deg..raw.len()).rev() {
            let c = std::mem::take(&mut raw[k]);
            if c.is_zero() {
                continue;
            }
            for (i, m) in field.modulus[..deg].iter().enumerate() {
                raw[k - deg + i] -= &c * BigRational::from_integer(m.clone());
            }
        }
        raw.resize(deg, BigRational::zero());
        Cyclotomic { field, coeffs: raw }
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    /// Image in `Q(ζ_target)`; `target` must be a multiple of the order.
    pub fn lift_to(&self, target: u64) -> Cyclotomic {
        let e = self.order();
        assert!(target % e == 0, "cannot lift Q(zeta_{e}) into Q(zeta_{target})");
        if target == e {
            return self.clone();
        }
        let step = (target / e) as usize;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Self::reduce_raw(CycloField::new(target), raw)
    }

    fn aligned(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order() == b.order() {
            return (a.clone(), b.clone());
        }
        let l = a.order().lcm(&b.order());
        (a.lift_to(l), b.lift_to(l))
    }

    fn same_field_mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.coeffs.len() == 1 {
            return Cyclotomic { field: self.field.clone(), coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let mut raw = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Self::reduce_raw(self.field.clone(), raw)
    }

    pub fn inverse(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        if self.coeffs.len() == 1 {
            return Some(Cyclotomic { field: self.field.clone(), coeffs: vec![self.coeffs[0].recip()] });
        }
        let modulus: Vec<BigRational> = self.field.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let s = rational_poly_inverse_mod(&self.coeffs, &modulus);
        Some(Self::reduce_raw(self.field.clone(), s))
    }

    pub fn div(&self, other: &Cyclotomic) -> Option<Cyclotomic> {
        other.inverse().map(|inv| self * &inv)
    }

    pub fn pow(&self, k: i64) -> Option<Cyclotomic> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cyclotomic::one().lift_to(base.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Some(acc)
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// The same element written over the smallest `Q(ζ_f)`, `f | e`, that
    /// contains it. Used for canonical printing and serialization.
    pub fn normalized(&self) -> Cyclotomic {
        if self.is_rational() {
            return Cyclotomic::from_rational(self.coeffs[0].clone());
        }
        let e = self.order();
        for f in (1..e).filter(|f| e % f == 0) {
            let sub = CycloField::new(f);
            // columns: images of ζ_f^k in Q(ζ_e)
            let images: Vec<Vec<BigRational>> =
                (0..sub.degree()).map(|k| Cyclotomic::root_of_unity(f, k as i64).lift_to(e).coeffs).collect();
            if let Some(sol) = solve_rational(&images, &self.coeffs) {
                return Cyclotomic { field: sub, coeffs: sol };
            }
        }
        self.clone()
    }

    /// Multiplicative order, if this is a root of unity of order dividing the
    /// field's `2e`.
    pub fn root_order(&self) -> Option<u64> {
        let bound = 2 * self.order();
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }
}

/// Solve `Σ_k x_k · columns[k] = rhs` exactly, if possible.
pub(crate) fn solve_rational(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<BigRational>> =
        (0..rows).map(|i| columns.iter().map(|c| c[i].clone()).chain([rhs[i].clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = &r[k] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            let v = &c * bi;
            r[k - db + i] -= v;
        }
        q[k - db] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// `s` with `s·a ≡ 1 (mod m)`, for `a` coprime to `m`.
fn rational_poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant gcd
    debug_assert_eq!(r0.len(), 1, "element not invertible modulo the cyclotomic polynomial");
    let inv = r0[0].recip();
    s0.iter().map(|c| c * &inv).collect()
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclotomic::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if rhs.order() == 1 && self.order() != 1 {
            let mut out = self.clone();
            out.coeffs[0] += &rhs.coeffs[0];
            return out;
        }
        if self.order() == 1 && rhs.order() != 1 {
            return rhs + self;
        }
        if self.order() == rhs.order() {
            return Cyclotomic {
                field: self.field.clone(),
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            };
        }
        let (a, b) = Cyclotomic::aligned(self, rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order() == rhs.order() {
            return self.same_field_mul(rhs);
        }
        if rhs.order() == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        if self.order() == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        let (a, b) = Cyclotomic::aligned(self, rhs);
        a.same_field_mul(&b)
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(q: BigRational) -> Self {
        Cyclotomic::from_rational(q)
    }
}

impl From<i64> for Cyclotomic {
    fn from(x: i64) -> Self {
        Cyclotomic::from_int(x)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text: a rational, or a parenthesised sum `a + b*zeta(e)^k …` over
/// the smallest cyclotomic field containing the value.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        if let Some(q) = n.to_rational() {
            return write!(f, "{q}");
        }
        let e = n.order();
        let mut out = String::new();
        for (k, c) in n.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if k == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(&format!("zeta({e})^{k}"));
            }
        }
        write!(f, "({out})")
    }
}
