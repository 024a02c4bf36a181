//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are exponent vectors over a fixed symbol table; the term order
//! is graded lexicographic. Everything here is exact: coefficients are
//! `BigRational`, gcds are computed with a primitive polynomial remainder
//! sequence, and division panics if it is not exact (callers only divide by
//! known divisors).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector, one entry per symbol in the workspace table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

// Graded lex: total degree first, then lexicographic on exponents.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over the rationals. The map never stores zero
/// coefficients; the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(nvars), c);
        }
        Poly { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, idx), BigRational::one());
        Poly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_constant() && c.is_one())
                .unwrap_or(false)
    }

    /// Constant value if the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_constant() {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[v] = e - 1;
            out.insert_term(m2, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[v];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Highest variable index actually present, if any.
    pub fn max_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for m in self.terms.keys() {
            for (v, &e) in m.0.iter().enumerate() {
                if e > 0 && best.map_or(true, |b| v > b) {
                    best = Some(v);
                }
            }
        }
        best
    }

    /// Leading coefficient and monomial in the global term order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Dense coefficient list viewing `self` as univariate in `v`:
    /// index i holds the coefficient polynomial of v^i (with v cleared).
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            out[e].insert_term(m2, c.clone());
        }
        out
    }

    fn mul_var_pow(&self, v: usize, e: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[v] += e;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    fn leading_coeff_in(&self, v: usize) -> Poly {
        let d = self.degree_in(v);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[v] == d {
                let mut m2 = m.clone();
                m2.0[v] = 0;
                out.insert_term(m2, c.clone());
            }
        }
        out
    }

    /// Divide out the rational content and fix the sign so the leading
    /// coefficient is positive; result has coprime integer coefficients.
    pub fn unit_normalize(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_bigint_gcd(&num_gcd, c.numer());
            den_lcm = &den_lcm / num_bigint_gcd(&den_lcm, c.denom()) * c.denom();
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        let (_, lc) = self.leading().unwrap();
        if lc.is_negative() {
            content = -content;
        }
        self.scale(&content.recip())
    }

    /// Exact division; panics if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return self.clone();
        }
        if let Some(c) = divisor.as_constant() {
            return self.scale(&c.recip());
        }
        let v = divisor.max_var().unwrap();
        let db = divisor.degree_in(v);
        let lb = divisor.leading_coeff_in(v);
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while !r.is_zero() {
            let dr = r.degree_in(v);
            assert!(dr >= db, "inexact polynomial division");
            let lr = r.leading_coeff_in(v);
            let c = lr.div_exact(&lb);
            let t = c.mul_var_pow(v, dr - db);
            q = q.add(&t);
            r = r.sub(&t.mul(divisor));
        }
        q
    }

    /// Pseudo-remainder of `self` by `other`, both viewed univariately in `v`.
    fn prem(&self, other: &Poly, v: usize) -> Poly {
        let db = other.degree_in(v);
        let lb = other.leading_coeff_in(v);
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.leading_coeff_in(v);
            r = r.mul(&lb).sub(&other.mul(&lr.mul_var_pow(v, dr - db)));
        }
        r
    }

    /// Content (gcd of the `v`-coefficients) and primitive part w.r.t. `v`.
    fn content_primitive_wrt(&self, v: usize) -> (Poly, Poly) {
        let coeffs = self.coeffs_in(v);
        let mut content = Poly::zero(self.nvars);
        for c in &coeffs {
            content = gcd(&content, c);
        }
        let primitive = self.div_exact(&content);
        (content, primitive)
    }
}

fn num_bigint_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

/// Polynomial gcd over the rationals via a primitive remainder sequence.
/// The result is unit-normalized (coprime integer coefficients, positive
/// leading coefficient); gcd of two nonzero constants is 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.unit_normalize();
    }
    if b.is_zero() {
        return a.unit_normalize();
    }
    let v = match a.max_var().into_iter().chain(b.max_var()).max() {
        None => return Poly::one(a.nvars),
        Some(v) => v,
    };
    let (ca, pa) = a.content_primitive_wrt(v);
    let (cb, pb) = b.content_primitive_wrt(v);
    let cont = gcd(&ca, &cb);
    let (mut p, mut q) = if pa.degree_in(v) >= pb.degree_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !q.is_zero() {
        let r = p.prem(&q, v);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            let (_, prim) = r.content_primitive_wrt(v);
            prim
        };
    }
    let prim_gcd = if p.degree_in(v) == 0 {
        Poly::one(a.nvars)
    } else {
        let (_, prim) = p.content_primitive_wrt(v);
        prim
    };
    cont.mul(&prim_gcd).unit_normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(3, 0)
    }
    fn y() -> Poly {
        Poly::var(3, 1)
    }

    #[test]
    fn arithmetic_basics() {
        let p = x().add(&y()).mul(&x().sub(&y()));
        let q = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(p, q);
        assert!(x().sub(&x()).is_zero());
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = x().mul(&x()).sub(&y().mul(&y()));
        let b = x().sub(&y());
        let g = gcd(&a, &b);
        assert_eq!(g, x().sub(&y()));
        assert_eq!(a.div_exact(&g), x().add(&y()));
    }

    #[test]
    fn gcd_with_content() {
        // gcd(2x^2, 4x) = 2x up to units -> unit-normalized x... content over Q
        // collapses rational constants, so expect x.
        let a = x().mul(&x()).scale(&BigRational::from_integer(2.into()));
        let b = x().scale(&BigRational::from_integer(4.into()));
        assert_eq!(gcd(&a, &b), x());
    }

    #[test]
    fn derivative_and_eval() {
        let p = x().pow(3).add(&y());
        let d = p.derivative(0);
        assert_eq!(d, x().mul(&x()).scale(&BigRational::from_integer(3.into())));
        let pt = vec![
            BigRational::from_integer(2.into()),
            BigRational::from_integer(5.into()),
            BigRational::zero(),
        ];
        assert_eq!(p.eval(&pt), BigRational::from_integer(13.into()));
    }

    #[test]
    fn unit_normalize_sign_and_content() {
        let p = x().scale(&BigRational::new((-6).into(), 4.into()));
        let n = p.unit_normalize();
        assert_eq!(n, x());
    }
}
