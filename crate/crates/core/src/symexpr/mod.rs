//! Exact symbolic arithmetic: multivariate rational functions over the
//! rationals in chart coordinates plus named parameters.
//!
//! Every `Expr` is kept in a canonical form: numerator and denominator are
//! coprime (polynomial gcd is a unit) and the denominator is monic in the
//! global graded-lex term order. Canonical form makes structural equality
//! decide function equality, which is what every residual check in the
//! verification suites relies on.

mod parse;
mod poly;

pub use parse::parse;
pub use poly::{gcd, Monomial, Poly};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Whether a symbol is a chart coordinate (differentiable) or a free
/// parameter such as lambda or b.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Coordinate,
    Parameter,
}

/// Ordered table of all indeterminates in a workspace. Coordinates come
/// first, in chart order, followed by parameters.
#[derive(Debug, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    kinds: Vec<SymbolKind>,
}

pub type SymbolsRef = Arc<Symbols>;

impl Symbols {
    pub fn new(coordinates: &[&str], parameters: &[&str]) -> SymbolsRef {
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        for c in coordinates {
            names.push((*c).to_string());
            kinds.push(SymbolKind::Coordinate);
        }
        for p in parameters {
            names.push((*p).to_string());
            kinds.push(SymbolKind::Parameter);
        }
        assert!(
            {
                let mut sorted = names.clone();
                sorted.sort();
                sorted.windows(2).all(|w| w[0] != w[1])
            },
            "indeterminate names must be unique"
        );
        Arc::new(Symbols { names, kinds })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn kind(&self, idx: usize) -> SymbolKind {
        self.kinds[idx]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn coordinates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.kinds[i] == SymbolKind::Coordinate)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum ExprError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by an identically-zero expression")]
    DivisionByZero,
    #[error("exponent must be an integer literal")]
    NonIntegerExponent,
    #[error("cannot differentiate with respect to parameter `{0}`")]
    DifferentiateParameter(String),
}

/// Exact rational function in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    syms: SymbolsRef,
    num: Poly,
    den: Poly,
}

impl Expr {
    fn canonical(syms: SymbolsRef, num: Poly, den: Poly) -> Expr {
        assert!(!den.is_zero(), "denominator is identically zero");
        if num.is_zero() {
            let n = syms.len();
            return Expr {
                syms,
                num: Poly::zero(n),
                den: Poly::one(n),
            };
        }
        let g = gcd(&num, &den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        // Monic denominator pins the remaining unit ambiguity.
        let (_, lc) = den.leading().unwrap();
        let lc = lc.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Expr { syms, num, den }
    }

    pub fn from_poly(syms: &SymbolsRef, num: Poly) -> Expr {
        let den = Poly::one(syms.len());
        Expr::canonical(syms.clone(), num, den)
    }

    pub fn zero(syms: &SymbolsRef) -> Expr {
        Expr::from_poly(syms, Poly::zero(syms.len()))
    }

    pub fn one(syms: &SymbolsRef) -> Expr {
        Expr::from_poly(syms, Poly::one(syms.len()))
    }

    pub fn int(syms: &SymbolsRef, c: i64) -> Expr {
        Expr::from_poly(syms, Poly::from_int(syms.len(), c))
    }

    pub fn rational(syms: &SymbolsRef, num: i64, den: i64) -> Expr {
        assert!(den != 0);
        Expr::from_poly(
            syms,
            Poly::constant(
                syms.len(),
                BigRational::new(BigInt::from(num), BigInt::from(den)),
            ),
        )
    }

    pub fn var(syms: &SymbolsRef, idx: usize) -> Expr {
        Expr::from_poly(syms, Poly::var(syms.len(), idx))
    }

    pub fn symbol(syms: &SymbolsRef, name: &str) -> Result<Expr, ExprError> {
        syms.lookup(name)
            .map(|i| Expr::var(syms, i))
            .ok_or_else(|| ExprError::UnknownSymbol(name.to_string()))
    }

    pub fn symbols(&self) -> &SymbolsRef {
        &self.syms
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Constant value if the expression is a rational constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    fn check_same(&self, other: &Expr) {
        debug_assert!(
            Arc::ptr_eq(&self.syms, &other.syms) || self.syms == other.syms,
            "mixing expressions from different workspaces"
        );
    }

    pub fn add(&self, other: &Expr) -> Expr {
        self.check_same(other);
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Expr::canonical(self.syms.clone(), num, den)
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            syms: self.syms.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        self.check_same(other);
        Expr::canonical(
            self.syms.clone(),
            self.num.mul(&other.num),
            self.den.mul(&other.den),
        )
    }

    pub fn div(&self, other: &Expr) -> Result<Expr, ExprError> {
        self.check_same(other);
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Expr::canonical(
            self.syms.clone(),
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn scale_int(&self, c: i64) -> Expr {
        self.mul(&Expr::int(&self.syms, c))
    }

    pub fn pow(&self, e: i64) -> Result<Expr, ExprError> {
        if e >= 0 {
            Ok(Expr::canonical(
                self.syms.clone(),
                self.num.pow(e as u32),
                self.den.pow(e as u32),
            ))
        } else {
            if self.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            Ok(Expr::canonical(
                self.syms.clone(),
                self.den.pow((-e) as u32),
                self.num.pow((-e) as u32),
            ))
        }
    }

    /// Quotient-rule-exact partial derivative with respect to a coordinate.
    pub fn differentiate(&self, v: usize) -> Result<Expr, ExprError> {
        if self.syms.kind(v) == SymbolKind::Parameter {
            return Err(ExprError::DifferentiateParameter(
                self.syms.name(v).to_string(),
            ));
        }
        Ok(self.differentiate_unchecked(v))
    }

    /// Partial derivative without the coordinate-kind guard; used internally
    /// where the index is known to be a coordinate.
    pub fn differentiate_unchecked(&self, v: usize) -> Expr {
        let num = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        let den = self.den.mul(&self.den);
        Expr::canonical(self.syms.clone(), num, den)
    }

    /// Evaluate at a rational point; `None` at a pole of the denominator.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    /// Replace symbol `v` by `value` everywhere (exact composition).
    pub fn substitute(&self, v: usize, value: &Expr) -> Expr {
        let num = self.subst_poly(&self.num, v, value);
        let den = self.subst_poly(&self.den, v, value);
        num.div(&den).expect("substitution produced zero denominator")
    }

    fn subst_poly(&self, p: &Poly, v: usize, value: &Expr) -> Expr {
        let mut acc = Expr::zero(&self.syms);
        for (m, c) in &p.terms {
            let mut t = Expr::from_poly(&self.syms, Poly::constant(self.syms.len(), c.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i == v {
                    value.clone()
                } else {
                    Expr::var(&self.syms, i)
                };
                t = t.mul(&base.pow(e as i64).expect("nonnegative power"));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// True iff the expression mentions symbol `v`.
    pub fn depends_on(&self, v: usize) -> bool {
        self.num.degree_in(v) > 0 || self.den.degree_in(v) > 0
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", parse::print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms() -> SymbolsRef {
        Symbols::new(&["x", "y", "z"], &["lambda"])
    }

    #[test]
    fn field_identities() {
        let s = syms();
        let z = Expr::symbol(&s, "z").unwrap();
        assert!(z.div(&z).unwrap().is_one());
        let x = Expr::symbol(&s, "x").unwrap();
        let y = Expr::symbol(&s, "y").unwrap();
        assert!(x.sub(&y).add(&y.sub(&x)).is_zero());
        let inv_z = Expr::one(&s).div(&z).unwrap();
        assert!(inv_z.mul(&z).is_one());
    }

    #[test]
    fn binomial_normalizes() {
        let s = syms();
        let x = Expr::symbol(&s, "x").unwrap();
        let y = Expr::symbol(&s, "y").unwrap();
        let lhs = x.add(&y).pow(2).unwrap();
        let rhs = x
            .mul(&x)
            .add(&x.mul(&y).scale_int(2))
            .add(&y.mul(&y));
        assert_eq!(lhs, rhs);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn quotient_rule() {
        let s = syms();
        let z = Expr::symbol(&s, "z").unwrap();
        let zi = s.lookup("z").unwrap();
        let inv = Expr::one(&s).div(&z).unwrap();
        let d = inv.differentiate(zi).unwrap();
        let expected = Expr::int(&s, -1).div(&z.mul(&z)).unwrap();
        assert_eq!(d, expected);
        // d/dx z = 0
        assert!(z.differentiate(s.lookup("x").unwrap()).unwrap().is_zero());
        // d/dz z^2 = 2z
        let d2 = z.mul(&z).differentiate(zi).unwrap();
        assert_eq!(d2, z.scale_int(2));
    }

    #[test]
    fn differentiate_parameter_rejected() {
        let s = syms();
        let l = Expr::symbol(&s, "lambda").unwrap();
        let idx = s.lookup("lambda").unwrap();
        assert!(matches!(
            l.differentiate(idx),
            Err(ExprError::DifferentiateParameter(_))
        ));
    }

    #[test]
    fn division_by_zero_rejected() {
        let s = syms();
        let x = Expr::symbol(&s, "x").unwrap();
        assert_eq!(x.div(&Expr::zero(&s)), Err(ExprError::DivisionByZero));
    }

    #[test]
    fn substitution() {
        let s = syms();
        let l = Expr::symbol(&s, "lambda").unwrap();
        let li = s.lookup("lambda").unwrap();
        let e = l.mul(&l).sub(&Expr::int(&s, 9));
        let out = e.substitute(li, &Expr::int(&s, 3));
        assert!(out.is_zero());
    }
}
