//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] lives in a ring described by an ordered list of variable names
//! ([`Vars`]). Terms are stored in a `BTreeMap` keyed by exponent vectors, so
//! there is exactly one representation for each polynomial and no stored
//! coefficient is ever zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Ordered variable names of a polynomial ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().trim().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !is_identifier(n) {
                return Err(Error::invalid(format!("bad variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Vars(names.into()))
    }

    /// Parses a comma separated list such as `x,y`.
    pub fn parse(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).collect();
        Vars::new(&names)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Concatenation of two rings; names must be disjoint.
    pub fn join(&self, other: &Vars) -> Result<Vars> {
        let mut all: Vec<String> = self.0.to_vec();
        all.extend(other.0.iter().cloned());
        Vars::new(&all)
    }

    pub fn ensure_same(&self, other: &Vars) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.0.join(","),
                right: other.0.join(","),
            })
        }
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(","))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Exponent vector, one entry per ring variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Monomial)
    }

    /// Panics on overflow; exponents never wrap silently.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("exponent overflow")
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Renders with the given variable names, e.g. `x^2*y`; the unit is `1`.
    pub fn display(&self, vars: &Vars) -> String {
        let mut parts = Vec::new();
        for (name, &e) in vars.names().iter().zip(&self.0) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Order used when listing quotient bases: compare exponents starting from
    /// the last variable, so `1, x, y, x*y` comes out in that order.
    pub fn listing_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

/// Graded lexicographic comparison (higher total degree first, then lex with
/// the first variable most significant). Used for canonical printing.
pub fn grlex_desc(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.total_degree()
        .cmp(&a.total_degree())
        .then_with(|| b.0.cmp(&a.0))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        Self::term(vars, Monomial::one(vars.len()), c)
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn term(vars: &Vars, m: Monomial, c: Q) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn monomial(vars: &Vars, m: Monomial) -> Self {
        Self::term(vars, m, Q::one())
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars.index_of(name)?;
        Ok(Self::monomial(vars, Monomial::var(vars.len(), i)))
    }

    pub fn var_at(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i))
    }

    /// Builds from arbitrary (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Result<Self> {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            if m.0.len() != vars.len() {
                return Err(Error::invalid(format!(
                    "exponent vector of length {} in a ring of {} variables",
                    m.0.len(),
                    vars.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            self.vars == other.vars,
            "ring mismatch: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Result<Poly> {
        let mut out = Poly::zero(&self.vars);
        if c.is_zero() {
            return Ok(out);
        }
        for (k, a) in &self.terms {
            out.terms.insert(k.checked_mul(m)?, a * c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ring(other);
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.checked_mul(m2)?, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Poly> {
        let i = self.vars.index_of(var)?;
        Ok(self.derivative(i))
    }

    /// Formal partial derivative with respect to the variable at index `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.terms.insert(m2, c * Q::from_integer(e.into()));
        }
        out
    }

    /// Drops every term whose total degree exceeds `max_degree`.
    pub fn truncate(&self, max_degree: u64) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `images[i]` for variable `i`; images share a target ring.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars() {
            return Err(Error::invalid("substitution needs one image per variable"));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        for img in images {
            target.ensure_same(&img.vars)?;
        }
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.checked_mul(&img.pow(e))?;
                }
            }
            out = out + t;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in a ring containing all of its variables.
    pub fn embed(&self, target: &Vars) -> Result<Poly> {
        let map: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect::<Result<_>>()?;
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in map.iter().enumerate() {
                e[k] = m.0[i];
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Leading term for the graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().min_by(|a, b| grlex_desc(a.0, b.0))
    }

    /// `self / d` when the division is exact in `Q[x]`, by long division on
    /// graded lexicographic leading terms.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.check_ring(d);
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let m = Monomial(rm.0.iter().zip(&dm.0).map(|(a, b)| a - b).collect());
            let c = rc / &dc;
            rem = &rem - &d.mul_monomial(&m, &c).ok()?;
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Divides every coefficient by the positive content, so the result has
    /// coprime integer coefficients.
    pub fn primitive(&self) -> Poly {
        let c = crate::rational::content(self.terms.values());
        self.scale(&c.recip())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_desc(a, b));
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(&self.vars))?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), m.display(&self.vars))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.vars)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("exponent overflow")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Positive weights on the ring variables together with the weighted degree
/// of a quasi-homogeneous polynomial they certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<Q>,
    total_degree: Q,
}

impl WeightSystem {
    /// Checks that every term of `f` has the same weighted degree under
    /// `weights` and records that degree.
    pub fn certify(f: &Poly, weights: Vec<Q>) -> Result<Self> {
        if weights.len() != f.nvars() {
            return Err(Error::invalid(format!(
                "{} weights given for {} variables",
                weights.len(),
                f.nvars()
            )));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::invalid("weights must be positive"));
        }
        let mut degs = f.terms().map(|(m, _)| weighted_degree_q(m, &weights));
        let d = degs
            .next()
            .ok_or_else(|| Error::invalid("cannot certify the zero polynomial"))?;
        if degs.any(|e| e != d) {
            return Err(Error::invalid(format!(
                "`{f}` is not quasi-homogeneous for the given weights"
            )));
        }
        if !d.is_positive() {
            return Err(Error::invalid("quasi-homogeneous degree must be positive"));
        }
        Ok(WeightSystem {
            weights,
            total_degree: d,
        })
    }

    /// Weight system without a certified polynomial (degree 1 placeholder).
    pub fn uncertified(weights: Vec<Q>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::invalid("weights must be positive"));
        }
        Ok(WeightSystem {
            weights,
            total_degree: Q::one(),
        })
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn total_degree(&self) -> &Q {
        &self.total_degree
    }

    pub fn weight_sum(&self) -> Q {
        self.weights.iter().fold(Q::zero(), |a, w| a + w)
    }

    pub fn degree_of(&self, m: &Monomial) -> Q {
        weighted_degree_q(m, &self.weights)
    }

    /// Integer weights proportional to these ones, with gcd 1.
    pub fn integer_weights(&self) -> Vec<u64> {
        use num_integer::Integer;
        let lcm = self
            .weights
            .iter()
            .fold(num_bigint::BigInt::one(), |a, w| a.lcm(w.denom()));
        let ints: Vec<num_bigint::BigInt> = self
            .weights
            .iter()
            .map(|w| (w * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(num_bigint::BigInt::zero(), |a, b| a.gcd(b));
        ints.iter()
            .map(|v| {
                let r: num_bigint::BigInt = v / &g;
                u64::try_from(r).expect("weight too large")
            })
            .collect()
    }

    /// The same ratios on a ring with additional variables, normalized so the
    /// certified degree becomes 1. Used to combine two certificates.
    pub fn normalized(&self) -> Vec<Q> {
        self.weights.iter().map(|w| w / &self.total_degree).collect()
    }
}

/// `Σ w_i m_i`.
pub fn weighted_degree(m: &Monomial, w: &WeightSystem) -> Q {
    weighted_degree_q(m, &w.weights)
}

fn weighted_degree_q(m: &Monomial, w: &[Q]) -> Q {
    m.0.iter()
        .zip(w)
        .fold(Q::zero(), |acc, (&e, wi)| acc + wi * Q::from_integer(e.into()))
}

/// Structured text record for a polynomial.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyRecord {
    pub vars: Vec<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    #[serde(with = "crate::rational::serde_q")]
    pub coeff: Q,
}

impl Poly {
    pub fn to_record(&self) -> PolyRecord {
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex_desc(a, b));
        PolyRecord {
            vars: self.vars.names().to_vec(),
            terms: keys
                .into_iter()
                .map(|m| TermRecord {
                    exp: m.0.clone(),
                    coeff: self.terms[m].clone(),
                })
                .collect(),
        }
    }

    pub fn from_record(r: &PolyRecord) -> Result<Poly> {
        let vars = Vars::new(&r.vars)?;
        Poly::from_terms(
            &vars,
            r.terms.iter().map(|t| (Monomial(t.exp.clone()), t.coeff.clone())),
        )
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRecord::deserialize(d)?;
        Poly::from_record(&r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn exact_division() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let f = Poly::parse("x^3*(x^3+y^3)", &v).unwrap();
        let u = Poly::parse("x", &v).unwrap();
        assert_eq!(f.div_exact(&u.pow(3)).unwrap(), Poly::parse("x^3+y^3", &v).unwrap());
        assert!(f.div_exact(&u.pow(4)).is_none());
        let g = Poly::parse("(x+y^2)^2*(x-y)", &v).unwrap();
        assert_eq!(g.div_exact(&Poly::parse("x-y", &v).unwrap()).unwrap(), Poly::parse("(x+y^2)^2", &v).unwrap());
    }

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &xy()).unwrap()
    }

    #[test]
    fn partials_of_the_worked_curve() {
        let f = p("x^3*(x^3+y^3)");
        assert_eq!(f.partial_derivative("x").unwrap(), p("6*x^5+3*x^2*y^3"));
        assert_eq!(f.partial_derivative("y").unwrap(), p("3*x^3*y^2"));
        assert!(p("7").partial_derivative("x").unwrap().is_zero());
        assert_eq!(
            f.partial_derivative("z"),
            Err(Error::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn canonical_printing_is_grlex() {
        assert_eq!(p("y^3*x^3 + x^6").to_string(), "x^6 + x^3*y^3");
        assert_eq!(p("1 - 2*y + x/3").to_string(), "1/3*x - 2*y + 1");
        assert_eq!(p("0").to_string(), "0");
        assert_eq!(p("-x").to_string(), "-x");
    }

    #[test]
    fn no_zero_coefficients_survive() {
        let f = p("x + y") - p("x");
        assert_eq!(f, p("y"));
        assert_eq!(f.num_terms(), 1);
        assert!((p("x^2") - p("x*x")).is_zero());
    }

    #[test]
    fn weighted_degrees() {
        let w = WeightSystem::uncertified(vec![q(1), q(1)]).unwrap();
        assert_eq!(weighted_degree(&Monomial(vec![3, 4]), &w), q(7));
        let w = WeightSystem::uncertified(vec![qf(1, 2), qf(1, 3)]).unwrap();
        assert_eq!(weighted_degree(&Monomial(vec![2, 1]), &w), qf(4, 3));
        assert_eq!(weighted_degree(&Monomial(vec![0, 0]), &w), q(0));
    }

    #[test]
    fn certify_quasi_homogeneous() {
        let w = WeightSystem::certify(&p("x^3*(x^3+y^3)"), vec![q(1), q(1)]).unwrap();
        assert_eq!(w.total_degree(), &q(6));
        let w = WeightSystem::certify(&p("x^3+y^2"), vec![qf(1, 3), qf(1, 2)]).unwrap();
        assert_eq!(w.total_degree(), &q(1));
        assert_eq!(w.integer_weights(), vec![2, 3]);
        assert!(WeightSystem::certify(&p("x^3+y^2"), vec![q(1), q(1)]).is_err());
        assert!(WeightSystem::certify(&p("x"), vec![q(-1), q(1)]).is_err());
    }

    #[test]
    fn exponent_overflow_is_detected() {
        let big = Monomial(vec![u32::MAX, 0]);
        assert_eq!(
            big.checked_mul(&Monomial(vec![1, 0])),
            Err(Error::ExponentOverflow)
        );
    }

    #[test]
    fn substitution_and_embedding() {
        let f = p("x^2 - y");
        let g = f.substitute(&[p("x+y"), p("x")]).unwrap();
        assert_eq!(g, p("x^2 + 2*x*y + y^2 - x"));
        let xyz = Vars::new(&["x", "y", "z"]).unwrap();
        let e = f.embed(&xyz).unwrap();
        assert_eq!(e.to_string(), "x^2 - y");
        assert_eq!(e.nvars(), 3);
    }

    #[test]
    fn record_round_trip() {
        let f = p("3/7*x^2*y - 5 + y^4/11");
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"3/7\""));
        let g: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(f, g);
    }
}
