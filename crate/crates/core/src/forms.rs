//! Vector fields and differential forms with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRecord, Vars};
use crate::rational::Q;

/// `Σ a_i ∂/∂x_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    vars: Vars,
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(coeffs: Vec<Poly>) -> Result<Self> {
        let vars = coeffs
            .first()
            .map(|p| p.vars().clone())
            .ok_or_else(|| Error::invalid("a vector field needs a coefficient per variable"))?;
        if coeffs.len() != vars.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} variables",
                coeffs.len(),
                vars.len()
            )));
        }
        for c in &coeffs {
            vars.ensure_same(c.vars())?;
        }
        Ok(VectorField { vars, coeffs })
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField {
            vars: vars.clone(),
            coeffs: vec![Poly::zero(vars); vars.len()],
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// The derivation `h ↦ Σ a_i ∂h/∂x_i`.
    pub fn apply(&self, h: &Poly) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(&self.vars), |acc, (i, a)| acc + a * &h.derivative(i))
    }

    pub fn divergence(&self) -> Poly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Poly::zero(&self.vars), |acc, (i, a)| acc + a.derivative(i))
    }

    /// `V·h + div(V)·h`.
    pub fn apply_twisted(&self, h: &Poly) -> Poly {
        self.apply(h) + &self.divergence() * h
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .zip(self.vars.names())
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| format!("({c})*d/d{n}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A differential `p`-form `Σ c_I dx_I` over strictly increasing index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffForm {
    vars: Vars,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats (the wedge vanishes).
fn normalize_indices(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl DiffForm {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        DiffForm {
            vars: vars.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from possibly permuted index tuples; permutations are
    /// normalized with their sign and repeated indices vanish.
    pub fn from_terms(
        vars: &Vars,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut out = DiffForm::zero(vars, degree);
        for (mut idx, c) in terms {
            vars.ensure_same(c.vars())?;
            if idx.len() != degree {
                return Err(Error::invalid(format!(
                    "index tuple of length {} in a {degree}-form",
                    idx.len()
                )));
            }
            if idx.iter().any(|&i| i >= vars.len()) {
                return Err(Error::invalid("form index out of range"));
            }
            if let Some(sign) = normalize_indices(&mut idx) {
                out.add_term(idx, c.scale(&Q::from_integer(sign.into())));
            }
        }
        Ok(out)
    }

    /// The 0-form `p`.
    pub fn function(p: &Poly) -> Self {
        let mut out = DiffForm::zero(p.vars(), 0);
        out.add_term(vec![], p.clone());
        out
    }

    /// `Σ c_i dx_i`.
    pub fn one_form(coeffs: &[Poly]) -> Result<Self> {
        let vars = coeffs
            .first()
            .map(|p| p.vars().clone())
            .ok_or_else(|| Error::invalid("empty one-form"))?;
        if coeffs.len() != vars.len() {
            return Err(Error::invalid("one-form needs a coefficient per variable"));
        }
        DiffForm::from_terms(
            &vars,
            1,
            coeffs.iter().enumerate().map(|(i, c)| (vec![i], c.clone())),
        )
    }

    /// `p dx_0 ∧ … ∧ dx_{n-1}`.
    pub fn top(p: &Poly) -> Self {
        let n = p.nvars();
        let mut out = DiffForm::zero(p.vars(), n);
        out.add_term((0..n).collect(), p.clone());
        out
    }

    /// `dp`.
    pub fn differential(p: &Poly) -> Self {
        DiffForm::function(p).exterior_derivative()
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    /// Coefficient of `dx_I` for a strictly increasing `I`.
    pub fn coeff(&self, idx: &[usize]) -> Poly {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.vars))
    }

    /// Coefficient of the volume form (top degree only).
    pub fn top_coeff(&self) -> Poly {
        let all: Vec<usize> = (0..self.vars.len()).collect();
        self.coeff(&all)
    }

    pub fn exterior_derivative(&self) -> DiffForm {
        let mut out = DiffForm::zero(&self.vars, self.degree + 1);
        for (idx, c) in &self.terms {
            for i in 0..self.vars.len() {
                let dc = c.derivative(i);
                if dc.is_zero() {
                    continue;
                }
                let mut new_idx = Vec::with_capacity(idx.len() + 1);
                new_idx.push(i);
                new_idx.extend_from_slice(idx);
                if let Some(sign) = normalize_indices(&mut new_idx) {
                    out.add_term(new_idx, dc.scale(&Q::from_integer(sign.into())));
                }
            }
        }
        out
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        self.vars.ensure_same(&other.vars)?;
        let mut out = DiffForm::zero(&self.vars, self.degree + other.degree);
        for (i1, c1) in &self.terms {
            for (i2, c2) in &other.terms {
                let mut idx = i1.clone();
                idx.extend_from_slice(i2);
                if let Some(sign) = normalize_indices(&mut idx) {
                    out.add_term(idx, (c1 * c2).scale(&Q::from_integer(sign.into())));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_poly(&self, p: &Poly) -> DiffForm {
        let mut out = DiffForm::zero(&self.vars, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * p);
        }
        out
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.vars.ensure_same(&other.vars)?;
        if self.degree != other.degree {
            return Err(Error::invalid("adding forms of different degrees"));
        }
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.mul_poly(&Poly::constant(&self.vars, -Q::from_integer(1.into()))))
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.vars.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    format!("({c})")
                } else {
                    let d: Vec<String> = idx.iter().map(|&i| format!("d{}", names[i])).collect();
                    format!("({c})*{}", d.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Structured text record for a differential form.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FormRecord {
    pub vars: Vec<String>,
    pub degree: usize,
    pub terms: Vec<FormTermRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FormTermRecord {
    pub indices: Vec<usize>,
    pub coeff: PolyRecord,
}

impl DiffForm {
    pub fn to_record(&self) -> FormRecord {
        FormRecord {
            vars: self.vars.names().to_vec(),
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(idx, c)| FormTermRecord {
                    indices: idx.clone(),
                    coeff: c.to_record(),
                })
                .collect(),
        }
    }

    pub fn from_record(r: &FormRecord) -> Result<Self> {
        let vars = Vars::new(&r.vars)?;
        let terms = r
            .terms
            .iter()
            .map(|t| Ok((t.indices.clone(), Poly::from_record(&t.coeff)?.embed(&vars)?)))
            .collect::<Result<Vec<_>>>()?;
        DiffForm::from_terms(&vars, r.degree, terms)
    }
}

impl Serialize for DiffForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FormRecord::deserialize(d)?;
        DiffForm::from_record(&r).map_err(serde::de::Error::custom)
    }
}
