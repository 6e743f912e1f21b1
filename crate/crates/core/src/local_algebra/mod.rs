//! Linear algebra at the origin: ideal membership in jet spaces, quotient
//! dimensions, saturation by the maximal ideal and the twisted quotient
//! `O / (I + Ṽ(O))`.
//!
//! Two regimes are supported. With a weight certificate every input is
//! quasi-homogeneous and each computation splits into finite graded slices,
//! which is exact. Without one, computations run in the jet space
//! `O / m^M` and a result is only accepted when the jet orders `M` and
//! `M + 2` agree; such results are flagged as heuristic.

mod saturation;
mod space;
mod twisted;

use std::fmt;

pub use saturation::{milnor_number, mu, saturate_at_origin, MuResult, Saturation};
pub use space::{GradedSlice, JetSpace, MonomialSpace};
pub use twisted::{twisted_quotient_dim, TwistedQuotient};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Vars, WeightSystem};

pub(crate) use space::degree_range;

/// Caps shared by the stabilization loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Jet order `M`: heuristic computations run in `O / m^M`, graded ones
    /// up to weighted degree `(M - 1)·min(w)`.
    pub jet_order: usize,
    /// Number of consecutive empty graded pieces that ends a graded scan.
    pub window: Option<usize>,
    /// Truncation order `N` for (a,b)-module models.
    pub trunc_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            jet_order: 24,
            window: None,
            trunc_order: 16,
        }
    }
}

impl Caps {
    pub fn with_jet_order(mut self, m: usize) -> Self {
        self.jet_order = m;
        self
    }

    pub fn with_window(mut self, w: usize) -> Self {
        self.window = Some(w);
        self
    }

    pub fn window_or(&self, default: usize) -> usize {
        self.window.unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        if self.jet_order < 4 {
            return Err(Error::invalid("jet order must be at least 4"));
        }
        if self.trunc_order < 2 {
            return Err(Error::invalid("truncation order must be at least 2"));
        }
        if self.window == Some(0) {
            return Err(Error::invalid("graded window must be positive"));
        }
        Ok(())
    }

    /// Highest weighted degree scanned for integer weights `w`.
    pub(crate) fn graded_top(&self, w: &[u64]) -> u64 {
        let wmin = w.iter().copied().min().unwrap_or(1);
        (self.jet_order as u64 - 1) * wmin
    }
}

/// A finite generating set of an ideal of the local ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealGens {
    vars: Vars,
    gens: Vec<Poly>,
}

impl IdealGens {
    /// Drops zero generators and exact duplicates; at least one nonzero
    /// generator must remain.
    pub fn new(gens: Vec<Poly>) -> Result<Self> {
        let vars = gens
            .first()
            .map(|g| g.vars().clone())
            .ok_or_else(|| Error::invalid("an ideal needs at least one generator"))?;
        let mut kept: Vec<Poly> = Vec::new();
        for g in gens {
            vars.ensure_same(g.vars())?;
            if !g.is_zero() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        if kept.is_empty() {
            return Err(Error::invalid("all generators are zero"));
        }
        Ok(IdealGens { vars, gens: kept })
    }

    pub fn unit(vars: &Vars) -> Self {
        IdealGens {
            vars: vars.clone(),
            gens: vec![Poly::one(vars)],
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// True when some generator is a unit of the local ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.gens.iter().any(|g| !g.constant_term().eq(&num_traits::Zero::zero()))
    }

    /// Jet-order membership test: `p ∈ I + m^order`.
    pub fn contains_at_order(&self, p: &Poly, order: usize) -> bool {
        let jet = JetSpace::new(&self.vars, order);
        jet.ideal_span(&self.gens).contains(&jet.space().to_vec(p))
    }

    /// Generators paired with their weighted degree; fails unless every
    /// generator is homogeneous for `w`.
    pub(crate) fn graded(&self, w: &[u64]) -> Result<Vec<(Poly, u64)>> {
        self.gens
            .iter()
            .map(|g| match degree_range(g, w) {
                Some((lo, hi)) if lo == hi => Ok((g.clone(), lo)),
                _ => Err(Error::invalid(format!(
                    "generator `{g}` is not homogeneous for the weight certificate"
                ))),
            })
            .collect()
    }
}

impl fmt::Display for IdealGens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `J(f) = (∂f/∂x_1, …, ∂f/∂x_n)`.
pub fn jacobian_ideal(f: &Poly) -> Result<IdealGens> {
    if f.is_constant() {
        return Err(Error::invalid("the Jacobian ideal of a constant is not defined"));
    }
    IdealGens::new((0..f.nvars()).map(|i| f.derivative(i)).collect())
}

/// Dimension and monomial basis of a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetQuotient {
    pub dim: usize,
    pub basis: Vec<Monomial>,
}

/// `dim O / (I + m^M)` with a monomial basis of the complement.
pub fn quotient_dim_jet(ideal: &IdealGens, order: usize) -> JetQuotient {
    let jet = JetSpace::new(ideal.vars(), order);
    let span = jet.ideal_span(ideal.gens());
    let mut basis = jet.space().complement(&span);
    basis.sort_by(Monomial::listing_cmp);
    JetQuotient {
        dim: basis.len(),
        basis,
    }
}

/// `Some(quotient)` when `O/I` has finite dimension detectable below the cap:
/// jet orders `M` and `M + 2` give the same answer.
pub(crate) fn stable_quotient(ideal: &IdealGens, caps: &Caps) -> Result<Option<JetQuotient>> {
    let m = caps.jet_order;
    let a = quotient_dim_jet(ideal, m);
    let b = quotient_dim_jet(ideal, m + 2);
    Ok(if a == b { Some(a) } else { None })
}

/// Integer weights of a certificate, checked against the ring.
pub(crate) fn cert_weights(vars: &Vars, cert: &WeightSystem) -> Result<Vec<u64>> {
    if cert.weights().len() != vars.len() {
        return Err(Error::invalid(format!(
            "weight certificate has {} weights for {} variables",
            cert.weights().len(),
            vars.len()
        )));
    }
    Ok(cert.integer_weights())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn ideal(gens: &[&str]) -> IdealGens {
        IdealGens::new(gens.iter().map(|s| Poly::parse(s, &xy()).unwrap()).collect()).unwrap()
    }

    /// Counts monomials of degree < M outside a monomial ideal, by brute force.
    fn brute_monomial_quotient(gens: &[Monomial], order: u32) -> usize {
        let mut n = 0;
        for a in 0..order {
            for b in 0..order - a {
                let m = Monomial(vec![a, b]);
                if !gens.iter().any(|g| g.divides(&m)) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn jacobian_examples() {
        let f = Poly::parse("x^3*(x^3+y^3)", &xy()).unwrap();
        let j = jacobian_ideal(&f).unwrap();
        assert_eq!(j, ideal(&["6*x^5+3*x^2*y^3", "3*x^3*y^2"]));
        assert_eq!(
            jacobian_ideal(&Poly::parse("x^2+y^2", &xy()).unwrap()).unwrap(),
            ideal(&["2*x", "2*y"])
        );
        assert_eq!(
            jacobian_ideal(&Poly::parse("x^2*y^2", &xy()).unwrap()).unwrap(),
            ideal(&["2*x*y^2", "2*x^2*y"])
        );
        assert!(jacobian_ideal(&Poly::parse("5", &xy()).unwrap()).is_err());
    }

    #[test]
    fn quotient_dims_match_brute_force() {
        assert_eq!(quotient_dim_jet(&ideal(&["2*x", "2*y"]), 5).dim, 1);

        let q = quotient_dim_jet(&ideal(&["3*x^2", "4*y^3"]), 8);
        let oracle = brute_monomial_quotient(&[Monomial(vec![2, 0]), Monomial(vec![0, 3])], 8);
        assert_eq!(oracle, 6);
        assert_eq!(q.dim, oracle);

        let q = quotient_dim_jet(&ideal(&["x^2"]), 4);
        let oracle = brute_monomial_quotient(&[Monomial(vec![2, 0])], 4);
        assert_eq!(oracle, 7);
        assert_eq!(q.dim, 7);
        assert_ne!(quotient_dim_jet(&ideal(&["x^2"]), 6).dim, 7);
    }

    #[test]
    fn ideal_normalization() {
        let i = ideal(&["x", "0", "x", "y"]);
        assert_eq!(i.gens().len(), 2);
        assert!(IdealGens::new(vec![Poly::zero(&xy())]).is_err());
        assert!(ideal(&["1 + x"]).is_unit_ideal());
    }

    #[test]
    fn membership_at_jet_order() {
        let i = ideal(&["x - x^2"]);
        // x - x^2 = x(1 - x) and 1 - x is a unit
        assert!(i.contains_at_order(&Poly::parse("x", &xy()).unwrap(), 6));
        assert!(!i.contains_at_order(&Poly::parse("y", &xy()).unwrap(), 6));
    }
}
