//! Plane curves `f = u_1^{p_1}⋯u_k^{p_k}·ψ`: the annihilator form `α` with
//! `Ker df^1 = O·α`, its dual vector field, and the invariants built on them.

mod invariants;

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{DiffForm, VectorField};
use crate::local_algebra::{jacobian_ideal, quotient_dim_jet, Caps, IdealGens};
use crate::poly::{Poly, Vars};
use crate::rational::Q;

pub use invariants::{
    a_action, a_coefficient, check_p_witness, gcd_remark_check, invariants, saturated_jacobian,
    twisted_matches_form, verify_a_action, AActionEntry, Assumptions, InvariantReport, PWitness,
};

/// Jet order used by the structural checks on factored input.
const CHECK_ORDER: usize = 12;

/// A factored plane-curve germ `Π u_i^{p_i} · ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredCurve {
    vars: Vars,
    factors: Vec<(Poly, u32)>,
    residual: Poly,
}

impl FactoredCurve {
    /// Validates the factored form. `residual` is either a nonzero constant
    /// (a unit, the case `ψ ≡ 1` up to scaling) or a reduced germ vanishing at
    /// the origin and not divisible by any `u_i`.
    pub fn new(factors: Vec<(Poly, u32)>, residual: Poly) -> Result<Self> {
        let vars = residual.vars().clone();
        if vars.len() != 2 {
            return Err(Error::invalid(format!(
                "plane curves need exactly two variables, got {}",
                vars.len()
            )));
        }
        if residual.is_zero() {
            return Err(Error::invalid("the residual factor must be nonzero"));
        }
        for (i, (u, p)) in factors.iter().enumerate() {
            vars.ensure_same(u.vars())?;
            if *p < 2 {
                return Err(Error::invalid(format!("multiplicity must be ≥ 2 (factor `{u}` has {p})")));
            }
            if u.is_constant() {
                return Err(Error::invalid(format!("factor `{u}` is constant")));
            }
            if !u.constant_term().is_zero() {
                return Err(Error::invalid(format!("factor `{u}` does not vanish at the origin")));
            }
            let ui = IdealGens::new(vec![u.clone()])?;
            for (v, _) in &factors[..i] {
                let vi = IdealGens::new(vec![v.clone()])?;
                if ui.contains_at_order(v, CHECK_ORDER) && vi.contains_at_order(u, CHECK_ORDER) {
                    return Err(Error::invalid(format!(
                        "factors `{v}` and `{u}` define the same branch; merge their multiplicities"
                    )));
                }
            }
        }
        if residual.constant_term().is_zero() {
            for (u, _) in &factors {
                if IdealGens::new(vec![u.clone()])?.contains_at_order(&residual, CHECK_ORDER) {
                    return Err(Error::invalid(format!("factor `{u}` divides the residual `{residual}`")));
                }
            }
            if !is_reduced(&residual)? {
                return Err(Error::invalid(format!("residual `{residual}` is not reduced")));
            }
        }
        Ok(FactoredCurve {
            vars,
            factors,
            residual,
        })
    }

    /// Curve without residual factor (`ψ ≡ 1`).
    pub fn pure(factors: Vec<(Poly, u32)>) -> Result<Self> {
        let vars = factors
            .first()
            .map(|(u, _)| u.vars().clone())
            .ok_or_else(|| Error::invalid("at least one factor is required"))?;
        Self::new(factors, Poly::one(&vars))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn residual(&self) -> &Poly {
        &self.residual
    }

    /// True when `ψ` is a unit.
    pub fn residual_is_unit(&self) -> bool {
        !self.residual.constant_term().is_zero()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, p)| *p).collect()
    }

    /// `Π u_i^{p_i} · ψ`.
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(self.residual.clone(), |acc, (u, p)| &acc * &u.pow(*p))
    }

    /// `Π u_i^{p_i − 1}`, the factor with `df = h·α`.
    pub fn jacobian_factor(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::one(&self.vars), |acc, (u, p)| &acc * &u.pow(p - 1))
    }

    /// Checks that `expand()` equals `f` exactly.
    pub fn ensure_expands_to(&self, f: &Poly) -> Result<()> {
        let e = self.expand();
        if &e != f {
            return Err(Error::invalid(format!(
                "factored form expands to `{e}`, which differs from `{f}`"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FactoredCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(u, p)| format!("({u})^{p}"))
            .collect();
        if !(self.residual_is_unit() && self.residual.is_constant() && self.residual == Poly::one(&self.vars)) {
            parts.push(format!("({})", self.residual));
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// A germ vanishing at 0 is reduced iff its Tjurina algebra
/// `O/(ψ, ∂ψ)` is finite-dimensional; detected by jet stabilization.
fn is_reduced(psi: &Poly) -> Result<bool> {
    if psi.order() == Some(1) {
        return Ok(true);
    }
    let mut gens = jacobian_ideal(psi)?.gens().to_vec();
    gens.push(psi.clone());
    let ideal = IdealGens::new(gens)?;
    let a = quotient_dim_jet(&ideal, CHECK_ORDER);
    let b = quotient_dim_jet(&ideal, CHECK_ORDER + 2);
    Ok(a.dim == b.dim)
}

/// `α = Σ_l p_l·u_1⋯û_l⋯u_k·ψ·du_l + u_1⋯u_k·dψ`.
pub fn annihilator_form(c: &FactoredCurve) -> DiffForm {
    let vars = &c.vars;
    let prod_all = c
        .factors
        .iter()
        .fold(Poly::one(vars), |acc, (u, _)| &acc * u);
    let mut alpha = DiffForm::differential(&c.residual).mul_poly(&prod_all);
    for (l, (ul, pl)) in c.factors.iter().enumerate() {
        let others = c
            .factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != l)
            .fold(c.residual.scale(&Q::from_integer((*pl).into())), |acc, (_, (u, _))| &acc * u);
        alpha = alpha
            .add(&DiffForm::differential(ul).mul_poly(&others))
            .expect("same ring");
    }
    alpha
}

/// The field `V = B∂_x − A∂_y` dual to `α = A dx + B dy`; `V·f = 0`.
pub fn annihilator_field(c: &FactoredCurve) -> Result<VectorField> {
    if c.factors.is_empty() {
        return Err(Error::invalid(
            "no multiple branch: the annihilating field is only defined for k ≥ 1",
        ));
    }
    let alpha = annihilator_form(c);
    let a = alpha.coeff(&[0]);
    let b = alpha.coeff(&[1]);
    let v = VectorField::new(vec![b, -a])?;
    if !v.apply(&c.expand()).is_zero() {
        return Err(Error::Invariant("annihilating field does not kill f".into()));
    }
    Ok(v)
}

/// Order at which (HI) is decided when the caller asks for less.
const HI_ORDER: usize = 16;

/// Hypothesis (HI) for a plane curve: the singular locus is the union of the
/// multiple branches and `α` vanishes only at the origin (checked at jet
/// order by finiteness of `O/(A, B)`).
pub fn check_hi(c: &FactoredCurve, caps: &Caps) -> Result<bool> {
    if c.factors.is_empty() {
        let f = c.expand();
        if f.order() == Some(1) {
            return Err(Error::invalid("no singular locus: f is smooth at the origin"));
        }
        return Err(Error::invalid(
            "isolated singularity without multiple branches: use the isolated-germ Milnor number",
        ));
    }
    let alpha = annihilator_form(c);
    let coeffs = IdealGens::new(vec![alpha.coeff(&[0]), alpha.coeff(&[1])])?;
    // a property of f alone, so the requested precision only ever raises the order
    let m = caps.jet_order.max(HI_ORDER);
    if quotient_dim_jet(&coeffs, m).dim != quotient_dim_jet(&coeffs, m + 2).dim {
        return Err(Error::invalid(
            "(HI) fails: the annihilator form has a zero locus beyond the origin",
        ));
    }
    Ok(true)
}

/// Milnor number of the one-variable singularity cut out on a line
/// transverse to branch `i` at a generic point: `ord_t f(P + t·∇u_i(P)) − 1`.
///
/// The point `P` is found by solving `u_i = 0` when `u_i` is linear in one
/// variable; otherwise the order of `f` along the branch comes from exact
/// division by powers of `u_i`.
pub fn transversal_milnor(c: &FactoredCurve, i: usize) -> Result<u32> {
    let (u, _) = c
        .factors
        .get(i)
        .ok_or_else(|| Error::invalid(format!("branch index {i} out of range")))?;
    let f = c.expand();
    let order = match branch_point(c, u) {
        Some(point) => {
            let t = Vars::new(&["t"])?;
            let tp = Poly::var_at(&t, 0);
            let grad: Vec<Q> = (0..2).map(|j| u.derivative(j).eval(&point)).collect();
            let images: Vec<Poly> = (0..2)
                .map(|j| &Poly::constant(&t, point[j].clone()) + &tp.scale(&grad[j]))
                .collect();
            f.substitute(&images)?.order().unwrap_or(0)
        }
        None => {
            let mut e = 0u32;
            let mut rest = f;
            while let Some(q) = rest.div_exact(u) {
                rest = q;
                e += 1;
            }
            e as u64
        }
    };
    if order < 2 {
        return Err(Error::invalid(format!("slice transverse to branch `{u}` is degenerate")));
    }
    Ok(order as u32 - 1)
}

/// A rational point of `u = 0` away from the origin where `∇u ≠ 0` and all
/// other factors of `f` are nonzero.
fn branch_point(c: &FactoredCurve, u: &Poly) -> Option<Vec<Q>> {
    for v in 0..2 {
        let w = 1 - v;
        let du = u.derivative(v);
        if !du.is_constant() || du.is_zero() {
            continue;
        }
        let a = du.constant_term();
        for s in 1..20i64 {
            for sign in [1i64, -1] {
                let cval = Q::from_integer((s * sign).into());
                let mut point = vec![Q::zero(), Q::zero()];
                point[w] = cval;
                // u = a·x_v + r(x_w)
                let r = u.eval(&point);
                point[v] = -r / &a;
                let grad_ok = (0..2).any(|j| !u.derivative(j).eval(&point).is_zero());
                let others_ok = c
                    .factors
                    .iter()
                    .filter(|(g, _)| g != u)
                    .all(|(g, _)| !g.eval(&point).is_zero())
                    && !c.residual.eval(&point).is_zero();
                if grad_ok && others_ok {
                    return Some(point);
                }
            }
        }
    }
    None
}

/// `gcd(p_1, …, p_k)`.
pub fn multiplicity_gcd(c: &FactoredCurve) -> u32 {
    c.factors.iter().fold(0u32, |g, (_, p)| g.gcd(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &xy()).unwrap()
    }

    fn curve(factors: &[(&str, u32)], residual: &str) -> FactoredCurve {
        FactoredCurve::new(factors.iter().map(|(u, m)| (p(u), *m)).collect(), p(residual)).unwrap()
    }

    #[test]
    fn golden_annihilator() {
        let c = curve(&[("x", 3)], "x^3+y^3");
        assert_eq!(c.expand(), p("x^3*(x^3+y^3)"));
        let alpha = annihilator_form(&c);
        assert_eq!(alpha.coeff(&[0]), p("6*x^3+3*y^3"));
        assert_eq!(alpha.coeff(&[1]), p("3*x*y^2"));
        let df = DiffForm::differential(&c.expand());
        assert_eq!(df, alpha.mul_poly(&p("x^2")));
        assert!(df.wedge(&alpha).unwrap().is_zero());
        let v = annihilator_field(&c).unwrap();
        // 3 × (XY² ∂_X − (2X³+Y³) ∂_Y)
        assert_eq!(v.coeffs(), &[p("3*x*y^2"), p("-6*x^3-3*y^3")]);
        assert_eq!(v.divergence(), p("-6*y^2"));
    }

    #[test]
    fn normal_crossing_and_lines() {
        let c = curve(&[("x", 2), ("y", 2)], "1");
        let alpha = annihilator_form(&c);
        assert_eq!((alpha.coeff(&[0]), alpha.coeff(&[1])), (p("2*y"), p("2*x")));
        assert_eq!(c.jacobian_factor(), p("x*y"));
        assert_eq!(annihilator_field(&c).unwrap().coeffs(), &[p("2*x"), p("-2*y")]);

        let c = curve(&[("x+y", 2), ("x-y", 3)], "1");
        let alpha = annihilator_form(&c);
        let expected = DiffForm::differential(&p("x+y"))
            .mul_poly(&p("2*(x-y)"))
            .add(&DiffForm::differential(&p("x-y")).mul_poly(&p("3*(x+y)")))
            .unwrap();
        assert_eq!(alpha, expected);
        assert_eq!(DiffForm::differential(&c.expand()), alpha.mul_poly(&p("(x+y)*(x-y)^2")));
    }

    #[test]
    fn rejected_inputs() {
        let v = xy();
        let x = p("x");
        assert!(FactoredCurve::new(vec![(x.clone(), 1)], Poly::one(&v)).is_err());
        assert!(FactoredCurve::new(vec![(x.clone(), 2), (p("2*x"), 3)], Poly::one(&v)).is_err());
        assert!(FactoredCurve::new(vec![(x.clone(), 2)], p("x*y")).is_err());
        assert!(FactoredCurve::new(vec![(x.clone(), 2)], p("y^2")).is_err());
        assert!(FactoredCurve::new(vec![(p("x+1"), 2)], Poly::one(&v)).is_err());
        let smooth = FactoredCurve::new(vec![], x).unwrap();
        let err = check_hi(&smooth, &Caps::default()).unwrap_err();
        assert!(err.to_string().contains("no singular locus"), "{err}");
        let iso = FactoredCurve::new(vec![], p("x^2+y^2")).unwrap();
        assert!(check_hi(&iso, &Caps::default()).is_err());
        assert!(annihilator_field(&iso).is_err());
    }

    #[test]
    fn hi_holds_on_examples() {
        assert!(check_hi(&curve(&[("x", 3)], "x^3+y^3"), &Caps::default()).unwrap());
        assert!(check_hi(&curve(&[("x", 2), ("y", 2)], "1"), &Caps::default()).unwrap());
    }

    #[test]
    fn transversal_milnor_numbers() {
        assert_eq!(transversal_milnor(&curve(&[("x", 3)], "x^3+y^3"), 0).unwrap(), 2);
        let nc = curve(&[("x", 2), ("y", 2)], "1");
        assert_eq!(transversal_milnor(&nc, 0).unwrap(), 1);
        assert_eq!(transversal_milnor(&nc, 1).unwrap(), 1);
        let cusp = curve(&[("x^2+y^3", 4), ("x+y^2", 3)], "1");
        assert_eq!(transversal_milnor(&cusp, 0).unwrap(), 3);
        assert_eq!(transversal_milnor(&cusp, 1).unwrap(), 2);
        assert!(transversal_milnor(&nc, 5).is_err());
    }

    #[test]
    fn gcd_of_multiplicities() {
        assert_eq!(multiplicity_gcd(&curve(&[("x", 4), ("y", 2)], "1")), 2);
        assert_eq!(multiplicity_gcd(&curve(&[("x", 2), ("y", 3)], "1")), 1);
        let _ = q(0);
    }
}
