//! Thom–Sebastiani suspensions `F = f(z) + g(x, y)` of an isolated germ `f`
//! with a plane curve `g`: invariants multiply by `μ₀(f)` and the
//! (a,b)-module of `F` is the tensor product of the two factors.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ab_module::{tensor, ABModule, ABModuleRecord};
use crate::curve::{AActionEntry, FactoredCurve, InvariantReport};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::local_algebra::{cert_weights, degree_range, milnor_number, mu, Caps, MonomialSpace};
use crate::poly::{Monomial, Poly, Vars, WeightSystem};
use crate::rational::{fmt_q, serde_q, Q};

/// An isolated critical point at the origin with its Milnor algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedGerm {
    f: Poly,
    milnor: usize,
    basis: Vec<Monomial>,
    weights: Option<WeightSystem>,
    a_action: Option<Vec<AActionEntry>>,
}

impl IsolatedGerm {
    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn vars(&self) -> &Vars {
        self.f.vars()
    }

    /// `μ₀(f) = dim O/J(f)`.
    pub fn milnor(&self) -> usize {
        self.milnor
    }

    /// Standard monomials of `O/J(f)` in listing order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.basis.iter().map(|m| m.display(self.vars())).collect()
    }

    pub fn weights(&self) -> Option<&WeightSystem> {
        self.weights.as_ref()
    }

    /// `a[m] = c(m)·b[m]` on the basis; present with weights in at most two
    /// variables, where each coefficient is verified in `Ω^n/df∧dΩ^{n−2}`.
    pub fn a_action(&self) -> Option<&[AActionEntry]> {
        self.a_action.as_deref()
    }
}

/// `μ₀(f)` with a standard monomial basis. Smooth germs and germs not
/// vanishing at 0 are rejected; non-isolated critical points surface as an
/// inconclusive "infinite colength".
pub fn milnor_isolated(f: &Poly, weights: Option<&[Q]>, caps: &Caps) -> Result<IsolatedGerm> {
    caps.validate()?;
    if f.is_zero() || f.is_constant() {
        return Err(Error::invalid("a germ needs a nonconstant polynomial"));
    }
    if !num_traits::Zero::is_zero(&f.constant_term()) {
        return Err(Error::invalid("the germ must vanish at the origin"));
    }
    if f.order() == Some(1) {
        return Err(Error::invalid(format!(
            "smooth germ `{f}`: no critical point at the origin"
        )));
    }
    let q = milnor_number(f, caps)?;
    let cert = weights.map(|w| WeightSystem::certify(f, w.to_vec())).transpose()?;
    let a_action = match &cert {
        Some(w) if f.nvars() <= 2 => Some(
            q.basis
                .iter()
                .map(|m| {
                    let c = (w.degree_of(m) + w.weight_sum()) / w.total_degree();
                    if !verify_isolated_a_action(f, w, m, &c)? {
                        return Err(Error::Invariant(format!(
                            "a-action coefficient {} failed verification on `{}`",
                            fmt_q(&c),
                            m.display(f.vars())
                        )));
                    }
                    Ok(AActionEntry {
                        element: m.display(f.vars()),
                        coefficient: c,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => None,
    };
    Ok(IsolatedGerm {
        f: f.clone(),
        milnor: q.dim,
        basis: q.basis,
        weights: cert,
        a_action,
    })
}

/// `a[m] = c·b[m]` in `Ω^n/df∧dΩ^{n−2}` for `n ≤ 2` variables: the
/// coefficient of `f·m·dx − c·df∧ξ` (with `dξ = m·dx`) must vanish (one
/// variable) or lie in the span of `f_x η_y − f_y η_x` (two variables).
pub fn verify_isolated_a_action(f: &Poly, w: &WeightSystem, m: &Monomial, c: &Q) -> Result<bool> {
    let vars = f.vars();
    let mut exps = m.exps().to_vec();
    exps[0] += 1;
    let xi = Poly::term(vars, Monomial(exps.clone()), Q::one() / Q::from_integer(exps[0].into()));
    let omega = &f.mul_monomial(m, &Q::one())? - &(&f.derivative(0) * &xi).scale(c);
    if omega.is_zero() {
        return Ok(true);
    }
    match f.nvars() {
        1 => Ok(false),
        2 => {
            let iw = cert_weights(vars, w)?;
            let (e, _) = degree_range(&omega, &iw).expect("nonzero");
            let fdeg = degree_range(f, &iw).expect("nonzero").0 as i64;
            let eta_deg = e as i64 - fdeg + iw.iter().sum::<u64>() as i64;
            if eta_deg < 0 {
                return Ok(false);
            }
            let target = MonomialSpace::new(vars, &iw, e, e);
            let (fx, fy) = (f.derivative(0), f.derivative(1));
            let mut span = Echelon::new();
            for h in MonomialSpace::new(vars, &iw, eta_deg as u64, eta_deg as u64).monomials() {
                let eta = Poly::monomial(vars, h.clone());
                span.insert(target.to_vec(&(&(&fx * &eta.derivative(1)) - &(&fy * &eta.derivative(0)))));
            }
            Ok(span.contains(&target.to_vec(&omega)))
        }
        _ => Err(Error::invalid("a-action verification is implemented for one or two variables")),
    }
}

/// Coefficient of the a-action on a basis pair of the suspension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAction {
    pub left: String,
    pub right: String,
    #[serde(with = "serde_q")]
    pub coefficient: Q,
}

/// Invariants of `F = f + g` transported from its factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspensionReport {
    pub vars: Vec<String>,
    pub milnor_f: usize,
    pub mu: usize,
    pub nu: usize,
    pub rank: usize,
    /// Basis pairs `(m_f, m_g)`, factor-major: the `f`-monomial varies slowest.
    pub basis: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_action: Option<Vec<PairAction>>,
    /// Truncated model of the (a,b)-module: the tensor of the diagonal
    /// simple-pole models of both factors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ab_model: Option<ABModuleRecord>,
    /// How each number was obtained.
    pub provenance: Vec<String>,
    /// Stated assumptions, not computed facts.
    pub assumptions: Vec<String>,
}

impl SuspensionReport {
    /// `μ_F = μ₀·μ(g)`, `ν_F = μ₀·ν(g)`, `rank_F = μ₀·rank(g)` given the
    /// factor data.
    pub fn satisfies_products(&self, g: &InvariantReport) -> bool {
        self.mu == self.milnor_f * g.mu
            && self.nu == self.milnor_f * g.nu
            && self.rank == self.milnor_f * g.rank
            && self.basis.len() == self.rank
    }

    pub fn model(&self) -> Result<Option<ABModule>> {
        self.ab_model.as_ref().map(ABModule::from_record).transpose()
    }
}

/// Transports the invariants of `g` through the suspension by `f`. Refuses
/// when `g` does not carry condition (P).
pub fn suspend(f: &IsolatedGerm, g: &InvariantReport, trunc_order: usize) -> Result<SuspensionReport> {
    if !g.assumptions.p_holds {
        return Err(Error::invalid(
            "the curve report does not carry condition (P); the suspension isomorphism needs it",
        ));
    }
    let gvars = Vars::new(&g.vars)?;
    let vars = f.vars().join(&gvars).map_err(|_| {
        Error::invalid("the isolated germ and the curve must use disjoint variables")
    })?;
    let mu0 = f.milnor;
    let left = f.basis_strings();
    let basis: Vec<(String, String)> = left
        .iter()
        .flat_map(|l| g.basis.iter().map(move |r| (l.clone(), r.clone())))
        .collect();
    let mut provenance = vec![
        format!("milnor_f = dim O/J(f) = {mu0}"),
        format!("mu = milnor_f · mu(g) = {mu0} · {}", g.mu),
        format!("nu = milnor_f · nu(g) = {mu0} · {}", g.nu),
        format!("rank = milnor_f · rank(g) = {mu0} · {}", g.rank),
    ];
    let (a_action, ab_model) = match (f.a_action(), &g.a_action) {
        (Some(fa), Some(ga)) => {
            let fc: Vec<Q> = fa.iter().map(|e| e.coefficient.clone()).collect();
            let gc: Vec<Q> = ga.iter().map(|e| e.coefficient.clone()).collect();
            let ef = ABModule::diagonal(&fc, trunc_order, "E'_f")?;
            let eg = ABModule::diagonal(&gc, trunc_order, "E'_g")?;
            let model = tensor(&ef, &eg)?;
            let pairs = fa
                .iter()
                .flat_map(|l| {
                    ga.iter().map(move |r| PairAction {
                        left: l.element.clone(),
                        right: r.element.clone(),
                        coefficient: &l.coefficient + &r.coefficient,
                    })
                })
                .collect();
            provenance.push("a-action: coefficients add on basis pairs; model = tensor of diagonal factors".into());
            (Some(pairs), Some(model.to_record()))
        }
        _ => (None, None),
    };
    Ok(SuspensionReport {
        vars: vars.names().to_vec(),
        milnor_f: mu0,
        mu: mu0 * g.mu,
        nu: mu0 * g.nu,
        rank: mu0 * g.rank,
        basis,
        a_action,
        ab_model,
        provenance,
        assumptions: vec![
            "E'_F has no b-torsion, so the suspension isomorphism holds on E'_F itself".into(),
            g.assumptions.justification.clone(),
        ],
    })
}

/// Direct computation of `μ(F)` in the joined ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectCheck {
    pub mu_direct: usize,
    pub mu_transported: usize,
    pub agrees: bool,
    /// True for the graded computation, false for jet stabilization.
    pub exact: bool,
    pub orders: Vec<usize>,
}

/// `F = f + g` in the joined ring.
pub fn joined_sum(f: &IsolatedGerm, g: &FactoredCurve) -> Result<Poly> {
    let vars = f.vars().join(g.vars())?;
    Ok(&f.poly().embed(&vars)? + &g.expand().embed(&vars)?)
}

/// Computes `dim Ĵ(F)/J(F)` directly and compares with `expected`. Uses the
/// graded algorithm when both factors carry weights (the joined weights are
/// normalized so both factors have degree 1), otherwise jet saturation.
pub fn verify_suspension_direct(
    f: &IsolatedGerm,
    g: &FactoredCurve,
    g_weights: Option<&[Q]>,
    expected: usize,
    caps: &Caps,
) -> Result<DirectCheck> {
    let big = joined_sum(f, g)?;
    if big.nvars() > 3 {
        return Err(Error::invalid("direct verification supports at most three variables"));
    }
    let cert = match (f.weights(), g_weights) {
        (Some(fw), Some(gw)) => {
            let gcert = WeightSystem::certify(&g.expand(), gw.to_vec())?;
            let mut joined = fw.normalized();
            joined.extend(gcert.normalized());
            Some(WeightSystem::certify(&big, joined)?)
        }
        _ => None,
    };
    let res = mu(&big, cert.as_ref(), caps)?;
    Ok(DirectCheck {
        mu_direct: res.mu,
        mu_transported: expected,
        agrees: res.mu == expected,
        exact: res.saturation.exact,
        orders: res.saturation.orders,
    })
}
