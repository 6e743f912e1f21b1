//! `μ`, `ν`, the rank and quotient basis of `E'/bE'`, the a-action for
//! quasi-homogeneous curves, and the jet-order witnesses behind them.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{DiffForm, VectorField};
use crate::linalg::{intersect, Echelon};
use crate::local_algebra::{
    cert_weights, degree_range, mu, twisted_quotient_dim, Caps, IdealGens, JetSpace, MonomialSpace, MuResult,
};
use crate::poly::{Monomial, Poly, WeightSystem};
use crate::rational::{fmt_q, serde_q, Q};

use super::{annihilator_field, annihilator_form, check_hi, multiplicity_gcd, FactoredCurve};

/// Jet order of the (P) witness run inside [`invariants`].
const WITNESS_ORDER: usize = 12;

/// One basis element with `a[e] = coefficient · b[e]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AActionEntry {
    pub element: String,
    #[serde(with = "serde_q")]
    pub coefficient: Q,
}

/// Assumptions a report rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumptions {
    /// Condition (P), which forces `γ = δ = 0`.
    pub p_holds: bool,
    pub justification: String,
    /// Jet orders of every heuristic (jet-stabilized) step; empty when all
    /// steps were graded.
    pub heuristic_jets: Vec<usize>,
}

/// Invariants of a plane curve at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub vars: Vec<String>,
    pub mu: usize,
    pub nu: usize,
    pub gamma: usize,
    pub delta: usize,
    pub rank: usize,
    pub betti_n: usize,
    /// Generators of the saturated Jacobian ideal `Ĵ(f)`.
    pub saturated_jacobian: Vec<String>,
    /// Basis of `E'/bE'`: the ν-part followed by the `Ĵ/J` part.
    pub basis: Vec<String>,
    pub nu_basis: Vec<String>,
    pub mu_basis: Vec<String>,
    /// Weights of the certificate, when one was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_action: Option<Vec<AActionEntry>>,
    pub assumptions: Assumptions,
}

impl InvariantReport {
    /// `rank = μ + ν − γ` and `|basis| = μ + ν − γ + δ`.
    pub fn is_consistent(&self) -> bool {
        self.rank + self.gamma == self.mu + self.nu
            && self.betti_n == self.rank
            && self.basis.len() + self.gamma == self.mu + self.nu + self.delta
            && self.basis.len() == self.nu_basis.len() + self.mu_basis.len()
    }
}

fn certify(f: &Poly, weights: Option<&[Q]>) -> Result<Option<WeightSystem>> {
    weights.map(|w| WeightSystem::certify(f, w.to_vec())).transpose()
}

/// Full pipeline: (HI), `μ`, `ν`, rank, basis and, with weights, the a-action.
pub fn invariants(c: &FactoredCurve, weights: Option<&[Q]>, caps: &Caps) -> Result<InvariantReport> {
    caps.validate()?;
    check_hi(c, caps)?;
    let f = c.expand();
    let vars = c.vars().clone();
    let cert = certify(&f, weights)?;
    let mut heuristic = Vec::new();

    let mu_res: MuResult = mu(&f, cert.as_ref(), caps)?;
    if !mu_res.saturation.exact {
        heuristic.extend(mu_res.saturation.orders.iter().copied());
    }
    let v = annihilator_field(c)?;
    let window = c.multiplicities().into_iter().max().unwrap_or(2) as usize + 2;
    let tcaps = match caps.window {
        Some(_) => caps.clone(),
        None => caps.clone().with_window(window),
    };
    let tq = twisted_quotient_dim(&mu_res.saturation.gens, &v, cert.as_ref(), &tcaps)?;
    if !tq.exact {
        heuristic.extend(tq.orders.iter().copied());
    }
    heuristic.sort_unstable();
    heuristic.dedup();

    let mut mu_polys = mu_res.saturation.quotient_basis.clone();
    if mu_polys.iter().all(|p| p.num_terms() == 1) {
        mu_polys.sort_by(|a, b| {
            let (ma, mb) = (a.terms().next().unwrap().0, b.terms().next().unwrap().0);
            ma.listing_cmp(mb)
        });
    }
    let nu_polys: Vec<Poly> = tq.basis.iter().map(|m| Poly::monomial(&vars, m.clone())).collect();
    let basis_polys: Vec<Poly> = nu_polys.iter().chain(&mu_polys).cloned().collect();

    let (a_action, weight_strings, justification) = match &cert {
        Some(w) => {
            let entries = a_action(c, w, &basis_polys, caps)?;
            let witness = p_witness_with(c, Some(w), &mu_res.saturation.gens, caps.jet_order.min(WITNESS_ORDER));
            let note = match witness {
                Ok(pw) if pw.holds => format!(
                    "plane curve: (HI) and (P) hold by theorem; graded witness confirmed {} intersection vectors",
                    pw.checked
                ),
                Ok(_) => {
                    return Err(Error::Invariant(
                        "graded (P) witness found a violation on a plane curve".into(),
                    ))
                }
                Err(e) if e.is_inconclusive() => {
                    "plane curve: (HI) and (P) hold by theorem; graded witness inconclusive at this cap".to_string()
                }
                Err(e) => return Err(e),
            };
            (
                Some(entries),
                Some(w.weights().iter().map(fmt_q).collect()),
                note,
            )
        }
        None => (
            None,
            None,
            "plane curve: (HI) and (P) hold by theorem".to_string(),
        ),
    };

    let show = |p: &Poly| p.to_string();
    let mu_n = mu_res.mu;
    let nu_n = tq.dim;
    Ok(InvariantReport {
        vars: vars.names().to_vec(),
        mu: mu_n,
        nu: nu_n,
        gamma: 0,
        delta: 0,
        rank: mu_n + nu_n,
        betti_n: mu_n + nu_n,
        saturated_jacobian: mu_res.saturation.gens.gens().iter().map(show).collect(),
        basis: basis_polys.iter().map(show).collect(),
        nu_basis: nu_polys.iter().map(show).collect(),
        mu_basis: mu_polys.iter().map(show).collect(),
        weights: weight_strings,
        a_action,
        assumptions: Assumptions {
            p_holds: true,
            justification,
            heuristic_jets: heuristic,
        },
    })
}

/// Weighted degree of a homogeneous element for the certificate.
fn homogeneous_degree(p: &Poly, w: &WeightSystem) -> Result<Q> {
    let mut degs = p.terms().map(|(m, _)| w.degree_of(m));
    let d = degs
        .next()
        .ok_or_else(|| Error::invalid("the zero element has no a-action coefficient"))?;
    if degs.any(|e| e != d) {
        return Err(Error::invalid(format!("`{p}` is not homogeneous for the weights")));
    }
    Ok(d)
}

/// `c(e) = (deg_w(e) + Σ w_i) / d`.
pub fn a_coefficient(element: &Poly, w: &WeightSystem) -> Result<Q> {
    Ok((homogeneous_degree(element, w)? + w.weight_sum()) / w.total_degree())
}

/// Coefficients of the a-action on `basis`, each verified by
/// [`verify_a_action`] at jet order `caps.jet_order`.
pub fn a_action(c: &FactoredCurve, w: &WeightSystem, basis: &[Poly], caps: &Caps) -> Result<Vec<AActionEntry>> {
    basis
        .iter()
        .map(|e| {
            let coefficient = a_coefficient(e, w)?;
            if !verify_a_action(c, w, e, &coefficient, caps.jet_order)? {
                return Err(Error::Invariant(format!(
                    "a-action coefficient {} failed verification on `{e}`",
                    fmt_q(&coefficient)
                )));
            }
            Ok(AActionEntry {
                element: e.to_string(),
                coefficient,
            })
        })
        .collect()
}

/// `ξ` with `dξ = e·dx∧dy`: `ξ = X(e) dy`, `X(x^p y^q) = x^{p+1}y^q/(p+1)`.
fn primitive_in_x(e: &Poly) -> Poly {
    let vars = e.vars();
    let mut out = Poly::zero(vars);
    for (m, coef) in e.terms() {
        let mut exps = m.exps().to_vec();
        exps[0] += 1;
        let c = coef / Q::from_integer(exps[0].into());
        out = &out + &Poly::term(vars, Monomial(exps), c);
    }
    out
}

/// Decides `a[e] = cval·b[e]` in `E'`: the coefficient of
/// `ω = f·e·dx∧dy − cval·df∧ξ` (`dξ = e·dx∧dy`) must lie in the span of the
/// `d(h·α) = Ṽ(h)·dx∧dy`. Only `h` of total degree `≤ order` are used; a
/// negative answer is definitive only when no monomial of the relevant
/// weighted degree exceeds that bound, and inconclusive otherwise.
pub fn verify_a_action(c: &FactoredCurve, w: &WeightSystem, e: &Poly, cval: &Q, order: usize) -> Result<bool> {
    let f = c.expand();
    c.vars().ensure_same(e.vars())?;
    let fx = f.derivative(0);
    let omega = &(&f * e) - &(&fx * &primitive_in_x(e)).scale(cval);
    if omega.is_zero() {
        return Ok(true);
    }
    let iw = cert_weights(c.vars(), w)?;
    let (lo, hi) = degree_range(&omega, &iw).expect("nonzero");
    if lo != hi {
        return Err(Error::invalid("f is not quasi-homogeneous for the weights"));
    }
    let v = annihilator_field(c)?;
    let shift = field_shift(&v, &iw)?;
    let src = lo as i64 - shift;
    if src < 0 {
        return Ok(false);
    }
    let target = MonomialSpace::new(c.vars(), &iw, lo, lo);
    let source = MonomialSpace::new(c.vars(), &iw, src as u64, src as u64);
    let mut span = Echelon::new();
    let mut truncated = false;
    for m in source.monomials() {
        if m.total_degree() > order as u64 {
            truncated = true;
            continue;
        }
        span.insert(target.to_vec(&v.apply_twisted(&Poly::monomial(c.vars(), m.clone()))));
    }
    if span.contains(&target.to_vec(&omega)) {
        Ok(true)
    } else if truncated {
        Err(Error::inconclusive(
            format!("a-action check on `{e}` needs multipliers beyond the jet order"),
            vec![order],
        ))
    } else {
        Ok(false)
    }
}

/// Weighted degree shift `s` of a homogeneous field: `Ṽ(O_e) ⊆ O_{e+s}`.
fn field_shift(v: &VectorField, w: &[u64]) -> Result<i64> {
    let mut shift = None;
    for (i, a) in v.coeffs().iter().enumerate() {
        if let Some((lo, hi)) = degree_range(a, w) {
            let s = lo as i64 - w[i] as i64;
            if lo != hi || shift.is_some_and(|t| t != s) {
                return Err(Error::invalid("annihilating field is not homogeneous for the weights"));
            }
            shift = Some(s);
        }
    }
    shift.ok_or_else(|| Error::Invariant("annihilating field vanishes".into()))
}

/// Outcome of the condition-(P) witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWitness {
    /// Every intersection vector found lies in `df∧dΩ⁰`.
    pub holds: bool,
    /// Number of independent vectors of `d(Ker df) ∩ Ĵ·Ω²` examined.
    pub checked: usize,
    /// True for the graded check, false for the jet heuristic.
    pub exact: bool,
}

/// Checks `d(Ker df) ∩ Ĵ(f)·Ω² ⊆ df∧dΩ⁰` degree by degree up to the graded
/// cap of jet order `order` (with weights), or in `O/m^order` (without).
/// Inconclusive when no nonzero intersection vector is found; in the jet
/// regime a vector outside `df∧dΩ⁰` is also only inconclusive, since
/// truncation can manufacture such vectors.
pub fn check_p_witness(c: &FactoredCurve, cert: Option<&WeightSystem>, order: usize) -> Result<PWitness> {
    let caps = Caps::default().with_jet_order(order.max(4));
    let sat = mu(&c.expand(), cert, &caps)?.saturation.gens;
    p_witness_with(c, cert, &sat, order)
}

/// The witness search with `Ĵ(f)` already known.
fn p_witness_with(c: &FactoredCurve, cert: Option<&WeightSystem>, sat: &IdealGens, order: usize) -> Result<PWitness> {
    let f = c.expand();
    let vars = c.vars();
    let v = annihilator_field(c)?;
    let fx = f.derivative(0);
    let fy = f.derivative(1);
    let bracket = |eta: &Poly| &(&fx * &eta.derivative(1)) - &(&fy * &eta.derivative(0));
    match cert {
        Some(w) => {
            let iw = cert_weights(vars, w)?;
            let wmin = iw.iter().copied().min().unwrap_or(1);
            let top = (order.saturating_sub(1) as u64) * wmin;
            let fdeg = degree_range(&f, &iw).expect("nonzero").0 as i64;
            let shift = field_shift(&v, &iw)?;
            let gens = sat.graded(&iw)?;
            let wsum: i64 = iw.iter().map(|&x| x as i64).sum();
            let mut checked = 0;
            for e in 0..=top {
                let target = MonomialSpace::new(vars, &iw, e, e);
                if target.is_empty() {
                    continue;
                }
                let span_of = |deg: i64, map: &dyn Fn(&Poly) -> Poly| {
                    let mut s = Echelon::new();
                    if deg >= 0 {
                        for m in MonomialSpace::new(vars, &iw, deg as u64, deg as u64).monomials() {
                            s.insert(target.to_vec(&map(&Poly::monomial(vars, m.clone()))));
                        }
                    }
                    s
                };
                let u = span_of(e as i64 - shift, &|h| v.apply_twisted(h));
                let mut jhat = Echelon::new();
                for (g, gd) in &gens {
                    if *gd <= e {
                        for m in MonomialSpace::new(vars, &iw, e - gd, e - gd).monomials() {
                            jhat.insert(target.to_vec(&g.mul_monomial(m, &Q::one())?));
                        }
                    }
                }
                let inter = intersect(&u, &jhat);
                if inter.dim() == 0 {
                    continue;
                }
                let wspan = span_of(e as i64 - fdeg + wsum, &bracket);
                for row in inter.rows() {
                    checked += 1;
                    if !wspan.contains(row) {
                        return Ok(PWitness {
                            holds: false,
                            checked,
                            exact: true,
                        });
                    }
                }
            }
            if checked == 0 {
                return Err(Error::inconclusive(
                    "no element of d(Ker df) ∩ Ĵ·Ω² below the graded cap",
                    vec![order],
                ));
            }
            Ok(PWitness {
                holds: true,
                checked,
                exact: true,
            })
        }
        None => {
            let jet = JetSpace::new(vars, order);
            let space = jet.space();
            let mut u = Echelon::new();
            let mut wspan = Echelon::new();
            for m in space.monomials() {
                let h = Poly::monomial(vars, m.clone());
                u.insert(space.to_vec(&v.apply_twisted(&h)));
                wspan.insert(space.to_vec(&bracket(&h)));
            }
            let jhat = jet.ideal_span(sat.gens());
            let inter = intersect(&u, &jhat);
            let checked = inter.dim();
            if checked == 0 || inter.rows().any(|r| !wspan.contains(r)) {
                return Err(Error::inconclusive("jet-order (P) witness did not conclude", vec![order]));
            }
            Ok(PWitness {
                holds: true,
                checked,
                exact: false,
            })
        }
    }
}

/// For `ψ` a unit: with `Δ = gcd(p_i) > 1` returns `h₀ = Π u_i^{p_i/Δ − 1}`
/// after checking `d(h₀·α) = 0`; with `Δ = 1` returns `None` after checking
/// that no `Π u_i^{s_i}` with `0 ≤ s_i < p_i` (other than the one giving
/// `df`) makes `h₀·α` closed.
pub fn gcd_remark_check(c: &FactoredCurve) -> Result<Option<Poly>> {
    if !c.residual_is_unit() {
        return Err(Error::invalid("the gcd remark needs a unit residual factor"));
    }
    if c.factors().is_empty() {
        return Err(Error::invalid("the gcd remark needs at least one multiple branch"));
    }
    let alpha = annihilator_form(c);
    let closed = |h: &Poly| alpha.mul_poly(h).exterior_derivative().is_zero();
    let product = |s: &[u32]| {
        c.factors()
            .iter()
            .zip(s)
            .fold(Poly::one(c.vars()), |acc, ((u, _), e)| &acc * &u.pow(*e))
    };
    let delta = multiplicity_gcd(c);
    if delta > 1 {
        let s: Vec<u32> = c.factors().iter().map(|(_, p)| p / delta - 1).collect();
        let h0 = product(&s);
        if !closed(&h0) {
            return Err(Error::Invariant(format!("d(h₀·α) ≠ 0 for h₀ = {h0}")));
        }
        return Ok(Some(h0));
    }
    let bounds = c.multiplicities();
    let mut s = vec![0u32; bounds.len()];
    loop {
        let is_df = s.iter().zip(&bounds).all(|(e, p)| *e == p - 1);
        if !is_df && closed(&product(&s)) {
            return Err(Error::Invariant(format!(
                "closed multiple of α found with gcd 1 at exponents {s:?}"
            )));
        }
        let mut i = 0;
        while i < s.len() {
            s[i] += 1;
            if s[i] < bounds[i] {
                break;
            }
            s[i] = 0;
            i += 1;
        }
        if i == s.len() {
            return Ok(None);
        }
    }
}

/// Closedness of `d(h·α)` as a form identity, exposed for tests.
pub fn twisted_matches_form(c: &FactoredCurve, h: &Poly) -> Result<bool> {
    let alpha = annihilator_form(c);
    let lhs = alpha.mul_poly(h).exterior_derivative();
    let rhs = DiffForm::top(&annihilator_field(c)?.apply_twisted(h));
    Ok(lhs == rhs)
}

/// Generators of `Ĵ(f)` for the curve, with the given caps.
pub fn saturated_jacobian(c: &FactoredCurve, cert: Option<&WeightSystem>, caps: &Caps) -> Result<IdealGens> {
    Ok(mu(&c.expand(), cert, caps)?.saturation.gens)
}
