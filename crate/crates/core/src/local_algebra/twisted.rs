//! The twisted quotient `O / (I + Ṽ(O))` with `Ṽ(h) = V·h + div(V)·h`.

use crate::error::{Error, Result};
use crate::forms::VectorField;
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly, WeightSystem};

use super::space::{degree_range, JetSpace, SliceFamily};
use super::{cert_weights, Caps, IdealGens};

/// Default number of consecutive empty graded pieces ending a scan.
pub const DEFAULT_WINDOW: usize = 4;

/// Dimension and monomial basis of `O / (I + Ṽ(O))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedQuotient {
    pub dim: usize,
    pub basis: Vec<Monomial>,
    /// True for the graded algorithm, false for the jet heuristic.
    pub exact: bool,
    /// Jet orders compared (heuristic) or the last graded degree scanned.
    pub orders: Vec<usize>,
}

/// Weighted degree shift of `Ṽ` when `V` is homogeneous, i.e. every term
/// of the coefficient of `∂_i` has degree `s + w_i`.
fn field_shift(v: &VectorField, w: &[u64]) -> Option<Option<i64>> {
    let mut shift: Option<i64> = None;
    for (i, a) in v.coeffs().iter().enumerate() {
        let (lo, hi) = match degree_range(a, w) {
            Some(r) => r,
            None => continue,
        };
        if lo != hi {
            return None;
        }
        let s = lo as i64 - w[i] as i64;
        match shift {
            None => shift = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    Some(shift)
}

/// `dim O / (I + Ṽ(O))` and a monomial basis of the quotient, listed in
/// `Monomial::listing_cmp` order.
pub fn twisted_quotient_dim(
    ideal: &IdealGens,
    v: &VectorField,
    cert: Option<&WeightSystem>,
    caps: &Caps,
) -> Result<TwistedQuotient> {
    caps.validate()?;
    ideal.vars().ensure_same(v.vars())?;
    if ideal.is_unit_ideal() {
        return Ok(TwistedQuotient {
            dim: 0,
            basis: Vec::new(),
            exact: true,
            orders: Vec::new(),
        });
    }
    match cert {
        Some(c) => {
            let w = cert_weights(ideal.vars(), c)?;
            let shift = field_shift(v, &w).ok_or_else(|| {
                Error::invalid("vector field is not homogeneous for the weight certificate")
            })?;
            graded(ideal, v, &w, shift, caps)
        }
        None => jet(ideal, v, caps),
    }
}

fn graded(
    ideal: &IdealGens,
    v: &VectorField,
    w: &[u64],
    shift: Option<i64>,
    caps: &Caps,
) -> Result<TwistedQuotient> {
    let gens = ideal.graded(w)?;
    let top = caps.graded_top(w);
    let window = caps.window_or(DEFAULT_WINDOW);
    let fam = SliceFamily::new(ideal.vars(), w, top);
    let start = gens.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let mut basis = Vec::new();
    let mut empty_run = 0usize;
    for e in 0..=top {
        let slice = fam.slice(e);
        let mut span = fam.ideal_slice(&gens, e);
        if let Some(s) = shift {
            let src = e as i64 - s;
            if src >= 0 && (src as u64) <= top {
                for m in fam.slice(src as u64).monomials() {
                    let img = v.apply_twisted(&Poly::monomial(ideal.vars(), m.clone()));
                    span.insert(slice.to_vec(&img));
                }
            }
        }
        let piece = slice.complement(&span);
        if piece.is_empty() {
            empty_run += 1;
        } else {
            empty_run = 0;
        }
        basis.extend(piece);
        if empty_run >= window && e >= start {
            basis.sort_by(Monomial::listing_cmp);
            return Ok(TwistedQuotient {
                dim: basis.len(),
                basis,
                exact: true,
                orders: vec![e as usize],
            });
        }
    }
    Err(Error::inconclusive(
        format!("twisted quotient still nonzero near weighted degree {top}"),
        vec![caps.jet_order],
    ))
}

fn jet_quotient(ideal: &IdealGens, v: &VectorField, order: usize) -> Vec<Monomial> {
    let jet = JetSpace::new(ideal.vars(), order);
    let mut span: Echelon = jet.ideal_span(ideal.gens());
    for m in jet.space().monomials() {
        let img = v.apply_twisted(&Poly::monomial(ideal.vars(), m.clone()));
        let vec: SparseVec = jet.space().to_vec(&img);
        span.insert(vec);
    }
    let mut basis = jet.space().complement(&span);
    basis.sort_by(Monomial::listing_cmp);
    basis
}

fn jet(ideal: &IdealGens, v: &VectorField, caps: &Caps) -> Result<TwistedQuotient> {
    let orders = vec![caps.jet_order, caps.jet_order + 2];
    let lo = jet_quotient(ideal, v, orders[0]);
    let hi = jet_quotient(ideal, v, orders[1]);
    if lo != hi {
        return Err(Error::inconclusive("twisted quotient did not stabilize", orders));
    }
    Ok(TwistedQuotient {
        dim: hi.len(),
        basis: hi,
        exact: false,
        orders,
    })
}
