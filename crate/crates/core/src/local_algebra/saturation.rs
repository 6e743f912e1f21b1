//! Saturation `(I : m^∞)` and the generalized Milnor number `dim Ĵ/J`.
//!
//! Graded algorithm: a saturated ideal `S` satisfies `S : m = S`, so
//! `S_d = {h ∈ O_d : x_i·h ∈ S_{d+w_i} for all i}`. Seeding the top degrees
//! with `I` and sweeping downwards yields `(I : m^∞)` in every degree once the
//! seed lies beyond the support of `Ĵ/I`; agreement between the sweeps seeded
//! at the caps for jet orders `M` and `M + 2` is required.
//!
//! Jet algorithm: the chain `K_{j+1} = K_j : m` is computed in `O/m^{L_j}`
//! with the level `L_j` dropping by one at every step, so that products
//! `x_i·h` never leave the model. The chain stops when two consecutive
//! members agree; the whole computation is repeated at order `M + 2`.

use crate::error::{Error, Result};
use crate::linalg::{kernel, Echelon, SparseVec};
use crate::poly::{Monomial, Poly, Vars, WeightSystem};

use super::space::{JetSpace, MonomialSpace, SliceFamily};
use super::{cert_weights, jacobian_ideal, stable_quotient, Caps, IdealGens, JetQuotient};

/// Result of a saturation at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    /// Generators of `Ĵ = (I : m^∞)`.
    pub gens: IdealGens,
    /// Basis of `Ĵ / I`; monomials whenever possible.
    pub quotient_basis: Vec<Poly>,
    /// True for the graded algorithm, false for the jet heuristic.
    pub exact: bool,
    /// Jet orders whose results were compared.
    pub orders: Vec<usize>,
}

impl Saturation {
    pub fn colength(&self) -> usize {
        self.quotient_basis.len()
    }
}

/// `μ(f) = dim Ĵ(f)/J(f)` together with the data it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuResult {
    pub mu: usize,
    pub jacobian: IdealGens,
    pub saturation: Saturation,
}

/// `(I : m^∞)`. With a certificate the generators of `I` must be
/// homogeneous for its weights.
pub fn saturate_at_origin(
    ideal: &IdealGens,
    cert: Option<&WeightSystem>,
    caps: &Caps,
) -> Result<Saturation> {
    caps.validate()?;
    if ideal.is_unit_ideal() {
        return Ok(Saturation {
            gens: IdealGens::unit(ideal.vars()),
            quotient_basis: Vec::new(),
            exact: true,
            orders: Vec::new(),
        });
    }
    let orders = vec![caps.jet_order, caps.jet_order + 2];
    match cert {
        Some(c) => {
            let w = cert_weights(ideal.vars(), c)?;
            let graded = ideal.graded(&w)?;
            let lo = graded_saturation(ideal, &graded, &w, caps.graded_top(&w))?;
            let hi = graded_saturation(ideal, &graded, &w, caps.clone().with_jet_order(caps.jet_order + 2).graded_top(&w))?;
            let (head, tail) = hi.dims.split_at(lo.dims.len().min(hi.dims.len()));
            if lo.dims != head || tail.iter().any(|(s, i)| s != i) {
                return Err(Error::inconclusive(
                    "graded saturation did not stabilize",
                    orders,
                ));
            }
            Ok(Saturation {
                gens: hi.gens,
                quotient_basis: hi.basis,
                exact: true,
                orders,
            })
        }
        None => {
            let lo = jet_saturation(ideal, caps.jet_order);
            let hi = jet_saturation(ideal, caps.jet_order + 2);
            match (lo, hi) {
                (Some(lo), Some(hi)) if lo.basis.len() == hi.basis.len() => Ok(Saturation {
                    gens: hi.gens,
                    quotient_basis: hi.basis,
                    exact: false,
                    orders,
                }),
                _ => Err(Error::inconclusive("colon chain did not stabilize", orders)),
            }
        }
    }
}

/// `μ(f)`: `f(0) = 0`, `f` nonconstant.
pub fn mu(f: &Poly, cert: Option<&WeightSystem>, caps: &Caps) -> Result<MuResult> {
    if !num_traits::Zero::is_zero(&f.constant_term()) {
        return Err(Error::invalid("f must vanish at the origin"));
    }
    let jacobian = jacobian_ideal(f)?;
    let saturation = saturate_at_origin(&jacobian, cert, caps)?;
    Ok(MuResult {
        mu: saturation.colength(),
        jacobian,
        saturation,
    })
}

/// Classical Milnor number `dim O/J(f)` with a standard monomial basis.
/// Fails with "infinite colength" when the jet quotients do not stabilize.
pub fn milnor_number(f: &Poly, caps: &Caps) -> Result<JetQuotient> {
    caps.validate()?;
    let j = jacobian_ideal(f)?;
    stable_quotient(&j, caps)?.ok_or_else(|| {
        Error::inconclusive(
            "infinite colength: the Jacobian quotient does not stabilize",
            vec![caps.jet_order, caps.jet_order + 2],
        )
    })
}

struct SweepResult {
    gens: IdealGens,
    basis: Vec<Poly>,
    /// `(dim S_d, dim I_d)` for every swept degree.
    dims: Vec<(usize, usize)>,
}

fn graded_saturation(
    ideal: &IdealGens,
    graded: &[(Poly, u64)],
    w: &[u64],
    top: u64,
) -> Result<SweepResult> {
    let vars = ideal.vars();
    if let Some((g, _)) = graded.iter().find(|(_, d)| *d > top) {
        return Err(Error::inconclusive(
            format!("generator `{g}` lies above the graded cap"),
            vec![],
        ));
    }
    let wmax = w.iter().copied().max().unwrap_or(1);
    let fam = SliceFamily::new(vars, w, top + wmax);
    let n = vars.len();

    // S_d for d = 0..=top+wmax; seeds above top are the ideal itself.
    let mut sat: Vec<Echelon> = vec![Echelon::new(); (top + wmax + 1) as usize];
    for d in top + 1..=top + wmax {
        sat[d as usize] = fam.ideal_slice(graded, d);
    }
    for d in (0..=top).rev() {
        let slice = fam.slice(d);
        let images: Vec<SparseVec> = slice
            .monomials()
            .iter()
            .map(|m| {
                let mut img = SparseVec::new();
                let mut offset = 0;
                for (i, wi) in w.iter().enumerate() {
                    let t = d + wi;
                    let target = fam.slice(t);
                    let xm = m.mul(&Monomial::var(n, i));
                    let unit: SparseVec =
                        [(target.index(&xm).expect("monomial in slice"), num_traits::One::one())]
                            .into_iter()
                            .collect();
                    for (k, c) in sat[t as usize].reduce(&unit) {
                        img.insert(offset + k, c);
                    }
                    offset += target.len();
                }
                img
            })
            .collect();
        sat[d as usize] = Echelon::from_vectors(kernel(&images));
    }

    let mut gens = Vec::new();
    let mut basis = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=top {
        let slice = fam.slice(d);
        let s = &sat[d as usize];
        // minimal generators: S_d modulo m·S in degree d
        let mut lower = Echelon::new();
        for i in 0..n {
            if d < w[i] {
                continue;
            }
            let src = fam.slice(d - w[i]);
            for row in sat[(d - w[i]) as usize].rows() {
                let p = src.to_poly(row).mul_monomial(&Monomial::var(n, i), &num_traits::One::one())?;
                lower.insert(slice.to_vec(&p));
            }
        }
        for row in s.rows() {
            if lower.insert(row.clone()) {
                gens.push(slice.to_poly(row));
            }
        }
        let i_d = fam.ideal_slice(graded, d);
        dims.push((s.dim(), i_d.dim()));
        basis.extend(quotient_representatives(slice, s, i_d));
    }
    let gens = if gens.is_empty() {
        ideal.clone()
    } else {
        IdealGens::new(gens)?
    };
    Ok(SweepResult { gens, basis, dims })
}

/// Representatives of `big / small` (with `small ⊆ big`): monomials of `big`
/// taken greedily in listing order, completed by reduced vectors when `big`
/// is not spanned by monomials modulo `small`.
fn quotient_representatives(space: &MonomialSpace, big: &Echelon, small: Echelon) -> Vec<Poly> {
    let want = big.dim() - small.dim();
    let mut span = small;
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..space.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (space.monomial(a), space.monomial(b));
        ma.total_degree()
            .cmp(&mb.total_degree())
            .then_with(|| ma.listing_cmp(mb))
    });
    for idx in order {
        if out.len() == want {
            return out;
        }
        let unit: SparseVec = [(idx, num_traits::One::one())].into_iter().collect();
        if big.contains(&unit) && span.insert(unit) {
            out.push(Poly::monomial(space.vars(), space.monomial(idx).clone()));
        }
    }
    for row in big.rows() {
        if out.len() == want {
            break;
        }
        let r = span.reduce(row);
        if span.insert(r.clone()) {
            out.push(space.to_poly(&r));
        }
    }
    out
}

struct JetSaturation {
    gens: IdealGens,
    basis: Vec<Poly>,
}

/// Colon chain in shrinking jet spaces; `None` when it does not stabilize
/// above half the starting order.
fn jet_saturation(ideal: &IdealGens, order: usize) -> Option<JetSaturation> {
    let vars: &Vars = ideal.vars();
    let n = vars.len();
    let mut level = order;
    let mut space = JetSpace::new(vars, level);
    let mut k = space.ideal_span(ideal.gens());
    while level > order / 2 + 1 {
        let next_level = level - 1;
        let next = JetSpace::new(vars, next_level);
        let images: Vec<SparseVec> = next
            .space()
            .monomials()
            .iter()
            .map(|m| {
                let mut img = SparseVec::new();
                let width = space.space().len();
                for i in 0..n {
                    let xm = m.mul(&Monomial::var(n, i));
                    let unit: SparseVec =
                        [(space.space().index(&xm).expect("inside jet"), num_traits::One::one())]
                            .into_iter()
                            .collect();
                    for (c, v) in k.reduce(&unit) {
                        img.insert(i * width + c, v);
                    }
                }
                img
            })
            .collect();
        let colon = Echelon::from_vectors(kernel(&images));
        let truncated = next.space().project(space.space(), &k);
        let stable = colon.dim() == truncated.dim();
        space = next;
        k = colon;
        level = next_level;
        if stable {
            return Some(finish_jet(ideal, &space, &k));
        }
    }
    None
}

fn finish_jet(ideal: &IdealGens, space: &JetSpace, k: &Echelon) -> JetSaturation {
    let sp = space.space();
    let n = sp.vars().len();
    let mut lower = Echelon::new();
    for row in k.rows() {
        let p = sp.to_poly(row);
        for i in 0..n {
            let q = p
                .mul_monomial(&Monomial::var(n, i), &num_traits::One::one())
                .expect("exponent overflow");
            lower.insert(sp.to_vec(&q));
        }
    }
    // generators by increasing order of their lowest term
    let mut rows: Vec<&SparseVec> = k.rows().collect();
    rows.sort_by_key(|r| sp.to_poly(r).order());
    let mut gens = Vec::new();
    for row in rows {
        if lower.insert(row.clone()) {
            gens.push(sp.to_poly(row));
        }
    }
    let gens = IdealGens::new(gens).unwrap_or_else(|_| ideal.clone());
    let small = space.ideal_span(ideal.gens());
    let basis = quotient_representatives(sp, k, small);
    JetSaturation { gens, basis }
}
