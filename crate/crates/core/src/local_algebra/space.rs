//! Finite monomial bases: jet spaces (all monomials up to a weighted degree)
//! and graded slices (one weighted degree).

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Poly, Vars};

pub(crate) fn int_degree(m: &Monomial, w: &[u64]) -> u64 {
    m.exps().iter().zip(w).map(|(&e, &wi)| e as u64 * wi).sum()
}

/// Weighted degree of the lowest and highest terms of `p`.
pub(crate) fn degree_range(p: &Poly, w: &[u64]) -> Option<(u64, u64)> {
    let mut it = p.terms().map(|(m, _)| int_degree(m, w));
    let first = it.next()?;
    Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
}

/// Column priority: higher weighted degree first, then larger exponents in
/// later variables first. Non-pivot columns (quotient bases) therefore favour
/// low degree and small exponents in the last variables.
fn pivot_priority(a: &Monomial, b: &Monomial, w: &[u64]) -> Ordering {
    int_degree(b, w)
        .cmp(&int_degree(a, w))
        .then_with(|| b.exps().iter().rev().cmp(a.exps().iter().rev()))
}

fn enumerate(w: &[u64], lo: u64, hi: u64) -> Vec<Monomial> {
    fn rec(w: &[u64], i: usize, budget: u64, cur: &mut Vec<u32>, spent: u64, lo: u64, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if spent >= lo {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let mut e = 0u32;
        loop {
            let cost = e as u64 * w[i];
            if spent + cost > budget {
                break;
            }
            cur[i] = e;
            rec(w, i + 1, budget, cur, spent + cost, lo, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; w.len()];
    rec(w, 0, hi, &mut cur, 0, lo, &mut out);
    out
}

/// An ordered monomial basis with index lookup.
#[derive(Clone, Debug)]
pub struct MonomialSpace {
    vars: Vars,
    weights: Vec<u64>,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialSpace {
    /// All monomials with weighted degree in `lo..=hi`.
    pub fn new(vars: &Vars, weights: &[u64], lo: u64, hi: u64) -> Self {
        assert_eq!(vars.len(), weights.len());
        let mut monos = enumerate(weights, lo, hi);
        monos.sort_by(|a, b| pivot_priority(a, b, weights));
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialSpace {
            vars: vars.clone(),
            weights: weights.to_vec(),
            monos,
            index,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monos[i]
    }

    pub fn index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn weighted_degree(&self, m: &Monomial) -> u64 {
        int_degree(m, &self.weights)
    }

    /// Coordinates of `p`; terms outside the space are dropped (truncation).
    pub fn to_vec(&self, p: &Poly) -> SparseVec {
        p.terms()
            .filter_map(|(m, c)| self.index(m).map(|i| (i, c.clone())))
            .collect()
    }

    pub fn to_poly(&self, v: &SparseVec) -> Poly {
        let mut p = Poly::zero(&self.vars);
        for (i, c) in v {
            p.add_term(self.monos[*i].clone(), c.clone());
        }
        p
    }

    pub fn basis_polys(&self, e: &Echelon) -> Vec<Poly> {
        e.rows().map(|r| self.to_poly(r)).collect()
    }

    /// Monomials of the non-pivot columns of `e`.
    pub fn complement(&self, e: &Echelon) -> Vec<Monomial> {
        e.non_pivots(self.len())
            .into_iter()
            .map(|i| self.monos[i].clone())
            .collect()
    }

    /// Re-expresses a subspace of another space in this one by truncation.
    pub fn project(&self, from: &MonomialSpace, e: &Echelon) -> Echelon {
        Echelon::from_vectors(e.rows().map(|r| self.to_vec(&from.to_poly(r))))
    }
}

/// Monomials of total degree `< order`: the finite model of `O / m^order`.
#[derive(Clone, Debug)]
pub struct JetSpace {
    order: usize,
    space: MonomialSpace,
}

impl JetSpace {
    pub fn new(vars: &Vars, order: usize) -> Self {
        assert!(order >= 1, "jet order must be positive");
        let ones = vec![1; vars.len()];
        JetSpace {
            order,
            space: MonomialSpace::new(vars, &ones, 0, order as u64 - 1),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn space(&self) -> &MonomialSpace {
        &self.space
    }

    /// Span of the jets of `gens·O`.
    pub fn ideal_span(&self, gens: &[Poly]) -> Echelon {
        let top = self.order as u64 - 1;
        let mut e = Echelon::new();
        for g in gens {
            let ord = match g.order() {
                Some(o) => o,
                None => continue,
            };
            if ord > top {
                continue;
            }
            let ones = vec![1; g.nvars()];
            for m in enumerate(&ones, 0, top - ord) {
                let mg = g.mul_monomial(&m, &num_traits::One::one()).expect("exponent overflow");
                e.insert(self.space.to_vec(&mg));
            }
        }
        e
    }
}

/// The monomials of a single weighted degree.
#[derive(Clone, Debug)]
pub struct GradedSlice {
    degree: u64,
    space: MonomialSpace,
}

impl GradedSlice {
    pub fn new(vars: &Vars, weights: &[u64], degree: u64) -> Self {
        GradedSlice {
            degree,
            space: MonomialSpace::new(vars, weights, degree, degree),
        }
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn space(&self) -> &MonomialSpace {
        &self.space
    }
}

/// Slices `0..=top` for one weight vector, built once and shared.
#[derive(Clone, Debug)]
pub(crate) struct SliceFamily {
    pub slices: Vec<GradedSlice>,
}

impl SliceFamily {
    pub fn new(vars: &Vars, weights: &[u64], top: u64) -> Self {
        let slices = (0..=top).map(|d| GradedSlice::new(vars, weights, d)).collect();
        SliceFamily { slices }
    }

    pub fn slice(&self, d: u64) -> &MonomialSpace {
        &self.slices[d as usize].space
    }

    /// Degree-`d` piece of the ideal generated by homogeneous `gens`.
    pub fn ideal_slice(&self, gens: &[(Poly, u64)], d: u64) -> Echelon {
        let target = self.slice(d);
        let mut e = Echelon::new();
        for (g, gd) in gens {
            if *gd > d {
                continue;
            }
            for m in self.slice(d - gd).monomials() {
                let mg = g.mul_monomial(m, &num_traits::One::one()).expect("exponent overflow");
                e.insert(target.to_vec(&mg));
            }
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_space_sizes_and_order() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let j = JetSpace::new(&v, 4);
        assert_eq!(j.space().len(), 10);
        // highest degree first, y-heavy first within a degree
        assert_eq!(j.space().monomial(0), &Monomial(vec![0, 3]));
        assert_eq!(j.space().monomial(9), &Monomial(vec![0, 0]));
    }

    #[test]
    fn weighted_slices() {
        let v = Vars::new(&["x", "y", "z"]).unwrap();
        let s = GradedSlice::new(&v, &[1, 1, 3], 3);
        // x^3, x^2y, xy^2, y^3, z
        assert_eq!(s.space().len(), 5);
        assert!(s.space().monomials().iter().all(|m| int_degree(m, &[1, 1, 3]) == 3));
    }
}
