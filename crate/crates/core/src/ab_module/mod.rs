//! Truncated (a,b)-modules: free `C[[b]]`-modules of rank `r` cut at
//! `b^N`, with `a` given on the generators by a matrix of polynomials in `b`
//! and extended by `a·b^k = b^k·a + k·b^{k+1}`.
//!
//! The quotient `E / b^N E` is stable under both operators, so every identity
//! checked on the model holds exactly in the whole window of b-degrees `< N`.

mod ordering;
mod torsion;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::{fmt_q, parse_q, Q};

pub use ordering::{lemma22_identity, lemma22_rhs, normal_order, Letter, NormalForm, OperatorWord};
pub use torsion::{TorsionFixture, TorsionSubspaces};

/// Polynomial in `b` truncated below `b^N`, as a sparse map power → coefficient.
pub type BPoly = std::collections::BTreeMap<u32, Q>;

/// How `a` is extended from the generators to `b^k·e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionRule {
    /// `a(b^k e) = b^k a(e) + k b^{k+1} e`, the rule forced by `ab − ba = b²`.
    #[default]
    Leibniz,
    /// `a(b^k e) = b^k a(e)`: a b-linear operator. Violates the commutation
    /// relation unless the model is trivial; kept as a negative control.
    BLinear,
}

/// A truncated (a,b)-module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABModule {
    rank: usize,
    trunc_order: usize,
    /// `a_matrix[i][j]`: coefficient of `e_i` in `a(e_j)`.
    a_matrix: Vec<Vec<BPoly>>,
    rule: ActionRule,
    label: String,
}

/// Element of `E / b^N E`: `coords[j][k]` is the coefficient of `b^k e_j`.
pub type Element = Vec<Vec<Q>>;

/// Outcome of a predicate evaluated on the truncated model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowedCheck {
    pub holds: bool,
    /// The assertion was verified for all b-degrees below this bound.
    pub window: usize,
}

impl ABModule {
    pub fn new(trunc_order: usize, a_matrix: Vec<Vec<BPoly>>, label: impl Into<String>) -> Result<Self> {
        Self::with_rule(trunc_order, a_matrix, ActionRule::Leibniz, label)
    }

    pub fn with_rule(
        trunc_order: usize,
        a_matrix: Vec<Vec<BPoly>>,
        rule: ActionRule,
        label: impl Into<String>,
    ) -> Result<Self> {
        let rank = a_matrix.len();
        if rank == 0 {
            return Err(Error::invalid("rank must be at least 1"));
        }
        if trunc_order < 2 {
            return Err(Error::invalid("truncation order must be at least 2"));
        }
        if a_matrix.iter().any(|row| row.len() != rank) {
            return Err(Error::invalid("a-matrix must be square"));
        }
        let a_matrix = a_matrix
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| {
                        e.into_iter()
                            .filter(|(k, c)| (*k as usize) < trunc_order && !c.is_zero())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(ABModule {
            rank,
            trunc_order,
            a_matrix,
            rule,
            label: label.into(),
        })
    }

    /// Rank one with `a·e = λ·b·e`.
    pub fn rank_one(lambda: Q, trunc_order: usize) -> Result<Self> {
        let label = format!("E_{}", fmt_q(&lambda));
        Self::new(trunc_order, vec![vec![[(1u32, lambda)].into_iter().collect()]], label)
    }

    /// Simple pole module with `a·e_j = c_j·b·e_j` (diagonal).
    pub fn diagonal(coeffs: &[Q], trunc_order: usize, label: impl Into<String>) -> Result<Self> {
        let r = coeffs.len();
        let mut m = vec![vec![BPoly::new(); r]; r];
        for (j, c) in coeffs.iter().enumerate() {
            m[j][j].insert(1, c.clone());
        }
        Self::new(trunc_order, m, label)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc_order
    }

    pub fn a_matrix(&self) -> &[Vec<BPoly>] {
        &self.a_matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &BPoly {
        &self.a_matrix[i][j]
    }

    pub fn rule(&self) -> ActionRule {
        self.rule
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Dimension of the model `E / b^N E` over the rationals.
    pub fn model_dim(&self) -> usize {
        self.rank * self.trunc_order
    }

    pub fn zero_element(&self) -> Element {
        vec![vec![Q::zero(); self.trunc_order]; self.rank]
    }

    /// `b^k e_j`.
    pub fn basis_element(&self, j: usize, k: usize) -> Element {
        let mut x = self.zero_element();
        if k < self.trunc_order {
            x[j][k] = Q::one();
        }
        x
    }

    pub fn apply_b(&self, x: &Element) -> Element {
        x.iter()
            .map(|col| {
                let mut out = Vec::with_capacity(col.len());
                out.push(Q::zero());
                out.extend(col[..col.len() - 1].iter().cloned());
                out
            })
            .collect()
    }

    pub fn apply_a(&self, x: &Element) -> Element {
        let n = self.trunc_order;
        let mut out = self.zero_element();
        for (j, col) in x.iter().enumerate() {
            for (k, c) in col.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (row, out_i) in self.a_matrix.iter().zip(out.iter_mut()) {
                    for (t, e) in &row[j] {
                        let deg = k + *t as usize;
                        if deg < n {
                            out_i[deg] += c * e;
                        }
                    }
                }
                if self.rule == ActionRule::Leibniz && k > 0 && k + 1 < n {
                    out[j][k + 1] += c * Q::from_integer((k as i64).into());
                }
            }
        }
        out
    }

    pub(crate) fn to_sparse(&self, x: &Element) -> SparseVec {
        let n = self.trunc_order;
        let mut v = SparseVec::new();
        // degree-major ordering so pivots sit at low b-degree
        for (j, col) in x.iter().enumerate() {
            for (k, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    v.insert(k * self.rank + j, c.clone());
                }
            }
        }
        debug_assert!(v.keys().all(|&i| i < self.rank * n));
        v
    }

    fn basis(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.trunc_order).flat_map(move |k| (0..self.rank).map(move |j| self.basis_element(j, k)))
    }
}

fn sub(x: &Element, y: &Element) -> Element {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.iter().zip(b).map(|(p, q)| p - q).collect())
        .collect()
}

fn is_zero(x: &Element) -> bool {
    x.iter().all(|col| col.iter().all(Zero::is_zero))
}

/// `a·b − b·a = b²` on every basis vector of `E / b^N E`.
pub fn check_commutation(e: &ABModule) -> WindowedCheck {
    let holds = e.basis().all(|x| {
        let lhs = sub(&e.apply_a(&e.apply_b(&x)), &e.apply_b(&e.apply_a(&x)));
        let rhs = e.apply_b(&e.apply_b(&x));
        is_zero(&sub(&lhs, &rhs))
    });
    WindowedCheck {
        holds,
        window: e.trunc_order,
    }
}

/// `E ⊗ F` over `C[[b]]` with `a = a_E ⊗ 1 + 1 ⊗ a_F`; generator `e_i ⊗ f_j`
/// has index `i·rank(F) + j`.
pub fn tensor(e: &ABModule, f: &ABModule) -> Result<ABModule> {
    if e.trunc_order != f.trunc_order {
        return Err(Error::invalid(format!(
            "truncation orders differ: {} vs {}",
            e.trunc_order, f.trunc_order
        )));
    }
    if e.rule != ActionRule::Leibniz || f.rule != ActionRule::Leibniz {
        return Err(Error::invalid("tensor products need the Leibniz action rule"));
    }
    let (re, rf) = (e.rank, f.rank);
    let r = re * rf;
    let mut m = vec![vec![BPoly::new(); r]; r];
    for i in 0..re {
        for j in 0..rf {
            let col = i * rf + j;
            for k in 0..re {
                add_into(&mut m[k * rf + j][col], &e.a_matrix[k][i]);
            }
            for l in 0..rf {
                add_into(&mut m[i * rf + l][col], &f.a_matrix[l][j]);
            }
        }
    }
    ABModule::new(e.trunc_order, m, format!("({})⊗({})", e.label, f.label))
}

fn add_into(target: &mut BPoly, p: &BPoly) {
    for (k, c) in p {
        let s = target.get(k).cloned().unwrap_or_else(Q::zero) + c;
        if s.is_zero() {
            target.remove(k);
        } else {
            target.insert(*k, s);
        }
    }
}

/// `a·E ⊂ b·E`: no entry of the a-matrix has a constant term.
pub fn is_simple_pole(e: &ABModule) -> bool {
    e.a_matrix
        .iter()
        .flatten()
        .all(|p| !p.contains_key(&0))
}

/// `a^k·E ⊂ Σ_{j<k} b^{k−j}·a^j·E`, decided in `E / b^N E`.
pub fn is_regular(e: &ABModule, k: usize) -> Result<WindowedCheck> {
    if k == 0 {
        return Err(Error::invalid("regularity index must be at least 1"));
    }
    if e.trunc_order < k + 2 {
        return Err(Error::inconclusive(
            format!("truncation too small to decide regularity with k = {k}"),
            vec![e.trunc_order],
        ));
    }
    let basis: Vec<Element> = e.basis().collect();
    // a^j applied to every basis vector, j = 0..=k
    let mut powers: Vec<Vec<Element>> = vec![basis];
    for j in 1..=k {
        let next = powers[j - 1].iter().map(|x| e.apply_a(x)).collect();
        powers.push(next);
    }
    let mut target = Echelon::new();
    for (j, images) in powers.iter().enumerate().take(k) {
        for x in images {
            let mut y = x.clone();
            for _ in 0..k - j {
                y = e.apply_b(&y);
            }
            // close under multiplication by b
            while !is_zero(&y) {
                target.insert(e.to_sparse(&y));
                y = e.apply_b(&y);
            }
        }
    }
    let holds = powers[k].iter().all(|x| target.contains(&e.to_sparse(x)));
    Ok(WindowedCheck {
        holds,
        window: e.trunc_order,
    })
}

/// Smallest `k ≤ max_k` for which `is_regular(e, k)` holds.
pub fn regularity_index(e: &ABModule, max_k: usize) -> Result<Option<usize>> {
    for k in 1..=max_k {
        if is_regular(e, k)?.holds {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// `E` followed by `F` on generators, `a` block diagonal.
pub fn direct_sum(e: &ABModule, f: &ABModule) -> Result<ABModule> {
    if e.trunc_order != f.trunc_order {
        return Err(Error::invalid("truncation orders differ"));
    }
    let r = e.rank + f.rank;
    let mut m = vec![vec![BPoly::new(); r]; r];
    for (offset, block) in [(0, e), (e.rank, f)] {
        for (i, row) in block.a_matrix.iter().enumerate() {
            m[offset + i][offset..offset + block.rank].clone_from_slice(row);
        }
    }
    ABModule::new(e.trunc_order, m, format!("({})⊕({})", e.label, f.label))
}

impl fmt::Display for ABModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (rank {}, mod b^{})", self.label, self.rank, self.trunc_order)?;
        for j in 0..self.rank {
            let terms: Vec<String> = (0..self.rank)
                .filter(|&i| !self.a_matrix[i][j].is_empty())
                .map(|i| format!("({})·e{}", fmt_bpoly(&self.a_matrix[i][j]), i))
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "  a·e{j} = {rhs}")?;
        }
        Ok(())
    }
}

pub fn fmt_bpoly(p: &BPoly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter()
        .map(|(k, c)| match k {
            0 => fmt_q(c),
            1 => format!("{}*b", fmt_q(c)),
            _ => format!("{}*b^{}", fmt_q(c), k),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Serialized form: entries as lists of `(b-power, "p/q")`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABModuleRecord {
    pub rank: usize,
    pub trunc_order: usize,
    pub a_matrix: Vec<Vec<Vec<(u32, String)>>>,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "is_leibniz")]
    pub rule: ActionRule,
}

fn is_leibniz(r: &ActionRule) -> bool {
    *r == ActionRule::Leibniz
}

impl ABModule {
    pub fn to_record(&self) -> ABModuleRecord {
        ABModuleRecord {
            rank: self.rank,
            trunc_order: self.trunc_order,
            a_matrix: self
                .a_matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| p.iter().map(|(k, c)| (*k, fmt_q(c))).collect())
                        .collect()
                })
                .collect(),
            label: self.label.clone(),
            rule: self.rule,
        }
    }

    pub fn from_record(r: &ABModuleRecord) -> Result<Self> {
        if r.a_matrix.len() != r.rank {
            return Err(Error::invalid(format!(
                "record declares rank {} but has {} rows",
                r.rank,
                r.a_matrix.len()
            )));
        }
        let mut m = Vec::with_capacity(r.rank);
        for row in &r.a_matrix {
            let mut out_row = Vec::with_capacity(row.len());
            for entry in row {
                let mut p = BPoly::new();
                for (k, c) in entry {
                    if (*k as usize) >= r.trunc_order {
                        return Err(Error::invalid(format!(
                            "b-power {k} is not below the truncation order {}",
                            r.trunc_order
                        )));
                    }
                    let v = parse_q(c)?;
                    let s = p.get(k).cloned().unwrap_or_else(Q::zero) + v;
                    p.insert(*k, s);
                }
                out_row.push(p);
            }
            m.push(out_row);
        }
        ABModule::with_rule(r.trunc_order, m, r.rule, r.label.clone())
    }
}

impl Serialize for ABModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ABModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ABModuleRecord::deserialize(d)?;
        ABModule::from_record(&r).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn bp(terms: &[(u32, i64)]) -> BPoly {
        terms.iter().map(|&(k, c)| (k, q(c))).collect()
    }

    /// Rank 2 with `a e0 = e1`, `a e1 = b² e0`: regular with k = 2, no simple pole.
    fn regular_not_simple(n: usize) -> ABModule {
        ABModule::new(
            n,
            vec![vec![bp(&[]), bp(&[(2, 1)])], vec![bp(&[(0, 1)]), bp(&[])]],
            "R",
        )
        .unwrap()
    }

    #[test]
    fn commutation_examples() {
        for lambda in [q(0), qf(1, 3), q(-2)] {
            let e = ABModule::rank_one(lambda, 16).unwrap();
            assert!(check_commutation(&e).holds);
        }
        // a·e = 0 gives a(b^n e) = n b^{n+1} e
        let e = ABModule::new(8, vec![vec![bp(&[])]], "a=0").unwrap();
        let x = e.basis_element(0, 3);
        assert_eq!(e.apply_a(&x), {
            let mut y = e.zero_element();
            y[0][4] = q(3);
            y
        });
        let naive = ABModule::with_rule(16, vec![vec![bp(&[(1, 1)])]], ActionRule::BLinear, "naive").unwrap();
        assert!(!check_commutation(&naive).holds);
        assert!(check_commutation(&regular_not_simple(10)).holds);
    }

    #[test]
    fn tensor_of_rank_one_adds_exponents() {
        let e = ABModule::rank_one(qf(1, 2), 16).unwrap();
        let f = ABModule::rank_one(qf(1, 3), 16).unwrap();
        let t = tensor(&e, &f).unwrap();
        assert_eq!(t.rank(), 1);
        assert_eq!(t.entry(0, 0), &[(1, qf(5, 6))].into_iter().collect::<BPoly>());
        assert!(check_commutation(&t).holds);
    }

    #[test]
    fn tensor_rank_and_errors() {
        let e = ABModule::diagonal(&[q(1), q(2)], 12, "D").unwrap();
        let unit = ABModule::new(12, vec![vec![bp(&[])]], "O").unwrap();
        assert_eq!(tensor(&e, &unit).unwrap().rank(), 2);
        let big = ABModule::diagonal(&(0..13).map(|i| qf(i + 2, 6)).collect::<Vec<_>>(), 12, "G").unwrap();
        assert_eq!(tensor(&e, &big).unwrap().rank(), 26);
        let other = ABModule::rank_one(q(1), 10).unwrap();
        assert!(tensor(&e, &other).is_err());
    }

    #[test]
    fn tensor_commutes_up_to_swap() {
        let e = regular_not_simple(8);
        let f = ABModule::diagonal(&[qf(1, 2), qf(2, 3), q(1)], 8, "D").unwrap();
        let ef = tensor(&e, &f).unwrap();
        let fe = tensor(&f, &e).unwrap();
        let (re, rf) = (e.rank(), f.rank());
        let swap = |idx: usize| (idx % rf) * re + idx / rf;
        for i in 0..re * rf {
            for j in 0..re * rf {
                assert_eq!(ef.entry(i, j), fe.entry(swap(i), swap(j)));
            }
        }
    }

    #[test]
    fn simple_pole_and_regularity() {
        let e = ABModule::rank_one(qf(1, 3), 16).unwrap();
        assert!(is_simple_pole(&e));
        assert!(is_regular(&e, 1).unwrap().holds);

        let unit_pole = ABModule::new(16, vec![vec![bp(&[(0, 1)])]], "a=1").unwrap();
        assert!(!is_simple_pole(&unit_pole));
        for k in 1..=4 {
            assert!(!is_regular(&unit_pole, k).unwrap().holds);
        }

        let r = regular_not_simple(12);
        assert!(!is_simple_pole(&r));
        assert!(!is_regular(&r, 1).unwrap().holds);
        assert_eq!(regularity_index(&r, 3).unwrap(), Some(2));

        let s = ABModule::diagonal(&[qf(1, 2), q(1)], 12, "S").unwrap();
        let t = tensor(&r, &s).unwrap();
        assert!(is_regular(&t, 2).unwrap().holds);
        let tt = tensor(&e.clone().relabel("x"), &ABModule::rank_one(q(2), 16).unwrap()).unwrap();
        assert!(is_simple_pole(&tt));

        assert!(is_regular(&ABModule::rank_one(q(1), 3).unwrap(), 4).is_err());
    }

    #[test]
    fn record_round_trip() {
        let r = regular_not_simple(6).relabel("round");
        let json = serde_json::to_string(&r).unwrap();
        let back: ABModule = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let e = ABModule::rank_one(qf(-5, 7), 4).unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"-5/7\""), "{json}");
        let bad = r#"{"rank":1,"trunc_order":2,"a_matrix":[[[[3,"1"]]]]}"#;
        assert!(serde_json::from_str::<ABModule>(bad).is_err());
    }
}
