//! Words in `a`, `b` and their normal forms `Σ c_{ij} b^i a^j` modulo
//! `ab = ba + b²`.
//!
//! `normal_order` rewrites letter by letter (right multiplication by `a` is
//! free, right multiplication by `b` pushes `b` through `a^j` with the rule).
//! `NormalForm::mul` uses the closed formula
//! `a^j b^k = Σ_t C(j,t)·k(k+1)…(k+t−1)·b^{k+t} a^{j−t}` and serves as an
//! independent oracle for the rewriter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, fmt_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

/// A coefficient times a word in `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord {
    pub coeff: Q,
    pub letters: Vec<Letter>,
}

impl OperatorWord {
    pub fn new(coeff: Q, letters: Vec<Letter>) -> Self {
        OperatorWord { coeff, letters }
    }

    /// `b^i a^j` style words from a list of `(letter, power)` runs.
    pub fn from_runs(coeff: Q, runs: &[(Letter, u32)]) -> Self {
        let letters = runs
            .iter()
            .flat_map(|&(l, n)| std::iter::repeat_n(l, n as usize))
            .collect();
        OperatorWord { coeff, letters }
    }

    /// Parses words such as `ab`, `a^2b^2`, `b a^3 b`.
    pub fn parse(src: &str) -> Result<Self> {
        let bytes: Vec<u8> = src.bytes().filter(|c| !c.is_ascii_whitespace() && *c != b'*').collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let l = match bytes[i] {
                b'a' => Letter::A,
                b'b' => Letter::B,
                c => {
                    return Err(Error::Parse {
                        pos: i,
                        msg: format!("unexpected `{}` in operator word", c as char),
                    })
                }
            };
            i += 1;
            let mut n = 1usize;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                n = std::str::from_utf8(&bytes[start..i])
                    .ok()
                    .and_then(|s| s.parse().ok())
                    .ok_or(Error::Parse {
                        pos: start,
                        msg: "expected an exponent".into(),
                    })?;
            }
            letters.extend(std::iter::repeat_n(l, n));
        }
        Ok(OperatorWord {
            coeff: Q::one(),
            letters,
        })
    }
}

/// `Σ c_{ij} b^i a^j`, keyed by `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalForm {
    terms: BTreeMap<(u32, u32), Q>,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, Q::one())
    }

    /// `c·b^i a^j`.
    pub fn term(i: u32, j: u32, c: Q) -> Self {
        let mut nf = Self::zero();
        nf.add_term(i, j, c);
        nf
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, i: u32, j: u32, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for ((i, j), c) in &other.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> NormalForm {
        let mut out = NormalForm::zero();
        for ((i, j), x) in &self.terms {
            out.add_term(*i, *j, x * c);
        }
        out
    }

    /// Product via the closed commutation formula.
    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for ((i, j), c) in &self.terms {
            for ((k, l), d) in &other.terms {
                // b^i (a^j b^k) a^l
                for t in 0..=*j {
                    let rising: Q = if *k == 0 && t > 0 {
                        Q::zero()
                    } else {
                        // k (k+1) … (k+t−1) = (k+t−1)! / (k−1)!
                        (0..t).fold(Q::one(), |acc, s| acc * Q::from_integer((k + s).into()))
                    };
                    if rising.is_zero() {
                        continue;
                    }
                    let coef = c * d * Q::from_integer(binomial(*j, t)) * rising;
                    out.add_term(i + k + t, j - t + l, coef);
                }
            }
        }
        out
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in &self.terms {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let mut parts = Vec::new();
                    if *i > 0 {
                        parts.push(if *i == 1 { "b".to_string() } else { format!("b^{i}") });
                    }
                    if *j > 0 {
                        parts.push(if *j == 1 { "a".to_string() } else { format!("a^{j}") });
                    }
                    parts.join("*")
                }
            };
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", fmt_q(&abs))?;
            }
        }
        Ok(())
    }
}

/// Rewriting engine: right multiplication by single letters.
struct Rewriter {
    /// Normal form of `a^j b`.
    push_b: HashMap<u32, NormalForm>,
}

impl Rewriter {
    fn new() -> Self {
        Rewriter {
            push_b: HashMap::new(),
        }
    }

    fn times_a(nf: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for ((i, j), c) in &nf.terms {
            out.add_term(*i, j + 1, c.clone());
        }
        out
    }

    fn times_b(&mut self, nf: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for ((i, j), c) in &nf.terms {
            let pushed = self.a_pow_b(*j);
            for ((k, l), d) in &pushed.terms {
                out.add_term(i + k, *l, c * d);
            }
        }
        out
    }

    /// `a^j b = a^{j−1}(ba + b²)`, rewritten recursively.
    fn a_pow_b(&mut self, j: u32) -> NormalForm {
        if let Some(nf) = self.push_b.get(&j) {
            return nf.clone();
        }
        let nf = if j == 0 {
            NormalForm::term(1, 0, Q::one())
        } else {
            let prev = self.a_pow_b(j - 1);
            let with_a = Self::times_a(&prev);
            let with_b = self.times_b(&prev);
            with_a.add(&with_b)
        };
        self.push_b.insert(j, nf.clone());
        nf
    }
}

/// Normal form of a sum of words.
pub fn normal_order(words: &[OperatorWord]) -> NormalForm {
    let mut rw = Rewriter::new();
    let mut total = NormalForm::zero();
    for w in words {
        let mut nf = NormalForm::term(0, 0, w.coeff.clone());
        for l in &w.letters {
            nf = match l {
                Letter::A => Rewriter::times_a(&nf),
                Letter::B => rw.times_b(&nf),
            };
        }
        total = total.add(&nf);
    }
    total
}

/// `Σ_{j=0}^{N} (−1)^j C(N,j) b^j a^N b^{N−j}` as words.
pub fn lemma22_rhs(n: u32) -> Vec<OperatorWord> {
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
            OperatorWord::from_runs(
                sign * Q::from_integer(binomial(n, j)),
                &[(Letter::B, j), (Letter::A, n), (Letter::B, n - j)],
            )
        })
        .collect()
}

/// `N!·b^{2N} = Σ_{j=0}^{N} (−1)^j C(N,j) b^j a^N b^{N−j}`.
pub fn lemma22_identity(n: u32) -> bool {
    let lhs = NormalForm::term(2 * n, 0, Q::from_integer(factorial(n)));
    normal_order(&lemma22_rhs(n)) == lhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn nf(word: &str) -> NormalForm {
        normal_order(&[OperatorWord::parse(word).unwrap()])
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(nf("ab").to_string(), "b*a + b^2");
        assert_eq!(nf("a^2b^2").to_string(), "b^2*a^2 + 4*b^3*a + 6*b^4");
        for n in 1..8u32 {
            let mut expected = NormalForm::term(n, 1, q(1));
            expected = expected.add(&NormalForm::term(n + 1, 0, q(n as i64)));
            assert_eq!(nf(&format!("ab^{n}")), expected);
        }
        assert_eq!(nf("ba").to_string(), "b*a");
        assert!(OperatorWord::parse("ac").is_err());
    }

    #[test]
    fn rewriter_agrees_with_closed_formula() {
        let words = ["a^3b^2", "ba^2b^3a", "a^4b^4", "bab", "a^2ba^2b"];
        for w in words {
            let word = OperatorWord::parse(w).unwrap();
            let mut prod = NormalForm::one();
            for l in &word.letters {
                let f = match l {
                    Letter::A => NormalForm::term(0, 1, q(1)),
                    Letter::B => NormalForm::term(1, 0, q(1)),
                };
                prod = prod.mul(&f);
            }
            assert_eq!(nf(w), prod, "{w}");
        }
    }

    #[test]
    fn lemma_identity_small_cases() {
        // N = 2 written out: a²b² − 2ba²b + b²a² = 2b⁴
        let words = vec![
            OperatorWord::parse("a^2b^2").unwrap(),
            OperatorWord::new(q(-2), OperatorWord::parse("ba^2b").unwrap().letters),
            OperatorWord::parse("b^2a^2").unwrap(),
        ];
        assert_eq!(normal_order(&words), NormalForm::term(4, 0, q(2)));
        for n in 1..=8 {
            assert!(lemma22_identity(n), "N = {n}");
        }
    }

    #[test]
    fn perturbed_identity_fails() {
        let mut words = lemma22_rhs(3);
        words[1].coeff = words[1].coeff.clone() + q(1);
        assert_ne!(normal_order(&words), NormalForm::term(6, 0, q(6)));
    }
}
