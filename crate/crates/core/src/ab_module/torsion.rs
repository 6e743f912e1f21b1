//! Finite-dimensional torsion fixtures: a vector space with operators `a`,
//! `b` such that `ab − ba = b²` and `b` is nilpotent.
//!
//! On such a fixture `B(E) = ⋃ Ker b^m` is the whole space, and
//! `A(E) = {x : ∀p ∃n, a^n b^p x = 0}`. The axioms of a pre-(a,b)-module
//! reduce to the commutation relation, nilpotence of `b` and `B ⊂ A`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{intersect, kernel, Echelon, SparseVec};
use crate::rational::Q;

use super::ABModule;

type Matrix = Vec<Vec<Q>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionFixture {
    dim: usize,
    a: Matrix,
    b: Matrix,
}

/// `B(E)`, `A(E)` and the a-torsion `Ã(E) = ⋃ Ker a^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionSubspaces {
    pub b_torsion: Echelon,
    pub a_subspace: Echelon,
    pub a_torsion: Echelon,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let n = x.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[k][j].is_zero() {
                    out[i][j] += &x[i][k] * &y[k][j];
                }
            }
        }
    }
    out
}

fn mat_pow(x: &Matrix, e: usize) -> Matrix {
    (0..e).fold(identity(x.len()), |acc, _| mat_mul(&acc, x))
}

fn is_zero_matrix(x: &Matrix) -> bool {
    x.iter().all(|r| r.iter().all(Zero::is_zero))
}

fn column(x: &Matrix, j: usize) -> SparseVec {
    x.iter()
        .enumerate()
        .filter(|(_, r)| !r[j].is_zero())
        .map(|(i, r)| (i, r[j].clone()))
        .collect()
}

fn apply(x: &Matrix, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, row) in x.iter().enumerate() {
        let s = v.iter().fold(Q::zero(), |acc, (j, c)| acc + &row[*j] * c);
        if !s.is_zero() {
            out.insert(i, s);
        }
    }
    out
}

fn kernel_of(x: &Matrix) -> Echelon {
    let cols: Vec<SparseVec> = (0..x.len()).map(|j| column(x, j)).collect();
    Echelon::from_vectors(kernel(&cols))
}

/// `{v : x·v ∈ target}`.
fn preimage(x: &Matrix, target: &Echelon) -> Echelon {
    let n = x.len();
    let images: Vec<SparseVec> = (0..n).map(|j| target.reduce(&column(x, j))).collect();
    Echelon::from_vectors(kernel(&images))
}

impl TorsionFixture {
    /// Validates shapes, `ab − ba = b²` and nilpotence of `b`.
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        let dim = a.len();
        if dim == 0 || b.len() != dim || a.iter().chain(&b).any(|r| r.len() != dim) {
            return Err(Error::invalid("fixture matrices must be square of equal size"));
        }
        let f = TorsionFixture { dim, a, b };
        if !f.commutation_holds() {
            return Err(Error::invalid("fixture violates ab - ba = b^2"));
        }
        if !is_zero_matrix(&mat_pow(&f.b, dim)) {
            return Err(Error::invalid("b must be nilpotent"));
        }
        Ok(f)
    }

    /// The finite model `E / b^N E` of a truncated (a,b)-module.
    pub fn from_module(e: &ABModule) -> Result<Self> {
        let n = e.model_dim();
        let mut a = vec![vec![Q::zero(); n]; n];
        let mut b = vec![vec![Q::zero(); n]; n];
        for k in 0..e.trunc_order() {
            for j in 0..e.rank() {
                let x = e.basis_element(j, k);
                let col = e.to_sparse(&x).keys().next().copied().expect("basis vector");
                for (i, c) in e.to_sparse(&e.apply_a(&x)) {
                    a[i][col] = c;
                }
                for (i, c) in e.to_sparse(&e.apply_b(&x)) {
                    b[i][col] = c;
                }
            }
        }
        TorsionFixture::new(a, b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    fn commutation_holds(&self) -> bool {
        let ab = mat_mul(&self.a, &self.b);
        let ba = mat_mul(&self.b, &self.a);
        let bb = mat_mul(&self.b, &self.b);
        (0..self.dim).all(|i| (0..self.dim).all(|j| ab[i][j].clone() - &ba[i][j] == bb[i][j]))
    }

    pub fn torsion_subspaces(&self) -> TorsionSubspaces {
        let n = self.dim;
        let b_torsion = kernel_of(&mat_pow(&self.b, n));
        let a_torsion = kernel_of(&mat_pow(&self.a, n));
        // A = ⋂_p (b^p)^{-1}(Ã); b^p = 0 for p ≥ n
        let mut a_subspace = a_torsion.clone();
        let mut bp = identity(n);
        for _ in 1..n {
            bp = mat_mul(&bp, &self.b);
            a_subspace = intersect(&a_subspace, &preimage(&bp, &a_torsion));
        }
        TorsionSubspaces {
            b_torsion,
            a_subspace,
            a_torsion,
        }
    }

    /// Conditions i)–v) of a pre-(a,b)-module on this fixture.
    pub fn satisfies_axioms(&self) -> bool {
        let t = self.torsion_subspaces();
        self.commutation_holds() && t.a_subspace.contains_all(&t.b_torsion)
    }

    /// Smallest `N` with `a^N·A = 0`.
    pub fn a_nilpotency_on_a(&self) -> usize {
        let t = self.torsion_subspaces();
        let rows: Vec<SparseVec> = t.a_subspace.rows().cloned().collect();
        let mut cur = rows;
        let mut n = 0;
        while cur.iter().any(|v| !v.is_empty()) {
            cur = cur.iter().map(|v| apply(&self.a, v)).collect();
            n += 1;
        }
        n
    }

    /// `b^{2N}·A = 0` for `N` with `a^N·A = 0`, by matrix powers.
    pub fn lemma_check(&self) -> bool {
        let t = self.torsion_subspaces();
        let n = self.a_nilpotency_on_a();
        let b2n = mat_pow(&self.b, 2 * n);
        let killed = t.a_subspace.rows().all(|v| apply(&b2n, v).is_empty());
        killed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn b_zero_with_nilpotent_a() {
        let f = TorsionFixture::new(m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]), m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]])).unwrap();
        let t = f.torsion_subspaces();
        assert_eq!(t.b_torsion.dim(), 3);
        assert_eq!(t.a_subspace, t.b_torsion);
        assert!(f.satisfies_axioms());
        assert_eq!(f.a_nilpotency_on_a(), 3);
        assert!(f.lemma_check());
    }

    #[test]
    fn a_zero_needs_square_zero_b() {
        let f = TorsionFixture::new(m(&[&[0, 0], &[0, 0]]), m(&[&[0, 0], &[1, 0]])).unwrap();
        let t = f.torsion_subspaces();
        assert_eq!(t.b_torsion.dim(), 2);
        assert_eq!(t.a_subspace.dim(), 2);
        assert!(f.satisfies_axioms() && f.lemma_check());
        // a longer Jordan block with a = 0 breaks the commutation relation
        let zero = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert!(TorsionFixture::new(zero, m(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]])).is_err());
    }

    #[test]
    fn non_nilpotent_a_separates_a_from_b() {
        let f = TorsionFixture::new(m(&[&[0, 0], &[0, 1]]), m(&[&[0, 0], &[0, 0]])).unwrap();
        let t = f.torsion_subspaces();
        assert_eq!(t.b_torsion.dim(), 2);
        assert_eq!(t.a_subspace.dim(), 1);
        assert!(!f.satisfies_axioms());
    }

    #[test]
    fn truncated_modules_are_fixtures() {
        let e = ABModule::rank_one(qf(1, 2), 5).unwrap();
        let f = TorsionFixture::from_module(&e).unwrap();
        assert_eq!(f.dim(), 5);
        let t = f.torsion_subspaces();
        assert_eq!(t.a_subspace, t.b_torsion);
        assert!(f.satisfies_axioms() && f.lemma_check());
        assert!(TorsionFixture::new(m(&[&[1]]), m(&[&[1]])).is_err());
    }
}
