//! Sparse exact linear algebra: reduced row echelon subspaces and kernels.
//!
//! Column indices double as a priority order: the pivot of a row is its
//! smallest column index. Callers order columns so that the monomials they
//! want to keep in quotient bases come last.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

pub type SparseVec = BTreeMap<usize, Q>;

pub fn axpy(target: &mut SparseVec, factor: &Q, v: &SparseVec) {
    use std::collections::btree_map::Entry;
    for (k, x) in v {
        let add = factor * x;
        match target.entry(*k) {
            Entry::Vacant(e) => {
                if !add.is_zero() {
                    e.insert(add);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += add;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

fn scale(v: &mut SparseVec, c: &Q) {
    for x in v.values_mut() {
        *x *= c;
    }
}

/// Subspace in reduced row echelon form. Every row has pivot coefficient 1
/// and no other row has a nonzero entry in a pivot column.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors(vs: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Normal form of `v` modulo the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let hits: Vec<usize> = out.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for p in hits {
            if let Some(c) = out.get(&p).cloned() {
                axpy(&mut out, &-c, &self.rows[&p]);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(&v);
        let (&pivot, lead) = match r.iter().next() {
            Some(x) => x,
            None => return false,
        };
        let inv = lead.recip();
        if !inv.is_one() {
            scale(&mut r, &inv);
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &-c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn extend(&mut self, other: &Echelon) {
        for r in other.rows() {
            self.insert(r.clone());
        }
    }

    pub fn contains_all(&self, other: &Echelon) -> bool {
        other.rows().all(|r| self.contains(r))
    }

    /// Columns in `0..ncols` that are not pivots.
    pub fn non_pivots(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).filter(|c| !self.rows.contains_key(c)).collect()
    }
}

/// Kernel of the linear map sending the `j`-th domain basis vector to
/// `images[j]`. Returned vectors are indexed by domain position.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    // Non-reduced echelon on the image side, tracking combinations.
    let mut rows: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut out = Vec::new();
    for (j, img) in images.iter().enumerate() {
        let mut v = img.clone();
        let mut combo = SparseVec::new();
        combo.insert(j, Q::one());
        while let Some(lead) = v.iter().next().map(|(&k, c)| (k, c.clone())) {
            match rows.get(&lead.0) {
                Some((rv, rc)) => {
                    let f = -lead.1;
                    axpy(&mut v, &f, rv);
                    axpy(&mut combo, &f, rc);
                }
                None => break,
            }
        }
        match v.iter().next() {
            None => out.push(combo),
            Some((&k, c)) => {
                let inv = c.recip();
                scale(&mut v, &inv);
                scale(&mut combo, &inv);
                rows.insert(k, (v, combo));
            }
        }
    }
    out
}

/// Intersection of two subspaces of the same ambient space.
pub fn intersect(a: &Echelon, b: &Echelon) -> Echelon {
    let avecs: Vec<&SparseVec> = a.rows().collect();
    let bvecs: Vec<&SparseVec> = b.rows().collect();
    let mut images: Vec<SparseVec> = avecs.iter().map(|v| (*v).clone()).collect();
    for v in &bvecs {
        let mut neg = (*v).clone();
        scale(&mut neg, &-Q::one());
        images.push(neg);
    }
    let mut out = Echelon::new();
    for k in kernel(&images) {
        let mut v = SparseVec::new();
        for (j, c) in &k {
            if *j < avecs.len() {
                axpy(&mut v, c, avecs[*j]);
            }
        }
        out.insert(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, v)| (k, q(v))).filter(|(_, v)| !v.is_zero()).collect()
    }

    #[test]
    fn echelon_is_reduced() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(0, 2), (1, 4)])));
        assert!(e.insert(sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.dim(), 2);
        let r0 = e.rows().next().unwrap();
        assert_eq!(r0, &sv(&[(0, 1), (2, -2)]));
        assert_eq!(e.non_pivots(3), vec![2]);
    }

    #[test]
    fn kernel_of_small_map() {
        // columns: e0 -> (1,0), e1 -> (0,1), e2 -> (1,1)
        let k = kernel(&[sv(&[(0, 1)]), sv(&[(1, 1)]), sv(&[(0, 1), (1, 1)])]);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], sv(&[(0, -1), (1, -1), (2, 1)]));
    }

    #[test]
    fn intersection_dimension() {
        let a = Echelon::from_vectors([sv(&[(0, 1)]), sv(&[(1, 1)])]);
        let b = Echelon::from_vectors([sv(&[(1, 1), (2, 1)]), sv(&[(0, 1), (1, 1)])]);
        let i = intersect(&a, &b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&sv(&[(0, 1), (1, 1)])));
    }
}
