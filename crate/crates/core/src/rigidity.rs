//! Katz-style cohomological rigidity calculator for tuples of invertible
//! matrices: centralizer dimensions, the index formula, Burnside
//! irreducibility, and the assembled verdict.

use crate::algebra::{rat_int, MatQ, RowSpan};
use crate::errors::{Error, Result};
use num::traits::Zero;

/// A tuple of invertible matrices (monodromy data up to conjugation).
#[derive(Clone, Debug)]
pub struct LocalSystemTuple {
    pub n: usize,
    pub matrices: Vec<MatQ>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport {
    pub n: usize,
    pub centralizer_dims: Vec<usize>,
    pub centralizer_codims: Vec<usize>,
    pub katz_index: i64,
    pub product_identity: bool,
    pub absolutely_irreducible: bool,
    /// Some(true/false) only when irreducible and the product is 1.
    pub rigid: Option<bool>,
}

impl LocalSystemTuple {
    pub fn new(matrices: Vec<MatQ>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Schema("empty matrix tuple".into()));
        }
        let n = matrices[0].rows;
        for m in &matrices {
            if m.rows != n || m.cols != n {
                return Err(Error::Schema("tuple matrices must be square of equal size".into()));
            }
            if m.det().is_zero() {
                return Err(Error::Schema("tuple matrices must be invertible".into()));
            }
        }
        Ok(LocalSystemTuple { n, matrices })
    }

    pub fn product_identity(&self) -> bool {
        let mut p = MatQ::identity(self.n);
        for m in &self.matrices {
            p = p.matmul(m);
        }
        p == MatQ::identity(self.n)
    }

    /// True iff words in the matrices span all of gl_n (stable under any field
    /// extension, hence "absolutely").
    pub fn absolutely_irreducible(&self) -> bool {
        let n = self.n;
        let mut span = RowSpan::new(n * n);
        span.insert(MatQ::identity(n).data);
        // grow the multiplicative span until it stabilizes
        let mut frontier: Vec<MatQ> = vec![MatQ::identity(n)];
        for _round in 0..(n * n) {
            let mut next = Vec::new();
            for w in &frontier {
                for a in &self.matrices {
                    let prod = w.matmul(a);
                    if span.insert(prod.data.clone()) {
                        next.push(prod);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        span.dim() == n * n
    }

    pub fn katz_index(&self) -> i64 {
        let n2 = (self.n * self.n) as i64;
        let mut idx = 2 * (1 - n2);
        for m in &self.matrices {
            idx += (self.n * self.n - centralizer_dim(m)) as i64;
        }
        idx
    }

    pub fn rigidity_report(&self) -> RigidityReport {
        let dims: Vec<usize> = self.matrices.iter().map(centralizer_dim).collect();
        let codims: Vec<usize> = dims.iter().map(|d| self.n * self.n - d).collect();
        let index = self.katz_index();
        let product = self.product_identity();
        let irr = self.absolutely_irreducible();
        let rigid = if product && irr {
            // symplectic tangent space: the index must be even here
            assert!(index % 2 == 0, "odd index on an irreducible product-1 tuple");
            Some(index == 0)
        } else {
            None
        };
        RigidityReport {
            n: self.n,
            centralizer_dims: dims,
            centralizer_codims: codims,
            katz_index: index,
            product_identity: product,
            absolutely_irreducible: irr,
            rigid,
        }
    }
}

/// dim ker(X ↦ AX − XA) on n×n matrices.
pub fn centralizer_dim(a: &MatQ) -> usize {
    let n = a.rows;
    let id = MatQ::identity(n);
    // row-major vec: AX ↦ A⊗I, XA ↦ I⊗Aᵀ
    let ad = a.kron(&id).sub(&id.kron(&a.transpose()));
    n * n - ad.rank()
}

/// The printed 2×2 hypergeometric triple used as a cross-check fixture.
pub fn hypergeometric_triple() -> LocalSystemTuple {
    let m = |e: [[i64; 2]; 2]| MatQ::from_fn(2, 2, |i, j| rat_int(e[i][j]));
    LocalSystemTuple::new(vec![
        m([[2, 1], [-1, 0]]),
        m([[1, 0], [-3, 1]]),
        m([[0, -1], [1, -2]]),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Rat};

    fn m2(e: [[i64; 2]; 2]) -> MatQ {
        MatQ::from_fn(2, 2, |i, j| rat_int(e[i][j]))
    }

    #[test]
    fn centralizer_examples() {
        assert_eq!(centralizer_dim(&MatQ::identity(3)), 9);
        assert_eq!(centralizer_dim(&m2([[1, 1], [0, 1]])), 2);
        let diag = MatQ::from_fn(2, 2, |i, j| if i == j { rat_int(i as i64 + 1) } else { Rat::zero() });
        assert_eq!(centralizer_dim(&diag), 2);
    }

    #[test]
    fn hypergeometric_fixture() {
        let t = hypergeometric_triple();
        let r = t.rigidity_report();
        assert_eq!(r.centralizer_codims, vec![2, 2, 2]);
        assert!(r.absolutely_irreducible);
        assert_eq!(r.katz_index, 0);
        // the printed matrices multiply to a unipotent matrix, not the identity
        assert!(!r.product_identity);
        assert_eq!(r.rigid, None);
    }

    #[test]
    fn product_identity_cases() {
        let a = m2([[2, 1], [1, 1]]);
        let ainv = a.inverse().unwrap();
        let t = LocalSystemTuple::new(vec![a.clone(), ainv]).unwrap();
        assert!(t.product_identity());
        let t3 = LocalSystemTuple::new(vec![
            MatQ::identity(2),
            MatQ::identity(2),
            MatQ::identity(2),
        ])
        .unwrap();
        assert!(t3.product_identity());
        assert!(!t3.absolutely_irreducible());
    }

    #[test]
    fn constructed_rigid_triple() {
        // two regular semisimple matrices and the inverse of their product
        let a = m2([[1, 1], [0, 2]]);
        let b = m2([[3, 0], [1, 5]]);
        let c = a.matmul(&b).inverse().unwrap();
        let t = LocalSystemTuple::new(vec![a, b, c]).unwrap();
        let r = t.rigidity_report();
        assert!(r.product_identity);
        assert!(r.absolutely_irreducible);
        assert_eq!(r.katz_index, 0);
        assert_eq!(r.rigid, Some(true));
    }

    #[test]
    fn four_point_index_two() {
        let a = m2([[1, 1], [0, 2]]);
        let b = m2([[3, 0], [1, 5]]);
        let d = m2([[1, 2], [0, 7]]);
        let c = a.matmul(&b).matmul(&d).inverse().unwrap();
        // c must be regular (distinct eigenvalues) for the oracle value
        let t = LocalSystemTuple::new(vec![a, b, d, c]).unwrap();
        let r = t.rigidity_report();
        assert!(r.product_identity);
        assert_eq!(r.katz_index, 2);
        assert_eq!(r.rigid, Some(false));
    }

    #[test]
    fn conjugation_invariance() {
        let a = m2([[2, 3], [1, 4]]);
        let p = m2([[1, 1], [0, 1]]);
        let pinv = p.inverse().unwrap();
        let conj = p.matmul(&a).matmul(&pinv);
        assert_eq!(centralizer_dim(&a), centralizer_dim(&conj));
    }

    #[test]
    fn singular_matrix_rejected() {
        let s = m2([[1, 2], [2, 4]]);
        assert!(LocalSystemTuple::new(vec![s]).is_err());
    }

    #[test]
    fn identity_only_tuple_index() {
        // m identity matrices: index = 2(1 − n²) + 0
        let t = LocalSystemTuple::new(vec![MatQ::identity(2); 3]).unwrap();
        assert_eq!(t.katz_index(), -6);
        let _ = rat(1, 2);
    }
}
