//! Dense matrices over an exact field, with deterministic row reduction
//! (leftmost nonzero pivot, rows scanned in given order).

use super::rat::Rat;
use super::ratfunc::RatFunc;
use num::traits::{One, Zero};

/// Exact field operations needed by the linear algebra kernel.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; panics on zero (row reduction guards it).
    fn inv(&self) -> Self;
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        <Rat as Scalar>::one() / self.clone()
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RatFunc::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("inverse of zero rational function")
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>, // row-major
}

pub type MatQ = Mat<Rat>;
pub type MatRF = Mat<RatFunc>;

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).add(&a.mul(b));
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        *out.at_mut(i * other.rows + k, j * other.cols + l) =
                            a.mul(other.at(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// In-place Gauss-Jordan to reduced row echelon form.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // leftmost nonzero pivot, first eligible row in given order
            let mut sel = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            if sel != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, sel * self.cols + j);
                }
            }
            let inv = self.at(row, col).inv();
            for j in col..self.cols {
                *self.at_mut(row, j) = self.at(row, j).mul(&inv);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j).sub(&factor.mul(self.at(row, j)));
                        *self.at_mut(r, j) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, in reduced echelon form: one vector per free
    /// column, with a 1 in that column's slot and pivot-column entries filled in.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b; returns one solution (free variables set to 0) or None.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let mut sel = None;
            for r in col..n {
                if !m.at(r, col).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { return T::zero() };
            if sel != col {
                for j in 0..n {
                    m.data.swap(col * n + j, sel * n + j);
                }
                det = det.neg();
            }
            let p = m.at(col, col).clone();
            det = det.mul(&p);
            let inv = p.inv();
            for r in col + 1..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).mul(&inv);
                for j in col..n {
                    let v = m.at(r, j).sub(&factor.mul(m.at(col, j)));
                    *m.at_mut(r, j) = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                T::one()
            } else {
                T::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| aug.at(i, j + n).clone()))
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self.at(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Row-span of exact vectors with incremental insertion; used for quotient-space
/// computations (reduce a vector modulo a subspace, deterministically).
#[derive(Clone, Debug)]
pub struct RowSpan<T: Scalar> {
    pub dim_ambient: usize,
    rows: Vec<Vec<T>>,     // reduced echelon rows
    pivots: Vec<usize>,    // pivot column of each row, strictly increasing insert order kept sorted
}

impl<T: Scalar> RowSpan<T> {
    pub fn new(dim_ambient: usize) -> Self {
        RowSpan {
            dim_ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(dim_ambient: usize, rows: impl IntoIterator<Item = Vec<T>>) -> Self {
        let mut s = Self::new(dim_ambient);
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce v modulo the span; the residual has zeros in all pivot columns.
    pub fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        assert_eq!(v.len(), self.dim_ambient);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].clone();
                for j in 0..self.dim_ambient {
                    v[j] = v[j].sub(&c.mul(&row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Insert v; returns true if the span grew.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            *x = x.mul(&inv);
        }
        // back-substitute into existing rows to keep reduced form
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for j in 0..self.dim_ambient {
                    row[j] = row[j].sub(&c.mul(&r[j]));
                }
            }
        }
        let idx = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(idx, p);
        self.rows.insert(idx, r);
        true
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_int;

    fn mq(rows: usize, cols: usize, v: &[i64]) -> MatQ {
        Mat::new(rows, cols, v.iter().map(|&x| rat_int(x)).collect())
    }

    #[test]
    fn kernel_examples() {
        // identity: empty kernel
        assert!(MatQ::identity(2).kernel_basis().is_empty());
        // 1x2 zero matrix: two basis vectors
        let z = MatQ::zero(1, 2);
        assert_eq!(z.kernel_basis().len(), 2);
        // [[1,2],[2,4]]: kernel spanned by (-2, 1)
        let m = mq(2, 2, &[1, 2, 2, 4]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rat_int(-2), rat_int(1)]);
    }

    #[test]
    fn rank_nullity() {
        let m = mq(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 1, 1, 0]);
        assert_eq!(m.rank() + m.kernel_basis().len(), 4);
    }

    #[test]
    fn det_inverse() {
        let m = mq(2, 2, &[2, 1, -1, 0]);
        assert_eq!(m.det(), rat_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), MatQ::identity(2));
        assert!(mq(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn solve_consistency() {
        let m = mq(2, 2, &[1, 2, 2, 4]);
        assert!(m.solve(&[rat_int(1), rat_int(2)]).is_some());
        assert!(m.solve(&[rat_int(1), rat_int(3)]).is_none());
    }

    #[test]
    fn row_span_reduce() {
        let mut s = RowSpan::new(3);
        assert!(s.insert(vec![rat_int(0), rat_int(2), rat_int(0)]));
        assert!(s.insert(vec![rat_int(1), rat_int(1), rat_int(0)]));
        assert!(!s.insert(vec![rat_int(2), rat_int(4), rat_int(0)]));
        assert_eq!(s.dim(), 2);
        let r = s.reduce(vec![rat_int(3), rat_int(5), rat_int(7)]);
        assert_eq!(r, vec![rat_int(0), rat_int(0), rat_int(7)]);
        assert!(s.contains(&[rat_int(5), rat_int(-2), rat_int(0)]));
    }

    #[test]
    fn kron_shape() {
        let a = mq(2, 2, &[1, 0, 0, 1]);
        let b = mq(2, 2, &[0, 1, 1, 0]);
        let k = a.kron(&b);
        assert_eq!(k.rows, 4);
        assert_eq!(*k.at(0, 1), rat_int(1));
        assert_eq!(*k.at(0, 3), rat_int(0));
    }
}
