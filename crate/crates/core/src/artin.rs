//! Artinian local K-algebras K[x_1..x_s]/m^N presented by monomial truncation,
//! small-extension chains, and scalar extension.

use crate::algebra::{Mat, MatQ, Rat, RatFunc, Scalar};

/// Exponent vector; the constant monomial is all zeros.
pub type Monomial = Vec<u32>;

fn mono_degree(m: &Monomial) -> u32 {
    m.iter().sum()
}

/// Graded-lex order: first by total degree, then lexicographically on exponents
/// (earlier variables weigh more).
fn graded_lex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    mono_degree(a)
        .cmp(&mono_degree(b))
        .then_with(|| b.cmp(a).reverse())
        .then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinLocalRing {
    pub vars: Vec<String>,
    pub order: u32, // m^order = 0
    pub basis: Vec<Monomial>, // graded-lex, basis[0] = constant monomial
    /// mul_table[i][j] = Some(k) when basis[i]*basis[j] = basis[k], None when it
    /// falls into the truncation ideal.
    mul_table: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    pub coords: Vec<Rat>, // one per basis monomial
}

impl RingElement {
    pub fn zero(r: &ArtinLocalRing) -> Self {
        RingElement {
            coords: vec![Rat::zero(); r.dim()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn constant_part(&self) -> Rat {
        self.coords[0].clone()
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.coords[0].is_zero()
    }
}

impl ArtinLocalRing {
    /// K[x_1..x_s]/(all monomials of degree >= order), graded-lex basis.
    pub fn truncated(vars: Vec<String>, order: u32) -> Self {
        assert!(order >= 1);
        let s = vars.len();
        let mut basis = vec![vec![0u32; s]];
        let mut frontier = basis.clone();
        for _ in 1..order {
            let mut next = Vec::new();
            for m in &frontier {
                for v in 0..s {
                    let mut m2 = m.clone();
                    m2[v] += 1;
                    if !next.contains(&m2) {
                        next.push(m2);
                    }
                }
            }
            basis.extend(next.iter().cloned());
            frontier = next;
        }
        basis.sort_by(graded_lex);
        basis.dedup();
        Self::from_basis(vars, order, basis)
    }

    /// Quotient presentation on an explicit monomial basis (must be closed
    /// downward: every divisor of a basis monomial is in the basis).
    pub fn from_basis(vars: Vec<String>, order: u32, basis: Vec<Monomial>) -> Self {
        let index: std::collections::HashMap<Monomial, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let dim = basis.len();
        let mut mul_table = vec![vec![None; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let prod: Monomial = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(a, b)| a + b)
                    .collect();
                mul_table[i][j] = if mono_degree(&prod) >= order {
                    None
                } else {
                    index.get(&prod).copied()
                };
            }
        }
        ArtinLocalRing {
            vars,
            order,
            basis,
            mul_table,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn one(&self) -> RingElement {
        let mut e = RingElement::zero(self);
        e.coords[0] = Rat::one();
        e
    }

    pub fn from_constant(&self, c: Rat) -> RingElement {
        let mut e = RingElement::zero(self);
        e.coords[0] = c;
        e
    }

    /// The i-th variable as an element (if present in the basis).
    pub fn var(&self, i: usize) -> RingElement {
        let mut m = vec![0u32; self.vars.len()];
        m[i] = 1;
        let idx = self
            .basis
            .iter()
            .position(|b| b == &m)
            .expect("variable not in basis (order 1 ring?)");
        self.basis_element(idx)
    }

    pub fn basis_element(&self, idx: usize) -> RingElement {
        let mut e = RingElement::zero(self);
        e.coords[idx] = Rat::one();
        e
    }

    pub fn monomial_degree(&self, idx: usize) -> u32 {
        mono_degree(&self.basis[idx])
    }

    /// Index of basis[i]·basis[j], or None when the product is truncated away.
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.mul_table[i][j]
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement {
            coords: a.coords.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat, a: &RingElement) -> RingElement {
        RingElement {
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let mut out = RingElement::zero(self);
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some(k) = self.mul_table[i][j] {
                    out.coords[k] += x * y;
                }
            }
        }
        out
    }

    /// Multiplicative inverse of a unit (nonzero constant part).
    pub fn inv(&self, a: &RingElement) -> Option<RingElement> {
        let c = a.constant_part();
        if c.is_zero() {
            return None;
        }
        // a = c(1 - n) with n nilpotent; a^{-1} = c^{-1} (1 + n + n^2 + ...)
        let cinv = Rat::one() / c;
        let scaled = self.scale(&cinv, a);
        let n = self.sub(&self.one(), &scaled); // nilpotent
        let mut acc = self.one();
        let mut pow = n.clone();
        while !pow.is_zero() {
            acc = self.add(&acc, &pow);
            pow = self.mul(&pow, &n);
        }
        Some(self.scale(&cinv, &acc))
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self, a: &RingElement) -> Rat {
        a.constant_part()
    }

    /// Canonical small-extension chain down to K: kill top-degree monomials one
    /// at a time, last-in-graded-lex first.
    pub fn small_extension_chain(&self) -> Vec<SmallExtension> {
        let mut chain = Vec::new();
        let mut current = self.clone();
        while current.dim() > 1 {
            let kill_idx = current.dim() - 1; // graded-lex largest monomial
            let mut smaller = current.basis.clone();
            let killed = smaller.remove(kill_idx);
            let target = ArtinLocalRing::from_basis(
                current.vars.clone(),
                current.order,
                smaller,
            );
            chain.push(SmallExtension {
                source: current.clone(),
                target: target.clone(),
                kernel_index: kill_idx,
                kernel_monomial: killed,
            });
            current = target;
        }
        chain
    }
}

/// A surjection source -> target with one-dimensional kernel K·eps, eps·m = 0.
#[derive(Clone, Debug)]
pub struct SmallExtension {
    pub source: ArtinLocalRing,
    pub target: ArtinLocalRing,
    pub kernel_index: usize, // index of eps in source basis
    pub kernel_monomial: Monomial,
}

impl SmallExtension {
    pub fn epsilon(&self) -> RingElement {
        self.source.basis_element(self.kernel_index)
    }

    /// Project source coordinates onto the target basis.
    pub fn project(&self, a: &RingElement) -> RingElement {
        let mut coords = Vec::with_capacity(self.target.dim());
        for m in &self.target.basis {
            let i = self.source.basis.iter().position(|b| b == m).unwrap();
            coords.push(a.coords[i].clone());
        }
        RingElement { coords }
    }

    /// The canonical linear section on basis monomials.
    pub fn lift(&self, a: &RingElement) -> RingElement {
        let mut out = RingElement::zero(&self.source);
        for (j, m) in self.target.basis.iter().enumerate() {
            let i = self.source.basis.iter().position(|b| b == m).unwrap();
            out.coords[i] = a.coords[j].clone();
        }
        out
    }
}

/// Entry type for matrices over R ⊗ O^alg: a rational function per basis monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RingRF {
    pub coords: Vec<RatFunc>,
}

impl RingRF {
    pub fn zero(r: &ArtinLocalRing) -> Self {
        RingRF {
            coords: vec![RatFunc::zero(); r.dim()],
        }
    }
    pub fn from_rf(r: &ArtinLocalRing, f: RatFunc) -> Self {
        let mut e = Self::zero(r);
        e.coords[0] = f;
        e
    }
    pub fn reduce_mod_m(&self) -> RatFunc {
        self.coords[0].clone()
    }
}

/// Coefficient extension of a matrix over Q or over rational functions.
pub fn extend_scalars_q(m: &MatQ, r: &ArtinLocalRing) -> Mat<RatFunc> {
    // Q embeds in rational functions; over R the constant coordinate carries m.
    let _ = r;
    m.map(|c| RatFunc::constant(c.clone()))
}

/// Matrix over R⊗O as one rational-function matrix per basis monomial
/// (coordinatewise representation used throughout the deformation modules).
#[derive(Clone, Debug, PartialEq)]
pub struct RMatRF {
    pub n: usize,
    pub mats: Vec<Mat<RatFunc>>, // one per ring basis monomial
}

impl RMatRF {
    pub fn zero(r: &ArtinLocalRing, n: usize) -> Self {
        RMatRF {
            n,
            mats: vec![Mat::zero(n, n); r.dim()],
        }
    }

    pub fn from_constant(r: &ArtinLocalRing, m: Mat<RatFunc>) -> Self {
        let mut out = Self::zero(r, m.rows);
        out.mats[0] = m;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.mats[0].is_zero()
    }

    pub fn reduce_mod_m(&self) -> Mat<RatFunc> {
        self.mats[0].clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        RMatRF {
            n: self.n,
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RMatRF {
            n: self.n,
            mats: self
                .mats
                .iter()
                .zip(&other.mats)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        RMatRF {
            n: self.n,
            mats: self.mats.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale_rf(&self, c: &RatFunc) -> Self {
        RMatRF {
            n: self.n,
            mats: self.mats.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul(&self, r: &ArtinLocalRing, other: &Self) -> Self {
        let mut out = Self::zero(r, self.n);
        for i in 0..r.dim() {
            if self.mats[i].is_zero() {
                continue;
            }
            for j in 0..r.dim() {
                if other.mats[j].is_zero() {
                    continue;
                }
                if let Some(k) = r.mul_table[i][j] {
                    out.mats[k] = out.mats[k].add(&self.mats[i].matmul(&other.mats[j]));
                }
            }
        }
        out
    }

    pub fn commutator(&self, r: &ArtinLocalRing, other: &Self) -> Self {
        self.mul(r, other).sub(&other.mul(r, self))
    }

    /// Entrywise d/dt.
    pub fn deriv(&self) -> Self {
        RMatRF {
            n: self.n,
            mats: self
                .mats
                .iter()
                .map(|m| m.map(|f| f.derivative()))
                .collect(),
        }
    }

    /// exp of a nilpotent element (all coordinates in m, or overall nilpotent).
    pub fn exp_nilpotent(&self, r: &ArtinLocalRing) -> Self {
        assert!(self.in_maximal_ideal(), "exp needs a maximal-ideal element");
        let mut acc = Self::from_constant(r, Mat::identity(self.n));
        let mut pow = self.clone();
        let mut k = 1usize;
        while !pow.is_zero() {
            let inv_fact = Rat::one() / crate::algebra::rat::factorial(k);
            acc = acc.add(&pow.scale_rf(&RatFunc::constant(inv_fact)));
            pow = pow.mul(r, self);
            k += 1;
        }
        acc
    }

    pub fn trace(&self) -> Vec<RatFunc> {
        self.mats.iter().map(|m| m.trace()).collect()
    }

    /// Inverse of a unipotent element I + n (n in the maximal ideal).
    pub fn inv_unipotent(&self, r: &ArtinLocalRing) -> Self {
        let id = Self::from_constant(r, Mat::identity(self.n));
        let nn = self.sub(&id);
        assert!(nn.in_maximal_ideal(), "inverse needs a unipotent element");
        let neg = nn.neg();
        let mut acc = id;
        let mut pow = neg.clone();
        while !pow.is_zero() {
            acc = acc.add(&pow);
            pow = pow.mul(r, &neg);
        }
        acc
    }

    /// log of a unipotent element I + n: Σ (−1)^{k+1} n^k / k.
    pub fn log_unipotent(&self, r: &ArtinLocalRing) -> Self {
        let id = Self::from_constant(r, Mat::identity(self.n));
        let nn = self.sub(&id);
        assert!(nn.in_maximal_ideal(), "log needs a unipotent element");
        let mut acc = Self::zero(r, self.n);
        let mut pow = nn.clone();
        let mut k = 1i64;
        while !pow.is_zero() {
            let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
            let c = sign / crate::algebra::rat::rat_int(k);
            acc = acc.add(&pow.scale_rf(&RatFunc::constant(c)));
            pow = pow.mul(r, &nn);
            k += 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_int;

    #[test]
    fn dual_numbers() {
        let r = ArtinLocalRing::truncated(vec!["e".into()], 2);
        assert_eq!(r.dim(), 2);
        let e = r.var(0);
        assert!(r.mul(&e, &e).is_zero());
    }

    #[test]
    fn base_field() {
        let r = ArtinLocalRing::truncated(vec![], 1);
        assert_eq!(r.dim(), 1);
        assert!(r.small_extension_chain().is_empty());
    }

    #[test]
    fn square_zero_two_vars() {
        let r = ArtinLocalRing::truncated(vec!["x".into(), "y".into()], 2);
        assert_eq!(r.dim(), 3);
        let x = r.var(0);
        let y = r.var(1);
        assert!(r.mul(&x, &y).is_zero());
    }

    #[test]
    fn nilpotency_exact() {
        let r = ArtinLocalRing::truncated(vec!["e".into()], 4);
        assert_eq!(r.dim(), 4);
        let e = r.var(0);
        let e2 = r.mul(&e, &e);
        let e3 = r.mul(&e2, &e);
        assert!(!e3.is_zero());
        assert!(r.mul(&e3, &e).is_zero());
    }

    #[test]
    fn chain_lengths() {
        let r = ArtinLocalRing::truncated(vec!["e".into()], 4);
        let chain = r.small_extension_chain();
        assert_eq!(chain.len(), 3);
        // kills e^3 then e^2 then e
        assert_eq!(chain[0].kernel_monomial, vec![3]);
        assert_eq!(chain[1].kernel_monomial, vec![2]);
        assert_eq!(chain[2].kernel_monomial, vec![1]);
        // every step: eps * m = 0
        for step in &chain {
            let eps = step.epsilon();
            for idx in 1..step.source.dim() {
                let m = step.source.basis_element(idx);
                assert!(step.source.mul(&eps, &m).is_zero());
            }
        }
    }

    #[test]
    fn units_invert() {
        let r = ArtinLocalRing::truncated(vec!["x".into(), "y".into()], 3);
        let mut a = r.one();
        a.coords[1] = rat_int(2); // 1 + 2x ...
        a.coords[2] = rat_int(-1);
        let inv = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &inv), r.one());
        let x = r.var(0);
        assert!(r.inv(&x).is_none());
    }

    #[test]
    fn projection_is_algebra_hom() {
        let r = ArtinLocalRing::truncated(vec!["e".into()], 3);
        let chain = r.small_extension_chain();
        let step = &chain[0];
        let e = r.var(0);
        let prod = r.mul(&e, &e);
        let pe = step.project(&e);
        assert_eq!(
            step.project(&prod),
            step.target.mul(&pe, &pe)
        );
        // round trip through the section
        assert_eq!(step.project(&step.lift(&pe)), pe);
    }

    #[test]
    fn exp_nilpotent_matrix() {
        use crate::algebra::ratfunc::rf_parse;
        let r = ArtinLocalRing::truncated(vec!["e".into()], 3);
        let mut x = RMatRF::zero(&r, 1);
        x.mats[1] = Mat::new(1, 1, vec![rf_parse("t").unwrap()]);
        let ex = x.exp_nilpotent(&r);
        // exp(e t) = 1 + e t + e^2 t^2/2
        assert_eq!(ex.mats[0], Mat::identity(1));
        assert_eq!(ex.mats[1], Mat::new(1, 1, vec![rf_parse("t").unwrap()]));
        assert_eq!(
            ex.mats[2],
            Mat::new(1, 1, vec![rf_parse("t^2/2").unwrap()])
        );
    }
}
