//! Jordan data of matrices with rational spectrum.
//!
//! Strategy: scale to an integer matrix, compute the characteristic polynomial
//! (Faddeev-LeVerrier), read rational eigenvalues off the divisors of the
//! constant term (the scaled polynomial is monic over the integers, so every
//! rational root is an integer). Divisor enumeration uses a complete
//! factorization (trial division + Miller-Rabin + Pollard rho), so a
//! non-rational spectrum is detected rigorously, never guessed.

use super::matrix::MatQ;
use super::poly::Poly;
use super::rat::{rat_int, Rat};
use crate::errors::{Error, Result};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanData {
    /// (eigenvalue, block sizes descending); eigenvalues strictly increasing.
    pub blocks: Vec<(Rat, Vec<usize>)>,
    pub dim: usize,
}

impl JordanData {
    pub fn eigenvalues(&self) -> Vec<Rat> {
        self.blocks.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn is_scalar(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].1.iter().all(|&s| s == 1)
    }

    /// Number of Jordan blocks whose eigenvalue is an integer.
    pub fn integer_eigenvalue_block_count(&self) -> usize {
        self.blocks
            .iter()
            .filter(|(l, _)| l.denom().is_one())
            .map(|(_, sizes)| sizes.len())
            .sum()
    }

    /// Largest integer eigenvalue, if any.
    pub fn max_integer_eigenvalue(&self) -> Option<BigInt> {
        self.blocks
            .iter()
            .filter(|(l, _)| l.denom().is_one())
            .map(|(l, _)| l.numer().clone())
            .max()
    }
}

/// Characteristic polynomial det(xI - A), monic, via Faddeev-LeVerrier.
pub fn char_poly(a: &MatQ) -> Poly {
    let n = a.rows;
    assert_eq!(n, a.cols);
    // p(x) = x^n + c[n-1] x^(n-1) + ... + c[0]
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = MatQ::identity(n);
    for k in 1..=n {
        let am = a.matmul(&m);
        let c = -am.trace() / rat_int(k as i64);
        coeffs[n - k] = c.clone();
        if k < n {
            m = am;
            for i in 0..n {
                let v = m.at(i, i).clone() + c.clone();
                *m.at_mut(i, i) = v;
            }
        }
    }
    Poly::new(coeffs)
}

// --- integer factorization utilities (complete, exact) ---

fn mod_pow(base: &BigInt, exp: &BigInt, modulus: &BigInt) -> BigInt {
    base.modpow(exp, modulus)
}

fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigInt::from(p);
        if n == &pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    // Miller-Rabin with fixed witness set (deterministic far beyond our sizes,
    // overwhelming for anything larger).
    let one = BigInt::one();
    let two = BigInt::from(2);
    let n1 = n - &one;
    let mut d = n1.clone();
    let mut r = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        r += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let ab = BigInt::from(a);
        if &ab >= n {
            continue;
        }
        let mut x = mod_pow(&ab, &d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 0..r.saturating_sub(1) {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    // n is odd, composite, not a prime power of 2
    let one = BigInt::one();
    let mut c = BigInt::from(1);
    loop {
        let mut x = BigInt::from(2);
        let mut y = BigInt::from(2);
        let mut d = one.clone();
        while d == one {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
        c += 1;
    }
}

/// Complete prime factorization of |n| (n != 0).
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut factors: std::collections::BTreeMap<BigInt, u32> = Default::default();
    for p in 2u64..=7919 {
        // small trial division; skip ahead once n shrinks
        let pb = BigInt::from(p);
        if &pb * &pb > n {
            break;
        }
        while (&n % &pb).is_zero() {
            *factors.entry(pb.clone()).or_insert(0) += 1;
            n /= &pb;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *factors.entry(m).or_insert(0) += 1;
        } else {
            let d = pollard_rho(&m);
            let q = &m / &d;
            stack.push(d);
            stack.push(q);
        }
    }
    factors.into_iter().collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        let mut pk = BigInt::one();
        for _ in 0..=e {
            for d in &divs {
                next.push(d * &pk);
            }
            pk *= &p;
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

/// All rational roots of a monic integer polynomial, with multiplicities,
/// plus the root-free quotient.
fn integer_roots_monic(p: &Poly) -> (Vec<(BigInt, usize)>, Poly) {
    let mut q = p.clone();
    let mut roots = Vec::new();
    // strip zero roots
    let mut zero_mult = 0usize;
    while !q.is_zero() && q.coeff(0).is_zero() {
        q = Poly::new(q.coeffs[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((BigInt::zero(), zero_mult));
    }
    if q.degree() == Some(0) || q.is_zero() {
        return (roots, Poly::one());
    }
    let c0 = q.coeff(0).numer().clone();
    for d in divisors(&c0) {
        for sign in [1i64, -1] {
            let cand = Rat::from_integer(&d * BigInt::from(sign));
            if sign == -1 && d.is_zero() {
                continue;
            }
            let mut mult = 0usize;
            let lin = Poly::new(vec![-cand.clone(), Rat::one()]);
            loop {
                if q.degree().map_or(true, |deg| deg == 0) {
                    break;
                }
                let (quo, rem) = q.divrem(&lin);
                if rem.is_zero() {
                    q = quo;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                roots.push((cand.numer().clone(), mult));
            }
        }
    }
    (roots, q)
}

/// Jordan data of A; errors with the leftover irreducible-over-Q-root-free factor
/// when the spectrum is not rational.
pub fn jordan_data(a: &MatQ) -> Result<JordanData> {
    let n = a.rows;
    assert_eq!(n, a.cols);
    if n == 0 {
        return Ok(JordanData {
            blocks: vec![],
            dim: 0,
        });
    }
    // scale to integer entries: eigen(A) = eigen(dA)/d
    let mut d = BigInt::one();
    for e in &a.data {
        d = d.lcm(e.denom());
    }
    let scaled = a.scale(&Rat::from_integer(d.clone()));
    let p = char_poly(&scaled);
    let (roots, leftover) = integer_roots_monic(&p);
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    if total < n {
        return Err(Error::IrrationalSpectrum {
            factor: leftover.to_text(),
        });
    }
    let mut blocks = Vec::new();
    let mut sorted = roots;
    sorted.sort_by(|x, y| x.0.cmp(&y.0));
    for (root, mult) in sorted {
        let lambda = Rat::new(root, d.clone());
        // nullities of (A - lambda I)^k
        let mut shifted = a.clone();
        for i in 0..n {
            let v = shifted.at(i, i).clone() - lambda.clone();
            *shifted.at_mut(i, i) = v;
        }
        let mut powers = shifted.clone();
        let mut nullities = vec![0usize];
        loop {
            let nullity = n - powers.rank();
            nullities.push(nullity);
            if nullity >= mult {
                break;
            }
            powers = powers.matmul(&shifted);
        }
        // blocks of size >= k: nullities[k] - nullities[k-1]
        let mut sizes = Vec::new();
        let kmax = nullities.len() - 1;
        for k in 1..=kmax {
            let ge_k = nullities[k] - nullities[k - 1];
            let ge_k1 = if k + 1 <= kmax {
                nullities[k + 1] - nullities[k]
            } else {
                0
            };
            for _ in 0..(ge_k - ge_k1) {
                sizes.push(k);
            }
        }
        sizes.sort_unstable_by(|x, y| y.cmp(x));
        debug_assert_eq!(sizes.iter().sum::<usize>(), mult);
        blocks.push((lambda, sizes));
    }
    Ok(JordanData { blocks, dim: n })
}
