//! Dense univariate polynomials over Q in the coordinate t.

use super::rat::{rat_int, rat_to_string, Rat};
use num::traits::{One, Signed, Zero};
use num::BigInt;

/// Coefficients ascending; no trailing zeros (zero polynomial = empty vec).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial t.
    pub fn t() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let ddeg = divisor.degree().unwrap();
        let dlead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Poly::zero(), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut quot = vec![Rat::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + ddeg].clone() / dlead.clone();
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = Rat::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitute t -> t - a nowhere needed; but composing with a shift is used for
    /// Laurent expansion at finite points: returns p(t + a).
    pub fn shift(&self, a: &Rat) -> Poly {
        // Horner in (t + a).
        let shift_lin = Poly::new(vec![a.clone(), Rat::one()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&shift_lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Reverse coefficients: t^deg * p(1/t). Used at infinity.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Order of vanishing at a finite point (None for the zero polynomial).
    pub fn vanishing_order(&self, a: &Rat) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.clone();
        let lin = Poly::new(vec![-a.clone(), Rat::one()]);
        let mut k = 0usize;
        loop {
            let (q, r) = p.divrem(&lin);
            if r.is_zero() {
                k += 1;
                p = q;
            } else {
                return Some(k);
            }
        }
    }

    /// Display with variable name "t", ASCII, deterministic.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = rat_to_string(&c.abs());
            let term = match k {
                0 => cs,
                1 => {
                    if c.abs().is_one() {
                        "t".to_string()
                    } else {
                        format!("{}*t", cs)
                    }
                }
                _ => {
                    if c.abs().is_one() {
                        format!("t^{}", k)
                    } else {
                        format!("{}*t^{}", cs, k)
                    }
                }
            };
            if parts.is_empty() {
                if c.is_negative() {
                    parts.push(format!("-{}", term));
                } else {
                    parts.push(term);
                }
            } else if c.is_negative() {
                parts.push(format!(" - {}", term));
            } else {
                parts.push(format!(" + {}", term));
            }
        }
        parts.concat()
    }

    /// Clear denominators: returns (integer-coefficient polynomial as Poly, common multiplier m)
    /// with self * m having integer coefficients.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        use num::Integer;
        let mut m = BigInt::one();
        for c in &self.coeffs {
            m = m.lcm(c.denom());
        }
        let ints = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = c * Rat::from_integer(m.clone());
                scaled.numer().clone()
            })
            .collect();
        (ints, m)
    }
}
