//! Truncated Laurent jets at points of P^1 (uniformizer t-z at finite z, s = 1/t
//! at infinity), scalar and matrix valued.

use super::matrix::MatQ;
use super::poly::Poly;
use super::rat::{rat_int, Rat};
use super::ratfunc::RatFunc;
use num::traits::Zero;

/// A point of P^1 where expansions happen.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pt {
    Finite(Rat),
    Infinity,
}

impl Pt {
    pub fn label(&self) -> String {
        match self {
            Pt::Finite(z) => super::rat::rat_to_string(z),
            Pt::Infinity => "inf".to_string(),
        }
    }
}

impl std::fmt::Display for Pt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Scalar Laurent jet: coefficients of u^val .. u^(prec-1).
/// Invariant: coeffs.len() == prec - val; if nonempty the first coefficient is
/// nonzero; the zero jet has val == prec and no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub center: Pt,
    pub val: i64,
    pub prec: i64,
    pub coeffs: Vec<Rat>,
}

impl Jet {
    pub fn new(center: Pt, val: i64, prec: i64, coeffs: Vec<Rat>) -> Self {
        assert_eq!(coeffs.len() as i64, prec - val, "jet length mismatch");
        Jet {
            center,
            val,
            prec,
            coeffs,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        while !self.coeffs.is_empty() && self.coeffs[0].is_zero() {
            self.coeffs.remove(0);
            self.val += 1;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
        self
    }

    pub fn zero(center: Pt, prec: i64) -> Self {
        Jet {
            center,
            val: prec,
            prec,
            coeffs: vec![],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rat {
        if k < self.val || k >= self.prec {
            return Rat::zero();
        }
        self.coeffs[(k - self.val) as usize].clone()
    }

    pub fn residue(&self) -> Rat {
        self.coeff(-1)
    }

    pub fn add(&self, other: &Jet) -> Jet {
        assert_eq!(self.center, other.center);
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec);
        let mut coeffs = Vec::new();
        for k in val..prec {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Jet::new(self.center.clone(), val, prec, coeffs)
    }

    pub fn neg(&self) -> Jet {
        Jet {
            center: self.center.clone(),
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.center.clone(), self.prec);
        }
        Jet {
            center: self.center.clone(),
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        assert_eq!(self.center, other.center);
        // truncation: known through min(p1 + v2, p2 + v1)
        let prec = (self.prec + other.val).min(other.prec + self.val);
        if self.is_zero() || other.is_zero() {
            return Jet::zero(self.center.clone(), prec.min(self.prec).min(other.prec));
        }
        let val = self.val + other.val;
        let mut coeffs = vec![Rat::zero(); (prec - val).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = (i + j) as i64;
                if k < (prec - val) {
                    coeffs[k as usize] += a * b;
                }
            }
        }
        Jet::new(self.center.clone(), val, prec, coeffs)
    }

    /// d/du of the jet (precision drops by one).
    pub fn deriv(&self) -> Jet {
        let prec = self.prec - 1;
        let mut coeffs = Vec::new();
        let val = self.val - 1;
        for k in val..prec {
            coeffs.push(self.coeff(k + 1) * rat_int(k + 1));
        }
        Jet::new(self.center.clone(), val, prec, coeffs)
    }

    pub fn truncate(&self, prec: i64) -> Jet {
        assert!(prec <= self.prec);
        let val = self.val.min(prec);
        let coeffs = (val..prec).map(|k| self.coeff(k)).collect();
        Jet::new(self.center.clone(), val, prec, coeffs)
    }

    /// Multiply by u^k.
    pub fn shift(&self, k: i64) -> Jet {
        Jet {
            center: self.center.clone(),
            val: self.val + k,
            prec: self.prec + k,
            coeffs: self.coeffs.clone(),
        }
    }
}

/// Expand a polynomial at u = 0 to a (nonnegative-valuation) jet.
fn poly_jet(center: Pt, p: &Poly, prec: i64) -> Jet {
    let mut coeffs = Vec::new();
    for k in 0..prec.max(0) {
        coeffs.push(p.coeff(k as usize));
    }
    Jet::new(center, 0, prec.max(0), coeffs)
}

/// Laurent expansion of f at z with the given precision (index of the first
/// untracked power of the uniformizer).
pub fn laurent_expand(f: &RatFunc, z: &Pt, precision: i64) -> Jet {
    match z {
        Pt::Infinity => {
            // expand f(1/s) at s = 0
            let g = f.subst_inverse();
            let mut jet = laurent_expand(&g, &Pt::Finite(Rat::zero()), precision);
            jet.center = Pt::Infinity;
            jet
        }
        Pt::Finite(a) => {
            if f.is_zero() {
                return Jet::zero(z.clone(), precision);
            }
            // substitute t = a + u
            let num = f.num.shift(a);
            let den = f.den.shift(a);
            let vn = num.vanishing_order(&Rat::zero()).unwrap() as i64;
            let vd = den.vanishing_order(&Rat::zero()).unwrap() as i64;
            let val = vn - vd;
            if precision <= val {
                // f vanishes to order >= precision: nothing tracked
                return Jet::zero(z.clone(), precision);
            }
            let num_unit = Poly::new(num.coeffs[vn as usize..].to_vec());
            let den_unit = Poly::new(den.coeffs[vd as usize..].to_vec());
            // invert den_unit as a power series to length (precision - val)
            let len = (precision - val) as usize;
            let mut inv = vec![Rat::zero(); len];
            let lead_inv = Rat::from_integer(num::BigInt::from(1)) / den_unit.coeff(0);
            inv[0] = lead_inv.clone();
            for k in 1..len {
                let mut acc = Rat::zero();
                for j in 1..=k {
                    acc += den_unit.coeff(j) * inv[k - j].clone();
                }
                inv[k] = -acc * lead_inv.clone();
            }
            let inv_jet = Jet::new(z.clone(), 0, len as i64, inv);
            let num_jet = poly_jet(z.clone(), &num_unit, len as i64);
            let unit = num_jet.mul(&inv_jet);
            let mut out = unit.shift(val);
            out.prec = precision; // shift preserves length; precision is exact here
            out = Jet::new(z.clone(), out.val, out.prec, {
                let v = out.val;
                (v..out.prec).map(|k| out.coeff(k)).collect()
            });
            out
        }
    }
}

/// Residue at z of the 1-form f·dt (at infinity, of f·dt in the s-chart).
pub fn residue_of_form(f: &RatFunc, z: &Pt) -> Rat {
    match z {
        Pt::Finite(_) => laurent_expand(f, z, 1).residue(),
        Pt::Infinity => {
            // f dt = f(1/s)·(-1/s^2) ds
            let g = f.infinity_form_transform();
            laurent_expand(&g, &Pt::Finite(Rat::zero()), 1).residue()
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix-coefficient jets
// ---------------------------------------------------------------------------

/// Matrix Laurent jet: Laurent series whose coefficients are n×n rational
/// matrices. Same normalization contract as `Jet`.
#[derive(Clone, Debug, PartialEq)]
pub struct MJet {
    pub center: Pt,
    pub n: usize,
    pub val: i64,
    pub prec: i64,
    pub coeffs: Vec<MatQ>,
}

impl MJet {
    pub fn new(center: Pt, n: usize, val: i64, prec: i64, coeffs: Vec<MatQ>) -> Self {
        assert_eq!(coeffs.len() as i64, prec - val);
        MJet {
            center,
            n,
            val,
            prec,
            coeffs,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        while !self.coeffs.is_empty() && self.coeffs[0].is_zero() {
            self.coeffs.remove(0);
            self.val += 1;
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
        self
    }

    pub fn zero(center: Pt, n: usize, prec: i64) -> Self {
        MJet {
            center,
            n,
            val: prec,
            prec,
            coeffs: vec![],
        }
    }

    pub fn identity(center: Pt, n: usize, prec: i64) -> Self {
        let coeffs = (0..(prec.max(0)) as usize)
            .map(|k| {
                if k == 0 {
                    MatQ::identity(n)
                } else {
                    MatQ::zero(n, n)
                }
            })
            .collect();
        MJet::new(center, n, 0, prec.max(0), coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> MatQ {
        if k < self.val || k >= self.prec {
            return MatQ::zero(self.n, self.n);
        }
        self.coeffs[(k - self.val) as usize].clone()
    }

    pub fn add(&self, other: &MJet) -> MJet {
        assert_eq!(self.center, other.center);
        let prec = self.prec.min(other.prec);
        let val = self.val.min(other.val).min(prec);
        let coeffs = (val..prec)
            .map(|k| self.coeff(k).add(&other.coeff(k)))
            .collect();
        MJet::new(self.center.clone(), self.n, val, prec, coeffs)
    }

    pub fn neg(&self) -> MJet {
        MJet {
            center: self.center.clone(),
            n: self.n,
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &MJet) -> MJet {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> MJet {
        if c.is_zero() {
            return MJet::zero(self.center.clone(), self.n, self.prec);
        }
        MJet {
            center: self.center.clone(),
            n: self.n,
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &MJet) -> MJet {
        assert_eq!(self.center, other.center);
        let prec = (self.prec + other.val).min(other.prec + self.val);
        if self.is_zero() || other.is_zero() {
            return MJet::zero(
                self.center.clone(),
                self.n,
                prec.min(self.prec).min(other.prec),
            );
        }
        let val = self.val + other.val;
        let len = (prec - val).max(0) as usize;
        let mut coeffs = vec![MatQ::zero(self.n, self.n); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = coeffs[i + j].add(&a.matmul(b));
                }
            }
        }
        MJet::new(self.center.clone(), self.n, val, prec, coeffs)
    }

    pub fn commutator(&self, other: &MJet) -> MJet {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn deriv(&self) -> MJet {
        let prec = self.prec - 1;
        let val = self.val - 1;
        let coeffs = (val..prec)
            .map(|k| self.coeff(k + 1).scale(&rat_int(k + 1)))
            .collect();
        MJet::new(self.center.clone(), self.n, val, prec, coeffs)
    }

    pub fn truncate(&self, prec: i64) -> MJet {
        assert!(prec <= self.prec);
        let val = self.val.min(prec);
        let coeffs = (val..prec).map(|k| self.coeff(k)).collect();
        MJet::new(self.center.clone(), self.n, val, prec, coeffs)
    }

    pub fn trace_jet(&self) -> Jet {
        let coeffs = self.coeffs.iter().map(|m| m.trace()).collect::<Vec<_>>();
        Jet::new(self.center.clone(), self.val, self.prec, coeffs)
    }

    /// Residue (coefficient of u^{-1}) as a matrix.
    pub fn residue(&self) -> MatQ {
        self.coeff(-1)
    }

    /// Expand a matrix of rational functions entrywise at z (at infinity: plain
    /// substitution t = 1/s, no form factor).
    pub fn expand_function(m: &Mat<RatFunc>, z: &Pt, precision: i64) -> MJet {
        let n = m.rows;
        let entry_jets: Vec<Jet> = m
            .data
            .iter()
            .map(|f| laurent_expand(f, z, precision))
            .collect();
        let val = entry_jets
            .iter()
            .map(|j| j.val)
            .min()
            .unwrap_or(precision);
        let coeffs = (val..precision)
            .map(|k| {
                MatQ::from_fn(n, m.cols, |i, jj| entry_jets[i * m.cols + jj].coeff(k))
            })
            .collect();
        let mut out = MJet::new(z.clone(), n, val, precision, coeffs);
        out.n = n;
        out
    }
}

use super::matrix::Mat;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::algebra::ratfunc::rf_parse;

    #[test]
    fn expand_one_over_t() {
        let f = rf_parse("1/t").unwrap();
        let j = laurent_expand(&f, &Pt::Finite(rat_int(0)), 3);
        assert_eq!(j.val, -1);
        assert_eq!(
            j.coeffs,
            vec![rat_int(1), rat_int(0), rat_int(0), rat_int(0)]
        );
    }

    #[test]
    fn expand_geometric() {
        // 1/(t-1) at 0 = -1 - t - t^2 - ...
        let f = rf_parse("1/(t-1)").unwrap();
        let j = laurent_expand(&f, &Pt::Finite(rat_int(0)), 2);
        assert_eq!(j.val, 0);
        assert_eq!(j.coeffs, vec![rat_int(-1), rat_int(-1)]);
    }

    #[test]
    fn expand_at_infinity() {
        // t = 1/s: valuation -1, coefficients [1, 0, 0]
        let f = rf_parse("t").unwrap();
        let j = laurent_expand(&f, &Pt::Infinity, 2);
        assert_eq!(j.val, -1);
        assert_eq!(j.coeffs, vec![rat_int(1), rat_int(0), rat_int(0)]);
    }

    #[test]
    fn jet_ring_homomorphism() {
        let f = rf_parse("(t+1)/(t-2)").unwrap();
        let g = rf_parse("1/(t^2+1)").unwrap();
        let z = Pt::Finite(rat_int(0));
        let prec = 6;
        let jf = laurent_expand(&f, &z, prec);
        let jg = laurent_expand(&g, &z, prec);
        let jfg = laurent_expand(&f.mul(&g), &z, prec);
        assert_eq!(jf.mul(&jg).truncate(jfg.prec.min(prec)), jfg.truncate(prec));
    }

    #[test]
    fn residue_theorem() {
        // f = 1/(t(t-1)): residues -1 at 0, +1 at 1, 0 at infinity; sum 0
        let f = rf_parse("1/(t^2-t)").unwrap();
        let r0 = residue_of_form(&f, &Pt::Finite(rat_int(0)));
        let r1 = residue_of_form(&f, &Pt::Finite(rat_int(1)));
        let ri = residue_of_form(&f, &Pt::Infinity);
        assert_eq!(r0, rat_int(-1));
        assert_eq!(r1, rat_int(1));
        assert_eq!(r0 + r1 + ri, rat_int(0));
        // f = t: residue at infinity of t dt: -(1/s^3)(1/s^... ) has no 1/s term -> 0? Actually
        // t dt = (1/s)(-1/s^2)ds = -s^{-3} ds: residue 0.
        let f = rf_parse("t").unwrap();
        assert_eq!(residue_of_form(&f, &Pt::Infinity), rat_int(0));
        // f = 1/t: residue at infinity must be -1 (sum with residue 1 at 0).
        let f = rf_parse("1/t").unwrap();
        assert_eq!(residue_of_form(&f, &Pt::Infinity), rat_int(-1));
    }

    #[test]
    fn jet_derivative() {
        // d/du of u^{-1} = -u^{-2}
        let f = rf_parse("1/t").unwrap();
        let j = laurent_expand(&f, &Pt::Finite(rat_int(0)), 3);
        let dj = j.deriv();
        assert_eq!(dj.val, -2);
        assert_eq!(dj.coeff(-2), rat_int(-1));
        assert_eq!(dj.coeff(-1), rat_int(0));
    }

    #[test]
    fn mjet_expand_and_mul() {
        let m = Mat::new(
            1,
            1,
            vec![rf_parse("1/2/t").unwrap()],
        );
        let j = MJet::expand_function(&m, &Pt::Finite(rat_int(0)), 4);
        assert_eq!(j.val, -1);
        assert_eq!(*j.residue().at(0, 0), rat(1, 2));
        let sq = j.mul(&j);
        assert_eq!(sq.val, -2);
        assert_eq!(*sq.coeff(-2).at(0, 0), rat(1, 4));
    }
}
