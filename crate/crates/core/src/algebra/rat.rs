//! Exact rationals: thin helpers over `BigRational`.
//!
//! `BigRational` already stores lowest terms with positive denominator, which is
//! exactly the invariant we need; everything here is construction and formatting.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// The value as an i64 when it is an integer of machine size.
pub fn as_i64(x: &Rat) -> Option<i64> {
    if !is_integer(x) {
        return None;
    }
    let n = x.numer();
    i64::try_from(n.clone()).ok()
}

/// Canonical text form: "p" for integers, "p/q" otherwise (q > 0).
pub fn rat_to_string(x: &Rat) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse "p" or "p/q" (optional leading minus). Used for JSON payloads.
pub fn rat_from_string(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = num_s
        .parse()
        .map_err(|_| format!("bad integer {:?}", num_s))?;
    let denom: BigInt = den_s
        .parse()
        .map_err(|_| format!("bad integer {:?}", den_s))?;
    if denom.is_zero() {
        return Err("zero denominator".into());
    }
    if denom.is_negative() {
        return Err("denominator must be positive".into());
    }
    Ok(BigRational::new(numer, denom))
}

/// Factorial as an exact rational (for BCH / gauge series denominators).
pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let x = rat(2, -4);
        assert_eq!(x.numer(), &BigInt::from(-1));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(rat_to_string(&x), "-1/2");
    }

    #[test]
    fn string_round_trip() {
        for s in ["0", "7", "-3", "5/3", "-22/7"] {
            let x = rat_from_string(s).unwrap();
            assert_eq!(rat_to_string(&x), s);
        }
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("1/-2").is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat_int(1));
        assert_eq!(factorial(5), rat_int(120));
    }
}
