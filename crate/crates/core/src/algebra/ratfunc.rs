//! Rational functions in t, stored reduced with monic denominator, plus the
//! ASCII expression parser.
//!
//! Grammar:
//!   expr   := term (('+'|'-') term)*
//!   term   := factor (('*'|'/') factor)*
//!   factor := base ('^' nonneg-int)?        (unary minus allowed before a factor)
//!   base   := 't' | rational | '(' expr ')'
//!   rational := int ('/' posint)?
//! Whitespace is insignificant.

use super::poly::Poly;
use super::rat::Rat;
use crate::errors::{Error, Result};
use num::traits::{One, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly, // monic, coprime to num, nonzero
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g);
        let (mut d, _) = den.divrem(&g);
        // normalize: monic denominator
        let lead = d.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn t() -> Self {
        RatFunc {
            num: Poly::t(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().map_or(true, |d| d == 0) && self.den.degree() == Some(0)
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduce(num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        Self::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .renormalized()
    }

    fn renormalized(self) -> RatFunc {
        Self::reduce(self.num, self.den)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    /// d/dt via the quotient rule.
    pub fn derivative(&self) -> RatFunc {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let den = self.den.mul(&self.den);
        Self::reduce(num, den)
    }

    /// Pole order at a finite point (0 if regular there).
    pub fn pole_order_at(&self, a: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.den.vanishing_order(a).unwrap_or(0)
    }

    /// Pole order at infinity in s = 1/t, i.e. max(0, deg num - deg den).
    pub fn pole_order_at_infinity(&self) -> usize {
        match (self.num.degree(), self.den.degree()) {
            (Some(n), Some(d)) if n > d => n - d,
            _ => 0,
        }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Substitute t -> 1/s and multiply by -1/s^2 (the dt -> ds transform applied
    /// to connection matrices / 1-form coefficients at infinity).
    pub fn infinity_form_transform(&self) -> RatFunc {
        // f(1/s) = num(1/s)/den(1/s) = s^(d_den - d_num) * rev(num)/rev(den)
        let f_inf = self.subst_inverse();
        let s2 = RatFunc::from_poly(Poly::new(vec![Rat::zero(), Rat::zero(), Rat::one()]));
        f_inf.div(&s2).unwrap().neg()
    }

    /// f(1/s) as a rational function of s.
    pub fn subst_inverse(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let rn = self.num.reversed();
        let rd = self.den.reversed();
        // f(1/s) = s^(dd-dn) * rn/rd   (monomial on whichever side keeps exponents >= 0)
        let mut num = rn;
        let mut den = rd;
        if dd >= dn {
            let mut mono = vec![Rat::zero(); dd - dn];
            mono.push(Rat::one());
            num = num.mul(&Poly::new(mono));
        } else {
            let mut mono = vec![Rat::zero(); dn - dd];
            mono.push(Rat::one());
            den = den.mul(&Poly::new(mono));
        }
        Self::reduce(num, den)
    }

    pub fn to_text(&self) -> String {
        if self.den.degree() == Some(0) {
            // denominator is the constant 1 after normalization
            return self.num.to_text();
        }
        let num_s = self.num.to_text();
        let den_s = self.den.to_text();
        let num_wrapped = if self.num.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", num_s)
        } else {
            num_s
        };
        format!("{}/({})", num_wrapped, den_s)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.bump();
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        if self.peek() == Some(b'-') {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let n = self.nonneg_int()?;
            let mut acc = RatFunc::one();
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b't') => {
                self.bump();
                Ok(RatFunc::t())
            }
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nonneg_int_big()?;
                Ok(RatFunc::constant(Rat::from_integer(n)))
            }
            Some(_) => self.err("expected 't', number, or '('"),
            None => self.err("unexpected end of input"),
        }
    }

    fn nonneg_int(&mut self) -> Result<u32> {
        let n = self.nonneg_int_big()?;
        u32::try_from(n).map_err(|_| Error::Syntax {
            pos: self.pos,
            msg: "exponent too large".into(),
        })
    }

    fn nonneg_int_big(&mut self) -> Result<num::BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }
}

/// Parse the ASCII rational-function grammar.
pub fn rf_parse(text: &str) -> Result<RatFunc> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Syntax {
            pos: p.pos,
            msg: "trailing input".into(),
        });
    }
    Ok(v)
}
