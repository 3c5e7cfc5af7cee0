//! Elements of `F_q(x)` in lowest terms with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::poly::Poly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Reduces `num/den`; fails when `den = 0`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.lc();
        if lc != 1 {
            let inv = den.field().inv(lc).unwrap();
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(field: &Field, a: u64) -> Self {
        Self::from_poly(Poly::constant(field, a))
    }

    pub fn x(field: &Field) -> Self {
        Self::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value when the function lies in `F_q`.
    pub fn as_constant(&self) -> Option<u64> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, a: u64) -> Self {
        if a == 0 {
            return Self::zero(self.field());
        }
        RationalFunction {
            num: self.num.scale(a),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        // Powers of coprime polynomials stay coprime.
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Valuation at a monic irreducible `p`.
    pub fn ord_at(&self, p: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.ord_at(p) as i64 - self.den.ord_at(p) as i64)
    }

    /// Valuation at the infinite place of `F_q(x)`.
    pub fn ord_inf(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg() - self.num.deg())
    }

    /// `max(deg num, deg den)`, the degree of the pole divisor on `P^1`.
    pub fn height_degree(&self) -> u64 {
        self.num.deg().max(self.den.deg()).max(0) as u64
    }

    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        match split_top_slash(s) {
            Some(at) => {
                let num = parse_group(field, &s[..at], 0)?;
                let den = parse_group(field, &s[at + 1..], at + 1)?;
                Self::new(num, den).map_err(|_| crate::parse::err(at + 1, "zero denominator"))
            }
            None => Ok(Self::from_poly(parse_group(field, s, 0)?)),
        }
    }
}

fn split_top_slash(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_group(field: &Field, s: &str, base: usize) -> Result<Poly> {
    let trimmed = s.trim_start();
    let lead = s.len() - trimmed.len();
    let t = trimmed.trim_end();
    if t.starts_with('[') && t.ends_with(']') {
        return Poly::parse_var(field, &t[1..t.len() - 1], 'x', base + lead + 1);
    }
    Poly::parse_var(field, s, 'x', base)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    #[test]
    fn canonical_form() {
        let f = field_make(3, 1).unwrap();
        let a = RationalFunction::parse(&f, "[x^2-1]/[2*x-2]").unwrap();
        assert_eq!(a.to_string(), "2*x+2");
        let b = RationalFunction::parse(&f, "[x]/[2*x^2+1]").unwrap();
        assert!(b.den().is_monic());
        assert_eq!(RationalFunction::parse(&f, &b.to_string()).unwrap(), b);
        assert_eq!(&(&b * &b.inv().unwrap()), &RationalFunction::one(&f));
        assert!(RationalFunction::parse(&f, "[x]/[0]").is_err());
        assert_eq!(b.ord_inf(), Some(1));
        assert_eq!(b.height_degree(), 2);
    }
}
