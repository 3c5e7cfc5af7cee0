//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are raw field values, low degree first, with no trailing
//! zeros. Factorization runs squarefree decomposition, then distinct-degree
//! and equal-degree splitting. The equal-degree step draws its trial
//! polynomials from a ChaCha stream seeded with [`SPLIT_SEED`], so every
//! factorization is reproducible bit for bit.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{embedding, Embedding, Field, FieldElement};
use crate::parse;

/// Seed of the equal-degree splitting stream.
pub const SPLIT_SEED: u64 = 0x05a1_1fe0;

#[derive(Clone)]
pub struct Poly {
    field: Field,
    c: Vec<u64>,
}

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(Poly, usize)>,
}

impl Poly {
    pub fn from_raw(field: &Field, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly {
            field: field.clone(),
            c,
        }
    }

    pub fn from_elements(field: &Field, c: &[FieldElement]) -> Result<Self> {
        let mut raw = Vec::with_capacity(c.len());
        for e in c {
            if e.field().p() != field.p() || e.field().k() != field.k() {
                return Err(Error::FieldMismatch);
            }
            raw.push(e.raw());
        }
        Ok(Self::from_raw(field, raw))
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_raw(field, vec![])
    }

    pub fn one(field: &Field) -> Self {
        Self::from_raw(field, vec![1])
    }

    pub fn x(field: &Field) -> Self {
        Self::from_raw(field, vec![0, 1])
    }

    pub fn constant(field: &Field, a: u64) -> Self {
        Self::from_raw(field, vec![a])
    }

    pub fn monomial(field: &Field, a: u64, deg: usize) -> Self {
        let mut c = vec![0; deg + 1];
        c[deg] = a;
        Self::from_raw(field, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn coefficient_elements(&self) -> Vec<FieldElement> {
        self.c
            .iter()
            .map(|&a| FieldElement::new(&self.field, a))
            .collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, a: u64) -> Poly {
        let f = &self.field;
        Self::from_raw(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.field.inv(self.lc()) {
            Some(i) if self.lc() != 1 => self.scale(i),
            _ => self.clone(),
        }
    }

    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; n];
        c.extend_from_slice(&self.c);
        Self::from_raw(&self.field, c)
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let (a, b) = (self.coeff(i), other.coeff(i));
                if negate {
                    f.sub(a, b)
                } else {
                    f.add(a, b)
                }
            })
            .collect();
        Self::from_raw(f, c)
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if b != 0 {
                    c[i + j] = f.add(c[i + j], f.mul(a, b));
                }
            }
        }
        Self::from_raw(f, c)
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return Ok((Self::zero(f), self.clone()));
        }
        let dd = d.c.len() - 1;
        let inv = f.inv(d.lc()).unwrap();
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let t = r[i];
            if t == 0 {
                continue;
            }
            let coef = if inv == 1 { t } else { f.mul(t, inv) };
            q[i - dd] = coef;
            for j in 0..=dd {
                if d.c[j] != 0 {
                    r[i - dd + j] = f.sub(r[i - dd + j], f.mul(coef, d.c[j]));
                }
            }
        }
        r.truncate(dd);
        Ok((Self::from_raw(f, q), Self::from_raw(f, r)))
    }

    /// Remainder; panics on a zero divisor.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }

    /// Quotient of a division known to be exact.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` and `g` the monic gcd.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let fld = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(fld), Self::zero(fld));
        let (mut t0, mut t1) = (Self::zero(fld), Self::one(fld));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).unwrap();
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match fld.inv(r0.lc()) {
            Some(i) => (r0.scale(i), s0.scale(i), t0.scale(i)),
            None => (r0, s0, t0),
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let p = f.p();
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.scale((i as u64) % p, a))
            .collect();
        Self::from_raw(f, c)
    }

    pub fn eval(&self, a: u64) -> u64 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let (mut base, mut acc) = (self.clone(), Self::one(&self.field));
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let (mut base, mut acc) = (self.rem(m), Self::one(&self.field).rem(m));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &Poly) -> Poly {
        let base = self.rem(m);
        let mut acc = Self::one(&self.field).rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Multiplicity of the nonconstant polynomial `p` in `self` (`self != 0`).
    pub fn ord_at(&self, p: &Poly) -> usize {
        debug_assert!(!self.is_zero() && !p.is_constant());
        let mut n = 0;
        let mut a = self.clone();
        loop {
            let (q, r) = a.divrem(p).unwrap();
            if !r.is_zero() {
                return n;
            }
            a = q;
            n += 1;
        }
    }

    /// Maps coefficients through a field embedding.
    pub fn embed(&self, e: &Embedding) -> Poly {
        Self::from_raw(e.dst(), self.c.iter().map(|&a| e.apply(a)).collect())
    }

    /// Reinterprets the coefficients in `target`, which must contain this field.
    pub fn embed_into(&self, target: &Field) -> Result<Poly> {
        Ok(self.embed(&*embedding(&self.field, target)?))
    }

    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let c = self
            .c
            .iter()
            .step_by(p)
            .map(|&a| f.frobenius(a, f.k() - 1))
            .collect();
        Self::from_raw(f, c)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d).is_one())
    }

    /// Pairs `(g_i, i)` with `self / lc = prod g_i^i`, each `g_i` squarefree monic.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(sqf(&self.monic()))
    }

    /// Distinct-degree factorization of a squarefree monic polynomial.
    pub fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let fld = &self.field;
        let q = fld.order();
        let x = Self::x(fld);
        let mut res = Vec::new();
        let mut f = self.monic();
        let mut h = x.clone();
        let mut d = 1usize;
        while f.c.len() > 2 * d {
            h = h.pow_mod(q, &f);
            let g = f.gcd(&(&h - &x));
            if !g.is_one() {
                f = f.div_exact(&g);
                h = h.rem(&f);
                res.push((g, d));
            }
            d += 1;
        }
        if f.c.len() > 1 {
            let n = f.c.len() - 1;
            res.push((f, n));
        }
        res
    }

    /// Splits a monic squarefree product of degree-`d` irreducibles.
    pub fn equal_degree(&self, d: usize) -> Vec<Poly> {
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut out = Vec::new();
        edf(&self.monic(), d, &mut rng, &mut out);
        out.sort();
        out
    }

    pub fn factor(&self) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut factors = Vec::new();
        for (g, mult) in sqf(&self.monic()) {
            for (h, d) in g.distinct_degree() {
                let mut parts = Vec::new();
                edf(&h, d, &mut rng, &mut parts);
                factors.extend(parts.into_iter().map(|p| (p, mult)));
            }
        }
        factors.sort();
        Ok(Factorization {
            unit: self.lc(),
            factors,
        })
    }

    /// Monic irreducible factors without multiplicities, sorted.
    pub fn distinct_irreducible_factors(&self) -> Result<Vec<Poly>> {
        Ok(self.factor()?.factors.into_iter().map(|(p, _)| p).collect())
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let fld = &self.field;
        let f = self.monic();
        let q = fld.order();
        let x = Self::x(fld);
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(x.clone());
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &f);
            frob.push(next);
        }
        if frob[n] != x.rem(&f) {
            return false;
        }
        prime_divisors(n as u64)
            .into_iter()
            .all(|r| f.gcd(&(&frob[n / r as usize] - &x)).is_one())
    }

    /// Raw roots in `target` (which must contain this field), ascending.
    pub fn roots_in(&self, target: &Field) -> Result<Vec<u64>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.embed_into(target)?.monic();
        if g.is_constant() {
            return Ok(vec![]);
        }
        let x = Self::x(target);
        let xq = x.pow_mod(target.order(), &g);
        let lin = g.gcd(&(&xq - &x));
        if lin.is_one() {
            return Ok(vec![]);
        }
        let mut roots: Vec<u64> = lin
            .equal_degree(1)
            .iter()
            .map(|l| target.neg(l.coeff(0)))
            .collect();
        roots.sort_unstable();
        Ok(roots)
    }

    pub fn root_elements(&self, target: &Field) -> Result<Vec<FieldElement>> {
        Ok(self
            .roots_in(target)?
            .into_iter()
            .map(|r| FieldElement::new(target, r))
            .collect())
    }

    pub fn parse(field: &Field, s: &str) -> Result<Poly> {
        Self::parse_var(field, s, 'x', 0)
    }

    pub fn parse_var(field: &Field, s: &str, var: char, base: usize) -> Result<Poly> {
        let mut acc = Self::zero(field);
        for t in parse::terms(s, var, base)? {
            let c = match t.coeff {
                Some((text, at)) => field.parse_at(text, at)?,
                None => 1,
            };
            let c = if t.negative { field.neg(c) } else { c };
            let exp = usize::try_from(t.exp)
                .ok()
                .filter(|&e| e <= 1 << 20)
                .ok_or_else(|| parse::err(base, "exponent too large"))?;
            acc = &acc + &Self::monomial(field, c, exp);
        }
        Ok(acc)
    }

    pub fn format_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mut ct = f.format(c);
            if !f.is_prime_field() && (ct.contains('u')) {
                ct = format!("({ct})");
            }
            parts.push(match i {
                0 => ct,
                1 if c == 1 => var.to_string(),
                1 => format!("{ct}*{var}"),
                _ if c == 1 => format!("{var}^{i}"),
                _ => format!("{ct}*{var}^{i}"),
            });
        }
        parts.join("+")
    }
}

fn sqf(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.field.p() as usize;
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (h, j) in sqf(&f.pth_root()) {
            out.push((h, j * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        for (h, j) in sqf(&c.pth_root()) {
            out.push((h, j * p));
        }
    }
    out
}

fn random_poly(field: &Field, deg_below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let c = (0..deg_below)
        .map(|_| rng.random_range(0..field.order()))
        .collect();
    Poly::from_raw(field, c)
}

fn edf(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.c.len() - 1;
    if n == 0 {
        return;
    }
    if n == d {
        out.push(f.clone());
        return;
    }
    let fld = f.field.clone();
    let q = fld.order();
    let exp = if q % 2 == 1 {
        Some((BigUint::from(q).pow(d as u32) - 1u32) / 2u32)
    } else {
        None
    };
    let trace_terms = fld.k() * d;
    loop {
        let a = random_poly(&fld, n, rng);
        if a.is_constant() {
            continue;
        }
        let mut g = a.gcd(f);
        if g.is_one() {
            let b = match &exp {
                Some(e) => &a.pow_mod_big(e, f) - &Poly::one(&fld),
                None => {
                    let mut t = a.rem(f);
                    let mut s = t.clone();
                    for _ in 1..trace_terms {
                        t = t.mul_mod(&t, f);
                        s = &s + &t;
                    }
                    s
                }
            };
            g = b.gcd(f);
        }
        if !g.is_constant() && g.c.len() < f.c.len() {
            let h = f.div_exact(&g);
            edf(&g, d, rng, out);
            edf(&h, d, rng, out);
            return;
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn mobius_fn(n: u64) -> i64 {
    mobius(n)
}

/// Number of monic irreducibles of degree `l` over `F_q`.
pub fn irreducible_count(q: u64, l: u64) -> u128 {
    let mut s: i128 = 0;
    for d in 1..=l {
        if l.is_multiple_of(d) {
            s += mobius(d) as i128 * (q as i128).pow((l / d) as u32);
        }
    }
    (s / l as i128) as u128
}

/// Number of monic polynomials of degree `l`, or `None` past `u64`.
pub fn monic_count(field: &Field, l: usize) -> Option<u64> {
    let mut n: u64 = 1;
    for _ in 0..l {
        n = n.checked_mul(field.order())?;
    }
    Some(n)
}

/// The `idx`-th monic polynomial of degree `l` in element order.
pub fn nth_monic(field: &Field, l: usize, mut idx: u64) -> Poly {
    let q = field.order();
    let mut c = Vec::with_capacity(l + 1);
    for _ in 0..l {
        c.push(idx % q);
        idx /= q;
    }
    c.push(1);
    Poly::from_raw(field, c)
}

/// Monic irreducibles of degree `l` in element order, restricted to the index
/// window `range` of [`nth_monic`] so scans can be split across workers.
pub fn irreducibles_in(
    field: &Field,
    l: usize,
    range: std::ops::Range<u64>,
) -> impl Iterator<Item = Poly> + '_ {
    range.filter_map(move |i| {
        let p = nth_monic(field, l, i);
        (l == 1 || p.coeff(0) != 0).then_some(p).filter(|p| p.is_irreducible())
    })
}

/// All monic irreducibles of degree `l >= 1`, in element order.
pub fn irreducibles(field: &Field, l: usize) -> Result<impl Iterator<Item = Poly> + '_> {
    if l == 0 {
        return Err(Error::Invalid("degree must be at least 1".into()));
    }
    let n = monic_count(field, l)
        .ok_or_else(|| Error::EnumerationCap(format!("q^{l} overflows")))?;
    Ok(irreducibles_in(field, l, 0..n))
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p() && self.field.k() == other.field.k() && self.c == other.c
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p().hash(state);
        self.field.k().hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_var("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.c.iter().map(|&a| f.neg(a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;
    use proptest::prelude::*;

    fn f3() -> Field {
        field_make(3, 1).unwrap()
    }

    fn p(f: &Field, s: &str) -> Poly {
        Poly::parse(f, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f = f3();
        assert_eq!(p(&f, "x^2-1").gcd(&p(&f, "x-1")), p(&f, "x+2"));
        let (q, r) = p(&f, "x^3").divrem(&p(&f, "x-1")).unwrap();
        assert_eq!(q, p(&f, "x^2+x+1"));
        assert_eq!(r, p(&f, "1"));
        let a = p(&f, "x^5+1");
        assert_eq!(a.derivative(), p(&f, "2*x^4"));
        assert!(a.gcd(&a.derivative()).is_one());
        assert_eq!(a.divrem(&Poly::zero(&f)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn squarefree_examples() {
        let f = f3();
        assert!(p(&f, "x^5+1").is_squarefree().unwrap());
        assert!(!p(&f, "(x-1)^2".replace("(x-1)^2", "x^2+x+1").as_str())
            .is_squarefree()
            .unwrap());
        assert!(!p(&f, "x^3-1").is_squarefree().unwrap());
        assert_eq!(Poly::zero(&f).is_squarefree(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_examples() {
        let f = f3();
        let fac = p(&f, "x^3-x").factor().unwrap();
        let lin: Vec<_> = fac.factors.iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(lin, ["x", "x+1", "x+2"]);
        let fac = p(&f, "x^2+1").factor().unwrap();
        assert_eq!(fac.factors, vec![(p(&f, "x^2+1"), 1)]);
        let f9 = field_make(3, 2).unwrap();
        let fac = p(&f9, "x^2-(u)").factor().unwrap();
        assert_eq!(fac.factors.len(), 2);
        // Confirm u is a square in F_9 by exhaustive search.
        assert!(f9.elements().any(|z| f9.mul(z, z) == f9.generator()));
        let fac = p(&f, "x^3-1").factor().unwrap();
        assert_eq!(fac.factors, vec![(p(&f, "x+2"), 3)]);
    }

    #[test]
    fn irreducible_enumeration() {
        let f = f3();
        let l1: Vec<_> = irreducibles(&f, 1).unwrap().map(|g| g.to_string()).collect();
        assert_eq!(l1, ["x", "x+1", "x+2"]);
        // Brute force: monic quadratics with no root in F_3.
        let brute2 = (0..9)
            .map(|i| nth_monic(&f, 2, i))
            .filter(|g| f.elements().all(|z| g.eval(z) != 0))
            .count();
        assert_eq!(brute2, 3);
        assert_eq!(irreducibles(&f, 2).unwrap().count(), brute2);
        // Cubics are irreducible iff rootless.
        let brute3 = (0..27)
            .map(|i| nth_monic(&f, 3, i))
            .filter(|g| f.elements().all(|z| g.eval(z) != 0))
            .count();
        assert_eq!(brute3, 8);
        assert_eq!(irreducibles(&f, 3).unwrap().count(), 8);
        for (q, fld) in [(3u64, f3()), (4, field_make(2, 2).unwrap()), (5, field_make(5, 1).unwrap())] {
            for l in 1..=4usize {
                assert_eq!(
                    irreducibles(&fld, l).unwrap().count() as u128,
                    irreducible_count(q, l as u64),
                    "q={q} l={l}"
                );
            }
        }
        assert!(irreducibles(&f, 0).is_err());
        // Element order.
        let l2: Vec<_> = irreducibles(&f, 2).unwrap().collect();
        assert!(l2.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn roots_examples() {
        let f = f3();
        assert_eq!(p(&f, "x^2-1").roots_in(&f).unwrap(), vec![1, 2]);
        assert!(p(&f, "x^2+1").roots_in(&f).unwrap().is_empty());
        let f9 = field_make(3, 2).unwrap();
        let r: Vec<String> = p(&f, "x^2+1")
            .root_elements(&f9)
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(r, ["u", "2*u"]);
        // Substitution oracle.
        let brute: Vec<u64> = f9
            .elements()
            .filter(|&z| f9.add(f9.mul(z, z), 1) == 0)
            .collect();
        assert_eq!(p(&f, "x^2+1").roots_in(&f9).unwrap(), brute);
        assert!(p(&f9, "x").roots_in(&field_make(3, 3).unwrap()).is_err());
    }

    #[test]
    fn text_form() {
        let f9 = field_make(3, 2).unwrap();
        let a = p(&f9, "(2*u+1)*x^3 - x + (u)");
        assert_eq!(a.to_string(), "(2*u+1)*x^3+2*x+(u)");
        assert_eq!(p(&f9, &a.to_string()), a);
        assert!(matches!(
            Poly::parse(&f9, "x^2 + y"),
            Err(Error::Parse { pos: 6, .. })
        ));
        assert!(Poly::parse(&f3(), "(u)*x").is_err());
    }

    #[test]
    fn characteristic_two_splitting() {
        let f4 = field_make(2, 2).unwrap();
        let g = p(&f4, "x^4+x");
        let fac = g.factor().unwrap();
        // x^4 - x splits completely over F_4.
        assert_eq!(fac.factors.len(), 4);
        assert!(fac.factors.iter().all(|(h, e)| h.degree() == Some(1) && *e == 1));
        let f2 = field_make(2, 1).unwrap();
        let fac = p(&f2, "x^15+1").factor().unwrap();
        let degs: Vec<usize> = fac.factors.iter().map(|(h, _)| h.degree().unwrap()).collect();
        assert_eq!(degs, [1, 2, 4, 4, 4]);
    }

    fn arb_poly(fld: Field) -> impl Strategy<Value = Poly> {
        let q = fld.order();
        prop::collection::vec(0..q, 1..=13).prop_map(move |c| Poly::from_raw(&fld, c))
    }

    fn reassemble(fac: &Factorization, fld: &Field) -> Poly {
        let mut acc = Poly::constant(fld, fac.unit);
        for (g, e) in &fac.factors {
            acc = &acc * &g.pow(*e as u64);
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn factor_reassembles_f3(a in arb_poly(field_make(3, 1).unwrap())) {
            prop_assume!(!a.is_zero());
            let fld = a.field().clone();
            let fac = a.factor().unwrap();
            prop_assert_eq!(reassemble(&fac, &fld), a.clone());
            for (g, _) in &fac.factors {
                prop_assert!(g.is_irreducible());
            }
            prop_assert!(fac.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn factor_reassembles_f4(a in arb_poly(field_make(2, 2).unwrap())) {
            prop_assume!(!a.is_zero());
            let fld = a.field().clone();
            let fac = a.factor().unwrap();
            prop_assert_eq!(reassemble(&fac, &fld), a.clone());
            for (g, _) in &fac.factors {
                prop_assert!(g.is_irreducible());
            }
        }

        #[test]
        fn factor_reassembles_f9(a in arb_poly(field_make(3, 2).unwrap())) {
            prop_assume!(!a.is_zero());
            let fld = a.field().clone();
            let fac = a.factor().unwrap();
            prop_assert_eq!(reassemble(&fac, &fld), a);
            prop_assert_eq!(fac.clone(), a_factor_again(&fac, &fld));
        }

        #[test]
        fn text_round_trips(a in arb_poly(field_make(5, 2).unwrap())) {
            let fld = a.field().clone();
            prop_assert_eq!(Poly::parse(&fld, &a.to_string()).unwrap(), a);
        }
    }

    fn a_factor_again(fac: &Factorization, fld: &Field) -> Factorization {
        reassemble(fac, fld).factor().unwrap()
    }
}
