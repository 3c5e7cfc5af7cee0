//! Finite fields `F_p` and `F_{p^k}`.
//!
//! An element of `F_{p^k} = F_p[u]/(modulus)` is stored as the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` built from its coefficient tuple.
//! Numeric order on that integer is the element order used for every
//! tie-break in the crate, and `0` and `1` are the field's zero and one.
//!
//! The modulus of `F_{p^k}` is the monic irreducible of degree `k` whose
//! coefficient tuple is smallest in that same order. Subfields are related
//! through explicit [`Embedding`]s rather than compatible moduli.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::parse;
use crate::poly::Poly;

/// Degree cap accepted by [`field_make`].
pub const MAX_PUBLIC_DEGREE: usize = 16;
/// Order cap accepted by [`field_make`].
pub const MAX_PUBLIC_ORDER: u64 = 1 << 40;
/// Order cap for internally constructed residue fields.
pub const MAX_INTERNAL_ORDER: u64 = 1 << 62;

pub type Field = Arc<FieldCtx>;

#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u64>,
    order: u64,
}

static FIELDS: LazyLock<Mutex<HashMap<(u64, usize), Field>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static EMBEDDINGS: LazyLock<Mutex<HashMap<(u64, usize, usize), Arc<Embedding>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits a prime power `q` into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut r, mut k) = (q, 0usize);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1 && is_prime(p)).then_some((p, k))
}

fn checked_order(p: u64, k: usize, cap: u64) -> Option<u64> {
    let mut o: u64 = 1;
    for _ in 0..k {
        o = o.checked_mul(p)?;
        if o > cap {
            return None;
        }
    }
    Some(o)
}

/// Builds `F_{p^k}` with the deterministic modulus, within the desk-scale caps
/// `k <= 16` and `p^k <= 2^40`.
pub fn field_make(p: u64, k: usize) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || k > MAX_PUBLIC_DEGREE || checked_order(p, k, MAX_PUBLIC_ORDER).is_none() {
        return Err(Error::FieldCap(format!(
            "F_{{{p}^{k}}} exceeds k <= {MAX_PUBLIC_DEGREE}, p^k <= 2^40"
        )));
    }
    field(p, k)
}

/// Like [`field_make`] but only bounded by `p^k <= 2^62`; used for residue fields.
pub fn field(p: u64, k: usize) -> Result<Field> {
    if let Some(f) = FIELDS.lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = match (k > 0).then(|| checked_order(p, k, MAX_INTERNAL_ORDER)).flatten() {
        Some(o) => o,
        None => {
            return Err(Error::FieldCap(format!(
                "F_{{{p}^{k}}} exceeds the internal order cap 2^62"
            )))
        }
    };
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        smallest_irreducible(p, k)?
    };
    let ctx = Arc::new(FieldCtx {
        p,
        k,
        modulus,
        order,
    });
    Ok(FIELDS
        .lock()
        .unwrap()
        .entry((p, k))
        .or_insert(ctx)
        .clone())
}

fn smallest_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
    let fp = field(p, 1)?;
    let count = checked_order(p, k, MAX_INTERNAL_ORDER).unwrap();
    for tail in 0..count {
        let mut c = Vec::with_capacity(k + 1);
        let mut t = tail;
        for _ in 0..k {
            c.push(t % p);
            t /= p;
        }
        if c[0] == 0 {
            continue;
        }
        c.push(1);
        let cand = Poly::from_raw(&fp, c.clone());
        if cand.is_irreducible() {
            return Ok(c);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    if p < (1 << 32) {
        a * b % p
    } else {
        ((a as u128 * b as u128) % p as u128) as u64
    }
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// The class of `u` (for `k = 1` the modulus is `x`, so this is `0`).
    pub fn generator(&self) -> u64 {
        if self.k == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn from_int(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn digits(&self, mut a: u64, out: &mut [u64]) {
        for d in out.iter_mut().take(self.k) {
            *d = a % self.p;
            a /= self.p;
        }
    }

    #[inline]
    pub fn undigits(&self, d: &[u64]) -> u64 {
        d[..self.k]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }

    pub fn to_digits(&self, a: u64) -> Vec<u64> {
        let mut d = vec![0; self.k];
        self.digits(a, &mut d);
        d
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        if self.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut r, mut scale) = (0u64, 1u64);
        while a > 0 || b > 0 {
            let s = a % p + b % p;
            r += if s >= p { s - p } else { s } * scale;
            a /= p;
            b /= p;
            scale = scale.wrapping_mul(p);
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let p = self.p;
        if self.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let (mut a, mut r, mut scale) = (a, 0u64, 1u64);
        while a > 0 {
            let d = a % p;
            r += if d == 0 { 0 } else { p - d } * scale;
            a /= p;
            scale = scale.wrapping_mul(p);
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return if a >= b { a - b } else { a + self.p - b };
        }
        self.add(a, self.neg(b))
    }

    /// Multiplies an element by a prime-field scalar `s < p`.
    #[inline]
    pub fn scale(&self, s: u64, a: u64) -> u64 {
        if self.k == 1 {
            return mulm(s, a, self.p);
        }
        let mut d = [0u64; 64];
        self.digits(a, &mut d);
        for x in d.iter_mut().take(self.k) {
            *x = mulm(*x, s, self.p);
        }
        self.undigits(&d)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (p, k) = (self.p, self.k);
        if k == 1 {
            return mulm(a, b, p);
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let mut da = [0u64; 64];
        let mut db = [0u64; 64];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = [0u64; 128];
        if p < (1 << 16) {
            for i in 0..k {
                if da[i] == 0 {
                    continue;
                }
                for j in 0..k {
                    prod[i + j] += da[i] * db[j];
                }
            }
            for x in prod.iter_mut().take(2 * k - 1) {
                *x %= p;
            }
        } else {
            for i in 0..k {
                for j in 0..k {
                    prod[i + j] = (prod[i + j] + mulm(da[i], db[j], p)) % p;
                }
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let mj = self.modulus[j];
                if mj != 0 {
                    prod[i - k + j] = (prod[i - k + j] + mulm(t, p - mj, p)) % p;
                }
            }
        }
        self.undigits(&prod[..k])
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: u64, e: &BigUint) -> u64 {
        let mut acc = 1u64;
        for i in (0..e.bits()).rev() {
            acc = self.mul(acc, acc);
            if e.bit(i) {
                acc = self.mul(acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^(p^times)`.
    pub fn frobenius(&self, a: u64, times: usize) -> u64 {
        (0..times % self.k).fold(a, |x, _| self.pow(x, self.p))
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    /// Text form: bare integer in a prime field, otherwise a polynomial in `u`.
    pub fn format(&self, a: u64) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let d = self.to_digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}*u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}*u^{i}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// Reads the text form produced by [`FieldCtx::format`]; `base` offsets error positions.
    pub fn parse_at(&self, s: &str, base: usize) -> Result<u64> {
        let mut acc = 0u64;
        let u = self.generator();
        for t in parse::terms(s, 'u', base)? {
            let c = match t.coeff {
                Some((text, at)) if text.contains('u') || text.contains('(') => {
                    self.parse_at(text, at)?
                }
                Some((text, at)) => parse::int_mod(text, at, self.p)?,
                None => 1,
            };
            if self.k == 1 && t.exp > 0 {
                return Err(parse::err(base, "'u' is not defined in a prime field"));
            }
            let v = self.mul(c, self.pow(u, t.exp));
            acc = if t.negative {
                self.sub(acc, v)
            } else {
                self.add(acc, v)
            };
        }
        Ok(acc)
    }

    pub fn parse(&self, s: &str) -> Result<u64> {
        self.parse_at(s, 0)
    }
}

/// A field element that carries its field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    raw: u64,
}

/// Arithmetic selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Field, raw: u64) -> Self {
        assert!(raw < field.order, "raw value out of range");
        FieldElement {
            field: field.clone(),
            raw,
        }
    }

    pub fn from_int(field: &Field, v: i64) -> Self {
        Self::new(field, field.from_int(v))
    }

    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        Ok(Self::new(field, field.parse(s)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn coefficients(&self) -> Vec<u64> {
        self.field.to_digits(self.raw)
    }

    fn same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.same(other)?;
        let f = &self.field;
        let raw = match op {
            ArithOp::Add => f.add(self.raw, other.raw),
            ArithOp::Sub => f.sub(self.raw, other.raw),
            ArithOp::Mul => f.mul(self.raw, other.raw),
            ArithOp::Div => f.div(self.raw, other.raw).ok_or(Error::DivisionByZero)?,
        };
        Ok(Self::new(f, raw))
    }

    pub fn pow(&self, e: u64) -> Self {
        Self::new(&self.field, self.field.pow(self.raw, e))
    }

    pub fn inv(&self) -> Result<Self> {
        let r = self.field.inv(self.raw).ok_or(Error::DivisionByZero)?;
        Ok(Self::new(&self.field, r))
    }

    pub fn frobenius(&self, times: usize) -> Self {
        Self::new(&self.field, self.field.frobenius(self.raw, times))
    }
}

pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    a.arith(b, op)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.field.k == other.field.k && self.raw == other.raw
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.p, self.field.k, self.raw).cmp(&(other.field.p, other.field.k, other.raw))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.raw))
    }
}

/// The field map `F_{p^k} -> F_{p^K}` sending `u` to the smallest root of the
/// source modulus in the target.
#[derive(Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    /// Images of `1, u, ..., u^{k-1}`.
    images: Vec<u64>,
}

impl Embedding {
    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    #[inline]
    pub fn apply(&self, a: u64) -> u64 {
        if self.src.k == 1 {
            return a;
        }
        let mut d = [0u64; 64];
        self.src.digits(a, &mut d);
        let mut acc = 0;
        for (i, &c) in d.iter().enumerate().take(self.src.k) {
            if c != 0 {
                acc = self.dst.add(acc, self.dst.scale(c, self.images[i]));
            }
        }
        acc
    }

    /// Image of `u`.
    pub fn generator_image(&self) -> u64 {
        self.images.get(1).copied().unwrap_or(0)
    }
}

pub fn embedding(src: &Field, dst: &Field) -> Result<Arc<Embedding>> {
    if src.p != dst.p || !dst.k.is_multiple_of(src.k) {
        return Err(Error::DegreeMismatch(format!(
            "F_{{{}^{}}} does not embed in F_{{{}^{}}}",
            src.p, src.k, dst.p, dst.k
        )));
    }
    let key = (src.p, src.k, dst.k);
    if let Some(e) = EMBEDDINGS.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let images = if src.k == 1 {
        vec![1]
    } else if src.k == dst.k {
        (0..src.k).map(|i| dst.pow(dst.generator(), i as u64)).collect()
    } else {
        let fp = field(src.p, 1)?;
        let m = Poly::from_raw(&fp, src.modulus.clone());
        let roots = m.roots_in(dst)?;
        let r = roots[0];
        (0..src.k).map(|i| dst.pow(r, i as u64)).collect()
    };
    let e = Arc::new(Embedding {
        src: src.clone(),
        dst: dst.clone(),
        images,
    });
    Ok(EMBEDDINGS
        .lock()
        .unwrap()
        .entry(key)
        .or_insert(e)
        .clone())
}

pub fn embed(a: &FieldElement, target: &Field) -> Result<FieldElement> {
    let e = embedding(&a.field, target)?;
    Ok(FieldElement::new(target, e.apply(a.raw)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &Field, s: &str) -> FieldElement {
        FieldElement::parse(f, s).unwrap()
    }

    #[test]
    fn deterministic_moduli() {
        let f3 = field_make(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        let f9 = field_make(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(Arc::ptr_eq(&f9, &field_make(3, 2).unwrap()));
        assert_eq!(field_make(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(field_make(3, 17), Err(Error::FieldCap(_))));
        assert!(matches!(field_make(2, 41), Err(Error::FieldCap(_))));
    }

    #[test]
    fn modulus_matches_enumeration_oracle() {
        // First monic quadratic over F_3 (in element order) without roots.
        let mut first = None;
        'outer: for t in 0..9u64 {
            let (c0, c1) = (t % 3, t / 3);
            for r in 0..3u64 {
                if (r * r + c1 * r + c0) % 3 == 0 {
                    continue 'outer;
                }
            }
            first = Some(vec![c0, c1, 1]);
            break;
        }
        assert_eq!(field_make(3, 2).unwrap().modulus(), first.unwrap().as_slice());
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = field_make(3, 1).unwrap();
        let two = el(&f3, "2");
        assert_eq!(two.arith(&two, ArithOp::Add).unwrap(), el(&f3, "1"));
        let f9 = field_make(3, 2).unwrap();
        let u = el(&f9, "u");
        let two_u = el(&f9, "2*u");
        assert_eq!(u.arith(&two_u, ArithOp::Mul).unwrap(), el(&f9, "1"));
        let f5 = field_make(5, 1).unwrap();
        assert_eq!(
            el(&f5, "3").arith(&el(&f5, "4"), ArithOp::Div).unwrap(),
            el(&f5, "2")
        );
        assert_eq!(
            el(&f5, "3").arith(&el(&f5, "0"), ArithOp::Div).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(
            el(&f5, "3").arith(&u, ArithOp::Add).unwrap_err(),
            Error::FieldMismatch
        );
    }

    #[test]
    fn frobenius_examples() {
        let f3 = field_make(3, 1).unwrap();
        for a in f3.elements() {
            assert_eq!(f3.frobenius(a, 1), a);
        }
        let f9 = field_make(3, 2).unwrap();
        let u = el(&f9, "u");
        assert_eq!(u.frobenius(2), u);
        // u^3 = u * u^2 = -u.
        assert_eq!(u.frobenius(1), el(&f9, "2*u"));
    }

    #[test]
    fn text_round_trip() {
        let f27 = field_make(3, 3).unwrap();
        for a in f27.elements() {
            let s = f27.format(a);
            assert_eq!(f27.parse(&s).unwrap(), a, "{s}");
        }
        assert_eq!(f27.format(1 + 2 * 3), "2*u+1");
        assert_eq!(f27.parse("u^3").unwrap(), f27.pow(f27.generator(), 3));
        assert_eq!(f27.parse("-1").unwrap(), 2);
    }

    #[test]
    fn embeddings() {
        let f3 = field_make(3, 1).unwrap();
        let f9 = field_make(3, 2).unwrap();
        let f81 = field_make(3, 4).unwrap();
        let two = el(&f3, "2");
        assert_eq!(embed(&two, &f9).unwrap().raw(), 2);
        for a in f3.elements() {
            let a = FieldElement::new(&f3, a);
            let twice = embed(&embed(&a, &f9).unwrap(), &f81).unwrap();
            assert_eq!(twice, embed(&a, &f81).unwrap());
        }
        // Image of u is the smallest root of x^2 + 1 in F_81, found by scanning.
        let smallest = f81
            .elements()
            .find(|&z| f81.add(f81.mul(z, z), 1) == 0)
            .unwrap();
        assert_eq!(embed(&el(&f9, "u"), &f81).unwrap().raw(), smallest);
        // Embedding is a ring map.
        let e = embedding(&f9, &f81).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(e.apply(f9.mul(a, b)), f81.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(f9.add(a, b)), f81.add(e.apply(a), e.apply(b)));
            }
        }
        assert!(embedding(&f9, &field_make(3, 3).unwrap()).is_err());
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(1024), Some((2, 10)));
    }
}
