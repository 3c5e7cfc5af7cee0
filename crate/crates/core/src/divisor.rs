//! Divisors on `K`, principal divisors of coordinate tuples and heights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{BasePlace, CurveModel, FFElement, Place};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Exact nonnegative rational; serialized as `"p/q"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HeightValue(Ratio<i64>);

impl HeightValue {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(HeightValue(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        HeightValue(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || crate::parse::err(0, format!("expected a rational 'p/q', found '{s}'"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 {
            return Err(bad());
        }
        Self::new(n, d)
    }
}

impl std::ops::Add for HeightValue {
    type Output = HeightValue;
    fn add(self, rhs: Self) -> Self {
        HeightValue(self.0 + rhs.0)
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HeightValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        HeightValue::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Finite formal sum of places with nonzero integer coefficients.
#[derive(Clone)]
pub struct Divisor {
    curve: Arc<CurveModel>,
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero(curve: &Arc<CurveModel>) -> Self {
        Divisor {
            curve: curve.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(curve: &Arc<CurveModel>, terms: impl IntoIterator<Item = (Place, i64)>) -> Self {
        let mut d = Self::zero(curve);
        for (p, c) in terms {
            d.add_term(p, c);
        }
        d
    }

    pub fn single(curve: &Arc<CurveModel>, place: Place, coeff: i64) -> Self {
        Self::from_terms(curve, [(place, coeff)])
    }

    pub fn add_term(&mut self, place: Place, coeff: i64) {
        let e = self.terms.entry(place.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn curve(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn coeff(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|(p, &c)| c * p.degree() as i64)
            .sum()
    }

    /// `A >= 0`.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// `self <= other` coefficientwise.
    pub fn le(&self, other: &Divisor) -> bool {
        (other - self).is_effective()
    }

    pub fn scaled(&self, k: i64) -> Divisor {
        Self::from_terms(&self.curve, self.terms.iter().map(|(p, &c)| (p.clone(), k * c)))
    }

    /// Base primes of finite places in the support.
    pub fn finite_primes(&self) -> BTreeSet<Poly> {
        self.terms
            .keys()
            .filter_map(|p| p.base().prime().cloned())
            .collect()
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.curve.same_model(&other.curve) && self.terms == other.terms
    }
}

impl Eq for Divisor {}

impl std::ops::Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &c) in &rhs.terms {
            d.add_term(p.clone(), c);
        }
        d
    }
}

impl std::ops::Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &rhs.scaled(-1)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{c}*{p}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Divisor({self})")
    }
}

fn prime_set(p: &Poly, out: &mut BTreeSet<Poly>) -> Result<()> {
    if !p.is_constant() {
        out.extend(p.distinct_irreducible_factors()?);
    }
    Ok(())
}

/// Primes where some coordinate may have a pole.
fn pole_primes(zs: &[FFElement]) -> Result<BTreeSet<Poly>> {
    let mut out = BTreeSet::new();
    for z in zs {
        for c in z.coeffs() {
            prime_set(c.den(), &mut out)?;
        }
    }
    Ok(out)
}

/// Places outside of which `z` has neither zeros nor poles.
pub fn candidate_places(curve: &Arc<CurveModel>, z: &FFElement) -> Result<Vec<Place>> {
    let mut primes = pole_primes(std::slice::from_ref(z))?;
    let nm = z.norm();
    prime_set(nm.num(), &mut primes)?;
    prime_set(nm.den(), &mut primes)?;
    let mut out = Vec::new();
    for p in &primes {
        out.extend(curve.places_above(p)?.iter().cloned());
    }
    out.extend(curve.infinite_places().iter().cloned());
    Ok(out)
}

/// `(zs) = sum_v min_i ord_v(z_i) v`.
pub fn principal_divisor(curve: &Arc<CurveModel>, zs: &[FFElement]) -> Result<Divisor> {
    if zs.iter().all(|z| z.is_zero()) {
        return Err(Error::ZeroTuple);
    }
    let mut places = BTreeSet::new();
    for z in zs.iter().filter(|z| !z.is_zero()) {
        places.extend(candidate_places(curve, z)?);
    }
    let mut d = Divisor::zero(curve);
    for v in places {
        let o = curve.ord_vector(zs, &v)?;
        d.add_term(v, o);
    }
    Ok(d)
}

/// Degree of the pole divisor of a single element.
pub fn pole_degree(curve: &Arc<CurveModel>, z: &FFElement) -> Result<i64> {
    if z.is_zero() {
        return Ok(0);
    }
    let mut places: Vec<Place> = Vec::new();
    for p in pole_primes(std::slice::from_ref(z))? {
        places.extend(curve.places_above(&p)?.iter().cloned());
    }
    places.extend(curve.infinite_places().iter().cloned());
    let mut total = 0;
    for v in &places {
        let o = curve.ord(z, v)?.unwrap();
        if o < 0 {
            total += -o * v.degree() as i64;
        }
    }
    Ok(total)
}

/// `h(zs) = -deg((zs)) / d(K/k)`.
pub fn height(curve: &Arc<CurveModel>, zs: &[FFElement]) -> Result<HeightValue> {
    let d = principal_divisor(curve, zs)?;
    HeightValue::new(-d.degree(), curve.geometric_degree() as i64)
}

/// `h(1, z)`, via the pole divisor of `z`.
pub fn height_of(curve: &Arc<CurveModel>, z: &FFElement) -> Result<HeightValue> {
    HeightValue::new(pole_degree(curve, z)?, curve.geometric_degree() as i64)
}

/// Pullback of a divisor of `F_q(x)`: `a_w` becomes `a_w e(v/w)` at every `v | w`.
pub fn conorm(curve: &Arc<CurveModel>, base: &[(BasePlace, i64)]) -> Result<Divisor> {
    let mut d = Divisor::zero(curve);
    for (w, a) in base {
        for v in curve.places_above_base(w)? {
            let e = v.e() as i64;
            d.add_term(v, a * e);
        }
    }
    Ok(d)
}

/// `(zs) + A >= 0`; the all-zero tuple lies in every space.
pub fn in_space(curve: &Arc<CurveModel>, zs: &[FFElement], a: &Divisor) -> Result<bool> {
    if zs.iter().all(|z| z.is_zero()) {
        return Ok(true);
    }
    let mut places: BTreeSet<Place> = a.support().cloned().collect();
    for p in pole_primes(zs)? {
        places.extend(curve.places_above(&p)?.iter().cloned());
    }
    places.extend(curve.infinite_places().iter().cloned());
    for v in &places {
        if curve.ord_vector(zs, v)? + a.coeff(v) < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For `zs` in `L_n(A)`, reports `h(zs) <= deg A / d(K/k)`.
pub fn height_bound_check(curve: &Arc<CurveModel>, zs: &[FFElement], a: &Divisor) -> Result<bool> {
    if !in_space(curve, zs, a)? {
        return Err(Error::NotInSpace("(zs) + A is not effective".into()));
    }
    let h = height(curve, zs)?;
    Ok(h <= HeightValue::new(a.degree(), curve.geometric_degree() as i64)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> Arc<CurveModel> {
        CurveModel::from_text(3, 2, "x^5+1").unwrap()
    }

    #[test]
    fn principal_divisor_of_x() {
        let c = setup();
        let x = FFElement::x(&c);
        let d = principal_divisor(&c, std::slice::from_ref(&x)).unwrap();
        assert_eq!(d.degree(), 0);
        let inf = c.infinite_places()[0].clone();
        assert_eq!(d.coeff(&inf), -2);
        assert_eq!(d.terms().filter(|(_, k)| *k == 1).count(), 2);
        let d1 = principal_divisor(&c, &[FFElement::one(&c), x]).unwrap();
        assert_eq!(d1, Divisor::single(&c, inf, -2));
        assert!(principal_divisor(&c, &[FFElement::constant(&c, 2)]).unwrap().is_zero());
    }

    #[test]
    fn height_examples() {
        let c = setup();
        let one = FFElement::one(&c);
        let h = |z: FFElement| height(&c, &[one.clone(), z]).unwrap().to_string();
        assert_eq!(h(FFElement::x(&c)), "1/1");
        assert_eq!(h(FFElement::y(&c)), "5/2");
        assert_eq!(h(FFElement::constant(&c, 2)), "0/1");
    }

    #[test]
    fn conorm_examples() {
        let c = setup();
        let fq = c.field().clone();
        let px = Poly::parse(&fq, "x").unwrap();
        let px1 = Poly::parse(&fq, "x+1").unwrap();
        let d = conorm(&c, &[(BasePlace::Finite(px), 1)]).unwrap();
        assert_eq!(d.terms().map(|(_, k)| k).collect::<Vec<_>>(), [1, 1]);
        let d = conorm(&c, &[(BasePlace::Finite(px1), 1)]).unwrap();
        assert_eq!(d.terms().map(|(_, k)| k).collect::<Vec<_>>(), [2]);
    }

    #[test]
    fn bound_check_examples() {
        let c = setup();
        let inf = c.infinite_places()[0].clone();
        let one = FFElement::one(&c);
        let a2 = Divisor::single(&c, inf.clone(), 2);
        assert!(height_bound_check(&c, &[one.clone(), FFElement::x(&c)], &a2).unwrap());
        let zero = Divisor::zero(&c);
        assert!(height_bound_check(&c, &[one.clone(), FFElement::constant(&c, 1)], &zero).unwrap());
        let a5 = Divisor::single(&c, inf.clone(), 5);
        assert!(height_bound_check(&c, &[one.clone(), FFElement::y(&c)], &a5).unwrap());
        let a1 = Divisor::single(&c, inf, 1);
        assert!(matches!(
            height_bound_check(&c, &[one, FFElement::x(&c)], &a1),
            Err(Error::NotInSpace(_))
        ));
    }

    #[test]
    fn height_text() {
        let h = HeightValue::parse("6/4").unwrap();
        assert_eq!(h.to_string(), "3/2");
        assert_eq!(HeightValue::integer(2).to_string(), "2/1");
        assert!(HeightValue::parse("1.5").is_err());
    }
}
