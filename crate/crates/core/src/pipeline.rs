//! Admissible divisors and certified small generators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveModel, FFElement, Place};
use crate::divisor::{height, height_of, in_space, Divisor, HeightValue};
use crate::error::{Error, Result};
use crate::gf::{field, Field};
use crate::poly::{monic_count, nth_monic, Poly};
use crate::rr::rr_space;
use crate::surd::PlaceCountBound;

/// Largest number of monic polynomials a single degree scan may visit.
pub const SCAN_CAP: u64 = 1 << 32;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads for the degree scan; `0` lets rayon decide.
    pub workers: usize,
    /// How far past `g + 1` the ladder climbs before the greedy fallback.
    pub delta: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { workers: 0, delta: 8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rung {
    Primary,
    Extended,
    Greedy,
}

impl fmt::Display for Rung {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rung::Primary => "primary",
            Rung::Extended => "extended",
            Rung::Greedy => "greedy",
        };
        f.write_str(s)
    }
}

/// One degree of the place search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStep {
    pub l: usize,
    pub scanned: u64,
    pub hit: bool,
}

/// A sum of distinct places, each with multiplicity one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleDivisor {
    divisor: Divisor,
}

impl AdmissibleDivisor {
    /// Wraps the divisor without checking it; see [`admissible_check`].
    pub fn from_divisor(divisor: Divisor) -> Self {
        AdmissibleDivisor { divisor }
    }

    pub fn from_places(curve: &Arc<CurveModel>, places: &[Place]) -> Self {
        let mut d = Divisor::zero(curve);
        for v in places {
            d.add_term(v.clone(), 1);
        }
        AdmissibleDivisor { divisor: d }
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn places(&self) -> Vec<Place> {
        self.divisor.support().cloned().collect()
    }

    pub fn degree(&self) -> i64 {
        self.divisor.degree()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Multiplicity one, at most one place above each base place and residue
/// degree one everywhere.
pub fn admissible_check(curve: &Arc<CurveModel>, a: &AdmissibleDivisor) -> AdmissibilityReport {
    let mut violations = Vec::new();
    if !curve.same_model(a.divisor.curve()) {
        violations.push("divisor lives on a different curve".to_string());
    }
    let mut prev: Option<&Place> = None;
    for (v, c) in a.divisor.terms() {
        if c != 1 {
            violations.push(format!("{v} has multiplicity {c}"));
        }
        if let Some(u) = prev.filter(|u| u.base() == v.base()) {
            violations.push(format!("{u} and {v} lie above the same base place"));
        }
        if v.f_res() != 1 {
            violations.push(format!("{v} has residue degree {} over its base", v.f_res()));
        }
        prev = Some(v);
    }
    AdmissibilityReport {
        ok: violations.is_empty(),
        violations,
    }
}

fn power_residue(curve: &CurveModel, p: &Poly, big_q: &BigUint) -> bool {
    let r = curve.f().rem(p);
    if r.is_zero() {
        return false;
    }
    let m = BigUint::from(curve.m());
    let qm1 = big_q - 1u32;
    let g = num_integer::Integer::gcd(&m, &qm1);
    r.pow_mod_big(&(qm1 / g), p).is_one()
}

fn first_unit_place(curve: &CurveModel, p: &Poly) -> Result<Option<Place>> {
    let places = curve.places_above(p)?;
    Ok(places.iter().find(|v| v.f_res() == 1).cloned())
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
}

/// First place of degree `l` with residue degree one: ramified factors of `f`
/// first, then a scan of monic irreducibles in enumeration order.
pub fn find_admissible_place(
    curve: &Arc<CurveModel>,
    l: usize,
    opts: &SearchOptions,
) -> Result<(Option<Place>, SearchStep)> {
    if l == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    let fq = curve.field();
    for p in curve.f().distinct_irreducible_factors()? {
        if p.degree() == Some(l) {
            let v = curve.places_above(&p)?[0].clone();
            return Ok((Some(v), SearchStep { l, scanned: 0, hit: true }));
        }
    }
    let count = monic_count(fq, l)
        .filter(|&c| c <= SCAN_CAP)
        .ok_or_else(|| Error::EnumerationCap(format!("q^{l} monic polynomials of degree {l}")))?;
    // residue fields of degree l must be representable
    field(fq.p(), fq.k() * l)?;
    let big_q = BigUint::from(fq.order()).pow(l as u32);
    let test = |idx: u64| -> Option<(u64, Poly)> {
        let p = nth_monic(fq, l, idx);
        if l > 1 && p.coeff(0) == 0 {
            return None;
        }
        if !p.is_irreducible() || !power_residue(curve, &p, &big_q) {
            return None;
        }
        Some((idx, p))
    };
    let hit = thread_pool(opts.workers)?.install(|| (0..count).into_par_iter().find_map_first(test));
    match hit {
        Some((idx, p)) => {
            let v = first_unit_place(curve, &p)?.ok_or_else(|| {
                Error::Invalid(format!("power residue test passed but no rational branch above {p}"))
            })?;
            Ok((Some(v), SearchStep { l, scanned: idx + 1, hit: true }))
        }
        None => Ok((None, SearchStep { l, scanned: count, hit: false })),
    }
}

/// Castelnuovo lower bound `g / (d (d - 1)) + 1 / d` on the height of a
/// generator over a rational base.
pub fn castelnuovo_lower_bound(genus: usize, geometric_degree: usize) -> Result<HeightValue> {
    let d = geometric_degree as i64;
    if d < 2 {
        return Err(Error::Invalid("the bound needs d(K/k) >= 2".into()));
    }
    Ok(HeightValue::new(genus as i64, d * (d - 1))? + HeightValue::new(1, d)?)
}

/// Lower bound on the number of degree `l` places with residue degree one,
/// for `K` over a rational base with constant field `F_q`.
pub fn place_count_lower_bound(curve: &CurveModel, l: usize) -> PlaceCountBound {
    PlaceCountBound::new(
        curve.field().order(),
        l as u64,
        curve.genus() as u64,
        0,
        1,
        curve.m() as u64,
    )
}

/// Finite places of degree `d` (and, last, rational infinite places) with
/// residue degree one, accumulated until `deg A >= g + 1`.
fn greedy_divisor(curve: &Arc<CurveModel>, max_degree: usize) -> Result<Option<Vec<Place>>> {
    let need = curve.genus() + 1;
    let fq: &Field = curve.field();
    let mut chosen: Vec<Place> = Vec::new();
    let mut total = 0;
    for d in 1..=max_degree {
        let Some(count) = monic_count(fq, d).filter(|&c| c <= SCAN_CAP) else {
            break;
        };
        let big_q = BigUint::from(fq.order()).pow(d as u32);
        for idx in 0..count {
            let p = nth_monic(fq, d, idx);
            if (d > 1 && p.coeff(0) == 0) || !p.is_irreducible() {
                continue;
            }
            let ramified = curve.f().rem(&p).is_zero();
            if !ramified && !power_residue(curve, &p, &big_q) {
                continue;
            }
            if let Some(v) = first_unit_place(curve, &p)? {
                chosen.push(v);
                total += d;
                if total >= need {
                    return Ok(Some(chosen));
                }
            }
        }
    }
    if let Some(v) = curve.infinite_places().iter().find(|v| v.degree() == 1) {
        chosen.push(v.clone());
        total += 1;
        if total >= need {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct GeneratorCertificate {
    pub curve: Arc<CurveModel>,
    pub alpha: FFElement,
    pub admissible: AdmissibleDivisor,
    pub divisor_degree: i64,
    pub genus: usize,
    pub geometric_degree: usize,
    pub height: HeightValue,
    pub upper_bound: HeightValue,
    pub lower_bound: HeightValue,
    pub minpoly: String,
    pub minpoly_degree: usize,
    pub rung: Rung,
    pub search_log: Vec<SearchStep>,
}

/// Picks the nonconstant basis element of `L(A)` of least height; ties go to
/// the earlier basis element.
fn best_element(curve: &Arc<CurveModel>, a: &AdmissibleDivisor) -> Result<(FFElement, HeightValue)> {
    let space = rr_space(curve, a.divisor())?;
    let mut best: Option<(FFElement, HeightValue)> = None;
    for z in space.basis() {
        if z.as_constant().is_some() {
            continue;
        }
        let h = height_of(curve, z)?;
        if best.as_ref().is_none_or(|(_, bh)| h < *bh) {
            best = Some((z.clone(), h));
        }
    }
    best.ok_or_else(|| Error::SearchExhausted(format!("L({}) has no nonconstant element", a.divisor())))
}

/// Builds a certificate for a small generator of `K`.
pub fn small_generator(curve: &Arc<CurveModel>, opts: &SearchOptions) -> Result<GeneratorCertificate> {
    let g = curve.genus();
    let first = g + 1;
    let mut log = Vec::new();
    let mut found: Option<(Vec<Place>, Rung)> = None;
    for l in first..=first + opts.delta {
        match find_admissible_place(curve, l, opts) {
            Ok((hit, step)) => {
                log.push(step);
                if let Some(v) = hit {
                    let rung = if l == first { Rung::Primary } else { Rung::Extended };
                    found = Some((vec![v], rung));
                    break;
                }
            }
            Err(Error::EnumerationCap(_)) | Err(Error::FieldCap(_)) => break,
            Err(e) => return Err(e),
        }
    }
    if found.is_none() {
        if let Some(places) = greedy_divisor(curve, first + opts.delta)? {
            found = Some((places, Rung::Greedy));
        }
    }
    let (places, rung) = found.ok_or_else(|| {
        Error::SearchExhausted(format!(
            "no admissible divisor found for degrees {first}..={}",
            first + opts.delta
        ))
    })?;
    let admissible = AdmissibleDivisor::from_places(curve, &places);
    let (alpha, h) = best_element(curve, &admissible)?;
    let mp = alpha.minimal_polynomial();
    let m = curve.geometric_degree();
    Ok(GeneratorCertificate {
        curve: curve.clone(),
        divisor_degree: admissible.degree(),
        upper_bound: HeightValue::new(admissible.degree(), m as i64)?,
        lower_bound: castelnuovo_lower_bound(g, m)?,
        admissible,
        alpha,
        genus: g,
        geometric_degree: m,
        height: h,
        minpoly: mp.to_string(),
        minpoly_degree: mp.degree(),
        rung,
        search_log: log,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    fn push(&mut self, name: &str, ok: bool, detail: String) {
        self.items.push(CheckItem {
            name: name.to_string(),
            ok,
            detail,
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.items {
            writeln!(f, "{} {}: {}", if i.ok { "ok  " } else { "FAIL" }, i.name, i.detail)?;
        }
        Ok(())
    }
}

/// Recomputes every claim of the certificate.
pub fn verify_certificate(curve: &Arc<CurveModel>, cert: &GeneratorCertificate) -> Result<VerificationReport> {
    let mut rep = VerificationReport { items: Vec::new() };
    let same = curve.same_model(&cert.curve) && curve.field().order() == cert.curve.field().order();
    rep.push("curve", same, format!("y^{} = {}", curve.m(), curve.f()));
    if !same {
        return Ok(rep);
    }
    rep.push(
        "genus",
        cert.genus == curve.genus(),
        format!("claimed {}, computed {}", cert.genus, curve.genus()),
    );
    let m = curve.geometric_degree();
    rep.push(
        "geometric_degree",
        cert.geometric_degree == m,
        format!("claimed {}, computed {m}", cert.geometric_degree),
    );
    let adm = admissible_check(curve, &cert.admissible);
    let detail = if adm.ok {
        format!("{}", cert.admissible.divisor())
    } else {
        adm.violations.join("; ")
    };
    rep.push("admissible", adm.ok, detail);
    let deg = cert.admissible.degree();
    rep.push(
        "degree",
        deg > curve.genus() as i64,
        format!("deg A = {deg} > g = {}", curve.genus()),
    );
    rep.push(
        "divisor_degree",
        cert.divisor_degree == deg,
        format!("claimed {}, computed {deg}", cert.divisor_degree),
    );
    let one = FFElement::one(curve);
    let tuple = [one, cert.alpha.clone()];
    let member = in_space(curve, &tuple, cert.admissible.divisor())?;
    rep.push("membership", member, format!("(1, alpha) in L_2(A): {member}"));
    let mp = cert.alpha.minimal_polynomial();
    let mp_ok = mp.degree() == m && cert.minpoly_degree == mp.degree() && cert.minpoly == mp.to_string();
    rep.push(
        "minpoly",
        mp_ok,
        format!("computed {mp} of degree {}, claimed degree {}", mp.degree(), cert.minpoly_degree),
    );
    let h = height(curve, &tuple)?;
    rep.push("height", h == cert.height, format!("claimed {}, computed {h}", cert.height));
    let upper = HeightValue::new(deg, m as i64)?;
    rep.push(
        "upper_bound",
        cert.upper_bound == upper && h <= upper,
        format!("h = {h} <= deg A / d = {upper} (claimed {})", cert.upper_bound),
    );
    let lower = castelnuovo_lower_bound(curve.genus(), m)?;
    rep.push(
        "lower_bound",
        cert.lower_bound == lower && lower <= h,
        format!("Castelnuovo bound {lower} <= h = {h} (claimed {})", cert.lower_bound),
    );
    Ok(rep)
}
