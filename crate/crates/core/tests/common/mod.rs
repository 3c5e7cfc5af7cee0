#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smallgen::curve::{BasePlace, CurveModel, FFElement, Place};
use smallgen::divisor::{height, principal_divisor, Divisor, HeightValue};
use smallgen::oracle::{count_places_exhaustive, rr_dim_exhaustive};
use smallgen::pipeline::{
    admissible_check, castelnuovo_lower_bound, place_count_lower_bound, small_generator, verify_certificate,
    GeneratorCertificate, SearchOptions,
};
use smallgen::poly::{irreducibles, Poly};
use smallgen::ratfunc::RationalFunction;
use smallgen::report::{to_json, CertificateDoc};
use smallgen::rr::{rr_dim, rr_space};
use smallgen::surd::weil_total_holds;

/// Pinned desk-scale battery: `(q, m, f)`.
pub const BATTERY: [(u64, usize, &str); 30] = [
    (3, 2, "x^5+1"),
    (3, 2, "x^3+2*x+1"),
    (3, 2, "x^4+x+2"),
    (3, 2, "x^6+x+2"),
    (3, 2, "2*x^7+x+2"),
    (5, 2, "x^3+x+1"),
    (5, 2, "x^4+2"),
    (5, 2, "2*x^5+x+3"),
    (5, 2, "x^6+x^2+4"),
    (5, 2, "3*x^7+2*x+1"),
    (5, 3, "x^3+x+1"),
    (5, 3, "x^4+2*x+1"),
    (5, 3, "2*x^5+x+1"),
    (5, 3, "x^6+x+2"),
    (5, 3, "x^3+2"),
    (7, 2, "x^3+3"),
    (7, 2, "x^4+x+5"),
    (7, 2, "x^5+2*x+1"),
    (7, 2, "x^6+3*x^3+1"),
    (7, 2, "3*x^7+x+1"),
    (7, 3, "x^3+x+4"),
    (7, 3, "x^4+2"),
    (7, 3, "x^5+x+3"),
    (7, 3, "x^6+5"),
    (7, 3, "x^7+x+1"),
    (9, 2, "x^3+(u)*x+1"),
    (9, 2, "x^4+(u)"),
    (9, 2, "x^5+x+(u+1)"),
    (9, 2, "x^6+(2*u)*x+1"),
    (9, 2, "x^7+x^3+(u)"),
];

pub type Check = Result<(), String>;

pub fn curve(q: u64, m: usize, f: &str) -> Arc<CurveModel> {
    CurveModel::from_text(q, m, f).unwrap_or_else(|e| panic!("y^{m} = {f} over F_{q}: {e}"))
}

pub fn battery() -> Vec<Arc<CurveModel>> {
    BATTERY.iter().map(|&(q, m, f)| curve(q, m, f)).collect()
}

pub fn name(c: &CurveModel) -> String {
    format!("y^{} = {} over F_{}", c.m(), c.f(), c.field().order())
}

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

pub fn random_poly(c: &CurveModel, rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    let q = c.field().order();
    Poly::from_raw(c.field(), (0..=deg).map(|_| rng.random_range(0..q)).collect())
}

pub fn random_rational(c: &CurveModel, rng: &mut ChaCha8Rng, deg: usize) -> RationalFunction {
    loop {
        let den = random_poly(c, rng, deg);
        if !den.is_zero() {
            return RationalFunction::new(random_poly(c, rng, deg), den).unwrap();
        }
    }
}

/// Nonzero `(sum_b w_b y^b) / B` with `deg w_b, deg B <= deg`.
pub fn random_element(c: &Arc<CurveModel>, rng: &mut ChaCha8Rng, deg: usize) -> FFElement {
    loop {
        let parts: Vec<Poly> = (0..c.m()).map(|_| random_poly(c, rng, deg)).collect();
        let den = random_poly(c, rng, deg);
        if den.is_zero() || parts.iter().all(|w| w.is_zero()) {
            continue;
        }
        return FFElement::from_polys(c, &parts, &den).unwrap();
    }
}

/// Places of degree at most `d` (finite, by base degree) and all infinite places.
pub fn small_places(c: &Arc<CurveModel>, d: usize) -> Vec<Place> {
    let mut out = Vec::new();
    for k in 1..=d {
        for p in irreducibles(c.field(), k).unwrap() {
            out.extend(c.places_above(&p).unwrap().iter().cloned());
        }
    }
    out.extend(c.infinite_places().iter().cloned());
    out
}

pub fn certify(c: &Arc<CurveModel>, workers: usize) -> Result<GeneratorCertificate, String> {
    small_generator(c, &SearchOptions { workers, delta: 8 }).map_err(|e| format!("{}: {e}", name(c)))
}

/// Sandwich instance `y^2 = x^5 + 1` over `F_3`.
pub fn check_sandwich() -> Check {
    let start = std::time::Instant::now();
    let c = curve(3, 2, "x^5+1");
    // genus from dimensions: l(N inf) = 2N + 1 - g for large N
    let big = Divisor::single(&c, c.infinite_places()[0].clone(), 10);
    let g_from_rr = 10 + 1 - rr_dim(&c, &big).map_err(|e| e.to_string())? as i64;
    if c.genus() != 2 || g_from_rr != 2 {
        return Err(format!("genus {} / {g_from_rr}, expected 2", c.genus()));
    }
    let cubics = count_places_exhaustive(&c, 3).map_err(|e| e.to_string())?;
    let irreducible_cubics = irreducibles(c.field(), 3).unwrap().count();
    if irreducible_cubics != 8 {
        return Err(format!("{irreducible_cubics} irreducible cubics"));
    }
    if cubics.fres1 == 0 {
        return Err("no admissible degree 3 place exists".into());
    }
    let cert = certify(&c, 0)?;
    let three_halves = HeightValue::new(3, 2).unwrap();
    if cert.height != three_halves || cert.upper_bound != three_halves || cert.lower_bound != three_halves {
        return Err(format!(
            "height {} upper {} lower {}",
            cert.height, cert.upper_bound, cert.lower_bound
        ));
    }
    let best = smallgen::oracle::min_generator_exhaustive(&c, three_halves)
        .map_err(|e| e.to_string())?
        .ok_or("no generator below 3/2")?;
    if best.height != three_halves {
        return Err(format!("exhaustive minimum {}", best.height));
    }
    if smallgen::oracle::min_generator_exhaustive(&c, HeightValue::new(1, 1).unwrap())
        .map_err(|e| e.to_string())?
        .is_some()
    {
        return Err("a generator of height at most 1 exists".into());
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(())
}

/// Every basis element of `L(A)` outside the constants has degree `m`.
fn every_member_generates(c: &Arc<CurveModel>, cert: &GeneratorCertificate) -> Check {
    let space = rr_space(c, cert.admissible.divisor()).map_err(|e| e.to_string())?;
    if space.dim() < 2 {
        return Err(format!("{}: dim L(A) = {}", name(c), space.dim()));
    }
    for z in space.basis().iter().filter(|z| z.as_constant().is_none()) {
        if z.minimal_polynomial().degree() != c.m() {
            return Err(format!("{}: {z} does not generate", name(c)));
        }
    }
    Ok(())
}

pub fn check_battery(curves: &[Arc<CurveModel>]) -> Check {
    let start = std::time::Instant::now();
    for c in curves {
        let cert = certify(c, 0)?;
        let rep = verify_certificate(c, &cert).map_err(|e| e.to_string())?;
        if !rep.ok() {
            return Err(format!("{}:\n{rep}", name(c)));
        }
        if !admissible_check(c, &cert.admissible).ok {
            return Err(format!("{}: divisor not admissible", name(c)));
        }
        if cert.minpoly_degree != c.m() || cert.alpha.minimal_polynomial().degree() != c.m() {
            return Err(format!("{}: minpoly degree {}", name(c), cert.minpoly_degree));
        }
        let lower = castelnuovo_lower_bound(c.genus(), c.m()).unwrap();
        let upper = HeightValue::new(cert.admissible.degree(), c.m() as i64).unwrap();
        let h = height(c, &[FFElement::one(c), cert.alpha.clone()]).map_err(|e| e.to_string())?;
        if !(lower <= h && h <= upper) || h != cert.height {
            return Err(format!("{}: {lower} <= {h} <= {upper} fails", name(c)));
        }
        every_member_generates(c, &cert)?;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 300.0 {
        return Err(format!("battery took {secs:.0} s"));
    }
    Ok(())
}

pub fn check_ramification_identity(curves: &[Arc<CurveModel>]) -> Check {
    for c in curves {
        let mut bases: Vec<BasePlace> = vec![BasePlace::Infinite];
        for d in 1..=4 {
            bases.extend(irreducibles(c.field(), d).unwrap().map(BasePlace::Finite));
        }
        for b in bases {
            let sum: usize = c
                .places_above_base(&b)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|v| v.e() * v.f_res())
                .sum();
            if sum != c.m() {
                return Err(format!("{}: sum e f = {sum} above {b}", name(c)));
            }
        }
    }
    Ok(())
}

pub fn check_degree_zero(curves: &[Arc<CurveModel>], per_curve: usize) -> Check {
    for (i, c) in curves.iter().enumerate() {
        let mut r = rng(100 + i as u64);
        for _ in 0..per_curve {
            let z = random_element(c, &mut r, 1);
            let d = principal_divisor(c, std::slice::from_ref(&z)).map_err(|e| e.to_string())?;
            if d.degree() != 0 {
                return Err(format!("{}: deg ({z}) = {}", name(c), d.degree()));
            }
        }
    }
    Ok(())
}

/// Random divisors supported on places of degree at most two and infinity.
pub fn random_divisor(c: &Arc<CurveModel>, places: &[Place], r: &mut ChaCha8Rng, lo: i64, hi: i64) -> Divisor {
    let mut d = Divisor::zero(c);
    let k = r.random_range(1..=3);
    for _ in 0..k {
        let v = places[r.random_range(0..places.len())].clone();
        d.add_term(v, r.random_range(lo..=hi));
    }
    d
}

pub fn check_riemann_roch(curves: &[Arc<CurveModel>], per_curve: usize) -> Check {
    for (i, c) in curves.iter().enumerate() {
        let g = c.genus() as i64;
        let places = small_places(c, 2);
        let mut r = rng(200 + i as u64);
        let mut large = 0;
        let mut tries = 0;
        while large < per_curve {
            tries += 1;
            if tries > 50 * per_curve {
                return Err(format!("{}: could not draw enough divisors", name(c)));
            }
            let mut a = random_divisor(c, &places, &mut r, -2, 3);
            if tries % 2 == 0 {
                // push the degree past 2g - 1
                let v = c.infinite_places()[0].clone();
                let need = (2 * g - 1 - a.degree()).max(0) / v.degree() as i64 + 1;
                a.add_term(v, need + r.random_range(0..3));
            }
            let dim = rr_dim(c, &a).map_err(|e| format!("{}: {e}", name(c)))? as i64;
            let deg = a.degree();
            if dim < deg + 1 - g {
                return Err(format!("{}: l({a}) = {dim} < {deg} + 1 - {g}", name(c)));
            }
            if deg >= 2 * g - 1 {
                if dim != deg + 1 - g {
                    return Err(format!("{}: l({a}) = {dim} != {deg} + 1 - {g}", name(c)));
                }
                large += 1;
            }
        }
    }
    Ok(())
}

/// `rr_dim` against the brute-force dimension on `q = 3`, genus at most two.
pub fn check_rr_oracle(curves: &[Arc<CurveModel>], per_curve: usize) -> Check {
    let mut compared = 0;
    for (i, c) in curves.iter().enumerate() {
        if c.field().order() != 3 || c.genus() > 2 {
            continue;
        }
        let places = small_places(c, 2);
        let mut r = rng(300 + i as u64);
        let mut seen = BTreeSet::new();
        let mut tries = 0;
        while seen.len() < per_curve && tries < 40 * per_curve {
            tries += 1;
            let a = random_divisor(c, &places, &mut r, -1, 3);
            if a.degree() > 5 || !seen.insert(a.to_string()) {
                continue;
            }
            let kernel = rr_dim(c, &a).map_err(|e| e.to_string())?;
            let oracle = rr_dim_exhaustive(c, &a).map_err(|e| format!("{}: {a}: {e}", name(c)))?;
            if kernel != oracle {
                return Err(format!("{}: l({a}) kernel {kernel}, oracle {oracle}", name(c)));
            }
            compared += 1;
        }
    }
    if compared == 0 {
        return Err("no oracle-reachable instance".into());
    }
    Ok(())
}

pub fn check_place_bounds(curves: &[Arc<CurveModel>]) -> Check {
    for c in curves {
        for l in 1..=4 {
            let count = count_places_exhaustive(c, l).map_err(|e| e.to_string())?;
            let bound = place_count_lower_bound(c, l);
            if bound.is_positive() && !bound.satisfied_by(count.fres1) {
                return Err(format!("{}: l = {l}: {} < {bound}", name(c), count.fres1));
            }
            let q = c.field().order();
            if !weil_total_holds(q, l as u64, c.genus() as u64, count.total) {
                return Err(format!("{}: l = {l}: total {} below the Weil bound", name(c), count.total));
            }
        }
    }
    Ok(())
}

pub fn check_heights(curves: &[Arc<CurveModel>], scalings: usize, base_heights: usize) -> Check {
    for (i, c) in curves.iter().enumerate() {
        let mut r = rng(400 + i as u64);
        for _ in 0..scalings {
            let zs = [random_element(c, &mut r, 1), random_element(c, &mut r, 1)];
            let lambda = random_element(c, &mut r, 1);
            let scaled: Vec<FFElement> = zs.iter().map(|z| z * &lambda).collect();
            let h1 = height(c, &zs).map_err(|e| e.to_string())?;
            let h2 = height(c, &scaled).map_err(|e| e.to_string())?;
            if h1 != h2 {
                return Err(format!("{}: h(zs) = {h1}, h(lambda zs) = {h2}", name(c)));
            }
        }
        for _ in 0..base_heights {
            let z = random_rational(c, &mut r, 3);
            let in_k = HeightValue::integer(z.height_degree() as i64);
            let in_big = height(c, &[FFElement::one(c), FFElement::from_base(c, z.clone())]).map_err(|e| e.to_string())?;
            if in_k != in_big {
                return Err(format!("{}: h({z}) is {in_k} over k and {in_big} over K", name(c)));
            }
        }
    }
    Ok(())
}

/// Certificate bytes for the whole battery.
pub fn certificate_bytes(curves: &[Arc<CurveModel>], workers: usize) -> Result<Vec<String>, String> {
    curves
        .iter()
        .map(|c| Ok(to_json(&CertificateDoc::from_certificate(&certify(c, workers)?))))
        .collect()
}

pub fn check_determinism(curves: &[Arc<CurveModel>]) -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = certificate_bytes(curves, 1)?;
    let second = certificate_bytes(curves, 4)?;
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        let pa = dir.path().join(format!("a{i}.json"));
        let pb = dir.path().join(format!("b{i}.json"));
        std::fs::write(&pa, a).map_err(|e| e.to_string())?;
        std::fs::write(&pb, b).map_err(|e| e.to_string())?;
        let ra = std::fs::read(&pa).map_err(|e| e.to_string())?;
        let rb = std::fs::read(&pb).map_err(|e| e.to_string())?;
        if ra != rb {
            return Err(format!("{}: certificates differ between runs", name(&curves[i])));
        }
    }
    Ok(())
}
