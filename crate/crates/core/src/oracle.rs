//! Brute-force cross-checks for tiny instances.
//!
//! Nothing here uses the Hensel lifter, the residue tables or the Riemann-Roch
//! solver. Place counts come from point counting, valuations from naive local
//! expansions at explicit points and dimensions from enumeration or a plain
//! rank computation.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_integer::Integer;
use serde::Serialize;

use crate::curve::{BasePlace, CurveModel, FFElement, Place};
use crate::divisor::{Divisor, HeightValue};
use crate::error::{Error, Result};
use crate::gf::{embedding, field, Embedding, Field};
use crate::poly::{mobius_fn, nth_monic, Poly};
use crate::ratfunc::RationalFunction;

/// Largest `q^l` for point counting.
pub const POINT_CAP: u64 = 10_000_000;
/// Largest number of vectors enumerated for a dimension.
pub const ENUM_CAP: u64 = 100_000;
/// Largest ambient monomial space for a dimension.
pub const AMBIENT_CAP: usize = 10_000;
/// Largest number of candidates visited by the minimal generator search.
pub const CANDIDATE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceCount {
    pub l: usize,
    pub total: u64,
    pub fres1: u64,
}

fn ext_field(curve: &CurveModel, d: usize) -> Result<(Field, Arc<Embedding>)> {
    let fq = curve.field();
    let big = field(fq.p(), fq.k() * d)?;
    let emb = embedding(fq, &big)?;
    Ok((big, emb))
}

/// Number of `y` in `E` with `y^m = v`.
fn root_count(e: &Field, m: u64, v: u64) -> u64 {
    if v == 0 {
        return 1;
    }
    let qm1 = e.order() - 1;
    let g = m.gcd(&qm1);
    if e.pow(v, qm1 / g) == 1 {
        g
    } else {
        0
    }
}

fn horner(e: &Field, coeffs: &[u64], x: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| e.add(e.mul(acc, x), c))
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Points over `F_{q^d}`: affine, affine with `x` of exact degree `d`, and at
/// infinity.
fn points(curve: &CurveModel, d: usize, exact: bool) -> Result<(u64, u64, u64)> {
    let (e, emb) = ext_field(curve, d)?;
    let f: Vec<u64> = curve.f().coeffs().iter().map(|&c| emb.apply(c)).collect();
    let m = curve.m() as u64;
    let k = curve.field().k();
    let proper: Vec<usize> = prime_divisors(d).into_iter().map(|r| d / r).collect();
    let (mut all, mut new) = (0u64, 0u64);
    for x in e.elements() {
        let c = root_count(&e, m, horner(&e, &f, x));
        all += c;
        if exact && proper.iter().all(|&j| e.frobenius(x, k * j) != x) {
            new += c;
        }
    }
    let lc = emb.apply(curve.f().lc());
    let inf = root_count(&e, curve.d_inf() as u64, lc);
    Ok((all, new, inf))
}

/// Fails unless `q^l` points can be enumerated.
pub fn check_point_cap(q: u64, l: usize) -> Result<()> {
    match u32::try_from(l).ok().and_then(|e| q.checked_pow(e)) {
        Some(n) if n <= POINT_CAP => Ok(()),
        _ => Err(Error::EnumerationCap(format!("q^l = {q}^{l} exceeds {POINT_CAP}"))),
    }
}

/// Places of degree `l`, and those of residue degree one over their base.
pub fn count_places_exhaustive(curve: &CurveModel, l: usize) -> Result<PlaceCount> {
    if l == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    check_point_cap(curve.field().order(), l)?;
    let mut sum: i128 = 0;
    let mut fres1 = 0;
    for d in (1..=l).filter(|d| l.is_multiple_of(*d)) {
        let (all, new, inf) = points(curve, d, d == l)?;
        sum += mobius_fn((l / d) as u64) as i128 * (all + inf) as i128;
        if d == l {
            fres1 = new / l as u64 + if l == 1 { inf } else { 0 };
        }
    }
    if sum < 0 || sum % l as i128 != 0 {
        return Err(Error::Invalid(format!("inconsistent point counts for l = {l}")));
    }
    Ok(PlaceCount {
        l,
        total: (sum / l as i128) as u64,
        fres1,
    })
}

/// A truncated expansion `x = x(s)`, `y = y(s)` at one place.
struct Chart {
    field: Field,
    emb: Arc<Embedding>,
    /// `s^{shift} x^a y^b` as series, for the monomials in use
    cols: Vec<Vec<u64>>,
    shift: i64,
}

fn series_mul(e: &Field, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for i in 0..n.min(a.len()) {
        for j in 0..(n - i).min(b.len()) {
            out[i + j] = e.add(out[i + j], e.mul(a[i], b[j]));
        }
    }
    out
}

fn series_pow(e: &Field, a: &[u64], k: usize, n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    if n > 0 {
        out[0] = 1;
    }
    for _ in 0..k {
        out = series_mul(e, &out, a, n);
    }
    out
}

/// Solves `Y^m = rhs` coefficient by coefficient from `Y(0) = y0`.
fn naive_root(e: &Field, m: usize, rhs: &[u64], y0: u64, n: usize) -> Vec<u64> {
    let mut y = vec![0u64; n];
    if n == 0 {
        return y;
    }
    y[0] = y0;
    let denom = e.mul(e.from_int(m as i64), e.pow(y0, m as u64 - 1));
    let inv = e.inv(denom).expect("simple root");
    for k in 1..n {
        let cur = series_pow(e, &y[..k], m, k + 1);
        let want = rhs.get(k).copied().unwrap_or(0);
        y[k] = e.mul(e.sub(want, cur[k]), inv);
    }
    y
}

fn brute_root(e: &Field, p: &Poly) -> Result<u64> {
    if e.order() > POINT_CAP {
        return Err(Error::EnumerationCap(format!("root search in a field of size {}", e.order())));
    }
    e.elements()
        .find(|&x| horner(e, p.coeffs(), x) == 0)
        .ok_or_else(|| Error::Invalid(format!("{p} has no root in F_{}", e.order())))
}

/// Expansion at an unramified place: the monomials of `mons`, shifted at
/// infinity to be integral, to `precision` terms past the shift.
fn chart(curve: &CurveModel, v: &Place, mons: &[(usize, usize)], precision: i64) -> Result<Chart> {
    let (local, g) = v
        .branch_factor()
        .ok_or_else(|| Error::Invalid(format!("{v} has no branch data")))?;
    let t = g.degree().unwrap();
    let fq = curve.field();
    let e = field(fq.p(), local.k() * t)?;
    let up = embedding(&local, &e)?;
    let emb = embedding(fq, &e)?;
    let eta = brute_root(&e, &g.embed(&up))?;
    let m = curve.m();
    let f: Vec<u64> = curve.f().coeffs().iter().map(|&c| emb.apply(c)).collect();
    let mp = m / curve.d_inf();
    let np = curve.n() / curve.d_inf();
    let shift = if v.is_infinite() {
        mons.iter().map(|&(a, b)| mp * a + np * b).max().unwrap_or(0)
    } else {
        0
    };
    let n = (precision + shift as i64).max(0) as usize;
    let (xs, ys) = if v.is_infinite() {
        // x = s^{-m'}, y = s^{-n'} U(s), U^m = s^{m'n} f(s^{-m'})
        let mut rhs = vec![0u64; n.max(1)];
        for (i, &c) in f.iter().enumerate() {
            let at = mp * (curve.n() - i);
            if at < rhs.len() {
                rhs[at] = c;
            }
        }
        (Vec::new(), naive_root(&e, m, &rhs, eta, n))
    } else {
        let theta = up.apply(v.theta().unwrap());
        let xs = vec![theta, 1];
        let mut fx = vec![0u64; n];
        let mut pw = vec![0u64; n];
        if n > 0 {
            pw[0] = 1;
        }
        for &c in &f {
            for (acc, &p) in fx.iter_mut().zip(&pw) {
                *acc = e.add(*acc, e.mul(c, p));
            }
            pw = series_mul(&e, &pw, &xs, n);
        }
        let y = naive_root(&e, m, &fx, eta, n);
        (xs, y)
    };
    let mut cols = Vec::with_capacity(mons.len());
    for &(a, b) in mons {
        let mut col = series_pow(&e, &ys, b, n);
        if v.is_infinite() {
            let off = shift - (mp * a + np * b);
            let mut shifted = vec![0u64; n];
            if off < n {
                shifted[off..].copy_from_slice(&col[..n - off]);
            }
            col = shifted;
        } else {
            col = series_mul(&e, &col, &series_pow(&e, &xs, a, n), n);
        }
        cols.push(col);
    }
    Ok(Chart {
        field: e,
        emb,
        cols,
        shift: shift as i64,
    })
}

/// `ord_P(a)` by repeated division, `None` for `a = 0`.
fn ord_poly(a: &Poly, p: &Poly) -> Option<i64> {
    if a.is_zero() {
        return None;
    }
    let mut k = 0;
    let mut cur = a.clone();
    loop {
        let (q, r) = cur.divrem(p).expect("nonzero prime");
        if !r.is_zero() {
            return Some(k);
        }
        cur = q;
        k += 1;
    }
}

/// How one place tests a polynomial `w = sum lambda_j x^{a_j} y^{b_j}`.
enum Local {
    /// `ord_v(w) = min_b (m ord_P(a_b) + b)`
    Ramified(Poly),
    /// `ord_v(w) = -max (m a + n b)`
    Tame,
    Chart(Chart),
}

struct Probe {
    local: Local,
}

impl Probe {
    /// `ord_v(w)`, exact when below `cap`; values `>= cap` are reported as `cap`.
    fn ord(&self, curve: &CurveModel, mons: &[(usize, usize)], lambda: &[u64], cap: i64) -> i64 {
        let m = curve.m();
        match &self.local {
            Local::Ramified(p) => {
                let fq = curve.field();
                let mut parts = vec![vec![0u64; 0]; m];
                for (&(a, b), &c) in mons.iter().zip(lambda) {
                    if c != 0 {
                        if parts[b].len() <= a {
                            parts[b].resize(a + 1, 0);
                        }
                        parts[b][a] = fq.add(parts[b][a], c);
                    }
                }
                let mut best = cap;
                for (b, coeffs) in parts.into_iter().enumerate() {
                    if let Some(o) = ord_poly(&Poly::from_raw(fq, coeffs), p) {
                        best = best.min(m as i64 * o + b as i64);
                    }
                }
                best
            }
            Local::Tame => {
                let n = curve.n();
                mons.iter()
                    .zip(lambda)
                    .filter(|(_, &c)| c != 0)
                    .map(|(&(a, b), _)| -((m * a + n * b) as i64))
                    .min()
                    .unwrap_or(cap)
                    .min(cap)
            }
            Local::Chart(ch) => {
                let e = &ch.field;
                let len = ch.cols.first().map_or(0, |c| c.len());
                let upto = ((cap + ch.shift).max(0) as usize).min(len);
                for i in 0..upto {
                    let mut acc = 0;
                    for (col, &c) in ch.cols.iter().zip(lambda) {
                        if c != 0 && col[i] != 0 {
                            acc = e.add(acc, e.mul(col[i], ch.emb.apply(c)));
                        }
                    }
                    if acc != 0 {
                        return i as i64 - ch.shift;
                    }
                }
                cap
            }
        }
    }
}

fn probe(curve: &CurveModel, v: &Place, mons: &[(usize, usize)], precision: i64) -> Result<Probe> {
    let local = if v.is_ramified() && !v.is_infinite() {
        Local::Ramified(v.base().prime().unwrap().clone())
    } else if v.is_infinite() && v.branch_factor().is_none() {
        Local::Tame
    } else {
        Local::Chart(chart(curve, v, mons, precision)?)
    };
    Ok(Probe { local })
}

/// The ambient monomials `x^a y^b`, `a <= amax`, `b < m`, ordered by `(b, a)`.
fn envelope(curve: &CurveModel, amax: usize) -> Vec<(usize, usize)> {
    (0..curve.m())
        .flat_map(|b| (0..=amax).map(move |a| (a, b)))
        .collect()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `dim L(A)` by enumeration or by an independent rank computation.
pub fn rr_dim_exhaustive(curve: &Arc<CurveModel>, a: &Divisor) -> Result<usize> {
    if a.degree() < 0 {
        return Ok(0);
    }
    let fq = curve.field();
    // clearing exponents per finite prime
    let mut clear: BTreeMap<Poly, i64> = BTreeMap::new();
    for p in a.finite_primes() {
        let mut t = 0;
        for v in curve.places_above(&p)?.iter() {
            t = t.max(ceil_div(a.coeff(v), v.e() as i64));
        }
        clear.insert(p, t);
    }
    let deg_m: i64 = clear.iter().map(|(p, t)| p.deg() * t).sum();
    // w = z M must satisfy ord_v(w) >= need_v
    let mut needs: Vec<(Place, i64)> = Vec::new();
    for (p, &t) in &clear {
        for v in curve.places_above(p)?.iter() {
            let need = v.e() as i64 * t - a.coeff(v);
            if need > 0 {
                needs.push((v.clone(), need));
            }
        }
    }
    let mut bmax = i64::MIN;
    for v in curve.infinite_places() {
        let b = a.coeff(v) + v.e() as i64 * deg_m;
        needs.push((v.clone(), -b));
        bmax = bmax.max(b);
    }
    if bmax < 0 {
        return Ok(0);
    }
    let mp = (curve.m() / curve.d_inf()) as i64;
    let mons = envelope(curve, (bmax / mp) as usize);
    if mons.len() > AMBIENT_CAP {
        return Err(Error::EnumerationCap(format!("{} ambient monomials", mons.len())));
    }
    let probes: Vec<(Probe, i64)> = needs
        .iter()
        .map(|(v, need)| Ok((probe(curve, v, &mons, *need)?, *need)))
        .collect::<Result<_>>()?;
    let q = fq.order();
    let n = mons.len() as u32;
    let total = q.checked_pow(n).filter(|&t| t <= ENUM_CAP);
    if let Some(total) = total {
        let mut count = 0u64;
        let mut lambda = vec![0u64; mons.len()];
        for idx in 0..total {
            let mut r = idx;
            for c in lambda.iter_mut() {
                *c = r % q;
                r /= q;
            }
            if probes.iter().all(|(pr, need)| pr.ord(curve, &mons, &lambda, *need) >= *need) {
                count += 1;
            }
        }
        let mut dim = 0;
        let mut pw = 1;
        while pw < count {
            pw *= q;
            dim += 1;
        }
        if pw != count {
            return Err(Error::Invalid(format!("{count} members is not a power of {q}")));
        }
        return Ok(dim);
    }
    rank_dim(curve, &mons, &probes)
}

/// `dim` over `F_q` of the common solution space, by `F_p` row reduction.
fn rank_dim(curve: &CurveModel, mons: &[(usize, usize)], probes: &[(Probe, i64)]) -> Result<usize> {
    let fq = curve.field();
    let k = fq.k();
    let width = mons.len() * k;
    // lambda_j = u^i, i < k, spans the unknown j over F_p
    let powers: Vec<u64> = (0..k).map(|i| fq.pow(fq.generator(), i as u64)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (pr, need) in probes {
        match &pr.local {
            Local::Chart(ch) => {
                let e = &ch.field;
                let len = ch.cols.first().map_or(0, |c| c.len());
                let upto = ((need + ch.shift).max(0) as usize).min(len);
                for s in 0..upto {
                    let mut block = vec![vec![0u64; width]; e.k()];
                    for (j, col) in ch.cols.iter().enumerate() {
                        for (i, &u) in powers.iter().enumerate() {
                            let val = e.mul(col[s], ch.emb.apply(u));
                            for (r, d) in e.to_digits(val).into_iter().enumerate() {
                                block[r][j * k + i] = d;
                            }
                        }
                    }
                    rows.extend(block);
                }
            }
            Local::Tame => {
                for (j, &(a, b)) in mons.iter().enumerate() {
                    if -((curve.m() * a + curve.n() * b) as i64) < *need {
                        for i in 0..k {
                            let mut row = vec![0u64; width];
                            row[j * k + i] = 1;
                            rows.push(row);
                        }
                    }
                }
            }
            Local::Ramified(prime) => {
                // a_b = 0 mod P^c with c = ceil((need - b) / m)
                for b in 0..curve.m() {
                    let c = ceil_div(need - b as i64, curve.m() as i64);
                    if c <= 0 {
                        continue;
                    }
                    let modulus = prime.pow(c as u64);
                    let dm = modulus.degree().unwrap();
                    let mut block = vec![vec![0u64; width]; dm * k];
                    for (j, &(a, bb)) in mons.iter().enumerate() {
                        if bb != b {
                            continue;
                        }
                        for (i, &u) in powers.iter().enumerate() {
                            let r = Poly::monomial(fq, u, a).rem(&modulus);
                            for (pos, &cf) in r.coeffs().iter().enumerate() {
                                for (dig, d) in fq.to_digits(cf).into_iter().enumerate() {
                                    block[pos * k + dig][j * k + i] = d;
                                }
                            }
                        }
                    }
                    rows.extend(block);
                }
            }
        }
    }
    let rank = rank_mod_p(rows, width, fq.p());
    Ok((width - rank) / k)
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, width: usize, p: u64) -> usize {
    let inv = |a: u64| -> u64 {
        let mut r = 1u64;
        let (mut b, mut e) = (a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * iv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug)]
pub struct MinGenerator {
    pub height: HeightValue,
    pub witness: FFElement,
    pub visited: u64,
}

/// Is `w = sum lambda_j x^{a_j} y^{b_j}` of degree `m` over `F_q(x)`? Decided by
/// the determinant of the coordinates of `1, w, ..., w^{m-1}`.
fn generates(curve: &CurveModel, mons: &[(usize, usize)], lambda: &[u64]) -> bool {
    let fq = curve.field();
    let m = curve.m();
    let mut w = vec![Poly::zero(fq); m];
    for (&(a, b), &c) in mons.iter().zip(lambda) {
        if c != 0 {
            w[b] = &w[b] + &Poly::monomial(fq, c, a);
        }
    }
    let mut rows: Vec<Vec<RationalFunction>> = Vec::with_capacity(m);
    let mut cur = vec![Poly::zero(fq); m];
    cur[0] = Poly::one(fq);
    for _ in 0..m {
        rows.push(cur.iter().cloned().map(RationalFunction::from_poly).collect());
        // cur <- cur * w, reducing y^m = f
        let mut next = vec![Poly::zero(fq); 2 * m];
        for (i, ci) in cur.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                next[i + j] = &next[i + j] + &(ci * wj);
            }
        }
        for i in (m..2 * m).rev() {
            let hi = std::mem::replace(&mut next[i], Poly::zero(fq));
            next[i - m] = &next[i - m] + &(&hi * curve.f());
        }
        next.truncate(m);
        cur = next;
    }
    // Gaussian elimination over F_q(x)
    for col in 0..m {
        let Some(piv) = (col..m).find(|&r| !rows[r][col].is_zero()) else {
            return false;
        };
        rows.swap(col, piv);
        let inv = rows[col][col].inv().unwrap();
        for r in col + 1..m {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] * &inv;
            for c in col..m {
                let t = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
    }
    true
}

/// Monic polynomials of degree `d` in enumeration order, factored by trial
/// division.
fn factored_monics(fq: &Field, d: usize) -> Vec<(Poly, Vec<(Poly, i64)>)> {
    let q = fq.order();
    let count = q.pow(d as u32);
    (0..count)
        .map(|i| {
            let mpoly = nth_monic(fq, d, i);
            let mut rest = mpoly.clone();
            let mut fac = Vec::new();
            let mut deg = 1;
            while rest.deg() > 0 {
                if 2 * deg > rest.deg() as usize {
                    fac.push((rest.monic(), 1));
                    break;
                }
                for j in 0..q.pow(deg as u32) {
                    let cand = nth_monic(fq, deg, j);
                    let mut e = 0;
                    while rest.deg() > 0 {
                        let (qq, r) = rest.divrem(&cand).unwrap();
                        if !r.is_zero() {
                            break;
                        }
                        rest = qq;
                        e += 1;
                    }
                    if e > 0 {
                        fac.push((cand, e));
                    }
                }
                deg += 1;
            }
            (mpoly, merge(fac))
        })
        .collect()
}

fn merge(mut fac: Vec<(Poly, i64)>) -> Vec<(Poly, i64)> {
    fac.sort();
    let mut out: Vec<(Poly, i64)> = Vec::new();
    for (p, e) in fac {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    out
}

/// Least height of a generator `z` with `h(1, z) <= cap`, searching pole
/// degrees in increasing order.
pub fn min_generator_exhaustive(curve: &Arc<CurveModel>, cap: HeightValue) -> Result<Option<MinGenerator>> {
    let fq = curve.field();
    let m = curve.m() as i64;
    let q = fq.order();
    let dmax = (cap.ratio() * m).to_integer();
    let mp = (curve.m() / curve.d_inf()) as i64;
    let np = (curve.n() / curve.d_inf()) as i64;
    let mut visited: u64 = 0;
    let mut probes: BTreeMap<Place, Probe> = BTreeMap::new();
    for delta in 1..=dmax {
        for deg_m in 0..=delta {
            let amax = (delta + mp * deg_m) / mp;
            let mons: Vec<(usize, usize)> = envelope(curve, amax as usize)
                .into_iter()
                .filter(|&(a, b)| mp * a as i64 + np * b as i64 <= delta + mp * deg_m)
                .collect();
            let per = q
                .checked_pow(mons.len() as u32)
                .ok_or_else(|| Error::EnumerationCap("candidate space".into()))?;
            let monics = factored_monics(fq, deg_m as usize);
            if visited
                .checked_add(per.saturating_mul(monics.len() as u64))
                .is_none_or(|t| t > CANDIDATE_CAP)
            {
                return Err(Error::EnumerationCap(format!(
                    "more than {CANDIDATE_CAP} candidates below pole degree {delta}"
                )));
            }
            // probes depend on the envelope
            probes.clear();
            for (mpoly, fac) in &monics {
                let mut places: Vec<(Place, i64)> = Vec::new();
                for (p, t) in fac {
                    for v in curve.places_above(p)?.iter() {
                        places.push((v.clone(), v.e() as i64 * t));
                    }
                }
                for v in curve.infinite_places() {
                    places.push((v.clone(), -(v.e() as i64) * deg_m));
                }
                for (v, _) in &places {
                    if !probes.contains_key(v) {
                        let prec = if v.is_infinite() { 0 } else { m * delta };
                        probes.insert(v.clone(), probe(curve, v, &mons, prec)?);
                    }
                }
                let mut lambda = vec![0u64; mons.len()];
                for idx in 1..per {
                    visited += 1;
                    let mut r = idx;
                    for c in lambda.iter_mut() {
                        *c = r % q;
                        r /= q;
                    }
                    let mut poles = 0i64;
                    for (v, r_v) in &places {
                        let o = probes[v].ord(curve, &mons, &lambda, *r_v);
                        if o < *r_v {
                            poles += (r_v - o) * v.degree() as i64;
                            if poles > delta {
                                break;
                            }
                        }
                    }
                    if poles != delta || !generates(curve, &mons, &lambda) {
                        continue;
                    }
                    let parts: Vec<Poly> = (0..curve.m())
                        .map(|b| {
                            let mut c = vec![0u64; amax as usize + 1];
                            for (&(a, bb), &l) in mons.iter().zip(&lambda) {
                                if bb == b {
                                    c[a] = l;
                                }
                            }
                            Poly::from_raw(fq, c)
                        })
                        .collect();
                    let witness = FFElement::from_polys(curve, &parts, mpoly)?;
                    return Ok(Some(MinGenerator {
                        height: HeightValue::new(delta, m)?,
                        witness,
                        visited,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// One oracle run set against the kernel.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub oracle: String,
    pub kernel: String,
    pub matches: bool,
    pub enumerated: u64,
    pub elapsed_ms: u128,
}

impl OracleReport {
    pub fn new(
        instance: String,
        oracle: String,
        kernel: String,
        matches: bool,
        enumerated: u64,
        start: Instant,
    ) -> Self {
        OracleReport {
            matches,
            instance,
            oracle,
            kernel,
            enumerated,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

/// Kernel-side place counts from `places_above`, for comparison.
pub fn count_places_kernel(curve: &CurveModel, l: usize) -> Result<PlaceCount> {
    let fq = curve.field();
    let mut total = 0;
    let mut fres1 = 0;
    for d in (1..=l).filter(|d| l.is_multiple_of(*d)) {
        for p in crate::poly::irreducibles(fq, d)? {
            for v in curve.places_above(&p)?.iter() {
                if v.degree() == l {
                    total += 1;
                    if v.f_res() == 1 {
                        fres1 += 1;
                    }
                }
            }
        }
    }
    for v in curve.infinite_places() {
        if v.degree() == l {
            total += 1;
            if v.f_res() == 1 {
                fres1 += 1;
            }
        }
    }
    Ok(PlaceCount { l, total, fres1 })
}

/// Base places of `A` in print order, for instance descriptions.
pub fn describe(a: &Divisor) -> String {
    let mut parts = Vec::new();
    for (v, c) in a.terms() {
        let base = match v.base() {
            BasePlace::Finite(p) => p.to_string(),
            BasePlace::Infinite => "inf".to_string(),
        };
        parts.push(format!("{c}*({base}; {})", v.branch()));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
