//! Riemann-Roch spaces `L(A)` by denominator clearing and exact elimination.
//!
//! With `M = prod P^{t_P}` clearing the finite part of `A`, every `z` in `L(A)`
//! is `w / M` with `w` in `F_q[x][y]`. The pole bound at infinity confines `w`
//! to the monomials `x^a y^b` with `m'a + n'b <= C`, and the remaining
//! conditions are vanishing orders at the places above the support primes and,
//! when the infinite coefficients differ, at the infinite places. Constraints
//! with values in residue fields are split into `F_p` coordinates and the
//! kernel is read back as an `F_q` space.

use std::sync::Arc;

use crate::curve::{CurveModel, FFElement, Local, Place};
use crate::divisor::{in_space, Divisor};
use crate::error::{Error, Result};
use crate::gf::{field, Field};
use crate::linalg::{echelon_basis, Matrix};
use crate::poly::Poly;
use crate::series;

#[derive(Clone, Debug)]
pub struct RRSpace {
    divisor: Divisor,
    basis: Vec<FFElement>,
}

impl RRSpace {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// Basis in increasing order of leading monomial.
    pub fn basis(&self) -> &[FFElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Linear conditions over `F_p` on the `F_p` digits of `F_q` unknowns.
struct System {
    fp: Field,
    fq: Field,
    unknowns: usize,
    rows: Vec<Vec<u64>>,
}

impl System {
    fn width(&self) -> usize {
        self.unknowns * self.fq.k()
    }

    /// One condition `sum_j vals[j] * lambda_j = 0` with values in `ext`.
    fn push(&mut self, ext: &Field, u_img: u64, vals: &[u64]) {
        let k = self.fq.k();
        let kd = ext.k();
        let mut block = vec![vec![0u64; self.width()]; kd];
        let mut digits = vec![0u64; kd];
        for (j, &v) in vals.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let mut c = v;
            for i in 0..k {
                ext.digits(c, &mut digits);
                for (r, &d) in digits.iter().enumerate() {
                    block[r][j * k + i] = d;
                }
                c = ext.mul(c, u_img);
            }
        }
        self.rows
            .extend(block.into_iter().filter(|r| r.iter().any(|&d| d != 0)));
    }

    /// `F_q` basis of the solution space, echelonized with pivots on the
    /// leftmost column.
    fn solve(self) -> Vec<Vec<u64>> {
        let width = self.width();
        let k = self.fq.k();
        let kernel = if self.rows.is_empty() {
            (0..width)
                .map(|c| {
                    let mut v = vec![0; width];
                    v[c] = 1;
                    v
                })
                .collect()
        } else {
            Matrix::from_rows(width, self.rows).kernel(&self.fp)
        };
        let vecs: Vec<Vec<u64>> = kernel
            .into_iter()
            .map(|v| v.chunks(k).map(|d| self.fq.undigits(d)).collect())
            .collect();
        echelon_basis(&self.fq, self.unknowns, vecs)
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + if a.rem_euclid(b) != 0 { 1 } else { 0 }
}

/// Basis of `L(A)`.
pub fn rr_space(curve: &Arc<CurveModel>, a: &Divisor) -> Result<RRSpace> {
    if !curve.same_model(a.curve()) {
        return Err(Error::FieldMismatch);
    }
    let empty = || RRSpace {
        divisor: a.clone(),
        basis: Vec::new(),
    };
    if a.degree() < 0 {
        return Ok(empty());
    }
    let fq = curve.field().clone();
    let m = curve.m();
    let (mp, np) = (m / curve.d_inf(), curve.n() / curve.d_inf());

    // Clearing polynomial.
    let mut clearing = Poly::one(&fq);
    let mut support: Vec<(Poly, i64, Vec<Place>)> = Vec::new();
    for p in a.finite_primes() {
        let places = curve.places_above(&p)?;
        let t = places
            .iter()
            .map(|v| ceil_div(a.coeff(v), v.e() as i64))
            .max()
            .unwrap()
            .max(0);
        clearing = &clearing * &p.pow(t as u64);
        support.push((p, t, places.as_ref().clone()));
    }
    let deg_m = clearing.deg();

    let c_inf: Vec<i64> = curve
        .infinite_places()
        .iter()
        .map(|v| a.coeff(v) + v.e() as i64 * deg_m)
        .collect();
    let c_max = *c_inf.iter().max().unwrap();
    if c_max < 0 {
        return Ok(empty());
    }
    let c_max = c_max as usize;

    // Monomials, largest (b, a) first.
    let mut monos: Vec<(usize, usize)> = Vec::new();
    for b in (0..m).rev() {
        if np * b > c_max {
            continue;
        }
        for ai in (0..=(c_max - np * b) / mp).rev() {
            monos.push((ai, b));
        }
    }
    let fp = field(fq.p(), 1)?;
    let mut sys = System {
        fp,
        fq: fq.clone(),
        unknowns: monos.len(),
        rows: Vec::new(),
    };

    for (p, t, places) in &support {
        for v in places {
            let r = v.e() as i64 * t - a.coeff(v);
            if r <= 0 {
                continue;
            }
            add_finite_conditions(curve, &mut sys, &monos, p, v, r as usize)?;
        }
    }
    for (v, &cv) in curve.infinite_places().iter().zip(&c_inf) {
        let r = c_max as i64 - cv;
        if r > 0 {
            add_infinite_conditions(&mut sys, &monos, v, c_max, r as usize, mp, np)?;
        }
    }

    let sols = sys.solve();
    let mut basis: Vec<FFElement> = sols
        .iter()
        .map(|lam| {
            let mut parts = vec![vec![0u64; 0]; m];
            for (&(ai, b), &l) in monos.iter().zip(lam) {
                if l == 0 {
                    continue;
                }
                if parts[b].len() <= ai {
                    parts[b].resize(ai + 1, 0);
                }
                parts[b][ai] = l;
            }
            let polys: Vec<Poly> = parts.into_iter().map(|c| Poly::from_raw(&fq, c)).collect();
            FFElement::from_polys(curve, &polys, &clearing)
        })
        .collect::<Result<_>>()?;
    basis.reverse();
    Ok(RRSpace {
        divisor: a.clone(),
        basis,
    })
}

fn add_finite_conditions(
    curve: &Arc<CurveModel>,
    sys: &mut System,
    monos: &[(usize, usize)],
    p: &Poly,
    v: &Place,
    r: usize,
) -> Result<()> {
    let fq = curve.field().clone();
    let m = curve.m();
    match v.local() {
        Local::Ramified => {
            // ord_v(sum a_b y^b) = min(m ord_P(a_b) + b) >= r
            for b in 0..m {
                let need = (r as i64 - b as i64 + m as i64 - 1).div_euclid(m as i64);
                if need <= 0 {
                    continue;
                }
                let modulus = p.pow(need as u64);
                let width = modulus.degree().unwrap();
                let residues: Vec<Poly> = monos
                    .iter()
                    .map(|&(ai, bb)| {
                        if bb == b {
                            Poly::monomial(&fq, 1, ai).rem(&modulus)
                        } else {
                            Poly::zero(&fq)
                        }
                    })
                    .collect();
                for pos in 0..width {
                    let vals: Vec<u64> = residues.iter().map(|q| q.coeff(pos)).collect();
                    sys.push(&fq, fq.generator(), &vals);
                }
            }
            Ok(())
        }
        Local::Branch(br) => {
            let ext = br.field().clone();
            let u_img = br.embedding().generator_image();
            let theta = br.theta();
            let t = v.f_res();
            // (theta + s)^a mod s^r
            let max_a = monos.iter().map(|&(ai, _)| ai).max().unwrap_or(0);
            let mut xpow: Vec<Vec<u64>> = Vec::with_capacity(max_a + 1);
            let mut cur = vec![0u64; r];
            cur[0] = 1;
            let lin = [theta, 1];
            for _ in 0..=max_a {
                xpow.push(cur.clone());
                cur = series::mul_trunc(&ext, &cur, &lin, r);
            }
            let cols: Vec<Vec<Vec<u64>>> = monos
                .iter()
                .map(|&(ai, b)| {
                    let mut a = vec![Vec::new(); b + 1];
                    a[b] = xpow[ai].clone();
                    br.combine(&a, r)
                })
                .collect();
            for i in 0..t {
                for k in 0..r {
                    let vals: Vec<u64> = cols.iter().map(|c| c[i][k]).collect();
                    sys.push(&ext, u_img, &vals);
                }
            }
            Ok(())
        }
        Local::InfiniteTame => unreachable!("finite place"),
    }
}

fn add_infinite_conditions(
    sys: &mut System,
    monos: &[(usize, usize)],
    v: &Place,
    c_max: usize,
    r: usize,
    mp: usize,
    np: usize,
) -> Result<()> {
    let Local::Branch(br) = v.local() else {
        return Err(Error::UnsupportedDivisor(format!(
            "unequal coefficients at infinity without a split branch at {v}"
        )));
    };
    let ext = br.field().clone();
    let u_img = br.embedding().generator_image();
    let cols: Vec<Vec<Vec<u64>>> = monos
        .iter()
        .map(|&(ai, b)| {
            let shift = c_max - mp * ai - np * b;
            let mut a = vec![Vec::new(); b + 1];
            let mut s = vec![0u64; shift + 1];
            s[shift] = 1;
            a[b] = s;
            br.combine(&a, r)
        })
        .collect();
    for k in 0..r {
        let vals: Vec<u64> = cols.iter().map(|c| c[0][k]).collect();
        sys.push(&ext, u_img, &vals);
    }
    Ok(())
}

pub fn rr_dim(curve: &Arc<CurveModel>, a: &Divisor) -> Result<usize> {
    Ok(rr_space(curve, a)?.dim())
}

/// `(z) + A >= 0`; zero belongs to every space.
pub fn rr_contains(curve: &Arc<CurveModel>, z: &FFElement, a: &Divisor) -> Result<bool> {
    in_space(curve, std::slice::from_ref(z), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::conorm;
    use crate::curve::BasePlace;

    fn setup() -> Arc<CurveModel> {
        CurveModel::from_text(3, 2, "x^5+1").unwrap()
    }

    #[test]
    fn spaces_at_infinity() {
        let c = setup();
        let inf = c.infinite_places()[0].clone();
        let z = rr_space(&c, &Divisor::zero(&c)).unwrap();
        assert_eq!(z.basis().iter().map(|e| e.to_string()).collect::<Vec<_>>(), ["[1]"]);
        let s3 = rr_space(&c, &Divisor::single(&c, inf.clone(), 3)).unwrap();
        assert_eq!(
            s3.basis().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            ["[1]", "[x]"]
        );
        assert_eq!(rr_dim(&c, &Divisor::single(&c, inf.clone(), 1)).unwrap(), 1);
        assert_eq!(rr_dim(&c, &Divisor::single(&c, inf, -1)).unwrap(), 0);
    }

    #[test]
    fn riemann_roch_law_on_conorms() {
        let c = setup();
        for n in 2..6 {
            let a = conorm(&c, &[(BasePlace::Infinite, n)]).unwrap();
            assert_eq!(rr_dim(&c, &a).unwrap() as i64, 2 * n + 1 - 2);
        }
    }

    #[test]
    fn finite_support() {
        let c = setup();
        let fq = c.field().clone();
        let px = Poly::parse(&fq, "x").unwrap();
        let v = c.places_above(&px).unwrap()[0].clone();
        // deg 5 >= 2g - 1, so dim = 5 + 1 - 2.
        let a = Divisor::single(&c, v.clone(), 5);
        let sp = rr_space(&c, &a).unwrap();
        assert_eq!(sp.dim(), 4);
        for z in sp.basis() {
            assert!(rr_contains(&c, z, &a).unwrap());
        }
        let x = FFElement::x(&c);
        let inf = c.infinite_places()[0].clone();
        assert!(rr_contains(&c, &x, &Divisor::single(&c, inf.clone(), 2)).unwrap());
        assert!(!rr_contains(&c, &x, &Divisor::single(&c, inf.clone(), 1)).unwrap());
        assert!(rr_contains(&c, &FFElement::zero(&c), &Divisor::single(&c, inf, -4)).unwrap());
    }
}
