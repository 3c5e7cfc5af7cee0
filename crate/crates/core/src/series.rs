//! Truncated power series in a local parameter `s` and Hensel lifting of a
//! coprime factorization of `T^m - F(s)`.

use crate::gf::{Field, FieldCtx};
use crate::poly::Poly;

/// `a * b mod s^n`.
pub(crate) fn mul_trunc(f: &FieldCtx, a: &[u64], b: &[u64], n: usize) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            if y != 0 {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
    }
    out
}

/// `acc += a * b mod s^{acc.len()}`.
pub(crate) fn add_mul_trunc(f: &FieldCtx, acc: &mut [u64], a: &[u64], b: &[u64]) {
    let n = acc.len();
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            if y != 0 {
                acc[i + j] = f.add(acc[i + j], f.mul(x, y));
            }
        }
    }
}

pub(crate) fn valuation(a: &[u64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// Coefficients of `p(theta + s)` as a polynomial in `s`.
pub(crate) fn taylor_shift(f: &FieldCtx, p: &[u64], theta: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = Vec::with_capacity(p.len());
    for &c in p.iter().rev() {
        // acc <- acc * (theta + s) + c
        let mut next = vec![0u64; acc.len() + 1];
        for (i, &a) in acc.iter().enumerate() {
            next[i] = f.add(next[i], f.mul(a, theta));
            next[i + 1] = f.add(next[i + 1], a);
        }
        next[0] = f.add(next[0], c);
        acc = next;
    }
    acc
}

/// Lifts `T^m - F(0) = g * h` to `T^m - F(s) = G * H` in `E[[s]][T]`.
pub(crate) struct Lifter {
    field: Field,
    rhs: Vec<u64>,
    h0: Poly,
    bezout_v: Poly,
    gs: Vec<Poly>,
    hs: Vec<Poly>,
}

impl Lifter {
    /// `rhs` is `F(s)` (finite), `g` a monic factor of `T^m - F(0)`.
    pub(crate) fn new(field: &Field, m: usize, rhs: Vec<u64>, g: Poly) -> Self {
        let f0 = rhs.first().copied().unwrap_or(0);
        let mut top = vec![0u64; m + 1];
        top[m] = 1;
        top[0] = field.neg(f0);
        let full = Poly::from_raw(field, top);
        let h0 = full.div_exact(&g);
        let (one, _u, v) = g.ext_gcd(&h0);
        debug_assert!(one.is_one(), "factors must be coprime");
        Lifter {
            field: field.clone(),
            rhs,
            h0: h0.clone(),
            bezout_v: v,
            gs: vec![g],
            hs: vec![h0],
        }
    }

    pub(crate) fn degree(&self) -> usize {
        self.gs[0].degree().unwrap()
    }

    pub(crate) fn extend_to(&mut self, n: usize) {
        let fld = self.field.clone();
        let g = self.gs[0].clone();
        while self.gs.len() < n {
            let k = self.gs.len();
            let fk = self.rhs.get(k).copied().unwrap_or(0);
            let mut r = Poly::constant(&fld, fld.neg(fk));
            for i in 1..k {
                r = &r - &(&self.gs[i] * &self.hs[k - i]);
            }
            let gk = (&r * &self.bezout_v).rem(&g);
            let hk = (&r - &(&self.h0 * &gk)).div_exact(&g);
            self.gs.push(gk);
            self.hs.push(hk);
        }
    }

    /// `[T^i] G` as series of length `n`, for `i <= deg g`.
    pub(crate) fn factor_series(&mut self, n: usize) -> Vec<Vec<u64>> {
        self.extend_to(n);
        let t = self.degree();
        (0..=t)
            .map(|i| (0..n).map(|k| self.gs[k].coeff(i)).collect())
            .collect()
    }
}

/// `T^b mod G` for `b < m`, as `[b][i][k]` with `i < deg G`, `k < n`.
pub(crate) fn power_residues(f: &FieldCtx, gser: &[Vec<u64>], m: usize, n: usize) -> Vec<Vec<Vec<u64>>> {
    let t = gser.len() - 1;
    let mut out: Vec<Vec<Vec<u64>>> = Vec::with_capacity(m);
    for b in 0..m {
        if b < t {
            let mut v = vec![vec![0u64; n]; t];
            if n > 0 {
                v[b][0] = 1;
            }
            out.push(v);
            continue;
        }
        let prev = &out[b - 1];
        let top = prev[t - 1].clone();
        let mut v = vec![vec![0u64; n]; t];
        v[1..t].clone_from_slice(&prev[..t - 1]);
        for (i, vi) in v.iter_mut().enumerate() {
            let prod = mul_trunc(f, &top, &gser[i], n);
            for (x, y) in vi.iter_mut().zip(prod) {
                *x = f.sub(*x, y);
            }
        }
        out.push(v);
    }
    out
}
