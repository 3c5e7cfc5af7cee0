//! Exact signs of `a + b N^{1/2} + c N^{1/4}` and the place-count bound
//!
//! `B(l) = Q^l/l - (2+7g) Q^{l/2}/l - l r e (Q^{l/2} + (2+7g_0) Q^{l/4})`,
//!
//! where `Q` is the constant field size, `g` and `g_0` the genera of `K` and
//! of the base, `r` the constant field degree and `e` the extension degree.
//! Multiplying by `l` and writing `z = Q^{l/4}` gives
//! `l B = z^4 - A z^2 - C z` with integers `A, C`, so every comparison reduces
//! to squaring integer expressions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

fn sign(a: &BigInt) -> Ordering {
    match a.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// Sign of `a + b sqrt(n)`.
pub fn sign_sqrt(a: &BigInt, b: &BigInt, n: &BigUint) -> Ordering {
    let (sa, sb) = (sign(a), sign(b));
    if sb == Ordering::Equal || n.is_zero() {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a^2 with b^2 n.
    let lhs = a * a;
    let rhs = b * b * BigInt::from(n.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Sign of `a + b n^{1/2} + c n^{1/4}`.
pub fn sign_quartic(a: &BigInt, b: &BigInt, c: &BigInt, n: &BigUint) -> Ordering {
    let s_alpha = sign_sqrt(a, b, n);
    let sc = sign(c);
    if sc == Ordering::Equal || n.is_zero() {
        return s_alpha;
    }
    if s_alpha == Ordering::Equal || s_alpha == sc {
        return sc;
    }
    // alpha^2 - c^2 n^{1/2} = a^2 + b^2 n + (2ab - c^2) n^{1/2}
    let nn = BigInt::from(n.clone());
    let p = a * a + b * b * &nn;
    let q = BigInt::from(2) * a * b - c * c;
    match sign_sqrt(&p, &q, n) {
        Ordering::Greater => s_alpha,
        Ordering::Less => sc,
        Ordering::Equal => Ordering::Equal,
    }
}

/// The bound `B(l)` held exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceCountBound {
    pub q: u64,
    pub l: u64,
    /// `Q^l`
    pub n: BigUint,
    /// Coefficient of `Q^{l/2}` in `l B`, negated.
    pub a: BigInt,
    /// Coefficient of `Q^{l/4}` in `l B`, negated.
    pub c: BigInt,
}

impl PlaceCountBound {
    pub fn new(q: u64, l: u64, genus: u64, base_genus: u64, const_ratio: u64, ext_deg: u64) -> Self {
        let l2 = BigInt::from(l) * BigInt::from(l) * BigInt::from(const_ratio) * BigInt::from(ext_deg);
        let a = BigInt::from(2 + 7 * genus) + &l2;
        let c = l2 * BigInt::from(2 + 7 * base_genus);
        PlaceCountBound {
            q,
            l,
            n: BigUint::from(q).pow(l as u32),
            a,
            c,
        }
    }

    /// Sign of `B(l)`.
    pub fn sign(&self) -> Ordering {
        sign_quartic(&BigInt::from(self.n.clone()), &-&self.a, &-&self.c, &self.n)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    /// `count >= B(l)`.
    pub fn satisfied_by(&self, count: u64) -> bool {
        let lhs = BigInt::from(self.l) * BigInt::from(count) - BigInt::from(self.n.clone());
        sign_quartic(&lhs, &self.a, &self.c, &self.n) != Ordering::Less
    }

    /// `floor(B(l))`.
    pub fn floor(&self) -> BigInt {
        let nn = BigInt::from(self.n.clone());
        let l = BigInt::from(self.l);
        let sqrt_up = BigInt::from(self.n.sqrt()) + 1;
        let quart_up = BigInt::from(self.n.nth_root(4)) + 1;
        // lo <= B < hi
        let spread: BigInt = &self.a * &sqrt_up + &self.c * &quart_up;
        let mut lo = -spread / &l - 1;
        let mut hi = &nn / &l + 1;
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) / 2;
            // l*mid <= n - a sqrt(n) - c n^{1/4} ?
            let s = sign_quartic(&(&nn - &l * &mid), &-&self.a, &-&self.c, &self.n);
            if s == Ordering::Less {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        lo
    }
}

impl fmt::Display for PlaceCountBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} - {}*{}^(1/2) - {}*{}^(1/4))/{}",
            self.n, self.a, self.n, self.c, self.n, self.l
        )
    }
}

/// `total >= Q^l/l - (2+7g) Q^{l/2}/l`, exactly.
pub fn weil_total_holds(q: u64, l: u64, genus: u64, total: u64) -> bool {
    let n = BigUint::from(q).pow(l as u32);
    let lhs = BigInt::from(l) * BigInt::from(total) - BigInt::from(n.clone());
    sign_sqrt(&lhs, &BigInt::from(2 + 7 * genus), &n) != Ordering::Less
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn sqrt_signs() {
        let n = BigUint::from(2u32);
        assert_eq!(sign_sqrt(&bi(-1), &bi(1), &n), Ordering::Greater);
        assert_eq!(sign_sqrt(&bi(-2), &bi(1), &n), Ordering::Less);
        assert_eq!(sign_sqrt(&bi(-3), &bi(1), &BigUint::from(9u32)), Ordering::Equal);
        // 10 - 2*4 - 1*2
        assert_eq!(
            sign_quartic(&bi(10), &bi(-2), &bi(-1), &BigUint::from(16u32)),
            Ordering::Equal
        );
        assert_eq!(
            sign_quartic(&bi(11), &bi(-2), &bi(-1), &BigUint::from(16u32)),
            Ordering::Greater
        );
    }

    #[test]
    fn bound_examples() {
        let b = PlaceCountBound::new(3, 3, 2, 0, 1, 2);
        assert_eq!(b.sign(), Ordering::Less);
        let big = PlaceCountBound::new(3125, 3, 2, 0, 1, 2);
        assert_eq!(big.sign(), Ordering::Greater);
        let q = 3125f64;
        let approx = q.powi(3) / 3.0 - 16.0 * q.powf(1.5) / 3.0 - 6.0 * (q.powf(1.5) + 2.0 * q.powf(0.75));
        assert_eq!(big.floor(), BigInt::from(approx.floor() as i64));
        assert!(big.satisfied_by(approx.ceil() as u64));
        assert!(!big.satisfied_by(approx.floor() as u64));
        let l1 = PlaceCountBound::new(3, 1, 0, 0, 1, 1);
        assert_eq!(l1.sign(), Ordering::Less);
    }

    #[test]
    fn weil_check() {
        // q = 3, l = 1, g = 2: 3 - 16 sqrt(3) < 0, any count passes.
        assert!(weil_total_holds(3, 1, 2, 0));
        // q = 101, l = 1, g = 0: 101 - 2 sqrt(101) ~ 80.9
        assert!(weil_total_holds(101, 1, 0, 81));
        assert!(!weil_total_holds(101, 1, 0, 80));
    }
}
