//! The superelliptic function field `K = F_q(x)[y]/(y^m - f(x))`.
//!
//! Under the model gates (`p` does not divide `m`, `f` squarefree and
//! nonconstant) the affine model is smooth, the constant field of `K` is
//! `F_q`, and the integral closure of `F_q[x]` in `K` is `F_q[x][y]`.
//!
//! Places above a finite prime `P` not dividing `f` are the irreducible
//! factors of `T^m - f(theta)` over `L = F_q[x]/P`, where `theta` is the
//! smallest root of `P` in `L`. Valuations there are read off the Hensel
//! lift of that factor in `L[[s]][T]`, `x = theta + s`. Primes dividing `f`
//! carry a single totally ramified place. Above infinity the places match the
//! irreducible factors of `T^d - lc(f)`, `d = gcd(m, deg f)`; when `d > 1`
//! they are reached through the parametrization `x = s^{-m/d}`,
//! `y = s^{-n/d} U(s)`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gf::{embedding, field, ArithOp, Embedding, Field};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::series::{self, Lifter};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasePlace {
    Finite(Poly),
    Infinite,
}

impl BasePlace {
    /// Degree over `F_q`; the infinite place has degree 1.
    pub fn degree(&self) -> usize {
        match self {
            BasePlace::Finite(p) => p.degree().unwrap_or(0),
            BasePlace::Infinite => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, BasePlace::Infinite)
    }

    pub fn prime(&self) -> Option<&Poly> {
        match self {
            BasePlace::Finite(p) => Some(p),
            BasePlace::Infinite => None,
        }
    }
}

impl PartialOrd for BasePlace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite primes in polynomial order, infinity last.
impl Ord for BasePlace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (BasePlace::Finite(a), BasePlace::Finite(b)) => a.cmp(b),
            (BasePlace::Finite(_), BasePlace::Infinite) => Less,
            (BasePlace::Infinite, BasePlace::Finite(_)) => Greater,
            (BasePlace::Infinite, BasePlace::Infinite) => Equal,
        }
    }
}

impl fmt::Display for BasePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePlace::Finite(p) => write!(f, "{p}"),
            BasePlace::Infinite => f.write_str("inf"),
        }
    }
}

/// Local data of one branch reached through a lifted factor.
pub(crate) struct Branch {
    field: Field,
    embed: Arc<Embedding>,
    theta: u64,
    infinite: bool,
    factor: Poly,
    lifter: Mutex<Lifter>,
    residues: Mutex<Option<(usize, Arc<Vec<Vec<Vec<u64>>>>)>>,
    m: usize,
}

impl Branch {
    fn residues(&self, n: usize) -> Arc<Vec<Vec<Vec<u64>>>> {
        let mut cache = self.residues.lock().unwrap();
        if let Some((have, r)) = cache.as_ref() {
            if *have >= n {
                return r.clone();
            }
        }
        let prec = cache.as_ref().map_or(n, |(have, _)| n.max(2 * have));
        let gser = self.lifter.lock().unwrap().factor_series(prec);
        let r = Arc::new(series::power_residues(&self.field, &gser, self.m, prec));
        *cache = Some((prec, r.clone()));
        r
    }

    /// Reduces `sum_b A_b(s) T^b` modulo `G` and `s^n`.
    pub(crate) fn combine(&self, a: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
        let res = self.residues(n);
        let t = self.factor.degree().unwrap();
        let mut w = vec![vec![0u64; n]; t];
        for (b, ab) in a.iter().enumerate() {
            if ab.iter().all(|&c| c == 0) {
                continue;
            }
            for (i, wi) in w.iter_mut().enumerate() {
                series::add_mul_trunc(&self.field, wi, ab, &res[b][i]);
            }
        }
        w
    }

    fn ord_of(&self, a: &[Vec<u64>], cap: usize) -> Result<i64> {
        let mut n = 4.min(cap.max(1));
        loop {
            let w = self.combine(a, n);
            if let Some(v) = w.iter().filter_map(|wi| series::valuation(wi)).min() {
                return Ok(v as i64);
            }
            if n >= cap {
                return Err(Error::PrecisionCap(format!(
                    "no nonzero coefficient below s^{cap}"
                )));
            }
            n = (2 * n).min(cap);
        }
    }

    pub(crate) fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn embedding(&self) -> &Embedding {
        &self.embed
    }

    pub(crate) fn theta(&self) -> u64 {
        self.theta
    }
}

#[derive(Clone)]
pub(crate) enum Local {
    Ramified,
    InfiniteTame,
    Branch(Arc<Branch>),
}

/// A place of `K`, identified by its base place and branch index.
#[derive(Clone)]
pub struct Place {
    base: BasePlace,
    branch: usize,
    e: usize,
    f_res: usize,
    local: Local,
}

impl Place {
    pub fn base(&self) -> &BasePlace {
        &self.base
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    /// Ramification index over the base place.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Residue degree over the base place.
    pub fn f_res(&self) -> usize {
        self.f_res
    }

    /// Degree over the constant field `F_q`.
    pub fn degree(&self) -> usize {
        self.f_res * self.base.degree()
    }

    pub fn is_infinite(&self) -> bool {
        self.base.is_infinite()
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }

    /// Residue field `F_{q^{deg}}`, built on demand.
    pub fn residue_field(&self, base: &Field) -> Result<Field> {
        field(base.p(), base.k() * self.degree())
    }

    /// Defining factor of the branch over its local coefficient field, with that
    /// field; `None` for ramified places and the single infinite place when
    /// `gcd(m, deg f) = 1`.
    pub fn branch_factor(&self) -> Option<(Field, Poly)> {
        match &self.local {
            Local::Branch(b) => Some((b.field.clone(), b.factor.clone())),
            _ => None,
        }
    }

    /// For finite unramified places: `theta`, the chosen root of the base prime
    /// in the local field.
    pub fn theta(&self) -> Option<u64> {
        match &self.local {
            Local::Branch(b) if !b.infinite => Some(b.theta),
            _ => None,
        }
    }

    /// For residue degree one branches: the value of `y` (finite places) or of
    /// `U(0)` (infinite places) at the place, in the local field.
    pub fn root(&self) -> Option<u64> {
        match &self.local {
            Local::Branch(b) if b.factor.degree() == Some(1) => {
                Some(b.field.neg(b.factor.coeff(0)))
            }
            _ => None,
        }
    }

    pub(crate) fn local(&self) -> &Local {
        &self.local
    }
}

impl PartialEq for Place {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.branch == other.branch
    }
}

impl Eq for Place {}

impl Hash for Place {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.branch.hash(state);
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.base
            .cmp(&other.base)
            .then(self.branch.cmp(&other.branch))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; branch {})", self.base, self.branch)
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place{} e={} f={}", self, self.e, self.f_res)
    }
}

pub struct CurveModel {
    field: Field,
    m: usize,
    f: Poly,
    n: usize,
    d_inf: usize,
    genus: usize,
    infinite: Vec<Place>,
    finite: Mutex<HashMap<Poly, Arc<Vec<Place>>>>,
}

impl fmt::Debug for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveModel(y^{} = {} over F_{})", self.m, self.f, self.field.order())
    }
}

impl CurveModel {
    pub fn new(base: &Field, m: usize, f: Poly) -> Result<Arc<Self>> {
        if f.field().p() != base.p() || f.field().k() != base.k() {
            return Err(Error::FieldMismatch);
        }
        if m < 2 {
            return Err(Error::InvalidModel("m must be at least 2".into()));
        }
        if (m as u64).is_multiple_of(base.p()) {
            return Err(Error::Wild { m, p: base.p() });
        }
        if f.is_constant() {
            return Err(Error::InvalidModel("f must be nonconstant".into()));
        }
        if !f.is_squarefree()? {
            return Err(Error::InvalidModel(format!("f = {f} is not squarefree")));
        }
        let n = f.degree().unwrap();
        let d_inf = m.gcd(&n);
        let twice = (m - 1) * (n - 1) + 1 - d_inf;
        let genus = twice / 2;
        let mut curve = CurveModel {
            field: base.clone(),
            m,
            f,
            n,
            d_inf,
            genus,
            infinite: Vec::new(),
            finite: Mutex::new(HashMap::new()),
        };
        curve.genus_self_test()?;
        curve.infinite = curve.build_infinite()?;
        Ok(Arc::new(curve))
    }

    /// Parses `f` and builds the model over `F_q`.
    pub fn from_text(q: u64, m: usize, f: &str) -> Result<Arc<Self>> {
        let (p, k) = crate::gf::prime_power(q).ok_or(Error::NotPrime(q))?;
        let base = crate::gf::field_make(p, k)?;
        let f = Poly::parse(&base, f)?;
        Self::new(&base, m, f)
    }

    /// Checks `dim L(N * conorm(inf)) = N m + 1 - g` by counting monomials.
    fn genus_self_test(&self) -> Result<()> {
        let (mp, np) = (self.m / self.d_inf, self.n / self.d_inf);
        let g = self.genus;
        let mut big_n = 1;
        while big_n * self.m + 1 < 2 * g {
            big_n += 1;
        }
        let bound = big_n * mp;
        let count: usize = (0..self.m)
            .filter(|&b| np * b <= bound)
            .map(|b| (bound - np * b) / mp + 1)
            .sum();
        if count + g != big_n * self.m + 1 {
            return Err(Error::InvalidModel(format!(
                "genus self-test failed: {count} monomials for N = {big_n}, genus {g}"
            )));
        }
        Ok(())
    }

    fn build_infinite(&self) -> Result<Vec<Place>> {
        if self.d_inf == 1 {
            return Ok(vec![Place {
                base: BasePlace::Infinite,
                branch: 0,
                e: self.m,
                f_res: 1,
                local: Local::InfiniteTame,
            }]);
        }
        let fq = &self.field;
        let (d, mp) = (self.d_inf, self.m / self.d_inf);
        let lc = self.f.lc();
        let mut t_d = vec![0u64; d + 1];
        t_d[d] = 1;
        t_d[0] = fq.neg(lc);
        let factors = Poly::from_raw(fq, t_d).distinct_irreducible_factors()?;
        let mut out = Vec::new();
        for (branch, phi) in factors.into_iter().enumerate() {
            let t = phi.degree().unwrap();
            let mut found = None;
            for j in 1..=mp {
                let ext = field(fq.p(), fq.k() * t * j)?;
                let w = phi.roots_in(&ext)?[0];
                let mut root_poly = vec![0u64; mp + 1];
                root_poly[mp] = 1;
                root_poly[0] = ext.neg(w);
                let roots = Poly::from_raw(&ext, root_poly).roots_in(&ext)?;
                if let Some(&rho) = roots.first() {
                    found = Some((ext, rho));
                    break;
                }
            }
            let (ext, rho) = found.expect("an m'-th root exists in degree t*m'");
            let emb = embedding(fq, &ext)?;
            // rev_f(s^{m'}) = sum_i f_i s^{m'(n - i)}
            let mut rhs = vec![0u64; mp * self.n + 1];
            for (i, &c) in self.f.coeffs().iter().enumerate() {
                rhs[mp * (self.n - i)] = emb.apply(c);
            }
            let g = Poly::from_raw(&ext, vec![ext.neg(rho), 1]);
            let lifter = Lifter::new(&ext, self.m, rhs, g.clone());
            out.push(Place {
                base: BasePlace::Infinite,
                branch,
                e: mp,
                f_res: t,
                local: Local::Branch(Arc::new(Branch {
                    field: ext,
                    embed: emb,
                    theta: 0,
                    infinite: true,
                    factor: g,
                    lifter: Mutex::new(lifter),
                    residues: Mutex::new(None),
                    m: self.m,
                })),
            });
        }
        Ok(out)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_inf(&self) -> usize {
        self.d_inf
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Geometric degree `d(K/k)`; equal to `m` because the constant field is `F_q`.
    pub fn geometric_degree(&self) -> usize {
        self.m
    }

    pub fn constant_field_certificate(&self) -> String {
        format!(
            "f = {} is squarefree and nonconstant and p = {} does not divide m = {}, \
             so y^m - f stays irreducible over every constant extension: K_0 = F_{}",
            self.f,
            self.field.p(),
            self.m,
            self.field.order()
        )
    }

    pub fn same_model(&self, other: &CurveModel) -> bool {
        self.m == other.m && self.f == other.f
    }

    pub fn infinite_places(&self) -> &[Place] {
        &self.infinite
    }

    /// Places above a monic irreducible `P`, in branch order.
    pub fn places_above(&self, p: &Poly) -> Result<Arc<Vec<Place>>> {
        if let Some(v) = self.finite.lock().unwrap().get(p) {
            return Ok(v.clone());
        }
        if p.field().p() != self.field.p() || p.field().k() != self.field.k() {
            return Err(Error::FieldMismatch);
        }
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::Reducible(p.to_string()));
        }
        let places = Arc::new(self.compute_places(p)?);
        self.finite
            .lock()
            .unwrap()
            .insert(p.clone(), places.clone());
        Ok(places)
    }

    pub fn places_above_base(&self, base: &BasePlace) -> Result<Vec<Place>> {
        match base {
            BasePlace::Finite(p) => Ok(self.places_above(p)?.as_ref().clone()),
            BasePlace::Infinite => Ok(self.infinite.clone()),
        }
    }

    fn compute_places(&self, p: &Poly) -> Result<Vec<Place>> {
        let base = BasePlace::Finite(p.clone());
        if self.f.rem(p).is_zero() {
            return Ok(vec![Place {
                base,
                branch: 0,
                e: self.m,
                f_res: 1,
                local: Local::Ramified,
            }]);
        }
        let l = p.degree().unwrap();
        let fq = &self.field;
        let big = field(fq.p(), fq.k() * l)?;
        let emb = embedding(fq, &big)?;
        let theta = p.roots_in(&big)?[0];
        let f_big = self.f.embed(&emb);
        let c = f_big.eval(theta);
        let mut t_m = vec![0u64; self.m + 1];
        t_m[self.m] = 1;
        t_m[0] = big.neg(c);
        let factors = Poly::from_raw(&big, t_m).distinct_irreducible_factors()?;
        let rhs = series::taylor_shift(&big, f_big.coeffs(), theta);
        Ok(factors
            .into_iter()
            .enumerate()
            .map(|(branch, g)| {
                let t = g.degree().unwrap();
                let lifter = Lifter::new(&big, self.m, rhs.clone(), g.clone());
                Place {
                    base: base.clone(),
                    branch,
                    e: 1,
                    f_res: t,
                    local: Local::Branch(Arc::new(Branch {
                        field: big.clone(),
                        embed: emb.clone(),
                        theta,
                        infinite: false,
                        factor: g,
                        lifter: Mutex::new(lifter),
                        residues: Mutex::new(None),
                        m: self.m,
                    })),
                }
            })
            .collect())
    }

    /// Resolves a place from its base and branch index.
    pub fn place(&self, base: &BasePlace, branch: usize) -> Result<Place> {
        let all = self.places_above_base(base)?;
        all.get(branch).cloned().ok_or_else(|| {
            Error::Invalid(format!("no branch {branch} above {base} ({} places)", all.len()))
        })
    }

    fn check_same(&self, z: &FFElement) -> Result<()> {
        if self.same_model(&z.curve) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Normalized valuation at `v`; `None` stands for `+infinity`.
    pub fn ord(&self, z: &FFElement, v: &Place) -> Result<Option<i64>> {
        self.check_same(z)?;
        if z.is_zero() {
            return Ok(None);
        }
        let m = self.m as i64;
        let n = self.n as i64;
        let val = match &v.local {
            Local::Ramified => {
                let p = v.base.prime().unwrap();
                z.c.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| m * c.ord_at(p).unwrap() + i as i64)
                    .min()
                    .unwrap()
            }
            Local::InfiniteTame => z
                .c
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| m * c.ord_inf().unwrap() - n * i as i64)
                .min()
                .unwrap(),
            Local::Branch(br) => {
                let (den, polys) = z.cleared();
                let dmax = polys.iter().map(|a| a.deg().max(0) as usize).max().unwrap();
                let zbound = self.m * dmax + self.n * (self.m - 1);
                if br.infinite {
                    let (mp, np) = (self.m / self.d_inf, self.n / self.d_inf);
                    let shift = mp * dmax + np * (self.m - 1);
                    let a = self.infinite_series(br, &polys, shift);
                    let o = br.ord_of(&a, zbound + shift + 2)?;
                    o - shift as i64 + mp as i64 * den.deg()
                } else {
                    let a: Vec<Vec<u64>> = polys
                        .iter()
                        .map(|ab| {
                            let e = ab.embed(&br.embed);
                            series::taylor_shift(&br.field, e.coeffs(), br.theta)
                        })
                        .collect();
                    let o = br.ord_of(&a, zbound + 2)?;
                    o - den.ord_at(v.base.prime().unwrap()) as i64
                }
            }
        };
        Ok(Some(val))
    }

    /// `s^shift * sum a_b(s^{-m'}) s^{-n' b} T^b` as series per `b`.
    pub(crate) fn infinite_series(&self, br: &Branch, polys: &[Poly], shift: usize) -> Vec<Vec<u64>> {
        let (mp, np) = (self.m / self.d_inf, self.n / self.d_inf);
        polys
            .iter()
            .enumerate()
            .map(|(b, ab)| {
                let mut s = vec![0u64; shift + 1];
                for (a, &c) in ab.coeffs().iter().enumerate() {
                    if c != 0 {
                        s[shift - mp * a - np * b] = br.embed.apply(c);
                    }
                }
                s
            })
            .collect()
    }

    /// Minimum of `ord` over the nonzero coordinates.
    pub fn ord_vector(&self, zs: &[FFElement], v: &Place) -> Result<i64> {
        let mut best: Option<i64> = None;
        for z in zs {
            if let Some(o) = self.ord(z, v)? {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
        best.ok_or(Error::ZeroTuple)
    }
}

/// An element `sum c_i y^i` of `K`.
#[derive(Clone)]
pub struct FFElement {
    curve: Arc<CurveModel>,
    c: Vec<RationalFunction>,
}

impl FFElement {
    pub fn new(curve: &Arc<CurveModel>, mut c: Vec<RationalFunction>) -> Result<Self> {
        if c.len() > curve.m {
            return Err(Error::DegreeMismatch(format!(
                "{} coordinates for m = {}",
                c.len(),
                curve.m
            )));
        }
        for ci in &c {
            if ci.field().p() != curve.field.p() || ci.field().k() != curve.field.k() {
                return Err(Error::FieldMismatch);
            }
        }
        c.resize(curve.m, RationalFunction::zero(&curve.field));
        Ok(FFElement {
            curve: curve.clone(),
            c,
        })
    }

    fn raw(curve: &Arc<CurveModel>, c: Vec<RationalFunction>) -> Self {
        FFElement {
            curve: curve.clone(),
            c,
        }
    }

    pub fn from_base(curve: &Arc<CurveModel>, r: RationalFunction) -> Self {
        let mut c = vec![RationalFunction::zero(&curve.field); curve.m];
        c[0] = r;
        Self::raw(curve, c)
    }

    pub fn zero(curve: &Arc<CurveModel>) -> Self {
        Self::from_base(curve, RationalFunction::zero(&curve.field))
    }

    pub fn one(curve: &Arc<CurveModel>) -> Self {
        Self::constant(curve, 1)
    }

    pub fn constant(curve: &Arc<CurveModel>, a: u64) -> Self {
        Self::from_base(curve, RationalFunction::constant(&curve.field, a))
    }

    pub fn x(curve: &Arc<CurveModel>) -> Self {
        Self::from_base(curve, RationalFunction::x(&curve.field))
    }

    pub fn y(curve: &Arc<CurveModel>) -> Self {
        Self::monomial(curve, 0, 1)
    }

    /// `x^a y^b` with `b < m`.
    pub fn monomial(curve: &Arc<CurveModel>, a: usize, b: usize) -> Self {
        let mut c = vec![RationalFunction::zero(&curve.field); curve.m];
        c[b] = RationalFunction::from_poly(Poly::monomial(&curve.field, 1, a));
        Self::raw(curve, c)
    }

    /// `sum a_b(x) y^b / den` from polynomial parts.
    pub fn from_polys(curve: &Arc<CurveModel>, parts: &[Poly], den: &Poly) -> Result<Self> {
        let c = parts
            .iter()
            .map(|a| RationalFunction::new(a.clone(), den.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(curve, c)
    }

    pub fn curve(&self) -> &Arc<CurveModel> {
        &self.curve
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    /// True for elements of `F_q(x)`.
    pub fn in_base_field(&self) -> bool {
        self.c[1..].iter().all(|c| c.is_zero())
    }

    /// The constant when the element lies in `K_0 = F_q`.
    pub fn as_constant(&self) -> Option<u64> {
        if self.in_base_field() {
            self.c[0].as_constant()
        } else {
            None
        }
    }

    /// Common monic denominator `B` and polynomials `a_b` with `self = sum a_b y^b / B`.
    pub fn cleared(&self) -> (Poly, Vec<Poly>) {
        let fld = &self.curve.field;
        let mut den = Poly::one(fld);
        for c in &self.c {
            if !c.den().is_one() {
                let g = den.gcd(c.den());
                den = &den * &c.den().div_exact(&g);
            }
        }
        let polys = self
            .c
            .iter()
            .map(|c| &c.num().clone() * &den.div_exact(c.den()))
            .collect();
        (den, polys)
    }

    pub fn scale(&self, a: u64) -> Self {
        Self::raw(&self.curve, self.c.iter().map(|c| c.scale(a)).collect())
    }

    pub fn mul_base(&self, r: &RationalFunction) -> Self {
        Self::raw(&self.curve, self.c.iter().map(|c| c * r).collect())
    }

    fn same_curve(&self, other: &Self) -> Result<()> {
        if self.curve.same_model(&other.curve) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect();
        Self::raw(&self.curve, c)
    }

    fn sub_impl(&self, other: &Self) -> Self {
        let c = self.c.iter().zip(&other.c).map(|(a, b)| a - b).collect();
        Self::raw(&self.curve, c)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let m = self.curve.m;
        let fld = &self.curve.field;
        let mut prod = vec![RationalFunction::zero(fld); 2 * m - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] = &prod[i + j] + &(a * b);
                }
            }
        }
        let f = RationalFunction::from_poly(self.curve.f.clone());
        for k in (m..2 * m - 1).rev() {
            if !prod[k].is_zero() {
                let t = &prod[k] * &f;
                prod[k - m] = &prod[k - m] + &t;
            }
        }
        prod.truncate(m);
        Self::raw(&self.curve, prod)
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.same_curve(other)?;
        Ok(match op {
            ArithOp::Add => self.add_impl(other),
            ArithOp::Sub => self.sub_impl(other),
            ArithOp::Mul => self.mul_impl(other),
            ArithOp::Div => self.mul_impl(&other.inv()?),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.curve);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            base = base.mul_impl(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.in_base_field() {
            return Ok(Self::from_base(&self.curve, self.c[0].inv()?));
        }
        let mp = self.minimal_polynomial();
        let c = &mp.coeffs;
        let r = c.len() - 1;
        // z^{-1} = -(z^{r-1} + c_{r-1} z^{r-2} + ... + c_1) / c_0
        let mut acc = Self::one(&self.curve);
        for j in (1..r).rev() {
            acc = &(&acc * self) + &Self::from_base(&self.curve, c[j].clone());
        }
        let scale = (-&c[0]).inv()?;
        Ok(acc.mul_base(&scale))
    }

    /// Minimal polynomial over `F_q(x)` by elimination on `1, z, z^2, ...`.
    pub fn minimal_polynomial(&self) -> MinimalPolynomial {
        let m = self.curve.m;
        let fld = self.curve.field.clone();
        let zero = RationalFunction::zero(&fld);
        let mut rows: Vec<(usize, Vec<RationalFunction>, Vec<RationalFunction>)> = Vec::new();
        let mut power = Self::one(&self.curve);
        for j in 0..=m {
            let mut v = power.c.clone();
            let mut combo = vec![zero.clone(); m + 1];
            combo[j] = RationalFunction::one(&fld);
            for (piv, row, rc) in &rows {
                let t = v[*piv].clone();
                if t.is_zero() {
                    continue;
                }
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a = &*a - &(&t * b);
                    }
                }
                for (a, b) in combo.iter_mut().zip(rc) {
                    if !b.is_zero() {
                        *a = &*a - &(&t * b);
                    }
                }
            }
            match v.iter().position(|a| !a.is_zero()) {
                None => {
                    combo.truncate(j + 1);
                    return MinimalPolynomial { coeffs: combo };
                }
                Some(piv) => {
                    let inv = v[piv].inv().unwrap();
                    let v = v.iter().map(|a| a * &inv).collect();
                    let combo = combo.iter().map(|a| a * &inv).collect();
                    rows.push((piv, v, combo));
                }
            }
            power = power.mul_impl(self);
        }
        unreachable!("m + 1 vectors in an m-dimensional space are dependent")
    }

    /// True iff `F_q(x)(z) = K`.
    pub fn is_generator(&self) -> bool {
        self.minimal_polynomial().degree() == self.curve.m
    }

    /// Norm to `F_q(x)`, as the determinant of multiplication by `self`.
    pub fn norm(&self) -> RationalFunction {
        let fld = &self.curve.field;
        let (den, polys) = self.cleared();
        let m = self.curve.m;
        // Column j holds the coordinates of W * y^j.
        let mut cols: Vec<Vec<Poly>> = Vec::with_capacity(m);
        let mut cur = polys.clone();
        for _ in 0..m {
            cols.push(cur.clone());
            // multiply by y: shift up, wrap y^m -> f
            let top = cur[m - 1].clone();
            let mut next = vec![Poly::zero(fld); m];
            next[1..m].clone_from_slice(&cur[..(m - 1)]);
            next[0] = &next[0] + &(&top * &self.curve.f);
            cur = next;
        }
        let det = bareiss_det(cols);
        RationalFunction::new(det, den.pow(m as u64)).unwrap()
    }

    pub fn parse(curve: &Arc<CurveModel>, s: &str) -> Result<Self> {
        let fld = &curve.field;
        let mut c = vec![RationalFunction::zero(fld); curve.m];
        let mut start = 0usize;
        let mut depth = 0i32;
        let mut pieces = Vec::new();
        for (i, ch) in s.char_indices() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                '+' if depth == 0 => {
                    pieces.push((start, &s[start..i]));
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push((start, &s[start..]));
        for (at, piece) in pieces {
            let (b, coeff) = parse_term(fld, piece, at, curve.m)?;
            c[b] = &c[b] + &coeff;
        }
        Self::new(curve, c)
    }
}

fn parse_term(fld: &Field, piece: &str, at: usize, m: usize) -> Result<(usize, RationalFunction)> {
    let lead = piece.len() - piece.trim_start().len();
    let t = piece.trim();
    let at = at + lead;
    if t.is_empty() {
        return Err(crate::parse::err(at, "empty term"));
    }
    let mut depth = 0i32;
    let mut ypos = None;
    for (i, ch) in t.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            'y' if depth == 0 => {
                ypos = Some(i);
                break;
            }
            _ => {}
        }
    }
    let (coef_text, b) = match ypos {
        None => (t, 0usize),
        Some(i) => {
            let rest = t[i + 1..].trim();
            let b = if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                e.trim()
                    .parse::<usize>()
                    .map_err(|_| crate::parse::err(at + i + 1, "bad exponent of y"))?
            } else {
                return Err(crate::parse::err(at + i + 1, "unexpected text after y"));
            };
            let head = t[..i].trim_end();
            let head = match head.strip_suffix('*') {
                Some(h) => h.trim_end(),
                None if head.is_empty() => head,
                None => return Err(crate::parse::err(at + i, "expected '*' before y")),
            };
            (head, b)
        }
    };
    if b >= m {
        return Err(crate::parse::err(at, format!("power y^{b} not reduced (m = {m})")));
    }
    let coeff = if coef_text.is_empty() {
        RationalFunction::one(fld)
    } else {
        RationalFunction::parse(fld, coef_text).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + at, msg },
            other => other,
        })?
    };
    Ok((b, coeff))
}

/// Fraction-free determinant over `F_q[x]`; `cols` is a square matrix.
fn bareiss_det(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    let fld = a[0][0].field().clone();
    let mut sign_flip = false;
    let mut prev = Poly::one(&fld);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign_flip = !sign_flip;
                }
                None => return Poly::zero(&fld),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.curve.same_model(&other.curve) && self.c == other.c
    }
}

impl Eq for FFElement {}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut s = format!("[{}]", c.num());
            if !c.den().is_one() {
                s.push_str(&format!("/[{}]", c.den()));
            }
            match i {
                0 => {}
                1 => s.push_str("*y"),
                _ => s.push_str(&format!("*y^{i}")),
            }
            parts.push(s);
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElement({self})")
    }
}

/// Panics when the operands live on different curves; use [`FFElement::arith`]
/// for a checked version.
impl Add for &FFElement {
    type Output = FFElement;
    fn add(self, rhs: &FFElement) -> FFElement {
        self.arith(rhs, ArithOp::Add).expect("same curve")
    }
}

impl Sub for &FFElement {
    type Output = FFElement;
    fn sub(self, rhs: &FFElement) -> FFElement {
        self.arith(rhs, ArithOp::Sub).expect("same curve")
    }
}

impl Mul for &FFElement {
    type Output = FFElement;
    fn mul(self, rhs: &FFElement) -> FFElement {
        self.arith(rhs, ArithOp::Mul).expect("same curve")
    }
}

impl Neg for &FFElement {
    type Output = FFElement;
    fn neg(self) -> FFElement {
        FFElement::raw(&self.curve, self.c.iter().map(|c| -c).collect())
    }
}

/// Monic polynomial in `T` over `F_q(x)`, coefficients low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalPolynomial {
    coeffs: Vec<RationalFunction>,
}

impl MinimalPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            parts.push(match (c.is_one(), i) {
                (true, 0) => "[1]".to_string(),
                (true, _) => var,
                (false, 0) => format!("[{c}]"),
                (false, _) => format!("[{c}]*{var}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}
