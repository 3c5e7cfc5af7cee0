//! JSON documents read and written by the `smallgen` binary.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{BasePlace, CurveModel, FFElement};
use crate::divisor::{Divisor, HeightValue};
use crate::error::{Error, Result};
use crate::oracle::PlaceCount;
use crate::pipeline::{place_count_lower_bound, AdmissibleDivisor, GeneratorCertificate, Rung, SearchStep};
use crate::poly::{irreducibles, Poly};
use crate::surd::weil_total_holds;

pub const SCHEMA: &str = "smallgen/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEcho {
    pub q: u64,
    pub m: usize,
    pub f: String,
}

impl InputEcho {
    pub fn of(curve: &CurveModel) -> Self {
        InputEcho {
            q: curve.field().order(),
            m: curve.m(),
            f: curve.f().to_string(),
        }
    }

    pub fn curve(&self) -> Result<Arc<CurveModel>> {
        CurveModel::from_text(self.q, self.m, &self.f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorEntry {
    pub base: String,
    pub branch: usize,
    pub coeff: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub schema: String,
    pub input: InputEcho,
    pub genus: usize,
    pub geometric_degree: usize,
    pub alpha: String,
    pub admissible_divisor: Vec<DivisorEntry>,
    pub divisor_degree: i64,
    pub height: HeightValue,
    pub upper_bound: HeightValue,
    pub lower_bound: HeightValue,
    pub minpoly: String,
    pub minpoly_degree: usize,
    pub rung: Rung,
    pub search_log: Vec<SearchStep>,
}

fn parse_base(curve: &CurveModel, s: &str) -> Result<BasePlace> {
    if s.trim() == "inf" {
        Ok(BasePlace::Infinite)
    } else {
        Ok(BasePlace::Finite(Poly::parse(curve.field(), s)?))
    }
}

impl CertificateDoc {
    pub fn from_certificate(cert: &GeneratorCertificate) -> Self {
        CertificateDoc {
            schema: SCHEMA.to_string(),
            input: InputEcho::of(&cert.curve),
            genus: cert.genus,
            geometric_degree: cert.geometric_degree,
            alpha: cert.alpha.to_string(),
            admissible_divisor: cert
                .admissible
                .divisor()
                .terms()
                .map(|(v, c)| DivisorEntry {
                    base: v.base().to_string(),
                    branch: v.branch(),
                    coeff: c,
                })
                .collect(),
            divisor_degree: cert.divisor_degree,
            height: cert.height,
            upper_bound: cert.upper_bound,
            lower_bound: cert.lower_bound,
            minpoly: cert.minpoly.clone(),
            minpoly_degree: cert.minpoly_degree,
            rung: cert.rung,
            search_log: cert.search_log.clone(),
        }
    }

    /// Rebuilds the curve and the claimed certificate; claims are not checked here.
    pub fn to_certificate(&self) -> Result<GeneratorCertificate> {
        if self.schema != SCHEMA {
            return Err(Error::Invalid(format!("unknown schema '{}'", self.schema)));
        }
        let curve = self.input.curve()?;
        let alpha = FFElement::parse(&curve, &self.alpha)?;
        let mut d = Divisor::zero(&curve);
        for e in &self.admissible_divisor {
            let base = parse_base(&curve, &e.base)?;
            d.add_term(curve.place(&base, e.branch)?, e.coeff);
        }
        Ok(GeneratorCertificate {
            curve,
            alpha,
            admissible: AdmissibleDivisor::from_divisor(d),
            divisor_degree: self.divisor_degree,
            genus: self.genus,
            geometric_degree: self.geometric_degree,
            height: self.height,
            upper_bound: self.upper_bound,
            lower_bound: self.lower_bound,
            minpoly: self.minpoly.clone(),
            minpoly_degree: self.minpoly_degree,
            rung: self.rung,
            search_log: self.search_log.clone(),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceRow {
    pub branch: usize,
    pub e: usize,
    pub f_res: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityRow {
    pub base: String,
    pub sum_ef: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisDoc {
    pub schema: String,
    pub input: InputEcho,
    pub genus: usize,
    pub n: usize,
    pub d_inf: usize,
    pub geometric_degree: usize,
    pub infinite_places: Vec<PlaceRow>,
    pub constant_field: String,
    /// `sum e f = m` above every base place of degree at most two and above infinity.
    pub ramification_identity: Vec<IdentityRow>,
    pub identity_holds: bool,
}

fn identity_row(curve: &CurveModel, base: &BasePlace) -> Result<IdentityRow> {
    let sum_ef = curve
        .places_above_base(base)?
        .iter()
        .map(|v| v.e() * v.f_res())
        .sum();
    Ok(IdentityRow {
        base: base.to_string(),
        sum_ef,
        ok: sum_ef == curve.m(),
    })
}

pub fn analyze(curve: &Arc<CurveModel>) -> Result<AnalysisDoc> {
    let mut rows = Vec::new();
    for d in 1..=2 {
        for p in irreducibles(curve.field(), d)? {
            rows.push(identity_row(curve, &BasePlace::Finite(p))?);
        }
    }
    rows.push(identity_row(curve, &BasePlace::Infinite)?);
    Ok(AnalysisDoc {
        schema: SCHEMA.to_string(),
        input: InputEcho::of(curve),
        genus: curve.genus(),
        n: curve.n(),
        d_inf: curve.d_inf(),
        geometric_degree: curve.geometric_degree(),
        infinite_places: curve
            .infinite_places()
            .iter()
            .map(|v| PlaceRow {
                branch: v.branch(),
                e: v.e(),
                f_res: v.f_res(),
                degree: v.degree(),
            })
            .collect(),
        constant_field: curve.constant_field_certificate(),
        identity_holds: rows.iter().all(|r| r.ok),
        ramification_identity: rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PlacesRow {
    pub l: usize,
    pub total: u64,
    pub fres1: u64,
    pub bound_sign: String,
    pub bound: String,
    pub bound_floor: String,
    /// `fres1 >= bound`; vacuous when the bound is not positive.
    pub fres1_meets_bound: bool,
    pub weil_total_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlacesDoc {
    pub schema: String,
    pub input: InputEcho,
    pub genus: usize,
    pub rows: Vec<PlacesRow>,
}

pub fn places_row(curve: &CurveModel, count: PlaceCount) -> PlacesRow {
    let bound = place_count_lower_bound(curve, count.l);
    let sign = bound.sign();
    PlacesRow {
        l: count.l,
        total: count.total,
        fres1: count.fres1,
        bound_sign: match sign {
            std::cmp::Ordering::Less => "negative",
            std::cmp::Ordering::Equal => "zero",
            std::cmp::Ordering::Greater => "positive",
        }
        .to_string(),
        bound: bound.to_string(),
        bound_floor: bound.floor().to_string(),
        fres1_meets_bound: !bound.is_positive() || bound.satisfied_by(count.fres1),
        weil_total_ok: weil_total_holds(
            curve.field().order(),
            count.l as u64,
            curve.genus() as u64,
            count.total,
        ),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{small_generator, verify_certificate, SearchOptions};

    #[test]
    fn certificate_round_trip() {
        for (q, m, f) in [(3, 2, "x^5+1"), (9, 2, "x^3+(u)*x+1"), (7, 3, "x^4+x+3")] {
            let c = CurveModel::from_text(q, m, f).unwrap();
            let cert = small_generator(&c, &SearchOptions::default()).unwrap();
            let doc = CertificateDoc::from_certificate(&cert);
            let text = to_json(&doc);
            let back: CertificateDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            let cert2 = back.to_certificate().unwrap();
            assert!(verify_certificate(&c, &cert2).unwrap().ok());
            assert_eq!(to_json(&CertificateDoc::from_certificate(&cert2)), text);
        }
    }

    #[test]
    fn analysis_of_running_example() {
        let c = CurveModel::from_text(3, 2, "x^5+1").unwrap();
        let a = analyze(&c).unwrap();
        assert_eq!(a.genus, 2);
        assert_eq!(a.d_inf, 1);
        assert!(a.identity_holds);
        assert_eq!(a.ramification_identity.len(), 3 + 3 + 1);
    }
}
