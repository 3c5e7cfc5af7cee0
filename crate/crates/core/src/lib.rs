//! Exact computations in superelliptic function fields `K = F_q(x)[y]/(y^m - f(x))`.
//!
//! The crate builds, from the bottom up:
//!
//! * [`gf`]: arithmetic in `F_p` and `F_{p^k}` with deterministic moduli and embeddings,
//! * [`poly`]: univariate polynomials, squarefree decomposition and full factorization,
//! * [`curve`]: the curve model, its places, valuations and element arithmetic,
//! * [`divisor`]: divisors, principal divisors, heights and conorms,
//! * [`rr`]: Riemann-Roch spaces by denominator clearing and exact elimination,
//! * [`pipeline`]: admissible divisors and certified small generators,
//! * [`oracle`]: brute-force cross-checks for tiny instances,
//! * [`report`]: JSON documents consumed and produced by the `smallgen` binary.

pub mod curve;
pub mod divisor;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod oracle;
mod parse;
pub mod pipeline;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod rr;
mod series;
pub mod surd;

pub use curve::{BasePlace, CurveModel, FFElement, MinimalPolynomial, Place};
pub use divisor::{Divisor, HeightValue};
pub use error::{Error, Result};
pub use gf::{field_make, Field, FieldCtx, FieldElement};
pub use pipeline::{AdmissibleDivisor, GeneratorCertificate, SearchOptions};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rr::RRSpace;
