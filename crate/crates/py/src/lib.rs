//! Python bindings for the `smallgen` kernel.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use smallgen::curve::{BasePlace, CurveModel, FFElement, Place};
use smallgen::divisor::{height, height_of, principal_divisor, Divisor};
use smallgen::error::Error;
use smallgen::gf::{field_make, ArithOp, Field};
use smallgen::oracle::{count_places_exhaustive, count_places_kernel};
use smallgen::pipeline::{small_generator, verify_certificate, GeneratorCertificate, SearchOptions};
use smallgen::poly::Poly;
use smallgen::report::{analyze, to_json, CertificateDoc};
use smallgen::rr::rr_space;

create_exception!(smallgen_py, KernelError, PyException);
create_exception!(smallgen_py, CapExceeded, KernelError);
create_exception!(smallgen_py, SearchExhausted, KernelError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::FieldCap(_) | Error::EnumerationCap(_) | Error::PrecisionCap(_) => CapExceeded::new_err(msg),
        Error::SearchExhausted(_) => SearchExhausted::new_err(msg),
        Error::DivisionByZero => PyZeroDivisionError::new_err(msg),
        Error::NotPrime(_)
        | Error::Parse { .. }
        | Error::Wild { .. }
        | Error::InvalidModel(_)
        | Error::Reducible(_)
        | Error::Invalid(_)
        | Error::FieldMismatch
        | Error::ZeroPolynomial
        | Error::ZeroTuple => PyValueError::new_err(msg),
        _ => KernelError::new_err(msg),
    }
}

trait OrPyErr<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPyErr<T> for smallgen::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A finite field `F_{p^k}`; elements are integers `0 <= a < p^k`.
#[pyclass(name = "Field", frozen)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    fn new(p: u64, k: usize) -> PyResult<Self> {
        Ok(PyField(field_make(p, k).py()?))
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    fn check(&self, a: u64) -> PyResult<u64> {
        if a < self.0.order() {
            Ok(a)
        } else {
            Err(PyValueError::new_err(format!("{a} is not an element of F_{}", self.0.order())))
        }
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.add(self.check(a)?, self.check(b)?))
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.sub(self.check(a)?, self.check(b)?))
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.0.mul(self.check(a)?, self.check(b)?))
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u64> {
        Ok(self.0.pow(self.check(a)?, e))
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        self.0.inv(self.check(a)?).ok_or_else(|| py_err(Error::DivisionByZero))
    }

    fn format(&self, a: u64) -> PyResult<String> {
        Ok(self.0.format(self.check(a)?))
    }

    fn parse(&self, s: &str) -> PyResult<u64> {
        self.0.parse(s).py()
    }

    fn __repr__(&self) -> String {
        format!("Field({}, {})", self.0.p(), self.0.k())
    }
}

/// The curve `y^m = f(x)` over `F_q`.
#[pyclass(name = "Curve", frozen)]
struct PyCurve(Arc<CurveModel>);

#[pymethods]
impl PyCurve {
    #[new]
    fn new(q: u64, m: usize, f: &str) -> PyResult<Self> {
        Ok(PyCurve(CurveModel::from_text(q, m, f).py()?))
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.field().order()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn f(&self) -> String {
        self.0.f().to_string()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.0.genus()
    }

    #[getter]
    fn d_inf(&self) -> usize {
        self.0.d_inf()
    }

    #[getter]
    fn geometric_degree(&self) -> usize {
        self.0.geometric_degree()
    }

    fn infinite_places(&self) -> Vec<PyPlace> {
        self.0.infinite_places().iter().cloned().map(PyPlace).collect()
    }

    /// Places above the monic irreducible `p`, given as text.
    fn places_above(&self, p: &str) -> PyResult<Vec<PyPlace>> {
        let p = Poly::parse(self.0.field(), p).py()?;
        Ok(self.0.places_above(&p).py()?.iter().cloned().map(PyPlace).collect())
    }

    /// `(total, fres1)` for places of degree `l`, by the kernel or by point counting.
    #[pyo3(signature = (l, exhaustive = false))]
    fn place_count(&self, l: usize, exhaustive: bool) -> PyResult<(u64, u64)> {
        let c = if exhaustive {
            count_places_exhaustive(&self.0, l)
        } else {
            count_places_kernel(&self.0, l)
        }
        .py()?;
        Ok((c.total, c.fres1))
    }

    fn element(&self, text: &str) -> PyResult<PyElement> {
        Ok(PyElement(FFElement::parse(&self.0, text).py()?))
    }

    fn x(&self) -> PyElement {
        PyElement(FFElement::x(&self.0))
    }

    fn y(&self) -> PyElement {
        PyElement(FFElement::y(&self.0))
    }

    fn analyze(&self) -> PyResult<String> {
        Ok(to_json(&analyze(&self.0).py()?))
    }

    /// Riemann-Roch basis of `sum coeff * place`.
    fn rr_basis(&self, terms: Vec<(PyRef<'_, PyPlace>, i64)>) -> PyResult<Vec<PyElement>> {
        let d = Divisor::from_terms(&self.0, terms.iter().map(|(v, c)| (v.0.clone(), *c)));
        Ok(rr_space(&self.0, &d).py()?.basis().iter().cloned().map(PyElement).collect())
    }

    /// Height of the tuple `zs` as `(numerator, denominator)`.
    fn height(&self, zs: Vec<PyRef<'_, PyElement>>) -> PyResult<(i64, i64)> {
        let zs: Vec<FFElement> = zs.iter().map(|z| z.0.clone()).collect();
        let h = height(&self.0, &zs).py()?;
        Ok((h.numer(), h.denom()))
    }

    #[pyo3(signature = (workers = 0, delta = 8))]
    fn small_generator(&self, workers: usize, delta: usize) -> PyResult<PyCertificate> {
        Ok(PyCertificate(small_generator(&self.0, &SearchOptions { workers, delta }).py()?))
    }

    fn __repr__(&self) -> String {
        format!("Curve(y^{} = {} over F_{})", self.0.m(), self.0.f(), self.0.field().order())
    }
}

#[pyclass(name = "Place", frozen)]
#[derive(Clone)]
struct PyPlace(Place);

#[pymethods]
impl PyPlace {
    #[getter]
    fn base(&self) -> String {
        self.0.base().to_string()
    }

    #[getter]
    fn is_infinite(&self) -> bool {
        matches!(self.0.base(), BasePlace::Infinite)
    }

    #[getter]
    fn branch(&self) -> usize {
        self.0.branch()
    }

    #[getter]
    fn e(&self) -> usize {
        self.0.e()
    }

    #[getter]
    fn f_res(&self) -> usize {
        self.0.f_res()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn __repr__(&self) -> String {
        format!("Place({})", self.0)
    }
}

#[pyclass(name = "Element", frozen)]
struct PyElement(FFElement);

#[pymethods]
impl PyElement {
    fn __add__(&self, other: PyRef<'_, PyElement>) -> PyResult<PyElement> {
        Ok(PyElement(self.0.arith(&other.0, ArithOp::Add).py()?))
    }

    fn __sub__(&self, other: PyRef<'_, PyElement>) -> PyResult<PyElement> {
        Ok(PyElement(self.0.arith(&other.0, ArithOp::Sub).py()?))
    }

    fn __mul__(&self, other: PyRef<'_, PyElement>) -> PyResult<PyElement> {
        Ok(PyElement(self.0.arith(&other.0, ArithOp::Mul).py()?))
    }

    fn __truediv__(&self, other: PyRef<'_, PyElement>) -> PyResult<PyElement> {
        Ok(PyElement(self.0.arith(&other.0, ArithOp::Div).py()?))
    }

    fn __pow__(&self, e: u64, _modulo: Option<u64>) -> PyElement {
        PyElement(self.0.pow(e))
    }

    fn __eq__(&self, other: PyRef<'_, PyElement>) -> bool {
        self.0 == other.0
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inv(&self) -> PyResult<PyElement> {
        Ok(PyElement(self.0.inv().py()?))
    }

    fn norm(&self) -> String {
        self.0.norm().to_string()
    }

    fn minimal_polynomial(&self) -> String {
        self.0.minimal_polynomial().to_string()
    }

    fn is_generator(&self) -> bool {
        self.0.is_generator()
    }

    /// `h(1, z)` as `(numerator, denominator)`.
    fn height(&self) -> PyResult<(i64, i64)> {
        let h = height_of(self.0.curve(), &self.0).py()?;
        Ok((h.numer(), h.denom()))
    }

    /// Principal divisor as `[(place, order)]`.
    fn divisor(&self) -> PyResult<Vec<(PyPlace, i64)>> {
        let d = principal_divisor(self.0.curve(), std::slice::from_ref(&self.0)).py()?;
        Ok(d.terms().map(|(v, c)| (PyPlace(v.clone()), c)).collect())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.0)
    }
}

#[pyclass(name = "Certificate", frozen)]
struct PyCertificate(GeneratorCertificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn alpha(&self) -> PyElement {
        PyElement(self.0.alpha.clone())
    }

    #[getter]
    fn height(&self) -> (i64, i64) {
        (self.0.height.numer(), self.0.height.denom())
    }

    #[getter]
    fn upper_bound(&self) -> (i64, i64) {
        (self.0.upper_bound.numer(), self.0.upper_bound.denom())
    }

    #[getter]
    fn lower_bound(&self) -> (i64, i64) {
        (self.0.lower_bound.numer(), self.0.lower_bound.denom())
    }

    #[getter]
    fn rung(&self) -> String {
        self.0.rung.to_string()
    }

    fn places(&self) -> Vec<PyPlace> {
        self.0.admissible.places().into_iter().map(PyPlace).collect()
    }

    fn to_json(&self) -> String {
        to_json(&CertificateDoc::from_certificate(&self.0))
    }

    /// `(ok, report)` from rechecking every claim.
    fn verify(&self) -> PyResult<(bool, String)> {
        let rep = verify_certificate(&self.0.curve, &self.0).py()?;
        Ok((rep.ok(), rep.to_string()))
    }
}

/// Rechecks a certificate document; returns `(ok, report)`.
#[pyfunction]
fn verify_json(text: &str) -> PyResult<(bool, String)> {
    let doc: CertificateDoc =
        serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("malformed certificate: {e}")))?;
    let cert = doc.to_certificate().py()?;
    let rep = verify_certificate(&cert.curve, &cert).py()?;
    Ok((rep.ok(), rep.to_string()))
}

#[pymodule]
fn smallgen_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyPlace>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    m.add("KernelError", m.py().get_type::<KernelError>())?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("SearchExhausted", m.py().get_type::<SearchExhausted>())?;
    Ok(())
}
