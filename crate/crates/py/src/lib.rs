//! Python bindings for the severi toolkit: the three value types (fields,
//! homogeneous polynomials, point sets) plus the report operations. Reports
//! come back as JSON strings with the same stable keys as the CLI.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use severi_core::construct::{build_even_example, build_odd_example, verify_example};
use severi_core::curve;
use severi_core::field::FieldCtx;
use severi_core::instability::instability_analyze;
use severi_core::intersect::{self, BoundQuery, Parity, SurfaceCtx};
use severi_core::points::{self, PointSet};
use severi_core::poly::{self, HomPoly};
use severi_core::rational::{is_odd_integer, rat_parse};
use severi_core::record::{example_record_text, parse_field_spec};

fn err<T>(e: severi_core::Error) -> PyResult<T> {
    Err(PyValueError::new_err(e.to_string()))
}

fn parity_of(text: &str) -> PyResult<Parity> {
    match text {
        "even" => Ok(Parity::Even),
        "odd" => Ok(Parity::Odd),
        other => Err(PyValueError::new_err(format!("bad parity `{}`", other))),
    }
}

/// A coefficient field: the rationals (`Field("Q")`) or F_{p^k}
/// (`Field("101")`, `Field("7,2")`, `Field("7,2,1:0:1")`).
#[pyclass(frozen)]
struct Field {
    inner: FieldCtx,
}

#[pymethods]
impl Field {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        match parse_field_spec(spec) {
            Ok(inner) => Ok(Field { inner }),
            Err(e) => err(e),
        }
    }

    #[getter]
    fn characteristic(&self) -> u64 {
        self.inner.characteristic()
    }

    #[getter]
    fn order(&self) -> Option<u64> {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner)
    }
}

/// A sparse homogeneous polynomial in 4 or 5 variables.
#[pyclass(frozen)]
struct Poly {
    inner: HomPoly,
}

#[pymethods]
impl Poly {
    #[staticmethod]
    #[pyo3(signature = (text, field, nvars = 4))]
    fn parse(text: &str, field: &Field, nvars: usize) -> PyResult<Self> {
        match poly::parse_poly(text, &field.inner, nvars) {
            Ok(inner) => Ok(Poly { inner }),
            Err(e) => err(e),
        }
    }

    #[staticmethod]
    fn random(nvars: usize, degree: usize, field: &Field, seed: u64) -> Self {
        Poly {
            inner: poly::random_poly(nvars, degree, &field.inner, seed),
        }
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn num_terms(&self) -> usize {
        self.inner.num_terms()
    }

    fn add(&self, other: &Poly) -> PyResult<Self> {
        if self.inner.degree() != other.inner.degree() {
            return Err(PyValueError::new_err("degree mismatch"));
        }
        Ok(Poly {
            inner: self.inner.add(&other.inner),
        })
    }

    fn mul(&self, other: &Poly) -> Poly {
        Poly {
            inner: self.inner.mul(&other.inner),
        }
    }

    /// Evaluate at a point given as field-element strings.
    fn evaluate(&self, coords: Vec<String>) -> PyResult<String> {
        let ctx = self.inner.ctx();
        let pt: Result<Vec<_>, _> = coords.iter().map(|c| ctx.parse_elem(c)).collect();
        match pt.and_then(|pt| self.inner.eval(&pt)) {
            Ok(v) => Ok(v.to_string()),
            Err(e) => err(e),
        }
    }

    fn partials(&self) -> Vec<Poly> {
        self.inner
            .partials()
            .into_iter()
            .map(|p| Poly { inner: p })
            .collect()
    }

    /// Sylvester resultant eliminating variable `var` (5-variable inputs).
    fn resultant(&self, other: &Poly, var: usize) -> PyResult<Poly> {
        match poly::sylvester_resultant(&self.inner, &other.inner, var) {
            Ok(r) => Ok(Poly { inner: r }),
            Err(e) => err(e),
        }
    }

    fn divide_by_linear(&self, linear: &Poly, times: usize) -> PyResult<Poly> {
        match poly::divide_by_linear(&self.inner, &linear.inner, times) {
            Ok(r) => Ok(Poly { inner: r }),
            Err(e) => err(e),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.inner)
    }
}

/// A set of distinct projective points in P^3.
#[pyclass(frozen)]
struct Points {
    inner: PointSet,
}

#[pymethods]
impl Points {
    #[staticmethod]
    fn parse(text: &str, field: &Field) -> PyResult<Self> {
        match PointSet::parse(&field.inner, text) {
            Ok(inner) => Ok(Points { inner }),
            Err(e) => err(e),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Conditions imposed on degree-t forms, as a JSON report.
    fn conditions(&self, t: usize) -> String {
        points::conditions_imposed(&self.inner, t)
            .to_json()
            .to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Points({} points over {})",
            self.inner.len(),
            self.inner.ctx()
        )
    }
}

#[pyfunction]
fn monomial_count(nvars: usize, t: usize) -> usize {
    poly::monomial_basis(nvars, t).len()
}

#[pyfunction]
fn pa_of_multiple(d: i64, n: i64) -> PyResult<i64> {
    let surf = match SurfaceCtx::new(d, false) {
        Ok(s) => s,
        Err(e) => return err(e),
    };
    match intersect::pa_of_multiple(&surf, n) {
        Ok(v) => Ok(v),
        Err(e) => err(e),
    }
}

#[pyfunction]
fn h0_of_multiple(d: i64, m: i64) -> PyResult<i64> {
    match intersect::h0_of_multiple(d, m) {
        Ok(v) => Ok(v),
        Err(e) => err(e),
    }
}

/// Bound report as JSON. `kind` is one of plane, k3, pluricanonical,
/// surface_p3, quintic_odd, gln, gln_quintic_odd, gln_swapped.
#[pyfunction]
#[pyo3(signature = (kind, d=None, n=None, p=None, pa=None, ksq=None, ns_cyclic=false, delta=None))]
#[allow(clippy::too_many_arguments)]
fn bound_json(
    kind: &str,
    d: Option<i64>,
    n: Option<i64>,
    p: Option<String>,
    pa: Option<i64>,
    ksq: Option<i64>,
    ns_cyclic: bool,
    delta: Option<i64>,
) -> PyResult<String> {
    let need = |o: Option<i64>, name: &str| {
        o.ok_or_else(|| PyValueError::new_err(format!("kind {} requires {}", kind, name)))
    };
    let query = match kind {
        "plane" => BoundQuery::Plane { d: need(d, "d")? },
        "k3" => BoundQuery::K3 {
            pa: need(pa, "pa")?,
        },
        "pluricanonical" => {
            let p_text = p.ok_or_else(|| PyValueError::new_err("pluricanonical requires p"))?;
            let p_rat = rat_parse(&p_text)
                .ok_or_else(|| PyValueError::new_err(format!("bad rational p `{}`", p_text)))?;
            BoundQuery::Pluricanonical {
                p: p_rat,
                ksq: need(ksq, "ksq")?,
                ns_cyclic,
            }
        }
        "surface_p3" => BoundQuery::SurfaceP3 {
            d: need(d, "d")?,
            n: need(n, "n")?,
        },
        "quintic_odd" => {
            let p_text = p.ok_or_else(|| PyValueError::new_err("quintic_odd requires p"))?;
            let p_int: i64 = p_text
                .parse()
                .map_err(|_| PyValueError::new_err(format!("bad integer p `{}`", p_text)))?;
            BoundQuery::QuinticOdd { p: p_int }
        }
        "gln" => BoundQuery::Gln {
            d: need(d, "d")?,
            n: need(n, "n")?,
        },
        "gln_quintic_odd" => BoundQuery::GlnQuinticOdd { n: need(n, "n")? },
        "gln_swapped" => BoundQuery::GlnSwapped {
            d: need(d, "d")?,
            n: need(n, "n")?,
        },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown bound kind `{}`",
                other
            )))
        }
    };
    match intersect::severi_bound(&query, delta) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

#[pyfunction]
#[pyo3(signature = (lambda_, q, delta, ns_cyclic=false))]
fn instability_json(lambda_: &str, q: i64, delta: i64, ns_cyclic: bool) -> PyResult<String> {
    let l = rat_parse(lambda_)
        .ok_or_else(|| PyValueError::new_err(format!("bad rational lambda `{}`", lambda_)))?;
    let odd = ns_cyclic && is_odd_integer(&l);
    match instability_analyze(&l, q, delta, ns_cyclic, odd) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

/// (h0_ideal, conditions_predicted, superabundance_predicted) for CI(a,b,c).
#[pyfunction]
fn koszul_ci(a: usize, b: usize, c: usize, t: usize) -> (i64, i64, i64) {
    let k = points::koszul_ci_h0(a, b, c, t);
    (
        k.h0_ideal,
        k.conditions_predicted,
        k.superabundance_predicted,
    )
}

#[pyfunction]
#[pyo3(signature = (a, b, c, field, seed=0, retries=50))]
fn grid_ci(
    a: usize,
    b: usize,
    c: usize,
    field: &Field,
    seed: u64,
    retries: u32,
) -> PyResult<Points> {
    match points::random_grid_ci(a, b, c, &field.inner, seed, retries) {
        Ok((pts, ..)) => Ok(Points { inner: pts }),
        Err(e) => err(e),
    }
}

#[pyfunction]
fn socle_json(pts: &Points, a: usize, b: usize, c: usize) -> String {
    points::socle_check(&pts.inner, a, b, c)
        .to_json()
        .to_string()
}

/// Rational singular points of {surface = curve = 0} over F_{p^search_k}.
#[pyfunction]
#[pyo3(signature = (surface, curve, search_k=1))]
fn singular_points(surface: &Poly, curve: &Poly, search_k: usize) -> PyResult<Points> {
    let base = surface.inner.ctx().clone();
    let search_ctx = if search_k <= base.extension_degree() {
        base
    } else if base.extension_degree() > 1 {
        return Err(PyValueError::new_err(
            "extension base fields can only be searched over themselves",
        ));
    } else {
        match FieldCtx::finite(base.characteristic(), search_k, None) {
            Ok(c) => c,
            Err(e) => return err(e),
        }
    };
    match curve::singular_points(&surface.inner, &curve.inner, &search_ctx) {
        Ok(pts) => Ok(Points { inner: pts }),
        Err(e) => err(e),
    }
}

/// "node" or "degenerate" for a singular point given as `a,b,c,d`.
#[pyfunction]
fn node_classify(surface: &Poly, curve: &Poly, point: &str) -> PyResult<String> {
    let ctx = surface.inner.ctx();
    let coords: Result<Vec<_>, _> = point.split(',').map(|t| ctx.parse_elem(t)).collect();
    let coords = match coords {
        Ok(c) if c.len() == 4 => c,
        Ok(_) => return Err(PyValueError::new_err("point needs 4 coordinates")),
        Err(e) => return err(e),
    };
    let pt = [
        coords[0].clone(),
        coords[1].clone(),
        coords[2].clone(),
        coords[3].clone(),
    ];
    match curve::node_classify(&surface.inner, &curve.inner, &pt) {
        Ok(v) => Ok(v.as_str().to_string()),
        Err(e) => err(e),
    }
}

#[pyfunction]
#[pyo3(signature = (surface, curve, nodes, delta_expected=None))]
fn severi_json(
    surface: &Poly,
    curve: &Poly,
    nodes: &Points,
    delta_expected: Option<i64>,
) -> PyResult<String> {
    let rec = match curve::CurveRecord::new(
        surface.inner.clone(),
        curve.inner.clone(),
        nodes.inner.clone(),
        delta_expected,
    ) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    match curve::severi_report(&rec) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

#[pyfunction]
#[pyo3(signature = (surface, curve, nodes, delta_expected=None))]
fn gln_json(
    surface: &Poly,
    curve: &Poly,
    nodes: &Points,
    delta_expected: Option<i64>,
) -> PyResult<String> {
    let rec = match curve::CurveRecord::new(
        surface.inner.clone(),
        curve.inner.clone(),
        nodes.inner.clone(),
        delta_expected,
    ) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    match curve::gln_check(&rec) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

#[pyfunction]
fn plane_severi_json(d: i64, delta: i64) -> PyResult<String> {
    match curve::plane_severi_check(d, delta) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

#[pyfunction]
fn obstruction_dims_json(m: i64, parity: &str) -> PyResult<String> {
    match intersect::obstruction_locus_dims(m, parity_of(parity)?) {
        Ok(r) => Ok(r.to_json().to_string()),
        Err(e) => err(e),
    }
}

/// Build a sharp example and verify it; returns (record_text, report_json).
#[pyfunction]
#[pyo3(signature = (parity, m, field, seed=0, search_k=1))]
fn build_example(
    parity: &str,
    m: i64,
    field: &Field,
    seed: u64,
    search_k: usize,
) -> PyResult<(String, String)> {
    let rec = match parity_of(parity)? {
        Parity::Even => build_even_example(m, &field.inner, seed),
        Parity::Odd => build_odd_example(m, &field.inner, seed),
    };
    let rec = match rec {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    let report = match verify_example(&rec, search_k) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    let report_json = report.to_json();
    let text = example_record_text(&rec, Some(&report_json), None);
    Ok((text, report_json.to_string()))
}

#[pymodule]
fn severi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Poly>()?;
    m.add_class::<Points>()?;
    m.add_function(wrap_pyfunction!(monomial_count, m)?)?;
    m.add_function(wrap_pyfunction!(pa_of_multiple, m)?)?;
    m.add_function(wrap_pyfunction!(h0_of_multiple, m)?)?;
    m.add_function(wrap_pyfunction!(bound_json, m)?)?;
    m.add_function(wrap_pyfunction!(instability_json, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_ci, m)?)?;
    m.add_function(wrap_pyfunction!(grid_ci, m)?)?;
    m.add_function(wrap_pyfunction!(socle_json, m)?)?;
    m.add_function(wrap_pyfunction!(singular_points, m)?)?;
    m.add_function(wrap_pyfunction!(node_classify, m)?)?;
    m.add_function(wrap_pyfunction!(severi_json, m)?)?;
    m.add_function(wrap_pyfunction!(gln_json, m)?)?;
    m.add_function(wrap_pyfunction!(plane_severi_json, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction_dims_json, m)?)?;
    m.add_function(wrap_pyfunction!(build_example, m)?)?;
    Ok(())
}
