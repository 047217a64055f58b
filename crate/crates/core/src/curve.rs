//! Analysis of a complete-intersection curve C = {F = G = 0} on a surface
//! S = {F = 0} in P^3: enumeration of rational singular points over a finite
//! field, the node/degenerate verdict via the restricted second-derivative
//! form, the Severi smoothness report, the geometric-linear-normality check,
//! and the plane Severi bookkeeping.
//!
//! Enumeration walks all q^3+q^2+q+1 normalized representatives of P^3(F_q).
//! Only rational singular points are found; completeness over the algebraic
//! closure is never claimed and callers must downgrade their claims when
//! delta_found < delta_expected.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::intersect::{h0_of_multiple, pa_of_multiple, severi_bound, BoundQuery, SurfaceCtx};
use crate::matrix::ExactMatrix;
use crate::points::{conditions_imposed, ConditionsReport, PointSet};
use crate::poly::HomPoly;

/// Hard cap on the search field size; the walk costs ~q^3 evaluations.
pub const ENUMERATION_CAP: u64 = 10_000_000;

const MAX_POW: usize = 32;

// ---------------------------------------------------------------------------
// Singular point enumeration
// ---------------------------------------------------------------------------

struct FlatPoly {
    terms: Vec<([u8; 4], u64)>,
}

impl FlatPoly {
    fn from_poly(f: &HomPoly) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| {
                let e = m.exponents();
                (
                    [e[0], e[1], e[2], e[3]],
                    c.coords().expect("prime field")[0],
                )
            })
            .collect();
        FlatPoly { terms }
    }

    #[inline]
    fn eval(&self, pows: &[[u64; MAX_POW]; 4], p: u64) -> u64 {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let t = crate::field::mul_mod(
                crate::field::mul_mod(*c, pows[0][e[0] as usize], p),
                crate::field::mul_mod(pows[1][e[1] as usize], pows[2][e[2] as usize], p),
                p,
            );
            acc =
                crate::field::add_mod(crate::field::mul_mod(t, pows[3][e[3] as usize], p), acc, p);
        }
        acc
    }
}

#[inline]
fn fill_pows(x: u64, table: &mut [u64; MAX_POW], maxdeg: usize, p: u64) {
    table[0] = 1 % p;
    for i in 1..=maxdeg {
        table[i] = crate::field::mul_mod(table[i - 1], x, p);
    }
}

struct Candidate {
    coords: [u64; 4], // element indices (prime path: residues)
    surface_singular: bool,
}

/// Walk one stratum {x_0 = .. = 0, x_lead = 1, free coordinates} of P^3 and
/// return candidates with F = G = 0 and Jacobian rank <= 1, prime-field path.
#[allow(clippy::too_many_arguments)]
fn scan_prime_stratum(
    lead: usize,
    fixed: &[u64],
    p: u64,
    maxdeg: usize,
    f: &FlatPoly,
    g: &FlatPoly,
    df: &[FlatPoly],
    dg: &[FlatPoly],
) -> Vec<Candidate> {
    // coordinates: 0 for i < lead, 1 at lead, then `fixed` values, then the
    // remaining positions iterate over all of F_p
    let free = 3 - lead - fixed.len();
    let mut pows = [[0u64; MAX_POW]; 4];
    for (i, t) in pows.iter_mut().enumerate() {
        let x = match i.cmp(&lead) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => {
                let off = i - lead - 1;
                if off < fixed.len() {
                    fixed[off]
                } else {
                    0 // placeholder, filled in the loops below
                }
            }
        };
        fill_pows(x, t, maxdeg, p);
    }
    let mut out = Vec::new();
    let mut walk = |coords: [u64; 4], pows: &[[u64; MAX_POW]; 4]| {
        if f.eval(pows, p) != 0 || g.eval(pows, p) != 0 {
            return;
        }
        let gf: Vec<u64> = df.iter().map(|d| d.eval(pows, p)).collect();
        let gg: Vec<u64> = dg.iter().map(|d| d.eval(pows, p)).collect();
        let mut rank_le_1 = true;
        'outer: for i in 0..4 {
            for j in (i + 1)..4 {
                let m = crate::field::sub_mod(
                    crate::field::mul_mod(gf[i], gg[j], p),
                    crate::field::mul_mod(gf[j], gg[i], p),
                    p,
                );
                if m != 0 {
                    rank_le_1 = false;
                    break 'outer;
                }
            }
        }
        if rank_le_1 {
            out.push(Candidate {
                coords,
                surface_singular: gf.iter().all(|&v| v == 0),
            });
        }
    };
    let mut coords = [0u64; 4];
    coords[lead] = 1;
    for (off, &v) in fixed.iter().enumerate() {
        coords[lead + 1 + off] = v;
    }
    match free {
        0 => walk(coords, &pows),
        1 => {
            for x in 0..p {
                coords[3] = x;
                fill_pows(x, &mut pows[3], maxdeg, p);
                walk(coords, &pows);
            }
        }
        2 => {
            for y in 0..p {
                coords[2] = y;
                fill_pows(y, &mut pows[2], maxdeg, p);
                for x in 0..p {
                    coords[3] = x;
                    fill_pows(x, &mut pows[3], maxdeg, p);
                    walk(coords, &pows);
                }
            }
        }
        _ => unreachable!("at most two free coordinates per task"),
    }
    out
}

/// Extension-field path: identical walk, with a shared power cache indexed by
/// element enumeration index.
#[allow(clippy::too_many_arguments)]
fn scan_ext_stratum(
    lead: usize,
    fixed: &[u64],
    ctx: &FieldCtx,
    elems: &[FieldElem],
    pow_cache: &[Vec<FieldElem>],
    f: &HomPoly,
    g: &HomPoly,
    df: &[HomPoly],
    dg: &[HomPoly],
) -> Vec<Candidate> {
    let q = elems.len() as u64;
    let free = 3 - lead - fixed.len();
    let mut idx = [0u64; 4];
    idx[lead] = 1; // element_by_index(1) = 1 for every F_{p^k}
    for (off, &v) in fixed.iter().enumerate() {
        idx[lead + 1 + off] = v;
    }
    let eval_at = |poly: &HomPoly, idx: &[u64; 4]| -> FieldElem {
        let mut acc = ctx.zero();
        for (m, c) in poly.terms() {
            let e = m.exponents();
            let mut t = c.clone();
            for v in 0..4 {
                if e[v] > 0 {
                    t = t.mul(&pow_cache[idx[v] as usize][e[v] as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    };
    let mut out = Vec::new();
    let mut walk = |idx: &[u64; 4]| {
        if !eval_at(f, idx).is_zero() || !eval_at(g, idx).is_zero() {
            return;
        }
        let gf: Vec<FieldElem> = df.iter().map(|d| eval_at(d, idx)).collect();
        let gg: Vec<FieldElem> = dg.iter().map(|d| eval_at(d, idx)).collect();
        let mut rank_le_1 = true;
        'outer: for i in 0..4 {
            for j in (i + 1)..4 {
                let m = gf[i].mul(&gg[j]).sub(&gf[j].mul(&gg[i]));
                if !m.is_zero() {
                    rank_le_1 = false;
                    break 'outer;
                }
            }
        }
        if rank_le_1 {
            out.push(Candidate {
                coords: *idx,
                surface_singular: gf.iter().all(|v| v.is_zero()),
            });
        }
    };
    match free {
        0 => walk(&idx),
        1 => {
            for x in 0..q {
                idx[3] = x;
                walk(&idx);
            }
        }
        2 => {
            for y in 0..q {
                idx[2] = y;
                for x in 0..q {
                    idx[3] = x;
                    walk(&idx);
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

/// All rational points P of P^3(F_q) with F(P) = G(P) = 0 and Jacobian
/// [grad F; grad G] of rank <= 1, i.e. the rational singular points of the
/// curve C = {F = G = 0}. Points come back normalized and in canonical
/// (stratum, coordinate-index) order, identical for serial and parallel runs.
///
/// Errors with [`Error::SurfaceSingular`] when the *surface* is singular at
/// any found point (grad F = 0 there): those points are reported, never
/// silently included.
pub fn singular_points(
    surface: &HomPoly,
    curve: &HomPoly,
    search_ctx: &FieldCtx,
) -> Result<PointSet> {
    if !search_ctx.is_finite() {
        return Err(Error::Hypothesis(
            "singular-point search needs a finite field".into(),
        ));
    }
    let f = surface.lift(search_ctx)?;
    let g = curve.lift(search_ctx)?;
    assert_eq!(f.nvars(), 4, "surface must live in P^3");
    assert_eq!(g.nvars(), 4, "curve must live in P^3");
    let q = search_ctx.order().ok_or(Error::FieldMismatch)?;
    if q > ENUMERATION_CAP {
        return Err(Error::EnumerationCap {
            q,
            cap: ENUMERATION_CAP,
        });
    }
    let p = search_ctx.characteristic();
    let need = f.degree().max(g.degree()) as u64;
    if p <= need {
        return Err(Error::CharacteristicTooSmall { p, needed: need });
    }
    assert!(
        f.degree() < MAX_POW && g.degree() < MAX_POW,
        "degree beyond power tables"
    );

    let df = f.partials();
    let dg = g.partials();

    // task list: (lead, fixed first free coordinate) so the big stratum
    // parallelizes; remaining strata are cheap single tasks
    let mut tasks: Vec<(usize, Vec<u64>)> = (0..q).map(|a| (0usize, vec![a])).collect();
    tasks.push((1, Vec::new()));
    tasks.push((2, Vec::new()));
    tasks.push((3, Vec::new()));

    let candidates: Vec<Candidate> = if search_ctx.extension_degree() == 1 {
        let ff = FlatPoly::from_poly(&f);
        let fg = FlatPoly::from_poly(&g);
        let fdf: Vec<FlatPoly> = df.iter().map(FlatPoly::from_poly).collect();
        let fdg: Vec<FlatPoly> = dg.iter().map(FlatPoly::from_poly).collect();
        let maxdeg = f.degree().max(g.degree());
        tasks
            .par_iter()
            .map(|(lead, fixed)| scan_prime_stratum(*lead, fixed, p, maxdeg, &ff, &fg, &fdf, &fdg))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        let elems: Vec<FieldElem> = (0..q).map(|i| search_ctx.element_by_index(i)).collect();
        let maxdeg = f.degree().max(g.degree());
        let pow_cache: Vec<Vec<FieldElem>> = elems
            .iter()
            .map(|e| {
                let mut tower = Vec::with_capacity(maxdeg + 1);
                tower.push(search_ctx.one());
                for i in 1..=maxdeg {
                    let prev: &FieldElem = &tower[i - 1];
                    tower.push(prev.mul(e));
                }
                tower
            })
            .collect();
        tasks
            .par_iter()
            .map(|(lead, fixed)| {
                scan_ext_stratum(
                    *lead, fixed, search_ctx, &elems, &pow_cache, &f, &g, &df, &dg,
                )
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };

    let to_point = |c: &Candidate| -> [FieldElem; 4] {
        [
            search_ctx.element_by_index(c.coords[0]),
            search_ctx.element_by_index(c.coords[1]),
            search_ctx.element_by_index(c.coords[2]),
            search_ctx.element_by_index(c.coords[3]),
        ]
    };
    let bad: Vec<String> = candidates
        .iter()
        .filter(|c| c.surface_singular)
        .map(|c| {
            let pt = to_point(c);
            pt.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::SurfaceSingular(bad));
    }
    let raw: Vec<Vec<FieldElem>> = candidates.iter().map(|c| to_point(c).to_vec()).collect();
    let mut pts = PointSet::new(search_ctx, raw)?;
    pts.sort_canonical();
    Ok(pts)
}

/// Re-assert, independently of the enumeration path, that P is a singular
/// point of {F = G = 0}: both values and all six 2x2 Jacobian minors vanish.
pub fn is_singular_point(surface: &HomPoly, curve: &HomPoly, pt: &[FieldElem; 4]) -> Result<bool> {
    if !surface.eval(pt)?.is_zero() || !curve.eval(pt)?.is_zero() {
        return Ok(false);
    }
    let gf: Vec<FieldElem> = surface
        .partials()
        .iter()
        .map(|d| d.eval(pt))
        .collect::<Result<_>>()?;
    let gg: Vec<FieldElem> = curve
        .partials()
        .iter()
        .map(|d| d.eval(pt))
        .collect::<Result<_>>()?;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if !gf[i].mul(&gg[j]).sub(&gf[j].mul(&gg[i])).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Node classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeType {
    Node,
    Degenerate,
}

impl NodeType {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeType::Node => "node",
            NodeType::Degenerate => "degenerate",
        }
    }
}

/// Decide whether the singular point P of C = {F = G = 0} is an ordinary
/// double point. With grad F(P) != 0 and grad G(P) = c grad F(P), the
/// second-derivative matrix of H = G - cF at P restricts to a quadratic form
/// on the tangent plane {v : grad F(P).v = 0}; the Euler direction P lies in
/// its radical, and P is a node exactly when the form is nondegenerate on a
/// complement of P (nonzero 2x2 determinant).
///
/// Needs p > max(deg F, deg G) and p != 2.
pub fn node_classify(surface: &HomPoly, curve: &HomPoly, pt: &[FieldElem; 4]) -> Result<NodeType> {
    let ctx = surface.ctx().clone();
    if !ctx.is_finite() {
        return Err(Error::Hypothesis(
            "node classification works over finite fields".into(),
        ));
    }
    assert!(curve.ctx() == &ctx, "mixed field contexts");
    let p = ctx.characteristic();
    let need = surface.degree().max(curve.degree()) as u64;
    if p <= need || p == 2 {
        return Err(Error::CharacteristicTooSmall {
            p,
            needed: need.max(2),
        });
    }
    let text = || {
        pt.iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let gf: Vec<FieldElem> = surface
        .partials()
        .iter()
        .map(|d| d.eval(pt))
        .collect::<Result<_>>()?;
    let gg: Vec<FieldElem> = curve
        .partials()
        .iter()
        .map(|d| d.eval(pt))
        .collect::<Result<_>>()?;
    if gf.iter().all(|v| v.is_zero()) {
        return Err(Error::SurfaceSingular(vec![text()]));
    }
    if !is_singular_point(surface, curve, pt)? {
        return Err(Error::NotASingularPoint(text()));
    }
    let lead = gf.iter().position(|v| !v.is_zero()).unwrap();
    let c = gg[lead].div(&gf[lead]);

    // M = Hess(G)(P) - c * Hess(F)(P)
    let hess_at = |f: &HomPoly| -> Result<Vec<Vec<FieldElem>>> {
        let firsts = f.partials();
        let mut rows = Vec::with_capacity(4);
        for di in &firsts {
            let seconds = di.partials();
            let mut row = Vec::with_capacity(4);
            for dj in &seconds {
                row.push(dj.eval(pt)?);
            }
            rows.push(row);
        }
        Ok(rows)
    };
    let hf = hess_at(surface)?;
    let hg = hess_at(curve)?;
    let mut m = vec![vec![ctx.zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = hg[i][j].sub(&c.mul(&hf[i][j]));
        }
    }

    // tangent space T = ker(grad F(P)), which contains the Euler direction P
    let grad_mat = ExactMatrix::from_entries(&ctx, 1, 4, gf.clone())?;
    let kernel = grad_mat.kernel_basis();
    debug_assert_eq!(kernel.len(), 3);
    // complete {P} to a basis of T
    let mut basis: Vec<Vec<FieldElem>> = vec![pt.to_vec()];
    for cand in kernel {
        if basis.len() == 3 {
            break;
        }
        let mut entries = Vec::new();
        for b in &basis {
            entries.extend(b.iter().cloned());
        }
        entries.extend(cand.iter().cloned());
        let rank = ExactMatrix::from_entries(&ctx, basis.len() + 1, 4, entries)?.rank();
        if rank == basis.len() + 1 {
            basis.push(cand);
        }
    }
    assert_eq!(
        basis.len(),
        3,
        "tangent plane must contain P with codimension 2 to spare"
    );
    let apply = |v: &[FieldElem], w: &[FieldElem]| -> FieldElem {
        let mut acc = ctx.zero();
        for i in 0..4 {
            for j in 0..4 {
                acc = acc.add(&v[i].mul(&m[i][j]).mul(&w[j]));
            }
        }
        acc
    };
    let (v1, v2) = (&basis[1], &basis[2]);
    let det = apply(v1, v1)
        .mul(&apply(v2, v2))
        .sub(&apply(v1, v2).mul(&apply(v2, v1)));
    Ok(if det.is_zero() {
        NodeType::Degenerate
    } else {
        NodeType::Node
    })
}

// ---------------------------------------------------------------------------
// Records and reports
// ---------------------------------------------------------------------------

/// A complete-intersection curve C = {F = G = 0} on S = {F = 0}, together
/// with the rational singular points found (or supplied) for it.
#[derive(Clone, Debug)]
pub struct CurveRecord {
    pub surface: HomPoly,
    pub curve: HomPoly,
    pub nodes: PointSet,
    pub delta_expected: Option<i64>,
}

impl CurveRecord {
    /// Validates that every supplied node really is a singular point of the
    /// curve (values and all Jacobian minors vanish).
    pub fn new(
        surface: HomPoly,
        curve: HomPoly,
        nodes: PointSet,
        delta_expected: Option<i64>,
    ) -> Result<Self> {
        assert_eq!(surface.nvars(), 4);
        assert_eq!(curve.nvars(), 4);
        if surface.ctx() != curve.ctx() || nodes.ctx() != surface.ctx() {
            return Err(Error::MixedContexts);
        }
        if let Some(expected) = delta_expected {
            // rational singular points are a subset of all nodes
            if nodes.len() as i64 > expected {
                return Err(Error::Hypothesis(format!(
                    "{} singular points found but only {} expected",
                    nodes.len(),
                    expected
                )));
            }
        }
        for pt in nodes.iter() {
            if !is_singular_point(&surface, &curve, pt)? {
                let text = pt
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                return Err(Error::NotASingularPoint(text));
            }
        }
        Ok(CurveRecord {
            surface,
            curve,
            nodes,
            delta_expected,
        })
    }

    pub fn d(&self) -> i64 {
        self.surface.degree() as i64
    }

    pub fn n(&self) -> i64 {
        self.curve.degree() as i64
    }

    pub fn delta_found(&self) -> usize {
        self.nodes.len()
    }

    fn base_flags(&self) -> Vec<String> {
        let mut flags = vec!["irreducibility_unverified".to_string()];
        if let Some(exp) = self.delta_expected {
            if (self.delta_found() as i64) < exp {
                flags.push("partial_node_set".to_string());
            }
        } else {
            flags.push("delta_expected_unknown".to_string());
        }
        flags
    }
}

/// Tangent-space bookkeeping for the Severi variety at C.
#[derive(Clone, Debug)]
pub struct SeveriReport {
    pub d: i64,
    pub n: i64,
    pub delta_found: usize,
    pub p_a: i64,
    /// Geometric genus p_a - delta.
    pub g: i64,
    pub h0: i64,
    pub rank_at_n: usize,
    /// h0 - rank - 1.
    pub tangent_dim: i64,
    /// h0 - 1 - delta.
    pub expected_dim: i64,
    pub smooth_expected: bool,
    /// h^1 of the twisted node ideal: delta - rank.
    pub h1_ideal: usize,
    pub bound_note: String,
    pub flags: Vec<String>,
}

impl SeveriReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "n": self.n,
            "delta_found": self.delta_found,
            "p_a": self.p_a,
            "g": self.g,
            "h0": self.h0,
            "rank": self.rank_at_n,
            "tangent_dim": self.tangent_dim,
            "expected_dim": self.expected_dim,
            "smooth_expected": self.smooth_expected,
            "h1": self.h1_ideal,
            "bound_note": self.bound_note,
            "flags": self.flags,
        })
    }
}

/// Severi smoothness bookkeeping at C from the rank of the node conditions
/// in degree n. Requires at least one node.
pub fn severi_report(rec: &CurveRecord) -> Result<SeveriReport> {
    if rec.nodes.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let (d, n) = (rec.d(), rec.n());
    let delta = rec.delta_found();
    let surf = SurfaceCtx::new(d, false)?;
    let p_a = pa_of_multiple(&surf, n)?;
    let h0 = h0_of_multiple(d, n)?;
    let cond = conditions_imposed(&rec.nodes, n as usize);
    let rank = cond.rank;
    let tangent_dim = h0 - rank as i64 - 1;
    let expected_dim = h0 - 1 - delta as i64;
    let h1 = delta - rank;
    assert!(tangent_dim >= expected_dim);
    assert_eq!(tangent_dim - expected_dim, h1 as i64);
    let bound_note = if d >= 5 && n >= 2 * d - 8 {
        let b = severi_bound(&BoundQuery::SurfaceP3 { d, n }, Some(delta as i64))?;
        if b.delta_admissible == Some(true) {
            format!(
                "delta = {} below bound {}: smoothness of codimension delta guaranteed",
                delta,
                crate::rational::rat_str(&b.bound_value)
            )
        } else {
            format!(
                "delta = {} at/above bound {}: no smoothness guarantee",
                delta,
                crate::rational::rat_str(&b.bound_value)
            )
        }
    } else {
        "instability bound not applicable (need d >= 5 and n >= 2d-8)".to_string()
    };
    Ok(SeveriReport {
        d,
        n,
        delta_found: delta,
        p_a,
        g: p_a - delta as i64,
        h0,
        rank_at_n: rank,
        tangent_dim,
        expected_dim,
        smooth_expected: rank == delta,
        h1_ideal: h1,
        bound_note,
        flags: rec.base_flags(),
    })
}

/// Geometric-linear-normality verdict via the rank test in degree n + d - 5.
#[derive(Clone, Debug)]
pub struct GlnReport {
    pub d: i64,
    pub n: i64,
    pub delta_found: usize,
    pub test_degree: i64,
    pub conditions: ConditionsReport,
    /// 4 + superabundance: sections of the pulled-back hyperplane bundle.
    pub h0_nu_h: i64,
    pub gln: bool,
    pub note: String,
    pub flags: Vec<String>,
}

impl GlnReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "n": self.n,
            "delta_found": self.delta_found,
            "test_degree": self.test_degree,
            "rank": self.conditions.rank,
            "superabundance": self.conditions.superabundance,
            "h0_nu_H": self.h0_nu_h,
            "gln": self.gln,
            "note": self.note,
            "flags": self.flags,
        })
    }
}

/// C is geometrically linearly normal iff its nodes impose independent
/// conditions in degree n + d - 5. A smooth complete intersection (no nodes)
/// is trivially linearly normal.
pub fn gln_check(rec: &CurveRecord) -> Result<GlnReport> {
    let (d, n) = (rec.d(), rec.n());
    let test_degree = n + d - 5;
    if test_degree < 0 {
        return Err(Error::Hypothesis(format!(
            "test degree n + d - 5 = {} is negative",
            test_degree
        )));
    }
    let conditions = conditions_imposed(&rec.nodes, test_degree as usize);
    let s = conditions.superabundance;
    let note = if d == 5 {
        format!(
            "d = 5: test degree equals n = {}, so linear normality is equivalent to Severi smoothness at C",
            n
        )
    } else {
        String::new()
    };
    Ok(GlnReport {
        d,
        n,
        delta_found: rec.delta_found(),
        test_degree,
        conditions,
        h0_nu_h: 4 + s as i64,
        gln: s == 0,
        note,
        flags: rec.base_flags(),
    })
}

/// Plane Severi bookkeeping: dimension, genus, and the non-speciality degree
/// identity d^2 - 2 delta = 2g - 2 + 3d that drives the smoothness proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneSeveriReport {
    pub d: i64,
    pub delta: i64,
    pub p_a: i64,
    pub dim: i64,
    pub genus: i64,
    pub identity_lhs: i64,
    pub identity_rhs: i64,
}

impl PlaneSeveriReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "delta": self.delta,
            "p_a": self.p_a,
            "dim": self.dim,
            "genus": self.genus,
            "identity": format!("{} = {}", self.identity_lhs, self.identity_rhs),
        })
    }
}

pub fn plane_severi_check(d: i64, delta: i64) -> Result<PlaneSeveriReport> {
    if d < 3 {
        return Err(Error::Hypothesis(format!(
            "plane case needs d >= 3, got {}",
            d
        )));
    }
    let p_a = (d - 1) * (d - 2) / 2;
    if delta < 1 || delta > p_a {
        return Err(Error::Hypothesis(format!(
            "delta must satisfy 1 <= delta <= p_a = {}, got {}",
            p_a, delta
        )));
    }
    let dim = d * (d + 3) / 2 - delta;
    let genus = p_a - delta;
    let lhs = d * d - 2 * delta;
    let rhs = 2 * genus - 2 + 3 * d;
    assert_eq!(lhs, rhs, "degree identity must hold");
    Ok(PlaneSeveriReport {
        d,
        delta,
        p_a,
        dim,
        genus,
        identity_lhs: lhs,
        identity_rhs: rhs,
    })
}
