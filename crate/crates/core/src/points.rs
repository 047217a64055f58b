//! Zero-dimensional subschemes as explicit rational point sets in P^3:
//! conditions imposed on degree-t forms (the central rank test), the Koszul
//! count for complete-intersection point sets (the independent oracle), and
//! grid complete intersections built from products of linear forms.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::matrix::ExactMatrix;
use crate::poly::{monomial_basis, HomPoly};

/// A set of distinct projective points in P^3, normalized so the first
/// nonzero coordinate is 1. Construction rejects duplicates rather than
/// merging them, to surface configuration bugs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ctx: FieldCtx,
    points: Vec<[FieldElem; 4]>,
}

/// Normalize a projective representative: first nonzero coordinate becomes 1.
pub fn normalize_point(coords: &[FieldElem]) -> Result<[FieldElem; 4]> {
    assert_eq!(coords.len(), 4, "points live in P^3");
    let lead = coords
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::ZeroPoint)?;
    let inv = coords[lead].inv();
    let v: Vec<FieldElem> = coords.iter().map(|c| c.mul(&inv)).collect();
    Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

fn point_text(pt: &[FieldElem; 4]) -> String {
    pt.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl PointSet {
    pub fn empty(ctx: &FieldCtx) -> Self {
        PointSet {
            ctx: ctx.clone(),
            points: Vec::new(),
        }
    }

    /// Build from raw representatives; normalizes and rejects duplicates.
    pub fn new(ctx: &FieldCtx, raw: Vec<Vec<FieldElem>>) -> Result<Self> {
        let mut points = Vec::with_capacity(raw.len());
        for coords in raw {
            if coords.len() != 4 {
                return Err(Error::Parse(format!(
                    "expected 4 coordinates, got {}",
                    coords.len()
                )));
            }
            if coords.iter().any(|c| c.ctx() != ctx) {
                return Err(Error::FieldMismatch);
            }
            let pt = normalize_point(&coords)?;
            if points.contains(&pt) {
                return Err(Error::DuplicatePoint(point_text(&pt)));
            }
            points.push(pt);
        }
        Ok(PointSet {
            ctx: ctx.clone(),
            points,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[FieldElem; 4]> {
        self.points.iter()
    }

    pub fn point(&self, i: usize) -> &[FieldElem; 4] {
        &self.points[i]
    }

    /// One `a,b,c,d` line per point (the point-file format).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&point_text(p));
            out.push('\n');
        }
        out
    }

    /// Parse the point-file format: one point per line, 4 comma-separated
    /// field-element tokens; `#` starts a comment line.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split(',').collect();
            if tokens.len() != 4 {
                return Err(Error::Parse(format!(
                    "point line `{}` has {} coordinates, expected 4",
                    line,
                    tokens.len()
                )));
            }
            let coords = tokens
                .iter()
                .map(|t| ctx.parse_elem(t))
                .collect::<Result<Vec<_>>>()?;
            raw.push(coords);
        }
        PointSet::new(ctx, raw)
    }

    /// Canonical sort key for deterministic ordering over finite fields.
    pub fn sort_canonical(&mut self) {
        assert!(
            self.ctx.is_finite(),
            "canonical order is defined over finite fields"
        );
        self.points.sort_by_key(|p| {
            let k: Vec<u64> = p.iter().map(|c| c.index()).collect();
            k
        });
    }
}

/// Rank data of the evaluation map from degree-t forms on P^3 to functions
/// on the point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionsReport {
    pub t: usize,
    pub num_points: usize,
    /// binom(t+3, 3).
    pub ambient_dim: usize,
    /// Conditions imposed.
    pub rank: usize,
    /// s = num_points - rank.
    pub superabundance: usize,
    pub independent: bool,
}

impl ConditionsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "num_points": self.num_points,
            "ambient_dim": self.ambient_dim,
            "rank": self.rank,
            "superabundance": self.superabundance,
            "independent": self.independent,
        })
    }
}

/// Conditions imposed by the points on degree-t forms: the rank of the
/// (num_points) x binom(t+3,3) evaluation matrix. Projective rescaling of a
/// representative scales its row by lambda^t and cannot change the rank.
pub fn conditions_imposed(pts: &PointSet, t: usize) -> ConditionsReport {
    let basis = monomial_basis(4, t);
    let ctx = pts.ctx();
    let mut entries = Vec::with_capacity(pts.len() * basis.len());
    for p in pts.iter() {
        // power tables per coordinate
        let mut powers: Vec<Vec<FieldElem>> = Vec::with_capacity(4);
        for c in p.iter() {
            let mut tower = Vec::with_capacity(t + 1);
            tower.push(ctx.one());
            for e in 1..=t {
                let prev = &tower[e - 1];
                tower.push(prev.mul(c));
            }
            powers.push(tower);
        }
        for m in &basis {
            let mut v = ctx.one();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = v.mul(&powers[i][e as usize]);
                }
            }
            entries.push(v);
        }
    }
    let mat = ExactMatrix::from_entries(ctx, pts.len(), basis.len(), entries)
        .expect("uniform context by construction");
    let rank = mat.rank();
    ConditionsReport {
        t,
        num_points: pts.len(),
        ambient_dim: basis.len(),
        rank,
        superabundance: pts.len() - rank,
        independent: rank == pts.len(),
    }
}

/// Koszul prediction for a complete intersection of type (a, b, c) in P^3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulPrediction {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub t: usize,
    /// Dimension of the degree-t part of the ideal (a,b,c).
    pub h0_ideal: i64,
    pub conditions_predicted: i64,
    pub superabundance_predicted: i64,
}

impl KoszulPrediction {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a, "b": self.b, "c": self.c, "t": self.t,
            "h0_ideal": self.h0_ideal,
            "conditions_predicted": self.conditions_predicted,
            "superabundance_predicted": self.superabundance_predicted,
        })
    }
}

fn binom3(s: i64) -> i64 {
    if s < 3 {
        0
    } else {
        let v = s as i128 * (s as i128 - 1) * (s as i128 - 2) / 6;
        i64::try_from(v).expect("binomial out of i64 range")
    }
}

fn bdim(s: i64) -> i64 {
    binom3(s + 3)
}

/// Exact section count of the twisted ideal of a type-(a,b,c) complete
/// intersection, from the Koszul resolution:
/// h0 = B(t-a)+B(t-b)+B(t-c)-B(t-a-b)-B(t-a-c)-B(t-b-c)+B(t-a-b-c),
/// with B(s) = binom(s+3,3) and B = 0 for negative s. Serves as the
/// independent oracle for the rank engine.
pub fn koszul_ci_h0(a: usize, b: usize, c: usize, t: usize) -> KoszulPrediction {
    assert!(a >= 1 && b >= 1 && c >= 1);
    let (ai, bi, ci, ti) = (a as i64, b as i64, c as i64, t as i64);
    let h0 = bdim(ti - ai) + bdim(ti - bi) + bdim(ti - ci)
        - bdim(ti - ai - bi)
        - bdim(ti - ai - ci)
        - bdim(ti - bi - ci)
        + bdim(ti - ai - bi - ci);
    let conditions = bdim(ti) - h0;
    KoszulPrediction {
        a,
        b,
        c,
        t,
        h0_ideal: h0,
        conditions_predicted: conditions,
        superabundance_predicted: ai * bi * ci - conditions,
    }
}

/// The complete intersection of three products of linear forms: one form
/// from each list cuts a single point, and all a*b*c such points must be
/// distinct. Fully rational by construction.
pub fn grid_ci_points(
    lin_a: &[HomPoly],
    lin_b: &[HomPoly],
    lin_c: &[HomPoly],
    ctx: &FieldCtx,
) -> Result<PointSet> {
    for (name, list) in [("a", lin_a), ("b", lin_b), ("c", lin_c)] {
        if list.is_empty() {
            return Err(Error::Degenerate(format!(
                "empty linear-form list `{}`",
                name
            )));
        }
        for f in list {
            if f.degree() != 1 || f.nvars() != 4 || f.is_zero() || f.ctx() != ctx {
                return Err(Error::Degenerate(format!(
                    "list `{}` must hold nonzero linear forms in 4 variables over the given field",
                    name
                )));
            }
        }
    }
    let row_of = |f: &HomPoly| -> Vec<FieldElem> {
        let mut row = vec![ctx.zero(); 4];
        for (m, coef) in f.terms() {
            let var = m.exponents().iter().position(|&e| e == 1).unwrap();
            row[var] = coef.clone();
        }
        row
    };
    let mut raw = Vec::new();
    for fa in lin_a {
        for fb in lin_b {
            for fc in lin_c {
                let entries: Vec<FieldElem> = [fa, fb, fc].iter().flat_map(|f| row_of(f)).collect();
                let mat = ExactMatrix::from_entries(ctx, 3, 4, entries)?;
                let kernel = mat.kernel_basis();
                if kernel.len() != 1 {
                    return Err(Error::Degenerate(
                        "three linear forms do not meet in a single point".into(),
                    ));
                }
                raw.push(kernel.into_iter().next().unwrap());
            }
        }
    }
    PointSet::new(ctx, raw).map_err(|e| match e {
        Error::DuplicatePoint(p) => {
            Error::Degenerate(format!("coincident grid intersection at {}", p))
        }
        other => other,
    })
}

/// Socle test for a grid complete intersection of type (a, b, c): the last
/// degree failing to impose independent conditions is a+b+c-4, with
/// superabundance exactly 1 there and 0 one degree later. For a+b+c-4 < 0
/// the rank in negative degree is 0 by convention (no forms), so the s = 1
/// leg only applies to single points (a=b=c=1) vacuously.
pub fn socle_check(pts: &PointSet, a: usize, b: usize, c: usize) -> SocleReport {
    let socle = a as i64 + b as i64 + c as i64 - 4;
    let at_socle = if socle >= 0 {
        conditions_imposed(pts, socle as usize)
    } else {
        // degree -1: no forms at all, every point is unconditioned
        ConditionsReport {
            t: 0,
            num_points: pts.len(),
            ambient_dim: 0,
            rank: 0,
            superabundance: pts.len(),
            independent: pts.is_empty(),
        }
    };
    let above = conditions_imposed(pts, (socle + 1) as usize);
    let ok = at_socle.superabundance == 1 && above.superabundance == 0;
    SocleReport {
        socle_degree: socle,
        at_socle,
        above,
        ok,
    }
}

#[derive(Clone, Debug)]
pub struct SocleReport {
    pub socle_degree: i64,
    pub at_socle: ConditionsReport,
    pub above: ConditionsReport,
    pub ok: bool,
}

impl SocleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "socle_degree": self.socle_degree,
            "at_socle": self.at_socle.to_json(),
            "above": self.above.to_json(),
            "ok": self.ok,
        })
    }
}

/// Seeded generic linear forms for grid constructions, re-drawing on
/// degenerate configurations up to `retries`.
pub fn random_grid_ci(
    a: usize,
    b: usize,
    c: usize,
    ctx: &FieldCtx,
    seed: u64,
    retries: u32,
) -> Result<(PointSet, Vec<HomPoly>, Vec<HomPoly>, Vec<HomPoly>)> {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut attempt = 0;
    loop {
        let draw = |rng: &mut rand_chacha::ChaCha20Rng, count: usize| -> Vec<HomPoly> {
            (0..count)
                .map(|_| crate::poly::random_poly_with(rng, 4, 1, ctx))
                .collect()
        };
        let la = draw(&mut rng, a);
        let lb = draw(&mut rng, b);
        let lc = draw(&mut rng, c);
        if la.iter().chain(&lb).chain(&lc).all(|f| !f.is_zero()) {
            match grid_ci_points(&la, &lb, &lc, ctx) {
                Ok(pts) => return Ok((pts, la, lb, lc)),
                Err(Error::Degenerate(_)) => {}
                Err(e) => return Err(e),
            }
        }
        attempt += 1;
        if attempt > retries {
            return Err(Error::RetriesExhausted(format!(
                "no transverse ({},{},{}) grid found over {} in {} attempts",
                a, b, c, ctx, retries
            )));
        }
    }
}
