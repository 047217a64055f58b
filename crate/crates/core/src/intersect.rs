//! The pure-number layer: intersection theory on a smooth degree-d surface
//! in P^3 with cyclic Neron-Severi group, arithmetic genus and h^0 counts,
//! and every node-count bound this toolkit knows about.
//!
//! All values are exact rationals; comparisons with delta are exact. The
//! sharpness claims are equalities, so nothing is ever rounded.

use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, floor_i64, is_odd_integer, rat, rat_i, rat_str};

/// Numeric model of a smooth degree-d surface S in P^3: hyperplane class H
/// with H^2 = d and K_S = (d-4)H. With `ns_cyclic` every divisor class is an
/// integer multiple of H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceCtx {
    d: i64,
    ns_cyclic: bool,
}

impl SurfaceCtx {
    pub fn new(d: i64, ns_cyclic: bool) -> Result<Self> {
        if d < 1 {
            return Err(Error::Hypothesis("surface degree d >= 1".into()));
        }
        Ok(SurfaceCtx { d, ns_cyclic })
    }

    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn ns_cyclic(&self) -> bool {
        self.ns_cyclic
    }

    /// H^2 = d.
    pub fn h_sq(&self) -> i64 {
        self.d
    }

    /// K_S = k_coeff * H.
    pub fn k_coeff(&self) -> i64 {
        self.d - 4
    }

    /// K_S^2 = (d-4)^2 d.
    pub fn k_sq(&self) -> i64 {
        (self.d - 4) * (self.d - 4) * self.d
    }

    /// (aH).(bH) = a*b*d.
    pub fn pair(&self, a: i64, b: i64) -> i64 {
        a * b * self.d
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

/// Arithmetic genus of a curve in |nH| on a degree-d surface:
/// p_a = n*d*(n + d - 4)/2 + 1. The product is always even.
pub fn pa_of_multiple(surf: &SurfaceCtx, n: i64) -> Result<i64> {
    if n < 1 {
        return Err(Error::Hypothesis("n >= 1".into()));
    }
    let prod = n * surf.d * (n + surf.d - 4);
    assert_eq!(prod % 2, 0, "n*d*(n+d-4) is always even");
    Ok(prod / 2 + 1)
}

/// h^0(S, O_S(mH)) for S a degree-d hypersurface in P^3, via the restriction
/// from P^3: binom(m+3,3) - binom(m-d+3,3).
pub fn h0_of_multiple(d: i64, m: i64) -> Result<i64> {
    if d < 1 {
        return Err(Error::Hypothesis("d >= 1".into()));
    }
    if m < 0 {
        return Err(Error::Hypothesis("m >= 0".into()));
    }
    Ok(binom3(m + 3) - binom3(m - d + 3))
}

/// Which theorem a bound report instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Plane,
    K3,
    Pluricanonical,
    SurfaceP3,
    QuinticOdd,
    Gln,
    GlnQuinticOdd,
    GlnSwapped,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Plane => "plane",
            BoundKind::K3 => "k3",
            BoundKind::Pluricanonical => "pluricanonical",
            BoundKind::SurfaceP3 => "surface_p3",
            BoundKind::QuinticOdd => "quintic_odd",
            BoundKind::Gln => "gln",
            BoundKind::GlnQuinticOdd => "gln_quintic_odd",
            BoundKind::GlnSwapped => "gln_swapped",
        }
    }
}

/// Parameters for [`severi_bound`]. Each variant mirrors the hypotheses of
/// one statement; out-of-range parameters are rejected with the failing
/// hypothesis named.
#[derive(Clone, Debug)]
pub enum BoundQuery {
    /// Nodal plane curves of degree d >= 3: delta <= (d-1)(d-2)/2.
    Plane { d: i64 },
    /// K3 surface, |D| with p_a(D) >= 2: delta <= p_a.
    K3 { pa: i64 },
    /// |K_S| ample, C numerically p*K_S, p >= 2 rational:
    /// delta < p(p-2)K^2/4, improved to (p-1)^2 K^2/4 for odd integer p
    /// when NS(S) is generated by K_S.
    Pluricanonical {
        p: BigRational,
        ksq: i64,
        ns_cyclic: bool,
    },
    /// Smooth degree-d surface in P^3, C in |nH|, n >= 2d-8:
    /// delta < n*d*(n-2d+8)/4.
    SurfaceP3 { d: i64, n: i64 },
    /// Quintic with Picard group Z, odd p >= 3: delta < 5(p-1)^2/4.
    QuinticOdd { p: i64 },
    /// Geometric linear normality, d >= 5, n >= 2: delta < n*d*(n-2)/4.
    Gln { d: i64, n: i64 },
    /// Quintic, n odd: delta < 5(n-1)^2/4.
    GlnQuinticOdd { n: i64 },
    /// C also on a smooth degree-n surface, 5 <= n < d: delta < n*d*(d-2)/4.
    GlnSwapped { d: i64, n: i64 },
}

/// A bound verdict. `strict` records whether the inequality is strict
/// (delta < bound) or not (delta <= bound).
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub params: Vec<(String, String)>,
    pub bound_value: BigRational,
    pub strict: bool,
    pub hypotheses: Vec<String>,
    /// Largest integer delta satisfying the inequality.
    pub max_admissible_delta: i64,
    pub dim_linear_system: Option<i64>,
    pub delta: Option<i64>,
    pub delta_admissible: Option<bool>,
    pub expected_dim: Option<i64>,
    pub verdict: String,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut obj = json!({
            "kind": self.kind.as_str(),
            "params": params,
            "bound_value": rat_str(&self.bound_value),
            "strict": self.strict,
            "hypotheses": self.hypotheses,
            "max_admissible_delta": self.max_admissible_delta,
            "verdict": self.verdict,
        });
        let map = obj.as_object_mut().unwrap();
        if let Some(d) = self.dim_linear_system {
            map.insert("dim_linear_system".into(), json!(d));
        }
        if let Some(d) = self.delta {
            map.insert("delta".into(), json!(d));
            map.insert(
                "delta_admissible".into(),
                json!(self.delta_admissible.unwrap()),
            );
        }
        if let Some(d) = self.expected_dim {
            map.insert("expected_dim".into(), json!(d));
        }
        obj
    }
}

/// Evaluate one of the smoothness / linear-normality bounds. `delta`, when
/// given, is compared exactly against the bound and the expected Severi
/// dimension is reported where the linear system's dimension is known.
pub fn severi_bound(query: &BoundQuery, delta: Option<i64>) -> Result<BoundReport> {
    if let Some(d) = delta {
        if d < 0 {
            return Err(Error::Hypothesis("delta >= 0".into()));
        }
    }
    let (kind, params, bound, strict, hypotheses, dim): (
        BoundKind,
        Vec<(String, String)>,
        BigRational,
        bool,
        Vec<String>,
        Option<i64>,
    ) = match query {
        BoundQuery::Plane { d } => {
            if *d < 3 {
                return Err(Error::Hypothesis(format!(
                    "plane case needs d >= 3, got {}",
                    d
                )));
            }
            (
                BoundKind::Plane,
                vec![("d".into(), d.to_string())],
                rat((d - 1) * (d - 2), 2),
                false,
                vec![
                    format!("d = {} >= 3", d),
                    "1 <= delta <= (d-1)(d-2)/2".into(),
                ],
                Some(d * (d + 3) / 2),
            )
        }
        BoundQuery::K3 { pa } => {
            if *pa < 2 {
                return Err(Error::Hypothesis(format!(
                    "K3 case needs p_a >= 2, got {}",
                    pa
                )));
            }
            (
                BoundKind::K3,
                vec![("pa".into(), pa.to_string())],
                rat_i(*pa),
                false,
                vec![
                    "S a K3 surface (unverified)".into(),
                    format!("p_a(D) = {} >= 2", pa),
                ],
                Some(*pa),
            )
        }
        BoundQuery::Pluricanonical { p, ksq, ns_cyclic } => {
            if *p < rat_i(2) {
                return Err(Error::Hypothesis(format!(
                    "pluricanonical case needs p >= 2, got {}",
                    rat_str(p)
                )));
            }
            if *ksq < 1 {
                return Err(Error::Hypothesis(format!(
                    "K_S^2 >= 1 required, got {}",
                    ksq
                )));
            }
            let odd = is_odd_integer(p);
            let mut hyp = vec![
                "|K_S| ample (unverified)".into(),
                "|C| has smooth general member (unverified)".into(),
                "C irreducible with exactly delta nodes (unverified)".into(),
                format!("C numerically equivalent to {} K_S, p >= 2", rat_str(p)),
            ];
            let bound = if *ns_cyclic && odd {
                hyp.push("p odd integer".into());
                hyp.push("NS(S) = Z generated by K_S".into());
                (p - rat_i(1)) * (p - rat_i(1)) * rat(*ksq, 4)
            } else {
                p * (p - rat_i(2)) * rat(*ksq, 4)
            };
            (
                BoundKind::Pluricanonical,
                vec![
                    ("p".into(), rat_str(p)),
                    ("ksq".into(), ksq.to_string()),
                    ("ns_cyclic".into(), ns_cyclic.to_string()),
                ],
                bound,
                true,
                hyp,
                None,
            )
        }
        BoundQuery::SurfaceP3 { d, n } => {
            if *d < 5 {
                return Err(Error::Hypothesis(format!(
                    "surface_p3 needs d >= 5, got {}",
                    d
                )));
            }
            if *n < 2 * d - 8 {
                return Err(Error::Hypothesis(format!(
                    "surface_p3 needs n >= 2d-8 = {}, got {}",
                    2 * d - 8,
                    n
                )));
            }
            (
                BoundKind::SurfaceP3,
                vec![("d".into(), d.to_string()), ("n".into(), n.to_string())],
                rat(n * d * (n - 2 * d + 8), 4),
                true,
                vec![
                    format!(
                        "S smooth of degree {} >= 5 in P^3 (smoothness unverified)",
                        d
                    ),
                    format!("C in |{}H| with n >= 2d-8", n),
                    "C irreducible with exactly delta nodes (unverified)".into(),
                ],
                Some(h0_of_multiple(*d, *n)? - 1),
            )
        }
        BoundQuery::QuinticOdd { p } => {
            if *p < 3 || p % 2 == 0 {
                return Err(Error::Hypothesis(format!(
                    "quintic_odd needs odd p >= 3, got {}",
                    p
                )));
            }
            (
                BoundKind::QuinticOdd,
                vec![("p".into(), p.to_string())],
                rat(5 * (p - 1) * (p - 1), 4),
                true,
                vec![
                    "S smooth quintic in P^3 with Picard group Z (unverified)".into(),
                    format!("C in |{}H|, p odd", p),
                    "C irreducible with exactly delta nodes (unverified)".into(),
                ],
                Some(h0_of_multiple(5, *p)? - 1),
            )
        }
        BoundQuery::Gln { d, n } => {
            if *d < 5 {
                return Err(Error::Hypothesis(format!("gln needs d >= 5, got {}", d)));
            }
            if *n < 2 {
                return Err(Error::Hypothesis(format!("gln needs n >= 2, got {}", n)));
            }
            (
                BoundKind::Gln,
                vec![("d".into(), d.to_string()), ("n".into(), n.to_string())],
                rat(n * d * (n - 2), 4),
                true,
                vec![
                    format!(
                        "S smooth of degree {} >= 5 in P^3 (smoothness unverified)",
                        d
                    ),
                    format!("C irreducible in |{}H| with only nodes (unverified)", n),
                ],
                Some(h0_of_multiple(*d, *n)? - 1),
            )
        }
        BoundQuery::GlnQuinticOdd { n } => {
            if *n < 1 || n % 2 == 0 {
                return Err(Error::Hypothesis(format!(
                    "gln_quintic_odd needs odd n, got {}",
                    n
                )));
            }
            (
                BoundKind::GlnQuinticOdd,
                vec![("n".into(), n.to_string())],
                rat(5 * (n - 1) * (n - 1), 4),
                true,
                vec![
                    "S smooth quintic in P^3 with Picard group Z (unverified)".into(),
                    format!("C in |{}H|, n odd, only nodes (unverified)", n),
                ],
                Some(h0_of_multiple(5, *n)? - 1),
            )
        }
        BoundQuery::GlnSwapped { d, n } => {
            if !(5 <= *n && n < d) {
                return Err(Error::Hypothesis(format!(
                    "gln_swapped needs 5 <= n < d, got n = {}, d = {}",
                    n, d
                )));
            }
            (
                BoundKind::GlnSwapped,
                vec![("d".into(), d.to_string()), ("n".into(), n.to_string())],
                rat(n * d * (d - 2), 4),
                true,
                vec![
                    "C also lies on a smooth surface of degree n (unverified)".into(),
                    format!("5 <= n = {} < d = {}", n, d),
                ],
                Some(h0_of_multiple(*d, *n)? - 1),
            )
        }
    };
    assert!(!bound.is_negative(), "bound values are nonnegative");
    let max_admissible = if strict {
        ceil_i64(&bound) - 1
    } else {
        floor_i64(&bound)
    };
    let (delta_admissible, expected_dim) = match delta {
        Some(dl) => {
            let ok = if strict {
                rat_i(dl) < bound
            } else {
                rat_i(dl) <= bound
            };
            (Some(ok), dim.map(|dd| dd - dl))
        }
        None => (None, None),
    };
    let gln_kind = matches!(
        kind,
        BoundKind::Gln | BoundKind::GlnQuinticOdd | BoundKind::GlnSwapped
    );
    let conclusion = if gln_kind {
        "C geometrically linearly normal"
    } else {
        "Severi variety smooth of codimension delta at C"
    };
    let verdict = match delta_admissible {
        Some(true) => format!(
            "delta admissible ({} {} {}): {}",
            delta.unwrap(),
            if strict { "<" } else { "<=" },
            rat_str(&bound),
            conclusion
        ),
        Some(false) => format!(
            "delta NOT admissible ({} {} {} fails): no guarantee",
            delta.unwrap(),
            if strict { "<" } else { "<=" },
            rat_str(&bound)
        ),
        None => format!(
            "delta {} {} guarantees: {}",
            if strict { "<" } else { "<=" },
            rat_str(&bound),
            conclusion
        ),
    };
    Ok(BoundReport {
        kind,
        params,
        bound_value: bound,
        strict,
        hypotheses,
        max_admissible_delta: max_admissible,
        dim_linear_system: dim,
        delta,
        delta_admissible,
        expected_dim,
        verdict,
    })
}

/// Variants of the geometric-linear-normality bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlnVariant {
    Main,
    QuinticOdd,
    Swapped,
}

/// The linear-normality bound for a complete intersection of type (d, n).
pub fn gln_bound(d: i64, n: i64, variant: GlnVariant, delta: Option<i64>) -> Result<BoundReport> {
    let query = match variant {
        GlnVariant::Main => BoundQuery::Gln { d, n },
        GlnVariant::QuinticOdd => {
            if d != 5 {
                return Err(Error::Hypothesis(format!(
                    "quintic_odd variant needs d = 5, got {}",
                    d
                )));
            }
            BoundQuery::GlnQuinticOdd { n }
        }
        GlnVariant::Swapped => BoundQuery::GlnSwapped { d, n },
    };
    severi_bound(&query, delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Dimension counts around the sharp examples: the locus of curves with
/// obstructed nodes sits in a family of dimension `family_dim_bound`, while
/// the Severi variety has dimension at least `severi_lower_bound`. When the
/// latter is larger, the general member escapes the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionDims {
    pub m: i64,
    pub parity: Parity,
    pub n: i64,
    pub delta: i64,
    /// Even: exact h^0 of the normal bundle, 14 + (5m^2-10m+14).
    /// Odd: the upper bound 5m^2+23.
    pub h0_normal_bound: i64,
    /// The above plus 4 for the moving cone vertex.
    pub family_dim_bound: i64,
    /// h^0(S, O_S(nH)) - 1 - delta.
    pub severi_lower_bound: i64,
    /// Arithmetic genus of the smooth model (odd case only).
    pub pa_tilde: Option<i64>,
    pub general_escapes: bool,
}

impl ObstructionDims {
    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "m": self.m,
            "parity": self.parity.as_str(),
            "n": self.n,
            "delta": self.delta,
            "h0_normal_bound": self.h0_normal_bound,
            "family_dim_bound": self.family_dim_bound,
            "severi_lower_bound": self.severi_lower_bound,
            "general_escapes": self.general_escapes,
        });
        if let Some(pa) = self.pa_tilde {
            obj.as_object_mut()
                .unwrap()
                .insert("pa_tilde".into(), json!(pa));
        }
        obj
    }
}

/// Dimension counts witnessing that the sharp examples are obstructed yet
/// non-general: n = 2m (even) or 2m+1 (odd), m >= 3.
pub fn obstruction_locus_dims(m: i64, parity: Parity) -> Result<ObstructionDims> {
    if m < 3 {
        return Err(Error::Hypothesis(format!("m >= 3 required, got {}", m)));
    }
    let surf = SurfaceCtx::new(5, true)?;
    match parity {
        Parity::Even => {
            let n = 2 * m;
            let delta = 5 * (m * m - m);
            let h0n = 5 * m * m - 10 * m + 28;
            let family = 5 * m * m - 10 * m + 32;
            let severi = 5 * m * m + 4;
            // consistency with the restriction count
            assert_eq!(severi, h0_of_multiple(5, n)? - 1 - delta);
            Ok(ObstructionDims {
                m,
                parity,
                n,
                delta,
                h0_normal_bound: h0n,
                family_dim_bound: family,
                severi_lower_bound: severi,
                pa_tilde: None,
                general_escapes: severi > family,
            })
        }
        Parity::Odd => {
            let n = 2 * m + 1;
            let delta = 5 * m * m;
            let h0n = 5 * m * m + 23;
            let family = 5 * m * m + 27;
            let severi = 5 * m * m + 5 * m + 4;
            let pa_tilde = 5 * m * m + 15 * m + 6;
            assert_eq!(severi, h0_of_multiple(5, n)? - 1 - delta);
            assert_eq!(pa_tilde, pa_of_multiple(&surf, n)? - delta);
            Ok(ObstructionDims {
                m,
                parity,
                n,
                delta,
                h0_normal_bound: h0n,
                family_dim_bound: family,
                severi_lower_bound: severi,
                pa_tilde: Some(pa_tilde),
                general_escapes: severi > family,
            })
        }
    }
}
