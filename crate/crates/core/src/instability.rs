//! The Bogomolov-instability analyzer: given a curve class numerically
//! lambda times the polarization (lambda = p, q = K_S^2 for the canonical
//! setting; lambda = n, q = d for the linear-normality setting) and a node
//! count delta below the instability threshold, intersect the constraints on
//! x = M.K_S (resp. M.H) imposed on a destabilizing divisor M and decide
//! whether they are contradictory.
//!
//! One implementation serves both settings; the two proofs differ only in
//! the meaning of (lambda, q).
//!
//! Constraint catalogue, with x the pairing of M against the polarization:
//!   C3: x > (lambda-1) q / 2        (destabilization)
//!   C5: x < (lambda-1) q            (an effective divisor through N_0, Bezout)
//!   Q1: x <= lambda q / 2  or  x >= (lambda-1) q
//!       (roots of x^2/q - ((3 lambda - 2)/2) x + (lambda (lambda-1)/2) q)
//!   Q2: x < (lambda-2) q / 2  or  x > lambda q / 2, only when
//!       delta < lambda (lambda-2) q / 4
//!       (roots of x^2/q - (lambda-1) x + (lambda (lambda-2)/4) q)
//! With cyclic Neron-Severi and odd integer lambda, x is additionally an
//! integer multiple of q.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{is_odd_integer, rat, rat_i, rat_str};

// ---------------------------------------------------------------------------
// Exact interval sets
// ---------------------------------------------------------------------------

/// A finite endpoint with open/closed flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub value: BigRational,
    pub closed: bool,
}

/// An interval over Q; `None` endpoints are unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Endpoint>,
    pub hi: Option<Endpoint>,
}

impl Interval {
    pub fn full() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn greater_than(v: BigRational) -> Self {
        Interval {
            lo: Some(Endpoint {
                value: v,
                closed: false,
            }),
            hi: None,
        }
    }

    pub fn at_least(v: BigRational) -> Self {
        Interval {
            lo: Some(Endpoint {
                value: v,
                closed: true,
            }),
            hi: None,
        }
    }

    pub fn less_than(v: BigRational) -> Self {
        Interval {
            lo: None,
            hi: Some(Endpoint {
                value: v,
                closed: false,
            }),
        }
    }

    pub fn at_most(v: BigRational) -> Self {
        Interval {
            lo: None,
            hi: Some(Endpoint {
                value: v,
                closed: true,
            }),
        }
    }

    pub fn point(v: BigRational) -> Self {
        Interval {
            lo: Some(Endpoint {
                value: v.clone(),
                closed: true,
            }),
            hi: Some(Endpoint {
                value: v,
                closed: true,
            }),
        }
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(lo), Some(hi)) => {
                lo.value > hi.value || (lo.value == hi.value && !(lo.closed && hi.closed))
            }
            _ => false,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match (&self.lo, &other.lo) {
            (None, b) => b.clone(),
            (a, None) => a.clone(),
            (Some(a), Some(b)) => {
                if a.value > b.value || (a.value == b.value && !a.closed) {
                    Some(a.clone())
                } else {
                    Some(b.clone())
                }
            }
        };
        let hi = match (&self.hi, &other.hi) {
            (None, b) => b.clone(),
            (a, None) => a.clone(),
            (Some(a), Some(b)) => {
                if a.value < b.value || (a.value == b.value && !a.closed) {
                    Some(a.clone())
                } else {
                    Some(b.clone())
                }
            }
        };
        Interval { lo, hi }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let lo_ok = match &self.lo {
            None => true,
            Some(ep) => {
                if ep.closed {
                    *x >= ep.value
                } else {
                    *x > ep.value
                }
            }
        };
        let hi_ok = match &self.hi {
            None => true,
            Some(ep) => {
                if ep.closed {
                    *x <= ep.value
                } else {
                    *x < ep.value
                }
            }
        };
        lo_ok && hi_ok
    }

    pub fn to_json(&self) -> Value {
        let side = |e: &Option<Endpoint>| match e {
            None => Value::Null,
            Some(ep) => json!({ "value": rat_str(&ep.value), "closed": ep.closed }),
        };
        json!({ "lo": side(&self.lo), "hi": side(&self.hi) })
    }
}

/// A finite union of disjoint intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn full() -> Self {
        IntervalSet {
            parts: vec![Interval::full()],
        }
    }

    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn of(parts: Vec<Interval>) -> Self {
        IntervalSet {
            parts: parts.into_iter().filter(|i| !i.is_empty()).collect(),
        }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                let c = a.intersect(b);
                if !c.is_empty() {
                    parts.push(c);
                }
            }
        }
        IntervalSet { parts }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.parts.iter().any(|i| i.contains(x))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(|i| i.to_json()).collect())
    }
}

// ---------------------------------------------------------------------------
// The analyzer
// ---------------------------------------------------------------------------

/// One labeled constraint on x, as an interval set plus display data.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub label: &'static str,
    pub relation: String,
    pub thresholds: Vec<BigRational>,
    pub set: IntervalSet,
}

impl Constraint {
    pub fn to_json(&self) -> Value {
        let threshold = self
            .thresholds
            .iter()
            .map(rat_str)
            .collect::<Vec<_>>()
            .join("|");
        json!({ "label": self.label, "relation": self.relation, "threshold": threshold })
    }
}

/// Data of the borderline case delta = lambda(lambda-2)q/4: the pairing is
/// pinned to x = lambda q/2, the twisted second Chern class vanishes, and
/// the node set is predicted to be a complete intersection of type (M, C-M).
#[derive(Clone, Debug)]
pub struct EqualityCase {
    pub x: BigRational,
    pub c2_twisted: i64,
    pub ci_prediction: bool,
}

#[derive(Clone, Debug)]
pub struct InstabilityReport {
    pub lambda: BigRational,
    pub q: i64,
    pub delta: i64,
    pub delta0_range: (i64, i64),
    pub ns_cyclic: bool,
    pub lambda_odd_integer: bool,
    /// c_1^2 - 4 c_2 = (lambda-1)^2 q - 4 delta.
    pub discriminant: BigRational,
    pub unstable: bool,
    pub constraints: Vec<Constraint>,
    /// Final feasible set for x; quantized to multiples of q when that
    /// applies (each run of feasible multiples reported as a closed interval).
    pub feasible_set: IntervalSet,
    pub quantized: bool,
    pub contradiction: bool,
    pub equality_case: Option<EqualityCase>,
    pub verdict: String,
}

impl InstabilityReport {
    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "lambda": rat_str(&self.lambda),
            "q": self.q,
            "delta": self.delta,
            "delta0_range": [self.delta0_range.0, self.delta0_range.1],
            "ns_cyclic": self.ns_cyclic,
            "lambda_odd_integer": self.lambda_odd_integer,
            "discriminant": rat_str(&self.discriminant),
            "unstable": self.unstable,
            "constraints": self.constraints.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "feasible_set": self.feasible_set.to_json(),
            "quantized": self.quantized,
            "contradiction": self.contradiction,
            "verdict": self.verdict,
        });
        let map = obj.as_object_mut().unwrap();
        if let Some(eq) = &self.equality_case {
            map.insert(
                "equality_case".into(),
                json!({
                    "x": rat_str(&eq.x),
                    "c2_twisted": eq.c2_twisted,
                    "ci_prediction": eq.ci_prediction,
                }),
            );
        }
        obj
    }
}

/// Largest/smallest integer multiples of q inside an interval; the interval
/// must be bounded (ours always are: C3 bounds below, C5 above).
fn multiples_in(interval: &Interval, q: i64) -> Option<(i64, i64)> {
    let lo = interval
        .lo
        .as_ref()
        .expect("feasible interval unbounded below");
    let hi = interval
        .hi
        .as_ref()
        .expect("feasible interval unbounded above");
    let qr = rat_i(q);
    let lo_ratio = &lo.value / &qr;
    let hi_ratio = &hi.value / &qr;
    let m_lo = {
        let mut m = lo_ratio.ceil().to_integer();
        if BigRational::from_integer(m.clone()) == lo_ratio && !lo.closed {
            m += 1;
        }
        m
    };
    let m_hi = {
        let fl = hi_ratio.floor();
        let mut m = fl.to_integer();
        if BigRational::from_integer(m.clone()) == hi_ratio && !hi.closed {
            m -= 1;
        }
        m
    };
    use num_traits::ToPrimitive;
    let (a, b) = (m_lo.to_i64()?, m_hi.to_i64()?);
    if a > b {
        None
    } else {
        Some((a, b))
    }
}

/// Analyze instability for a curve class lambda times the polarization with
/// q its self-intersection and delta nodes. `lambda_odd_integer` enables the
/// quantization branch together with `ns_cyclic`; it must agree with lambda.
pub fn instability_analyze(
    lambda: &BigRational,
    q: i64,
    delta: i64,
    ns_cyclic: bool,
    lambda_odd_integer: bool,
) -> Result<InstabilityReport> {
    if *lambda < rat_i(2) {
        return Err(Error::Hypothesis(format!(
            "lambda >= 2 required (outside analyzer scope), got {}",
            rat_str(lambda)
        )));
    }
    if q < 1 {
        return Err(Error::Hypothesis(format!("q >= 1 required, got {}", q)));
    }
    if delta < 1 {
        return Err(Error::Hypothesis(format!(
            "delta >= 1 required, got {}",
            delta
        )));
    }
    if lambda_odd_integer && !is_odd_integer(lambda) {
        return Err(Error::Hypothesis(format!(
            "lambda_odd_integer set but lambda = {} is not an odd integer",
            rat_str(lambda)
        )));
    }
    let qr = rat_i(q);
    let one = rat_i(1);
    let two = rat_i(2);
    let discriminant = (lambda - &one) * (lambda - &one) * &qr - rat_i(4 * delta);
    let unstable = discriminant > rat_i(0);
    let quantize = ns_cyclic && lambda_odd_integer;

    if !unstable {
        return Ok(InstabilityReport {
            lambda: lambda.clone(),
            q,
            delta,
            delta0_range: (1, delta),
            ns_cyclic,
            lambda_odd_integer,
            discriminant,
            unstable: false,
            constraints: Vec::new(),
            feasible_set: IntervalSet::empty(),
            quantized: false,
            contradiction: false,
            equality_case: None,
            verdict:
                "stable — analyzer silent (discriminant <= 0, no destabilizing divisor is forced)"
                    .into(),
        });
    }

    // thresholds
    let c3_thr = (lambda - &one) * &qr / &two; // (lambda-1) q / 2
    let c5_thr = (lambda - &one) * &qr; // (lambda-1) q
    let q1_r1 = lambda * &qr / &two; // lambda q / 2
    let q1_r2 = c5_thr.clone(); // (lambda-1) q
    let q2_r1 = (lambda - &two) * &qr / &two; // (lambda-2) q / 2
    let q2_r2 = q1_r1.clone(); // lambda q / 2
    let q2_cut = lambda * (lambda - &two) * &qr / rat(4, 1); // lambda(lambda-2) q / 4

    let mut constraints = vec![
        Constraint {
            label: "C3",
            relation: ">".into(),
            thresholds: vec![c3_thr.clone()],
            set: IntervalSet::of(vec![Interval::greater_than(c3_thr.clone())]),
        },
        Constraint {
            label: "C5",
            relation: "<".into(),
            thresholds: vec![c5_thr.clone()],
            set: IntervalSet::of(vec![Interval::less_than(c5_thr.clone())]),
        },
        Constraint {
            label: "Q1",
            relation: "<= or >=".into(),
            thresholds: vec![q1_r1.clone(), q1_r2.clone()],
            set: IntervalSet::of(vec![
                Interval::at_most(q1_r1.clone()),
                Interval::at_least(q1_r2.clone()),
            ]),
        },
    ];

    let delta_r = rat_i(delta);
    let at_equality = delta_r == q2_cut;
    if delta_r < q2_cut {
        constraints.push(Constraint {
            label: "Q2",
            relation: "< or >".into(),
            thresholds: vec![q2_r1.clone(), q2_r2.clone()],
            set: IntervalSet::of(vec![
                Interval::less_than(q2_r1.clone()),
                Interval::greater_than(q2_r2.clone()),
            ]),
        });
    } else if at_equality {
        // the borderline turns Q2 non-strict
        constraints.push(Constraint {
            label: "Q2",
            relation: "<= or >=".into(),
            thresholds: vec![q2_r1.clone(), q2_r2.clone()],
            set: IntervalSet::of(vec![
                Interval::at_most(q2_r1.clone()),
                Interval::at_least(q2_r2.clone()),
            ]),
        });
    }

    let mut feasible = IntervalSet::full();
    for c in &constraints {
        feasible = feasible.intersect(&c.set);
    }

    let (feasible_set, quantized) = if quantize {
        let mut parts = Vec::new();
        for iv in feasible.parts() {
            if let Some((m_lo, m_hi)) = multiples_in(iv, q) {
                parts.push(Interval {
                    lo: Some(Endpoint {
                        value: rat_i(m_lo * q),
                        closed: true,
                    }),
                    hi: Some(Endpoint {
                        value: rat_i(m_hi * q),
                        closed: true,
                    }),
                });
            }
        }
        (IntervalSet::of(parts), true)
    } else {
        (feasible, false)
    };

    let contradiction = feasible_set.is_empty();
    let equality_case = if at_equality {
        Some(EqualityCase {
            x: q2_r2.clone(),
            c2_twisted: 0,
            ci_prediction: true,
        })
    } else {
        None
    };

    let verdict = if contradiction {
        "unstable and contradictory: no admissible destabilizing pairing exists, so the nodes impose independent conditions"
            .to_string()
    } else if at_equality {
        format!(
            "borderline delta: pairing forced to x = {}; nodes predicted to be a complete intersection of type (M, C-M)",
            rat_str(&q2_r2)
        )
    } else {
        "unstable but not contradictory: the constraints leave admissible pairings".to_string()
    };

    Ok(InstabilityReport {
        lambda: lambda.clone(),
        q,
        delta,
        delta0_range: (1, delta),
        ns_cyclic,
        lambda_odd_integer,
        discriminant,
        unstable: true,
        constraints,
        feasible_set,
        quantized,
        contradiction,
        equality_case,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ceil_i64;

    fn analyze(lambda: i64, q: i64, delta: i64, cyclic: bool) -> InstabilityReport {
        let l = rat_i(lambda);
        let odd = cyclic && lambda % 2 == 1;
        instability_analyze(&l, q, delta, cyclic, odd).unwrap()
    }

    #[test]
    fn interval_basics() {
        let a = Interval::greater_than(rat_i(3));
        let b = Interval::at_most(rat_i(3));
        assert!(a.intersect(&b).is_empty());
        let c = Interval::at_least(rat_i(3));
        let d = c.intersect(&b);
        assert!(!d.is_empty());
        assert_eq!(d, Interval::point(rat_i(3)));
        let s = IntervalSet::of(vec![
            Interval::less_than(rat_i(0)),
            Interval::greater_than(rat_i(10)),
        ]);
        let t = IntervalSet::of(vec![
            Interval::at_least(rat_i(0)).intersect(&Interval::at_most(rat_i(10)))
        ]);
        assert!(s.intersect(&t).is_empty());
    }

    #[test]
    fn spec_example_contradiction() {
        // lambda=6, q=5, delta=29 < 30: Q2 forces x<10 or x>15, Q1 and C5
        // force x<=15, C3 forces x>25/2 — empty.
        let r = analyze(6, 5, 29, false);
        assert!(r.unstable);
        assert_eq!(r.discriminant, rat_i(9));
        assert!(r.contradiction);
        assert!(r.feasible_set.is_empty());
        let c3 = r.constraints.iter().find(|c| c.label == "C3").unwrap();
        assert_eq!(c3.thresholds, vec![rat(25, 2)]);
        let q1 = r.constraints.iter().find(|c| c.label == "Q1").unwrap();
        assert_eq!(q1.thresholds, vec![rat_i(15), rat_i(25)]);
        let q2 = r.constraints.iter().find(|c| c.label == "Q2").unwrap();
        assert_eq!(q2.thresholds, vec![rat_i(10), rat_i(15)]);
    }

    #[test]
    fn spec_example_equality_case() {
        let r = analyze(6, 5, 30, false);
        assert!(r.unstable);
        assert!(!r.contradiction);
        let eq = r.equality_case.unwrap();
        assert_eq!(eq.x, rat_i(15));
        assert_eq!(eq.c2_twisted, 0);
        assert!(eq.ci_prediction);
        // the feasible set is the single point x = 15
        assert_eq!(r.feasible_set.parts(), &[Interval::point(rat_i(15))]);
    }

    #[test]
    fn spec_example_quantized_odd() {
        // lambda=7, q=5, delta=44: no Q2 (44 > 43.75); continuous feasible
        // (15, 35/2]; multiples of 5 in it: none.
        let r = analyze(7, 5, 44, true);
        assert!(r.unstable);
        assert!(r.quantized);
        assert!(r.contradiction);
        // without quantization there is no contradiction
        let r2 = instability_analyze(&rat_i(7), 5, 44, false, false).unwrap();
        assert!(!r2.contradiction);
    }

    #[test]
    fn quadratic_roots_expand_exactly() {
        // Q1 roots {lambda q/2, (lambda-1) q}; Q2 roots {(lambda-2) q/2, lambda q/2}:
        // plug them into the quadratics with exact rationals.
        for lambda in 2..=11i64 {
            for q in 1..=9i64 {
                let l = rat_i(lambda);
                let qr = rat_i(q);
                let q1 = |x: &BigRational| {
                    x * x / &qr - rat(3 * lambda - 2, 2) * x + &l * (&l - rat_i(1)) / rat_i(2) * &qr
                };
                let q2 = |x: &BigRational| {
                    x * x / &qr - (&l - rat_i(1)) * x + &l * (&l - rat_i(2)) / rat_i(4) * &qr
                };
                for root in [&l * &qr / rat_i(2), (&l - rat_i(1)) * &qr] {
                    assert_eq!(q1(&root), rat_i(0));
                }
                for root in [(&l - rat_i(2)) * &qr / rat_i(2), &l * &qr / rat_i(2)] {
                    assert_eq!(q2(&root), rat_i(0));
                }
            }
        }
    }

    #[test]
    fn below_threshold_always_contradicts() {
        for lambda in 2..=10i64 {
            for q in 1..=10i64 {
                let cut = rat(lambda * (lambda - 2) * q, 4);
                let mut delta = 1i64;
                while rat_i(delta) < cut {
                    let r = analyze(lambda, q, delta, false);
                    assert!(
                        r.contradiction,
                        "no contradiction at lambda={}, q={}, delta={}",
                        lambda, q, delta
                    );
                    delta += 1;
                }
            }
        }
    }

    #[test]
    fn stable_below_discriminant() {
        let r = analyze(3, 1, 1, false);
        // (3-1)^2*1 - 4 = 0: not unstable
        assert!(!r.unstable);
        assert!(!r.contradiction);
        assert!(r.verdict.contains("stable"));
    }

    #[test]
    fn scope_checks() {
        assert!(instability_analyze(&rat(3, 2), 5, 1, false, false).is_err());
        assert!(instability_analyze(&rat_i(4), 5, 1, true, true).is_err()); // 4 is not odd
        assert!(instability_analyze(&rat_i(3), 0, 1, false, false).is_err());
        assert!(instability_analyze(&rat_i(3), 5, 0, false, false).is_err());
    }

    #[test]
    fn gln_setting_smoke() {
        // linear-normality shape: lambda = n, q = d; d=5, n=6, delta=29 < 30
        let r = analyze(6, 5, 29, false);
        assert!(r.contradiction);
    }

    /// Membership oracle evaluating the constraints in their raw form,
    /// independent of the root factorization the analyzer uses:
    ///   C3: 2x - (lambda-1)q > 0
    ///   C5: x < (lambda-1)q
    ///   Q1: x^2/q - ((3 lambda - 2)/2) x + lambda(lambda-1)q/2 >= 0
    ///   Q2: x^2/q - (lambda-1) x + lambda(lambda-2)q/4 > 0 (>= at the cut)
    fn raw_member(lambda: i64, q: i64, delta: i64, x: &BigRational) -> bool {
        let l = rat_i(lambda);
        let qr = rat_i(q);
        let c3 = rat_i(2) * x - (&l - rat_i(1)) * &qr > rat_i(0);
        let c5 = *x < (&l - rat_i(1)) * &qr;
        let q1 =
            x * x / &qr - rat(3 * lambda - 2, 2) * x + &l * (&l - rat_i(1)) / rat_i(2) * &qr
                >= rat_i(0);
        let q2_val = x * x / &qr - (&l - rat_i(1)) * x + &l * (&l - rat_i(2)) / rat_i(4) * &qr;
        let cut = &l * (&l - rat_i(2)) * &qr / rat_i(4);
        let q2 = if rat_i(delta) < cut {
            q2_val > rat_i(0)
        } else if rat_i(delta) == cut {
            q2_val >= rat_i(0)
        } else {
            true
        };
        c3 && c5 && q1 && q2
    }

    #[test]
    fn feasible_set_matches_raw_constraint_oracle() {
        // grid of rationals k*q/8 covers every feasible run (their length is
        // at least q/2 when nonempty, and the equality point lambda*q/2 is a
        // grid point for integer lambda)
        for lambda in 2..=8i64 {
            for q in 1..=6i64 {
                let top = ceil_i64(&rat((lambda - 1) * (lambda - 1) * q, 4));
                for delta in 1..top.max(2) {
                    let r = analyze(lambda, q, delta, false);
                    if !r.unstable {
                        continue;
                    }
                    let mut any = false;
                    for k in 0..=(8 * (lambda + 1) * q) {
                        let x = rat(k * q, 8);
                        let direct = raw_member(lambda, q, delta, &x);
                        let via_set = r.feasible_set.contains(&x);
                        assert_eq!(
                            direct, via_set,
                            "membership mismatch at lambda={}, q={}, delta={}, x={}",
                            lambda, q, delta, x
                        );
                        any |= direct;
                    }
                    assert_eq!(
                        any, !r.contradiction,
                        "emptiness mismatch at lambda={}, q={}, delta={}",
                        lambda, q, delta
                    );
                }
            }
        }
    }

    #[test]
    fn quantized_set_is_continuous_set_restricted_to_multiples() {
        for lambda in [3i64, 5, 7] {
            for q in 1..=6i64 {
                let top = ceil_i64(&rat((lambda - 1) * (lambda - 1) * q, 4));
                for delta in 1..top.max(2) {
                    let quantized = analyze(lambda, q, delta, true);
                    let continuous =
                        instability_analyze(&rat_i(lambda), q, delta, false, false).unwrap();
                    if !quantized.unstable {
                        continue;
                    }
                    // agreement on every multiple of q in a generous window
                    for m in 0..=(lambda + 2) {
                        let x = rat_i(m * q);
                        assert_eq!(
                            quantized.feasible_set.contains(&x),
                            continuous.feasible_set.contains(&x),
                            "multiple mismatch at lambda={}, q={}, delta={}, m={}",
                            lambda,
                            q,
                            delta,
                            m
                        );
                    }
                    // and nothing off-lattice survives quantization
                    let off = rat(q, 2) + rat_i(q);
                    if quantized.feasible_set.contains(&off) {
                        panic!("off-lattice point in quantized set");
                    }
                }
            }
        }
    }
}
