//! Exact coefficient arithmetic: rationals, prime fields F_p, and small
//! extension fields F_{p^k} presented as `F_p[t]/(modulus)`.
//!
//! Every element carries a cheap handle to its context; binary operations
//! panic on mixed contexts (validated constructors are the fallible boundary).
//! Rationals use arbitrary-precision integers and are kept reduced with a
//! positive denominator. Finite-field representatives are kept reduced mod
//! (p, modulus).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Extension degrees above this are rejected: point enumeration downstream
/// costs ~(p^k)^3, so large k is never desk-scale.
pub const MAX_EXTENSION_DEGREE: usize = 4;

// ---------------------------------------------------------------------------
// u64 modular arithmetic
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod prime `p` via extended Euclid. Panics on `a == 0`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    (s0.rem_euclid(p as i128)) as u64
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over F_p (modulus arithmetic only)
// ---------------------------------------------------------------------------
//
// Coefficients ascending, no trailing zeros. Only what irreducibility checks
// and extension-field inversion need; this is not a public polynomial type.

fn upoly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn upoly_deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn upoly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(ai, bj, p), p);
        }
    }
    upoly_trim(&mut out);
    out
}

/// Remainder of `a` mod monic `m`.
fn upoly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = i + shift;
                r[idx] = sub_mod(r[idx], mul_mod(lead, mi, p), p);
            }
        }
        r.pop();
        upoly_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    upoly_trim(&mut r);
    r
}

fn upoly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    while !r1.is_empty() {
        // make r1 monic before reducing
        let lc = *r1.last().unwrap();
        if lc != 1 {
            let inv = inv_mod(lc, p);
            for c in r1.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
        let r = upoly_rem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
    }
    if let Some(&lc) = r0.last() {
        if lc != 1 {
            let inv = inv_mod(lc, p);
            for c in r0.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
    }
    r0
}

/// x^(p^e) mod monic `m`, by e rounds of p-th powering (square and multiply).
fn upoly_x_pow_q(e: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut cur = if m.len() - 1 == 1 {
        // x mod (linear) is a constant; not used in practice (k >= 2)
        upoly_rem(&[0, 1], m, p)
    } else {
        vec![0, 1]
    };
    for _ in 0..e {
        // cur := cur^p mod m
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = upoly_rem(&upoly_mul(&acc, &base, p), m, p);
            }
            base = upoly_rem(&upoly_mul(&base, &base, p), m, p);
            exp >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Irreducibility of a monic polynomial of degree k in 2..=4 over F_p:
/// a reducible polynomial of degree k has an irreducible factor of degree
/// d <= k/2, and every such factor divides x^(p^d) - x. Checking
/// gcd(f, x^(p^d) - x) = 1 for d = 1..k/2 is therefore an exhaustive factor
/// search, independent of the size of p.
fn upoly_is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    debug_assert!((2..=MAX_EXTENSION_DEGREE).contains(&k));
    for d in 1..=(k / 2) {
        let xq = upoly_x_pow_q(d as u32, m, p);
        // xq - x
        let mut diff = xq;
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = sub_mod(diff[1], 1, p);
        upoly_trim(&mut diff);
        if diff.is_empty() {
            return false; // f divides x^(p^d) - x entirely
        }
        let g = upoly_gcd(m, &diff, p);
        if upoly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// FieldCtx
// ---------------------------------------------------------------------------

#[derive(Debug, PartialEq, Eq)]
enum CtxInner {
    Rationals,
    Finite {
        p: u64,
        k: usize,
        /// Monic modulus, ascending coefficients, length k+1. Empty for k = 1.
        modulus: Vec<u64>,
    },
}

/// A coefficient domain: the rationals, a prime field F_p, or an extension
/// `F_{p^k} = F_p[t]/(modulus)`. Cheap to clone (shared handle).
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<CtxInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for FieldCtx {}

impl FieldCtx {
    /// The field of rational numbers.
    pub fn rationals() -> Self {
        FieldCtx(Arc::new(CtxInner::Rationals))
    }

    /// A prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        Self::finite(p, 1, None)
    }

    /// F_{p^k}. For k > 1 a monic irreducible modulus of degree k is required;
    /// pass `None` to auto-select the smallest one (coefficients read as base-p
    /// digits, highest degree most significant), which makes reports
    /// reproducible bit for bit.
    pub fn finite(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || k > MAX_EXTENSION_DEGREE {
            return Err(Error::ExtensionDegree(k));
        }
        if k == 1 {
            if modulus.is_some() {
                return Err(Error::BadModulus("prime field takes no modulus".into()));
            }
            return Ok(FieldCtx(Arc::new(CtxInner::Finite {
                p,
                k,
                modulus: Vec::new(),
            })));
        }
        let modulus = match modulus {
            Some(mut m) => {
                for c in m.iter_mut() {
                    *c %= p;
                }
                upoly_trim(&mut m);
                if upoly_deg(&m) != Some(k) {
                    return Err(Error::BadModulus(format!("degree != {}", k)));
                }
                if *m.last().unwrap() != 1 {
                    return Err(Error::BadModulus("not monic".into()));
                }
                if !upoly_is_irreducible(&m, p) {
                    return Err(Error::BadModulus("reducible over F_p".into()));
                }
                m
            }
            None => Self::smallest_irreducible(p, k)?,
        };
        Ok(FieldCtx(Arc::new(CtxInner::Finite { p, k, modulus })))
    }

    /// Smallest monic irreducible of degree k, ordering candidates by the
    /// integer value sum c_i p^i of their non-leading coefficients.
    fn smallest_irreducible(p: u64, k: usize) -> Result<Vec<u64>> {
        let total = (p as u128).pow(k as u32);
        let mut code: u128 = 0;
        while code < total {
            let mut m = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as u128) as u64);
                c /= p as u128;
            }
            m.push(1);
            if upoly_is_irreducible(&m, p) {
                return Ok(m);
            }
            code += 1;
        }
        Err(Error::NoIrreducible { p, k })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(*self.0, CtxInner::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rationals()
    }

    /// Characteristic: 0 for the rationals, p otherwise.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            CtxInner::Rationals => 0,
            CtxInner::Finite { p, .. } => *p,
        }
    }

    /// Extension degree k (1 for prime fields and, by convention, rationals).
    pub fn extension_degree(&self) -> usize {
        match &*self.0 {
            CtxInner::Rationals => 1,
            CtxInner::Finite { k, .. } => *k,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            CtxInner::Rationals => None,
            CtxInner::Finite { p, k, .. } => {
                let q = (*p as u128).pow(*k as u32);
                u64::try_from(q).ok()
            }
        }
    }

    /// The modulus coefficients (ascending, monic) for k > 1 fields.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            CtxInner::Finite { k, modulus, .. } if *k > 1 => Some(modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &*self.0 {
            CtxInner::Rationals => FieldElem {
                ctx: self.clone(),
                repr: Repr::Rat(BigRational::zero()),
            },
            CtxInner::Finite { .. } => FieldElem {
                ctx: self.clone(),
                repr: Repr::Fin([0; 4]),
            },
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match &*self.0 {
            CtxInner::Rationals => FieldElem {
                ctx: self.clone(),
                repr: Repr::Rat(BigRational::from_integer(BigInt::from(v))),
            },
            CtxInner::Finite { p, .. } => {
                let r = v.rem_euclid(*p as i64) as u64;
                let mut a = [0u64; 4];
                a[0] = r;
                FieldElem {
                    ctx: self.clone(),
                    repr: Repr::Fin(a),
                }
            }
        }
    }

    /// Wrap an arbitrary-precision rational. Rationals context only.
    pub fn from_big_rational(&self, v: BigRational) -> FieldElem {
        assert!(self.is_rationals(), "from_big_rational on a finite field");
        FieldElem {
            ctx: self.clone(),
            repr: Repr::Rat(v),
        }
    }

    /// Element from a rational a/b; fails over F_p when p | b.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElem> {
        assert!(den != 0, "zero denominator");
        match &*self.0 {
            CtxInner::Rationals => Ok(FieldElem {
                ctx: self.clone(),
                repr: Repr::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
            }),
            CtxInner::Finite { p, .. } => {
                if den.rem_euclid(*p as i64) == 0 {
                    return Err(Error::CoefficientNotInField(format!("{}/{}", num, den)));
                }
                Ok(self.from_i64(num).mul(&self.from_i64(den).inv()))
            }
        }
    }

    /// Element of F_{p^k} from k coordinates in the basis 1, t, ..., t^{k-1}.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem> {
        match &*self.0 {
            CtxInner::Rationals => Err(Error::FieldMismatch),
            CtxInner::Finite { p, k, .. } => {
                if coords.len() != *k {
                    return Err(Error::Parse(format!(
                        "expected {} coordinates, got {}",
                        k,
                        coords.len()
                    )));
                }
                let mut a = [0u64; 4];
                for (i, &c) in coords.iter().enumerate() {
                    a[i] = c % p;
                }
                Ok(FieldElem {
                    ctx: self.clone(),
                    repr: Repr::Fin(a),
                })
            }
        }
    }

    /// The element with index `i` in the canonical enumeration of F_{p^k}
    /// (coordinates as base-p digits of `i`, least significant first).
    /// Requires a finite context and i < p^k.
    pub fn element_by_index(&self, i: u64) -> FieldElem {
        match &*self.0 {
            CtxInner::Rationals => panic!("element_by_index on rationals"),
            CtxInner::Finite { p, k, .. } => {
                let mut a = [0u64; 4];
                let mut v = i;
                for slot in a.iter_mut().take(*k) {
                    *slot = v % p;
                    v /= p;
                }
                debug_assert_eq!(v, 0, "index out of range");
                FieldElem {
                    ctx: self.clone(),
                    repr: Repr::Fin(a),
                }
            }
        }
    }

    /// Parse the text form: `a` or `a/b` (rationals), decimal (prime fields),
    /// `c0:c1:...:c{k-1}` (extensions; a bare integer is accepted as the
    /// prime-subfield embedding).
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        match &*self.0 {
            CtxInner::Rationals => {
                if let Some((n, d)) = s.split_once('/') {
                    let num: BigInt = n
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad rational `{}`", s)))?;
                    let den: BigInt = d
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad rational `{}`", s)))?;
                    if den.is_zero() {
                        return Err(Error::Parse(format!("zero denominator in `{}`", s)));
                    }
                    Ok(FieldElem {
                        ctx: self.clone(),
                        repr: Repr::Rat(BigRational::new(num, den)),
                    })
                } else {
                    let num: BigInt = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad integer `{}`", s)))?;
                    Ok(FieldElem {
                        ctx: self.clone(),
                        repr: Repr::Rat(BigRational::from_integer(num)),
                    })
                }
            }
            CtxInner::Finite { p, k, .. } => {
                if s.contains(':') {
                    let parts: Vec<&str> = s.split(':').collect();
                    if parts.len() != *k {
                        return Err(Error::Parse(format!(
                            "`{}` has {} coordinates, field has degree {}",
                            s,
                            parts.len(),
                            k
                        )));
                    }
                    let mut coords = Vec::with_capacity(*k);
                    for part in parts {
                        coords.push(parse_int_mod(part.trim(), *p)?);
                    }
                    self.from_coords(&coords)
                } else {
                    let v = parse_int_mod(s, *p)?;
                    let mut a = [0u64; 4];
                    a[0] = v;
                    Ok(FieldElem {
                        ctx: self.clone(),
                        repr: Repr::Fin(a),
                    })
                }
            }
        }
    }

    /// Re-interpret a prime-subfield element in this (extension) context.
    /// Both contexts must share the characteristic.
    pub fn lift(&self, e: &FieldElem) -> Result<FieldElem> {
        if e.ctx == *self {
            return Ok(e.clone());
        }
        match (&*self.0, &e.repr) {
            (CtxInner::Finite { p, .. }, Repr::Fin(a)) => {
                if e.ctx.characteristic() != *p || e.ctx.extension_degree() != 1 {
                    return Err(Error::FieldMismatch);
                }
                let mut b = [0u64; 4];
                b[0] = a[0];
                Ok(FieldElem {
                    ctx: self.clone(),
                    repr: Repr::Fin(b),
                })
            }
            _ => Err(Error::FieldMismatch),
        }
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            CtxInner::Rationals => write!(f, "Q"),
            CtxInner::Finite { p, k, modulus } => {
                if *k == 1 {
                    write!(f, "F_{}", p)
                } else {
                    let m: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                    write!(f, "F_{}^{} (modulus {})", p, k, m.join(":"))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    /// Coordinates in the basis 1, t, ..., t^{k-1}; slots >= k are zero.
    Fin([u64; 4]),
}

/// An element of a [`FieldCtx`]. Immutable; all operations are pure.
#[derive(Clone, Debug)]
pub struct FieldElem {
    ctx: FieldCtx,
    repr: Repr,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.repr == other.repr
    }
}
impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &self.repr {
            Repr::Rat(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::Fin(a) => a.hash(state),
        }
    }
}

impl FieldElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Fin(a) => a.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Fin(a) => a[0] == 1 && a[1..].iter().all(|&c| c == 0),
        }
    }

    /// The rational value, if this is a rational element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            Repr::Fin(_) => None,
        }
    }

    /// Coordinates over F_p (length k), if finite.
    pub fn coords(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Fin(a) => Some(&a[..self.ctx.extension_degree()]),
            Repr::Rat(_) => None,
        }
    }

    /// Canonical enumeration index: sum of coordinates as base-p digits.
    /// Used for deterministic point ordering. Finite fields only.
    pub fn index(&self) -> u64 {
        match &self.repr {
            Repr::Fin(a) => {
                let p = self.ctx.characteristic();
                let k = self.ctx.extension_degree();
                let mut v: u64 = 0;
                for i in (0..k).rev() {
                    v = v * p + a[i];
                }
                v
            }
            Repr::Rat(_) => panic!("index() on a rational element"),
        }
    }

    fn check_ctx(&self, other: &FieldElem) {
        assert!(self.ctx == other.ctx, "mixed field contexts");
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.check_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElem {
                ctx: self.ctx.clone(),
                repr: Repr::Rat(a + b),
            },
            (Repr::Fin(a), Repr::Fin(b)) => {
                let p = self.ctx.characteristic();
                let mut out = [0u64; 4];
                for i in 0..4 {
                    out[i] = add_mod(a[i], b[i], p);
                }
                FieldElem {
                    ctx: self.ctx.clone(),
                    repr: Repr::Fin(out),
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        match &self.repr {
            Repr::Rat(a) => FieldElem {
                ctx: self.ctx.clone(),
                repr: Repr::Rat(-a),
            },
            Repr::Fin(a) => {
                let p = self.ctx.characteristic();
                let mut out = [0u64; 4];
                for i in 0..4 {
                    out[i] = if a[i] == 0 { 0 } else { p - a[i] };
                }
                FieldElem {
                    ctx: self.ctx.clone(),
                    repr: Repr::Fin(out),
                }
            }
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.check_ctx(other);
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => FieldElem {
                ctx: self.ctx.clone(),
                repr: Repr::Rat(a * b),
            },
            (Repr::Fin(a), Repr::Fin(b)) => {
                let p = self.ctx.characteristic();
                let k = self.ctx.extension_degree();
                if k == 1 {
                    let mut out = [0u64; 4];
                    out[0] = mul_mod(a[0], b[0], p);
                    return FieldElem {
                        ctx: self.ctx.clone(),
                        repr: Repr::Fin(out),
                    };
                }
                // schoolbook product then reduction by the monic modulus
                let mut prod = [0u64; 7];
                for i in 0..k {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..k {
                        prod[i + j] = add_mod(prod[i + j], mul_mod(a[i], b[j], p), p);
                    }
                }
                let modulus = self.ctx.modulus().unwrap();
                for d in (k..=2 * k - 2).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    prod[d] = 0;
                    // t^d = t^(d-k) * (t^k mod modulus) = -t^(d-k) * (modulus - t^k)
                    for (i, &mi) in modulus.iter().enumerate().take(k) {
                        let idx = d - k + i;
                        prod[idx] = sub_mod(prod[idx], mul_mod(c, mi, p), p);
                    }
                }
                let mut out = [0u64; 4];
                out[..k].copy_from_slice(&prod[..k]);
                FieldElem {
                    ctx: self.ctx.clone(),
                    repr: Repr::Fin(out),
                }
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.repr {
            Repr::Rat(a) => FieldElem {
                ctx: self.ctx.clone(),
                repr: Repr::Rat(a.recip()),
            },
            Repr::Fin(a) => {
                let p = self.ctx.characteristic();
                let k = self.ctx.extension_degree();
                if k == 1 {
                    let mut out = [0u64; 4];
                    out[0] = inv_mod(a[0], p);
                    return FieldElem {
                        ctx: self.ctx.clone(),
                        repr: Repr::Fin(out),
                    };
                }
                // extended Euclid in F_p[t] against the modulus
                let modulus = self.ctx.modulus().unwrap().to_vec();
                let mut av: Vec<u64> = a[..k].to_vec();
                upoly_trim(&mut av);
                let (mut r0, mut r1) = (modulus, av);
                let (mut s0, mut s1) = (Vec::<u64>::new(), vec![1u64]);
                while !r1.is_empty() && upoly_deg(&r1) != Some(0) {
                    let (q, r) = upoly_divmod(&r0, &r1, p);
                    let qs1 = upoly_mul(&q, &s1, p);
                    let s = upoly_sub(&s0, &qs1, p);
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = s;
                }
                assert!(!r1.is_empty(), "modulus not irreducible?");
                let c = inv_mod(r1[0], p);
                let mut inv = s1;
                for x in inv.iter_mut() {
                    *x = mul_mod(*x, c, p);
                }
                let inv = upoly_rem(&inv, self.ctx.modulus().unwrap(), p);
                let mut out = [0u64; 4];
                out[..inv.len()].copy_from_slice(&inv);
                FieldElem {
                    ctx: self.ctx.clone(),
                    repr: Repr::Fin(out),
                }
            }
        }
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self.mul(&other.inv())
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Decimal integer of any length, reduced mod p.
fn parse_int_mod(s: &str, p: u64) -> Result<u64> {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer `{}`", s)));
    }
    let mut v: u64 = 0;
    for b in digits.bytes() {
        v = add_mod(mul_mod(v, 10, p), (b - b'0') as u64 % p, p);
    }
    Ok(if neg && v != 0 { p - v } else { v })
}

fn upoly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let ai = a.get(i).copied().unwrap_or(0);
            let bi = b.get(i).copied().unwrap_or(0);
            sub_mod(ai, bi, p)
        })
        .collect();
    upoly_trim(&mut out);
    out
}

fn upoly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = upoly_deg(b).expect("division by zero polynomial");
    let lc_inv = inv_mod(*b.last().unwrap(), p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while let Some(dr) = upoly_deg(&r) {
        if dr < db {
            break;
        }
        let coef = mul_mod(*r.last().unwrap(), lc_inv, p);
        let shift = dr - db;
        q[shift] = coef;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = sub_mod(r[i + shift], mul_mod(coef, bi, p), p);
        }
        upoly_trim(&mut r);
    }
    upoly_trim(&mut q);
    (q, r)
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.denom().is_negative() {
                    // BigRational keeps denom positive, but stay defensive
                    write!(f, "{}/{}", -r.numer(), -r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fin(a) => {
                let k = self.ctx.extension_degree();
                if k == 1 {
                    write!(f, "{}", a[0])
                } else {
                    let parts: Vec<String> = a[..k].iter().map(|c| c.to_string()).collect();
                    write!(f, "{}", parts.join(":"))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn prime_field_make() {
        let f = FieldCtx::prime(101).unwrap();
        assert_eq!(f.characteristic(), 101);
        assert_eq!(f.order(), Some(101));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(FieldCtx::prime(4).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldCtx::prime(1).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn auto_modulus_f4() {
        // the only irreducible monic quadratic over F_2 is t^2 + t + 1
        let f = FieldCtx::finite(2, 2, None).unwrap();
        assert_eq!(f.modulus(), Some(&[1u64, 1, 1][..]));
        assert_eq!(f.order(), Some(4));
    }

    #[test]
    fn auto_modulus_f9() {
        // candidates in base-3 value order: t^2+1 has no root mod 3
        let f = FieldCtx::finite(3, 2, None).unwrap();
        assert_eq!(f.modulus(), Some(&[1u64, 0, 1][..]));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 - 1 = (t-1)(t+1) over F_5
        let err = FieldCtx::finite(5, 2, Some(vec![4, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::BadModulus(_)));
    }

    #[test]
    fn degree_cap() {
        assert!(matches!(
            FieldCtx::finite(5, 5, None),
            Err(Error::ExtensionDegree(5))
        ));
        assert!(matches!(
            FieldCtx::finite(5, 0, None),
            Err(Error::ExtensionDegree(0))
        ));
    }

    #[test]
    fn quartic_extension_arithmetic() {
        let f = FieldCtx::finite(3, 4, None).unwrap();
        let g = f.from_coords(&[1, 2, 0, 1]).unwrap();
        let gi = g.inv();
        assert!(g.mul(&gi).is_one());
        // order of multiplicative group divides 3^4 - 1 = 80
        assert!(g.pow(80).is_one());
    }

    fn random_elem(ctx: &FieldCtx, rng: &mut ChaCha20Rng) -> FieldElem {
        match ctx.order() {
            Some(q) => ctx.element_by_index(rng.next_u64() % q),
            None => {
                let n = (rng.next_u64() % 2001) as i64 - 1000;
                let d = (rng.next_u64() % 999) as i64 + 1;
                ctx.from_ratio(n, d).unwrap()
            }
        }
    }

    #[test]
    fn field_axioms_random() {
        let ctxs = vec![
            FieldCtx::rationals(),
            FieldCtx::prime(101).unwrap(),
            FieldCtx::finite(7, 2, None).unwrap(),
            FieldCtx::finite(5, 3, None).unwrap(),
        ];
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for ctx in &ctxs {
            for _ in 0..50 {
                let a = random_elem(ctx, &mut rng);
                let b = random_elem(ctx, &mut rng);
                let c = random_elem(ctx, &mut rng);
                assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                assert_eq!(a.mul(&b), b.mul(&a));
                assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                if !a.is_zero() {
                    assert!(a.mul(&a.inv()).is_one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for ctx in [
            FieldCtx::prime(13).unwrap(),
            FieldCtx::finite(3, 3, None).unwrap(),
        ] {
            let p = ctx.characteristic();
            for _ in 0..60 {
                let a = random_elem(&ctx, &mut rng);
                let b = random_elem(&ctx, &mut rng);
                assert_eq!(a.add(&b).pow(p), a.pow(p).add(&b.pow(p)));
            }
        }
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = FieldCtx::rationals();
        let a = q.from_ratio(6, -4).unwrap();
        let r = a.as_rational().unwrap();
        assert_eq!(
            (r.numer().to_string(), r.denom().to_string()),
            ("-3".into(), "2".into())
        );
        // big product still exact and reduced
        let mut acc = q.one();
        for i in 1..=40i64 {
            acc = acc.mul(&q.from_ratio(i, i + 1).unwrap());
        }
        assert_eq!(acc, q.from_ratio(1, 41).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let q = FieldCtx::rationals();
        for s in ["3", "-7/2", "0"] {
            let e = q.parse_elem(s).unwrap();
            assert_eq!(q.parse_elem(&e.to_string()).unwrap(), e);
        }
        let f = FieldCtx::prime(101).unwrap();
        assert_eq!(f.parse_elem("-1").unwrap().to_string(), "100");
        let e = FieldCtx::finite(5, 3, None).unwrap();
        let x = e.parse_elem("3:0:1").unwrap();
        assert_eq!(x.to_string(), "3:0:1");
        assert_eq!(e.parse_elem("7").unwrap().to_string(), "2:0:0");
    }

    #[test]
    fn lift_to_extension() {
        let fp = FieldCtx::prime(7).unwrap();
        let fq = FieldCtx::finite(7, 2, None).unwrap();
        let a = fp.from_i64(5);
        let lifted = fq.lift(&a).unwrap();
        assert_eq!(lifted.to_string(), "5:0");
        assert!(fq.lift(&FieldCtx::prime(5).unwrap().one()).is_err());
    }
}
