//! Crate-wide error type.

use std::fmt;

/// Errors produced by construction and analysis operations.
///
/// Arithmetic on already-validated values (field elements sharing a context,
/// homogeneous polynomials of matching degree) panics on contract violations
/// instead; fallible constructors are the validation boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `p` is not prime.
    NotPrime(u64),
    /// Extension degree outside the supported range 1..=4.
    ExtensionDegree(usize),
    /// Modulus rejected: wrong degree, not monic, or reducible.
    BadModulus(String),
    /// No irreducible monic polynomial found (cannot happen for valid p, k;
    /// kept for completeness of the search loop).
    NoIrreducible { p: u64, k: usize },
    /// Matrix entries (or operands) belong to different field contexts.
    MixedContexts,
    /// A point/element does not belong to the expected field context.
    FieldMismatch,
    /// Text could not be parsed (field elements, polynomials, points, records).
    Parse(String),
    /// Polynomial terms of differing total degree.
    Inhomogeneous { expected: usize, found: usize },
    /// Variable outside x0..x{nvars-1}.
    UnknownVariable(String),
    /// A coefficient token does not denote an element of the field.
    CoefficientNotInField(String),
    /// Resultant precondition: the eliminated variable's pure power is missing,
    /// i.e. the projection center lies on the hypersurface.
    ProjectionCenterOnHypersurface { which: &'static str },
    /// Exact division left a nonzero remainder.
    NotDivisible,
    /// Duplicate projective point after normalization.
    DuplicatePoint(String),
    /// The zero vector is not a projective point.
    ZeroPoint,
    /// A configuration that should be transverse is not (coincident points,
    /// dependent forms, failed linkage). Re-randomizing usually helps.
    Degenerate(String),
    /// The ambient surface has vanishing gradient at listed points.
    SurfaceSingular(Vec<String>),
    /// `node_classify` called on a point that is not singular on the curve.
    NotASingularPoint(String),
    /// Characteristic too small for the requested operation.
    CharacteristicTooSmall { p: u64, needed: u64 },
    /// Field size beyond the enumeration cap.
    EnumerationCap { q: u64, cap: u64 },
    /// A stated theorem hypothesis fails for the given parameters.
    Hypothesis(String),
    /// Retry budget exhausted while searching for a non-degenerate configuration.
    RetriesExhausted(String),
    /// Severi analysis requires at least one node.
    EmptyNodeSet,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{} is not prime", p),
            Error::ExtensionDegree(k) => {
                write!(f, "extension degree k = {} outside supported range 1..=4", k)
            }
            Error::BadModulus(m) => write!(f, "bad modulus: {}", m),
            Error::NoIrreducible { p, k } => {
                write!(f, "no irreducible monic polynomial of degree {} over F_{}", k, p)
            }
            Error::MixedContexts => write!(f, "mixed field contexts"),
            Error::FieldMismatch => write!(f, "value belongs to a different field context"),
            Error::Parse(m) => write!(f, "parse error: {}", m),
            Error::Inhomogeneous { expected, found } => write!(
                f,
                "inhomogeneous polynomial: term of degree {} in a degree-{} polynomial",
                found, expected
            ),
            Error::UnknownVariable(v) => write!(f, "unknown variable `{}`", v),
            Error::CoefficientNotInField(c) => {
                write!(f, "coefficient `{}` is not an element of the field", c)
            }
            Error::ProjectionCenterOnHypersurface { which } => write!(
                f,
                "projection center (0:...:0:1) lies on {} (pure power of the eliminated variable missing)",
                which
            ),
            Error::NotDivisible => write!(f, "not exactly divisible"),
            Error::DuplicatePoint(p) => write!(f, "duplicate point {}", p),
            Error::ZeroPoint => write!(f, "all-zero coordinates do not define a projective point"),
            Error::Degenerate(m) => write!(f, "degenerate configuration: {}", m),
            Error::SurfaceSingular(pts) => {
                write!(f, "surface is singular at {} found point(s): ", pts.len())?;
                for (i, p) in pts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", p)?;
                }
                Ok(())
            }
            Error::NotASingularPoint(p) => {
                write!(f, "point {} is not a singular point of the curve", p)
            }
            Error::CharacteristicTooSmall { p, needed } => {
                write!(f, "characteristic {} too small (need p > {})", p, needed)
            }
            Error::EnumerationCap { q, cap } => {
                write!(f, "field size {} exceeds the enumeration cap {}", q, cap)
            }
            Error::Hypothesis(m) => write!(f, "hypothesis violated: {}", m),
            Error::RetriesExhausted(m) => write!(f, "retries exhausted: {}", m),
            Error::EmptyNodeSet => write!(f, "analysis requires at least one node"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
