//! Exact-arithmetic toolkit for nodal curves on surfaces in P^3:
//! node-count bounds for Severi-variety smoothness, the rank test for
//! geometric linear normality, Bogomolov-instability interval arithmetic,
//! and finite-field reconstructions of the sharp examples.
//!
//! Everything is exact: arbitrary-precision rationals or finite fields
//! F_{p^k}, no floating point anywhere.

pub mod construct;
pub mod curve;
pub mod error;
pub mod field;
pub mod instability;
pub mod intersect;
pub mod matrix;
pub mod points;
pub mod poly;
pub mod rational;
pub mod record;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElem};
pub use matrix::ExactMatrix;
pub use points::{conditions_imposed, koszul_ci_h0, socle_check, ConditionsReport, PointSet};
pub use poly::{
    divide_by_linear, monomial_basis, parse_poly, random_poly, sylvester_resultant, HomPoly,
    Monomial,
};
