//! Floating-point model of the universal cover of PSL(2,R) acting on
//! H x R, the invariant contact form `dt + dx/y` and its frame, polygon
//! reflection groups with their lifted relations, and the perturbed
//! Hamiltonian dynamics near an orbifold point.

mod contact;
mod dynamics;
mod lifted;
mod mobius;
mod polygon;
pub mod sampling;
mod tolerance;

use thiserror::Error;

use crate::arithmetic::ArithmeticError;

pub use contact::{
    automorphic_modulus, contact_invariance_residual, contact_lambda, frame_at, lifted_jacobian,
    InvarianceResidual, JacobianMethod,
};
pub use dynamics::{
    contraction_residual, hamiltonian_field, linearized_return_map, LocalModel, Perturbation,
    ReturnMap, SmoothPerturbation,
};
pub use lifted::{lifted_apply, LiftedIsometry, UpperHalfPoint};
pub use mobius::{mobius_apply, MobiusElement};
pub use polygon::{
    build_polygon_group, check_relations, geodesic_direction, hyperbolic_distance, point_at,
    polygon_area, relation_report, Isometry, PolygonGroup, RelationKind, RelationReport,
    RelationResidual,
};
pub use tolerance::{ToleranceError, Tolerances, TOLERANCE_PROFILE_ENV};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("|cz + d| = {modulus:e} vanishes at z = {re} + {im}i")]
    DegenerateInput { re: f64, im: f64, modulus: f64 },
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    InvalidPoint { x: f64, y: f64 },
    #[error("matrix determinant {det} cannot be normalized to 1")]
    DegenerateMatrix { det: f64 },
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error("relation {relation}: residual {residual:e} exceeds {tolerance:e}")]
    RelationFailure {
        relation: String,
        residual: f64,
        tolerance: f64,
    },
    #[error("rotation is degenerate: theta_T = {theta}, correction = {correction}; perturb epsilon")]
    NondegeneracyFailure { theta: f64, correction: f64 },
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
