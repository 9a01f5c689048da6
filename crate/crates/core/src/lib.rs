//! Pontryagin extremals of left-invariant polyhedral Finsler structures on Lie
//! groups: polyhedral norms and their duals, the coadjoint control system,
//! asymptotic flag curvature, and uniqueness of controls.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curvature;
pub mod dynamics;
pub mod error;
pub mod lie_algebra;
pub mod linalg;
pub mod polynorm;
pub mod uniqueness;

pub use curvature::{
    curvature_polynomial, flag_curvature, k_vanishes, k_vanishes_3d, leading_coefficient, milnor_sectional,
    AdaptedBasis, CurvaturePolynomial, FlagCurvatureReport,
};
pub use dynamics::{
    dual_value_drift, integrate, integrate_with, reconstruct_group, select_control, verify_extremal, ControlPolicy,
    ExtremalCheck, GroupTrajectory, IntegratorConfig, MatrixRep, Trajectory,
};
pub use error::{Error, Result};
pub use lie_algebra::{catalog, AlgebraDescriptor, LieAlgebra, StructureConstants};
pub use linalg::{Covector, Subspace, Vector};
pub use polynorm::{combine, relative_interior_point, validate, Face, NormDescriptor, PolyNorm, Polytope, Validity};
pub use uniqueness::{
    classify_edge, classify_segments, classify_vertex, construct_alternative, vanishing_measure, Classification,
    UniquenessReport,
};
