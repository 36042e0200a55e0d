//! The distortion functional and the constants and constructions around it.

mod analytic;
mod bounds;
mod eccentricity;
mod estimate;
mod lipschitz;
mod lp;
mod systole;

use thiserror::Error;

use crate::geodesics::GeodesicError;
use crate::surfaces::MeshError;

pub use analytic::{
    cone_disc_branch, cone_distortion_analytic, cone_lateral_branch, cone_threshold, dihedral_angle, find_r0,
    simplex_distortion_analytic, simplex_witnesses, RootResult, SimplexWitnesses,
};
pub use bounds::{verify_lower_bounds, BoundCheck, LowerBoundReport, BOUNDED_COMPLEMENT_BOUND, SYSTOLE_BOUND};
pub use eccentricity::{chebyshev_center, eccentricity, minimal_enclosing_ball, Ball, EccentricityResult};
pub use estimate::{estimate_distortion, estimate_distortion_with, DistortionEstimate, EstimateOptions};
pub use lipschitz::{lipschitz_check, radial_projection, LipschitzReport};
pub use systole::{systole_pair_checks, systole_torus, LoopPairCheck, SystoleResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistortionError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mesh is disconnected: some vertex pair has no connecting path")]
    Disconnected,
    #[error("no vertex pair is farther apart than the exclusion radius")]
    NoPairs,
    #[error("bracket [{lo}, {hi}] does not change sign")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("mesh has no parameter coordinates")]
    MissingParamCoords,
    #[error("systole search needs a genus-1 mesh (expected genus {0})")]
    WrongGenus(u32),
    #[error("no non-contractible loop found")]
    NoLoop,
    #[error("not convex: {0}")]
    NotConvex(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}
