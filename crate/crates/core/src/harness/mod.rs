//! Run configuration, JSON reports, parameter sweeps with CSV and SVG output,
//! and the acceptance suite.

mod config;
mod report;
mod svg;
mod sweep;
mod verify;

use std::io;
use std::path::Path;

use thiserror::Error;

use crate::distortion::DistortionError;
use crate::geodesics::GeodesicError;
use crate::surfaces::{cone_resolution_for_h, mesh_torus, MeshError, SurfaceSpec, TriMesh};

pub use config::RunConfig;
pub use report::{estimate_report, EstimateReport, HistoryPoint, SCHEMA_VERSION};
pub use svg::Plot;
pub use sweep::{
    cone_sweep, cone_sweep_h, cone_sweep_svg, fit_linear_coefficient, simplex_sweep, simplex_sweep_svg, sweep_csv, torus_sweep,
    torus_sweep_svg, SweepRow,
};
pub use verify::{CriterionOutcome, VerifyConfig, VerifyReport, Verifier, CRITERIA, KNOWN_DEFECTS};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("config: {0}")]
    Config(String),
}

impl HarnessError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }
}

/// Longest edge targeted by default cone meshes.
pub const CONE_H: f64 = 0.02;
/// Meridian segments of default torus meshes; longitudes scale with 1/eps.
pub const TORUS_RES_V: usize = 24;
pub const SPHERE_SUBDIVISIONS: usize = 4;
pub const SIMPLEX_SUBDIVISIONS: usize = 5;

/// Default torus mesh: near-isotropic triangles with `res_v` meridian segments.
pub fn torus_mesh(eps: f64, res_v: usize) -> Result<TriMesh, MeshError> {
    mesh_torus(eps, (res_v as f64 / eps).ceil() as usize, res_v)
}

/// Meshes `spec` at resolution `res`, or at the default resolution for its
/// family: h_max ≤ 0.02 for the cone, subdivision 4 for sphere and
/// ellipsoid, 5 for the simplex, and 24 meridian segments for the torus.
pub fn default_mesh(spec: &SurfaceSpec, res: Option<usize>) -> Result<TriMesh, MeshError> {
    spec.validate()?;
    if let Some(res) = res {
        return spec.mesh(res);
    }
    match *spec {
        SurfaceSpec::Cone { r } => spec.mesh(cone_resolution_for_h(r, CONE_H)?),
        SurfaceSpec::Torus { eps } => torus_mesh(eps, TORUS_RES_V),
        SurfaceSpec::SimplexBoundary { .. } => spec.mesh(SIMPLEX_SUBDIVISIONS),
        _ => spec.mesh(SPHERE_SUBDIVISIONS),
    }
}
