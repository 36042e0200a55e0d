//! Surface families and their triangulations.
//!
//! Every generator returns a [`TriMesh`] that has already passed
//! [`validate_mesh`]; see the individual `mesh_*` functions for the vertex
//! layouts.

mod generators;
mod mesh;
pub mod off;
mod refine;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generators::{
    cone_resolution_for_h, mesh_cone, mesh_ellipsoid, mesh_simplex_boundary, mesh_sphere,
    mesh_torus,
};
pub use mesh::{validate_mesh, MeshQuality, TriMesh, DEGENERACY_FLOOR};
pub use refine::{refine_near, vertex_ring};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mesh path supports n = 2 only; use analytic operations for general n (got n = {0})")]
    SimplexDimension(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("triangle {0} references a missing or repeated vertex")]
    BadTriangle(usize),
    #[error("edge ({0}, {1}) is a boundary edge (used by one triangle)")]
    BoundaryEdge(usize, usize),
    #[error("edge ({0}, {1}) is shared by {2} triangles")]
    NonManifoldEdge(usize, usize, usize),
    #[error("edge ({0}, {1}) is traversed twice in the same direction")]
    InconsistentOrientation(usize, usize),
    #[error("Euler characteristic {found} does not match expected {expected}")]
    EulerMismatch { expected: i64, found: i64 },
    #[error("triangle {index} is degenerate (area {area:e} below floor {floor:e})")]
    DegenerateTriangle { index: usize, area: f64, floor: f64 },
    #[error("mesh has {0} triangles; at least 4 are required")]
    TooFewTriangles(usize),
}

/// A surface family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "surface", rename_all = "snake_case")]
pub enum SurfaceSpec {
    /// Closed cone `S(r)`: lateral surface of slant length 1 over a disc of radius `r`.
    Cone { r: f64 },
    Sphere { radius: f64 },
    Ellipsoid { a: f64, b: f64, c: f64 },
    /// Boundary of the `eps`-tube around the unit circle in the xy-plane.
    Torus { eps: f64 },
    /// Boundary of the regular (n+1)-simplex in R^{n+2}.
    SimplexBoundary { n: usize },
    /// Two rays from a common point meeting at angle `alpha`.
    TwoRays { alpha: f64 },
}

impl SurfaceSpec {
    pub fn validate(&self) -> Result<(), MeshError> {
        let bad = |msg: String| Err(MeshError::InvalidParameter(msg));
        match *self {
            SurfaceSpec::Cone { r } if !(r > 0.0 && r < 1.0) => bad(format!("cone needs 0 < r < 1, got {r}")),
            SurfaceSpec::Sphere { radius } if !(radius > 0.0 && radius.is_finite()) => {
                bad(format!("sphere needs radius > 0, got {radius}"))
            }
            SurfaceSpec::Ellipsoid { a, b, c } if !(a >= b && b >= c && c > 0.0 && a.is_finite()) => {
                bad(format!("ellipsoid needs a >= b >= c > 0, got ({a}, {b}, {c})"))
            }
            SurfaceSpec::Torus { eps } if !(eps > 0.0 && eps < 1.0) => bad(format!("torus needs 0 < eps < 1, got {eps}")),
            SurfaceSpec::SimplexBoundary { n } if n < 1 => bad("simplex boundary needs n >= 1".into()),
            SurfaceSpec::TwoRays { alpha } if !(alpha > 0.0 && alpha <= PI) => {
                bad(format!("two rays need 0 < alpha <= pi, got {alpha}"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceSpec::Cone { .. } => "cone",
            SurfaceSpec::Sphere { .. } => "sphere",
            SurfaceSpec::Ellipsoid { .. } => "ellipsoid",
            SurfaceSpec::Torus { .. } => "torus",
            SurfaceSpec::SimplexBoundary { .. } => "simplex",
            SurfaceSpec::TwoRays { .. } => "two_rays",
        }
    }

    /// Topological genus of the closed surface (two rays are not a surface).
    pub fn genus(&self) -> Option<u32> {
        match self {
            SurfaceSpec::Torus { .. } => Some(1),
            SurfaceSpec::TwoRays { .. } => None,
            _ => Some(0),
        }
    }

    /// Meshes the surface with a single resolution knob.
    ///
    /// `res` is the angular segment count for the cone, the subdivision level
    /// for sphere, ellipsoid and simplex, and the longitude count for the torus
    /// (meridian count `max(8, res / 4)`).
    pub fn mesh(&self, res: usize) -> Result<TriMesh, MeshError> {
        self.validate()?;
        match *self {
            SurfaceSpec::Cone { r } => mesh_cone(r, res),
            SurfaceSpec::Sphere { radius } => mesh_sphere(radius, res),
            SurfaceSpec::Ellipsoid { a, b, c } => mesh_ellipsoid(a, b, c, res),
            SurfaceSpec::Torus { eps } => mesh_torus(eps, res, (res / 4).max(8)),
            SurfaceSpec::SimplexBoundary { n } => mesh_simplex_boundary(n, res),
            SurfaceSpec::TwoRays { .. } => Err(MeshError::InvalidParameter(
                "two rays are handled analytically and have no mesh".into(),
            )),
        }
    }
}
