//! Intrinsic distances: a Steiner-graph engine for arbitrary meshes and exact
//! oracles for surfaces that unfold into the plane.

mod analytic;
mod cone;
mod steiner;
mod straighten;

use serde::Serialize;
use thiserror::Error;

pub use analytic::{ridge_unfold_distance, sphere_distance, two_ray_distortion, two_segment_sampled_distortion};
pub use cone::{cone_lateral_distance, cone_surface_distance};
pub use steiner::{build_steiner_graph, trace_path, NodeSite, SteinerGraph, NO_NODE};
pub use straighten::straighten_path;

/// A distance together with a path realising it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicResult {
    pub distance: f64,
    /// Polyline from the first query point to the second. Oracles for curved
    /// pieces (cone lateral surface, sphere) return a fine sampling.
    pub path: Vec<Vec<f64>>,
    /// `true` for closed-form or unfolding oracles, `false` for graph paths.
    pub exact: bool,
}

impl GeodesicResult {
    /// Sum of the polyline segment lengths.
    pub fn path_length(&self) -> f64 {
        self.path.windows(2).map(|w| crate::geom::dist(&w[0], &w[1])).sum()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeodesicError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is not on the surface: {0}")]
    OffSurface(String),
    #[error("points do not lie in adjacent facets")]
    NonAdjacentFacets,
}
