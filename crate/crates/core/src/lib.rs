//! Metric distortion of embedded surfaces.
//!
//! [`surfaces`] builds and validates triangle meshes, [`geodesics`] measures
//! intrinsic distances on them, [`distortion`] estimates the distortion
//! functional and evaluates its closed forms, and [`harness`] drives runs,
//! sweeps and reports.

pub mod distortion;
pub mod geodesics;
pub mod geom;
pub mod harness;
pub mod surfaces;

pub use distortion::{DistortionError, DistortionEstimate, EccentricityResult, RootResult, SystoleResult};
pub use geodesics::{GeodesicError, GeodesicResult, SteinerGraph};
pub use surfaces::{MeshError, MeshQuality, SurfaceSpec, TriMesh};
