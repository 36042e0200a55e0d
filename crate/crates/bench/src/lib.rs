//! Benchmark fixtures for the distortion engine.

use distlab::surfaces::{cone_resolution_for_h, mesh_cone, mesh_sphere, mesh_torus};
use distlab::TriMesh;

/// Cone mesh at the given longest-edge target.
pub fn cone(r: f64, h: f64) -> TriMesh {
    mesh_cone(r, cone_resolution_for_h(r, h).expect("valid cone")).expect("valid cone")
}

pub fn sphere(subdivisions: usize) -> TriMesh {
    mesh_sphere(1.0, subdivisions).expect("valid sphere")
}

pub fn torus(eps: f64, res_v: usize) -> TriMesh {
    mesh_torus(eps, (res_v as f64 / eps).ceil() as usize, res_v).expect("valid torus")
}
