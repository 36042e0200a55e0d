use std::collections::HashMap;

use serde::Serialize;

use super::MeshError;
use crate::geom;

/// Triangle area floor relative to `h_max^2`.
pub const DEGENERACY_FLOOR: f64 = 1e-14;

/// Closed, consistently oriented triangle mesh embedded in R^d.
///
/// Fields are private so a mesh cannot be mutated once built; refinement
/// produces a new mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    dim: usize,
    coords: Vec<f64>,
    triangles: Vec<[usize; 3]>,
    expected_genus: u32,
    param_coords: Option<Vec<[f64; 2]>>,
    orbit_representatives: Option<Vec<usize>>,
}

impl TriMesh {
    /// Builds a mesh without validating it; call [`validate_mesh`] before use.
    pub fn new(dim: usize, coords: Vec<f64>, triangles: Vec<[usize; 3]>, expected_genus: u32) -> Self {
        assert!(dim >= 2 && coords.len() % dim == 0, "coordinate buffer does not match dimension");
        TriMesh {
            dim,
            coords,
            triangles,
            expected_genus,
            param_coords: None,
            orbit_representatives: None,
        }
    }

    pub fn with_param_coords(mut self, params: Vec<[f64; 2]>) -> Self {
        assert_eq!(params.len(), self.vertex_count());
        self.param_coords = Some(params);
        self
    }

    /// Records a vertex set whose orbits under the mesh's isometry group cover
    /// every vertex. Distortion estimates only need shortest-path sources from
    /// this set.
    pub fn with_orbit_representatives(mut self, reps: Vec<usize>) -> Self {
        self.orbit_representatives = Some(reps);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn expected_genus(&self) -> u32 {
        self.expected_genus
    }

    pub fn param_coords(&self) -> Option<&[[f64; 2]]> {
        self.param_coords.as_deref()
    }

    pub fn orbit_representatives(&self) -> Option<&[usize]> {
        self.orbit_representatives.as_deref()
    }

    /// Undirected edges `(a, b)` with `a < b`, in first-seen order.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for t in &self.triangles {
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                seen.entry(key).or_insert_with(|| {
                    out.push([key.0, key.1]);
                });
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    pub fn h_max(&self) -> f64 {
        self.edges()
            .iter()
            .map(|e| geom::dist(self.vertex(e[0]), self.vertex(e[1])))
            .fold(0.0, f64::max)
    }

    /// Largest Euclidean distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let n = self.vertex_count();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(geom::dist2(self.vertex(i), self.vertex(j)));
            }
        }
        best.sqrt()
    }

    /// Drops the triangle at `index`; used to build broken meshes in tests.
    pub fn without_triangle(&self, index: usize) -> TriMesh {
        let mut out = self.clone();
        out.triangles.remove(index);
        out.orbit_representatives = None;
        out
    }

    /// Uniformly scales and translates the embedding.
    pub fn transformed(&self, scale: f64, shift: &[f64]) -> TriMesh {
        let mut out = self.clone();
        for p in out.coords.chunks_exact_mut(self.dim) {
            for (x, s) in p.iter_mut().zip(shift) {
                *x = *x * scale + s;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshQuality {
    pub h_max: f64,
    pub triangle_count: usize,
    pub min_angle: f64,
    pub euler_characteristic: i64,
}

/// Checks every mesh invariant and reports basic quality figures.
pub fn validate_mesh(mesh: &TriMesh) -> Result<MeshQuality, MeshError> {
    let n = mesh.vertex_count();
    if let Some(i) = mesh.vertices().position(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(MeshError::NonFinite(i));
    }
    if mesh.triangles.len() < 4 {
        return Err(MeshError::TooFewTriangles(mesh.triangles.len()));
    }
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in mesh.triangles.iter().enumerate() {
        if t.iter().any(|&v| v >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return Err(MeshError::BadTriangle(ti));
        }
        for i in 0..3 {
            let key = (t[i], t[(i + 1) % 3]);
            let count = directed.entry(key).or_insert(0);
            *count += 1;
            if *count > 1 {
                return Err(MeshError::InconsistentOrientation(key.0, key.1));
            }
        }
    }
    let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b) in directed.keys() {
        *undirected.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    let mut bad: Vec<_> = undirected.iter().filter(|(_, &c)| c != 2).collect();
    bad.sort();
    if let Some((&(a, b), &c)) = bad.first() {
        return Err(if c == 1 {
            MeshError::BoundaryEdge(a, b)
        } else {
            MeshError::NonManifoldEdge(a, b, c)
        });
    }

    let chi = n as i64 - undirected.len() as i64 + mesh.triangles.len() as i64;
    let expected = 2 - 2 * mesh.expected_genus as i64;
    if chi != expected {
        return Err(MeshError::EulerMismatch { expected, found: chi });
    }

    let h_max = undirected
        .keys()
        .map(|&(a, b)| geom::dist(mesh.vertex(a), mesh.vertex(b)))
        .fold(0.0, f64::max);
    let floor = DEGENERACY_FLOOR * h_max * h_max;
    let mut min_angle = f64::INFINITY;
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = t.map(|v| mesh.vertex(v));
        let area = geom::triangle_area(a, b, c);
        if !(area >= floor) || area == 0.0 {
            return Err(MeshError::DegenerateTriangle { index: ti, area, floor });
        }
        min_angle = min_angle
            .min(geom::corner_angle(a, b, c))
            .min(geom::corner_angle(b, c, a))
            .min(geom::corner_angle(c, a, b));
    }
    Ok(MeshQuality {
        h_max,
        triangle_count: mesh.triangles.len(),
        min_angle,
        euler_characteristic: chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> TriMesh {
        let coords = vec![0., 0., 0., 1., 0., 0., 0., 1., 0., 0., 0., 1.];
        TriMesh::new(3, coords, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]], 0)
    }

    #[test]
    fn tetrahedron_is_valid() {
        let q = validate_mesh(&tetra()).unwrap();
        assert_eq!(q.triangle_count, 4);
        assert_eq!(q.euler_characteristic, 2);
        assert!((q.h_max - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn deleted_triangle_is_a_boundary_error() {
        let m = tetra().without_triangle(0);
        assert!(matches!(validate_mesh(&m), Err(MeshError::TooFewTriangles(3))));
        let mut big = crate::surfaces::mesh_sphere(1.0, 1).unwrap();
        big = big.without_triangle(5);
        assert!(matches!(validate_mesh(&big), Err(MeshError::BoundaryEdge(..))));
    }

    #[test]
    fn flipped_triangle_is_an_orientation_error() {
        let mut m = tetra();
        m.triangles[0] = [0, 1, 2];
        assert!(matches!(validate_mesh(&m), Err(MeshError::InconsistentOrientation(..))));
    }

    #[test]
    fn wrong_genus_is_an_euler_error() {
        let mut m = tetra();
        m.expected_genus = 1;
        assert_eq!(
            validate_mesh(&m),
            Err(MeshError::EulerMismatch { expected: 0, found: 2 })
        );
    }

    #[test]
    fn collapsed_triangle_is_degenerate() {
        let coords = vec![0., 0., 0., 1., 0., 0., 2., 0., 0., 0., 0., 1.];
        let m = TriMesh::new(3, coords, vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]], 0);
        assert!(matches!(validate_mesh(&m), Err(MeshError::DegenerateTriangle { .. })));
    }

    #[test]
    fn nan_coordinate_rejected() {
        let mut m = tetra();
        m.coords[4] = f64::NAN;
        assert_eq!(validate_mesh(&m), Err(MeshError::NonFinite(1)));
    }
}
