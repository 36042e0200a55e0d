use std::collections::HashMap;
use std::f64::consts::PI;

use super::{validate_mesh, MeshError, TriMesh};
use crate::geom::{cross3, sub3, to3, Vec3};

fn invalid(msg: impl Into<String>) -> MeshError {
    MeshError::InvalidParameter(msg.into())
}

/// Flips triangles whose normal points towards `interior(centroid)`.
fn orient_outward(coords: &[f64], tris: &mut [[usize; 3]], interior: impl Fn(Vec3) -> Vec3) {
    let p = |i: usize| to3(&coords[3 * i..3 * i + 3]);
    for t in tris.iter_mut() {
        let (a, b, c) = (p(t[0]), p(t[1]), p(t[2]));
        let n = cross3(sub3(b, a), sub3(c, a));
        let centroid = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0, (a[2] + b[2] + c[2]) / 3.0];
        let out = sub3(centroid, interior(centroid));
        if n[0] * out[0] + n[1] * out[1] + n[2] * out[2] < 0.0 {
            t.swap(1, 2);
        }
    }
}

/// Connects concentric rings of equal size into a band of triangles.
fn ring_band(inner: &[usize], outer: &[usize], tris: &mut Vec<[usize; 3]>) {
    let m = inner.len();
    for j in 0..m {
        let j1 = (j + 1) % m;
        tris.push([inner[j], outer[j], outer[j1]]);
        tris.push([inner[j], outer[j1], inner[j1]]);
    }
}

fn fan(center: usize, ring: &[usize], tris: &mut Vec<[usize; 3]>) {
    let m = ring.len();
    for j in 0..m {
        tris.push([center, ring[j], ring[(j + 1) % m]]);
    }
}

/// Closed cone `S(r)`: apex at the origin, rim circle of radius `r` at
/// height `sqrt(1 - r^2)`, capped by the flat disc.
///
/// `resolution` is the number of angular segments. Lateral rings sit at
/// slant distances `i / n_lat` and disc rings at radii `r l / n_disc`, with
/// both counts chosen so the ring spacing matches the rim chord. The apex is a
/// single vertex with a triangle fan, and the rim ring is shared by the
/// lateral surface and the disc.
pub fn mesh_cone(r: f64, resolution: usize) -> Result<TriMesh, MeshError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid(format!("cone needs 0 < r < 1, got {r}")));
    }
    if resolution < 8 {
        return Err(invalid(format!("cone resolution must be at least 8, got {resolution}")));
    }
    let m = resolution;
    let height = (1.0 - r * r).sqrt();
    let chord = 2.0 * r * (PI / m as f64).sin();
    let n_lat = ((1.0 / chord).ceil() as usize).max(2);
    let n_disc = ((r / chord).ceil() as usize).max(1);

    let mut coords = vec![0.0, 0.0, 0.0];
    let mut rings: Vec<Vec<usize>> = Vec::new();
    let angle = |j: usize| 2.0 * PI * j as f64 / m as f64;
    for i in 1..=n_lat {
        let s = i as f64 / n_lat as f64;
        let base = coords.len() / 3;
        for j in 0..m {
            let (sin, cos) = angle(j).sin_cos();
            coords.extend([r * s * cos, r * s * sin, height * s]);
        }
        rings.push((base..base + m).collect());
    }
    for l in (1..n_disc).rev() {
        let rho = r * l as f64 / n_disc as f64;
        let base = coords.len() / 3;
        for j in 0..m {
            let (sin, cos) = angle(j).sin_cos();
            coords.extend([rho * cos, rho * sin, height]);
        }
        rings.push((base..base + m).collect());
    }
    let center = coords.len() / 3;
    coords.extend([0.0, 0.0, height]);

    let mut tris = Vec::new();
    fan(0, &rings[0], &mut tris);
    for w in rings.windows(2) {
        ring_band(&w[0], &w[1], &mut tris);
    }
    fan(center, rings.last().unwrap(), &mut tris);
    orient_outward(&coords, &mut tris, |_| [0.0, 0.0, 0.7 * height]);

    let mut reps = vec![0];
    reps.extend(rings.iter().map(|ring| ring[0]));
    reps.push(center);
    let mesh = TriMesh::new(3, coords, tris, 0).with_orbit_representatives(reps);
    validate_mesh(&mesh)?;
    Ok(mesh)
}

/// Smallest angular resolution whose cone mesh has `h_max <= h`.
pub fn cone_resolution_for_h(r: f64, h: f64) -> Result<usize, MeshError> {
    if !(h > 0.0) {
        return Err(invalid("target edge length must be positive"));
    }
    let guess = (2.0 * PI * r * std::f64::consts::SQRT_2 / h).floor() as usize;
    let mut m = (guess * 2 / 3).max(8);
    loop {
        if mesh_cone(r, m)?.h_max() <= h {
            return Ok(m);
        }
        m += 1;
    }
}

fn icosphere_unit(subdivisions: usize) -> (Vec<f64>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut coords: Vec<f64> = Vec::new();
    for p in base {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        coords.extend([p[0] / n, p[1] / n, p[2] / n]);
    }
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, coords: &mut Vec<f64>| -> usize {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let p: Vec<f64> = (0..3).map(|k| coords[3 * a + k] + coords[3 * b + k]).collect();
                let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                coords.extend(p.iter().map(|x| x / n));
                coords.len() / 3 - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for &[a, b, c] in &tris {
            let ab = midpoint(a, b, &mut coords);
            let bc = midpoint(b, c, &mut coords);
            let ca = midpoint(c, a, &mut coords);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    orient_outward(&coords, &mut tris, |_| [0.0; 3]);
    (coords, tris)
}

fn first_octant(coords: &[f64]) -> Vec<usize> {
    coords
        .chunks_exact(3)
        .enumerate()
        .filter(|(_, p)| p.iter().all(|&x| x >= 0.0))
        .map(|(i, _)| i)
        .collect()
}

/// Icosphere: the icosahedron refined `subdivisions` times by edge midpoints
/// pushed back onto the sphere.
pub fn mesh_sphere(radius: f64, subdivisions: usize) -> Result<TriMesh, MeshError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("sphere radius must be positive, got {radius}")));
    }
    if subdivisions < 1 {
        return Err(invalid("sphere needs at least one subdivision"));
    }
    let (mut coords, tris) = icosphere_unit(subdivisions);
    coords.iter_mut().for_each(|x| *x *= radius);
    // The icosahedron is symmetric under each coordinate sign flip.
    let reps = first_octant(&coords);
    let mesh = TriMesh::new(3, coords, tris, 0).with_orbit_representatives(reps);
    validate_mesh(&mesh)?;
    Ok(mesh)
}

/// Unit icosphere scaled by `(a, b, c)` along the axes.
pub fn mesh_ellipsoid(a: f64, b: f64, c: f64, subdivisions: usize) -> Result<TriMesh, MeshError> {
    if !(a >= b && b >= c && c > 0.0 && a.is_finite()) {
        return Err(invalid(format!("ellipsoid needs a >= b >= c > 0, got ({a}, {b}, {c})")));
    }
    if subdivisions < 1 {
        return Err(invalid("ellipsoid needs at least one subdivision"));
    }
    let (mut coords, tris) = icosphere_unit(subdivisions);
    for p in coords.chunks_exact_mut(3) {
        p[0] *= a;
        p[1] *= b;
        p[2] *= c;
    }
    let reps = first_octant(&coords);
    let mesh = TriMesh::new(3, coords, tris, 0).with_orbit_representatives(reps);
    validate_mesh(&mesh)?;
    Ok(mesh)
}

/// Tube of radius `eps` around the unit circle on a regular `(u, v)` grid,
/// `u` along the circle and `v` around the tube.
pub fn mesh_torus(eps: f64, res_u: usize, res_v: usize) -> Result<TriMesh, MeshError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("torus needs 0 < eps < 1, got {eps}")));
    }
    if res_u < 8 || res_v < 8 {
        return Err(invalid(format!("torus resolution must be at least 8x8, got {res_u}x{res_v}")));
    }
    let mut coords = Vec::with_capacity(3 * res_u * res_v);
    let mut params = Vec::with_capacity(res_u * res_v);
    for i in 0..res_u {
        let u = 2.0 * PI * i as f64 / res_u as f64;
        let (su, cu) = u.sin_cos();
        for j in 0..res_v {
            let v = 2.0 * PI * j as f64 / res_v as f64;
            let (sv, cv) = v.sin_cos();
            let rho = 1.0 + eps * cv;
            coords.extend([rho * cu, rho * su, eps * sv]);
            params.push([u, v]);
        }
    }
    let idx = |i: usize, j: usize| (i % res_u) * res_v + (j % res_v);
    let mut tris = Vec::with_capacity(2 * res_u * res_v);
    for i in 0..res_u {
        for j in 0..res_v {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    orient_outward(&coords, &mut tris, |p| {
        let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
        [p[0] / rho, p[1] / rho, 0.0]
    });
    // Rotations about the z-axis by multiples of 2 pi / res_u.
    let reps = (0..res_v).collect();
    let mesh = TriMesh::new(3, coords, tris, 1)
        .with_param_coords(params)
        .with_orbit_representatives(reps);
    validate_mesh(&mesh)?;
    Ok(mesh)
}

/// Boundary of the regular 3-simplex with vertices `e1..e4` in R^4.
///
/// Each facet is cut into `(subdivisions + 1)^2` triangles by a regular
/// barycentric grid, so facet centroids are vertices whenever
/// `subdivisions + 1` is a multiple of 3 and ridge midpoints whenever it is
/// even.
pub fn mesh_simplex_boundary(n: usize, subdivisions: usize) -> Result<TriMesh, MeshError> {
    if n < 1 {
        return Err(invalid("simplex boundary needs n >= 1"));
    }
    if n != 2 {
        return Err(MeshError::SimplexDimension(n));
    }
    let m = subdivisions + 1;
    // Oriented boundary of [0, 1, 2, 3].
    let facets = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    let mut index: HashMap<[usize; 4], usize> = HashMap::new();
    let mut coords: Vec<f64> = Vec::new();
    let mut counts_of: Vec<[usize; 4]> = Vec::new();
    let mut tris = Vec::new();
    for facet in facets {
        let [fa, fb, fc] = facet;
        let mut vid = |i: usize, j: usize| -> usize {
            let mut counts = [0usize; 4];
            counts[fa] += i;
            counts[fb] += j;
            counts[fc] += m - i - j;
            *index.entry(counts).or_insert_with(|| {
                coords.extend(counts.iter().map(|&c| c as f64 / m as f64));
                counts_of.push(counts);
                counts_of.len() - 1
            })
        };
        for i in 0..m {
            for j in 0..m - i {
                tris.push([vid(i, j), vid(i + 1, j), vid(i, j + 1)]);
                if i + j + 2 <= m {
                    tris.push([vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
                }
            }
        }
    }
    // Coordinate permutations act transitively on sorted representatives.
    let reps = counts_of
        .iter()
        .enumerate()
        .filter(|(_, c)| c[0] >= c[1] && c[1] >= c[2] && c[2] >= c[3])
        .map(|(i, _)| i)
        .collect();
    let mesh = TriMesh::new(4, coords, tris, 0).with_orbit_representatives(reps);
    validate_mesh(&mesh)?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::norm;

    #[test]
    fn cone_rim_and_lateral_equation() {
        let r = 0.3;
        let mesh = mesh_cone(r, 128).unwrap();
        assert_eq!(mesh.euler_characteristic(), 2);
        assert_eq!(mesh.vertex(0), &[0.0, 0.0, 0.0]);
        let height = (1.0 - r * r).sqrt();
        let mut worst = 0.0f64;
        for p in mesh.vertices() {
            if p[2] < height - 1e-12 {
                let lhs = p[0] * p[0] + p[1] * p[1];
                let rhs = r * r / (1.0 - r * r) * p[2] * p[2];
                worst = worst.max((lhs - rhs).abs());
            }
        }
        assert!(worst < 1e-12, "lateral residual {worst}");
    }

    #[test]
    fn cone_rim_at_expected_height() {
        let r = 0.169;
        let mesh = mesh_cone(r, 40).unwrap();
        let height = (1.0 - r * r).sqrt();
        let rim: Vec<_> = mesh
            .vertices()
            .filter(|p| (p[2] - height).abs() < 1e-12 && ((p[0].hypot(p[1])) - r).abs() < 1e-12)
            .collect();
        assert_eq!(rim.len(), 40);
        let disc_ok = mesh
            .vertices()
            .filter(|p| p[0].hypot(p[1]) < r - 1e-9 && (p[2] - height).abs() < 1e-9)
            .count();
        assert!(disc_ok > 0);
    }

    #[test]
    fn cone_rejects_bad_parameters() {
        assert!(mesh_cone(1.2, 64).is_err());
        assert!(mesh_cone(0.5, 4).is_err());
    }

    #[test]
    fn cone_resolution_search_hits_target() {
        let m = cone_resolution_for_h(0.25, 0.05).unwrap();
        assert!(mesh_cone(0.25, m).unwrap().h_max() <= 0.05);
        assert!(m == 8 || mesh_cone(0.25, m - 1).unwrap().h_max() > 0.05);
    }

    #[test]
    fn sphere_counts_and_radius() {
        let s1 = mesh_sphere(1.0, 1).unwrap();
        assert_eq!(s1.vertex_count(), 42);
        assert_eq!(s1.triangles().len(), 80);
        assert_eq!(mesh_sphere(1.0, 4).unwrap().euler_characteristic(), 2);
        let s3 = mesh_sphere(2.0, 3).unwrap();
        assert!(s3.vertices().all(|p| (norm(p) - 2.0).abs() < 1e-12));
    }

    #[test]
    fn ellipsoid_scaling() {
        assert_eq!(mesh_ellipsoid(1.0, 1.0, 1.0, 2).unwrap().coords(), mesh_sphere(1.0, 2).unwrap().coords());
        let e = mesh_ellipsoid(5.0, 1.0, 1.0, 2).unwrap();
        let xmax = e.vertices().map(|p| p[0]).fold(f64::MIN, f64::max);
        let xmin = e.vertices().map(|p| p[0]).fold(f64::MAX, f64::min);
        assert!((xmax - 5.0).abs() < 1e-12 && (xmin + 5.0).abs() < 1e-12);
        let e2 = mesh_ellipsoid(2.0, 1.0, 1.0, 4).unwrap();
        assert!(e2
            .vertices()
            .all(|p| (p[0] * p[0] / 4.0 + p[1] * p[1] + p[2] * p[2] - 1.0).abs() < 1e-12));
        assert!(mesh_ellipsoid(1.0, 2.0, 1.0, 2).is_err());
    }

    #[test]
    fn torus_grid_properties() {
        let t = mesh_torus(0.1, 64, 16).unwrap();
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.expected_genus(), 1);
        assert_eq!(t.param_coords().unwrap().len(), 64 * 16);

        let t3 = mesh_torus(0.3, 32, 16).unwrap();
        let params = t3.param_coords().unwrap();
        let mut worst = 0.0f64;
        for (p, uv) in t3.vertices().zip(params) {
            let v = uv[1];
            if (v - PI / 2.0).abs() < 1e-9 || (v - 3.0 * PI / 2.0).abs() < 1e-9 {
                worst = worst.max((p[0].hypot(p[1]) - 1.0).abs());
            }
        }
        assert!(worst < 1e-12);

        let thin = mesh_torus(0.05, 128, 16).unwrap();
        assert!(thin.vertices().all(|p| {
            let d = ((p[0].hypot(p[1]) - 1.0).powi(2) + p[2] * p[2]).sqrt();
            (d - 0.05).abs() < 1e-12
        }));
    }

    #[test]
    fn simplex_boundary_meshes() {
        let s0 = mesh_simplex_boundary(2, 0).unwrap();
        assert_eq!(s0.triangles().len(), 4);
        assert_eq!(s0.vertex_count(), 4);
        let s3 = mesh_simplex_boundary(2, 3).unwrap();
        assert_eq!(s3.euler_characteristic(), 2);
        assert!(s3.vertices().all(|p| {
            (p.iter().sum::<f64>() - 1.0).abs() < 1e-12 && p.iter().all(|&x| x >= 0.0)
        }));
        assert_eq!(mesh_simplex_boundary(3, 1), Err(MeshError::SimplexDimension(3)));
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(mesh_cone(0.2, 32).unwrap(), mesh_cone(0.2, 32).unwrap());
        assert_eq!(mesh_torus(0.2, 16, 8).unwrap(), mesh_torus(0.2, 16, 8).unwrap());
        assert_eq!(mesh_sphere(1.0, 3).unwrap(), mesh_sphere(1.0, 3).unwrap());
    }

    #[test]
    fn h_max_decreases_when_resolution_doubles() {
        let pairs: Vec<(f64, f64)> = vec![
            (mesh_cone(0.3, 32).unwrap().h_max(), mesh_cone(0.3, 64).unwrap().h_max()),
            (mesh_sphere(1.0, 2).unwrap().h_max(), mesh_sphere(1.0, 3).unwrap().h_max()),
            (mesh_torus(0.2, 16, 8).unwrap().h_max(), mesh_torus(0.2, 32, 16).unwrap().h_max()),
            (
                mesh_simplex_boundary(2, 1).unwrap().h_max(),
                mesh_simplex_boundary(2, 3).unwrap().h_max(),
            ),
        ];
        for (coarse, fine) in pairs {
            assert!(fine < coarse, "{fine} !< {coarse}");
        }
    }

    #[test]
    fn orbit_representatives_cover_vertices() {
        // Every sphere vertex maps into the first octant by sign flips.
        let s = mesh_sphere(1.0, 2).unwrap();
        let reps = s.orbit_representatives().unwrap();
        for p in s.vertices() {
            let folded = [p[0].abs(), p[1].abs(), p[2].abs()];
            assert!(reps.iter().any(|&i| s.vertex(i) == folded));
        }
        let c = mesh_cone(0.2, 16).unwrap();
        let reps = c.orbit_representatives().unwrap();
        for p in c.vertices() {
            let rho = p[0].hypot(p[1]);
            assert!(reps.iter().any(|&i| {
                let q = c.vertex(i);
                (q[0].hypot(q[1]) - rho).abs() < 1e-12 && (q[2] - p[2]).abs() < 1e-12
            }));
        }
    }
}
