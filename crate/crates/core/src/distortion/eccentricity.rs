use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lp::{minimize, LpOutcome};
use super::DistortionError;
use crate::geom::{self, cross3, dot, sub3, to3, Vec3};
use crate::surfaces::TriMesh;

/// Circumradius over inradius of a convex surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EccentricityResult {
    pub circumradius: f64,
    pub inradius: f64,
    pub ratio: f64,
    pub circumcenter: Vec<f64>,
    pub incenter: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: Vec3) -> bool {
        geom::dist(&self.center, &p) <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

fn ball2(a: Vec3, b: Vec3) -> Ball {
    let center = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0];
    Ball { center, radius: geom::dist(&a, &b) / 2.0 }
}

/// Smallest ball with the three points on its boundary (the circumcircle).
fn ball3(a: Vec3, b: Vec3, c: Vec3) -> Ball {
    let u = sub3(b, a);
    let v = sub3(c, a);
    let w = cross3(u, v);
    let ww = dot(&w, &w);
    if ww <= 1e-24 * dot(&u, &u).max(dot(&v, &v)).powi(2) {
        // collinear: the two farthest points span the ball
        return [ball2(a, b), ball2(a, c), ball2(b, c)]
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap();
    }
    let t1 = cross3(v, w);
    let t2 = cross3(w, u);
    let (uu, vv) = (dot(&u, &u), dot(&v, &v));
    let off = [0, 1, 2].map(|i| (uu * t1[i] + vv * t2[i]) / (2.0 * ww));
    let center = [a[0] + off[0], a[1] + off[1], a[2] + off[2]];
    Ball { center, radius: geom::norm(&off) }
}

fn ball4(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Ball {
    let rows: Vec<Vec<f64>> = [b, c, d].iter().map(|p| sub3(*p, a).iter().map(|x| 2.0 * x).collect()).collect();
    let rhs: Vec<f64> = [b, c, d].iter().map(|p| dot(p, p) - dot(&a, &a)).collect();
    match geom::solve_dense(rows, rhs) {
        Some(x) => {
            let center = [x[0], x[1], x[2]];
            Ball { center, radius: geom::dist(&center, &a) }
        }
        // coplanar support: fall back to the largest circumcircle
        None => [ball3(a, b, c), ball3(a, b, d), ball3(a, c, d), ball3(b, c, d)]
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap(),
    }
}

/// Minimal enclosing ball (Welzl's algorithm in its iterative move-to-front
/// form, over a fixed pseudo-random order).
pub fn minimal_enclosing_ball(points: &[Vec3]) -> Ball {
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let Some(&first) = pts.first() else {
        return Ball { center: [0.0; 3], radius: 0.0 };
    };
    let mut ball = Ball { center: first, radius: 0.0 };
    for i in 1..pts.len() {
        if ball.contains(pts[i]) {
            continue;
        }
        ball = Ball { center: pts[i], radius: 0.0 };
        for j in 0..i {
            if ball.contains(pts[j]) {
                continue;
            }
            ball = ball2(pts[i], pts[j]);
            for k in 0..j {
                if ball.contains(pts[k]) {
                    continue;
                }
                ball = ball3(pts[i], pts[j], pts[k]);
                for l in 0..k {
                    if !ball.contains(pts[l]) {
                        ball = ball4(pts[i], pts[j], pts[k], pts[l]);
                    }
                }
            }
        }
    }
    ball
}

/// Outward unit normals and offsets of the triangle planes of a closed
/// surface, after checking that every vertex lies inside every plane.
fn facet_halfspaces(mesh: &TriMesh, tol: f64) -> Result<Vec<(Vec3, f64)>, DistortionError> {
    let pts: Vec<Vec3> = mesh.vertices().map(to3).collect();
    let volume: f64 = mesh
        .triangles()
        .iter()
        .map(|t| dot(&pts[t[0]], &cross3(pts[t[1]], pts[t[2]])))
        .sum();
    let sign = if volume < 0.0 { -1.0 } else { 1.0 };
    let scale = mesh.diameter();
    let mut planes = Vec::with_capacity(mesh.triangles().len());
    for (i, t) in mesh.triangles().iter().enumerate() {
        let n = cross3(sub3(pts[t[1]], pts[t[0]]), sub3(pts[t[2]], pts[t[0]]));
        let len = geom::norm(&n);
        let n = n.map(|x| sign * x / len);
        let offset = dot(&n, &pts[t[0]]);
        if let Some(v) = pts.iter().position(|p| dot(&n, p) > offset + tol * scale) {
            return Err(DistortionError::NotConvex(format!("vertex {v} lies outside the plane of triangle {i}")));
        }
        planes.push((n, offset));
    }
    Ok(planes)
}

/// Centre and radius of the largest ball inside the given half-spaces
/// `n·x ≤ b` (unit normals), via the dual linear program
/// min Σ b_i λ_i  s.t.  Σ λ_i n_i = 0, Σ λ_i = 1, λ ≥ 0.
pub fn chebyshev_center(planes: &[(Vec3, f64)]) -> Result<(Vec3, f64), DistortionError> {
    let m = planes.len();
    let c: Vec<f64> = planes.iter().map(|p| p.1).collect();
    let mut a = vec![vec![0.0; m]; 4];
    for (j, (n, _)) in planes.iter().enumerate() {
        for d in 0..3 {
            a[d][j] = n[d];
        }
        a[3][j] = 1.0;
    }
    let LpOutcome::Optimal { basis, .. } = minimize(&c, &a, &[0.0, 0.0, 0.0, 1.0]) else {
        return Err(DistortionError::Lp("inscribed-ball program has no optimum".into()));
    };
    // the basic facets are tight at the centre: n_i·x + ρ = b_i
    let active: Vec<usize> = basis.into_iter().filter(|&j| j < m).collect();
    if active.len() < 4 {
        return Err(DistortionError::Lp("degenerate basis for the inscribed ball".into()));
    }
    let rows: Vec<Vec<f64>> = active.iter().map(|&j| vec![planes[j].0[0], planes[j].0[1], planes[j].0[2], 1.0]).collect();
    let rhs: Vec<f64> = active.iter().map(|&j| planes[j].1).collect();
    let sol = geom::solve_dense(rows, rhs).ok_or_else(|| DistortionError::Lp("singular active set".into()))?;
    let center = [sol[0], sol[1], sol[2]];
    let radius = planes.iter().map(|(n, b)| b - dot(n, &center)).fold(f64::INFINITY, f64::min);
    Ok((center, radius))
}

/// Eccentricity of a convex closed surface in R³.
pub fn eccentricity(mesh: &TriMesh, convex: bool) -> Result<EccentricityResult, DistortionError> {
    if !convex {
        return Err(DistortionError::NotConvex("eccentricity is defined for convex surfaces only".into()));
    }
    if mesh.dim() != 3 {
        return Err(DistortionError::InvalidParameter(format!("eccentricity needs a surface in R³, got R^{}", mesh.dim())));
    }
    let planes = facet_halfspaces(mesh, 1e-9)?;
    let pts: Vec<Vec3> = mesh.vertices().map(to3).collect();
    let ball = minimal_enclosing_ball(&pts);
    let (incenter, inradius) = chebyshev_center(&planes)?;
    Ok(EccentricityResult {
        circumradius: ball.radius,
        inradius,
        ratio: ball.radius / inradius,
        circumcenter: ball.center.to_vec(),
        incenter: incenter.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{mesh_ellipsoid, mesh_sphere};
    use rand::Rng;

    fn brute_force_ball(pts: &[Vec3]) -> f64 {
        let n = pts.len();
        let mut best = f64::INFINITY;
        let mut consider = |b: Ball| {
            if pts.iter().all(|p| geom::dist(&b.center, p) <= b.radius + 1e-9) {
                best = best.min(b.radius);
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                consider(ball2(pts[i], pts[j]));
                for k in j + 1..n {
                    consider(ball3(pts[i], pts[j], pts[k]));
                    for l in k + 1..n {
                        consider(ball4(pts[i], pts[j], pts[k], pts[l]));
                    }
                }
            }
        }
        best
    }

    #[test]
    fn welzl_matches_support_set_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<Vec3> = (0..10).map(|_| [rng.gen(), rng.gen(), rng.gen::<f64>() * 0.5]).collect();
            let w = minimal_enclosing_ball(&pts);
            assert!(pts.iter().all(|p| w.contains(*p)));
            assert!((w.radius - brute_force_ball(&pts)).abs() < 1e-9);
        }
    }

    #[test]
    fn cube_inscribed_ball() {
        let planes: Vec<(Vec3, f64)> = vec![
            ([1.0, 0.0, 0.0], 1.0),
            ([-1.0, 0.0, 0.0], 1.0),
            ([0.0, 1.0, 0.0], 2.0),
            ([0.0, -1.0, 0.0], 2.0),
            ([0.0, 0.0, 1.0], 3.0),
            ([0.0, 0.0, -1.0], 3.0),
        ];
        let (c, r) = chebyshev_center(&planes).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(c[0].abs() < 1e-12);
    }

    #[test]
    fn sphere_ratio_is_mesh_effect_only() {
        let s = mesh_sphere(1.0, 3).unwrap();
        let e = eccentricity(&s, true).unwrap();
        assert!((e.circumradius - 1.0).abs() < 1e-9);
        let planes = facet_halfspaces(&s, 1e-9).unwrap();
        let min_offset = planes.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        assert!((e.ratio - 1.0 / min_offset).abs() < 1e-6);
        assert!(e.ratio < 1.02);
    }

    #[test]
    fn prolate_ellipsoid() {
        let m = mesh_ellipsoid(5.0, 1.0, 1.0, 3).unwrap();
        let e = eccentricity(&m, true).unwrap();
        assert!((e.circumradius - 5.0).abs() < 1e-9);
        assert!((e.ratio - 5.0).abs() / 5.0 < 0.02, "{}", e.ratio);
    }

    #[test]
    fn non_convex_rejected() {
        let s = mesh_sphere(1.0, 2).unwrap();
        let mut coords = s.coords().to_vec();
        for x in &mut coords[0..3] {
            *x *= 0.5;
        }
        let dented = TriMesh::new(3, coords, s.triangles().to_vec(), 0);
        assert!(matches!(eccentricity(&dented, true), Err(DistortionError::NotConvex(_))));
        assert!(eccentricity(&s, false).is_err());
    }
}
