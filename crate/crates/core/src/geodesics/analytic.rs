use std::f64::consts::PI;

use super::{GeodesicError, GeodesicResult};
use crate::geom;

const ARC_SAMPLES: usize = 128;

/// Great-circle distance on the sphere of the given radius centred at the origin.
pub fn sphere_distance(radius: f64, p: &[f64], q: &[f64]) -> Result<GeodesicResult, GeodesicError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(GeodesicError::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let tol = 1e-9 * radius.max(1.0);
    for x in [p, q] {
        if x.len() != 3 || (geom::norm(x) - radius).abs() > tol {
            return Err(GeodesicError::OffSurface(format!("{x:?}")));
        }
    }
    let c = (geom::dot(p, q) / (radius * radius)).clamp(-1.0, 1.0);
    let angle = c.acos();
    let path = if angle < 1e-12 {
        vec![p.to_vec(), q.to_vec()]
    } else if PI - angle < 1e-9 {
        // any great half-circle works; pick one through a direction orthogonal to p
        let mut axis = [0.0; 3];
        let k = (0..3).min_by(|&i, &j| p[i].abs().total_cmp(&p[j].abs())).unwrap();
        axis[k] = 1.0;
        let pp = geom::to3(p);
        let w = geom::cross3(pp, axis);
        let wn = geom::norm(&w);
        let w: Vec<f64> = w.iter().map(|x| x * radius / wn).collect();
        (0..=ARC_SAMPLES)
            .map(|i| {
                let t = PI * i as f64 / ARC_SAMPLES as f64;
                (0..3).map(|d| p[d] * t.cos() + w[d] * t.sin()).collect()
            })
            .collect()
    } else {
        let s = angle.sin();
        (0..=ARC_SAMPLES)
            .map(|i| {
                let t = i as f64 / ARC_SAMPLES as f64;
                let a = ((1.0 - t) * angle).sin() / s;
                let b = (t * angle).sin() / s;
                (0..3).map(|d| a * p[d] + b * q[d]).collect()
            })
            .collect()
    };
    let mut path: Vec<Vec<f64>> = path;
    *path.last_mut().unwrap() = q.to_vec();
    Ok(GeodesicResult { distance: radius * angle, path, exact: true })
}

/// Distortion of two rays from a common point meeting at angle `alpha`.
///
/// The supremum is attained by points at equal distance t from the common
/// point, where the ratio is 2t / (2t sin(alpha/2)).
pub fn two_ray_distortion(alpha: f64) -> Result<f64, GeodesicError> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= PI) {
        return Err(GeodesicError::InvalidParameter(format!("angle must lie in (0, π], got {alpha}")));
    }
    Ok(1.0 / (alpha / 2.0).sin())
}

fn van_der_corput(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while index > 0 {
        f /= base as f64;
        out += f * (index % base) as f64;
        index /= base;
    }
    out
}

/// Largest ratio (s + t) / |s·u − t·v| over `samples` × `samples` points on
/// two unit segments from a common point at angle `alpha`.
///
/// Positions along the two segments follow the base-2 and base-3
/// van der Corput sequences, so no sample pair sits exactly at s = t.
pub fn two_segment_sampled_distortion(alpha: f64, samples: usize) -> Result<f64, GeodesicError> {
    two_ray_distortion(alpha)?;
    if samples == 0 {
        return Err(GeodesicError::InvalidParameter("at least one sample per segment is required".into()));
    }
    let s: Vec<f64> = (1..=samples as u64).map(|i| van_der_corput(i, 2)).collect();
    let t: Vec<f64> = (1..=samples as u64).map(|i| van_der_corput(i, 3)).collect();
    let c = alpha.cos();
    let mut best: f64 = 0.0;
    for &a in &s {
        for &b in &t {
            let e = (a * a + b * b - 2.0 * a * b * c).max(0.0).sqrt();
            if e > 0.0 {
                best = best.max((a + b) / e);
            }
        }
    }
    Ok(best)
}

/// Orthogonal projection onto the affine hull of the simplex face spanned by
/// the coordinate axes in `support`.
fn project_face(p: &[f64], support: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    let sum: f64 = support.iter().map(|&k| p[k]).sum();
    let shift = (1.0 - sum) / support.len() as f64;
    for &k in support {
        out[k] = p[k] + shift;
    }
    out
}

/// Shortest path from `pa` to `pb` through one point of the face of the
/// standard simplex with coordinates in `ridge`, minimised over the face.
fn best_through_face(pa: &[f64], pb: &[f64], ridge: &[usize]) -> (f64, Vec<f64>) {
    let m = ridge.len();
    let mut best = (f64::INFINITY, Vec::new());
    for mask in 1u64..(1u64 << m) {
        let support: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| ridge[b]).collect();
        let a = project_face(pa, &support);
        let b = project_face(pb, &support);
        let ha = geom::dist(pa, &a);
        let hb = geom::dist(pb, &b);
        let t = if ha + hb > 0.0 { ha / (ha + hb) } else { 0.0 };
        let x = geom::lerp(&a, &b, t);
        if support.iter().any(|&k| x[k] < -1e-12) {
            continue;
        }
        let value = geom::dist(&a, &b).hypot(ha + hb);
        if value < best.0 {
            best = (value, x);
        }
    }
    best
}

/// Intrinsic distance between points of two adjacent facets of the regular
/// simplex {x ≥ 0, Σx = 1} ⊂ R^{n+2}, for paths crossing their common ridge.
///
/// Facets are the sets {x_i = 0}. Unfolding facet B about the ridge turns
/// the shortest crossing path into a straight segment when it meets the ridge
/// inside the simplex; otherwise the minimum over the ridge is attained in the
/// relative interior of a lower face, so every face of the ridge is tried.
pub fn ridge_unfold_distance(n: usize, pa: &[f64], pb: &[f64]) -> Result<GeodesicResult, GeodesicError> {
    if n == 0 || n > 20 {
        return Err(GeodesicError::InvalidParameter(format!("dimension n must lie in 1..=20, got {n}")));
    }
    let dim = n + 2;
    for p in [pa, pb] {
        let sum: f64 = p.iter().sum();
        if p.len() != dim || (sum - 1.0).abs() > 1e-9 || p.iter().any(|&x| x < -1e-9) {
            return Err(GeodesicError::OffSurface(format!("{p:?}")));
        }
    }
    let zeros = |p: &[f64]| (0..dim).filter(|&k| p[k].abs() <= 1e-12).collect::<Vec<_>>();
    let (za, zb) = (zeros(pa), zeros(pb));
    if za.is_empty() || zb.is_empty() {
        return Err(GeodesicError::OffSurface("point is not on the simplex boundary".into()));
    }
    let mut best = GeodesicResult { distance: f64::INFINITY, path: Vec::new(), exact: true };
    if za.iter().any(|k| zb.contains(k)) {
        best = GeodesicResult { distance: geom::dist(pa, pb), path: vec![pa.to_vec(), pb.to_vec()], exact: true };
    }
    for &i in &za {
        for &j in &zb {
            if i == j {
                continue;
            }
            let ridge: Vec<usize> = (0..dim).filter(|&k| k != i && k != j).collect();
            let (d, x) = best_through_face(pa, pb, &ridge);
            if d < best.distance {
                best = GeodesicResult { distance: d, path: vec![pa.to_vec(), x, pb.to_vec()], exact: true };
            }
        }
    }
    if best.distance.is_infinite() {
        return Err(GeodesicError::NonAdjacentFacets);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_segments_approach_closed_form() {
        let coarse = two_segment_sampled_distortion(PI / 3.0, 50).unwrap();
        let fine = two_segment_sampled_distortion(PI / 3.0, 1000).unwrap();
        assert!(coarse <= 2.0 + 1e-12 && fine <= 2.0 + 1e-12);
        assert!(2.0 - fine < 1e-3 && 2.0 - fine <= 2.0 - coarse);
    }

    fn facet_midpoint(n: usize, zero: usize) -> Vec<f64> {
        (0..n + 2).map(|k| if k == zero { 0.0 } else { 1.0 / (n + 1) as f64 }).collect()
    }

    #[test]
    fn sphere_basics() {
        let d = sphere_distance(1.0, &[0.0, 0.0, 1.0], &[0.0, 0.0, -1.0]).unwrap();
        assert!((d.distance - PI).abs() < 1e-15);
        assert!((d.path_length() - PI).abs() < 1e-3);
        let d = sphere_distance(1.0, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(d.distance, 0.0);
        let d = sphere_distance(1.0, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert!((d.distance - PI / 2.0).abs() < 1e-15);
        assert!(sphere_distance(1.0, &[1.1, 0.0, 0.0], &[0.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn two_rays() {
        assert!((two_ray_distortion(PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((two_ray_distortion(PI / 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        for n in 1..=10 {
            let alpha = (1.0 / (n as f64 + 1.0)).acos();
            let expected = (2.0 + 2.0 / n as f64).sqrt();
            assert!((two_ray_distortion(alpha).unwrap() - expected).abs() < 1e-12);
        }
        assert!(two_ray_distortion(0.0).is_err());
        assert!(two_ray_distortion(4.0).is_err());
    }

    #[test]
    fn adjacent_facet_midpoints() {
        for n in [2usize, 5] {
            let p = facet_midpoint(n, 0);
            let q = facet_midpoint(n, 1);
            let d = ridge_unfold_distance(n, &p, &q).unwrap();
            let expected = 2.0 / ((n * (n + 1)) as f64).sqrt();
            assert!((d.distance - expected).abs() < 1e-12, "{n}");
            assert!((d.path_length() - d.distance).abs() < 1e-12);
            let ratio = d.distance / geom::dist(&p, &q);
            assert!((ratio - (2.0 + 2.0 / n as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn point_on_ridge() {
        let p = [0.0, 0.0, 0.5, 0.5];
        let d = ridge_unfold_distance(2, &p, &p).unwrap();
        assert!(d.distance.abs() < 1e-15);
    }

    #[test]
    fn matches_brute_force_over_ridge() {
        // ridge {x0 = x1 = 0} is the segment from e2 to e3
        let pa = [0.0, 0.05, 0.9, 0.05];
        let qb = [0.05, 0.0, 0.05, 0.9];
        let d = ridge_unfold_distance(2, &pa, &qb).unwrap();
        let brute = (0..=100_000)
            .map(|i| {
                let t = i as f64 / 100_000.0;
                let x = [0.0, 0.0, 1.0 - t, t];
                geom::dist(&pa, &x) + geom::dist(&x, &qb)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(d.distance <= brute + 1e-12);
        assert!(brute - d.distance < 1e-9);
        assert!(d.path[1].iter().all(|&x| x >= -1e-12));
    }

    #[test]
    fn crossing_clamped_to_ridge_vertex() {
        let pa = [0.0, 0.5, 0.5, 0.0];
        let qb = [0.5, 0.0, 0.5, 0.0];
        let d = ridge_unfold_distance(2, &pa, &qb).unwrap();
        // both points sit on the facet {x3 = 0} as well, so the straight chord is available
        assert!((d.distance - geom::dist(&pa, &qb)).abs() < 1e-15);
    }

    #[test]
    fn rejects_interior_points() {
        assert!(ridge_unfold_distance(2, &[0.25; 4], &facet_midpoint(2, 0)).is_err());
    }
}
