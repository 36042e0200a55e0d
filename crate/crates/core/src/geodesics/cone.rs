//! Exact distances on the closed cone S(r): the lateral surface of slant
//! length 1 with apex at the origin, capped by the disc of radius r at height
//! √(1−r²).

use std::f64::consts::PI;

use super::{GeodesicError, GeodesicResult};
use crate::geom;

const SURFACE_TOL: f64 = 1e-9;
const SEEDS: usize = 64;
const MIN_TOL: f64 = 1e-10;
const LATERAL_SAMPLES: usize = 128;

fn check_r(r: f64) -> Result<(), GeodesicError> {
    if r.is_finite() && r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(GeodesicError::InvalidParameter(format!("cone parameter r must lie in (0, 1), got {r}")))
    }
}

fn wrap_angle(d: f64) -> f64 {
    let d = (d + PI).rem_euclid(2.0 * PI) - PI;
    if d == -PI {
        PI
    } else {
        d
    }
}

fn lateral_point(r: f64, s: f64, theta: f64) -> Vec<f64> {
    let h = (1.0 - r * r).sqrt();
    vec![s * r * theta.cos(), s * r * theta.sin(), s * h]
}

fn lateral_len(r: f64, s1: f64, t1: f64, s2: f64, t2: f64) -> f64 {
    let phi = r * wrap_angle(t2 - t1).abs();
    if phi <= PI {
        (s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * phi.cos()).max(0.0).sqrt()
    } else {
        s1 + s2
    }
}

fn lateral_path(r: f64, s1: f64, t1: f64, s2: f64, t2: f64) -> Vec<Vec<f64>> {
    let d = wrap_angle(t2 - t1);
    let phi = r * d.abs();
    if phi > PI {
        return vec![lateral_point(r, s1, t1), vec![0.0; 3], lateral_point(r, s2, t2)];
    }
    if s1 == 0.0 || s2 == 0.0 || d == 0.0 {
        return vec![lateral_point(r, s1, t1), lateral_point(r, s2, t2)];
    }
    // straight segment in the unrolled sector, mapped back onto the cone
    let sign = d.signum();
    let a = [s1, 0.0];
    let b = [s2 * phi.cos(), s2 * phi.sin()];
    (0..=LATERAL_SAMPLES)
        .map(|i| {
            let t = i as f64 / LATERAL_SAMPLES as f64;
            let x = a[0] + t * (b[0] - a[0]);
            let y = a[1] + t * (b[1] - a[1]);
            let rho = x.hypot(y);
            let psi = y.atan2(x);
            lateral_point(r, rho, t1 + sign * psi / r)
        })
        .collect()
}

/// Distance between two points of the lateral cone, given by slant distance
/// from the apex and angular position.
///
/// The lateral surface unrolls to a planar sector of angle 2πr; the shortest
/// path is the chord when the unrolled angle between the points is at most π
/// and otherwise runs through the apex.
pub fn cone_lateral_distance(
    r: f64,
    s1: f64,
    theta1: f64,
    s2: f64,
    theta2: f64,
) -> Result<GeodesicResult, GeodesicError> {
    check_r(r)?;
    for s in [s1, s2] {
        if !(s.is_finite() && (0.0..=1.0 + SURFACE_TOL).contains(&s)) {
            return Err(GeodesicError::InvalidParameter(format!("slant distance must lie in (0, 1], got {s}")));
        }
    }
    if !(theta1.is_finite() && theta2.is_finite()) {
        return Err(GeodesicError::InvalidParameter("angles must be finite".into()));
    }
    Ok(GeodesicResult {
        distance: lateral_len(r, s1, theta1, s2, theta2),
        path: lateral_path(r, s1, theta1, s2, theta2),
        exact: true,
    })
}

#[derive(Debug, Clone, Copy)]
struct Site {
    lateral: Option<(f64, f64)>,
    disc: Option<[f64; 2]>,
}

fn classify(r: f64, p: &[f64]) -> Result<Site, GeodesicError> {
    if p.len() != 3 || p.iter().any(|x| !x.is_finite()) {
        return Err(GeodesicError::OffSurface(format!("{p:?}")));
    }
    let h = (1.0 - r * r).sqrt();
    let rho = p[0].hypot(p[1]);
    let disc = ((p[2] - h).abs() <= SURFACE_TOL && rho <= r + SURFACE_TOL).then_some([p[0], p[1]]);
    let s = geom::norm(p);
    let lateral = (s <= 1.0 + SURFACE_TOL && (rho - r * s).abs() <= SURFACE_TOL && (p[2] - h * s).abs() <= SURFACE_TOL)
        .then(|| (s.min(1.0), p[1].atan2(p[0])));
    if disc.is_none() && lateral.is_none() {
        return Err(GeodesicError::OffSurface(format!("{p:?}")));
    }
    Ok(Site { lateral, disc })
}

fn golden<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

fn seed_angle(i: usize) -> f64 {
    2.0 * PI * i as f64 / SEEDS as f64
}

/// Minimises a 2π-periodic function: grid of seeds, then golden section in
/// the bracket around each of the best few grid minima.
fn minimize_periodic<F: Fn(f64) -> f64>(f: F) -> (f64, f64) {
    let vals: Vec<f64> = (0..SEEDS).map(|i| f(seed_angle(i))).collect();
    let mut order: Vec<usize> = (0..SEEDS)
        .filter(|&i| vals[i] <= vals[(i + SEEDS - 1) % SEEDS] && vals[i] <= vals[(i + 1) % SEEDS])
        .collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let step = 2.0 * PI / SEEDS as f64;
    let mut best = (seed_angle(order[0]), vals[order[0]]);
    for &i in order.iter().take(4) {
        let x = seed_angle(i);
        let cand = golden(&f, x - step, x + step, MIN_TOL);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

fn minimize_periodic_2d<F: Fn(f64, f64) -> f64>(f: F) -> ((f64, f64), f64) {
    let mut grid = vec![0.0; SEEDS * SEEDS];
    for i in 0..SEEDS {
        for j in 0..SEEDS {
            grid[i * SEEDS + j] = f(seed_angle(i), seed_angle(j));
        }
    }
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].total_cmp(&grid[b]));
    let step = 2.0 * PI / SEEDS as f64;
    let mut best = ((seed_angle(order[0] / SEEDS), seed_angle(order[0] % SEEDS)), grid[order[0]]);
    for &cell in order.iter().take(4) {
        let (mut x, mut y) = (seed_angle(cell / SEEDS), seed_angle(cell % SEEDS));
        let mut fxy = grid[cell];
        let mut width = step;
        for _ in 0..200 {
            let (nx, _) = golden(&|t| f(t, y), x - width, x + width, MIN_TOL);
            let (ny, fv) = golden(&|t| f(nx, t), y - width, y + width, MIN_TOL);
            let moved = (nx - x).abs().max((ny - y).abs());
            let gain = fxy - fv;
            if fv <= fxy {
                x = nx;
                y = ny;
                fxy = fv;
            }
            if gain.abs() < 1e-15 && moved < MIN_TOL {
                break;
            }
            width = (2.0 * moved).clamp(10.0 * MIN_TOL, step);
        }
        if fxy < best.1 {
            best = ((x, y), fxy);
        }
    }
    best
}

fn rim(r: f64, phi: f64) -> [f64; 2] {
    [r * phi.cos(), r * phi.sin()]
}

fn disc_len(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Distance between two points of the closed cone S(r).
///
/// Takes the minimum over paths staying on the lateral surface, staying in
/// the disc, crossing the rim once, and crossing it twice (with a disc chord
/// in between); paths with more crossings are never shorter because a disc
/// chord can replace any excursion.
pub fn cone_surface_distance(r: f64, pa: &[f64], pb: &[f64]) -> Result<GeodesicResult, GeodesicError> {
    check_r(r)?;
    let a = classify(r, pa)?;
    let b = classify(r, pb)?;
    let h = (1.0 - r * r).sqrt();
    let on_disc = |q: [f64; 2]| vec![q[0], q[1], h];
    let mut best = GeodesicResult { distance: f64::INFINITY, path: Vec::new(), exact: true };
    let mut offer = |distance: f64, path: Vec<Vec<f64>>| {
        if distance < best.distance {
            best = GeodesicResult { distance, path, exact: true };
        }
    };

    if let (Some((s1, t1)), Some((s2, t2))) = (a.lateral, b.lateral) {
        offer(lateral_len(r, s1, t1, s2, t2), lateral_path(r, s1, t1, s2, t2));
        let ((p1, p2), d) = minimize_periodic_2d(|p1, p2| {
            lateral_len(r, s1, t1, 1.0, p1) + disc_len(rim(r, p1), rim(r, p2)) + lateral_len(r, 1.0, p2, s2, t2)
        });
        let mut path = lateral_path(r, s1, t1, 1.0, p1);
        path.extend(lateral_path(r, 1.0, p2, s2, t2));
        offer(d, path);
    }
    if let (Some(da), Some(db)) = (a.disc, b.disc) {
        offer(disc_len(da, db), vec![on_disc(da), on_disc(db)]);
    }
    if let (Some((s1, t1)), Some(db)) = (a.lateral, b.disc) {
        let (p, d) = minimize_periodic(|p| lateral_len(r, s1, t1, 1.0, p) + disc_len(rim(r, p), db));
        let mut path = lateral_path(r, s1, t1, 1.0, p);
        path.push(on_disc(db));
        offer(d, path);
    }
    if let (Some(da), Some((s2, t2))) = (a.disc, b.lateral) {
        let (p, d) = minimize_periodic(|p| disc_len(da, rim(r, p)) + lateral_len(r, 1.0, p, s2, t2));
        let mut path = vec![on_disc(da)];
        path.extend(lateral_path(r, 1.0, p, s2, t2));
        offer(d, path);
    }
    if let Some(first) = best.path.first_mut() {
        *first = pa.to_vec();
    }
    if let Some(last) = best.path.last_mut() {
        *last = pb.to_vec();
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_point_pair_matches_closed_form() {
        for r in [0.1, 0.169, 0.4] {
            let v = 0.7;
            let d = cone_lateral_distance(r, v, 0.3, v, 0.3 + PI).unwrap();
            assert!((d.distance - 2.0 * (r * PI / 2.0).sin() * v).abs() < 1e-14);
        }
    }

    #[test]
    fn same_generator() {
        let d = cone_lateral_distance(0.3, 0.2, 1.0, 0.7, 1.0).unwrap();
        assert!((d.distance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wide_cone_uses_chord() {
        let d = cone_lateral_distance(0.9, 1.0, 0.0, 1.0, PI).unwrap();
        assert!((d.distance - 1.9753766811902755).abs() < 1e-12);
    }

    #[test]
    fn range_violations() {
        assert!(cone_lateral_distance(0.0, 0.5, 0.0, 0.5, 1.0).is_err());
        assert!(cone_lateral_distance(1.0, 0.5, 0.0, 0.5, 1.0).is_err());
        assert!(cone_lateral_distance(0.5, 1.5, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn rim_to_disc_center_gives_two_r_for_mid_slant_point() {
        for r in [0.05, 0.169, 0.3] {
            let v = lateral_point(r, 1.0 - r, 0.4);
            let w = [0.0, 0.0, (1.0 - r * r).sqrt()];
            let d = cone_surface_distance(r, &v, &w).unwrap();
            assert!((d.distance - 2.0 * r).abs() < 1e-9, "{r}: {}", d.distance);
            let ratio = d.distance / geom::dist(&v, &w);
            assert!((ratio - 2f64.sqrt() / (1.0 - r).sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn disc_points_are_straight() {
        let h = (1.0 - 0.09f64).sqrt();
        let p = [0.1, 0.05, h];
        let q = [-0.2, 0.1, h];
        let d = cone_surface_distance(0.3, &p, &q).unwrap();
        assert!((d.distance - geom::dist(&p, &q)).abs() < 1e-15);
    }

    #[test]
    fn antipodal_rim_points_on_narrow_cone_cross_the_disc() {
        let r = 0.3;
        let p = lateral_point(r, 1.0, 0.0);
        let q = lateral_point(r, 1.0, PI);
        let d = cone_surface_distance(r, &p, &q).unwrap();
        // the disc diameter 2r beats the lateral chord 2 sin(0.15π)
        assert!((d.distance - 2.0 * r).abs() < 1e-9);
        assert!(2.0 * r < 2.0 * (0.15 * PI).sin());
    }

    #[test]
    fn off_surface_rejected() {
        assert!(matches!(
            cone_surface_distance(0.3, &[0.5, 0.5, 0.5], &[0.0, 0.0, 0.0]),
            Err(GeodesicError::OffSurface(_))
        ));
    }

    #[test]
    fn sampled_path_tracks_distance() {
        let r = 0.25;
        let p = lateral_point(r, 0.9, 0.1);
        let q = lateral_point(r, 0.6, 2.0);
        let d = cone_surface_distance(r, &p, &q).unwrap();
        let len = d.path_length();
        assert!(len <= d.distance + 1e-12);
        assert!(d.distance - len < 1e-4);
        assert_eq!(d.path.first().unwrap(), &p);
        assert_eq!(d.path.last().unwrap(), &q);
    }
}
