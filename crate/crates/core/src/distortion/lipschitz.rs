use std::f64::consts::PI;

use serde::Serialize;

use super::DistortionError;
use crate::geom;

/// Central projection from (1, 0, 0) onto the plane x = 0:
/// (x, y, z) ↦ (0, y/(1−x), z/(1−x)).
pub fn radial_projection(p: [f64; 3]) -> Result<[f64; 3], DistortionError> {
    let [x, y, z] = p;
    if !(x < 1.0) {
        return Err(DistortionError::InvalidParameter(format!("projection needs x < 1, got {x}")));
    }
    let s = 1.0 / (1.0 - x);
    Ok([0.0, y * s, z * s])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub r: f64,
    pub bound: f64,
    pub observed_max: f64,
    pub pairs: usize,
    pub skipped: usize,
    pub passed: bool,
}

fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut out = 0.0;
    while index > 0 {
        f /= base as f64;
        out += f * (index % base) as f64;
        index /= base;
    }
    out
}

const BASES: [u64; 7] = [2, 3, 5, 7, 11, 13, 17];

/// Point of Z = [0, πr] × B²(0, r) from three unit-interval coordinates.
fn cylinder_point(r: f64, a: f64, b: f64, c: f64) -> [f64; 3] {
    let rho = r * b.sqrt();
    let phi = 2.0 * PI * c;
    [PI * r * a, rho * phi.cos(), rho * phi.sin()]
}

/// Largest observed |P(q) − P(q′)| / |q − q′| over `samples` quasi-random
/// pairs in Z, against the bound 1 + 6πr.
///
/// Even-numbered pairs are independent points of Z; odd-numbered pairs are
/// short displacements (relative size down to 1e−6) so that the local
/// stretching of P is probed as well. `seed` offsets the Halton sequence.
pub fn lipschitz_check(r: f64, samples: usize, seed: u64) -> Result<LipschitzReport, DistortionError> {
    if !(r.is_finite() && r > 0.0) || 6.0 * PI * r > 1.0 + 1e-12 {
        return Err(DistortionError::InvalidParameter(format!("need 0 < r and 6πr ≤ 1, got r = {r}")));
    }
    if samples < 10_000 {
        return Err(DistortionError::InvalidParameter(format!("at least 10⁴ samples are required, got {samples}")));
    }
    let bound = 1.0 + 6.0 * PI * r;
    let mut observed: f64 = 0.0;
    let mut skipped = 0;
    let start = seed.wrapping_mul(1_000_003).wrapping_add(1);
    for i in 0..samples as u64 {
        let h = |d: usize| halton(start + i, BASES[d]);
        let q = cylinder_point(r, h(0), h(1), h(2));
        let q2 = if i % 2 == 0 {
            cylinder_point(r, h(3), h(4), h(5))
        } else {
            let len = r * 10f64.powf(-6.0 * h(6));
            let (theta, phi) = (PI * h(3), 2.0 * PI * h(4));
            let d = [theta.cos(), theta.sin() * phi.cos(), theta.sin() * phi.sin()];
            let cand = [q[0] + len * d[0], q[1] + len * d[1], q[2] + len * d[2]];
            if cand[0] < 0.0 || cand[0] > PI * r || cand[1].hypot(cand[2]) > r {
                [q[0] - len * d[0], q[1] - len * d[1], q[2] - len * d[2]]
            } else {
                cand
            }
        };
        let inside = q2[0] >= 0.0 && q2[0] <= PI * r && q2[1].hypot(q2[2]) <= r;
        let e = geom::dist(&q, &q2);
        if !inside || e <= 0.0 {
            skipped += 1;
            continue;
        }
        let ratio = geom::dist(&radial_projection(q)?, &radial_projection(q2)?) / e;
        observed = observed.max(ratio);
    }
    Ok(LipschitzReport { r, bound, observed_max: observed, pairs: samples, skipped, passed: observed <= bound })
}
