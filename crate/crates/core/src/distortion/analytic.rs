use std::f64::consts::PI;

use serde::Serialize;

use super::DistortionError;
use crate::geom;

fn check_cone(r: f64) -> Result<(), DistortionError> {
    if r.is_finite() && r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(DistortionError::InvalidParameter(format!("cone parameter r must lie in (0, 1), got {r}")))
    }
}

/// Ratio for antipodal points at equal slant on the lateral surface.
pub fn cone_lateral_branch(r: f64) -> f64 {
    (PI * r / 2.0).sin() / r
}

/// Ratio for a lateral point at slant 1−r against the disc centre.
pub fn cone_disc_branch(r: f64) -> f64 {
    2f64.sqrt() / (1.0 - r).sqrt()
}

/// Distortion of the closed cone S(r): the larger of the two branch ratios.
pub fn cone_distortion_analytic(r: f64) -> Result<f64, DistortionError> {
    check_cone(r)?;
    Ok(cone_lateral_branch(r).max(cone_disc_branch(r)))
}

/// The value of r below which the disc branch stays under π/2.
pub fn cone_threshold() -> f64 {
    (PI * PI - 8.0) / (PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub r0: f64,
    pub delta0: f64,
    pub bracket_width: f64,
}

/// The r at which the two cone branches agree, by bisection on [0.01, 0.5].
///
/// The lateral branch decreases and the disc branch increases in r, so the
/// crossing is unique and is the minimiser of the cone distortion.
pub fn find_r0(tol: f64) -> Result<RootResult, DistortionError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(DistortionError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let g = |r: f64| cone_lateral_branch(r) - cone_disc_branch(r);
    let (mut lo, mut hi) = (0.01, 0.5);
    let (glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() {
        return Err(DistortionError::NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if gm.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r0 = 0.5 * (lo + hi);
    Ok(RootResult { r0, delta0: cone_distortion_analytic(r0)?, bracket_width: hi - lo })
}

/// √(2 + 2/n), the distortion of the boundary of the regular (n+1)-simplex.
pub fn simplex_distortion_analytic(n: usize) -> Result<f64, DistortionError> {
    if n == 0 {
        return Err(DistortionError::InvalidParameter("simplex dimension n must be at least 1".into()));
    }
    Ok((2.0 + 2.0 / n as f64).sqrt())
}

/// Facet midpoints p, q of two adjacent facets and the midpoint r of their
/// common ridge, for the simplex {x ≥ 0, Σx = 1} ⊂ R^{n+2}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexWitnesses {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub r: Vec<f64>,
    /// 2|p − r|, the length of the path through the ridge midpoint.
    pub d_intrinsic: f64,
    pub d_euclid: f64,
}

impl SimplexWitnesses {
    pub fn ratio(&self) -> f64 {
        self.d_intrinsic / self.d_euclid
    }
}

pub fn simplex_witnesses(n: usize) -> Result<SimplexWitnesses, DistortionError> {
    simplex_distortion_analytic(n)?;
    let dim = n + 2;
    let p: Vec<f64> = (0..dim).map(|k| if k == 0 { 0.0 } else { 1.0 / (n + 1) as f64 }).collect();
    let q: Vec<f64> = (0..dim).map(|k| if k == 1 { 0.0 } else { 1.0 / (n + 1) as f64 }).collect();
    let r: Vec<f64> = (0..dim).map(|k| if k < 2 { 0.0 } else { 1.0 / n as f64 }).collect();
    let pr = geom::dist(&p, &r);
    let pq = geom::dist(&p, &q);
    let nf = n as f64;
    assert!((pr - 1.0 / (nf * (nf + 1.0)).sqrt()).abs() < 1e-12);
    assert!((pq - 2f64.sqrt() / (nf + 1.0)).abs() < 1e-12);
    Ok(SimplexWitnesses { p, q, r, d_intrinsic: 2.0 * pr, d_euclid: pq })
}

/// Angle at the ridge midpoint between the directions to the two facet
/// midpoints: arccos(1/(n+1)).
pub fn dihedral_angle(n: usize) -> Result<f64, DistortionError> {
    simplex_distortion_analytic(n)?;
    Ok((1.0 / (n as f64 + 1.0)).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::two_ray_distortion;

    #[test]
    fn branch_limits_and_samples() {
        assert!((cone_distortion_analytic(1e-7).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((cone_distortion_analytic(0.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(cone_distortion_analytic(0.0).is_err());
        assert!(cone_distortion_analytic(1.0).is_err());
    }

    #[test]
    fn threshold_is_disc_branch_crossing() {
        let t = cone_threshold();
        assert!((cone_disc_branch(t) - PI / 2.0).abs() < 1e-12);
        assert!(cone_distortion_analytic(t - 1e-3).unwrap() < PI / 2.0);
        assert!(cone_distortion_analytic(t + 1e-3).unwrap() > PI / 2.0);
    }

    #[test]
    fn root_bracket_and_width() {
        let g = |r: f64| cone_lateral_branch(r) - cone_disc_branch(r);
        assert!(g(0.01) > 0.0 && g(0.5) < 0.0);
        let root = find_r0(1e-6).unwrap();
        assert!(root.bracket_width <= 1e-6);
        assert!((cone_lateral_branch(root.r0) - cone_disc_branch(root.r0)).abs() < 1e-5);
        assert!(find_r0(0.0).is_err());
    }

    #[test]
    fn simplex_identities() {
        for n in 1..=10 {
            let w = simplex_witnesses(n).unwrap();
            let exact = simplex_distortion_analytic(n).unwrap();
            assert!((w.ratio() - exact).abs() < 1e-12);
            let alpha = dihedral_angle(n).unwrap();
            assert!((two_ray_distortion(alpha).unwrap() - exact).abs() < 1e-12);
        }
        assert!((dihedral_angle(1).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(simplex_witnesses(0).is_err());
    }
}
