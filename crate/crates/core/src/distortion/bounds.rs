use std::f64::consts::PI;

use serde::Serialize;

use super::DistortionEstimate;

/// Lower bound for closed sets with bounded complement: π/(2√2).
pub const BOUNDED_COMPLEMENT_BOUND: f64 = PI / (2.0 * std::f64::consts::SQRT_2);
/// Lower bound for sets with a systole (and for centrally symmetric sets): π/2.
pub const SYSTOLE_BOUND: f64 = PI / 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: f64,
    pub value: f64,
    /// `value − bound`; negative margins within `mesh_tol` still pass.
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub checks: Vec<BoundCheck>,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, bound: f64, value: f64, mesh_tol: f64) -> BoundCheck {
    BoundCheck { name: name.into(), bound, value, margin: value - bound, passed: value >= bound - mesh_tol }
}

/// Compares an estimate with the lower bounds that apply to its surface.
///
/// `mesh_tol` is absolute: a bound counts as met when the estimate is at
/// least `bound − mesh_tol`.
pub fn verify_lower_bounds(
    estimate: &DistortionEstimate,
    has_bounded_complement: bool,
    genus: u32,
    mesh_tol: f64,
) -> LowerBoundReport {
    let mut checks = Vec::new();
    if has_bounded_complement {
        checks.push(check("bounded complement", BOUNDED_COMPLEMENT_BOUND, estimate.value, mesh_tol));
    }
    if genus >= 1 {
        checks.push(check("systole", SYSTOLE_BOUND, estimate.value, mesh_tol));
    }
    LowerBoundReport { checks }
}
