use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{torus_mesh, HarnessError, Plot};
use crate::distortion::{
    cone_disc_branch, cone_distortion_analytic, cone_lateral_branch, estimate_distortion, find_r0,
    simplex_distortion_analytic,
};
use crate::surfaces::{cone_resolution_for_h, mesh_cone};

/// One sweep point. `estimate` is absent for analytic-only sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub estimate: Option<f64>,
    pub analytic: f64,
    pub rel_err: Option<f64>,
}

impl SweepRow {
    fn new(param: f64, estimate: Option<f64>, analytic: f64) -> Self {
        Self { param, estimate, analytic, rel_err: estimate.map(|e| (e - analytic) / analytic) }
    }
}

fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..steps).map(|i| a + (b - a) * i as f64 / (steps - 1) as f64).collect(),
    }
}

/// Longest edge used at cone parameter `r`: `h`, capped at r/4 so that thin
/// cones keep enough segments around the rim.
pub fn cone_sweep_h(r: f64, h: f64) -> f64 {
    h.min(r / 4.0)
}

/// Mesh estimates against the closed form for `steps` cone parameters from
/// `lo` to `hi`. Points run concurrently and are returned in order.
pub fn cone_sweep(lo: f64, hi: f64, steps: usize, h: f64, k: usize, budget: usize) -> Result<Vec<SweepRow>, HarnessError> {
    linspace(lo, hi, steps)
        .par_iter()
        .map(|&r| {
            let analytic = cone_distortion_analytic(r)?;
            let mesh = mesh_cone(r, cone_resolution_for_h(r, cone_sweep_h(r, h))?)?;
            let est = estimate_distortion(&mesh, k, budget)?;
            Ok(SweepRow::new(r, Some(est.value), analytic))
        })
        .collect()
}

/// Torus estimates against π/2 for `steps` tube radii from `from` to `to`.
pub fn torus_sweep(from: f64, to: f64, steps: usize, res_v: usize, k: usize, budget: usize) -> Result<Vec<SweepRow>, HarnessError> {
    linspace(from, to, steps)
        .par_iter()
        .map(|&eps| {
            let est = estimate_distortion(&torus_mesh(eps, res_v)?, k, budget)?;
            Ok(SweepRow::new(eps, Some(est.value), FRAC_PI_2))
        })
        .collect()
}

/// Closed-form simplex-boundary distortions for n in `lo..=hi`.
pub fn simplex_sweep(lo: usize, hi: usize) -> Result<Vec<SweepRow>, HarnessError> {
    (lo..=hi).map(|n| Ok(SweepRow::new(n as f64, None, simplex_distortion_analytic(n)?))).collect()
}

/// Least-squares C in |estimate − π/2| ≈ C·param over rows with estimates.
pub fn fit_linear_coefficient(rows: &[SweepRow]) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for row in rows {
        if let Some(e) = row.estimate {
            num += row.param * (e - FRAC_PI_2).abs();
            den += row.param * row.param;
        }
    }
    (den > 0.0).then(|| num / den)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let cell = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    let mut s = String::from("param,estimate,analytic,rel_err\n");
    for row in rows {
        let _ = writeln!(s, "{},{},{},{}", row.param, cell(row.estimate), row.analytic, cell(row.rel_err));
    }
    s
}

fn estimates(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    rows.iter().filter_map(|r| r.estimate.map(|e| (r.param, e))).collect()
}

pub fn cone_sweep_svg(rows: &[SweepRow]) -> String {
    let lo = rows.iter().map(|r| r.param).fold(f64::INFINITY, f64::min).clamp(1e-3, 0.01);
    let hi = rows.iter().map(|r| r.param).fold(0.0, f64::max).clamp(0.5, 0.99);
    let grid = linspace(lo, hi, 200);
    let mut plot = Plot::new("Closed cone: distortion against r", "r", "distortion")
        .line("lateral branch", "#1f77b4", grid.iter().map(|&r| (r, cone_lateral_branch(r))).collect())
        .line("disc branch", "#d62728", grid.iter().map(|&r| (r, cone_disc_branch(r))).collect())
        .markers("mesh estimate", "black", estimates(rows))
        .hline(FRAC_PI_2, "π/2");
    if let Ok(root) = find_r0(1e-12) {
        plot = plot.vline(root.r0, &format!("r₀ = {:.4}", root.r0));
    }
    plot.render()
}

pub fn torus_sweep_svg(rows: &[SweepRow]) -> String {
    let mut plot = Plot::new("Tube torus: distortion against ε", "ε", "distortion")
        .markers("mesh estimate", "black", estimates(rows))
        .hline(FRAC_PI_2, "π/2");
    if let Some(c) = fit_linear_coefficient(rows) {
        let hi = rows.iter().map(|r| r.param).fold(0.0, f64::max);
        let grid = linspace(0.0, hi, 50);
        plot = plot.line(&format!("π/2 + {c:.3}ε"), "#2ca02c", grid.iter().map(|&e| (e, FRAC_PI_2 + c * e)).collect());
    }
    plot.render()
}

pub fn simplex_sweep_svg(rows: &[SweepRow]) -> String {
    Plot::new("Simplex boundary: distortion against n", "n", "distortion")
        .markers("√(2 + 2/n)", "#9467bd", rows.iter().map(|r| (r.param, r.analytic)).collect())
        .hline(FRAC_PI_2, "π/2")
        .render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_rows_cross_below_half_pi_at_five() {
        let rows = simplex_sweep(1, 10).unwrap();
        let first = rows.iter().find(|r| r.analytic < FRAC_PI_2).unwrap();
        assert_eq!(first.param, 5.0);
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("param,estimate,analytic,rel_err\n"));
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.lines().nth(1).unwrap().starts_with("1,,2,"));
        assert!(simplex_sweep_svg(&rows).contains("<circle"));
    }

    #[test]
    fn fit_recovers_slope() {
        let rows: Vec<SweepRow> =
            [0.1, 0.2, 0.4].iter().map(|&e| SweepRow::new(e, Some(FRAC_PI_2 + 0.5 * e), FRAC_PI_2)).collect();
        assert!((fit_linear_coefficient(&rows).unwrap() - 0.5).abs() < 1e-12);
        assert!(fit_linear_coefficient(&[]).is_none());
    }

    #[test]
    fn small_cone_sweep() {
        let rows = cone_sweep(0.3, 0.5, 2, 0.08, 2, 0).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.rel_err.unwrap().abs() < 0.05, "{r:?}");
        }
        let svg = cone_sweep_svg(&rows);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("r₀"));
    }
}
