use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::Serialize;

use super::{default_mesh, fit_linear_coefficient, torus_mesh, HarnessError, RunConfig, SweepRow, SCHEMA_VERSION};
use crate::distortion::{
    cone_distortion_analytic, cone_threshold, dihedral_angle, eccentricity, estimate_distortion, find_r0,
    lipschitz_check, simplex_distortion_analytic, simplex_witnesses, systole_pair_checks, systole_torus,
    verify_lower_bounds, DistortionEstimate, BOUNDED_COMPLEMENT_BOUND, SYSTOLE_BOUND,
};
use crate::geodesics::{two_ray_distortion, two_segment_sampled_distortion};
use crate::geom;
use crate::surfaces::{cone_resolution_for_h, mesh_cone, mesh_ellipsoid, mesh_sphere, mesh_torus, SurfaceSpec, TriMesh};

/// Criterion numbers and names, in run order.
pub const CRITERIA: [(u32, &str); 12] = [
    (1, "cone minimiser"),
    (2, "cone analytic/mesh agreement"),
    (3, "threshold"),
    (4, "simplex"),
    (5, "two-ray consistency"),
    (6, "sphere baseline"),
    (7, "torus limit"),
    (8, "systole"),
    (9, "Lipschitz lemma"),
    (10, "lower-bound suite"),
    (11, "eccentricity"),
    (12, "open-question probe"),
];

/// Criteria whose stated tolerance cannot be met by the exact quantity they
/// test; they are run unchanged and reported as failures.
pub const KNOWN_DEFECTS: &[u32] = &[1];

const INFORMATIONAL: &[u32] = &[12];

const CONE_VALUES: [f64; 5] = [0.05, 0.10, 0.169, 0.25, 0.40];
const TORUS_EPS: [f64; 3] = [0.3, 0.15, 0.075];
const PROLATE: [f64; 2] = [2.0, 5.0];
/// Relative margin by which the r = 0.15 and r = 0.25 estimates must clear π/2.
const THRESHOLD_MARGIN: f64 = 2.5e-3;
const SYSTOLE_EPS: f64 = 0.1;
const SYSTOLE_RES: (usize, usize) = (128, 16);

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    pub cone_h: f64,
    pub torus_res_v: usize,
    pub sphere_subdivisions: usize,
    pub simplex_subdivisions: usize,
    pub lipschitz_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            k: 3,
            budget: 1,
            seed: 0,
            cone_h: super::CONE_H,
            torus_res_v: super::TORUS_RES_V,
            sphere_subdivisions: super::SPHERE_SUBDIVISIONS,
            simplex_subdivisions: super::SIMPLEX_SUBDIVISIONS,
            lipschitz_samples: 100_000,
        }
    }
}

impl VerifyConfig {
    pub fn from_run(cfg: &RunConfig) -> Self {
        Self { k: cfg.k, budget: cfg.budget, seed: cfg.seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    /// Informational criteria record a value and never fail the suite.
    pub gating: bool,
    pub passed: bool,
    pub known_defect: bool,
    pub summary: String,
    pub details: Vec<String>,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// One-line status such as `PASS  3 threshold: ...`.
    pub fn line(&self) -> String {
        let status = match (self.gating, self.passed) {
            (false, _) => "INFO",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        let note = if self.known_defect && !self.passed { " [known defect]" } else { "" };
        format!("{status} {:>2} {}{note}: {} ({:.1} s)", self.id, self.name, self.summary, self.seconds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
    pub total_seconds: f64,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

struct Cached {
    label: String,
    genus: u32,
    estimate: DistortionEstimate,
    mesh_h_max: f64,
    seconds: f64,
}

struct Check {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

/// Runs acceptance criteria, sharing mesh estimates between them.
pub struct Verifier {
    cfg: VerifyConfig,
    cache: Mutex<BTreeMap<String, Arc<Cached>>>,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b) / b
}

impl Verifier {
    pub fn new(cfg: VerifyConfig) -> Self {
        Self { cfg, cache: Mutex::new(BTreeMap::new()) }
    }

    fn estimate(&self, key: String, genus: u32, mesh: impl FnOnce() -> Result<TriMesh, HarnessError>) -> Result<Arc<Cached>, HarnessError> {
        if let Some(c) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let t = Instant::now();
        let mesh = mesh()?;
        let estimate = estimate_distortion(&mesh, self.cfg.k, self.cfg.budget)?;
        let entry = Arc::new(Cached { label: key.clone(), genus, estimate, mesh_h_max: mesh.h_max(), seconds: t.elapsed().as_secs_f64() });
        self.cache.lock().expect("cache lock").insert(key, entry.clone());
        Ok(entry)
    }

    fn cone(&self, r: f64) -> Result<Arc<Cached>, HarnessError> {
        let h = self.cfg.cone_h;
        self.estimate(format!("cone r={r}"), 0, || Ok(mesh_cone(r, cone_resolution_for_h(r, h)?)?))
    }

    fn sphere(&self) -> Result<Arc<Cached>, HarnessError> {
        let s = self.cfg.sphere_subdivisions;
        self.estimate("sphere".into(), 0, || Ok(mesh_sphere(1.0, s)?))
    }

    fn ellipsoid(&self, a: f64) -> Result<Arc<Cached>, HarnessError> {
        let s = self.cfg.sphere_subdivisions;
        self.estimate(format!("ellipsoid a={a}"), 0, || Ok(mesh_ellipsoid(a, 1.0, 1.0, s)?))
    }

    fn torus(&self, eps: f64) -> Result<Arc<Cached>, HarnessError> {
        let res_v = self.cfg.torus_res_v;
        self.estimate(format!("torus eps={eps}"), 1, || Ok(torus_mesh(eps, res_v)?))
    }

    fn simplex(&self) -> Result<Arc<Cached>, HarnessError> {
        let s = self.cfg.simplex_subdivisions;
        self.estimate("simplex n=2".into(), 0, || Ok(default_mesh(&SurfaceSpec::SimplexBoundary { n: 2 }, Some(s))?))
    }

    /// Runs one criterion; errors become failed outcomes.
    pub fn criterion(&self, id: u32) -> CriterionOutcome {
        let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
        let t = Instant::now();
        let result = match id {
            1 => self.c1(),
            2 => self.c2(),
            3 => self.c3(),
            4 => self.c4(),
            5 => self.c5(),
            6 => self.c6(),
            7 => self.c7(),
            8 => self.c8(),
            9 => self.c9(),
            10 => self.c10(),
            11 => self.c11(),
            12 => self.c12(),
            _ => Err(HarnessError::Config(format!("no criterion {id}"))),
        };
        let check = result.unwrap_or_else(|e| Check { passed: false, summary: format!("error: {e}"), details: Vec::new() });
        CriterionOutcome {
            id,
            name: name.into(),
            gating: !INFORMATIONAL.contains(&id),
            passed: check.passed,
            known_defect: KNOWN_DEFECTS.contains(&id),
            summary: check.summary,
            details: check.details,
            seconds: t.elapsed().as_secs_f64(),
        }
    }

    /// Runs the given criteria in order and assembles the report.
    pub fn run(&self, ids: &[u32], mut on_done: impl FnMut(&CriterionOutcome)) -> VerifyReport {
        let t = Instant::now();
        let criteria: Vec<CriterionOutcome> = ids
            .iter()
            .map(|&id| {
                let out = self.criterion(id);
                on_done(&out);
                out
            })
            .collect();
        VerifyReport {
            schema: SCHEMA_VERSION,
            passed: criteria.iter().all(|c| c.passed || !c.gating),
            criteria,
            total_seconds: t.elapsed().as_secs_f64(),
        }
    }

    fn c1(&self) -> Result<Check, HarnessError> {
        let t = Instant::now();
        let root = find_r0(1e-6)?;
        let secs = t.elapsed().as_secs_f64();
        let (dr, dd) = ((root.r0 - 0.169).abs(), (root.delta0 - 1.552).abs());
        let passed = dr <= 5e-4 && dd <= 5e-4 && secs < 1.0;
        let truncated = (root.r0 * 1e3).floor() / 1e3;
        Ok(Check {
            passed,
            summary: format!("r0 = {:.7} (|Δ| = {dr:.1e}), delta0 = {:.7} (|Δ| = {dd:.1e}), limit 5e-4", root.r0, root.delta0),
            details: vec![
                format!("bracket width {:.1e}, runtime {secs:.2e} s", root.bracket_width),
                format!("r0 truncated to three decimals: {truncated:.3}; delta0 rounded: {:.3}", root.delta0),
            ],
        })
    }

    fn c2(&self) -> Result<Check, HarnessError> {
        let mut passed = true;
        let mut details = Vec::new();
        let mut worst: f64 = 0.0;
        for r in CONE_VALUES {
            let c = self.cone(r)?;
            let analytic = cone_distortion_analytic(r)?;
            let err = rel(c.estimate.value, analytic);
            let ok = err.abs() <= 0.02 && c.mesh_h_max <= self.cfg.cone_h && c.seconds < 120.0;
            passed &= ok;
            worst = worst.max(err.abs());
            details.push(format!(
                "r = {r}: estimate {:.6}, analytic {analytic:.6}, rel err {:+.3}%, h_max {:.4}, {:.1} s",
                c.estimate.value,
                100.0 * err,
                c.mesh_h_max,
                c.seconds
            ));
        }
        Ok(Check { passed, summary: format!("worst rel err {:.3}% (limit 2%)", 100.0 * worst), details })
    }

    fn c3(&self) -> Result<Check, HarnessError> {
        let f = |r: f64| cone_distortion_analytic(r).map(|d| d - FRAC_PI_2);
        let (mut lo, mut hi) = (find_r0(1e-12)?.r0, 0.5);
        if !(f(lo)? < 0.0 && f(hi)? > 0.0) {
            return Ok(Check { passed: false, summary: "no sign change for the π/2 crossing".into(), details: Vec::new() });
        }
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if f(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let crossing = 0.5 * (lo + hi);
        let gap = (crossing - cone_threshold()).abs();
        let below = self.cone(0.15)?.estimate.value;
        let above = self.cone(0.25)?.estimate.value;
        let passed = gap <= 1e-9 && below < FRAC_PI_2 * (1.0 - THRESHOLD_MARGIN) && above > FRAC_PI_2 * (1.0 + THRESHOLD_MARGIN);
        Ok(Check {
            passed,
            summary: format!(
                "crossing {crossing:.12} vs {:.12} (|Δ| = {gap:.1e}); r = 0.15 → {below:.5}, r = 0.25 → {above:.5}",
                cone_threshold()
            ),
            details: vec![format!(
                "estimates must clear π/2 = {FRAC_PI_2:.5} by a relative margin of {THRESHOLD_MARGIN}: below {:.5}, above {:.5}",
                FRAC_PI_2 * (1.0 - THRESHOLD_MARGIN),
                FRAC_PI_2 * (1.0 + THRESHOLD_MARGIN)
            )],
        })
    }

    fn c4(&self) -> Result<Check, HarnessError> {
        let mut worst: f64 = 0.0;
        for n in 1..=10 {
            worst = worst.max((simplex_distortion_analytic(n)? - simplex_witnesses(n)?.ratio()).abs());
        }
        let first = (1..=10).find(|&n| simplex_distortion_analytic(n).is_ok_and(|v| v < FRAC_PI_2));
        let c = self.simplex()?;
        let err = rel(c.estimate.value, 3f64.sqrt());
        let passed = worst <= 1e-12 && first == Some(5) && err.abs() <= 0.02;
        Ok(Check {
            passed,
            summary: format!(
                "witness gap {worst:.1e}; first n below π/2: {}; n = 2 mesh {:.6} ({:+.3}% from √3)",
                first.map_or("none".into(), |n| n.to_string()),
                c.estimate.value,
                100.0 * err
            ),
            details: Vec::new(),
        })
    }

    fn c5(&self) -> Result<Check, HarnessError> {
        let mut worst: f64 = 0.0;
        for n in 1..=10 {
            worst = worst.max((two_ray_distortion(dihedral_angle(n)?)? - simplex_distortion_analytic(n)?).abs());
        }
        let mut details = Vec::new();
        let mut last = 0.0;
        for samples in [100, 500, 2000] {
            last = two_segment_sampled_distortion(PI / 3.0, samples)?;
            details.push(format!("{samples} × {samples} samples: {last:.9} (gap {:.2e})", 2.0 - last));
        }
        let passed = worst <= 1e-12 && (last - 2.0).abs() <= 1e-3;
        Ok(Check { passed, summary: format!("identity gap {worst:.1e}; sampled value {last:.7} vs 2"), details })
    }

    fn c6(&self) -> Result<Check, HarnessError> {
        let c = self.sphere()?;
        let err = rel(c.estimate.value, FRAC_PI_2);
        let off = geom::norm(&[
            c.estimate.witness_p[0] + c.estimate.witness_q[0],
            c.estimate.witness_p[1] + c.estimate.witness_q[1],
            c.estimate.witness_p[2] + c.estimate.witness_q[2],
        ]);
        let passed = err.abs() <= 0.01 && off <= 2.0 * c.mesh_h_max;
        Ok(Check {
            passed,
            summary: format!(
                "estimate {:.6} ({:+.3}% from π/2); |p + q| = {off:.2e} vs 2·h_max = {:.3}",
                c.estimate.value,
                100.0 * err,
                2.0 * c.mesh_h_max
            ),
            details: Vec::new(),
        })
    }

    fn c7(&self) -> Result<Check, HarnessError> {
        let mut rows = Vec::new();
        let mut details = Vec::new();
        let mut seconds = 0.0;
        for eps in TORUS_EPS {
            let c = self.torus(eps)?;
            seconds += c.seconds;
            rows.push(SweepRow { param: eps, estimate: Some(c.estimate.value), analytic: FRAC_PI_2, rel_err: None });
            details.push(format!(
                "ε = {eps}: estimate {:.7}, |δ − π/2| = {:.2e}, {:.1} s",
                c.estimate.value,
                (c.estimate.value - FRAC_PI_2).abs(),
                c.seconds
            ));
        }
        let above = rows.iter().all(|r| r.estimate.unwrap() >= FRAC_PI_2 * 0.99);
        let devs: Vec<f64> = rows.iter().map(|r| (r.estimate.unwrap() - FRAC_PI_2).abs()).collect();
        let monotone = devs.windows(2).all(|w| w[1] <= w[0]);
        let c = fit_linear_coefficient(&rows).unwrap_or(f64::NAN);
        let passed = above && monotone && seconds < 300.0;
        Ok(Check {
            passed,
            summary: format!(
                "all ≥ π/2 − 1%: {above}; deviation non-increasing as ε shrinks: {monotone}; fitted C = {c:.4e}"
            ),
            details: details.into_iter().chain([format!("meshing and estimation {seconds:.1} s (limit 300 s)")]).collect(),
        })
    }

    fn c8(&self) -> Result<Check, HarnessError> {
        let mesh = mesh_torus(SYSTOLE_EPS, SYSTOLE_RES.0, SYSTOLE_RES.1)?;
        let s = systole_torus(&mesh, self.cfg.k)?;
        let target = 2.0 * PI * SYSTOLE_EPS;
        let err = rel(s.length, target);
        let checks = systole_pair_checks(&mesh, &s, self.cfg.k, 8)?;
        let worst = checks.iter().map(|c| c.relative_gap.abs()).fold(0.0, f64::max);
        let passed = err.abs() <= 0.02 && s.winding == (0, 1) && checks.len() == 8 && worst <= 0.02;
        Ok(Check {
            passed,
            summary: format!(
                "length {:.6} ({:+.3}% from 2π·0.1), winding {:?}; {} loop pairs, worst gap {:.3}%",
                s.length,
                100.0 * err,
                s.winding,
                checks.len(),
                100.0 * worst
            ),
            details: checks
                .iter()
                .map(|c| format!("{} → {}: along loop {:.6}, surface {:.6}", c.p, c.q, c.along_loop, c.surface))
                .collect(),
        })
    }

    fn c9(&self) -> Result<Check, HarnessError> {
        let mut passed = true;
        let mut parts = Vec::new();
        for r in [0.01, 1.0 / (6.0 * PI)] {
            let rep = lipschitz_check(r, self.cfg.lipschitz_samples, self.cfg.seed)?;
            passed &= rep.passed && rep.pairs >= 100_000;
            parts.push(format!("r = {r:.5}: max {:.6} ≤ {:.6} over {} pairs", rep.observed_max, rep.bound, rep.pairs));
        }
        Ok(Check { passed, summary: parts.join("; "), details: Vec::new() })
    }

    fn c10(&self) -> Result<Check, HarnessError> {
        let mut set = Vec::new();
        for r in CONE_VALUES.iter().chain(&[0.15]) {
            set.push(self.cone(*r)?);
        }
        set.push(self.sphere()?);
        for a in PROLATE {
            set.push(self.ellipsoid(a)?);
        }
        set.push(self.simplex()?);
        for eps in TORUS_EPS {
            set.push(self.torus(eps)?);
        }
        let mut passed = true;
        let mut details = Vec::new();
        let mut tightest = f64::INFINITY;
        for c in &set {
            let bound = if c.genus >= 1 { SYSTOLE_BOUND } else { BOUNDED_COMPLEMENT_BOUND };
            let report = verify_lower_bounds(&c.estimate, true, c.genus, 0.02 * bound);
            passed &= report.passed();
            tightest = tightest.min(c.estimate.value / bound - 1.0);
            details.push(format!("{} (genus {}): {:.6} vs bound {bound:.6}", c.label, c.genus, c.estimate.value));
        }
        Ok(Check {
            passed,
            summary: format!("{} surfaces; smallest relative margin {:+.3}% (limit −2%)", set.len(), 100.0 * tightest),
            details,
        })
    }

    fn c11(&self) -> Result<Check, HarnessError> {
        let sphere = mesh_sphere(1.0, self.cfg.sphere_subdivisions)?;
        let e = eccentricity(&sphere, true)?;
        let min_offset = sphere
            .triangles()
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|v| geom::to3(sphere.vertex(v)));
                let n = geom::cross3(geom::sub3(b, a), geom::sub3(c, a));
                geom::dot(&n, &a).abs() / geom::norm(&n)
            })
            .fold(f64::INFINITY, f64::min);
        let mesh_effect = 1.0 / min_offset;
        let sphere_ok = (e.ratio - mesh_effect).abs() <= 1e-6;
        let mut passed = sphere_ok;
        let mut details = vec![format!(
            "sphere: ratio {:.9}, facet-offset prediction {mesh_effect:.9}, gap {:.1e}",
            e.ratio,
            (e.ratio - mesh_effect).abs()
        )];
        let mut ratio5 = f64::NAN;
        for a in PROLATE {
            let mesh = mesh_ellipsoid(a, 1.0, 1.0, self.cfg.sphere_subdivisions)?;
            let ecc = eccentricity(&mesh, true)?;
            let est = self.ellipsoid(a)?;
            if a == 5.0 {
                ratio5 = ecc.ratio;
                passed &= rel(ecc.ratio, 5.0).abs() <= 0.02;
            }
            let ok = est.estimate.value <= FRAC_PI_2 * 1.02 && ecc.ratio >= a * 0.98;
            passed &= ok;
            details.push(format!(
                "ellipsoid ({a}, 1, 1): eccentricity {:.5}, distortion {:.6} ({:+.3}% from π/2)",
                ecc.ratio,
                est.estimate.value,
                100.0 * rel(est.estimate.value, FRAC_PI_2)
            ));
        }
        Ok(Check {
            passed,
            summary: format!("sphere within 1e-6 of mesh effect: {sphere_ok}; (5,1,1) ratio {ratio5:.5}"),
            details,
        })
    }

    fn c12(&self) -> Result<Check, HarnessError> {
        let r = 1.0 / 10f64.sqrt();
        let c = self.cone(r)?;
        let analytic = cone_distortion_analytic(r)?;
        Ok(Check {
            passed: true,
            summary: format!(
                "r = 1/√10: estimate {:.6}, analytic {analytic:.6}, estimate − π/2 = {:+.6}",
                c.estimate.value,
                c.estimate.value - FRAC_PI_2
            ),
            details: Vec::new(),
        })
    }
}
