use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use distlab::distortion::{
    cone_threshold, dihedral_angle, eccentricity, find_r0, lipschitz_check, simplex_distortion_analytic,
    simplex_witnesses, systole_pair_checks, systole_torus,
};
use distlab::geodesics::two_ray_distortion;
use distlab::harness::{
    cone_sweep, cone_sweep_svg, default_mesh, estimate_report, fit_linear_coefficient, simplex_sweep, simplex_sweep_svg,
    sweep_csv, torus_mesh, torus_sweep, torus_sweep_svg, RunConfig, VerifyConfig, Verifier, CRITERIA, SCHEMA_VERSION,
};
use distlab::surfaces::{off::to_off_string, validate_mesh};
use distlab::SurfaceSpec;

#[derive(Parser)]
#[command(name = "distlab", version, about = "Metric distortion of embedded surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Cone base radius (slant length 1).
    #[arg(long)]
    r: Option<f64>,
    /// Torus tube radius.
    #[arg(long)]
    eps: Option<f64>,
    /// Simplex dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Mesh resolution (family specific).
    #[arg(long)]
    res: Option<usize>,
    /// Steiner points per edge.
    #[arg(long)]
    k: Option<usize>,
    /// Local refinement rounds.
    #[arg(long)]
    budget: Option<usize>,
    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// key = value file with defaults for the flags above; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags: [(&str, Option<String>); 9] = [
            ("r", self.r.map(|v| v.to_string())),
            ("eps", self.eps.map(|v| v.to_string())),
            ("n", self.n.map(|v| v.to_string())),
            ("res", self.res.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("budget", self.budget.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("tol", self.tol.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Surface {
    Cone,
    Sphere,
    Ellipsoid,
    Torus,
    Simplex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cone,
    Torus,
    Simplex,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    surface: Surface,
    /// Long semi-axis of the ellipsoid (the others are 1).
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Write a surface mesh as OFF (nOFF above three dimensions).
    Gen(SurfaceArgs),
    /// Estimate the distortion of a surface mesh.
    Estimate(SurfaceArgs),
    /// Sweep a family parameter; writes CSV and SVG.
    Sweep {
        family: Family,
        /// First parameter (cone 0.02, torus 0.3, simplex 1).
        #[arg(long)]
        from: Option<f64>,
        /// Last parameter (cone 0.9, torus 0.05, simplex 10).
        #[arg(long)]
        to: Option<f64>,
        /// Number of points (cone 30, torus 6).
        #[arg(long)]
        steps: Option<usize>,
        /// Longest cone edge (capped at r/4 per point).
        #[arg(long, default_value_t = 0.04)]
        h: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Cone minimiser r0 and the π/2 threshold.
    Root(Common),
    /// Closed forms and witnesses for the simplex boundary.
    Simplex(Common),
    /// Shortest non-contractible loop of the tube torus.
    Systole(Common),
    /// Circumradius over inradius of a convex surface.
    Eccentricity(SurfaceArgs),
    /// Sampled Lipschitz constant of the radial projection.
    Lipschitz {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run every acceptance criterion; nonzero exit on any failure.
    VerifyAll {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u32>,
        #[command(flatten)]
        common: Common,
    },
}

fn surface_spec(args: &SurfaceArgs, cfg: &RunConfig) -> SurfaceSpec {
    match args.surface {
        Surface::Cone => SurfaceSpec::Cone { r: cfg.r.unwrap_or(0.169) },
        Surface::Sphere => SurfaceSpec::Sphere { radius: 1.0 },
        Surface::Ellipsoid => SurfaceSpec::Ellipsoid { a: args.a, b: 1.0, c: 1.0 },
        Surface::Torus => SurfaceSpec::Torus { eps: cfg.eps.unwrap_or(0.1) },
        Surface::Simplex => SurfaceSpec::SimplexBoundary { n: cfg.n.unwrap_or(2) },
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes `text` to `out` (a file, or `default_name` inside a directory) or
/// to stdout.
fn emit(out: &Option<PathBuf>, default_name: &str, text: &str) -> Result<()> {
    match out {
        Some(p) if p.is_dir() => write_file(&p.join(default_name), text),
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, default_name: &str, value: &Value) -> Result<()> {
    emit(out, default_name, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn gen(args: &SurfaceArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let spec = surface_spec(args, &cfg);
    let mesh = default_mesh(&spec, cfg.res)?;
    let q = validate_mesh(&mesh)?;
    eprintln!(
        "{}: {} vertices, {} triangles, h_max {:.5}, min angle {:.2}°, χ = {}",
        spec.name(),
        mesh.vertex_count(),
        q.triangle_count,
        q.h_max,
        q.min_angle.to_degrees(),
        q.euler_characteristic
    );
    emit(&cfg.out, &format!("{}.off", spec.name()), &to_off_string(&mesh))
}

fn estimate(args: &SurfaceArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let spec = surface_spec(args, &cfg);
    let report = estimate_report(&spec, cfg.res, cfg.k, cfg.budget)?;
    emit(&cfg.out, &format!("{}_estimate.json", spec.name()), &(report.to_json() + "\n"))
}

fn sweep(family: Family, from: Option<f64>, to: Option<f64>, steps: Option<usize>, h: f64, common: &Common) -> Result<()> {
    let cfg = common.resolve()?;
    let (name, rows, svg) = match family {
        Family::Cone => {
            let rows = cone_sweep(from.unwrap_or(0.02), to.unwrap_or(0.9), steps.unwrap_or(30), h, cfg.k, cfg.budget)?;
            let svg = cone_sweep_svg(&rows);
            ("cone", rows, svg)
        }
        Family::Torus => {
            let res_v = cfg.res.unwrap_or(distlab::harness::TORUS_RES_V);
            let rows = torus_sweep(from.unwrap_or(0.3), to.unwrap_or(0.05), steps.unwrap_or(6), res_v, cfg.k, cfg.budget)?;
            if let Some(c) = fit_linear_coefficient(&rows) {
                eprintln!("fitted |δ − π/2| ≈ C·ε with C = {c:.6e}");
            }
            let svg = torus_sweep_svg(&rows);
            ("torus", rows, svg)
        }
        Family::Simplex => {
            let lo = from.map_or(1, |v| v as usize);
            let hi = to.map_or(10, |v| v as usize);
            let rows = simplex_sweep(lo, hi)?;
            let svg = simplex_sweep_svg(&rows);
            ("simplex", rows, svg)
        }
    };
    let csv = sweep_csv(&rows);
    match &cfg.out {
        Some(out) => {
            let base = if out.is_dir() { out.join(format!("{name}_sweep")) } else { out.with_extension("") };
            write_file(&base.with_extension("csv"), &csv)?;
            write_file(&base.with_extension("svg"), &svg)?;
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn root(common: &Common) -> Result<()> {
    let cfg = common.resolve()?;
    let root = find_r0(cfg.tol.unwrap_or(1e-6))?;
    emit_json(
        &cfg.out,
        "root.json",
        &json!({
            "schema": SCHEMA_VERSION,
            "r0": root.r0,
            "delta0": root.delta0,
            "bracket_width": root.bracket_width,
            "threshold": cone_threshold(),
        }),
    )
}

fn simplex(common: &Common) -> Result<()> {
    let cfg = common.resolve()?;
    let n = cfg.n.unwrap_or(2);
    let w = simplex_witnesses(n)?;
    let alpha = dihedral_angle(n)?;
    emit_json(
        &cfg.out,
        "simplex.json",
        &json!({
            "schema": SCHEMA_VERSION,
            "n": n,
            "distortion": simplex_distortion_analytic(n)?,
            "witness_ratio": w.ratio(),
            "witnesses": w,
            "dihedral_angle": alpha,
            "two_ray_distortion": two_ray_distortion(alpha)?,
            "below_half_pi": simplex_distortion_analytic(n)? < PI / 2.0,
        }),
    )
}

fn systole(common: &Common) -> Result<()> {
    let cfg = common.resolve()?;
    let eps = cfg.eps.unwrap_or(0.1);
    let res_v = cfg.res.unwrap_or(16);
    let mesh = torus_mesh(eps, res_v)?;
    let s = systole_torus(&mesh, cfg.k)?;
    let checks = systole_pair_checks(&mesh, &s, cfg.k, 8)?;
    emit_json(
        &cfg.out,
        "systole.json",
        &json!({
            "schema": SCHEMA_VERSION,
            "eps": eps,
            "length": s.length,
            "meridian": 2.0 * PI * eps,
            "winding": [s.winding.0, s.winding.1],
            "polyline": s.polyline,
            "pair_checks": checks,
        }),
    )
}

fn eccentricity_cmd(args: &SurfaceArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let spec = surface_spec(args, &cfg);
    let convex = !matches!(spec, SurfaceSpec::Torus { .. });
    let mesh = default_mesh(&spec, cfg.res)?;
    if mesh.dim() != 3 {
        bail!("eccentricity needs a surface in R³; {} lives in R^{}", spec.name(), mesh.dim());
    }
    let e = eccentricity(&mesh, convex)?;
    let mut v = serde_json::to_value(&e)?;
    v["schema"] = json!(SCHEMA_VERSION);
    v["surface"] = json!(spec.name());
    emit_json(&cfg.out, "eccentricity.json", &v)
}

fn lipschitz(samples: usize, common: &Common) -> Result<bool> {
    let cfg = common.resolve()?;
    let mut reports = Vec::new();
    let rs = match cfg.r {
        Some(r) => vec![r],
        None => vec![0.01, 1.0 / (6.0 * PI)],
    };
    for r in rs {
        reports.push(lipschitz_check(r, samples, cfg.seed)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    emit_json(&cfg.out, "lipschitz.json", &json!({ "schema": SCHEMA_VERSION, "passed": passed, "reports": reports }))?;
    Ok(passed)
}

fn verify_all(criteria: &[u32], common: &Common) -> Result<bool> {
    let cfg = common.resolve()?;
    let ids: Vec<u32> = if criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { criteria.to_vec() };
    if let Some(bad) = ids.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        bail!("no criterion {bad}");
    }
    let verifier = Verifier::new(VerifyConfig::from_run(&cfg));
    let report = verifier.run(&ids, |c| println!("{}", c.line()));
    let path = match &cfg.out {
        Some(p) if p.is_dir() => p.join("verify_report.json"),
        Some(p) => p.clone(),
        None => PathBuf::from("verify_report.json"),
    };
    write_file(&path, &(report.to_json() + "\n"))?;
    println!("{} ({:.1} s); report written to {}", if report.passed { "all passed" } else { "FAILED" }, report.total_seconds, path.display());
    Ok(report.passed)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("DISTLAB_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("DISTLAB_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("DISTLAB_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match &cli.command {
        Command::Gen(a) => gen(a)?,
        Command::Estimate(a) => estimate(a)?,
        Command::Sweep { family, from, to, steps, h, common } => sweep(*family, *from, *to, *steps, *h, common)?,
        Command::Root(c) => root(c)?,
        Command::Simplex(c) => simplex(c)?,
        Command::Systole(c) => systole(c)?,
        Command::Eccentricity(a) => eccentricity_cmd(a)?,
        Command::Lipschitz { samples, common } => return lipschitz(*samples, common),
        Command::VerifyAll { criteria, common } => return verify_all(criteria, common),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
