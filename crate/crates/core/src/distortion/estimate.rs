use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::DistortionError;
use crate::geodesics::{build_steiner_graph, straighten_path, trace_path, SteinerGraph};
use crate::geom;
use crate::surfaces::{refine_near, vertex_ring, TriMesh};

/// Estimated distortion of a mesh, with the pair attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionEstimate {
    pub value: f64,
    pub witness_p: Vec<f64>,
    pub witness_q: Vec<f64>,
    pub intrinsic: f64,
    pub euclidean: f64,
    pub h_max: f64,
    /// `(h_max, value)` after the global pass and after each refinement
    /// round, where `h_max` is the longest edge near the witness pair.
    pub refinement_history: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    /// Steiner points per edge.
    pub k: usize,
    /// Number of local refinement rounds around the witness pair.
    pub budget: usize,
    /// Pairs closer than this fraction of the diameter are ignored.
    pub exclusion: f64,
    /// Shorten witness candidate paths within their face corridor.
    pub straighten: bool,
    /// Triangle rings around each witness subdivided per round.
    pub rings: usize,
    /// Average number of straightened candidates allowed per source.
    pub max_straighten: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { k: 3, budget: 1, exclusion: 1e-6, straighten: true, rings: 2, max_straighten: 4096 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pair {
    ratio: f64,
    intrinsic: f64,
    euclidean: f64,
    p: usize,
    q: usize,
}

impl Pair {
    fn beats(&self, other: &Option<Pair>) -> bool {
        other.is_none_or(|o| self.ratio > o.ratio)
    }
}

/// Graph-distance ratios from `src` to `targets` (all vertices if `None`),
/// sorted by decreasing ratio, with the shortest-path tree.
fn scan_source(
    g: &SteinerGraph,
    mesh: &TriMesh,
    src: usize,
    targets: Option<&[usize]>,
    min_dist: f64,
) -> Result<(Vec<Pair>, Vec<u32>), DistortionError> {
    let (dist, pred) = match targets {
        Some(t) => g.shortest_path_tree_until(src, t),
        None => g.shortest_path_tree(src),
    };
    let p = mesh.vertex(src);
    let mut cands: Vec<Pair> = Vec::new();
    let mut push = |t: usize| -> Result<(), DistortionError> {
        if t == src {
            return Ok(());
        }
        let e = geom::dist(p, mesh.vertex(t));
        if e < min_dist {
            return Ok(());
        }
        if !dist[t].is_finite() {
            return Err(DistortionError::Disconnected);
        }
        cands.push(Pair { ratio: dist[t] / e, intrinsic: dist[t], euclidean: e, p: src, q: t });
        Ok(())
    };
    match targets {
        Some(ts) => ts.iter().try_for_each(|&t| push(t))?,
        None => (0..mesh.vertex_count()).try_for_each(&mut push)?,
    }
    cands.sort_by(|a, b| b.ratio.total_cmp(&a.ratio).then(a.q.cmp(&b.q)));
    Ok((cands, pred))
}

fn straightened(g: &SteinerGraph, pred: &[u32], c: &Pair) -> Pair {
    let nodes = trace_path(pred, c.p, c.q);
    let d = straighten_path(g, &nodes).map_or(c.intrinsic, |s| s.distance.min(c.intrinsic));
    Pair { ratio: d / c.euclidean, intrinsic: d, ..*c }
}

/// Sorted candidates, shortest-path tree and probed pairs of one source.
type Scan = (Vec<Pair>, Vec<u32>, Vec<Pair>);

/// Candidates straightened per source before the global threshold is known.
const PROBES: usize = 4;
/// Candidates straightened in parallel between threshold updates.
const BATCH: usize = 64;

/// Largest ratio over `sources` × `targets`, returned together with every
/// pair whose value was settled (straightened or, without straightening,
/// the per-source graph maxima).
///
/// Graph ratios bound straightened ratios from above, so once the best
/// straightened value reaches the next graph ratio in decreasing order no
/// remaining pair can improve it. The batches are fixed by sort order, which
/// keeps the result independent of the thread count.
fn search(
    g: &SteinerGraph,
    mesh: &TriMesh,
    sources: &[usize],
    targets: Option<&[usize]>,
    min_dist: f64,
    opts: &EstimateOptions,
) -> Result<Vec<Pair>, DistortionError> {
    let scans: Vec<Result<Scan, DistortionError>> = sources
        .par_iter()
        .map(|&s| {
            let (cands, pred) = scan_source(g, mesh, s, targets, min_dist)?;
            let probed: Vec<Pair> = if opts.straighten {
                cands.iter().take(PROBES).map(|c| straightened(g, &pred, c)).collect()
            } else {
                cands.first().copied().into_iter().collect()
            };
            Ok((cands, pred, probed))
        })
        .collect();
    let mut settled = Vec::new();
    let mut rest: Vec<(usize, Pair)> = Vec::new();
    let mut preds = Vec::with_capacity(scans.len());
    let mut threshold = f64::NEG_INFINITY;
    let mut scans_ok = Vec::with_capacity(scans.len());
    for scan in scans {
        let (cands, pred, probed) = scan?;
        for p in &probed {
            threshold = threshold.max(p.ratio);
        }
        settled.extend(probed);
        scans_ok.push(cands);
        preds.push(pred);
    }
    if !opts.straighten {
        return Ok(settled);
    }
    for (i, cands) in scans_ok.into_iter().enumerate() {
        rest.extend(cands.into_iter().skip(PROBES).take_while(|c| c.ratio >= threshold).map(|c| (i, c)));
    }
    rest.sort_by(|a, b| b.1.ratio.total_cmp(&a.1.ratio).then(a.0.cmp(&b.0)).then(a.1.q.cmp(&b.1.q)));
    let mut start = 0;
    let cap = opts.max_straighten.max(1) * sources.len().max(1);
    while start < rest.len() && rest[start].1.ratio >= threshold {
        if start >= cap {
            // remaining graph ratios are upper bounds; keep the estimate conservative
            settled.push(rest[start].1);
            break;
        }
        let end = (start + BATCH).min(rest.len());
        let done: Vec<Pair> = rest[start..end]
            .par_iter()
            .filter(|(_, c)| c.ratio >= threshold)
            .map(|(i, c)| straightened(g, &preds[*i], c))
            .collect();
        for p in &done {
            threshold = threshold.max(p.ratio);
        }
        settled.extend(done);
        start = end;
    }
    Ok(settled)
}

fn argmax(pairs: &[Pair]) -> Option<Pair> {
    let mut best: Option<Pair> = None;
    for p in pairs {
        if p.beats(&best) {
            best = Some(*p);
        }
    }
    best
}

fn patch_h_max(mesh: &TriMesh, patch: &HashSet<usize>) -> f64 {
    mesh.triangles()
        .iter()
        .filter(|t| t.iter().all(|v| patch.contains(v)))
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
        .map(|(a, b)| geom::dist(mesh.vertex(a), mesh.vertex(b)))
        .fold(0.0, f64::max)
}

/// Estimates sup d(p,q)/|p−q| over mesh vertex pairs with default options
/// apart from `k` and `budget`.
pub fn estimate_distortion(mesh: &TriMesh, k: usize, budget: usize) -> Result<DistortionEstimate, DistortionError> {
    estimate_distortion_with(mesh, &EstimateOptions { k, budget, ..EstimateOptions::default() })
}

/// Estimates the distortion of a closed mesh.
///
/// The global pass runs Dijkstra on the Steiner graph from every orbit
/// representative (every vertex if the mesh carries none) and takes the
/// largest ratio over all vertex targets. Each refinement round subdivides
/// the triangles around the current witness pair and re-queries pairs inside
/// the two refined patches; pairs elsewhere keep their global-pass value.
pub fn estimate_distortion_with(mesh: &TriMesh, opts: &EstimateOptions) -> Result<DistortionEstimate, DistortionError> {
    let g = build_steiner_graph(mesh, opts.k)?;
    let diameter = mesh.diameter();
    let min_dist = opts.exclusion * diameter;
    let sources: Vec<usize> = match mesh.orbit_representatives() {
        Some(r) => r.to_vec(),
        None => (0..mesh.vertex_count()).collect(),
    };
    let per_source = search(&g, mesh, &sources, None, min_dist, opts)?;
    let mut best = argmax(&per_source).ok_or(DistortionError::NoPairs)?;
    let mut history = vec![(mesh.h_max(), best.ratio)];
    let mut current = mesh.clone();
    let mut witness = (mesh.vertex(best.p).to_vec(), mesh.vertex(best.q).to_vec());
    let mut refined_regions: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();

    for _ in 0..opts.budget {
        let (p, q) = (find_vertex(&current, &witness.0), find_vertex(&current, &witness.1));
        let refined = refine_near(&current, &[p, q], opts.rings)?;
        let rg = build_steiner_graph(&refined, opts.k)?;
        let mut ps: Vec<usize> = vertex_ring(&refined, &[p], opts.rings).into_iter().collect();
        let mut qs: Vec<usize> = vertex_ring(&refined, &[q], opts.rings).into_iter().collect();
        ps.sort_unstable();
        qs.sort_unstable();
        let local = argmax(&search(&rg, &refined, &ps, Some(&qs), min_dist, opts)?);
        refined_regions.push((current.vertex(p).to_vec(), current.vertex(q).to_vec()));
        let patch: HashSet<usize> = ps.iter().chain(&qs).copied().collect();
        let h_local = patch_h_max(&refined, &patch);

        // global-pass pairs other than already refined witnesses keep their value;
        // refinement only appends vertices, so their indices stay valid
        let untouched: Vec<Pair> = per_source
            .iter()
            .filter(|pair| {
                let (a, b) = (mesh.vertex(pair.p), mesh.vertex(pair.q));
                !refined_regions.iter().any(|(x, y)| (a == &x[..] && b == &y[..]) || (a == &y[..] && b == &x[..]))
            })
            .copied()
            .collect();
        let outside = argmax(&untouched);
        current = refined;
        let round_best = match (local, outside) {
            (Some(l), Some(o)) if o.ratio > l.ratio => o,
            (Some(l), _) => l,
            (None, Some(o)) => o,
            (None, None) => break,
        };
        witness = (current.vertex(round_best.p).to_vec(), current.vertex(round_best.q).to_vec());
        best = round_best;
        history.push((h_local, best.ratio));
    }

    Ok(DistortionEstimate {
        value: best.intrinsic / best.euclidean,
        witness_p: witness.0,
        witness_q: witness.1,
        intrinsic: best.intrinsic,
        euclidean: best.euclidean,
        h_max: current.h_max(),
        refinement_history: history,
    })
}

fn find_vertex(mesh: &TriMesh, p: &[f64]) -> usize {
    mesh.vertices().position(|v| v == p).expect("witness is a mesh vertex")
}
