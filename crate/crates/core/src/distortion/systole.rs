use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::DistortionError;
use crate::geodesics::{build_steiner_graph, trace_path, NodeSite, SteinerGraph};
use crate::geom;
use crate::surfaces::TriMesh;

/// Shortest non-contractible loop found on a torus mesh.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystoleResult {
    pub length: f64,
    /// Closed polyline: the last point repeats the first.
    pub polyline: Vec<Vec<f64>>,
    /// Windings `(a, b)` around the u- and v-directions, normalised so the
    /// first nonzero entry is positive. The meridian of a tube torus is (0, 1).
    pub winding: (i32, i32),
    /// Mesh vertices met by the loop, in order, without the closing repeat.
    pub loop_vertices: Vec<usize>,
}

const COPIES: i32 = 1;
const SIDE: usize = (2 * COPIES + 1) as usize;

fn copy_index(cu: i32, cv: i32) -> usize {
    ((cu + COPIES) as usize) * SIDE + (cv + COPIES) as usize
}

fn unwrap_offset(from: f64, to: f64) -> i32 {
    ((from - to) / (2.0 * PI)).round() as i32
}

/// 3×3 copies of the parameter domain glued along lifted triangles.
struct Cover {
    graph: SteinerGraph,
    base_vertices: usize,
}

fn build_cover(mesh: &TriMesh, params: &[[f64; 2]], k: usize) -> Cover {
    let n = mesh.vertex_count();
    let copies = SIDE * SIDE;
    let mut coords = Vec::with_capacity(copies * n * 3);
    for _ in 0..copies {
        coords.extend_from_slice(mesh.coords());
    }
    let mut tris = Vec::with_capacity(copies * mesh.triangles().len());
    for t in mesh.triangles() {
        let base = params[t[0]];
        // integer shifts placing each corner next to the first in the plane
        let shift: Vec<(i32, i32)> = t
            .iter()
            .map(|&v| (unwrap_offset(base[0], params[v][0]), unwrap_offset(base[1], params[v][1])))
            .collect();
        for cu in -COPIES..=COPIES {
            for cv in -COPIES..=COPIES {
                let lifted: Option<Vec<usize>> = t
                    .iter()
                    .zip(&shift)
                    .map(|(&v, &(su, sv))| {
                        let (u, w) = (cu + su, cv + sv);
                        (u.abs() <= COPIES && w.abs() <= COPIES).then(|| copy_index(u, w) * n + v)
                    })
                    .collect();
                if let Some(l) = lifted {
                    tris.push([l[0], l[1], l[2]]);
                }
            }
        }
    }
    Cover { graph: SteinerGraph::from_parts(3, &coords, &tris, k), base_vertices: n }
}

/// Loop length, base vertex, winding class and cover node path.
type Found = (f64, usize, (i32, i32), Vec<usize>);

fn normalise(a: i32, b: i32) -> (i32, i32) {
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Shortest closed loop with nonzero winding, over classes with |a|, |b| ≤ 1.
///
/// Each candidate loop starts at a mesh vertex in the central copy of a 3×3
/// cover of the parameter domain and ends at a lift of the same vertex in
/// another copy. Only orbit representatives are used as base points when the
/// mesh carries them.
pub fn systole_torus(mesh: &TriMesh, k: usize) -> Result<SystoleResult, DistortionError> {
    if mesh.expected_genus() != 1 || mesh.euler_characteristic() != 0 {
        return Err(DistortionError::WrongGenus(mesh.expected_genus()));
    }
    let params = mesh.param_coords().ok_or(DistortionError::MissingParamCoords)?;
    build_steiner_graph(mesh, 0)?;
    let cover = build_cover(mesh, params, k);
    let n = cover.base_vertices;
    let sources: Vec<usize> = match mesh.orbit_representatives() {
        Some(r) => r.to_vec(),
        None => (0..n).collect(),
    };
    let mut classes = Vec::new();
    for a in -COPIES..=COPIES {
        for b in -COPIES..=COPIES {
            if (a, b) != (0, 0) {
                classes.push((a, b));
            }
        }
    }
    let found: Vec<Option<Found>> = sources
        .par_iter()
        .map(|&s| {
            let src = copy_index(0, 0) * n + s;
            let targets: Vec<usize> = classes.iter().map(|&(a, b)| copy_index(a, b) * n + s).collect();
            let (dist, pred) = cover.graph.shortest_path_tree_until(src, &targets);
            let mut best: Option<Found> = None;
            for (&(a, b), &t) in classes.iter().zip(&targets) {
                if dist[t].is_finite() && best.as_ref().is_none_or(|x| dist[t] < x.0) {
                    best = Some((dist[t], s, (a, b), trace_path(&pred, src, t)));
                }
            }
            best
        })
        .collect();
    let mut best: Option<Found> = None;
    for f in found.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| f.0 < b.0) {
            best = Some(f);
        }
    }
    let (length, _, (a, b), nodes) = best.ok_or(DistortionError::NoLoop)?;
    let polyline: Vec<Vec<f64>> = nodes.iter().map(|&v| cover.graph.position(v).to_vec()).collect();
    let mut loop_vertices: Vec<usize> = nodes[..nodes.len() - 1]
        .iter()
        .filter_map(|&v| match cover.graph.site(v) {
            NodeSite::Vertex(c) => Some(c % n),
            NodeSite::Edge { .. } => None,
        })
        .collect();
    loop_vertices.dedup();
    Ok(SystoleResult { length, polyline, winding: normalise(a, b), loop_vertices })
}

/// Along-loop versus surface distance for one pair of loop vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopPairCheck {
    pub p: usize,
    pub q: usize,
    pub along_loop: f64,
    pub surface: f64,
    pub relative_gap: f64,
}

/// Compares distances measured along the systole with graph distances on the
/// whole mesh for `pairs` deterministic pairs of loop vertices.
pub fn systole_pair_checks(
    mesh: &TriMesh,
    systole: &SystoleResult,
    k: usize,
    pairs: usize,
) -> Result<Vec<LoopPairCheck>, DistortionError> {
    let g = build_steiner_graph(mesh, k)?;
    // cumulative arc length at each loop vertex
    let mut at: HashMap<usize, f64> = HashMap::new();
    let mut run = 0.0;
    let mut next_vertex = 0;
    for (i, p) in systole.polyline.iter().enumerate() {
        if i > 0 {
            run += geom::dist(&systole.polyline[i - 1], p);
        }
        if let Some(&v) = systole.loop_vertices.get(next_vertex) {
            if mesh.vertex(v) == &p[..] && !at.contains_key(&v) {
                at.insert(v, run);
                next_vertex += 1;
            }
        }
    }
    let m = systole.loop_vertices.len();
    if m < 2 {
        return Ok(Vec::new());
    }
    let total = systole.length;
    let mut out = Vec::with_capacity(pairs);
    for j in 0..pairs {
        let i0 = j * m / pairs;
        let i1 = (i0 + 1 + (j + 1) * (m - 1) / (pairs + 1)) % m;
        let (p, q) = (systole.loop_vertices[i0], systole.loop_vertices[i1]);
        if p == q {
            continue;
        }
        let forward = (at[&q] - at[&p]).abs();
        let along = forward.min(total - forward);
        let surface = g.single_source(p)[q];
        out.push(LoopPairCheck { p, q, along_loop: along, surface, relative_gap: (along - surface) / along });
    }
    Ok(out)
}
