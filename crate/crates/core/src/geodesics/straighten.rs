//! Shortening of graph paths within the strip of faces they visit.
//!
//! The faces are unfolded into the plane one shared edge at a time (only edge
//! lengths enter, so this works in any ambient dimension) and the shortest
//! path through the resulting portal sequence is found with the funnel
//! algorithm. Vertices the path wraps around are then revisited: if the
//! angle on the far side is below π the strip is rerouted round that side.
//! The result is a genuine surface path, so its length is still an upper
//! bound on the intrinsic distance, and never longer than the input graph
//! path.

use std::f64::consts::PI;

use super::steiner::{NodeSite, SteinerGraph, NO_NODE};
use super::GeodesicResult;
use crate::geom;

type P2 = [f64; 2];

fn cross(u: P2, v: P2) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn len2(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// A face laid out in the plane: vertex ids with their unfolded positions.
#[derive(Clone, Copy)]
struct Placed {
    ids: [usize; 3],
    pts: [P2; 3],
}

impl Placed {
    fn at(&self, v: usize) -> P2 {
        self.pts[self.ids.iter().position(|&x| x == v).expect("vertex on face")]
    }
    fn opposite(&self, a: usize, b: usize) -> usize {
        (0..3).find(|&i| self.ids[i] != a && self.ids[i] != b).unwrap()
    }
}

#[derive(Clone, Copy)]
struct Portal {
    left: P2,
    right: P2,
    left_id: usize,
    right_id: usize,
}

/// Face sequence visited by a node path, with the shared edge between
/// consecutive faces. Passing through a vertex walks the fan of faces on the
/// side with the smaller total corner angle.
fn corridor(g: &SteinerGraph, nodes: &[usize]) -> Option<(Vec<usize>, Vec<[usize; 2]>)> {
    let mut faces: Vec<usize> = Vec::new();
    let mut portals: Vec<[usize; 2]> = Vec::new();
    for (i, w) in nodes.windows(2).enumerate() {
        let fa = g.node_faces(w[0]);
        let fb = g.node_faces(w[1]);
        let common: Vec<usize> = fa.iter().copied().filter(|f| fb.contains(f)).collect();
        let face = match faces.last() {
            Some(last) if common.contains(last) => *last,
            _ => *common.first()?,
        };
        let Some(&prev) = faces.last() else {
            faces.push(face);
            continue;
        };
        if prev == face {
            continue;
        }
        let joint = nodes[i];
        match g.site(joint) {
            NodeSite::Edge { edge, .. } => {
                let e = g.edges[edge];
                portals.push([e[0] as usize, e[1] as usize]);
                faces.push(face);
            }
            NodeSite::Vertex(v) => {
                let (fan_faces, fan_portals) = fan_walk(g, v, prev, face)?;
                faces.extend(fan_faces);
                portals.extend(fan_portals);
            }
        }
    }
    if faces.is_empty() {
        faces.push(*g.node_faces(nodes[0]).first()?);
    }
    Some((faces, portals))
}

fn face_angle_at(g: &SteinerGraph, f: usize, v: usize) -> f64 {
    let t = g.triangles[f].map(|x| x as usize);
    let i = t.iter().position(|&x| x == v).unwrap();
    geom::corner_angle(g.position(v), g.position(t[(i + 1) % 3]), g.position(t[(i + 2) % 3]))
}

/// Walks round vertex `v` from face `from`, first crossing edge (v, `via`),
/// until face `to`. Returns the faces entered and the edges crossed.
fn fan_walk_from(
    g: &SteinerGraph,
    v: usize,
    from: usize,
    via: usize,
    to: usize,
) -> Option<(Vec<usize>, Vec<[usize; 2]>)> {
    let limit = g.vertex_faces(v).len() + 1;
    let mut faces = Vec::new();
    let mut portals = Vec::new();
    let mut face = from;
    let mut via = via;
    for _ in 0..limit {
        let e = g.edge_id(v, via)?;
        let next = g.edge_faces[e].iter().copied().find(|&f| f != NO_NODE && f as usize != face)? as usize;
        portals.push([v, via]);
        faces.push(next);
        if next == to {
            return Some((faces, portals));
        }
        via = third(g, next, v, via);
        face = next;
    }
    None
}

/// Faces strictly after `from` up to `to` around vertex `v`, and the edges
/// crossed, going round the side with the smaller total angle.
fn fan_walk(g: &SteinerGraph, v: usize, from: usize, to: usize) -> Option<(Vec<usize>, Vec<[usize; 2]>)> {
    let t0 = g.triangles[from].map(|x| x as usize);
    let mut best: Option<(f64, Vec<usize>, Vec<[usize; 2]>)> = None;
    for &start in t0.iter().filter(|&&x| x != v) {
        if let Some((faces, portals)) = fan_walk_from(g, v, from, start, to) {
            let angle: f64 = faces[..faces.len() - 1].iter().map(|&f| face_angle_at(g, f, v)).sum();
            if best.as_ref().is_none_or(|b| angle < b.0) {
                best = Some((angle, faces, portals));
            }
        }
    }
    best.map(|(_, f, p)| (f, p))
}

fn place_first(g: &SteinerGraph, f: usize) -> Placed {
    let ids = g.triangles[f].map(|x| x as usize);
    let (a, b, c) = (g.position(ids[0]), g.position(ids[1]), g.position(ids[2]));
    let ab = geom::dist(a, b);
    let ac = geom::dist(a, c);
    let bc = geom::dist(b, c);
    let x = (ac * ac - bc * bc + ab * ab) / (2.0 * ab);
    let y = (ac * ac - x * x).max(0.0).sqrt();
    Placed { ids, pts: [[0.0, 0.0], [ab, 0.0], [x, y]] }
}

/// Lays out face `f` across the shared edge `(a, b)` of the already placed `prev`.
fn place_next(g: &SteinerGraph, prev: &Placed, f: usize, a: usize, b: usize) -> Placed {
    let ids = g.triangles[f].map(|x| x as usize);
    let c = *ids.iter().find(|&&x| x != a && x != b).unwrap();
    let (pa, pb) = (prev.at(a), prev.at(b));
    let behind = prev.pts[prev.opposite(a, b)];
    let d = len2(pa, pb);
    let la = geom::dist(g.position(a), g.position(c));
    let lb = geom::dist(g.position(b), g.position(c));
    let x = (la * la - lb * lb + d * d) / (2.0 * d);
    let h = (la * la - x * x).max(0.0).sqrt();
    let e = [(pb[0] - pa[0]) / d, (pb[1] - pa[1]) / d];
    let perp = [-e[1], e[0]];
    let side = cross(sub(pb, pa), sub(behind, pa));
    let s = if side > 0.0 { -1.0 } else { 1.0 };
    let pc = [pa[0] + x * e[0] + s * h * perp[0], pa[1] + x * e[1] + s * h * perp[1]];
    let mut pts = [[0.0; 2]; 3];
    for (i, &id) in ids.iter().enumerate() {
        pts[i] = if id == a {
            pa
        } else if id == b {
            pb
        } else {
            pc
        };
    }
    Placed { ids, pts }
}

fn node_in_face(g: &SteinerGraph, placed: &Placed, node: usize) -> P2 {
    match g.site(node) {
        NodeSite::Vertex(v) => placed.at(v),
        NodeSite::Edge { edge, t } => {
            let e = g.edges[edge];
            let (p, q) = (placed.at(e[0] as usize), placed.at(e[1] as usize));
            [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
        }
    }
}

/// Funnel (string pulling) over a portal list whose first and last entries
/// are the degenerate start and end portals. Returns the path corners and the
/// portal index each corner came from.
fn funnel(portals: &[Portal]) -> Vec<(P2, usize)> {
    let same = |a: P2, b: P2| (a[0] - b[0]).abs() <= 1e-15 && (a[1] - b[1]).abs() <= 1e-15;
    let mut path = vec![(portals[0].left, 0usize)];
    let mut apex = portals[0].left;
    let (mut left, mut right) = (portals[0].left, portals[0].right);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < portals.len() {
        let (l, r) = (portals[i].left, portals[i].right);
        // tighten the right side
        if cross(sub(right, apex), sub(r, apex)) >= 0.0 {
            if same(apex, right) || cross(sub(left, apex), sub(r, apex)) < 0.0 {
                right = r;
                right_i = i;
            } else {
                apex = left;
                let apex_i = left_i;
                path.push((apex, apex_i));
                left = apex;
                right = apex;
                right_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }
        // tighten the left side
        if cross(sub(left, apex), sub(l, apex)) <= 0.0 {
            if same(apex, left) || cross(sub(right, apex), sub(l, apex)) > 0.0 {
                left = l;
                left_i = i;
            } else {
                apex = right;
                let apex_i = right_i;
                path.push((apex, apex_i));
                left = apex;
                right = apex;
                left_i = apex_i;
                i = apex_i + 1;
                continue;
            }
        }
        i += 1;
    }
    let last = portals.len() - 1;
    let end = portals[last].left;
    if !same(path.last().unwrap().0, end) || path.len() == 1 {
        path.push((end, last));
    }
    path
}

fn segment_param(p: P2, q: P2, a: P2, b: P2) -> f64 {
    // parameter along a->b where the line p->q crosses it
    let d = sub(q, p);
    let e = sub(b, a);
    let denom = cross(d, e);
    if denom.abs() < 1e-300 {
        return 0.5;
    }
    (cross(d, sub(p, a)) / denom).clamp(0.0, 1.0)
}

fn angle2(u: P2, v: P2) -> f64 {
    cross(u, v).abs().atan2(u[0] * v[0] + u[1] * v[1])
}

fn unfold(g: &SteinerGraph, faces: &[usize], edges: &[[usize; 2]]) -> Vec<Placed> {
    let mut placed = Vec::with_capacity(faces.len());
    placed.push(place_first(g, faces[0]));
    for (j, e) in edges.iter().enumerate() {
        let next = place_next(g, &placed[j], faces[j + 1], e[0], e[1]);
        placed.push(next);
    }
    placed
}

const START: usize = usize::MAX - 1;
const END: usize = usize::MAX;

fn build_portals(placed: &[Placed], edges: &[[usize; 2]], start: P2, end: P2) -> Vec<Portal> {
    let mut portals = Vec::with_capacity(edges.len() + 2);
    portals.push(Portal { left: start, right: start, left_id: START, right_id: START });
    for (j, e) in edges.iter().enumerate() {
        let (a, b) = (placed[j].at(e[0]), placed[j].at(e[1]));
        let behind = placed[j].pts[placed[j].opposite(e[0], e[1])];
        // a traveller coming from `behind` sees `a` on its left when a, b, behind turn clockwise
        if cross(sub(b, a), sub(behind, a)) < 0.0 {
            portals.push(Portal { left: a, right: b, left_id: e[0], right_id: e[1] });
        } else {
            portals.push(Portal { left: b, right: a, left_id: e[1], right_id: e[0] });
        }
    }
    portals.push(Portal { left: end, right: end, left_id: END, right_id: END });
    portals
}

/// Mesh vertex sitting at a funnel corner taken from portal `idx`.
fn corner_vertex(portals: &[Portal], p: P2, idx: usize) -> Option<usize> {
    if idx == 0 || idx == portals.len() - 1 {
        return None;
    }
    let portal = &portals[idx];
    Some(if len2(p, portal.left) <= len2(p, portal.right) { portal.left_id } else { portal.right_id })
}

/// Total angle around an interior vertex; `None` on a boundary.
fn vertex_total_angle(g: &SteinerGraph, v: usize) -> Option<f64> {
    let mut total = 0.0;
    for &f in g.vertex_faces(v) {
        let t = g.triangles[f as usize].map(|x| x as usize);
        for &w in t.iter().filter(|&&w| w != v) {
            let e = g.edge_id(v, w)?;
            if g.edge_faces[e].contains(&NO_NODE) {
                return None;
            }
        }
        total += face_angle_at(g, f as usize, v);
    }
    Some(total)
}

fn third(g: &SteinerGraph, f: usize, v: usize, w: usize) -> usize {
    g.triangles[f].iter().map(|&x| x as usize).find(|&x| x != v && x != w).unwrap()
}

/// If the path wraps around the corner vertex at portal `idx` on a side
/// where going round the other way is shorter, returns the corridor with
/// the fan around that vertex replaced by the opposite fan.
fn flip_at_corner(
    g: &SteinerGraph,
    faces: &[usize],
    edges: &[[usize; 2]],
    placed: &[Placed],
    corners: &[(P2, usize)],
    ci: usize,
    v: usize,
) -> Option<(Vec<usize>, Vec<[usize; 2]>)> {
    let idx = corners[ci].1;
    let contains = |f: usize| g.triangles[f].contains(&(v as u32));
    let (mut a, mut b) = (idx - 1, idx);
    while a > 0 && contains(faces[a - 1]) {
        a -= 1;
    }
    while b + 1 < faces.len() && contains(faces[b + 1]) {
        b += 1;
    }
    let shared = |k: usize| if edges[k][0] == v { edges[k][1] } else { edges[k][0] };
    let first_rim = third(g, faces[a], v, shared(a));
    let last_rim = third(g, faces[b], v, shared(b - 1));
    let mut rim: Vec<P2> = vec![placed[a].at(first_rim)];
    for k in a..b {
        rim.push(placed[k].at(shared(k)));
    }
    rim.push(placed[b].at(last_rim));
    let centre = placed[a].at(v);
    let dirs: Vec<P2> = rim.iter().map(|&p| sub(p, centre)).collect();
    let mut cum = vec![0.0];
    for w in dirs.windows(2) {
        cum.push(cum.last().unwrap() + angle2(w[0], w[1]));
    }
    let theta = |d: P2| {
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..dirs.len() - 1 {
            let wedge = cum[i + 1] - cum[i];
            let miss = (angle2(dirs[i], d) + angle2(d, dirs[i + 1]) - wedge).abs();
            if miss < best.0 {
                best = (miss, cum[i] + angle2(dirs[i], d));
            }
        }
        best.1
    };
    let before = sub(corners[ci - 1].0, centre);
    let after = sub(corners[ci + 1].0, centre);
    let inside = (theta(after) - theta(before)).abs();
    let total = vertex_total_angle(g, v)?;
    if total - inside >= PI - 1e-9 {
        return None;
    }
    let (fan_faces, fan_portals) = fan_walk_from(g, v, faces[a], first_rim, faces[b])?;
    let mut new_faces = faces[..=a].to_vec();
    new_faces.extend(fan_faces);
    new_faces.extend_from_slice(&faces[b + 1..]);
    let mut new_edges = edges[..a].to_vec();
    new_edges.extend(fan_portals);
    new_edges.extend_from_slice(&edges[b..]);
    Some((new_faces, new_edges))
}

/// Drops leading faces before the last one containing the start node and
/// trailing faces after the first one containing the end node; a straight
/// segment leaving a point never crosses an edge through that point.
fn trim_ends(g: &SteinerGraph, faces: &mut Vec<usize>, edges: &mut Vec<[usize; 2]>, first: usize, last: usize) {
    let start_faces = g.node_faces(first);
    if let Some(i) = faces.iter().rposition(|f| start_faces.contains(f)) {
        let end_faces = g.node_faces(last);
        if faces[i..].iter().any(|f| end_faces.contains(f)) {
            faces.drain(..i);
            edges.drain(..i);
        }
    }
    let end_faces = g.node_faces(last);
    if let Some(j) = faces.iter().position(|f| end_faces.contains(f)) {
        faces.truncate(j + 1);
        edges.truncate(j);
    }
}

/// Shortens the graph path `nodes` to a locally shortest path on the mesh.
///
/// The path is first pulled taut inside the strip of faces it visits. Then,
/// wherever it wraps around a vertex whose angle on the far side is below π,
/// the strip is rerouted round that side and the path is pulled taut again.
/// Returns `None` when the strip cannot be formed (for instance a fan walk
/// runs into a boundary edge); callers then keep the graph path.
pub fn straighten_path(g: &SteinerGraph, nodes: &[usize]) -> Option<GeodesicResult> {
    let first = *nodes.first()?;
    let last = *nodes.last()?;
    if nodes.len() == 1 {
        return Some(GeodesicResult {
            distance: 0.0,
            path: vec![g.position(first).to_vec()],
            exact: false,
        });
    }
    let (mut faces, mut edges) = corridor(g, nodes)?;
    trim_ends(g, &mut faces, &mut edges, first, last);
    let limit = 4 * faces.len() + 100;
    let mut rounds = 0;
    let (placed, portals, corners) = loop {
        let placed = unfold(g, &faces, &edges);
        let start = node_in_face(g, &placed[0], first);
        let end = node_in_face(g, placed.last().unwrap(), last);
        let portals = build_portals(&placed, &edges, start, end);
        let corners = funnel(&portals);
        rounds += 1;
        if rounds > limit {
            break (placed, portals, corners);
        }
        let flipped = (1..corners.len() - 1).find_map(|ci| {
            let v = corner_vertex(&portals, corners[ci].0, corners[ci].1)?;
            flip_at_corner(g, &faces, &edges, &placed, &corners, ci, v)
        });
        match flipped {
            Some((f, e)) => {
                faces = f;
                edges = e;
                trim_ends(g, &mut faces, &mut edges, first, last);
            }
            None => break (placed, portals, corners),
        }
    };
    let _ = placed;
    let distance: f64 = corners.windows(2).map(|w| len2(w[0].0, w[1].0)).sum();
    if !distance.is_finite() {
        return None;
    }

    // Lift to the embedding: corners are portal endpoints (mesh vertices) or
    // the path ends; add the crossing point on every portal in between.
    let corner_point = |(p, idx): (P2, usize)| -> Vec<f64> {
        match corner_vertex(&portals, p, idx) {
            Some(v) => g.position(v).to_vec(),
            None if idx == 0 => g.position(first).to_vec(),
            None => g.position(last).to_vec(),
        }
    };
    let mut path = Vec::new();
    for w in corners.windows(2) {
        let ((p, pi), (q, qi)) = (w[0], w[1]);
        path.push(corner_point(w[0]));
        // the funnel can repeat a corner; nothing is crossed in between
        if len2(p, q) == 0.0 {
            continue;
        }
        for portal in portals.iter().take(qi).skip(pi + 1) {
            let t = segment_param(p, q, portal.left, portal.right);
            path.push(geom::lerp(g.position(portal.left_id), g.position(portal.right_id), t));
        }
    }
    path.push(corner_point(*corners.last().unwrap()));
    Some(GeodesicResult { distance, path, exact: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::steiner::trace_path;
    use crate::surfaces::{mesh_cone, mesh_simplex_boundary, mesh_sphere};

    fn polyline_len(path: &[Vec<f64>]) -> f64 {
        path.windows(2).map(|w| geom::dist(&w[0], &w[1])).sum()
    }

    #[test]
    fn flat_strip_becomes_straight() {
        // 4x1 strip of unit squares, diagonals all one way
        let mut coords = Vec::new();
        for i in 0..5 {
            for j in 0..2 {
                coords.extend([i as f64, j as f64, 0.0]);
            }
        }
        let id = |i: usize, j: usize| i * 2 + j;
        let mut tris = Vec::new();
        for i in 0..4 {
            tris.push([id(i, 0), id(i + 1, 0), id(i + 1, 1)]);
            tris.push([id(i, 0), id(i + 1, 1), id(i, 1)]);
        }
        let g = SteinerGraph::from_parts(3, &coords, &tris, 1);
        let (_, pred) = g.shortest_path_tree(id(0, 0));
        let nodes = trace_path(&pred, id(0, 0), id(4, 1));
        let s = straighten_path(&g, &nodes).unwrap();
        let exact = 17f64.sqrt();
        assert!((s.distance - exact).abs() < 1e-12, "{}", s.distance);
        assert!((polyline_len(&s.path) - s.distance).abs() < 1e-9);
    }

    #[test]
    fn never_longer_than_graph_path() {
        let s = mesh_sphere(1.0, 3).unwrap();
        let g = super::super::build_steiner_graph(&s, 2).unwrap();
        let (dist, pred) = g.shortest_path_tree(0);
        for target in [3usize, 17, 100, 400, 641] {
            let nodes = trace_path(&pred, 0, target);
            let st = straighten_path(&g, &nodes).unwrap();
            let euclid = geom::dist(s.vertex(0), s.vertex(target));
            assert!(st.distance <= dist[target] + 1e-12);
            assert!(st.distance >= euclid - 1e-12);
            assert!((polyline_len(&st.path) - st.distance).abs() < 1e-9);
        }
    }

    #[test]
    fn tetrahedron_centroids_unfold_exactly() {
        // facet centroids of the regular tetrahedron are vertices when 3 | (subdivisions + 1)
        let mesh = mesh_simplex_boundary(2, 5).unwrap();
        let find = |target: [f64; 4]| {
            mesh.vertices()
                .position(|p| p.iter().zip(target).all(|(a, b)| (a - b).abs() < 1e-12))
                .unwrap()
        };
        let third = 1.0 / 3.0;
        let p = find([0.0, third, third, third]);
        let q = find([third, 0.0, third, third]);
        let g = super::super::build_steiner_graph(&mesh, 3).unwrap();
        let (_, pred) = g.shortest_path_tree(p);
        let st = straighten_path(&g, &trace_path(&pred, p, q)).unwrap();
        assert!((st.distance - 2.0 / 6f64.sqrt()).abs() < 1e-12, "{}", st.distance);
    }

    #[test]
    fn cone_path_through_apex_region() {
        let mesh = mesh_cone(0.2, 32).unwrap();
        let g = super::super::build_steiner_graph(&mesh, 3).unwrap();
        let (dist, pred) = g.shortest_path_tree(1);
        for target in [17usize, 40, 200] {
            let st = straighten_path(&g, &trace_path(&pred, 1, target)).unwrap();
            assert!(st.distance <= dist[target] + 1e-12);
            assert!((polyline_len(&st.path) - st.distance).abs() < 1e-9);
        }
    }
}
