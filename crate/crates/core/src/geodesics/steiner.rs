use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::GeodesicResult;
use crate::geom;
use crate::surfaces::{validate_mesh, MeshError, TriMesh};

pub const NO_NODE: u32 = u32::MAX;

/// Where a graph node sits on the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeSite {
    Vertex(usize),
    /// On edge `edge` at fraction `t` from its first to its second endpoint.
    Edge { edge: usize, t: f64 },
}

/// Shortest-path graph over mesh vertices plus `k` evenly spaced points on
/// every edge. Any two nodes on the boundary of a common triangle are joined
/// by an arc weighted with their Euclidean distance.
///
/// Node ids: vertices keep their mesh index; the `t`-th Steiner point of edge
/// `e` is `V + e k + t`.
#[derive(Debug, Clone)]
pub struct SteinerGraph {
    dim: usize,
    k: usize,
    n_vertices: usize,
    positions: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    pub(crate) triangles: Vec<[u32; 3]>,
    pub(crate) edges: Vec<[u32; 2]>,
    pub(crate) edge_faces: Vec<[u32; 2]>,
    edge_lookup: HashMap<(u32, u32), u32>,
    vertex_face_offsets: Vec<usize>,
    vertex_faces: Vec<u32>,
}

/// Builds the Steiner graph of a validated mesh.
pub fn build_steiner_graph(mesh: &TriMesh, k: usize) -> Result<SteinerGraph, MeshError> {
    validate_mesh(mesh)?;
    Ok(SteinerGraph::from_parts(mesh.dim(), mesh.coords(), mesh.triangles(), k))
}

impl SteinerGraph {
    /// Builds the graph over an arbitrary triangle list. Edges may have one or
    /// two incident triangles (the systole cover is not closed).
    pub fn from_parts(dim: usize, coords: &[f64], triangles: &[[usize; 3]], k: usize) -> Self {
        let n_vertices = coords.len() / dim;
        let mut edge_lookup: HashMap<(u32, u32), u32> = HashMap::new();
        let mut edges: Vec<[u32; 2]> = Vec::new();
        let mut edge_faces: Vec<[u32; 2]> = Vec::new();
        let mut tri_edges: Vec<[u32; 3]> = Vec::with_capacity(triangles.len());
        let tris: Vec<[u32; 3]> = triangles.iter().map(|t| t.map(|v| v as u32)).collect();
        for (ti, t) in tris.iter().enumerate() {
            let mut te = [0u32; 3];
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *edge_lookup.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    edge_faces.push([NO_NODE, NO_NODE]);
                    (edges.len() - 1) as u32
                });
                let slot = &mut edge_faces[id as usize];
                if slot[0] == NO_NODE {
                    slot[0] = ti as u32;
                } else {
                    slot[1] = ti as u32;
                }
                te[i] = id;
            }
            tri_edges.push(te);
        }

        let n_nodes = n_vertices + k * edges.len();
        let mut positions = Vec::with_capacity(n_nodes * dim);
        positions.extend_from_slice(coords);
        for e in &edges {
            let (a, b) = (&coords[e[0] as usize * dim..][..dim], &coords[e[1] as usize * dim..][..dim]);
            for t in 0..k {
                positions.extend(geom::lerp(a, b, (t + 1) as f64 / (k + 1) as f64));
            }
        }
        let pos = |n: u32| &positions[n as usize * dim..(n as usize + 1) * dim];
        // Nodes of edge `e` in order from its first to its second endpoint.
        let edge_nodes = |e: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(k + 2);
            v.push(edges[e][0]);
            v.extend((0..k).map(|t| (n_vertices + e * k + t) as u32));
            v.push(edges[e][1]);
            v
        };

        let mut arcs: Vec<(u32, u32)> = Vec::new();
        for e in 0..edges.len() {
            let nodes = edge_nodes(e);
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    arcs.push((nodes[i], nodes[j]));
                }
            }
        }
        for (t, te) in tris.iter().zip(&tri_edges) {
            // Boundary nodes tagged with a bitmask of the triangle edges they lie on.
            let mut boundary: Vec<(u32, u8)> = Vec::with_capacity(3 + 3 * k);
            for i in 0..3 {
                // corner t[i] lies on edges i and i-1
                boundary.push((t[i], (1 << i) | (1 << ((i + 2) % 3))));
                let e = te[i] as usize;
                boundary.extend((0..k).map(|s| ((n_vertices + e * k + s) as u32, 1u8 << i)));
            }
            for i in 0..boundary.len() {
                for j in i + 1..boundary.len() {
                    if boundary[i].1 & boundary[j].1 == 0 {
                        arcs.push((boundary[i].0, boundary[j].0));
                    }
                }
            }
        }

        let mut degree = vec![0usize; n_nodes + 1];
        for &(a, b) in &arcs {
            degree[a as usize + 1] += 1;
            degree[b as usize + 1] += 1;
        }
        for i in 0..n_nodes {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * arcs.len()];
        let mut weights = vec![0f64; 2 * arcs.len()];
        for &(a, b) in &arcs {
            let w = geom::dist(pos(a), pos(b));
            for (x, y) in [(a, b), (b, a)] {
                let slot = fill[x as usize];
                targets[slot] = y;
                weights[slot] = w;
                fill[x as usize] += 1;
            }
        }

        let mut vertex_face_offsets = vec![0usize; n_vertices + 1];
        for t in &tris {
            for &v in t {
                vertex_face_offsets[v as usize + 1] += 1;
            }
        }
        for i in 0..n_vertices {
            vertex_face_offsets[i + 1] += vertex_face_offsets[i];
        }
        let mut vf_fill = vertex_face_offsets.clone();
        let mut vertex_faces = vec![0u32; vertex_face_offsets[n_vertices]];
        for (ti, t) in tris.iter().enumerate() {
            for &v in t {
                vertex_faces[vf_fill[v as usize]] = ti as u32;
                vf_fill[v as usize] += 1;
            }
        }

        SteinerGraph {
            dim,
            k,
            n_vertices,
            positions,
            offsets,
            targets,
            weights,
            triangles: tris,
            edges,
            edge_faces,
            edge_lookup,
            vertex_face_offsets,
            vertex_faces,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of undirected arcs.
    pub fn arc_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn position(&self, node: usize) -> &[f64] {
        &self.positions[node * self.dim..(node + 1) * self.dim]
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .zip(&self.weights[range])
            .map(|(&t, &w)| (t as usize, w))
    }

    pub fn site(&self, node: usize) -> NodeSite {
        if node < self.n_vertices {
            NodeSite::Vertex(node)
        } else {
            let rel = node - self.n_vertices;
            NodeSite::Edge {
                edge: rel / self.k,
                t: (rel % self.k + 1) as f64 / (self.k + 1) as f64,
            }
        }
    }

    pub(crate) fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_lookup
            .get(&((a.min(b)) as u32, (a.max(b)) as u32))
            .map(|&e| e as usize)
    }

    pub(crate) fn vertex_faces(&self, v: usize) -> &[u32] {
        &self.vertex_faces[self.vertex_face_offsets[v]..self.vertex_face_offsets[v + 1]]
    }

    /// Faces whose closure contains the node.
    pub(crate) fn node_faces(&self, node: usize) -> Vec<usize> {
        match self.site(node) {
            NodeSite::Vertex(v) => self.vertex_faces(v).iter().map(|&f| f as usize).collect(),
            NodeSite::Edge { edge, .. } => self.edge_faces[edge]
                .iter()
                .filter(|&&f| f != NO_NODE)
                .map(|&f| f as usize)
                .collect(),
        }
    }

    fn run(&self, src: usize, mut pred: Option<&mut [u32]>, stop_after: &[usize]) -> Vec<f64> {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut settled = vec![false; n];
        let mut remaining = stop_after.len();
        let mut is_target = vec![false; if remaining > 0 { n } else { 0 }];
        for &t in stop_after {
            is_target[t] = true;
        }
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(HeapEntry { dist: 0.0, node: src as u32 });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            let u = node as usize;
            if settled[u] {
                continue;
            }
            settled[u] = true;
            if !is_target.is_empty() && is_target[u] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            for slot in self.offsets[u]..self.offsets[u + 1] {
                let v = self.targets[slot] as usize;
                let nd = d + self.weights[slot];
                if nd < dist[v] {
                    dist[v] = nd;
                    if let Some(p) = pred.as_deref_mut() {
                        p[v] = node;
                    }
                    heap.push(HeapEntry { dist: nd, node: v as u32 });
                }
            }
        }
        dist
    }

    /// Graph distances from `src` to every node; unreachable nodes are `INFINITY`.
    pub fn single_source(&self, src: usize) -> Vec<f64> {
        self.run(src, None, &[])
    }

    /// Distances plus the predecessor of every reached node (`NO_NODE` for
    /// the source and unreachable nodes).
    pub fn shortest_path_tree(&self, src: usize) -> (Vec<f64>, Vec<u32>) {
        let mut pred = vec![NO_NODE; self.node_count()];
        let dist = self.run(src, Some(&mut pred), &[]);
        (dist, pred)
    }

    /// Like [`Self::shortest_path_tree`] but stops once every node in
    /// `targets` is settled; distances of other nodes may be tentative.
    pub fn shortest_path_tree_until(&self, src: usize, targets: &[usize]) -> (Vec<f64>, Vec<u32>) {
        let mut pred = vec![NO_NODE; self.node_count()];
        let dist = self.run(src, Some(&mut pred), targets);
        (dist, pred)
    }

    /// Shortest graph path between two nodes as a polyline of node positions.
    pub fn geodesic(&self, a: usize, b: usize) -> Option<GeodesicResult> {
        let (dist, pred) = self.shortest_path_tree_until(a, &[b]);
        if !dist[b].is_finite() {
            return None;
        }
        let nodes = trace_path(&pred, a, b);
        Some(GeodesicResult {
            distance: dist[b],
            path: nodes.iter().map(|&n| self.position(n).to_vec()).collect(),
            exact: false,
        })
    }
}

/// Node sequence from `src` to `dst` following predecessor links.
pub fn trace_path(pred: &[u32], src: usize, dst: usize) -> Vec<usize> {
    let mut out = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = pred[cur] as usize;
        out.push(cur);
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // min-heap on distance, ties by node id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{mesh_sphere, mesh_torus};

    fn flat_grid(n: usize) -> (Vec<f64>, Vec<[usize; 3]>) {
        // n x n unit squares on [0, n]^2
        let mut coords = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                coords.extend([i as f64, j as f64, 0.0]);
            }
        }
        let id = |i: usize, j: usize| i * (n + 1) + j;
        let mut tris = Vec::new();
        for i in 0..n {
            for j in 0..n {
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        (coords, tris)
    }

    #[test]
    fn k0_is_the_edge_graph() {
        let s = mesh_sphere(1.0, 1).unwrap();
        let g = build_steiner_graph(&s, 0).unwrap();
        assert_eq!(g.node_count(), s.vertex_count());
        assert_eq!(g.arc_count(), s.edges().len());
    }

    #[test]
    fn single_triangle_is_complete() {
        let coords = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        let g = SteinerGraph::from_parts(3, &coords, &[[0, 1, 2]], 1);
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.arc_count(), 15);
        for n in 0..6 {
            assert_eq!(g.neighbors(n).count(), 5);
        }
    }

    #[test]
    fn sphere_node_count() {
        let s = mesh_sphere(1.0, 3).unwrap();
        let g = build_steiner_graph(&s, 2).unwrap();
        assert_eq!(g.node_count(), s.vertex_count() + 2 * s.edges().len());
    }

    #[test]
    fn weights_symmetric_and_positive() {
        let t = mesh_torus(0.3, 12, 8).unwrap();
        let g = build_steiner_graph(&t, 2).unwrap();
        for u in 0..g.node_count() {
            for (v, w) in g.neighbors(u) {
                assert!(w > 0.0);
                assert!(g.neighbors(v).any(|(x, w2)| x == u && w2 == w));
            }
        }
    }

    #[test]
    fn basic_distances() {
        let (coords, tris) = flat_grid(2);
        let g = SteinerGraph::from_parts(3, &coords, &tris, 8);
        let d = g.single_source(0);
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 1.0).abs() < 1e-15);
        // opposite corners of the 2x2 grid: planar geodesic is the diagonal
        let far = 8;
        assert!((d[far] - 8f64.sqrt()).abs() / 8f64.sqrt() < 1e-12);
        // a unit cell diagonal that is not a mesh edge
        let (coords1, tris1) = flat_grid(1);
        let mut flipped = tris1.clone();
        flipped[0] = [0, 1, 3];
        flipped[1] = [0, 3, 2];
        let g1 = SteinerGraph::from_parts(3, &coords1, &flipped, 8);
        let d1 = g1.single_source(1)[2];
        assert!((d1 - 2f64.sqrt()).abs() / 2f64.sqrt() < 0.01, "{d1}");
    }

    #[test]
    fn two_by_two_grid_opposite_corners_k8() {
        // Diagonals run against the corner-to-corner direction.
        let mut coords = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                coords.extend([i as f64 * 0.5, j as f64 * 0.5, 0.0]);
            }
        }
        let id = |i: usize, j: usize| i * 3 + j;
        let mut tris = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                tris.push([id(i, j), id(i + 1, j), id(i, j + 1)]);
                tris.push([id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let g = SteinerGraph::from_parts(3, &coords, &tris, 8);
        let d = g.single_source(id(0, 0))[id(2, 2)];
        let exact = 2f64.sqrt();
        assert!(d >= exact - 1e-12 && (d - exact) / exact < 0.01, "{d}");
    }

    #[test]
    fn triangle_inequality_on_sphere() {
        let s = mesh_sphere(1.0, 2).unwrap();
        let g = build_steiner_graph(&s, 1).unwrap();
        let (d0, d5) = (g.single_source(0), g.single_source(5));
        for v in 0..g.node_count() {
            assert!(d0[v] <= d0[5] + d5[v] + 1e-12);
        }
    }

    #[test]
    fn disconnected_nodes_are_infinite() {
        let coords = [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 5.0, 5.0, 5.0, 6.0, 5.0, 5.0, 5.0, 6.0, 5.0];
        let g = SteinerGraph::from_parts(3, &coords, &[[0, 1, 2], [3, 4, 5]], 0);
        assert!(g.single_source(0)[4].is_infinite());
        assert!(g.geodesic(0, 4).is_none());
    }

    #[test]
    fn graph_path_matches_distance() {
        let s = mesh_sphere(1.0, 2).unwrap();
        let g = build_steiner_graph(&s, 2).unwrap();
        let res = g.geodesic(0, 3).unwrap();
        let len: f64 = res.path.windows(2).map(|w| geom::dist(&w[0], &w[1])).sum();
        assert!((len - res.distance).abs() < 1e-9);
        assert_eq!(res.path[0], s.vertex(0));
        assert_eq!(res.path.last().unwrap().as_slice(), s.vertex(3));
    }
}
