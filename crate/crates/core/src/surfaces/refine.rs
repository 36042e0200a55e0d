use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use super::{validate_mesh, MeshError, TriMesh};

/// Vertices reachable from `seeds` in at most `hops` mesh-edge steps.
pub fn vertex_ring(mesh: &TriMesh, seeds: &[usize], hops: usize) -> HashSet<usize> {
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in mesh.edges() {
        adjacency.entry(e[0]).or_default().push(e[1]);
        adjacency.entry(e[1]).or_default().push(e[0]);
    }
    let mut seen: HashSet<usize> = seeds.iter().copied().collect();
    let mut frontier: Vec<usize> = seeds.to_vec();
    for _ in 0..hops {
        let mut next = Vec::new();
        for v in frontier {
            for &w in adjacency.get(&v).into_iter().flatten() {
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn wrapped_mid(a: f64, b: f64) -> f64 {
    let mut d = b - a;
    if d > PI {
        d -= 2.0 * PI;
    } else if d < -PI {
        d += 2.0 * PI;
    }
    (a + 0.5 * d).rem_euclid(2.0 * PI)
}

/// Splits every triangle within `rings` triangle rings of the seed vertices
/// 1-to-4 at edge midpoints, closing the refined patch conformingly.
///
/// Triangles left with two split edges are split fully; those with one split
/// edge are bisected. Midpoints are not projected back onto any smooth
/// surface, so the polyhedral geometry is unchanged. Existing vertex indices
/// are preserved; new vertices are appended.
pub fn refine_near(mesh: &TriMesh, seeds: &[usize], rings: usize) -> Result<TriMesh, MeshError> {
    let core = vertex_ring(mesh, seeds, rings.saturating_sub(1));
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut marked: HashSet<(usize, usize)> = HashSet::new();
    for t in mesh.triangles() {
        if t.iter().any(|v| core.contains(v)) {
            for i in 0..3 {
                marked.insert(key(t[i], t[(i + 1) % 3]));
            }
        }
    }
    loop {
        let mut changed = false;
        for t in mesh.triangles() {
            let edges = [key(t[0], t[1]), key(t[1], t[2]), key(t[2], t[0])];
            let count = edges.iter().filter(|e| marked.contains(e)).count();
            if count == 2 {
                for e in edges {
                    changed |= marked.insert(e);
                }
            }
        }
        if !changed {
            break;
        }
    }

    let dim = mesh.dim();
    let mut coords = mesh.coords().to_vec();
    let mut params = mesh.param_coords().map(|p| p.to_vec());
    let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut sorted: Vec<_> = marked.iter().copied().collect();
    sorted.sort_unstable();
    for (a, b) in sorted {
        let id = coords.len() / dim;
        let (pa, pb) = (mesh.vertex(a), mesh.vertex(b));
        coords.extend(pa.iter().zip(pb).map(|(x, y)| 0.5 * (x + y)));
        if let Some(params) = params.as_mut() {
            let (ua, ub) = (params[a], params[b]);
            params.push([wrapped_mid(ua[0], ub[0]), wrapped_mid(ua[1], ub[1])]);
        }
        mids.insert((a, b), id);
    }

    let mut tris = Vec::with_capacity(mesh.triangles().len() + 3 * marked.len());
    for &[a, b, c] in mesh.triangles() {
        let m = |x: usize, y: usize| mids.get(&key(x, y)).copied();
        match (m(a, b), m(b, c), m(c, a)) {
            (Some(ab), Some(bc), Some(ca)) => {
                tris.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            (Some(ab), None, None) => tris.extend([[a, ab, c], [ab, b, c]]),
            (None, Some(bc), None) => tris.extend([[b, bc, a], [bc, c, a]]),
            (None, None, Some(ca)) => tris.extend([[c, ca, b], [ca, a, b]]),
            (None, None, None) => tris.push([a, b, c]),
            _ => unreachable!("closure leaves no triangle with two split edges"),
        }
    }
    let mut out = TriMesh::new(dim, coords, tris, mesh.expected_genus());
    if let Some(params) = params {
        out = out.with_param_coords(params);
    }
    validate_mesh(&out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{mesh_sphere, mesh_torus};

    #[test]
    fn local_refinement_stays_closed() {
        let s = mesh_sphere(1.0, 2).unwrap();
        let r = refine_near(&s, &[0, 5], 2).unwrap();
        assert!(r.vertex_count() > s.vertex_count());
        assert_eq!(r.euler_characteristic(), 2);
        assert_eq!(r.vertex(0), s.vertex(0));
        assert!(r.orbit_representatives().is_none());
    }

    #[test]
    fn refined_torus_keeps_params() {
        let t = mesh_torus(0.2, 16, 8).unwrap();
        let r = refine_near(&t, &[0], 2).unwrap();
        assert_eq!(r.euler_characteristic(), 0);
        let params = r.param_coords().unwrap();
        assert_eq!(params.len(), r.vertex_count());
        assert!(params.iter().all(|p| (0.0..2.0 * PI).contains(&p[0]) && (0.0..2.0 * PI).contains(&p[1])));
    }

    #[test]
    fn ring_growth() {
        let s = mesh_sphere(1.0, 2).unwrap();
        assert_eq!(vertex_ring(&s, &[0], 0).len(), 1);
        assert_eq!(vertex_ring(&s, &[0], 1).len(), 6);
    }
}
