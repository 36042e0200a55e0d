//! OFF mesh files.
//!
//! Three-dimensional meshes use the plain `OFF` header. Higher-dimensional
//! embeddings use the header line `nOFF <dim>` followed by the same counts,
//! vertex and face layout.

use std::fmt::Write as _;
use std::io::{self, Write};

use super::TriMesh;

pub fn to_off_string(mesh: &TriMesh) -> String {
    let mut s = String::new();
    if mesh.dim() == 3 {
        s.push_str("OFF\n");
    } else {
        let _ = writeln!(s, "nOFF {}", mesh.dim());
    }
    let _ = writeln!(s, "{} {} 0", mesh.vertex_count(), mesh.triangles().len());
    for p in mesh.vertices() {
        let line: Vec<String> = p.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    s
}

pub fn write_off<W: Write>(mesh: &TriMesh, mut out: W) -> io::Result<()> {
    out.write_all(to_off_string(mesh).as_bytes())
}

/// Parses an OFF / `nOFF <dim>` file of triangles. The result carries no
/// genus information (0) and no parameter coordinates.
pub fn parse_off(text: &str) -> Result<TriMesh, String> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or("empty file")?;
    let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["OFF"] => 3,
        ["nOFF", d] => d.parse::<usize>().map_err(|e| format!("bad dimension: {e}"))?,
        _ => return Err(format!("unrecognised header {header:?}")),
    };
    let counts: Vec<usize> = lines
        .next()
        .ok_or("missing counts line")?
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| format!("bad count: {e}")))
        .collect::<Result<_, _>>()?;
    let (nv, nf) = match counts.as_slice() {
        [v, f, ..] => (*v, *f),
        _ => return Err("counts line needs vertex and face counts".into()),
    };
    let mut coords = Vec::with_capacity(nv * dim);
    for _ in 0..nv {
        let vals: Vec<f64> = lines
            .next()
            .ok_or("truncated vertex list")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| format!("bad coordinate: {e}")))
            .collect::<Result<_, _>>()?;
        if vals.len() != dim {
            return Err(format!("vertex has {} coordinates, expected {dim}", vals.len()));
        }
        coords.extend(vals);
    }
    let mut tris = Vec::with_capacity(nf);
    for _ in 0..nf {
        let vals: Vec<usize> = lines
            .next()
            .ok_or("truncated face list")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| format!("bad index: {e}")))
            .collect::<Result<_, _>>()?;
        match vals.as_slice() {
            [3, a, b, c] => tris.push([*a, *b, *c]),
            _ => return Err("only triangular faces are supported".into()),
        }
    }
    Ok(TriMesh::new(dim, coords, tris, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{mesh_simplex_boundary, mesh_sphere};

    #[test]
    fn headers_follow_dimension() {
        let s = to_off_string(&mesh_sphere(1.0, 1).unwrap());
        assert!(s.starts_with("OFF\n42 80 0\n"));
        let t = to_off_string(&mesh_simplex_boundary(2, 0).unwrap());
        assert!(t.starts_with("nOFF 4\n4 4 0\n"));
        assert!(t.lines().nth(2).unwrap().split_whitespace().count() == 4);
        assert!(t.lines().last().unwrap().starts_with("3 "));
    }

    #[test]
    fn round_trip_preserves_geometry() {
        for mesh in [mesh_sphere(1.0, 2).unwrap(), mesh_simplex_boundary(2, 2).unwrap()] {
            let back = parse_off(&to_off_string(&mesh)).unwrap();
            assert_eq!(back.coords(), mesh.coords());
            assert_eq!(back.triangles(), mesh.triangles());
        }
    }
}
