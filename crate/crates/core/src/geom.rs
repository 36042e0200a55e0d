//! Small vector helpers over coordinate slices.
//!
//! Meshes live in R^3 or R^4, so most routines work on `&[f64]` of any length
//! rather than a fixed-size vector type.

pub type Vec3 = [f64; 3];

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + t (b - a)`
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Area of the triangle `abc` in any dimension (Gram determinant).
pub fn triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u = sub(b, a);
    let v = sub(c, a);
    let uu = dot(&u, &u);
    let vv = dot(&v, &v);
    let uv = dot(&u, &v);
    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
}

/// Interior angle at `a` of the triangle `abc`.
pub fn corner_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u = sub(b, a);
    let v = sub(c, a);
    let denom = norm(&u) * norm(&v);
    if denom == 0.0 {
        return 0.0;
    }
    (dot(&u, &v) / denom).clamp(-1.0, 1.0).acos()
}

#[inline]
pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn to3(p: &[f64]) -> Vec3 {
    [p[0], p[1], p[2]]
}

/// Solves the dense system `m x = rhs` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `1e-14` of the largest
/// row entry.
pub fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[row][j] -= f * m[col][j];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|j| m[row][j] * x[j]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_triangle_area_in_r4() {
        let a = [0.0, 0.0, 0.0, 1.0];
        let b = [3.0, 0.0, 0.0, 1.0];
        let c = [0.0, 4.0, 0.0, 1.0];
        assert!((triangle_area(&a, &b, &c) - 6.0).abs() < 1e-14);
        assert!((corner_angle(&a, &b, &c) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn solve_small_system() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_dense(m, vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }
}
