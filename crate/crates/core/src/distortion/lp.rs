//! Dense two-phase simplex method for small linear programs in equality form.

const EPS: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64, basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side
    a: Vec<Vec<f64>>,
    /// objective row (reduced costs), last entry is −value
    obj: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col];
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for (v, pv) in r.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = self.obj[col];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Minimises over the columns in `allowed`; Dantzig's rule, switching to
    /// Bland's rule after many non-improving steps.
    fn run(&mut self, allowed: usize) -> Result<(), ()> {
        let rhs = self.a.first().map_or(0, |r| r.len() - 1);
        let mut stalls = 0usize;
        let mut last = f64::INFINITY;
        for _ in 0..50_000 {
            let bland = stalls > 50;
            let entering = if bland {
                (0..allowed).find(|&j| self.obj[j] < -EPS)
            } else {
                (0..allowed).filter(|&j| self.obj[j] < -EPS).min_by(|&i, &j| self.obj[i].total_cmp(&self.obj[j]))
            };
            let Some(col) = entering else { return Ok(()) };
            let mut leave: Option<(usize, f64)> = None;
            for (i, r) in self.a.iter().enumerate() {
                if r[col] > EPS {
                    let ratio = r[rhs] / r[col];
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - EPS || (ratio <= lr + EPS && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else { return Err(()) };
            self.pivot(row, col);
            let value = -self.obj[rhs];
            if value < last - EPS {
                stalls = 0;
                last = value;
            } else {
                stalls += 1;
            }
        }
        Ok(())
    }
}

/// Minimises `c·x` subject to `A x = b`, `x ≥ 0`.
pub fn minimize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    // phase one: artificial columns n..n+m, rows scaled so that b ≥ 0
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut r: Vec<f64> = a[i].iter().map(|v| s * v).collect();
        r.extend((0..m).map(|j| if j == i { 1.0 } else { 0.0 }));
        r.push(s * b[i]);
        rows.push(r);
    }
    let mut obj = vec![0.0; n + m + 1];
    for r in &rows {
        for j in 0..n {
            obj[j] -= r[j];
        }
        obj[n + m] -= r[n + m];
    }
    let mut t = Tableau { a: rows, obj, basis: (n..n + m).collect() };
    if t.run(n).is_err() || -t.obj[n + m] > 1e-9 {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis where possible
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t.a[i][j].abs() > 1e-9) {
                t.pivot(i, j);
            }
        }
    }
    // phase two
    let mut obj = vec![0.0; n + m + 1];
    obj[..n].copy_from_slice(c);
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n && c[bv] != 0.0 {
            let f = c[bv];
            for (v, rv) in obj.iter_mut().zip(&t.a[i]) {
                *v -= f * rv;
            }
        }
    }
    t.obj = obj;
    for j in n..n + m {
        t.obj[j] = 0.0;
    }
    if t.run(n).is_err() {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in t.basis.iter().enumerate() {
        if bv < n {
            x[bv] = t.a[i][n + m];
        }
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { x, value, basis: t.basis }
}
