//! Linear sum assignment with error correction (LSAPE): rows may be
//! substituted or deleted, columns substituted or inserted.
//!
//! The instance is solved exactly by expanding it to a square
//! `(n + m) x (n + m)` assignment problem and running the Hungarian method
//! with potentials.

use crate::error::{GedError, Result};
use crate::model::NodeMap;

/// `(n+1) x (m+1)` cost matrix. Entry `(i, k)` with `i < n`, `k < m` is a
/// substitution, column `m` holds deletion costs, row `n` insertion costs,
/// and the corner `(n, m)` is always 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCostMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl ExtendedCostMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExtendedCostMatrix { rows, cols, entries: vec![0.0; (rows + 1) * (cols + 1)] }
    }

    /// Builds the matrix from row-major `(n+1) x (m+1)` entries; the corner
    /// is forced to 0.
    pub fn from_entries(rows: usize, cols: usize, mut entries: Vec<f64>) -> Result<Self> {
        if entries.len() != (rows + 1) * (cols + 1) {
            return Err(GedError::InvalidParameter(format!(
                "expected {} entries for a {}x{} instance, got {}",
                (rows + 1) * (cols + 1),
                rows,
                cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(GedError::InvalidParameter(format!("non-finite LSAPE entry {bad}")));
        }
        entries[rows * (cols + 1) + cols] = 0.0;
        Ok(ExtendedCostMatrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity((rows + 1) * (cols + 1));
        for i in 0..=rows {
            for k in 0..=cols {
                entries.push(f(i, k));
            }
        }
        Self::from_entries(rows, cols, entries)
    }

    /// Number of real rows `n`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of real columns `m`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.entries[i * (self.cols + 1) + k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Sum of the entries selected by a node map.
    pub fn objective(&self, map: &NodeMap) -> f64 {
        let forward: f64 = map
            .forward()
            .iter()
            .enumerate()
            .map(|(i, t)| self.get(i, t.unwrap_or(self.cols)))
            .sum();
        let inserted: f64 = map
            .backward()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(k, _)| self.get(self.rows, k))
            .sum();
        forward + inserted
    }
}

/// Optimal assignment and its objective value.
#[derive(Debug, Clone)]
pub struct LsapeSolution {
    pub map: NodeMap,
    pub objective: f64,
}

/// Solves the instance exactly. Ties are broken deterministically.
pub fn lsape_solve(c: &ExtendedCostMatrix) -> LsapeSolution {
    let (n, m) = (c.rows, c.cols);
    let size = n + m;
    if size == 0 {
        return LsapeSolution { map: NodeMap::all_deleted(0, 0), objective: 0.0 };
    }
    let forbidden = 1.0 + 2.0 * c.entries.iter().map(|v| v.abs()).sum::<f64>();
    let cost = |r: usize, col: usize| -> f64 {
        match (r < n, col < m) {
            (true, true) => c.get(r, col),
            (true, false) if col - m == r => c.get(r, m),
            (false, true) if r - n == col => c.get(n, col),
            (false, false) => 0.0,
            _ => forbidden,
        }
    };
    let row_of_col = hungarian(size, cost);
    let mut forward = vec![None; n];
    for (col, &row) in row_of_col.iter().enumerate() {
        if row < n && col < m {
            forward[row] = Some(col);
        }
    }
    let map = NodeMap::from_forward(forward, m).expect("hungarian yields a matching");
    let objective = c.objective(&map);
    LsapeSolution { map, objective }
}

/// Shortest augmenting path Hungarian method on a dense square matrix.
/// Returns the row assigned to every column.
fn hungarian(size: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based internally; index 0 is the virtual root
    let mut u = vec![0.0; size + 1];
    let mut v = vec![0.0; size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for row in 1..=size {
        p[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=size {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=size).map(|j| p[j] - 1).collect()
}

/// Largest `n + m` accepted by [`lsape_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 10;

/// Exhaustive minimum over all feasible assignments, for verification.
pub fn lsape_bruteforce(c: &ExtendedCostMatrix) -> Result<LsapeSolution> {
    let (n, m) = (c.rows, c.cols);
    if n + m > BRUTEFORCE_LIMIT {
        return Err(GedError::SizeGuard(format!(
            "brute-force LSAPE limited to n + m <= {BRUTEFORCE_LIMIT}, got {n} + {m}"
        )));
    }
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    let mut forward = vec![None; n];
    let mut used = vec![false; m];
    fn recurse(
        c: &ExtendedCostMatrix,
        row: usize,
        forward: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        best: &mut Option<(f64, Vec<Option<usize>>)>,
    ) {
        let (n, m) = (c.rows, c.cols);
        if row == n {
            let mut total: f64 = forward.iter().enumerate().map(|(i, t)| c.get(i, t.unwrap_or(m))).sum();
            total += (0..m).filter(|&k| !used[k]).map(|k| c.get(n, k)).sum::<f64>();
            if best.as_ref().is_none_or(|(b, _)| total < *b) {
                *best = Some((total, forward.clone()));
            }
            return;
        }
        forward[row] = None;
        recurse(c, row + 1, forward, used, best);
        for k in 0..m {
            if !used[k] {
                used[k] = true;
                forward[row] = Some(k);
                recurse(c, row + 1, forward, used, best);
                used[k] = false;
            }
        }
        forward[row] = None;
    }
    recurse(c, 0, &mut forward, &mut used, &mut best);
    let (objective, forward) = best.expect("at least one feasible assignment");
    let map = NodeMap::from_forward(forward, m)?;
    Ok(LsapeSolution { map, objective })
}
