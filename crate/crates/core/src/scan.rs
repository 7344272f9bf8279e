//! Sign-change scanning on a uniform grid followed by bisection.

use rayon::prelude::*;

use crate::error::Result;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ScanResult {
    /// Grid abscissae (`n + 1` points, or `n` when periodic).
    pub grid: Vec<f64>,
    /// Function values on `grid`.
    pub values: Vec<f64>,
    /// Located zeros in increasing order.
    pub roots: Vec<f64>,
}

impl ScanResult {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

/// Scans `f` over `[a, b]` with `n` cells. When `periodic`, `f(b) == f(a)` is
/// assumed and the cell `[t_{n-1}, b]` closes the loop, so a root at `b` is
/// reported as `a`.
///
/// A grid value that is exactly zero is reported as a root; a strict sign
/// change inside a cell is refined by bisection to [`BISECTION_TOL`].
pub fn scan_roots<F>(f: F, a: f64, b: f64, n: usize, periodic: bool) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    assert!(n >= 1 && b > a);
    let h = (b - a) / n as f64;
    let pts = if periodic { n } else { n + 1 };
    let grid: Vec<f64> = (0..pts).map(|i| a + h * i as f64).collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| f(t))
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(f64, f64, f64, f64)> = (0..n)
        .map(|i| {
            let (t0, v0) = (grid[i], values[i]);
            let (t1, v1) = if periodic && i + 1 == n {
                (b, values[0])
            } else {
                (grid[i + 1], values[i + 1])
            };
            (t0, v0, t1, v1)
        })
        .collect();

    let refined: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(t0, v0, t1, v1)| {
            if v0 != 0.0 && v1 != 0.0 && (v0 > 0.0) != (v1 > 0.0) {
                bisect(&f, t0, v0, t1).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    for (i, r) in refined.into_iter().enumerate() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
        }
        if let Some(r) = r {
            roots.push(r);
        }
    }
    if !periodic && values[n] == 0.0 {
        roots.push(grid[n]);
    }
    Ok(ScanResult {
        grid,
        values,
        roots,
    })
}

fn bisect<F>(f: &F, mut lo: f64, v_lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let lo_positive = v_lo > 0.0;
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
