//! Small dense phase-one simplex for feasibility of `A λ = b, λ ≥ 0`.
//!
//! Bland's rule guarantees termination; intended for tiny instances only.

use crate::error::{LabError, Result};

/// Feasibility slack on the phase-one objective.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Largest row count accepted.
pub const MAX_ROWS: usize = 17;

const PIVOT_TOL: f64 = 1e-12;

/// Returns a feasible `λ` if `A λ = b, λ ≥ 0` has a solution within the slack.
pub fn find_feasible(a: &[Vec<f64>], b: &[f64]) -> Result<Option<Vec<f64>>> {
    let m = a.len();
    if m != b.len() {
        return Err(LabError::InvalidArgument("row count mismatch".into()));
    }
    if m > MAX_ROWS {
        return Err(LabError::DimensionTooLarge {
            dim: m - 1,
            max: MAX_ROWS - 1,
        });
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(LabError::InvalidArgument("ragged constraint matrix".into()));
    }
    // Columns: n structural, m artificial, then the right-hand side.
    let cols = n + m + 1;
    let mut t = vec![vec![0.0; cols]; m + 1];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sign * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][cols - 1] = sign * b[i];
    }
    // Objective row holds reduced costs of minimizing the artificial sum.
    for i in 0..m {
        for j in 0..cols {
            if j < n || j == cols - 1 {
                t[m][j] -= t[i][j];
            }
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let max_iter = 50 * (n + m + 1);
    for _ in 0..max_iter {
        let entering = (0..n + m).find(|&j| t[m][j] < -PIVOT_TOL);
        let Some(q) = entering else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][q] > PIVOT_TOL {
                let ratio = t[i][cols - 1] / t[i][q];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best)) => {
                        if ratio < best - 1e-15
                            || ((ratio - best).abs() <= 1e-15 && basis[i] < basis[r])
                        {
                            Some((i, ratio))
                        } else {
                            Some((r, best))
                        }
                    }
                };
            }
        }
        let Some((p, _)) = leave else { break };
        pivot(&mut t, p, q);
        basis[p] = q;
    }
    let residual = -t[m][cols - 1];
    if residual > FEASIBILITY_SLACK {
        return Ok(None);
    }
    let mut x = vec![0.0; n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][cols - 1].max(0.0);
        }
    }
    Ok(Some(x))
}

fn pivot(t: &mut [Vec<f64>], p: usize, q: usize) {
    let piv = t[p][q];
    for v in t[p].iter_mut() {
        *v /= piv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != p {
            let f = row[q];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= f * pv;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_combination_of_opposites_is_feasible() {
        // λ0 (1,0) + λ1 (-1,0) = 0, λ0 + λ1 = 1
        let a = vec![vec![1.0, -1.0], vec![0.0, 0.0], vec![1.0, 1.0]];
        let x = find_feasible(&a, &[0.0, 0.0, 1.0]).unwrap().unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn orthant_generators_are_infeasible() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert!(find_feasible(&a, &[0.0, 0.0, 1.0]).unwrap().is_none());
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        let a = vec![vec![1.0, 2.0]];
        let x = find_feasible(&a, &[-1.0]).unwrap();
        assert!(x.is_none());
        let a = vec![vec![-1.0, 2.0]];
        let x = find_feasible(&a, &[-1.0]).unwrap().unwrap();
        assert!((-x[0] + 2.0 * x[1] + 1.0).abs() < 1e-12);
    }
}
