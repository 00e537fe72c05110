//! A dense phase-1 simplex for small nonnegative equality systems.
//!
//! The fractional decomposition solver needs a definitive feasibility answer
//! when proportional scaling stalls, and the systems involved are tiny (one
//! row per edge, one column per clique), so a plain tableau is enough. Bland's
//! rule picks the pivots, which rules out cycling without any perturbation
//! machinery.

const PIVOT_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-8;
const MAX_ITERS: u64 = 100_000;

/// Finds a nonnegative solution of `rows * x = rhs`, or `None` when no such
/// solution exists. Every row must have the same length, which is also the
/// length of the returned vector. Rows with a negative right-hand side are
/// negated up front so the artificial starting basis is feasible.
pub(crate) fn solve_nonnegative(rows: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
    let m = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![0.0; cols]);
    }
    if cols == 0 {
        return rhs
            .iter()
            .all(|&b| b.abs() <= FEAS_EPS)
            .then(Vec::new);
    }

    // Tableau layout: structural columns, artificial identity, right-hand
    // side. The extra row at the bottom holds the phase-1 reduced costs with
    // its own right-hand cell storing minus the current objective.
    let width = cols + m + 1;
    let mut t = vec![vec![0.0f64; width]; m + 1];
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), cols, "ragged constraint row");
        let flip = if rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &a) in row.iter().enumerate() {
            t[i][j] = flip * a;
        }
        t[i][cols + i] = 1.0;
        t[i][width - 1] = flip * rhs[i];
    }
    let mut basis: Vec<usize> = (cols..cols + m).collect();
    for j in 0..width {
        let mut s = 0.0;
        for i in 0..m {
            s += t[i][j];
        }
        // Reduced cost of column j under the all-artificial basis: the
        // artificial columns start at zero, everything else at minus its
        // column sum.
        t[m][j] = if (cols..cols + m).contains(&j) {
            0.0
        } else {
            -s
        };
    }
    {
        let mut s = 0.0;
        for i in 0..m {
            s += t[i][width - 1];
        }
        t[m][width - 1] = -s;
    }

    for _ in 0..MAX_ITERS {
        // Bland: lowest-index column with a negative reduced cost enters.
        let Some(enter) = (0..cols + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > PIVOT_EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                let better = ratio < best - PIVOT_EPS
                    || (ratio < best + PIVOT_EPS
                        && leave.is_some_and(|l| basis[i] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        // Phase 1 is bounded below by zero, so a missing leaving row can
        // only be numerical noise; give up rather than loop.
        let r = leave?;
        let piv = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..=m {
            if i == r {
                continue;
            }
            let f = t[i][enter];
            if f == 0.0 {
                continue;
            }
            for j in 0..width {
                t[i][j] -= f * t[r][j];
            }
        }
        basis[r] = enter;
    }

    let objective = -t[m][width - 1];
    if objective > FEAS_EPS * (m as f64).max(1.0) {
        return None;
    }
    let mut x = vec![0.0f64; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            x[b] = t[i][width - 1].max(0.0);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::solve_nonnegative;

    fn residual(rows: &[Vec<f64>], rhs: &[f64], x: &[f64]) -> f64 {
        rows.iter()
            .zip(rhs)
            .map(|(row, &b)| {
                let s: f64 = row.iter().zip(x).map(|(&a, &v)| a * v).sum();
                (s - b).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn splits_a_unit_between_two_columns() {
        let rows = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let rhs = vec![1.0, 0.3];
        let x = solve_nonnegative(&rows, &rhs).unwrap();
        assert!((x[0] - 0.3).abs() < 1e-9);
        assert!((x[1] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn finds_solutions_pinned_to_the_boundary() {
        // The third row forces x1 = x3 = 0, so the only solution has a zero
        // coordinate that multiplicative methods can only approach.
        let rows = vec![
            vec![1.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
        ];
        let rhs = vec![1.0, 1.0, 0.0];
        let x = solve_nonnegative(&rows, &rhs).unwrap();
        assert!(residual(&rows, &rhs, &x) < 1e-9);
        assert!(x[0] < 1e-9);
        assert!((x[1] - 1.0).abs() < 1e-9);
        assert!(x[2] < 1e-9);
    }

    #[test]
    fn rejects_contradictory_rows() {
        let rows = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let rhs = vec![1.0, 2.0];
        assert!(solve_nonnegative(&rows, &rhs).is_none());
    }

    #[test]
    fn tolerates_redundant_rows() {
        let rows = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let rhs = vec![1.0, 1.0];
        let x = solve_nonnegative(&rows, &rhs).unwrap();
        assert!(residual(&rows, &rhs, &x) < 1e-9);
    }

    #[test]
    fn normalizes_negative_right_hand_sides() {
        let rows = vec![vec![-1.0, 0.0], vec![0.0, 1.0]];
        let rhs = vec![-0.25, 0.5];
        let x = solve_nonnegative(&rows, &rhs).unwrap();
        assert!((x[0] - 0.25).abs() < 1e-9);
        assert!((x[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rejects_a_negative_requirement_with_no_column() {
        let rows = vec![vec![1.0], vec![1.0]];
        let rhs = vec![1.0, 2.0];
        assert!(solve_nonnegative(&rows, &rhs).is_none());
    }
}
