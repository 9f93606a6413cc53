//! Exact minimum-cost assignment (Hungarian method with potentials), O(n³).

use super::EstimatorError;
use crate::tolerances::ASSIGNMENT_MAX;

/// Solves the square assignment problem for the row-major `n × n` matrix
/// `cost`. Returns `col[i]`, the column assigned to row `i`, and the total
/// cost.
pub fn hungarian(cost: &[f64], n: usize) -> Result<(Vec<usize>, f64), EstimatorError> {
    if n == 0 {
        return Err(EstimatorError::Empty);
    }
    if n > ASSIGNMENT_MAX {
        return Err(EstimatorError::TooLarge(n, ASSIGNMENT_MAX));
    }
    if cost.len() != n * n {
        return Err(EstimatorError::Mismatch(cost.len(), n * n));
    }
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![inf; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        minv.iter_mut().for_each(|x| *x = inf);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let row = &cost[(i0 - 1) * n..i0 * n];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = row[j - 1] - u[i0] - v[j];
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
            for j in 0..=n {
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
    let mut col = vec![0usize; n];
    for j in 1..=n {
        col[p[j] - 1] = j - 1;
    }
    let total = col.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum();
    Ok((col, total))
}

/// Minimum total cost only.
pub fn assignment_cost(cost: &[f64], n: usize) -> Result<f64, EstimatorError> {
    hungarian(cost, n).map(|(_, c)| c)
}
