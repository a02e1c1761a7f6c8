//! Accuracy measures: off-diagonal error of a diagonalizing unitary, and the
//! eigenvalue relative error under the best matching of two spectra.

use crate::error::{Error, Result};
use crate::matrix::{ComplexDense, C64};

/// Optimal row-to-column assignment of a square cost matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentResult {
    /// `permutation[i]` is the column assigned to row `i`.
    pub permutation: Vec<usize>,
    pub total_cost: f64,
}

/// `||offdiag(U^* A U)||_F`.
pub fn offdiag_error(a: &ComplexDense, u: &ComplexDense) -> Result<f64> {
    similarity(a, u)?.offdiag_norm()
}

/// `U^* A U`.
pub fn similarity(a: &ComplexDense, u: &ComplexDense) -> Result<ComplexDense> {
    a.square_dim("similarity")?;
    u.square_dim("similarity")?;
    if a.rows() != u.rows() {
        return Err(Error::DimensionMismatch {
            op: "similarity",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: u.rows(),
            right_cols: u.cols(),
        });
    }
    u.adjoint_matmul(&a.matmul(u)?)
}

/// Minimum-cost perfect matching on a dense square cost matrix.
///
/// Shortest augmenting paths with row/column potentials (the
/// Jonker-Volgenant form of the Hungarian method), `O(n^3)`.
pub fn hungarian(cost: &[Vec<f64>]) -> Result<AssignmentResult> {
    let n = cost.len();
    if let Some((i, row)) = cost.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::invalid(format!(
            "hungarian: cost matrix is not square (row {i} has {} entries, expected {n})",
            row.len()
        )));
    }
    if cost.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::invalid(
            "hungarian: cost matrix has non-finite entries",
        ));
    }
    if n == 0 {
        return Ok(AssignmentResult {
            permutation: Vec::new(),
            total_cost: 0.0,
        });
    }

    // 1-based internally; column 0 is the virtual source.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut min_slack = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];

    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0;
        min_slack.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            let crow = &cost[i0 - 1];
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = crow[j - 1] - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut permutation = vec![0; n];
    for j in 1..=n {
        permutation[row_of_col[j] - 1] = j - 1;
    }
    let total_cost = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();
    Ok(AssignmentResult {
        permutation,
        total_cost,
    })
}

/// `||d1 - P d2||_2 / ||d1||_2` for the permutation `P` minimizing the numerator.
pub fn eig_relative_error(d1: &[C64], d2: &[C64]) -> Result<f64> {
    if d1.len() != d2.len() {
        return Err(Error::DimensionMismatch {
            op: "eig_relative_error",
            left_rows: d1.len(),
            left_cols: 1,
            right_rows: d2.len(),
            right_cols: 1,
        });
    }
    if d1.is_empty() {
        return Err(Error::invalid("eig_relative_error: empty spectra"));
    }
    let ref_norm = d1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if ref_norm == 0.0 {
        return Err(Error::invalid(
            "eig_relative_error: reference spectrum is identically zero",
        ));
    }
    let cost: Vec<Vec<f64>> = d1
        .iter()
        .map(|a| d2.iter().map(|b| (a - b).norm_sqr()).collect())
        .collect();
    let assignment = hungarian(&cost)?;
    let matched = assignment
        .permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| (d1[i] - d2[j]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    debug_assert!(
        (matched * matched - assignment.total_cost).abs()
            <= 1e-12 * assignment.total_cost.max(f64::MIN_POSITIVE)
    );
    Ok(matched / ref_norm)
}

/// Mean, population standard deviation and extremes of a sample, as in the
/// benchmark tables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let count = values.len();
        let mean = values.iter().sum::<f64>() / count as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
        Some(Self {
            count,
            mean,
            std: var.sqrt(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

/// Value at quantile `q` in `[0, 1]` by linear interpolation between order statistics.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}
