//! Exact linear algebra over the field of [`ParamScalar`]s.
//!
//! Elimination with full pivoting. Pivots minimize the Markowitz count
//! `(row nonzeros - 1) * (column nonzeros - 1)`, then prefer column
//! singletons (which need no arithmetic at all), then small entries by
//! [`ParamScalar::size`]. Triangular and nearly triangular systems are thus
//! handled with no fill-in.

use thiserror::Error;

use crate::scalars::ParamScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular: rank {rank} < {unknowns} unknowns")]
    Singular { rank: usize, unknowns: usize },
    #[error("system is inconsistent in right-hand side {column}")]
    Inconsistent { column: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ParamScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ParamScalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<ParamScalar>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<ParamScalar>]) -> Result<Self, LinalgError> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(LinalgError::Dimension("ragged columns".into()));
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<ParamScalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    fn row_nonzeros(&self, i: usize) -> usize {
        (0..self.cols).filter(|&j| !self[(i, j)].is_zero()).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rhs = Matrix::zeros(self.rows, 0);
        eliminate(&mut m, &mut rhs, false).len()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = ParamScalar;
    fn index(&self, (i, j): (usize, usize)) -> &ParamScalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ParamScalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Elimination in place, applying the same row operations to `rhs`. Pivot
/// rows are not normalized. Returns the pivot columns; pivot `r` sits at
/// `(r, pivots[r])`. With `reduce_above` the pivot column is also cleared in
/// earlier pivot rows (Gauss-Jordan), so it ends up the only nonzero entry
/// of its column.
fn eliminate(m: &mut Matrix, rhs: &mut Matrix, reduce_above: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut free_cols: Vec<usize> = (0..m.cols).collect();
    let mut r = 0;
    while r < m.rows && !free_cols.is_empty() {
        let row_nnz: Vec<usize> = (r..m.rows).map(|i| m.row_nonzeros(i)).collect();
        let col_nnz = |j: usize| (r..m.rows).filter(|&i| !m[(i, j)].is_zero()).count();
        let col_counts: Vec<(usize, usize)> = free_cols.iter().map(|&j| (j, col_nnz(j))).collect();
        let mut best: Option<(usize, usize, (usize, usize, usize))> = None;
        for i in r..m.rows {
            for &(j, cnt) in &col_counts {
                let x = &m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let markowitz = (row_nnz[i - r] - 1) * (cnt - 1);
                let cost = (markowitz, cnt, x.size());
                if best.as_ref().is_none_or(|b| cost < b.2) {
                    best = Some((i, j, cost));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        m.swap_rows(r, pi);
        rhs.swap_rows(r, pi);
        let pivot = m[(r, pj)].clone();
        let first = if reduce_above { 0 } else { r + 1 };
        for i in first..m.rows {
            if i == r || m[(i, pj)].is_zero() {
                continue;
            }
            let factor = m[(i, pj)]
                .checked_div(&pivot)
                .expect("pivot is nonzero by selection");
            m[(i, pj)] = ParamScalar::zero();
            for j in 0..m.cols {
                if j != pj && !m[(r, j)].is_zero() {
                    m[(i, j)] = &m[(i, j)] - &(&factor * &m[(r, j)]);
                }
            }
            for j in 0..rhs.cols {
                if !rhs[(r, j)].is_zero() {
                    rhs[(i, j)] = &rhs[(i, j)] - &(&factor * &rhs[(r, j)]);
                }
            }
        }
        free_cols.retain(|&j| j != pj);
        pivots.push(pj);
        r += 1;
    }
    pivots
}

/// Solves `A X = B` for the unique `X`; `B` may hold several right-hand sides.
///
/// Rows that involve a single unknown not yet determined are solved by
/// substitution first; this settles (block) triangular systems without
/// forming any intermediate fill. Whatever remains goes through elimination.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    if a.rows != b.rows {
        return Err(LinalgError::Dimension(format!(
            "{} equations but {} right-hand-side rows",
            a.rows, b.rows
        )));
    }
    let mut x = Matrix::zeros(a.cols, b.cols);
    let mut known = vec![false; a.cols];
    let mut used = vec![false; a.rows];
    let residual = |x: &Matrix, i: usize, j: usize, known: &[bool]| {
        let mut acc = b[(i, j)].clone();
        for k in 0..a.cols {
            if known[k] && !a[(i, k)].is_zero() && !x[(k, j)].is_zero() {
                acc -= &(&a[(i, k)] * &x[(k, j)]);
            }
        }
        acc
    };
    loop {
        let next = (0..a.rows).filter(|&i| !used[i]).find_map(|i| {
            let mut unknown = (0..a.cols).filter(|&k| !known[k] && !a[(i, k)].is_zero());
            match (unknown.next(), unknown.next()) {
                (Some(k), None) => Some((i, k)),
                _ => None,
            }
        });
        let Some((i, k)) = next else { break };
        for j in 0..b.cols {
            let r = residual(&x, i, j, &known);
            if !r.is_zero() {
                x[(k, j)] = r.checked_div(&a[(i, k)]).expect("entry is nonzero");
            }
        }
        known[k] = true;
        used[i] = true;
    }
    if known.iter().all(|&k| k) {
        for i in (0..a.rows).filter(|&i| !used[i]) {
            if let Some(column) = (0..b.cols).find(|&j| !residual(&x, i, j, &known).is_zero()) {
                return Err(LinalgError::Inconsistent { column });
            }
        }
        return Ok(x);
    }
    solve_by_elimination(a, b)
}

fn solve_by_elimination(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    let mut m = a.clone();
    let mut rhs = b.clone();
    let pivots = eliminate(&mut m, &mut rhs, true);
    if pivots.len() < a.cols {
        return Err(LinalgError::Singular {
            rank: pivots.len(),
            unknowns: a.cols,
        });
    }
    for i in pivots.len()..a.rows {
        if let Some(column) = (0..rhs.cols).find(|&j| !rhs[(i, j)].is_zero()) {
            return Err(LinalgError::Inconsistent { column });
        }
    }
    let mut x = Matrix::zeros(a.cols, b.cols);
    for (r, &pj) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            if !rhs[(r, j)].is_zero() {
                x[(pj, j)] = rhs[(r, j)]
                    .checked_div(&m[(r, pj)])
                    .expect("pivot is nonzero");
            }
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ParamScalar {
        ParamScalar::from_int(n)
    }

    #[test]
    fn solves_symbolic_system() {
        let nu1 = ParamScalar::nu(1);
        let nu2 = ParamScalar::nu(2);
        // [[nu1, 1], [1, nu2]] x = [1, 0]
        let a = Matrix::from_rows(vec![vec![nu1.clone(), s(1)], vec![s(1), nu2.clone()]]).unwrap();
        let b = Matrix::from_rows(vec![vec![s(1)], vec![s(0)]]).unwrap();
        let x = solve(&a, &b).unwrap();
        let det = &(&nu1 * &nu2) - &s(1);
        assert_eq!(x[(0, 0)], nu2.checked_div(&det).unwrap());
        assert_eq!(x[(1, 0)], (-&s(1)).checked_div(&det).unwrap());
    }

    #[test]
    fn dense_and_triangular_paths_agree() {
        let nu = |j| ParamScalar::nu(j);
        let upper = Matrix::from_rows(vec![
            vec![nu(1), s(1), nu(3)],
            vec![s(0), nu(2), s(2)],
            vec![s(0), s(0), &nu(1) + &nu(2)],
        ])
        .unwrap();
        let dense = Matrix::from_rows(vec![
            vec![nu(1), s(1), nu(3)],
            vec![s(1), nu(2), s(2)],
            vec![nu(3), s(1), &nu(1) + &nu(2)],
        ])
        .unwrap();
        let b = Matrix::from_rows(vec![vec![s(1), nu(2)], vec![s(0), s(3)], vec![nu(3), s(1)]]).unwrap();
        for a in [upper, dense] {
            let x = solve(&a, &b).unwrap();
            assert_eq!(solve_by_elimination(&a, &b).unwrap(), x);
            for i in 0..3 {
                for j in 0..2 {
                    let lhs = (0..3).fold(ParamScalar::zero(), |acc, k| &acc + &(&a[(i, k)] * &x[(k, j)]));
                    assert_eq!(lhs, b[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn rank_and_errors() {
        let nu1 = ParamScalar::nu(1);
        let a = Matrix::from_rows(vec![
            vec![nu1.clone(), s(2)],
            vec![nu1.scale(&crate::scalars::int(3)), s(6)],
        ])
        .unwrap();
        assert_eq!(a.rank(), 1);
        let b = Matrix::from_rows(vec![vec![s(1)], vec![s(1)]]).unwrap();
        assert!(matches!(solve(&a, &b), Err(LinalgError::Singular { rank: 1, .. })));

        let tall = Matrix::from_rows(vec![vec![s(1)], vec![s(1)]]).unwrap();
        let rhs = Matrix::from_rows(vec![vec![s(1)], vec![s(2)]]).unwrap();
        assert!(matches!(solve(&tall, &rhs), Err(LinalgError::Inconsistent { column: 0 })));
    }
}
