//! Small direct solvers: banded Gaussian elimination without pivoting and a
//! dense partial-pivot LU used as a fallback.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Pivots smaller than this times the row's infinity norm are rejected.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Square matrix with `lower` sub-diagonals and `upper` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    size: usize,
    lower: usize,
    upper: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(size: usize, lower: usize, upper: usize) -> Self {
        BandMatrix {
            size,
            lower,
            upper,
            data: vec![0.0; size * (lower + upper + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper && i < self.size && j < self.size
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.lower + self.upper + 1) + (j + self.lower - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) is outside the band");
        let k = self.slot(i, j);
        self.data[k] = value;
    }

    fn row_norm(&self, i: usize) -> f64 {
        let lo = i.saturating_sub(self.lower);
        let hi = (i + self.upper).min(self.size - 1);
        (lo..=hi).map(|j| self.get(i, j).abs()).fold(0.0, f64::max)
    }

    /// Solves `A x = rhs` by elimination in natural order. Fill-in stays
    /// inside the band because no rows are exchanged.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.size;
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for k in 0..n {
            let pivot = a.get(k, k);
            if !(pivot.abs() >= PIVOT_RTOL * a.row_norm(k)) || pivot == 0.0 {
                return Err(Error::SingularSystem { row: k });
            }
            let last_row = (k + self.lower).min(n - 1);
            let last_col = (k + self.upper).min(n - 1);
            for i in k + 1..=last_row {
                let factor = a.get(i, k) / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in k..=last_col {
                    let v = a.get(i, j) - factor * a.get(k, j);
                    a.set(i, j, v);
                }
                b[i] -= factor * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let last_col = (i + self.upper).min(n - 1);
            let mut s = b[i];
            for j in i + 1..=last_col {
                s -= a.get(i, j) * x[j];
            }
            x[i] = s / a.get(i, i);
        }
        Ok(x)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Dense LU with partial pivoting. `a` is row-major, consumed.
pub fn dense_solve(mut a: Vec<Vec<f64>>, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.len(),
        });
    }
    let mut b = rhs.to_vec();
    let scale: Vec<f64> = a
        .iter()
        .map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap_or(k);
        if p != k {
            a.swap(p, k);
            b.swap(p, k);
        }
        let pivot = a[k][k];
        let norm = scale.iter().fold(0.0f64, |m, &v| m.max(v));
        if pivot == 0.0 || !(pivot.abs() >= PIVOT_RTOL * norm) {
            return Err(Error::SingularSystem { row: k });
        }
        for i in k + 1..n {
            let factor = a[i][k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= factor * a[k][j];
            }
            b[i] -= factor * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Ok(x)
}
