//! Minimal dense linear algebra: LU with partial pivoting.
//!
//! The systems assembled in this crate are tiny (at most a few hundred
//! unknowns for the scaling study, around a dozen otherwise), so a plain
//! row-major LU is all that is needed.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is singular (pivot {pivot:.3e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("dimension mismatch: matrix is {rows}x{cols}, rhs has length {rhs}")]
    Shape {
        rows: usize,
        cols: usize,
        rhs: usize,
    },
}

/// Dense row-major matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged rows");
            m.data[i * n_cols..(i + 1) * n_cols].copy_from_slice(row);
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] += v;
    }
}

/// Solves `a x = b` in place via LU with partial pivoting.
///
/// `a` is consumed as scratch space. Fails when a pivot falls below an
/// absolute floor scaled by the largest entry of the matrix.
pub fn lu_solve(mut a: DenseMatrix, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let n = a.n_rows();
    if a.n_cols() != n || b.len() != n {
        return Err(LinalgError::Shape {
            rows: a.n_rows,
            cols: a.n_cols,
            rhs: b.len(),
        });
    }
    let scale = a.data.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let mut x = b.to_vec();
    for k in 0..n {
        // pivot selection
        let mut p = k;
        let mut best = a.get(k, k).abs();
        for i in k + 1..n {
            let v = a.get(i, k).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= scale * 1e-300 {
            return Err(LinalgError::Singular {
                step: k,
                pivot: best,
            });
        }
        if p != k {
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(p, j));
                a.set(p, j, t);
            }
            x.swap(k, p);
        }
        let inv = 1.0 / a.get(k, k);
        for i in k + 1..n {
            let f = a.get(i, k) * inv;
            if f == 0.0 {
                continue;
            }
            a.set(i, k, 0.0);
            for j in k + 1..n {
                let v = a.get(i, j) - f * a.get(k, j);
                a.set(i, j, v);
            }
            x[i] -= f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            s -= a.get(i, j) * xj;
        }
        x[i] = s / a.get(i, i);
    }
    Ok(x)
}

/// Determinant via LU with partial pivoting; 1.0 for the empty matrix.
pub fn determinant(mut a: DenseMatrix) -> f64 {
    let n = a.n_rows();
    assert_eq!(a.n_cols(), n, "determinant needs a square matrix");
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = a.get(k, k).abs();
        for i in k + 1..n {
            let v = a.get(i, k).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k {
            det = -det;
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(p, j));
                a.set(p, j, t);
            }
        }
        let pivot = a.get(k, k);
        det *= pivot;
        let inv = 1.0 / pivot;
        for i in k + 1..n {
            let f = a.get(i, k) * inv;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                let v = a.get(i, j) - f * a.get(k, j);
                a.set(i, j, v);
            }
        }
    }
    det
}
