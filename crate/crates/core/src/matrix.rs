//! Dense matrices over a finite field.
//!
//! Entries are stored as raw canonical values with the field kept once per
//! matrix. Desk-scale inputs are small enough that dense exact
//! elimination is the simplest thing that is easy to verify.

use crate::error::{Error, Result};
use crate::gf::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from raw canonical values, validating every entry.
    pub fn from_rows(field: Field, rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let cols = rows[0].len();
        let q = field.q();
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            for &v in row {
                if v >= q {
                    return Err(Error::NotCanonical { value: v, q });
                }
                data.push(v);
            }
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.q());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// self * rhs^T is often what code membership needs; this is the plain
    /// product self * rhs.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::MixedFields);
        }
        if self.cols != rhs.rows {
            return Err(Error::LengthMismatch { expected: self.cols, got: rhs.rows });
        }
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, f.add_raw(cur, f.mul_raw(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Row vector times self: v * M.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: v.len() });
        }
        let f = self.field;
        let mut out = vec![0u64; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for c in 0..self.cols {
                let a = self.get(i, c);
                if a != 0 {
                    out[c] = f.add_raw(out[c], f.mul_raw(vi, a));
                }
            }
        }
        Ok(out)
    }

    /// In-place reduced row echelon form without column swaps.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv_raw(self.get(r, c)).expect("pivot nonzero");
            if inv != 1 {
                for j in 0..self.cols {
                    let v = self.get(r, j);
                    self.set(r, j, f.mul_raw(v, inv));
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(i, j);
                    let s = f.mul_raw(factor, self.get(r, j));
                    self.set(i, j, f.sub_raw(v, s));
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// A basis of the right nullspace, one vector per row of the result;
    /// returns `None` when the nullspace is trivial.
    pub fn nullspace(&self) -> Option<Matrix> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        if rank == self.cols {
            return None;
        }
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut rows = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (ri, &p) in pivots.iter().enumerate() {
                // pivot coordinate = -entry of rref at (ri, free)
                v[p] = f.neg_raw(m.get(ri, free));
            }
            rows.push(v);
        }
        Some(Matrix::from_rows(f, rows).expect("nullspace rows are canonical"))
    }

    /// Solves x * self = target exactly, if a solution exists.
    pub fn solve_left(&self, target: &[u64]) -> Result<Option<Vec<u64>>> {
        if target.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: target.len() });
        }
        // Row-reduce [self | I] to read combinations off the identity part.
        let f = self.field;
        let aug_cols = self.cols + self.rows;
        let mut aug = Matrix::zero(f, self.rows, aug_cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols + r, 1);
        }
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| aug.get(i, c) != 0) else {
                continue;
            };
            aug.swap_rows(r, p);
            let inv = f.inv_raw(aug.get(r, c)).expect("pivot nonzero");
            for j in 0..aug_cols {
                let v = aug.get(r, j);
                aug.set(r, j, f.mul_raw(v, inv));
            }
            for i in 0..self.rows {
                if i != r && aug.get(i, c) != 0 {
                    let factor = aug.get(i, c);
                    for j in 0..aug_cols {
                        let v = aug.get(i, j);
                        let s = f.mul_raw(factor, aug.get(r, j));
                        aug.set(i, j, f.sub_raw(v, s));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        // Express target in the reduced rows, then translate back.
        let mut residual = target.to_vec();
        let mut combo = vec![0u64; self.rows];
        for (ri, &p) in pivots.iter().enumerate() {
            let coeff = residual[p];
            if coeff == 0 {
                continue;
            }
            for c in 0..self.cols {
                let v = aug.get(ri, c);
                if v != 0 {
                    residual[c] = f.sub_raw(residual[c], f.mul_raw(coeff, v));
                }
            }
            for k in 0..self.rows {
                let t = aug.get(ri, self.cols + k);
                if t != 0 {
                    combo[k] = f.add_raw(combo[k], f.mul_raw(coeff, t));
                }
            }
        }
        if residual.iter().any(|&v| v != 0) {
            return Ok(None);
        }
        Ok(Some(combo))
    }
}
