//! Minimal sparse-operator support for fast, matrix-free application of
//! generator terms.
//!
//! The operators that appear in the master equation (collective and
//! single-site raising/lowering operators, truncated-mode ladder operators)
//! have at most a handful of nonzeros per column, so representing them as
//! triplet lists and applying them by row/column accumulation is far cheaper
//! than dense matrix products. These types are crate-internal; the public
//! surface exposes only abstract linear maps.

use std::collections::HashMap;

use ndarray::{Array1, Array2};

use crate::C64;

/// Drop threshold for products of sparse operators: entries whose magnitude
/// falls below this times the largest magnitude are discarded as roundoff.
const PRODUCT_DROP_TOL: f64 = 1e-15;

/// Sparse matrix in triplet form, stored twice (sorted by row and by
/// column) so that both left- and right-multiplication stream through the
/// dense operand contiguously.
#[derive(Clone, Debug)]
pub(crate) struct SparseOp {
    pub dim: usize,
    /// (row, col, value), sorted by row then col.
    by_row: Vec<(u32, u32, C64)>,
    /// (row, col, value), sorted by col then row.
    by_col: Vec<(u32, u32, C64)>,
}

impl SparseOp {
    pub fn from_triplets(dim: usize, mut triplets: Vec<(u32, u32, C64)>) -> Self {
        triplets.retain(|&(_, _, v)| v != C64::new(0.0, 0.0));
        let mut by_row = triplets.clone();
        by_row.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut by_col = triplets;
        by_col.sort_unstable_by_key(|&(r, c, _)| (c, r));
        SparseOp { dim, by_row, by_col }
    }

    pub fn from_dense(m: &Array2<C64>) -> Self {
        let dim = m.nrows();
        assert_eq!(dim, m.ncols(), "sparse conversion requires a square matrix");
        let mut triplets = Vec::new();
        for ((i, j), &v) in m.indexed_iter() {
            if v != C64::new(0.0, 0.0) {
                triplets.push((i as u32, j as u32, v));
            }
        }
        SparseOp::from_triplets(dim, triplets)
    }

    #[cfg(test)]
    pub fn nnz(&self) -> usize {
        self.by_row.len()
    }

    pub fn adjoint(&self) -> Self {
        let triplets = self
            .by_row
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        SparseOp::from_triplets(self.dim, triplets)
    }

    /// self · other, dropping roundoff-scale entries.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut acc: HashMap<(u32, u32), C64> = HashMap::new();
        // (i,k,u) · (k,j,w): walk self by column and other by row, joining on k.
        // Both lists are small; a hash accumulation is plenty.
        let mut other_rows: HashMap<u32, Vec<(u32, C64)>> = HashMap::new();
        for &(k, j, w) in &other.by_row {
            other_rows.entry(k).or_default().push((j, w));
        }
        for &(i, k, u) in &self.by_row {
            if let Some(row) = other_rows.get(&k) {
                for &(j, w) in row {
                    *acc.entry((i, j)).or_insert(C64::new(0.0, 0.0)) += u * w;
                }
            }
        }
        let max_mag = acc
            .values()
            .map(|v| v.norm())
            .fold(0.0_f64, f64::max);
        let triplets = acc
            .into_iter()
            .filter(|(_, v)| v.norm() > PRODUCT_DROP_TOL * max_mag)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        SparseOp::from_triplets(self.dim, triplets)
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut out = Array2::zeros((self.dim, self.dim));
        for &(r, c, v) in &self.by_row {
            out[(r as usize, c as usize)] += v;
        }
        out
    }

    /// out += alpha · (self · rho). `rho` and `out` must be square,
    /// standard-layout, of the operator's dimension.
    pub fn left_mul_acc(&self, alpha: C64, rho: &Array2<C64>, out: &mut Array2<C64>) {
        let d = self.dim;
        let rs = rho.as_slice().expect("standard layout");
        let os = out.as_slice_mut().expect("standard layout");
        for &(r, k, v) in &self.by_row {
            let a = alpha * v;
            let src = &rs[(k as usize) * d..(k as usize + 1) * d];
            let dst = &mut os[(r as usize) * d..(r as usize + 1) * d];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += a * s;
            }
        }
    }

    /// out += alpha · (rho · self).
    pub fn right_mul_acc(&self, alpha: C64, rho: &Array2<C64>, out: &mut Array2<C64>) {
        let d = self.dim;
        let rs = rho.as_slice().expect("standard layout");
        let os = out.as_slice_mut().expect("standard layout");
        for &(k, c, v) in &self.by_col {
            let a = alpha * v;
            let (k, c) = (k as usize, c as usize);
            for i in 0..d {
                os[i * d + c] += a * rs[i * d + k];
            }
        }
    }

    /// self · v for a vector.
    pub fn apply_vec(&self, v: &Array1<C64>) -> Array1<C64> {
        let mut out = Array1::zeros(self.dim);
        for &(r, c, w) in &self.by_row {
            out[r as usize] += w * v[c as usize];
        }
        out
    }

    /// A cheap upper bound on the spectral norm: max(row 1-norm, col 1-norm).
    pub fn norm_bound(&self) -> f64 {
        let mut row_sums = vec![0.0_f64; self.dim];
        let mut col_sums = vec![0.0_f64; self.dim];
        for &(r, c, v) in &self.by_row {
            row_sums[r as usize] += v.norm();
            col_sums[c as usize] += v.norm();
        }
        let rmax = row_sums.iter().cloned().fold(0.0, f64::max);
        let cmax = col_sums.iter().cloned().fold(0.0, f64::max);
        rmax.min(cmax).max(rmax.max(cmax).sqrt() * rmax.min(cmax).sqrt())
    }
}
