//! Small dense-linear-algebra helpers shared across modules.
//!
//! Complex eigenvector conventions differ between LAPACK wrappers depending
//! on how row-major buffers are handed to the Fortran routines: for a
//! Hermitian matrix the transposed buffer is the conjugate matrix, so the
//! returned vectors can come out conjugated. `eigh_pairs` normalizes this
//! by checking the eigen-residual of each vector against its conjugate and
//! keeping whichever actually satisfies A·v = λ·v.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};

use crate::{C64, Result};

fn eigen_residual(m: &Array2<C64>, v: &Array1<C64>, lambda: f64) -> f64 {
    let mv = m.dot(v);
    mv.iter()
        .zip(v.iter())
        .map(|(a, b)| (a - b * C64::new(lambda, 0.0)).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Kronecker product a ⊗ b with subsystem a most significant, matching the
/// row-major index convention of composite spaces.
pub(crate) fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let w = a[(i, j)];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = w * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix with verified eigenvectors,
/// eigenvalues ascending.
pub(crate) fn eigh_pairs(m: &Array2<C64>) -> Result<(Vec<f64>, Vec<Array1<C64>>)> {
    let (vals, vecs) = m.eigh(UPLO::Lower)?;
    let mut out = Vec::with_capacity(vals.len());
    for (k, &lambda) in vals.iter().enumerate() {
        let v: Array1<C64> = vecs.column(k).to_owned();
        let vc = v.mapv(|z| z.conj());
        let keep = if eigen_residual(m, &vc, lambda) < eigen_residual(m, &v, lambda) {
            vc
        } else {
            v
        };
        out.push(keep);
    }
    Ok((vals.to_vec(), out))
}
