//! Numerical frame bounds of a finite family on a finite-dimensional subspace.

use nalgebra::{DMatrix, SymmetricEigen};

use super::function::PwcFunction;
use crate::error::{Error, Result};

/// Relative eigenvalue floor below which a spanning family is treated as
/// linearly dependent.
pub const DEGENERACY_RATIO: f64 = 1e-10;

/// Optimal constants `A ≤ B` with `A‖f‖² ≤ Σ|⟨f, g⟩|² ≤ B‖f‖²` on the space.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    /// Whether both bounds are within `tol` of one.
    pub fn is_tight_parseval(&self, tol: f64) -> bool {
        (self.lower - 1.0).abs() <= tol && (self.upper - 1.0).abs() <= tol
    }
}

/// `G[i][j] = ⟨f_i, f_j⟩`.
///
/// # Panics
/// If the functions do not share a partition.
pub fn gram(functions: &[&PwcFunction]) -> DMatrix<f64> {
    let n = functions.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = functions[i]
                .inner(functions[j])
                .expect("gram matrix over a single partition");
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Frame bounds of `functions` on `span(space)`.
///
/// `space` must be linearly independent (it is orthonormalized through the
/// eigen-decomposition of its Gram matrix); otherwise `DegenerateSpan` is
/// returned. The family is assumed to lie in that span.
pub fn frame_bounds(functions: &[&PwcFunction], space: &[&PwcFunction]) -> Result<FrameBounds> {
    if space.is_empty() {
        return Ok(FrameBounds {
            lower: 0.0,
            upper: 0.0,
        });
    }
    let g = gram(space);
    let eig = SymmetricEigen::new(g);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if max.is_nan() || max <= 0.0 || min <= DEGENERACY_RATIO * max {
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        return Err(Error::DegenerateSpan { ratio });
    }
    let p = space.len();
    let mut c = DMatrix::zeros(functions.len(), p);
    for (i, f) in functions.iter().enumerate() {
        for (k, s) in space.iter().enumerate() {
            c[(i, k)] = f.inner(s)?;
        }
    }
    let mut scale = eig.eigenvectors.clone();
    for j in 0..p {
        let s = eig.eigenvalues[j].sqrt().recip();
        scale.column_mut(j).scale_mut(s);
    }
    let m = c * scale;
    let frame_op = m.transpose() * m;
    let values = SymmetricEigen::new(frame_op).eigenvalues;
    Ok(FrameBounds {
        lower: values.min(),
        upper: values.max(),
    })
}
