//! The two-scale matrix `A` and the pair enumeration it is indexed by.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance on `Σ b_ℓ = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Flat 1-based index of the pair `(i1, i2)`, `1 <= i1 < i2 <= m`:
/// `(2m − i1)(i1 − 1)/2 + i2 − i1`.
pub fn pair_to_flat(i1: usize, i2: usize, m: usize) -> Result<usize> {
    if i1 == 0 || i1 >= i2 || i2 > m {
        return Err(Error::BadPair { i1, i2, m });
    }
    Ok((2 * m - i1) * (i1 - 1) / 2 + i2 - i1)
}

/// Inverse of [`pair_to_flat`].
pub fn flat_to_pair(index: usize, m: usize) -> Result<(usize, usize)> {
    let n = m * m.saturating_sub(1) / 2;
    if index == 0 || index > n {
        return Err(Error::BadPair {
            i1: index,
            i2: 0,
            m,
        });
    }
    let mut start = 0;
    for i1 in 1..m {
        let row = m - i1;
        if index <= start + row {
            return Ok((i1, i1 + index - start));
        }
        start += row;
    }
    unreachable!("index bounded by m(m-1)/2")
}

pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// `(n+1) × m` matrix with first row `(sqrt b_ℓ)` and, for each pair
/// `(i1, i2)`, a row holding `sqrt b_{i2}` at column `i1` and `−sqrt b_{i1}`
/// at column `i2`. It satisfies `AᵀA = I_m`.
pub fn build_matrix_a(b: &[f64]) -> Result<DMatrix<f64>> {
    let m = b.len();
    if m == 0 {
        return Err(Error::BadWeights("need at least one weight".into()));
    }
    if let Some(w) = b.iter().find(|w| !w.is_finite() || **w <= 0.0) {
        return Err(Error::BadWeights(format!("weight {w} is not positive")));
    }
    let sum: f64 = b.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::BadWeights(format!("weights sum to {sum}, not 1")));
    }
    let roots: Vec<f64> = b.iter().map(|w| w.sqrt()).collect();
    let mut a = DMatrix::zeros(pair_count(m) + 1, m);
    for (l, r) in roots.iter().enumerate() {
        a[(0, l)] = *r;
    }
    let mut row = 1;
    for i1 in 0..m {
        for i2 in i1 + 1..m {
            a[(row, i1)] = roots[i2];
            a[(row, i2)] = -roots[i1];
            row += 1;
        }
    }
    Ok(a)
}
