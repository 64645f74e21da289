//! Principal component projection.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Projects mean-centered rows of `x` onto the `dims` leading principal
/// directions. Each direction is signed so its largest-magnitude loading is
/// positive.
pub fn pca_project(x: &Matrix, dims: usize) -> Result<Matrix> {
    let (n, d) = (x.rows(), x.cols());
    if dims == 0 || dims > n.min(d) {
        return Err(Error::invalid(format!(
            "cannot keep {dims} components of a {n}x{d} matrix"
        )));
    }
    let mut mean = vec![0.0; d];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered = Mat::<f64>::from_fn(n, d, |i, j| x.get(i, j) - mean[j]);
    let scatter = centered.transpose() * &centered;
    let evd = scatter
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::invalid(format!("covariance eigensolve failed: {e:?}")))?;
    let u = evd.U();
    let mut directions = Mat::<f64>::zeros(d, dims);
    for c in 0..dims {
        // eigenvalues come out ascending
        let src = d - 1 - c;
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for r in 0..d {
            let v = u[(r, src)];
            if v.abs() > best.abs() {
                best = v;
            }
        }
        if best < 0.0 {
            sign = -1.0;
        }
        for r in 0..d {
            directions[(r, c)] = sign * u[(r, src)];
        }
    }
    let proj = &centered * &directions;
    let data = (0..n)
        .flat_map(|i| (0..dims).map(move |j| (i, j)))
        .map(|(i, j)| proj[(i, j)])
        .collect();
    Matrix::from_row_major(n, dims, data)
}
