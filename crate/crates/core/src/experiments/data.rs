//! Simulated ground truth, label draws and train/test masking.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sampler::{probit, LabelData};
use crate::spectral::{path_eigenpairs, SpectralBasis};

/// Series weights `w_1 = 0`, `w_k = sqrt(n) (k-1)^{-3/2} sin(k-1)`.
pub fn truth_weights(n: usize) -> Vec<f64> {
    let scale = (n as f64).sqrt();
    (0..n)
        .map(|i| {
            if i == 0 {
                0.0
            } else {
                let j = i as f64;
                scale * j.powf(-1.5) * j.sin()
            }
        })
        .collect()
}

/// `f0 = sum_k w_k u_k` over every eigenvector in `basis`.
pub fn truth_from_basis(basis: &SpectralBasis) -> Vec<f64> {
    let mut w = truth_weights(basis.n());
    w.truncate(basis.m());
    basis.synthesize(&w)
}

/// Ground truth on the path graph of `n` vertices.
pub fn gen_path_truth(n: usize) -> Result<Vec<f64>> {
    Ok(truth_from_basis(&path_eigenpairs(n, n)?))
}

/// Independent labels with `P(y_i = 1) = Phi(f0_i)`.
pub fn gen_labels<R: Rng + ?Sized>(f0: &[f64], rng: &mut R) -> Vec<u8> {
    f0.iter()
        .map(|&f| u8::from(rng.random::<f64>() < probit(f)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskedLabels {
    pub data: LabelData,
    /// Vertices whose labels were withheld, increasing.
    pub hidden: Vec<usize>,
}

/// Keeps a uniformly random subset of `round(observe_frac * n)` labels.
pub fn mask_labels<R: Rng + ?Sized>(
    labels: &[u8],
    observe_frac: f64,
    rng: &mut R,
) -> Result<MaskedLabels> {
    if !(observe_frac > 0.0 && observe_frac <= 1.0) {
        return Err(Error::invalid(format!(
            "observed fraction {observe_frac} not in (0, 1]"
        )));
    }
    let n = labels.len();
    let keep = (observe_frac * n as f64).round() as usize;
    let mut observed = vec![false; n];
    for v in index::sample(rng, n, keep.min(n)) {
        observed[v] = true;
    }
    let pairs: Vec<(usize, u8)> = (0..n)
        .filter(|&v| observed[v])
        .map(|v| (v, labels[v]))
        .collect();
    Ok(MaskedLabels {
        data: LabelData::new(n, &pairs)?,
        hidden: (0..n).filter(|&v| !observed[v]).collect(),
    })
}
