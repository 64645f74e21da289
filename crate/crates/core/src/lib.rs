//! Nonparametric Bayesian binary classification on graphs.
//!
//! The latent function is expanded in the low-frequency eigenvectors of the
//! graph Laplacian `L = D - A`, with a random truncation level `k` sampled by
//! reversible-jump MCMC and a probit link handled by data augmentation.

pub mod error;
pub mod experiments;
pub mod graph;
pub mod matrix;
pub mod model;
pub mod sampler;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{laplacian, Graph, SparseSymMatrix};
pub use matrix::Matrix;
pub use model::{Hyperparams, ProposalSpec};
pub use sampler::{
    run_baseline_full, run_chain, summarize, Exhaustion, LabelData, McmcConfig, PosteriorSummary,
    Trace,
};
pub use spectral::{BasisSource, EigenOptions, SpectralBasis};
