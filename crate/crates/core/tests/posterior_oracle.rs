//! Whole-chain check on a 6-vertex path with two observed labels. The exact
//! posterior mean of `Phi(f_j)` reduces to Gaussian orthant probabilities
//! summed over `k` and integrated over `c` by quadrature.

use std::f64::consts::PI;

use graphrj::model::{log_prior_k, tau, ProposalSpec};
use graphrj::sampler::{run_chain, summarize, Exhaustion, LabelData, McmcConfig};
use graphrj::spectral::path_eigenpairs;
use graphrj::Hyperparams;

/// Covariance of `z = f + eps` given `(k, c)`.
fn z_cov(k: usize, c: f64, q: f64) -> Vec<Vec<f64>> {
    let b = path_eigenpairs(6, 6).unwrap();
    let mut s = vec![vec![0.0; 6]; 6];
    for (i, row) in s.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for m in 0..k {
        let u = b.eigenvector(m);
        let var = 1.0 / (c * tau(b.eigenvalue(m), 6, q));
        for i in 0..6 {
            for j in 0..6 {
                s[i][j] += var * u[i] * u[j];
            }
        }
    }
    s
}

fn corr(s: &[Vec<f64>], i: usize, j: usize, si: f64, sj: f64) -> f64 {
    si * sj * s[i][j] / (s[i][i] * s[j][j]).sqrt()
}

fn orthant2(r: f64) -> f64 {
    0.25 + r.asin() / (2.0 * PI)
}

fn orthant3(r12: f64, r13: f64, r23: f64) -> f64 {
    0.125 + (r12.asin() + r13.asin() + r23.asin()) / (4.0 * PI)
}

#[test]
fn chain_matches_exact_posterior_mean() {
    let (q, gamma, a, b) = (2.0, 0.5, 2.0, 1.0);
    let (va, ya, vb, yb) = (0usize, 1u8, 5usize, 0u8);
    let (sa, sb) = (2.0 * f64::from(ya) - 1.0, 2.0 * f64::from(yb) - 1.0);

    // Integrate over log c with the Gamma(a, b) prior.
    let grid: Vec<f64> = (0..=6000)
        .map(|i| -20.0 + 32.0 * i as f64 / 6000.0)
        .collect();
    let h = grid[1] - grid[0];
    let mut evidence = 0.0;
    let mut joint = [0.0; 6];
    for k in 1..=6 {
        let pk = log_prior_k(k, gamma, 6).exp();
        for (gi, &s) in grid.iter().enumerate() {
            let c: f64 = s.exp();
            let w = if gi == 0 || gi == grid.len() - 1 {
                0.5
            } else {
                1.0
            };
            // c^a e^{-bc} is the Gamma density times the Jacobian dc = c ds, up to a constant.
            let prior_c = (a * s - b * c).exp();
            let cov = z_cov(k, c, q);
            let rab = corr(&cov, va, vb, sa, sb);
            let py = orthant2(rab);
            let weight = w * h * pk * prior_c;
            evidence += weight * py;
            for j in 0..6 {
                if j == va || j == vb {
                    continue;
                }
                // The query latent has its own noise, so its variance is that of f_j plus one.
                let r_ja = corr(&cov, j, va, 1.0, sa);
                let r_jb = corr(&cov, j, vb, 1.0, sb);
                joint[j] += weight * orthant3(rab, r_ja, r_jb);
            }
        }
    }

    let basis = path_eigenpairs(6, 6).unwrap();
    let data = LabelData::new(6, &[(va, ya), (vb, yb)]).unwrap();
    let hyper = Hyperparams::new(q, gamma, a, b, ProposalSpec::default()).unwrap();
    let cfg = McmcConfig {
        iterations: 400_000,
        burnin: 10_000,
        thinning: 1,
        seed: 11,
    };
    let trace = run_chain(&data, &basis, &hyper, &cfg, Exhaustion::Reject).unwrap();
    let summary = summarize(&trace, 0.95).unwrap();
    for j in 1..5 {
        let exact = joint[j] / evidence;
        let est = summary.mean[j];
        println!("vertex {j}: exact {exact:.4}, chain {est:.4}");
        assert!(
            (exact - est).abs() < 0.01,
            "vertex {j}: exact {exact}, chain {est}"
        );
    }
}
