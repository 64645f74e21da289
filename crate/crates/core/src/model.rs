//! Hierarchical prior and the integrated likelihood used by the
//! reversible-jump step.
//!
//! The model is
//!
//! ```text
//! y_i = 1{z_i > 0},          z | f ~ N(f, I),
//! f = sum_{i<=k} g_i u_i,    g | k, c ~ N(0, (c (Lambda_k + n^-2 I)^q)^-1),
//! P(k = l) ∝ exp(-gamma l),  p(c) ∝ c^(a-1) exp(-b c).
//! ```
//!
//! All densities are handled on the log scale.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

/// Random-walk proposal on the truncation level: `k' = k + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalSpec {
    offsets: Vec<i64>,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ProposalSpec {
    pub fn new(offsets: Vec<i64>, probabilities: Vec<f64>) -> Result<Self> {
        if offsets.is_empty() || offsets.len() != probabilities.len() {
            return Err(Error::invalid(
                "proposal offsets and probabilities must match",
            ));
        }
        if probabilities.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::invalid("proposal probabilities must be nonnegative"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "proposal probabilities sum to {total}, not 1"
            )));
        }
        let mut sorted = offsets.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate proposal offset"));
        }
        let cumulative = probabilities
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(ProposalSpec {
            offsets,
            probabilities,
            cumulative,
        })
    }

    /// `k' = k - w/2 + Binomial(w, 1/2)`; `width = 4` gives probabilities
    /// (0.0625, 0.25, 0.375, 0.25, 0.0625) on offsets -2..=2.
    pub fn binomial(width: u32) -> Self {
        let w = width as i64;
        let half = w / 2;
        let denom = 2f64.powi(width as i32);
        let mut choose = 1.0;
        let mut offsets = Vec::new();
        let mut probs = Vec::new();
        for s in 0..=w {
            offsets.push(s - half);
            probs.push(choose / denom);
            choose = choose * (w - s) as f64 / (s + 1) as f64;
        }
        ProposalSpec::new(offsets, probs).expect("binomial weights are valid")
    }

    /// Always proposes the current level.
    pub fn point_mass() -> Self {
        ProposalSpec::new(vec![0], vec![1.0]).expect("point mass is valid")
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn prob(&self, offset: i64) -> f64 {
        self.offsets
            .iter()
            .position(|&o| o == offset)
            .map_or(0.0, |i| self.probabilities[i])
    }

    pub fn log_prob(&self, offset: i64) -> f64 {
        self.prob(offset).ln()
    }

    pub fn is_symmetric(&self) -> bool {
        self.offsets
            .iter()
            .zip(&self.probabilities)
            .all(|(&o, &p)| (self.prob(-o) - p).abs() <= 1e-15)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let u: f64 = rng.random();
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.offsets.len() - 1);
        self.offsets[idx]
    }
}

impl Default for ProposalSpec {
    fn default() -> Self {
        ProposalSpec::binomial(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    /// Power applied to the regularized Laplacian.
    pub q: f64,
    /// Rate of the truncation-level prior.
    pub gamma: f64,
    /// Gamma prior shape on the scale `c`.
    pub a: f64,
    /// Gamma prior rate on the scale `c`.
    pub b: f64,
    pub proposal: ProposalSpec,
}

impl Hyperparams {
    pub fn new(q: f64, gamma: f64, a: f64, b: f64, proposal: ProposalSpec) -> Result<Self> {
        let h = Hyperparams {
            q,
            gamma,
            a,
            b,
            proposal,
        };
        h.validate()?;
        Ok(h)
    }

    /// `q = 1`, `gamma = 20 / n`, improper `p(c) ∝ 1/c`, binomial(4) proposal.
    pub fn rule_of_thumb(n: usize) -> Self {
        Hyperparams {
            q: 1.0,
            gamma: 20.0 / n as f64,
            a: 0.0,
            b: 0.0,
            proposal: ProposalSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("q", self.q),
            ("gamma", self.gamma),
            ("a", self.a),
            ("b", self.b),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Prior precision factor `(lambda + 1/n^2)^q` of one series coefficient.
#[inline]
pub fn tau(lambda: f64, n: usize, q: f64) -> f64 {
    let nf = n as f64;
    (lambda + 1.0 / (nf * nf)).powf(q)
}

/// `log sum_{l=1}^{kmax} exp(-gamma l)`.
fn log_k_normalizer(gamma: f64, kmax: usize) -> f64 {
    if gamma == 0.0 {
        (kmax as f64).ln()
    } else {
        // exp(-gamma) (1 - exp(-gamma kmax)) / (1 - exp(-gamma))
        -gamma + (-(-gamma * kmax as f64).exp_m1()).ln() - (-(-gamma).exp_m1()).ln()
    }
}

/// Normalized log prior mass of truncation level `k` on `1..=kmax`;
/// `-inf` outside the support.
pub fn log_prior_k(k: usize, gamma: f64, kmax: usize) -> f64 {
    if k == 0 || k > kmax {
        return f64::NEG_INFINITY;
    }
    -gamma * k as f64 - log_k_normalizer(gamma, kmax)
}

/// Prior mass on `{1, ..., l}` when the support is `1..=n`:
/// `(1 - e^{-gamma l}) e^{gamma n} / (e^{gamma n} - 1)`.
pub fn prior_k_cdf(l: usize, gamma: f64, n: usize) -> f64 {
    let l = l.min(n);
    if gamma == 0.0 {
        return l as f64 / n as f64;
    }
    (-gamma * l as f64).exp_m1() / (-gamma * n as f64).exp_m1()
}

/// Contribution of coordinate `i` to `log p(z | k, c)`:
/// `(log(c tau / (1 + c tau)) + p^2 / (1 + c tau)) / 2`, `p = z . u_i`.
#[inline]
pub(crate) fn marginal_term(projection: f64, lambda: f64, n: usize, c: f64, q: f64) -> f64 {
    let ct = c * tau(lambda, n, q);
    0.5 * (-(1.0 / ct).ln_1p() + projection * projection / (1.0 + ct))
}

/// `log p(z | k, c)` with `g` integrated out:
///
/// `-(n/2) log 2pi + 1/2 sum_{i<=k} log(c tau_i / (1 + c tau_i)) - z.z/2
///  + 1/2 sum_{i<=k} (z . u_i)^2 / (1 + c tau_i)`.
pub fn log_marginal_z(
    z: &[f64],
    basis: &SpectralBasis,
    k: usize,
    c: f64,
    hyper: &Hyperparams,
) -> Result<f64> {
    if k > basis.m() {
        return Err(Error::BasisExhausted {
            requested: k,
            available: basis.m(),
        });
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!("scale c must be positive, got {c}")));
    }
    let n = basis.n();
    let zz: f64 = z.iter().map(|x| x * x).sum();
    let proj = basis.project(z, k);
    let terms: f64 = proj
        .iter()
        .enumerate()
        .map(|(i, &p)| marginal_term(p, basis.eigenvalue(i), n, c, hyper.q))
        .sum();
    Ok(-0.5 * n as f64 * (2.0 * PI).ln() - 0.5 * zz + terms)
}

/// `log p(z|k',c) - log p(z|k,c)` from the coordinates between `k` and `k'`
/// only. `projections` must hold `z . u_i` for `i < max(k, k')`.
pub(crate) fn log_marginal_ratio(
    k: usize,
    kprime: usize,
    projections: &[f64],
    basis: &SpectralBasis,
    c: f64,
    q: f64,
) -> f64 {
    let n = basis.n();
    let (lo, hi, sign) = if kprime > k {
        (k, kprime, 1.0)
    } else {
        (kprime, k, -1.0)
    };
    let sum: f64 = (lo..hi)
        .map(|i| marginal_term(projections[i], basis.eigenvalue(i), n, c, q))
        .sum();
    sign * sum
}

/// Log acceptance ratio of a move `k -> k'` at fixed `(z, c)`:
/// `-gamma (k' - k) + log s(k|k') - log s(k'|k) + log p(z|k',c) - log p(z|k,c)`.
/// Moves leaving `1..=kmax` (with `kmax = basis.m()`) or outside the proposal
/// support in either direction give `-inf`; `k' = k`
/// gives exactly 0.
pub fn log_accept_ratio(
    k: usize,
    kprime: i64,
    z: &[f64],
    c: f64,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
) -> f64 {
    if kprime < 1 || kprime as usize > basis.m() || k == 0 || k > basis.m() {
        return f64::NEG_INFINITY;
    }
    let kprime = kprime as usize;
    if kprime == k {
        return 0.0;
    }
    let projections = basis.project(z, k.max(kprime));
    log_accept_ratio_from_projections(k, kprime, &projections, c, basis, hyper)
}

pub(crate) fn log_accept_ratio_from_projections(
    k: usize,
    kprime: usize,
    projections: &[f64],
    c: f64,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
) -> f64 {
    if kprime == k {
        return 0.0;
    }
    let step = kprime as i64 - k as i64;
    if hyper.proposal.prob(step) == 0.0 || hyper.proposal.prob(-step) == 0.0 {
        return f64::NEG_INFINITY;
    }
    -hyper.gamma * step as f64 + hyper.proposal.log_prob(-step) - hyper.proposal.log_prob(step)
        + log_marginal_ratio(k, kprime, projections, basis, c, hyper.q)
}
