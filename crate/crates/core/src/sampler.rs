//! Reversible-jump Gibbs sampler over `(z, g, k, c)` and posterior summaries.
//!
//! One sweep draws the latent Gaussians `z` given `f`, then jointly moves
//! `(g, k)` by proposing a new truncation level, accepting it with the
//! integrated-likelihood ratio and redrawing `g` from its exact conditional,
//! and finally draws the scale `c` from its gamma conditional.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Gamma, StandardNormal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::graph::SparseSymMatrix;
use crate::model::{
    log_accept_ratio_from_projections, log_marginal_z, log_prior_k, tau, Hyperparams,
};
use crate::spectral::{extend_basis, EigenOptions, SpectralBasis};

/// Standard normal CDF.
#[inline]
pub fn probit(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Observed hard labels on a subset of vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelData {
    labels: Vec<Option<bool>>,
    observed: Vec<usize>,
}

impl LabelData {
    /// `observed` holds `(vertex, label)` pairs, 0-based, label in {0, 1}.
    pub fn new(n: usize, observed: &[(usize, u8)]) -> Result<Self> {
        let mut labels = vec![None; n];
        let mut idx = Vec::with_capacity(observed.len());
        for &(v, y) in observed {
            if v >= n {
                return Err(Error::invalid(format!("observed vertex {v} out of range")));
            }
            if y > 1 {
                return Err(Error::invalid(format!(
                    "label {y} at vertex {v} is not 0/1"
                )));
            }
            if labels[v].replace(y == 1).is_some() {
                return Err(Error::invalid(format!("vertex {v} observed twice")));
            }
            idx.push(v);
        }
        idx.sort_unstable();
        Ok(LabelData {
            labels,
            observed: idx,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn label(&self, v: usize) -> Option<bool> {
        self.labels[v]
    }

    /// Observed vertices in increasing order.
    pub fn observed(&self) -> &[usize] {
        &self.observed
    }

    pub fn unobserved(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.labels[v].is_none())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub z: Vec<f64>,
    pub g: Vec<f64>,
    pub k: usize,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Positive,
    Negative,
}

/// One draw from `N(mean, 1)` conditioned on the sign given by `side`.
///
/// When the allowed half-line carries at least 30% of the mass this is plain
/// rejection from `N(mean, 1)`; further out it uses Robert's translated
/// exponential proposal, which stays efficient arbitrarily deep in the tail.
pub fn sample_truncated_normal<R: Rng + ?Sized>(mean: f64, side: Truncation, rng: &mut R) -> f64 {
    match side {
        Truncation::Positive => mean + standard_tail(-mean, rng),
        Truncation::Negative => -(-mean + standard_tail(mean, rng)),
    }
}

/// Standard normal conditioned on `x > a`.
fn standard_tail<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    // P(X > a) >= 0.3  <=>  a <= 0.5244...
    const NAIVE_LIMIT: f64 = 0.524_400_512_708_041;
    if a <= NAIVE_LIMIT {
        loop {
            let x: f64 = StandardNormal.sample(rng);
            if x > a {
                return x;
            }
        }
    }
    let alpha = 0.5 * (a + (a * a + 4.0).sqrt());
    let exp = Exp::new(alpha).expect("positive rate");
    loop {
        let x = a + exp.sample(rng);
        let d = x - alpha;
        if rng.random::<f64>() <= (-0.5 * d * d).exp() {
            return x;
        }
    }
}

/// Redraws every `z_i` given `f = sum g_i u_i`: free for unobserved vertices,
/// sign-constrained by the observed label otherwise.
pub fn update_z<R: Rng + ?Sized>(
    state: &mut ChainState,
    data: &LabelData,
    basis: &SpectralBasis,
    rng: &mut R,
) {
    let f = basis.synthesize(&state.g);
    for (i, (zi, fi)) in state.z.iter_mut().zip(&f).enumerate() {
        *zi = match data.label(i) {
            None => fi + Distribution::<f64>::sample(&StandardNormal, rng),
            Some(true) => sample_truncated_normal(*fi, Truncation::Positive, rng),
            Some(false) => sample_truncated_normal(*fi, Truncation::Negative, rng),
        };
    }
}

/// Draws `g_i ~ N(p_i / (1 + c tau_i), 1 / (1 + c tau_i))` for `i < k`.
fn draw_g<R: Rng + ?Sized>(
    projections: &[f64],
    k: usize,
    c: f64,
    basis: &SpectralBasis,
    q: f64,
    rng: &mut R,
) -> Vec<f64> {
    let n = basis.n();
    (0..k)
        .map(|i| {
            let prec = 1.0 + c * tau(basis.eigenvalue(i), n, q);
            let eps: f64 = StandardNormal.sample(rng);
            projections[i] / prec + eps / prec.sqrt()
        })
        .collect()
}

/// What to do when a proposed level exceeds the computed eigenpairs.
#[derive(Debug, Clone, Copy)]
pub enum Exhaustion<'a> {
    /// Treat the proposal as outside the support.
    Reject,
    /// Compute more eigenpairs of `laplacian`, at least `min_chunk` at a time.
    Extend {
        laplacian: &'a SparseSymMatrix,
        options: EigenOptions,
        min_chunk: usize,
    },
}

impl Exhaustion<'_> {
    fn kmax(&self, basis: &SpectralBasis) -> usize {
        match self {
            Exhaustion::Reject => basis.m(),
            Exhaustion::Extend { .. } => basis.n(),
        }
    }
}

/// Reversible-jump move on `(g, k)` at fixed `(z, c)`. Returns whether the
/// proposal was accepted (a proposal of the current level always is).
pub fn update_gk<R: Rng + ?Sized>(
    state: &mut ChainState,
    basis: &mut Cow<'_, SpectralBasis>,
    hyper: &Hyperparams,
    exhaustion: &Exhaustion<'_>,
    rng: &mut R,
) -> Result<bool> {
    let step = hyper.proposal.sample(rng);
    let v: f64 = rng.random();
    let kprime = state.k as i64 + step;
    if kprime < 1 || kprime as usize > exhaustion.kmax(basis) {
        return Ok(false);
    }
    let kprime = kprime as usize;
    if kprime > basis.m() {
        match exhaustion {
            Exhaustion::Reject => return Ok(false),
            Exhaustion::Extend {
                laplacian,
                options,
                min_chunk,
            } => {
                let extra = (kprime - basis.m())
                    .max(*min_chunk)
                    .min(basis.n() - basis.m());
                log::debug!("extending basis from {} by {extra} pairs", basis.m());
                *basis = Cow::Owned(extend_basis(basis, laplacian, extra, options)?);
            }
        }
    }
    let projections = basis.project(&state.z, state.k.max(kprime));
    let log_ratio =
        log_accept_ratio_from_projections(state.k, kprime, &projections, state.c, basis, hyper);
    if v.ln() > log_ratio {
        return Ok(false);
    }
    state.k = kprime;
    state.g = draw_g(&projections, kprime, state.c, basis, hyper.q, rng);
    Ok(true)
}

/// Redraws `g` from its exact conditional at the current `k`.
pub fn update_g_fixed<R: Rng + ?Sized>(
    state: &mut ChainState,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    rng: &mut R,
) {
    let projections = basis.project(&state.z, state.k);
    state.g = draw_g(&projections, state.k, state.c, basis, hyper.q, rng);
}

/// `c | g, k ~ Gamma(a + k/2, rate = b + sum tau_i g_i^2 / 2)`.
pub fn update_c<R: Rng + ?Sized>(
    state: &mut ChainState,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    rng: &mut R,
) -> Result<()> {
    let n = basis.n();
    let quad: f64 = state
        .g
        .iter()
        .enumerate()
        .map(|(i, g)| tau(basis.eigenvalue(i), n, hyper.q) * g * g)
        .sum();
    let shape = hyper.a + 0.5 * state.k as f64;
    let rate = hyper.b + 0.5 * quad;
    if !(rate > 0.0) || !(shape > 0.0) || !rate.is_finite() {
        return Err(Error::DegenerateState(format!(
            "gamma conditional for c has shape {shape}, rate {rate}"
        )));
    }
    let gamma = Gamma::new(shape, 1.0 / rate)
        .map_err(|e| Error::DegenerateState(format!("gamma({shape}, {rate}): {e}")))?;
    state.c = gamma.sample(rng);
    if !(state.c > 0.0) {
        // Underflow for tiny shapes; keep c strictly positive.
        state.c = f64::MIN_POSITIVE;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burnin: usize,
    /// Keep every `thinning`-th post-burn-in `f`.
    pub thinning: usize,
    pub seed: u64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            iterations: 10_000,
            burnin: 2_000,
            thinning: 5,
            seed: 0,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations <= self.burnin {
            return Err(Error::invalid(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.iterations, self.burnin
            )));
        }
        if self.thinning == 0 {
            return Err(Error::invalid("thinning must be at least 1"));
        }
        Ok(())
    }

    pub fn stored_samples(&self) -> usize {
        (self.iterations - self.burnin) / self.thinning
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub c: f64,
    pub accepted: bool,
    pub micros: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// One record per iteration, burn-in included.
    pub records: Vec<IterationRecord>,
    /// Thinned post-burn-in draws of `f`.
    pub samples: Vec<Vec<f64>>,
    pub burnin: usize,
    pub thinning: usize,
    /// Eigenpairs available at the end of the run.
    pub final_basis_size: usize,
}

impl Trace {
    pub fn post_burnin(&self) -> &[IterationRecord] {
        &self.records[self.burnin.min(self.records.len())..]
    }

    pub fn mean_k(&self) -> f64 {
        let post = self.post_burnin();
        post.iter().map(|r| r.k as f64).sum::<f64>() / post.len().max(1) as f64
    }

    pub fn total_seconds(&self) -> f64 {
        self.records.iter().map(|r| r.micros as f64).sum::<f64>() * 1e-6
    }
}

/// Initial level: `ceil(1/gamma)` (10 when `gamma = 0`), clipped to `1..=kmax`.
pub fn initial_k(gamma: f64, kmax: usize) -> usize {
    let k = if gamma > 0.0 {
        (1.0 / gamma).ceil().min(usize::MAX as f64) as usize
    } else {
        10
    };
    k.clamp(1, kmax.max(1))
}

/// `c = 1`, `g` from its prior at `(k0, c)`, then `z` drawn given `f`.
pub fn initial_state<R: Rng + ?Sized>(
    k0: usize,
    data: &LabelData,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    rng: &mut R,
) -> ChainState {
    let n = basis.n();
    let c = 1.0;
    let g = (0..k0)
        .map(|i| {
            let eps: f64 = StandardNormal.sample(rng);
            eps / (c * tau(basis.eigenvalue(i), n, hyper.q)).sqrt()
        })
        .collect();
    let mut state = ChainState {
        z: vec![0.0; n],
        g,
        k: k0,
        c,
    };
    update_z(&mut state, data, basis, rng);
    state
}

enum Scheme<'a> {
    ReversibleJump(Exhaustion<'a>),
    FixedK,
}

fn run_gibbs(
    data: &LabelData,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    cfg: &McmcConfig,
    scheme: Scheme<'_>,
) -> Result<Trace> {
    cfg.validate()?;
    hyper.validate()?;
    if data.n() != basis.n() {
        return Err(Error::invalid(format!(
            "label data has {} vertices, basis {}",
            data.n(),
            basis.n()
        )));
    }
    if basis.m() == 0 {
        return Err(Error::invalid("empty spectral basis"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut basis: Cow<'_, SpectralBasis> = Cow::Borrowed(basis);
    let k0 = match &scheme {
        Scheme::ReversibleJump(_) => initial_k(hyper.gamma, basis.m()),
        Scheme::FixedK => basis.m(),
    };
    let mut state = initial_state(k0, data, &basis, hyper, &mut rng);

    let mut records = Vec::with_capacity(cfg.iterations);
    let mut samples = Vec::with_capacity(cfg.stored_samples());
    for it in 0..cfg.iterations {
        let start = Instant::now();
        if it > 0 {
            update_z(&mut state, data, &basis, &mut rng);
        }
        let accepted = match &scheme {
            Scheme::ReversibleJump(ex) => update_gk(&mut state, &mut basis, hyper, ex, &mut rng)?,
            Scheme::FixedK => {
                update_g_fixed(&mut state, &basis, hyper, &mut rng);
                true
            }
        };
        update_c(&mut state, &basis, hyper, &mut rng)?;
        if it >= cfg.burnin && (it - cfg.burnin + 1).is_multiple_of(cfg.thinning) {
            samples.push(basis.synthesize(&state.g));
        }
        records.push(IterationRecord {
            k: state.k,
            c: state.c,
            accepted,
            micros: start.elapsed().as_micros() as u64,
        });
    }
    Ok(Trace {
        records,
        samples,
        burnin: cfg.burnin,
        thinning: cfg.thinning,
        final_basis_size: basis.m(),
    })
}

/// Runs the reversible-jump sampler. The initial `z` comes from the initial
/// `f`, so iteration 1 starts at the `(g, k)` move.
pub fn run_chain(
    data: &LabelData,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    cfg: &McmcConfig,
    exhaustion: Exhaustion<'_>,
) -> Result<Trace> {
    run_gibbs(data, basis, hyper, cfg, Scheme::ReversibleJump(exhaustion))
}

/// Untruncated baseline: `k` pinned to `n` with the full eigenbasis and `g`
/// redrawn from its conditional every sweep.
pub fn run_baseline_full(
    data: &LabelData,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
    cfg: &McmcConfig,
) -> Result<Trace> {
    if basis.m() != basis.n() {
        return Err(Error::invalid(format!(
            "untruncated baseline needs all {} eigenpairs, got {}",
            basis.n(),
            basis.m()
        )));
    }
    run_gibbs(data, basis, hyper, cfg, Scheme::FixedK)
}

/// Posterior `p(k | z, c)` on `1..=basis.m()` by enumeration.
pub fn k_posterior(
    z: &[f64],
    c: f64,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
) -> Result<Vec<f64>> {
    let m = basis.m();
    let logs = (1..=m)
        .map(|k| Ok(log_marginal_z(z, basis, k, c, hyper)? + log_prior_k(k, hyper.gamma, m)))
        .collect::<Result<Vec<f64>>>()?;
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Transition matrix of the `k` component of [`update_gk`] at fixed `(z, c)`
/// in reject mode; row/column `i` is level `i + 1`.
pub fn k_transition_matrix(
    z: &[f64],
    c: f64,
    basis: &SpectralBasis,
    hyper: &Hyperparams,
) -> Vec<Vec<f64>> {
    let m = basis.m();
    let projections = basis.project(z, m);
    let mut p = vec![vec![0.0; m]; m];
    for k in 1..=m {
        let mut off = 0.0;
        for (&step, &prob) in hyper
            .proposal
            .offsets()
            .iter()
            .zip(hyper.proposal.probabilities())
        {
            let kp = k as i64 + step;
            if step == 0 || kp < 1 || kp as usize > m {
                continue;
            }
            let kp = kp as usize;
            let r = log_accept_ratio_from_projections(k, kp, &projections, c, basis, hyper);
            let move_prob = prob * r.min(0.0).exp();
            p[k - 1][kp - 1] += move_prob;
            off += move_prob;
        }
        p[k - 1][k - 1] = 1.0 - off;
    }
    p
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSummary {
    /// Posterior mean of `Phi(f_i)`.
    pub mean: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub hard: Vec<u8>,
    pub k_histogram: BTreeMap<usize, usize>,
    pub acceptance_rate: f64,
    pub level: f64,
}

impl PosteriorSummary {
    pub fn widths(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u - l)
            .collect()
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Pointwise posterior summary of `Phi(f)` from the stored draws. Hard labels
/// are `1` where the posterior mean exceeds 0.5 strictly.
pub fn summarize(trace: &Trace, level: f64) -> Result<PosteriorSummary> {
    if trace.samples.is_empty() {
        return Err(Error::invalid("trace holds no stored samples"));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(format!(
            "credible level {level} not in (0, 1)"
        )));
    }
    let n = trace.samples[0].len();
    let s = trace.samples.len();
    let tail = 0.5 * (1.0 - level);
    let mut mean = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut column = vec![0.0; s];
    for v in 0..n {
        for (dst, f) in column.iter_mut().zip(&trace.samples) {
            *dst = probit(f[v]);
        }
        let m = column.iter().sum::<f64>() / s as f64;
        column.sort_unstable_by(f64::total_cmp);
        mean.push(m.clamp(0.0, 1.0));
        lower.push(quantile_sorted(&column, tail));
        upper.push(quantile_sorted(&column, 1.0 - tail));
    }
    let hard = mean.iter().map(|&m| u8::from(m > 0.5)).collect();
    let post = trace.post_burnin();
    let mut k_histogram = BTreeMap::new();
    for r in post {
        *k_histogram.entry(r.k).or_insert(0) += 1;
    }
    let acceptance_rate =
        post.iter().filter(|r| r.accepted).count() as f64 / post.len().max(1) as f64;
    Ok(PosteriorSummary {
        mean,
        lower,
        upper,
        hard,
        k_histogram,
        acceptance_rate,
        level,
    })
}

/// Fraction of `eval` vertices whose hard label equals `truth`.
pub fn accuracy(summary: &PosteriorSummary, truth: &[u8], eval: &[usize]) -> Result<f64> {
    if eval.is_empty() {
        return Err(Error::invalid("empty evaluation set"));
    }
    let hits = eval
        .iter()
        .map(|&v| {
            let (p, t) = (summary.hard.get(v), truth.get(v));
            match (p, t) {
                (Some(p), Some(t)) => Ok(usize::from(p == t)),
                _ => Err(Error::invalid(format!(
                    "evaluation vertex {v} out of range"
                ))),
            }
        })
        .sum::<Result<usize>>()?;
    Ok(hits as f64 / eval.len() as f64)
}

pub fn write_trace_csv<W: Write>(trace: &Trace, mut out: W) -> Result<()> {
    writeln!(out, "iter,k,c,accepted,micros_per_iter")?;
    for (i, r) in trace.records.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{}",
            i + 1,
            r.k,
            r.c,
            u8::from(r.accepted),
            r.micros
        )?;
    }
    Ok(())
}

/// Vertices are written 1-based.
pub fn write_summary_csv<W: Write>(summary: &PosteriorSummary, mut out: W) -> Result<()> {
    writeln!(out, "vertex,mean,lo,hi,hard_label")?;
    for v in 0..summary.mean.len() {
        writeln!(
            out,
            "{},{},{},{},{}",
            v + 1,
            summary.mean[v],
            summary.lower[v],
            summary.upper[v],
            summary.hard[v]
        )?;
    }
    Ok(())
}

pub fn write_khist_csv<W: Write>(summary: &PosteriorSummary, mut out: W) -> Result<()> {
    writeln!(out, "k,count")?;
    for (k, count) in &summary.k_histogram {
        writeln!(out, "{k},{count}")?;
    }
    Ok(())
}

/// `sqrt(2/pi)`, the mean of a standard normal conditioned to be positive.
pub const HALF_NORMAL_MEAN: f64 = 0.797_884_560_802_865_4;
