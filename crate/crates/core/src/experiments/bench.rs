//! Truncated versus untruncated timing on subsampled k-NN graphs.

use std::io::Write;
use std::time::Instant;

use rand::seq::index;

use super::{rng_stream, split_labels, ChainSettings, LabeledPool};
use crate::error::{Error, Result};
use crate::graph::{build_knn_graph, laplacian};
use crate::sampler::{accuracy, run_baseline_full, run_chain, summarize, McmcConfig};
use crate::spectral::{full_eigensolve, partial_eigensolve};

const SUBSAMPLE_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Truncated,
    Full,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Truncated => "truncated",
            Method::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub method: Method,
    /// Eigendecomposition plus chain wall-clock.
    pub seconds: f64,
    pub accuracy: f64,
}

/// Subsample of exactly `size` rows keeping the share of every
/// (class, split) stratum; quotas are rounded by largest remainder.
pub fn stratified_subsample(pool: &LabeledPool, size: usize, seed: u64) -> Result<Vec<usize>> {
    if size == 0 || size > pool.len() {
        return Err(Error::invalid(format!(
            "subsample size {size} not in 1..={}",
            pool.len()
        )));
    }
    let mut strata: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for i in 0..pool.len() {
        strata[usize::from(pool.labels[i]) * 2 + usize::from(pool.is_test[i])].push(i);
    }
    let total = pool.len() as f64;
    let exact: Vec<f64> = strata
        .iter()
        .map(|s| size as f64 * s.len() as f64 / total)
        .collect();
    let mut quota: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - quota[a] as f64;
        let fb = exact[b] - quota[b] as f64;
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut left = size - quota.iter().sum::<usize>();
    for &s in order.iter().cycle() {
        if left == 0 {
            break;
        }
        if quota[s] < strata[s].len() {
            quota[s] += 1;
            left -= 1;
        }
    }
    let mut rng = rng_stream(seed, SUBSAMPLE_STREAM);
    let mut picked = Vec::with_capacity(size);
    for (s, q) in strata.iter().zip(&quota) {
        picked.extend(
            index::sample(&mut rng, s.len(), *q)
                .into_iter()
                .map(|j| s[j]),
        );
    }
    picked.sort_unstable();
    Ok(picked)
}

fn sub_pool(pool: &LabeledPool, idx: &[usize]) -> LabeledPool {
    LabeledPool {
        features: pool.features.select_rows(idx),
        labels: idx.iter().map(|&i| pool.labels[i]).collect(),
        is_test: idx.iter().map(|&i| pool.is_test[i]).collect(),
    }
}

/// For each size: subsample, build the k-NN graph, then time the truncated
/// chain (Lanczos budget) and the untruncated baseline (dense eigensolve).
pub fn bench_scaling(
    pool: &LabeledPool,
    sizes: &[usize],
    knn: usize,
    settings: &ChainSettings,
    seed: u64,
) -> Result<Vec<BenchRow>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("subsample sizes must be strictly ascending"));
    }
    let mcmc = McmcConfig {
        seed,
        ..settings.mcmc
    };
    let mut rows = Vec::with_capacity(2 * sizes.len());
    for &size in sizes {
        let sub = sub_pool(pool, &stratified_subsample(pool, size, seed)?);
        let graph = build_knn_graph(&sub.features, knn)?;
        let l = laplacian(&graph);
        let (data, hidden) = split_labels(&sub)?;
        if hidden.is_empty() {
            return Err(Error::invalid(format!(
                "subsample of {size} has no test points"
            )));
        }

        let hyper = settings.hyper(size)?;
        let start = Instant::now();
        let basis = partial_eigensolve(&l, settings.budget(size, hyper.gamma), &settings.eigen)?;
        let trace = run_chain(&data, &basis, &hyper, &mcmc, settings.exhaustion(&l))?;
        let seconds = start.elapsed().as_secs_f64();
        let acc = accuracy(&summarize(&trace, settings.level)?, &sub.labels, &hidden)?;
        log::info!(
            "size {size} truncated: {seconds:.3} s, accuracy {acc:.4}, mean k {:.1}",
            trace.mean_k()
        );
        rows.push(BenchRow {
            size,
            method: Method::Truncated,
            seconds,
            accuracy: acc,
        });

        let start = Instant::now();
        let full = full_eigensolve(&l)?;
        let trace = run_baseline_full(&data, &full, &hyper, &mcmc)?;
        let seconds = start.elapsed().as_secs_f64();
        let acc = accuracy(&summarize(&trace, settings.level)?, &sub.labels, &hidden)?;
        log::info!("size {size} full: {seconds:.3} s, accuracy {acc:.4}");
        rows.push(BenchRow {
            size,
            method: Method::Full,
            seconds,
            accuracy: acc,
        });
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut out: W) -> Result<()> {
    writeln!(out, "size,method,seconds,accuracy")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.size,
            r.method.name(),
            r.seconds,
            r.accuracy
        )?;
    }
    Ok(())
}
