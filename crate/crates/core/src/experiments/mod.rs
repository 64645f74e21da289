//! Experiment harness: simulated and image data, runners and artifact output.

pub mod bench;
pub mod config;
pub mod data;
pub mod idx;
pub mod pca;
pub mod pgm;
pub mod tracking;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{
    build_grid3d, build_path, build_watts_strogatz, laplacian, Graph, SparseSymMatrix,
};
use crate::model::{prior_k_cdf, Hyperparams, ProposalSpec};
use crate::sampler::{
    accuracy, run_chain, summarize, write_khist_csv, write_summary_csv, write_trace_csv,
    Exhaustion, LabelData, McmcConfig, PosteriorSummary, Trace,
};
use crate::spectral::{
    full_eigensolve, grid3d_eigenpairs, partial_eigensolve, path_eigenpairs, EigenOptions,
    SpectralBasis,
};

use self::data::{gen_labels, gen_path_truth, mask_labels, truth_from_basis};
use self::pgm::write_pgm;
use self::tracking::{boundary_mask, gen_tracking, TrackingData, TrackingSpec};

/// Independent random stream `stream` derived from a run seed.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const DATA_STREAM: u64 = 1;
const GRAPH_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    Reject,
    Extend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainSettings {
    pub q: f64,
    /// `None` selects `20 / n`.
    pub gamma: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub proposal: ProposalSpec,
    pub mcmc: McmcConfig,
    pub mode: BasisMode,
    /// Eigenpairs computed before the chain starts; `None` uses [`default_budget`].
    pub budget: Option<usize>,
    pub level: f64,
    pub eigen: EigenOptions,
}

impl Default for ChainSettings {
    fn default() -> Self {
        ChainSettings {
            q: 1.0,
            gamma: None,
            a: 0.0,
            b: 0.0,
            proposal: ProposalSpec::default(),
            mcmc: McmcConfig::default(),
            mode: BasisMode::Reject,
            budget: None,
            level: 0.95,
            eigen: EigenOptions::default(),
        }
    }
}

impl ChainSettings {
    pub fn hyper(&self, n: usize) -> Result<Hyperparams> {
        let gamma = self.gamma.unwrap_or(20.0 / n as f64);
        Hyperparams::new(self.q, gamma, self.a, self.b, self.proposal.clone())
    }

    pub fn budget(&self, n: usize, gamma: f64) -> usize {
        self.budget
            .unwrap_or_else(|| default_budget(n, gamma))
            .clamp(1, n)
    }

    fn exhaustion<'a>(&self, l: &'a SparseSymMatrix) -> Exhaustion<'a> {
        match self.mode {
            BasisMode::Reject => Exhaustion::Reject,
            BasisMode::Extend => Exhaustion::Extend {
                laplacian: l,
                options: self.eigen,
                min_chunk: 10,
            },
        }
    }
}

/// Smallest level holding 99% of the prior mass on `k`, kept within `[50, 1000]`.
pub fn default_budget(n: usize, gamma: f64) -> usize {
    let mut l = 1;
    while l < n && prior_k_cdf(l, gamma, n) < 0.99 {
        l += 1;
    }
    l.clamp(50.min(n), 1000.min(n))
}

/// How to obtain eigenpairs for a graph.
#[derive(Debug, Clone, Copy)]
enum BasisPlan {
    Path(usize),
    Grid(usize, usize, usize),
    Iterative,
}

fn compute_basis(
    plan: BasisPlan,
    l: &SparseSymMatrix,
    m: usize,
    eigen: &EigenOptions,
) -> Result<SpectralBasis> {
    match plan {
        BasisPlan::Path(n) => path_eigenpairs(n, m),
        BasisPlan::Grid(nx, ny, nt) => grid3d_eigenpairs(nx, ny, nt, m),
        BasisPlan::Iterative => partial_eigensolve(l, m, eigen),
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub graph: Graph,
    pub trace: Trace,
    pub summary: PosteriorSummary,
    /// Ground-truth label of every vertex.
    pub truth: Vec<u8>,
    /// Held-out vertices used for evaluation.
    pub hidden: Vec<usize>,
    /// Accuracy on `hidden`; `None` when nothing was held out.
    pub accuracy: Option<f64>,
    pub gamma: f64,
    pub timings: Vec<(&'static str, f64)>,
}

impl RunOutcome {
    /// Writes `trace.csv`, `summary.csv`, `khist.csv` and `timing.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let create = |name: &str| -> Result<BufWriter<File>> {
            Ok(BufWriter::new(File::create(dir.join(name))?))
        };
        let mut w = create("trace.csv")?;
        write_trace_csv(&self.trace, &mut w)?;
        w.flush()?;
        let mut w = create("summary.csv")?;
        write_summary_csv(&self.summary, &mut w)?;
        w.flush()?;
        let mut w = create("khist.csv")?;
        write_khist_csv(&self.summary, &mut w)?;
        w.flush()?;
        let mut w = create("timing.csv")?;
        write_timing_csv(&self.timings, &mut w)?;
        w.flush()?;
        Ok(())
    }
}

pub fn write_timing_csv<W: Write>(timings: &[(&'static str, f64)], mut out: W) -> Result<()> {
    writeln!(out, "stage,seconds")?;
    for (stage, s) in timings {
        writeln!(out, "{stage},{s}")?;
    }
    Ok(())
}

struct Problem<'a> {
    graph: Graph,
    plan: BasisPlan,
    data: &'a LabelData,
    truth: Vec<u8>,
    hidden: Vec<usize>,
    graph_seconds: f64,
}

fn solve(p: Problem<'_>, settings: &ChainSettings, seed: u64) -> Result<RunOutcome> {
    let n = p.graph.n();
    let hyper = settings.hyper(n)?;
    let l = laplacian(&p.graph);
    let m = settings.budget(n, hyper.gamma);
    let start = Instant::now();
    let basis = compute_basis(p.plan, &l, m, &settings.eigen)?;
    let basis_seconds = start.elapsed().as_secs_f64();
    log::info!("{m} eigenpairs in {basis_seconds:.3} s");
    let mcmc = McmcConfig {
        seed,
        ..settings.mcmc
    };
    let start = Instant::now();
    let trace = run_chain(p.data, &basis, &hyper, &mcmc, settings.exhaustion(&l))?;
    let chain_seconds = start.elapsed().as_secs_f64();
    let summary = summarize(&trace, settings.level)?;
    let acc = if p.hidden.is_empty() {
        None
    } else {
        Some(accuracy(&summary, &p.truth, &p.hidden)?)
    };
    Ok(RunOutcome {
        graph: p.graph,
        trace,
        summary,
        truth: p.truth,
        hidden: p.hidden,
        accuracy: acc,
        gamma: hyper.gamma,
        timings: vec![
            ("graph", p.graph_seconds),
            ("basis", basis_seconds),
            ("chain", chain_seconds),
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathDemo {
    pub n: usize,
    pub observe_frac: f64,
}

impl Default for PathDemo {
    fn default() -> Self {
        PathDemo {
            n: 500,
            observe_frac: 0.8,
        }
    }
}

/// Path graph with the series ground truth and a random 20% of labels withheld.
pub fn path_demo(spec: &PathDemo, settings: &ChainSettings, seed: u64) -> Result<RunOutcome> {
    let start = Instant::now();
    let graph = build_path(spec.n)?;
    let graph_seconds = start.elapsed().as_secs_f64();
    let f0 = gen_path_truth(spec.n)?;
    let mut rng = rng_stream(seed, DATA_STREAM);
    let labels = gen_labels(&f0, &mut rng);
    let masked = mask_labels(&labels, spec.observe_frac, &mut rng)?;
    solve(
        Problem {
            graph,
            plan: BasisPlan::Path(spec.n),
            data: &masked.data,
            truth: labels,
            hidden: masked.hidden,
            graph_seconds,
        },
        settings,
        seed,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WsDemo {
    pub n: usize,
    pub rewire_prob: f64,
    pub observe_frac: f64,
}

impl Default for WsDemo {
    fn default() -> Self {
        WsDemo {
            n: 1000,
            rewire_prob: 0.25,
            observe_frac: 0.8,
        }
    }
}

/// Small-world graph; the ground truth uses the same series weights on the
/// graph's own (dense) eigenbasis.
pub fn ws_demo(spec: &WsDemo, settings: &ChainSettings, seed: u64) -> Result<RunOutcome> {
    let start = Instant::now();
    let comp = build_watts_strogatz(
        spec.n,
        spec.rewire_prob,
        &mut rng_stream(seed, GRAPH_STREAM),
    )?;
    let graph = comp.graph;
    let graph_seconds = start.elapsed().as_secs_f64();
    log::info!(
        "small-world component: {} vertices, {} edges",
        graph.n(),
        graph.edge_count()
    );
    let f0 = truth_from_basis(&full_eigensolve(&laplacian(&graph))?);
    let mut rng = rng_stream(seed, DATA_STREAM);
    let labels = gen_labels(&f0, &mut rng);
    let masked = mask_labels(&labels, spec.observe_frac, &mut rng)?;
    solve(
        Problem {
            graph,
            plan: BasisPlan::Iterative,
            data: &masked.data,
            truth: labels,
            hidden: masked.hidden,
            graph_seconds,
        },
        settings,
        seed,
    )
}

/// Labelled feature vectors with a train/test split.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPool {
    pub features: crate::matrix::Matrix,
    /// Binary class per row.
    pub labels: Vec<u8>,
    pub is_test: Vec<bool>,
}

impl LabeledPool {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// k-NN graph on the pool features; training labels observed, test held out.
pub fn classify_pool(
    pool: &LabeledPool,
    knn: usize,
    settings: &ChainSettings,
    seed: u64,
) -> Result<RunOutcome> {
    let start = Instant::now();
    let graph = crate::graph::build_knn_graph(&pool.features, knn)?;
    let graph_seconds = start.elapsed().as_secs_f64();
    let (data, hidden) = split_labels(pool)?;
    solve(
        Problem {
            graph,
            plan: BasisPlan::Iterative,
            data: &data,
            truth: pool.labels.clone(),
            hidden,
            graph_seconds,
        },
        settings,
        seed,
    )
}

fn split_labels(pool: &LabeledPool) -> Result<(LabelData, Vec<usize>)> {
    let observed: Vec<(usize, u8)> = (0..pool.len())
        .filter(|&i| !pool.is_test[i])
        .map(|i| (i, pool.labels[i]))
        .collect();
    let hidden = (0..pool.len()).filter(|&i| pool.is_test[i]).collect();
    Ok((LabelData::new(pool.len(), &observed)?, hidden))
}

/// MNIST digits 4 (class 0) and 9 (class 1), train and test stacked, projected
/// on `pca_dims` principal components of the combined set.
pub fn mnist_pool(
    train: (&crate::matrix::Matrix, &[u8]),
    test: (&crate::matrix::Matrix, &[u8]),
    pca_dims: usize,
) -> Result<LabeledPool> {
    let (tx, ty) = idx::filter_digits(train.0, train.1, &[4, 9]);
    let (sx, sy) = idx::filter_digits(test.0, test.1, &[4, 9]);
    if tx.cols() != sx.cols() {
        return Err(Error::invalid("train and test images differ in size"));
    }
    let rows: Vec<Vec<f64>> = (0..tx.rows())
        .map(|i| tx.row(i).to_vec())
        .chain((0..sx.rows()).map(|i| sx.row(i).to_vec()))
        .collect();
    let all = crate::matrix::Matrix::from_rows(&rows)?;
    let features = pca::pca_project(&all, pca_dims)?;
    let labels = ty.iter().chain(&sy).map(|&d| u8::from(d == 9)).collect();
    let is_test = (0..all.rows()).map(|i| i >= tx.rows()).collect();
    Ok(LabeledPool {
        features,
        labels,
        is_test,
    })
}

/// Two overlapping Gaussian clusters standing in for the digit data: `n`
/// points in `dims` dimensions, class means `-/+ separation/2` along the
/// first axis, about 14% of points in the test split.
pub fn synthetic_pool(n: usize, dims: usize, separation: f64, seed: u64) -> Result<LabeledPool> {
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};
    if n < 4 || dims == 0 {
        return Err(Error::invalid("synthetic pool needs n >= 4 and dims >= 1"));
    }
    let mut rng = rng_stream(seed, DATA_STREAM);
    let mut data = Vec::with_capacity(n * dims);
    let mut labels = Vec::with_capacity(n);
    let mut is_test = Vec::with_capacity(n);
    for i in 0..n {
        let y = u8::from(i % 2 == 1);
        for j in 0..dims {
            let e: f64 = StandardNormal.sample(&mut rng);
            let shift = if j == 0 {
                separation * (f64::from(y) - 0.5)
            } else {
                0.0
            };
            data.push(e + shift);
        }
        labels.push(y);
        is_test.push(rng.random::<f64>() < TEST_FRACTION);
    }
    Ok(LabeledPool {
        features: crate::matrix::Matrix::from_row_major(n, dims, data)?,
        labels,
        is_test,
    })
}

/// Share of the combined digit set that comes from the test split.
pub const TEST_FRACTION: f64 = 1991.0 / 13782.0;

#[derive(Debug, Clone)]
pub struct TrackingOutcome {
    pub run: RunOutcome,
    pub scene: TrackingData,
    pub spec: TrackingSpec,
}

impl TrackingOutcome {
    /// Hard-label intersection over union against the true object.
    pub fn iou(&self) -> f64 {
        tracking::iou(&self.run.summary.hard, &self.run.truth)
    }

    /// Spurious-disc pixels predicted as object.
    pub fn spurious_hits(&self) -> usize {
        self.scene
            .spurious
            .iter()
            .filter(|&&v| self.run.summary.hard[v] == 1)
            .count()
    }

    /// Mean credible-interval width on boundary and on non-boundary pixels.
    pub fn ci_widths(&self) -> (f64, f64) {
        let b = boundary_mask(
            &self.run.truth,
            self.spec.width,
            self.spec.height,
            self.spec.frames,
        );
        let w = self.run.summary.widths();
        let mean = |sel: bool| {
            let (s, c) = w
                .iter()
                .zip(&b)
                .filter(|(_, &m)| m == sel)
                .fold((0.0, 0usize), |(s, c), (x, _)| (s + x, c + 1));
            s / c.max(1) as f64
        };
        (mean(true), mean(false))
    }

    /// CSV artifacts plus `frame_<t>_{mean,hard,ciwidth}.pgm`, frames numbered from 1.
    pub fn write(&self, dir: &Path) -> Result<()> {
        self.run.write(dir)?;
        let frame = self.spec.width * self.spec.height;
        let s = &self.run.summary;
        let widths = s.widths();
        let hard: Vec<f64> = s.hard.iter().map(|&h| f64::from(h)).collect();
        for t in 0..self.spec.frames {
            let range = t * frame..(t + 1) * frame;
            for (name, values) in [
                ("mean", &s.mean[range.clone()]),
                ("hard", &hard[range.clone()]),
                ("ciwidth", &widths[range.clone()]),
            ] {
                let path = dir.join(format!("frame_{}_{name}.pgm", t + 1));
                let mut w = BufWriter::new(File::create(path)?);
                let clipped: Vec<f64> = values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
                write_pgm(&clipped, self.spec.width, self.spec.height, &mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Moving disc on a space-time grid with randomly withheld pixels.
pub fn tracking_demo(
    spec: &TrackingSpec,
    settings: &ChainSettings,
    seed: u64,
) -> Result<TrackingOutcome> {
    let start = Instant::now();
    let graph = build_grid3d(spec.width, spec.height, spec.frames)?;
    let graph_seconds = start.elapsed().as_secs_f64();
    let scene = gen_tracking(spec, &mut rng_stream(seed, DATA_STREAM))?;
    let run = solve(
        Problem {
            graph,
            plan: BasisPlan::Grid(spec.width, spec.height, spec.frames),
            data: &scene.data,
            truth: scene.truth.clone(),
            hidden: scene.hidden.clone(),
            graph_seconds,
        },
        settings,
        seed,
    )?;
    Ok(TrackingOutcome {
        run,
        scene,
        spec: spec.clone(),
    })
}
