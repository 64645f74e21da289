//! `graphrj`: desk-scale experiments for the truncated eigenbasis classifier.
//!
//! Every flag can also be given in a `--config` file as `flag = value`;
//! flags on the command line win.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use graphrj::experiments::bench::{bench_scaling, write_bench_csv};
use graphrj::experiments::config::ConfigFile;
use graphrj::experiments::idx::load_idx;
use graphrj::experiments::tracking::TrackingSpec;
use graphrj::experiments::{
    classify_pool, mnist_pool, path_demo, synthetic_pool, tracking_demo, ws_demo, BasisMode,
    ChainSettings, LabeledPool, PathDemo, RunOutcome, WsDemo,
};
use graphrj::{Error, McmcConfig, Result};

#[derive(Parser)]
#[command(
    name = "graphrj",
    version,
    about = "Bayesian graph classification with a randomly truncated eigenbasis prior"
)]
struct Cli {
    /// Repeat for more log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Path graph with closed-form eigenpairs and a known truth.
    PathDemo(PathArgs),
    /// Rewired ring (small world), largest component.
    WsDemo(WsArgs),
    /// MNIST digits 4 vs 9 on a k-NN graph of PCA projections.
    Mnist(MnistArgs),
    /// Moving disc on a space-time pixel grid.
    Tracking(TrackingArgs),
    /// Truncated versus full-basis wall-clock and accuracy over subsample sizes.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Common {
    /// `key = value` file; keys are flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation rate; default 20/n.
    #[arg(long)]
    gamma: Option<f64>,
    /// Power of the shifted Laplacian eigenvalues in the prior precision.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    burnin: Option<usize>,
    #[arg(long)]
    thin: Option<usize>,
    /// Shape of the gamma prior on c (0 with b = 0 is the 1/c prior).
    #[arg(long)]
    a: Option<f64>,
    /// Rate of the gamma prior on c.
    #[arg(long)]
    b: Option<f64>,
    /// Eigenpairs computed up front; default is the prior 99% quantile of k.
    #[arg(long)]
    budget: Option<usize>,
    /// `reject` proposals past the budget, or `extend` the basis on demand.
    #[arg(long)]
    mode: Option<Mode>,
    /// Credible-interval level.
    #[arg(long)]
    level: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

const COMMON_KEYS: &[&str] = &[
    "seed", "gamma", "q", "iters", "burnin", "thin", "a", "b", "budget", "mode", "level", "out",
];

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Mode {
    Reject,
    Extend,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "reject" => Ok(Mode::Reject),
            "extend" => Ok(Mode::Extend),
            _ => Err(format!("expected reject or extend, got {s:?}")),
        }
    }
}

#[derive(Args)]
struct PathArgs {
    #[command(flatten)]
    common: Common,
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Fraction of labels observed.
    #[arg(long)]
    observe: Option<f64>,
}

#[derive(Args)]
struct WsArgs {
    #[command(flatten)]
    common: Common,
    /// Ring size before rewiring.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rewire: Option<f64>,
    #[arg(long)]
    observe: Option<f64>,
}

#[derive(Args)]
struct MnistArgs {
    #[command(flatten)]
    common: Common,
    /// Directory holding the four standard IDX files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    pca_dims: Option<usize>,
    #[arg(long)]
    knn: Option<usize>,
}

#[derive(Args)]
struct TrackingArgs {
    #[command(flatten)]
    common: Common,
    /// 100x100 pixels, 9 frames, spurious disc in frame 5.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    frames: Option<usize>,
    /// Fraction of pixels withheld.
    #[arg(long)]
    unobserved: Option<f64>,
    /// 1-based frame receiving the spurious disc; 0 for none.
    #[arg(long)]
    corrupt_frame: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    spurious_radius: Option<f64>,
    /// Share of the corner-to-corner diagonal travelled.
    #[arg(long)]
    travel: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated subsample sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// MNIST IDX directory; a synthetic two-cluster pool is used without it.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    #[arg(long)]
    pca_dims: Option<usize>,
    #[arg(long)]
    knn: Option<usize>,
    /// Dimension of the synthetic pool.
    #[arg(long)]
    dims: Option<usize>,
    /// Distance between the synthetic class means.
    #[arg(long)]
    separation: Option<f64>,
}

/// Command-line values layered over a config file.
struct Layered {
    file: ConfigFile,
}

impl Layered {
    fn load(path: Option<&Path>, extra: &[&str]) -> Result<Self> {
        let file = match path {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let allowed: Vec<&str> = COMMON_KEYS.iter().chain(extra).copied().collect();
        file.check_keys(&allowed)?;
        Ok(Layered { file })
    }

    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key),
        }
    }

    fn list<T: FromStr>(&self, flag: Option<Vec<T>>, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get_list(key),
        }
    }
}

struct Run {
    settings: ChainSettings,
    seed: u64,
    out: PathBuf,
}

fn resolve(c: Common, cfg: &Layered) -> Result<Run> {
    let defaults = McmcConfig::default();
    let mut s = ChainSettings {
        gamma: cfg.pick(c.gamma, "gamma")?,
        budget: cfg.pick(c.budget, "budget")?,
        ..Default::default()
    };
    if let Some(q) = cfg.pick(c.q, "q")? {
        s.q = q;
    }
    if let Some(a) = cfg.pick(c.a, "a")? {
        s.a = a;
    }
    if let Some(b) = cfg.pick(c.b, "b")? {
        s.b = b;
    }
    if let Some(m) = cfg.pick(c.mode, "mode")? {
        s.mode = match m {
            Mode::Reject => BasisMode::Reject,
            Mode::Extend => BasisMode::Extend,
        };
    }
    if let Some(level) = cfg.pick(c.level, "level")? {
        s.level = level;
    }
    let seed = cfg.pick(c.seed, "seed")?.unwrap_or(0);
    let iterations = cfg.pick(c.iters, "iters")?.unwrap_or(defaults.iterations);
    // A shortened run keeps the default burn-in share.
    let burnin = cfg
        .pick(c.burnin, "burnin")?
        .unwrap_or(defaults.burnin * iterations / defaults.iterations);
    s.mcmc = McmcConfig {
        iterations,
        burnin,
        thinning: cfg.pick(c.thin, "thin")?.unwrap_or(defaults.thinning),
        seed,
    };
    s.mcmc.validate()?;
    let out = cfg
        .pick(c.out, "out")?
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok(Run {
        settings: s,
        seed,
        out,
    })
}

fn report(name: &str, run: &RunOutcome, out: &Path) {
    let acc = run
        .accuracy
        .map_or_else(|| "n/a".to_string(), |a| format!("{a:.4}"));
    println!(
        "{name}: n={} gamma={:.4} mean_k={:.2} acceptance={:.3} accuracy={acc} ({} held out) -> {}",
        run.graph.n(),
        run.gamma,
        run.trace.mean_k(),
        run.summary.acceptance_rate,
        run.hidden.len(),
        out.display()
    );
}

fn run_path(args: PathArgs) -> Result<()> {
    let cfg = Layered::load(args.common.config.as_deref(), &["n", "observe"])?;
    let mut spec = PathDemo::default();
    if let Some(n) = cfg.pick(args.n, "n")? {
        spec.n = n;
    }
    if let Some(f) = cfg.pick(args.observe, "observe")? {
        spec.observe_frac = f;
    }
    let run = resolve(args.common, &cfg)?;
    let outcome = path_demo(&spec, &run.settings, run.seed)?;
    outcome.write(&run.out)?;
    report("path-demo", &outcome, &run.out);
    Ok(())
}

fn run_ws(args: WsArgs) -> Result<()> {
    let cfg = Layered::load(args.common.config.as_deref(), &["n", "rewire", "observe"])?;
    let mut spec = WsDemo::default();
    if let Some(n) = cfg.pick(args.n, "n")? {
        spec.n = n;
    }
    if let Some(p) = cfg.pick(args.rewire, "rewire")? {
        spec.rewire_prob = p;
    }
    if let Some(f) = cfg.pick(args.observe, "observe")? {
        spec.observe_frac = f;
    }
    let run = resolve(args.common, &cfg)?;
    let outcome = ws_demo(&spec, &run.settings, run.seed)?;
    outcome.write(&run.out)?;
    report("ws-demo", &outcome, &run.out);
    Ok(())
}

fn load_mnist(dir: &Path, pca_dims: usize) -> Result<LabeledPool> {
    let train = load_idx(
        &dir.join("train-images-idx3-ubyte"),
        &dir.join("train-labels-idx1-ubyte"),
    )?;
    let test = load_idx(
        &dir.join("t10k-images-idx3-ubyte"),
        &dir.join("t10k-labels-idx1-ubyte"),
    )?;
    mnist_pool((&train.0, &train.1), (&test.0, &test.1), pca_dims)
}

fn run_mnist(args: MnistArgs) -> Result<()> {
    let cfg = Layered::load(
        args.common.config.as_deref(),
        &["data-dir", "pca-dims", "knn"],
    )?;
    let dir: PathBuf = cfg.pick(args.data_dir, "data-dir")?.ok_or_else(|| {
        Error::InvalidArgument("mnist needs --data-dir with the four IDX files".into())
    })?;
    let pca_dims = cfg.pick(args.pca_dims, "pca-dims")?.unwrap_or(50);
    let knn = cfg.pick(args.knn, "knn")?.unwrap_or(15);
    let run = resolve(args.common, &cfg)?;
    let pool = load_mnist(&dir, pca_dims)?;
    log::info!(
        "digit pool: {} images, {} test",
        pool.len(),
        pool.is_test.iter().filter(|&&t| t).count()
    );
    let outcome = classify_pool(&pool, knn, &run.settings, run.seed)?;
    outcome.write(&run.out)?;
    report("mnist", &outcome, &run.out);
    Ok(())
}

fn run_tracking(args: TrackingArgs) -> Result<()> {
    let cfg = Layered::load(
        args.common.config.as_deref(),
        &[
            "full",
            "width",
            "height",
            "frames",
            "unobserved",
            "corrupt-frame",
            "radius",
            "spurious-radius",
            "travel",
        ],
    )?;
    let full = args.full || cfg.pick(None, "full")?.unwrap_or(false);
    let (w, h, t, corrupt) = if full {
        (100, 100, 9, 5)
    } else {
        (20, 20, 5, 3)
    };
    let mut spec = TrackingSpec::new(
        cfg.pick(args.width, "width")?.unwrap_or(w),
        cfg.pick(args.height, "height")?.unwrap_or(h),
        cfg.pick(args.frames, "frames")?.unwrap_or(t),
    );
    if let Some(u) = cfg.pick(args.unobserved, "unobserved")? {
        spec.unobserved_frac = u;
    }
    spec.corrupt_frame = match cfg
        .pick(args.corrupt_frame, "corrupt-frame")?
        .unwrap_or(corrupt)
    {
        0 => None,
        f => Some(f - 1),
    };
    spec.radius = cfg.pick(args.radius, "radius")?;
    spec.spurious_radius = cfg.pick(args.spurious_radius, "spurious-radius")?;
    if let Some(travel) = cfg.pick(args.travel, "travel")? {
        spec.travel = travel;
    }
    let run = resolve(args.common, &cfg)?;
    let outcome = tracking_demo(&spec, &run.settings, run.seed)?;
    outcome.write(&run.out)?;
    report("tracking", &outcome.run, &run.out);
    let (edge, inner) = outcome.ci_widths();
    println!(
        "tracking: iou={:.4} spurious_hits={}/{} ci_width boundary={edge:.4} interior={inner:.4}",
        outcome.iou(),
        outcome.spurious_hits(),
        outcome.scene.spurious.len()
    );
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let cfg = Layered::load(
        args.common.config.as_deref(),
        &["sizes", "data-dir", "pca-dims", "knn", "dims", "separation"],
    )?;
    let mut sizes = cfg
        .list(args.sizes, "sizes")?
        .unwrap_or_else(|| vec![250, 500, 1000, 2000, 4000]);
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("--sizes is empty".into()));
    }
    sizes.sort_unstable();
    sizes.dedup();
    let knn = cfg.pick(args.knn, "knn")?.unwrap_or(15);
    let data_dir: Option<PathBuf> = cfg.pick(args.data_dir, "data-dir")?;
    let pca_dims = cfg.pick(args.pca_dims, "pca-dims")?.unwrap_or(50);
    let dims = cfg.pick(args.dims, "dims")?.unwrap_or(10);
    let separation = cfg.pick(args.separation, "separation")?.unwrap_or(2.0);
    let run = resolve(args.common, &cfg)?;
    let largest = *sizes.last().expect("non-empty");
    let pool = match data_dir {
        Some(dir) => load_mnist(&dir, pca_dims)?,
        None => {
            log::info!("no --data-dir; using a synthetic two-cluster pool of {largest}");
            synthetic_pool(largest, dims, separation, run.seed)?
        }
    };
    let rows = bench_scaling(&pool, &sizes, knn, &run.settings, run.seed)?;
    std::fs::create_dir_all(&run.out)?;
    let path = run.out.join("bench.csv");
    let mut w = BufWriter::new(File::create(&path)?);
    write_bench_csv(&rows, &mut w)?;
    w.flush()?;
    for r in &rows {
        println!(
            "bench: size={} method={} seconds={:.3} accuracy={:.4}",
            r.size,
            r.method.name(),
            r.seconds,
            r.accuracy
        );
    }
    println!("bench: wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::PathDemo(a) => run_path(a),
        Command::WsDemo(a) => run_ws(a),
        Command::Mnist(a) => run_mnist(a),
        Command::Tracking(a) => run_tracking(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
