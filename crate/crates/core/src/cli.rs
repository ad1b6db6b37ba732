//! Command-line front end. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certify::{criterion_check, Outcome};
use crate::error::{Error, Result};
use crate::experiments::{
    default_l_schedule, gromov_tail_stats, probability_curve, shadow_decay_curve, write_curve_csv,
    write_decay_csv, write_tail_csv, ExperimentConfig,
};
use crate::geometry::{estimate_delta, PointSampler};
use crate::plot::{render_svg, PlotSpec, Table};
use crate::space::ModelSpace;
use crate::walk::{child_seed, estimate_drift, rng_from_seed, sample_path, Measure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hypwalk",
    version,
    about = "Certify free undistorted subgroups of hyperbolic isometry groups and run random-walk experiments"
)]
pub struct Cli {
    /// Worker threads (falls back to HYPWALK_THREADS, then all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// File of key=value lines supplying flags not given on the command line
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Tree,
    Plane,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceOpts {
    /// Model space
    #[arg(long, value_enum, default_value = "tree")]
    pub space: SpaceArg,
    /// Rank of the free group (tree only)
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Hyperbolicity constant [default: 0 for the tree; required for the plane]
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureOpts {
    /// Measure file of `<element> <probability>` lines [default: uniform on the tree's generators and inverses]
    #[arg(long)]
    pub measure: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the ping-pong criterion for a generator file
    Certify {
        #[command(flatten)]
        space: SpaceOpts,
        /// Generator file, one element per line
        #[arg(long)]
        generators: PathBuf,
    },
    /// Sample one random walk path
    Walk {
        #[command(flatten)]
        space: SpaceOpts,
        #[command(flatten)]
        measure: MeasureOpts,
        /// Number of steps
        #[arg(long)]
        n: usize,
        /// Master seed
        #[arg(long)]
        seed: u64,
        /// Output CSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the drift d(x0, w_n x0)/n
    Drift {
        #[command(flatten)]
        space: SpaceOpts,
        #[command(flatten)]
        measure: MeasureOpts,
        /// Walk length
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Independent walks
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Master seed
        #[arg(long)]
        seed: u64,
    },
    /// Estimate the four-point hyperbolicity constant by sampling
    Delta {
        #[command(flatten)]
        space: SpaceOpts,
        /// Sampled quadruples
        #[arg(long, default_value_t = 10_000)]
        quadruples: usize,
        /// Sampling radius around the basepoint (plane)
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
        /// Longest sampled word (tree)
        #[arg(long, default_value_t = 50)]
        max_len: usize,
        /// Multiplier applied to the observed maximum
        #[arg(long, default_value_t = 1.5)]
        safety: f64,
        /// Master seed
        #[arg(long)]
        seed: u64,
    },
    /// Certification probability of k independent walks as a function of n
    Curve {
        #[command(flatten)]
        space: SpaceOpts,
        #[command(flatten)]
        measure: MeasureOpts,
        /// Number of walks per trial
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Comma-separated increasing walk lengths
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Trials per walk length
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Master seed
        #[arg(long)]
        seed: u64,
        /// Output CSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tail probabilities of Gromov products between walk positions
    Tails {
        #[command(flatten)]
        space: SpaceOpts,
        #[command(flatten)]
        measure: MeasureOpts,
        /// Comma-separated increasing walk lengths
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Trials per walk length
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Constant threshold l [default: max(1, min(floor(sqrt n), floor(L n / 4)))]
        #[arg(long)]
        l: Option<usize>,
        /// Drift L for the default threshold [default: estimated from the seed]
        #[arg(long)]
        drift: Option<f64>,
        /// Master seed
        #[arg(long)]
        seed: u64,
        /// Output CSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest sampled shadow mass as a function of the distance parameter r
    ShadowDecay {
        #[command(flatten)]
        space: SpaceOpts,
        #[command(flatten)]
        measure: MeasureOpts,
        /// Walk length
        #[arg(long)]
        n: usize,
        /// Comma-separated increasing distance parameters
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
        /// Sampled shadows
        #[arg(long, default_value_t = 200)]
        shadows: usize,
        /// Walks per shadow mass estimate
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Master seed
        #[arg(long)]
        seed: u64,
        /// Output CSV [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a CSV file as an SVG line chart
    Plot {
        /// Input CSV
        #[arg(long)]
        input: PathBuf,
        /// Output SVG
        #[arg(long)]
        out: PathBuf,
        /// Column for the horizontal axis
        #[arg(long, default_value = "n")]
        x: String,
        /// Column for the vertical axis
        #[arg(long, default_value = "p_hat")]
        y: String,
        /// Column of error-bar half-widths
        #[arg(long)]
        errorbar: Option<String>,
        /// Column splitting rows into separate lines
        #[arg(long)]
        series: Option<String>,
        /// Chart title [default: "<y> vs <x>"]
        #[arg(long)]
        title: Option<String>,
    },
}

/// Appends `--key=value` for every config entry whose flag is absent from `argv`.
fn merge_config(mut argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = argv.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = read(&path)?;
    let present: Vec<String> = argv
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("{}: expected key=value", path.display()),
        })?;
        let key = key.trim().trim_start_matches("--");
        if key == "config" {
            return Err(Error::Parse {
                line: i + 1,
                message: "config files cannot include other config files".into(),
            });
        }
        if !present.iter().any(|p| p == key) {
            argv.push(format!("--{key}={}", value.trim()).into());
        }
    }
    Ok(argv)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output error: {e}"))
}

fn build_space(opts: &SpaceOpts, need_delta: bool) -> Result<ModelSpace> {
    match opts.space {
        SpaceArg::Tree => ModelSpace::tree(opts.rank)?.with_delta(opts.delta.unwrap_or(0.0)),
        SpaceArg::Plane => match opts.delta {
            Some(d) => ModelSpace::plane(d),
            None if need_delta => Err(Error::InvalidArgument(
                "the plane needs --delta (see `hypwalk delta --space plane`)".into(),
            )),
            None => ModelSpace::plane(0.0),
        },
    }
}

fn build_measure(opts: &MeasureOpts, space: &ModelSpace, err: &mut dyn Write) -> Result<Measure> {
    let mu = match (&opts.measure, space.rank()) {
        (Some(path), _) => Measure::parse(&read(path)?, space)?,
        (None, Some(rank)) => Measure::uniform_symmetric(rank as usize)?,
        (None, None) => {
            return Err(Error::InvalidArgument("the plane needs --measure".into()));
        }
    };
    space.check_element(&mu.identity())?;
    if mu.is_degenerate() {
        let _ = writeln!(
            err,
            "warning: the measure has a single support point and cannot be nonelementary"
        );
    }
    Ok(mu)
}

/// Writes to `--out` when given, otherwise to stdout.
fn emit(out_path: &Option<PathBuf>, bytes: &[u8], out: &mut dyn Write) -> Result<()> {
    match out_path {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(io_err),
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Certify { space, generators } => {
            let space = build_space(&space, true)?;
            let gens = space.parse_generators(&read(&generators)?)?;
            let outcome = criterion_check(&gens, &space, space.delta())?;
            write!(out, "{outcome}").map_err(io_err)?;
            Ok(match outcome {
                Outcome::Certified(_) => EXIT_OK,
                Outcome::Failed(_) => EXIT_NOT_CERTIFIED,
            })
        }
        Command::Walk {
            space,
            measure,
            n,
            seed,
            out: out_path,
        } => {
            let space = build_space(&space, false)?;
            let mu = build_measure(&measure, &space, err)?;
            let path = sample_path(&mu, n, seed)?;
            let mut buf = String::from("step,increment,position,displacement\n");
            for (i, (g, w)) in path.increments.iter().zip(&path.positions).enumerate() {
                let d = space.displacement(w)?;
                buf.push_str(&format!("{},{},{},{}\n", i + 1, g, w, d));
            }
            emit(&out_path, buf.as_bytes(), out)?;
            Ok(EXIT_OK)
        }
        Command::Drift {
            space,
            measure,
            n,
            trials,
            seed,
        } => {
            let space = build_space(&space, false)?;
            let mu = build_measure(&measure, &space, err)?;
            let est = estimate_drift(&mu, &space, n, trials, seed)?;
            writeln!(
                out,
                "space = {space}\nn = {}\ntrials = {}\nl_hat = {}\nstderr = {}",
                est.n, est.trials, est.l_hat, est.stderr
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Delta {
            space,
            quadruples,
            radius,
            max_len,
            safety,
            seed,
        } => {
            let space = build_space(&space, false)?;
            let sampler = match space.rank() {
                Some(_) => PointSampler::TreeWords { max_len },
                None => PointSampler::PlaneBall { radius },
            };
            let mut rng = rng_from_seed(seed);
            let est = estimate_delta(&space, || sampler.sample(&space, &mut rng), quadruples, safety)?;
            writeln!(
                out,
                "space = {space}\nquadruples = {}\ndelta_hat = {}\nsafety_factor = {}\ndelta_used = {}\nnote = delta_hat is a sampled lower bound for the four-point constant",
                est.quadruples_sampled, est.delta_hat, est.safety_factor, est.delta_used
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Curve {
            space,
            measure,
            k,
            n,
            trials,
            seed,
            out: out_path,
        } => {
            let space = build_space(&space, true)?;
            let measure = build_measure(&measure, &space, err)?;
            let cfg = ExperimentConfig {
                space,
                measure,
                k,
                n_grid: n,
                trials,
                master_seed: seed,
            };
            let rows = probability_curve(&cfg)?;
            let mut buf = Vec::new();
            write_curve_csv(&rows, &mut buf).map_err(io_err)?;
            emit(&out_path, &buf, out)?;
            Ok(EXIT_OK)
        }
        Command::Tails {
            space,
            measure,
            n,
            trials,
            l,
            drift,
            seed,
            out: out_path,
        } => {
            let space = build_space(&space, false)?;
            let measure = build_measure(&measure, &space, err)?;
            let cfg = ExperimentConfig {
                space,
                measure,
                k: 2,
                n_grid: n,
                trials,
                master_seed: seed,
            };
            cfg.validate()?;
            let rows = match l {
                Some(l) => gromov_tail_stats(&cfg, |_| l)?,
                None => {
                    let l_hat = match drift {
                        Some(x) => x,
                        None => {
                            let n_max = *cfg.n_grid.last().expect("validated grid");
                            let est = estimate_drift(
                                &cfg.measure,
                                &cfg.space,
                                n_max,
                                100,
                                child_seed(seed, u64::MAX),
                            )?;
                            let _ = writeln!(err, "estimated drift {} at n = {n_max}", est.l_hat);
                            est.l_hat
                        }
                    };
                    default_l_schedule(1, l_hat)?;
                    gromov_tail_stats(&cfg, |n| default_l_schedule(n, l_hat).expect("checked drift"))?
                }
            };
            let mut buf = Vec::new();
            write_tail_csv(&rows, &mut buf).map_err(io_err)?;
            emit(&out_path, &buf, out)?;
            Ok(EXIT_OK)
        }
        Command::ShadowDecay {
            space,
            measure,
            n,
            r,
            shadows,
            samples,
            seed,
            out: out_path,
        } => {
            let space = build_space(&space, false)?;
            let measure = build_measure(&measure, &space, err)?;
            let cfg = ExperimentConfig {
                space,
                measure,
                k: 1,
                n_grid: vec![n],
                trials: 1,
                master_seed: seed,
            };
            let rows = shadow_decay_curve(&cfg, n, &r, shadows, samples)?;
            let mut buf = Vec::new();
            write_decay_csv(&rows, &mut buf).map_err(io_err)?;
            emit(&out_path, &buf, out)?;
            Ok(EXIT_OK)
        }
        Command::Plot {
            input,
            out: out_path,
            x,
            y,
            errorbar,
            series,
            title,
        } => {
            let table = Table::parse(&read(&input)?)?;
            let svg = render_svg(
                &table,
                &PlotSpec {
                    x,
                    y,
                    errorbar,
                    series,
                    title,
                },
            )?;
            write_file(&out_path, svg.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if let Some(n) = flag {
        return Ok(Some(n));
    }
    match std::env::var("HYPWALK_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("HYPWALK_THREADS={v:?} is not a count"))),
        _ => Ok(None),
    }
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::InvalidArgument(format!("cannot start thread pool: {e}"))),
        None => Ok(f()),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be at least 1".into())),
        _ => Ok(f()),
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 success, 2 criterion not certified, 1 any error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    let result = thread_count(cli.threads).and_then(|threads| {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = with_threads(threads, || execute(cli.command, &mut o, &mut e));
        let _ = out.write_all(&o);
        let _ = err.write_all(&e);
        code.and_then(|c| c)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

/// Help text of a subcommand, or of the program when `sub` is `None`.
pub fn help_text(sub: Option<&str>) -> String {
    use clap::CommandFactory;
    let mut cmd = Cli::command();
    cmd.build();
    match sub {
        None => cmd.render_long_help().to_string(),
        Some(name) => cmd
            .find_subcommand_mut(name)
            .map(|c| c.render_long_help().to_string())
            .unwrap_or_default(),
    }
}

pub const SUBCOMMANDS: [&str; 8] = [
    "certify",
    "walk",
    "drift",
    "delta",
    "curve",
    "tails",
    "shadow-decay",
    "plot",
];
