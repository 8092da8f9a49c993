//! `eif` command line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or model error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eif_core::eval::{self, GridSpec};
use eif_core::io::{self, LabelColumn};
use eif_core::rng::derive_seed;
use eif_core::synth::{self, Generator, SinusoidParams};
use eif_core::{EifError, Extension, Scorer, TrainParams, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "eif", version, about = "Extended Isolation Forest anomaly detection")]
struct Cli {
    /// Worker threads for training and scoring (0 = all cores). Results do not
    /// depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset as CSV.
    Synth(SynthArgs),
    /// Train a forest on a CSV dataset and save it as JSON.
    Train(TrainArgs),
    /// Score every row of a CSV dataset.
    Score(ScoreArgs),
    /// Score a regular 2-D grid.
    Scoremap(ScoremapArgs),
    /// Score statistics along circles/spheres or shifted sine curves.
    Levelset(LevelsetArgs),
    /// Probe-score mean and variance as a function of forest size.
    Converge(ConvergeArgs),
    /// AUROC and AUPRC of a model on labeled data.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    Blob,
    #[value(alias = "double-blob")]
    DoubleBlob,
    Sinusoid,
    #[value(alias = "uniform-box")]
    UniformBox,
    Sphere,
    Line,
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Extended,
    Rotated,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Extended => Variant::Extended,
            VariantArg::Rotated => Variant::Rotated,
        }
    }
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of points (per cluster for double_blob).
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Blob center as a comma list (default: origin).
    #[arg(long, value_delimiter = ',')]
    mean: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 5.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 4.0 * std::f64::consts::PI)]
    x_max: f64,
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    #[arg(long, value_delimiter = ',')]
    lo: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    hi: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    #[arg(long, default_value_t = 1.0)]
    inner: f64,
    #[arg(long, default_value_t = 2.0)]
    outer: f64,
    /// Append this many injected anomalies and a `label` column.
    #[arg(long)]
    anomalies: Option<usize>,
    #[arg(long, default_value_t = eif_core::rng::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DataArgs {
    /// Treat the first CSV line as data rather than a header.
    #[arg(long)]
    no_header: bool,
    /// Column to drop from the features (name or 0-based index).
    #[arg(long)]
    label_column: Option<LabelColumn>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    csv: DataArgs,
    #[arg(long, default_value_t = 100)]
    trees: usize,
    /// Sub-sample size (default: min(256, rows)).
    #[arg(long)]
    psi: Option<usize>,
    /// Extension level 0..N-1, or `full` for N-1.
    #[arg(long, default_value = "full")]
    extension: Extension,
    #[arg(long, value_enum, default_value_t = VariantArg::Extended)]
    variant: VariantArg,
    #[arg(long, default_value_t = eif_core::rng::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    csv: DataArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ScoremapArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymin: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymax: f64,
    #[arg(long, default_value_t = 100)]
    nx: usize,
    #[arg(long, default_value_t = 100)]
    ny: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("levels").required(true).args(["radii", "offsets"]))]
struct LevelsetArgs {
    #[arg(long)]
    model: PathBuf,
    /// Sphere radii around the origin, comma separated.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Vertical offsets from the sine curve, comma separated (2-D models).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    offsets: Option<Vec<f64>>,
    #[arg(long, default_value_t = eval::DEFAULT_N_PROBE)]
    n_probe: usize,
    #[arg(long, default_value_t = 5.0)]
    amplitude: f64,
    #[arg(long, default_value_t = 4.0 * std::f64::consts::PI)]
    x_max: f64,
    #[arg(long, default_value_t = eif_core::rng::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long)]
    data: PathBuf,
    /// CSV of probe points.
    #[arg(long)]
    probe: PathBuf,
    #[command(flatten)]
    csv: DataArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    t_values: Vec<usize>,
    #[arg(long)]
    psi: Option<usize>,
    #[arg(long, default_value = "full")]
    extension: Extension,
    #[arg(long, value_enum, default_value_t = VariantArg::Extended)]
    variant: VariantArg,
    #[arg(long, default_value_t = eif_core::rng::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    label_column: LabelColumn,
    #[arg(long)]
    no_header: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(EifError),
}

impl From<EifError> for CliError {
    fn from(e: EifError) -> Self {
        CliError::Data(e)
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_DATA;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(text) => {
            if let Some(text) = text {
                if writeln!(out, "{text}").is_err() {
                    return EXIT_DATA;
                }
            }
            EXIT_OK
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

/// Runs one subcommand; `Some(text)` is printed on standard output.
fn dispatch(cmd: Command) -> CliResult<Option<String>> {
    match cmd {
        Command::Synth(a) => synth_cmd(a).map(|_| None),
        Command::Train(a) => train_cmd(a).map(|_| None),
        Command::Score(a) => score_cmd(a).map(|_| None),
        Command::Scoremap(a) => scoremap_cmd(a).map(|_| None),
        Command::Levelset(a) => levelset_cmd(a).map(|_| None),
        Command::Converge(a) => converge_cmd(a).map(|_| None),
        Command::Bench(a) => bench_cmd(a).map(Some),
    }
}

fn generator(a: &SynthArgs) -> CliResult<Generator> {
    Ok(match a.kind {
        Kind::Blob => Generator::Blob {
            n: a.n,
            dim: a.dim,
            mean: a.mean.clone().unwrap_or_else(|| vec![0.0; a.dim]),
            sigma: a.sigma,
        },
        Kind::DoubleBlob => Generator::DoubleBlob { n_per_blob: a.n },
        Kind::Sinusoid => Generator::Sinusoid {
            n: a.n,
            params: SinusoidParams {
                amplitude: a.amplitude,
                x_max: a.x_max,
                noise_sigma: a.noise,
            },
        },
        Kind::UniformBox => {
            let (Some(lo), Some(hi)) = (a.lo.clone(), a.hi.clone()) else {
                return Err(usage("--kind uniform_box needs --lo and --hi"));
            };
            Generator::UniformBox { n: a.n, lo, hi }
        }
        Kind::Sphere => Generator::SphereLevelSet {
            radius: a.radius,
            n: a.n,
            dim: a.dim,
        },
        Kind::Line => Generator::LineLevelSet {
            offset: a.offset,
            n: a.n,
            amplitude: a.amplitude,
            x_max: a.x_max,
        },
        Kind::Ring => Generator::Ring {
            n: a.n,
            inner: a.inner,
            outer: a.outer,
        },
    })
}

fn synth_cmd(a: SynthArgs) -> CliResult {
    let g = generator(&a)?;
    let mut data = g.generate::<f64>(a.seed).map_err(|e| usage(e.to_string()))?;
    let labels = match a.anomalies {
        None | Some(0) => None,
        Some(k) => {
            let anomalies = synth::inject_anomalies(k, &data, &g.anomaly_exclusion(), derive_seed(a.seed, 1))?;
            let mut labels = vec![0u8; data.len()];
            labels.extend(std::iter::repeat_n(1u8, anomalies.len()));
            data.extend(&anomalies)?;
            Some(labels)
        }
    };
    io::write_dataset_csv(&a.out, &data, labels.as_deref())?;
    Ok(())
}

fn read_data(path: &PathBuf, csv: &DataArgs) -> CliResult<eif_core::Dataset> {
    let (data, _) = io::read_csv(path, !csv.no_header, csv.label_column.as_ref())?;
    Ok(data)
}

fn train_params(
    trees: usize,
    psi: Option<usize>,
    extension: Extension,
    variant: VariantArg,
    seed: u64,
    dim: usize,
) -> CliResult<TrainParams> {
    let variant = Variant::from(variant);
    if variant == Variant::Rotated {
        if dim != 2 {
            return Err(usage(format!("--variant rotated needs 2-D data, got {dim}-D")));
        }
        if !matches!(extension, Extension::Full | Extension::Level(0)) {
            return Err(usage("--variant rotated splits at extension level 0 only"));
        }
    }
    extension.resolve(dim).map_err(|e| usage(e.to_string()))?;
    if trees == 0 {
        return Err(usage("--trees must be at least 1"));
    }
    Ok(TrainParams {
        trees,
        psi,
        extension,
        variant,
        seed,
    })
}

fn train_cmd(a: TrainArgs) -> CliResult {
    let data = read_data(&a.data, &a.csv)?;
    let params = train_params(a.trees, a.psi, a.extension, a.variant, a.seed, data.dim())?;
    let model = eif_core::train(&data, &params)?;
    io::save_forest(&model, &a.out)?;
    Ok(())
}

fn load(path: &PathBuf) -> CliResult<eif_core::Model> {
    Ok(io::load_forest(path)?)
}

fn score_cmd(a: ScoreArgs) -> CliResult {
    let model = load(&a.model)?;
    let data = read_data(&a.data, &a.csv)?;
    let scores = model.score_batch(&data)?;
    let ids: Vec<usize> = (0..scores.len()).collect();
    io::write_scores_csv(&a.out, &ids, &scores)?;
    Ok(())
}

fn scoremap_cmd(a: ScoremapArgs) -> CliResult {
    let grid = GridSpec {
        x_min: a.xmin,
        x_max: a.xmax,
        y_min: a.ymin,
        y_max: a.ymax,
        nx: a.nx,
        ny: a.ny,
    };
    grid.validate().map_err(|e| usage(e.to_string()))?;
    let model = load(&a.model)?;
    let map = eval::score_map(&model, &grid)?;
    io::write_grid_csv(&a.out, &map)?;
    Ok(())
}

fn levelset_cmd(a: LevelsetArgs) -> CliResult {
    if a.n_probe < 2 {
        return Err(usage("--n-probe must be at least 2"));
    }
    let model = load(&a.model)?;
    let stats = match (&a.radii, &a.offsets) {
        (Some(radii), None) => eval::levelset_stats(&model, radii, a.n_probe, model.dimension(), a.seed)?,
        (None, Some(offsets)) => {
            let params = SinusoidParams {
                amplitude: a.amplitude,
                x_max: a.x_max,
                ..SinusoidParams::default()
            };
            eval::line_levelset_stats(&model, offsets, a.n_probe, &params, a.seed)?
        }
        _ => return Err(usage("give exactly one of --radii or --offsets")),
    };
    io::write_stats_csv(&a.out, &stats)?;
    Ok(())
}

fn converge_cmd(a: ConvergeArgs) -> CliResult {
    if a.t_values.is_empty() || a.t_values[0] == 0 || a.t_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--t-values must be positive and strictly increasing"));
    }
    let data = read_data(&a.data, &a.csv)?;
    let probes = read_data(&a.probe, &a.csv)?;
    let params = train_params(1, a.psi, a.extension, a.variant, a.seed, data.dim())?;
    let series = eval::convergence_curve(
        &data,
        &probes,
        &a.t_values,
        params.psi,
        params.extension,
        params.variant,
        params.seed,
    )?;
    io::write_convergence_csv(&a.out, &series)?;
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> CliResult<String> {
    let model = load(&a.model)?;
    let (data, labels) = io::read_csv(&a.data, !a.no_header, Some(&a.label_column))?;
    let labels = labels.expect("label column requested");
    let scores = model.score_batch(&data)?;
    let ls = eif_core::LabeledScores::new(scores, labels)?;
    let roc = eif_core::auroc(&ls)?;
    let prc = eif_core::auprc(&ls)?;
    Ok(format!("auroc={} auprc={}", io::format_sig9(roc), io::format_sig9(prc)))
}
