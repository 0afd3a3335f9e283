//! Command-line front end: synthesize benchmark records, run the separation
//! pipeline, evaluate theoretical bounds, and reproduce the benchmark
//! experiments. All outputs are CSV/JSON files under the chosen output
//! directory; runs are deterministic given the configuration and seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use astft_core::bounds::bound_report;
use astft_core::error::Error;
use astft_core::eval::{
    run_figures, run_table1, separate, ConfigEcho, EvalReport, ModelChoice, RunParams,
    Table1Sigma,
};
use astft_core::io;
use astft_core::ridge::{sigma1_rule, KExpected, ThresholdPolicy};
use astft_core::signal::{add_noise, GroundTruth, SampledSignal, TestSignal};
use astft_core::stft::SigmaSeries;
use astft_core::window::{alpha_from_tau0, WindowSpec};
use astft_core::Result;

/// Output directory override; takes precedence over `--out` when set.
const OUT_ENV: &str = "ASTFT_OUT_DIR";

#[derive(Parser)]
#[command(name = "astft", version, about = "Adaptive-STFT multicomponent signal separation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a benchmark record and its ground truth as CSV.
    Synth(SynthArgs),
    /// Full pipeline: STFT, ridge tracking, chirp-rate estimation, recovery.
    Separate(SeparateArgs),
    /// Theoretical bound report for a benchmark record.
    Bounds(BoundsArgs),
    /// Recovery-error table for the two-LFM record (all three models).
    Table1(Table1Args),
    /// The four figure experiments (clean and noisy error series).
    Figures(FiguresArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// one_chirp | one_cosine | two_lfm
    #[arg(long)]
    name: String,
    /// Contaminate the written signal at this SNR (dB).
    #[arg(long)]
    snr_db: Option<f64>,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args, Default)]
struct SeparateArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark name (one_chirp | one_cosine | two_lfm) or a signal CSV path.
    #[arg(long)]
    input: Option<String>,
    /// si | lc | lc-true-cr
    #[arg(long)]
    model: Option<String>,
    /// Number of components to track (omit to autodetect).
    #[arg(long)]
    k: Option<usize>,
    /// Window width: a number in seconds, "sigma1", or a sigma CSV path.
    #[arg(long)]
    sigma: Option<String>,
    /// Essential-support threshold τ₀.
    #[arg(long)]
    tau0: Option<f64>,
    /// Relative threshold ρ (fraction of the per-frame max |V|).
    #[arg(long)]
    rho: Option<f64>,
    /// Absolute threshold ε̃₁ (overrides --rho).
    #[arg(long)]
    threshold_abs: Option<f64>,
    /// Frequency-grid oversampling factor F.
    #[arg(long)]
    oversample: Option<usize>,
    /// Window truncation half-width in window widths.
    #[arg(long)]
    trunc: Option<f64>,
    /// Contaminate the input at this SNR (dB) before separation.
    #[arg(long)]
    snr_db: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Track a trend ridge at 0 Hz.
    #[arg(long)]
    trend: bool,
    /// Also dump the full transform (large).
    #[arg(long)]
    dump_tf: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// JSON mirror of the separate options.
#[derive(serde::Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<String>,
    model: Option<String>,
    k: Option<usize>,
    sigma: Option<String>,
    tau0: Option<f64>,
    rho: Option<f64>,
    threshold_abs: Option<f64>,
    oversample: Option<usize>,
    trunc: Option<f64>,
    snr_db: Option<f64>,
    seed: Option<u64>,
    trend: Option<bool>,
    dump_tf: Option<bool>,
    out: Option<String>,
}

#[derive(Args)]
struct BoundsArgs {
    /// one_chirp | one_cosine | two_lfm
    #[arg(long)]
    input: String,
    /// Constant window width in seconds, "sigma1", or a sigma CSV path.
    #[arg(long, default_value = "0.0625")]
    sigma: String,
    #[arg(long, default_value_t = 0.2)]
    tau0: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct Table1Args {
    /// User-supplied σ(t) CSV for the time-varying row.
    #[arg(long)]
    sigma_file: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn out_dir(requested: &Path) -> Result<PathBuf> {
    let dir = match std::env::var_os(OUT_ENV) {
        Some(v) => PathBuf::from(v),
        None => requested.to_path_buf(),
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Resolve a signal argument to a record plus ground truth when available.
fn resolve_input(input: &str) -> Result<(SampledSignal, Option<GroundTruth>, String)> {
    if let Ok(kind) = TestSignal::parse(input) {
        let (sig, truth) = kind.generate();
        return Ok((sig, Some(truth), kind.name().to_string()));
    }
    let path = Path::new(input);
    if path.exists() {
        let sig = io::read_signal_csv(path)?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "signal".into());
        return Ok((sig, None, name));
    }
    Err(Error::config(format!("input '{input}' is neither a benchmark name nor an existing file")))
}

fn resolve_sigma(arg: &str, n: usize, truth: Option<&GroundTruth>, tau0: f64) -> Result<SigmaSeries> {
    if let Ok(v) = arg.parse::<f64>() {
        return SigmaSeries::constant(v, n);
    }
    if arg == "sigma1" {
        let truth = truth.ok_or_else(|| {
            Error::config("sigma1 rule needs ground truth; use a benchmark input")
        })?;
        let ifs: Vec<Vec<f64>> = truth.components.iter().map(|c| c.if_hz.clone()).collect();
        return sigma1_rule(&ifs, alpha_from_tau0(tau0)?);
    }
    let series = io::read_sigma_csv(Path::new(arg))?;
    if series.len() != n {
        return Err(Error::config(format!(
            "sigma file has {} values, record has {n}",
            series.len()
        )));
    }
    Ok(series)
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let kind = TestSignal::parse(&args.name)?;
    let dir = out_dir(&args.out)?;
    let (clean, truth) = kind.generate();
    let signal = match args.snr_db {
        Some(db) => add_noise(&clean, db, args.seed)?,
        None => clean,
    };
    let sig_path = dir.join(format!("{}_signal.csv", kind.name()));
    let truth_path = dir.join(format!("{}_truth.csv", kind.name()));
    io::write_signal_csv(&sig_path, &signal)?;
    io::write_ground_truth_csv(&truth_path, &signal, &truth)?;
    println!("wrote {} and {}", sig_path.display(), truth_path.display());
    Ok(())
}

/// Summary JSON for a separation run.
#[derive(serde::Serialize)]
struct SeparateReport {
    config: ConfigEcho,
    k: usize,
    seed_frame: usize,
    flagged_frames: usize,
    /// Interior relative errors per component, when ground truth exists.
    component_rel_l2: Option<Vec<f64>>,
    rmse: Option<f64>,
    rmse_total: Option<f64>,
}

fn cmd_separate(args: &SeparateArgs) -> Result<()> {
    let file: FileConfig = match &args.config {
        Some(path) => serde_json::from_reader(std::fs::File::open(path)?)
            .map_err(|e| Error::config(format!("bad config {}: {e}", path.display())))?,
        None => FileConfig::default(),
    };
    let input = args
        .input
        .clone()
        .or(file.input)
        .ok_or_else(|| Error::config("no input given (flag --input or config field)"))?;
    let model = ModelChoice::parse(&args.model.clone().or(file.model).unwrap_or_else(|| "lc".into()))?;
    let sigma_arg = args.sigma.clone().or(file.sigma).unwrap_or_else(|| "0.0625".into());
    let tau0 = args.tau0.or(file.tau0).unwrap_or(WindowSpec::default().tau0);
    let threshold = match (args.threshold_abs.or(file.threshold_abs), args.rho.or(file.rho)) {
        (Some(abs), _) => ThresholdPolicy::Absolute(abs),
        (None, Some(rho)) => ThresholdPolicy::Relative(rho),
        (None, None) => ThresholdPolicy::default(),
    };
    threshold.validate()?;
    let oversample = args.oversample.or(file.oversample).unwrap_or(4);
    let truncation = args.trunc.or(file.trunc).unwrap_or(WindowSpec::default().truncation);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let snr_db = args.snr_db.or(file.snr_db);
    let trend = args.trend || file.trend.unwrap_or(false);
    let dump_tf = args.dump_tf || file.dump_tf.unwrap_or(false);
    let out = args
        .out
        .clone()
        .or(file.out.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let dir = out_dir(&out)?;

    let (clean, truth, name) = resolve_input(&input)?;
    if model == ModelChoice::LinearChirpTrue && truth.is_none() {
        return Err(Error::config("lc-true-cr needs ground truth; use a benchmark input"));
    }
    let signal = match snr_db {
        Some(db) => add_noise(&clean, db, seed)?,
        None => clean,
    };
    let sigma = resolve_sigma(&sigma_arg, signal.len(), truth.as_ref(), tau0)?;
    let k = match args.k.or(file.k) {
        Some(k) => KExpected::Fixed(k),
        None => match &truth {
            Some(t) if !t.components.is_empty() => KExpected::Fixed(t.num_components()),
            _ => KExpected::Auto,
        },
    };
    let params = RunParams { oversample, threshold, k, trend, truncation };
    let truth_chirp: Option<Vec<Vec<f64>>> =
        truth.as_ref().map(|t| t.components.iter().map(|c| c.chirp_rate.clone()).collect());
    let out_run = separate(&signal, &sigma, &params, model, truth_chirp.as_deref())?;

    let times: Vec<f64> = (0..signal.len()).map(|m| signal.time(m)).collect();
    io::write_ridge_csv(&dir.join("ridges.csv"), &times, &out_run.ridges)?;
    io::write_components_csv(&dir.join("components.csv"), &times, &out_run.recovery)?;
    if dump_tf {
        io::write_tf_csv(&dir.join("tf.csv"), &out_run.tf)?;
    }

    // interior relative errors when the truth is known
    let (mut rel, mut rmse, mut total) = (None, None, None);
    if let Some(t) = &truth {
        let errs = astft_core::eval::component_errors(&signal, t, &out_run.recovery)?;
        let sum: f64 = errs.iter().sum();
        rmse = Some(sum / errs.len() as f64);
        total = Some(sum);
        rel = Some(errs);
    }
    let report = SeparateReport {
        config: ConfigEcho {
            signal: name,
            sigma_source: sigma.source,
            sigma_first: sigma.values[0],
            tau0,
            threshold,
            oversample,
            model,
            snr_db,
            seed: snr_db.map(|_| seed),
        },
        k: out_run.ridges.num_components(),
        seed_frame: out_run.ridges.seed_frame,
        flagged_frames: out_run.ridges.flagged.iter().filter(|&&f| f).count(),
        component_rel_l2: rel,
        rmse,
        rmse_total: total,
    };
    io::write_json(&dir.join("report.json"), &report)?;
    println!(
        "separated {} component(s); outputs in {}",
        report.k,
        dir.display()
    );
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs) -> Result<()> {
    let kind = TestSignal::parse(&args.input)?;
    let dir = out_dir(&args.out)?;
    let (signal, truth) = kind.generate();
    let sigma = resolve_sigma(&args.sigma, signal.len(), Some(&truth), args.tau0)?;
    let assumptions = kind.assumptions();
    let report = bound_report(&signal, &truth, &sigma, args.tau0, &assumptions, None)?;
    let path = dir.join(format!("{}_bounds.csv", kind.name()));
    io::write_bounds_csv(&path, &report)?;
    let passes = report
        .rows
        .iter()
        .filter(|r| r.flags.sep_sinusoidal && r.flags.sep_chirp)
        .count();
    println!(
        "wrote {} ({} rows, {passes} with both separation flags passing)",
        path.display(),
        report.rows.len()
    );
    Ok(())
}

fn cmd_table1(args: &Table1Args) -> Result<()> {
    let dir = out_dir(&args.out)?;
    let mut rows: Vec<(String, [EvalReport; 3])> = Vec::new();
    rows.push(("sigma_1_16".into(), run_table1(Table1Sigma::ConstSixteenth)?));
    if let Some(path) = &args.sigma_file {
        let sigma = io::read_sigma_csv(path)?;
        rows.push(("sigma_user".into(), run_table1(Table1Sigma::User(sigma))?));
    }
    for (label, reports) in &rows {
        println!(
            "{label}: si = {:.4}  lc = {:.4}  lc-true-cr = {:.4}",
            reports[0].rmse_total, reports[1].rmse_total, reports[2].rmse_total
        );
    }
    let reports: Vec<&EvalReport> = rows.iter().flat_map(|(_, r)| r.iter()).collect();
    io::write_json(&dir.join("table1.json"), &reports)?;
    println!("wrote {}", dir.join("table1.json").display());
    Ok(())
}

fn cmd_figures(args: &FiguresArgs) -> Result<()> {
    let dir = out_dir(&args.out)?;
    let reports = run_figures(args.seed)?;
    for r in &reports {
        io::write_figure_csv(&dir.join(format!("figure_{}.csv", r.name)), r)?;
        println!(
            "{}: interior median |err| si = {:.4}, lc = {:.4}",
            r.name, r.median_si, r.median_lc_est
        );
    }
    io::write_json(&dir.join("figures.json"), &reports)?;
    println!("wrote {}", dir.join("figures.json").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Separate(args) => cmd_separate(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Table1(args) => cmd_table1(args),
        Command::Figures(args) => cmd_figures(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
