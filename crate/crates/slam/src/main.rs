//! `slam` CLI: evaluate labeling files, regenerate the simulated cases,
//! and run the sensitivity/complexity sweeps.
//!
//! JSON goes to stdout; human-readable tables and progress to stderr.
//! Exit codes: 0 success, 1 pipeline error, 2 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use slam::error::Result;
use slam::harness::{complexity_sweep, generate_case, sensitivity_sweep, CaseId};
use slam::io::{load_config, load_dataset, load_labeling, save_dataset, save_labeling, DatasetFormat};
use slam::model::{EvaluationConfig, MmdEstimator, RoleTag};
use slam::report::{evaluate_labelings, render_pretty};

#[derive(Parser)]
#[command(name = "slam", version, about = "Spatial labeling evaluation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Score predicted labelings against a ground truth.
    Evaluate(EvaluateArgs),
    /// Write one of the simulated cases (I..VI) as CSV files.
    Simulate(SimulateArgs),
    /// Run a bandwidth-sensitivity or runtime-complexity sweep.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config file; flags below override individual fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mutual k-NN neighbor count.
    #[arg(long)]
    k: Option<usize>,
    /// KDE bandwidth h.
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Gaussian kernel scale gamma.
    #[arg(long)]
    gamma: Option<f64>,
    /// Number of sampled empirical distributions per labeling.
    #[arg(long)]
    num_samples: Option<usize>,
    /// Points per sampled distribution.
    #[arg(long)]
    batch_size: Option<usize>,
    /// Sliced-Wasserstein projection count.
    #[arg(long)]
    num_projections: Option<usize>,
    /// Base RNG seed (echoed in the report).
    #[arg(long)]
    seed: Option<u64>,
    /// MMD estimator variant.
    #[arg(long, value_enum)]
    estimator: Option<EstimatorArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    PaperVerbatim,
    StandardBiased,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<EvaluationConfig> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => EvaluationConfig::default(),
        };
        if let Some(k) = self.k {
            cfg.k_neighbors = k;
        }
        if let Some(h) = self.bandwidth {
            cfg.bandwidth_h = h;
        }
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
        if let Some(v) = self.num_samples {
            cfg.num_samples = v;
        }
        if let Some(v) = self.batch_size {
            cfg.batch_size = v;
        }
        if let Some(v) = self.num_projections {
            cfg.num_projections = v;
        }
        if let Some(v) = self.seed {
            cfg.rng_seed = v;
        }
        if let Some(e) = self.estimator {
            cfg.mmd_estimator = match e {
                EstimatorArg::PaperVerbatim => MmdEstimator::PaperVerbatim,
                EstimatorArg::StandardBiased => MmdEstimator::StandardBiased,
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset file (.csv with spot_id,x,y[,a1..] or .json).
    #[arg(long)]
    dataset: PathBuf,
    /// Ground-truth labeling CSV (spot_id,label).
    #[arg(long)]
    truth: PathBuf,
    /// Predicted labeling CSV; repeatable. With several, consecutive
    /// pairs are treated as (worse, better) for Q coefficients.
    #[arg(long, required = true)]
    pred: Vec<PathBuf>,
    #[command(flatten)]
    config: ConfigArgs,
    /// Also write the scores as CSV to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a human-readable table to stderr.
    #[arg(long)]
    pretty: bool,
}

fn parse_case(s: &str) -> std::result::Result<CaseId, String> {
    s.parse::<CaseId>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct SimulateArgs {
    /// Case id: I..VI.
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the CSV files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Sensitivity,
    Complexity,
}

#[derive(Args)]
struct SweepArgs {
    /// Which sweep to run.
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Bandwidths for the sensitivity sweep; repeatable.
    #[arg(long = "h", default_values_t = [0.001, 0.01, 0.05, 0.1, 0.5])]
    h_values: Vec<f64>,
    /// Spot counts for the complexity sweep; repeatable.
    #[arg(long = "spots", default_values_t = [10usize, 100, 1000])]
    spot_counts: Vec<usize>,
    /// Label counts for the complexity sweep; repeatable.
    #[arg(long = "labels", default_values_t = [2usize, 5, 10, 15])]
    label_counts: Vec<usize>,
    #[command(flatten)]
    config: ConfigArgs,
    /// Write the sweep table CSV here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn dataset_format(path: &Path) -> DatasetFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => DatasetFormat::Json,
        _ => DatasetFormat::Csv,
    }
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let dataset = load_dataset(&args.dataset, dataset_format(&args.dataset))?;
    let truth = load_labeling(&args.truth, &dataset, RoleTag::GroundTruth)?;
    let mut predictions = Vec::new();
    for path in &args.pred {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("pred")
            .to_string();
        predictions.push((name, load_labeling(path, &dataset, RoleTag::Predicted)?));
    }
    let report = evaluate_labelings(&dataset, &truth, &predictions, &config)?;
    println!("{}", serde_json::to_string(&report)?);
    if args.pretty {
        eprint!("{}", render_pretty(&report));
    }
    if let Some(out) = &args.out {
        let mut csv = String::from("labeling,metric,value\n");
        for l in &report.labelings {
            for s in &l.scores {
                csv.push_str(&format!("{},{},{}\n", l.name, s.metric.name, s.value));
            }
        }
        fs::write(out, csv)?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let case = generate_case(args.case, args.seed)?;
    fs::create_dir_all(&args.out)?;
    save_dataset(&case.dataset, &args.out.join("dataset.csv"))?;
    save_labeling(&case.truth, &case.dataset, &args.out.join("truth.csv"))?;
    for (name, labeling) in case.labeling_names.iter().zip(&case.labelings) {
        save_labeling(labeling, &case.dataset, &args.out.join(format!("{name}.csv")))?;
    }
    eprintln!(
        "wrote case {} (n = {}, {} labelings) to {}",
        case.case_id,
        case.dataset.n(),
        case.labelings.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let csv = match args.kind {
        SweepKind::Sensitivity => {
            eprintln!(
                "sensitivity sweep: {} bandwidths x 10 steps",
                args.h_values.len()
            );
            let case = generate_case(CaseId::II, config.rng_seed)?;
            let rows = sensitivity_sweep(&args.h_values, &case, &config)?;
            let mut out = String::from("h,step,mislabels,d\n");
            for r in rows {
                out.push_str(&format!("{},{},{},{}\n", r.h, r.step, r.mislabels, r.d));
            }
            out
        }
        SweepKind::Complexity => {
            eprintln!(
                "complexity sweep: {} spot counts, {} label counts",
                args.spot_counts.len(),
                args.label_counts.len()
            );
            let rows = complexity_sweep(&args.spot_counts, &args.label_counts, &config)?;
            let mut out = String::from("sweep,n_spots,n_labels,seconds,d\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.sweep, r.n_spots, r.n_labels, r.seconds, r.d
                ));
            }
            out
        }
    };
    match &args.out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SLAM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Evaluate(args) => cmd_evaluate(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
