use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use iqa_core::dataset::{
    compare_reports, evaluate_manifest, load_manifest, read_report, write_records_csv,
    write_report, EvalOptions,
};
use iqa_core::eval::DEFAULT_CONFIDENCE;
use iqa_core::{load_pair, psnr, score_pair, IqaError, SaliencyMethod};

mod summary;

/// Full-reference image quality scoring and benchmark evaluation.
#[derive(Parser)]
#[command(name = "iqa", version, about)]
struct Cli {
    /// Log progress (repeat for more detail). RUST_LOG overrides.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distortion score Q of a test image against its reference (0 = identical).
    Score {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = SaliencyMethod::Sr)]
        saliency: SaliencyMethod,
    },
    /// Evaluate a manifest against its subjective ratings.
    Eval(EvalArgs),
    /// Per-database F-test between the primary methods of two reports.
    Ftest {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
        confidence: f64,
    },
    /// PSNR in dB (capped at 100 dB for identical images).
    Psnr {
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Args)]
struct PairArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = SaliencyMethod::Sr)]
    saliency: SaliencyMethod,
    /// JSON report destination; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    jobs: Option<usize>,
    /// Extra metrics to evaluate on the same pairs, e.g. `psnr,gld-pft`.
    #[arg(long, value_delimiter = ',')]
    compare: Vec<String>,
    /// Also write the per-image records as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    /// Confidence of the F-test matrix between methods.
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    confidence: f64,
}

fn exit_code(err: &IqaError) -> u8 {
    match err {
        IqaError::DegenerateSeries(_) | IqaError::DegenerateSaliency => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), IqaError> {
    match cli.command {
        Command::Score { pair, saliency } => {
            let pair = load_pair(&pair.reference, &pair.test)?;
            println!("{:.6}", score_pair(&pair, saliency)?.q);
        }
        Command::Psnr { pair } => {
            let pair = load_pair(&pair.reference, &pair.test)?;
            println!("{:.6}", psnr(&pair));
        }
        Command::Eval(args) => eval(args)?,
        Command::Ftest { a, b, confidence } => {
            let cmp = compare_reports(&read_report(&a)?, &read_report(&b)?, confidence)?;
            print!("{}", summary::ftest_table(&cmp));
        }
    }
    Ok(())
}

fn eval(args: EvalArgs) -> Result<(), IqaError> {
    if args.jobs == Some(0) {
        return Err(IqaError::InvalidArgument("--jobs must be at least 1".into()));
    }
    if !(args.confidence > 0.0 && args.confidence < 1.0) {
        return Err(IqaError::InvalidArgument(format!(
            "--confidence must lie in (0, 1), got {}",
            args.confidence
        )));
    }
    let manifest = load_manifest(&args.manifest)?;
    log::info!(
        "{} pairs to score, {} rows skipped",
        manifest.entries.len(),
        manifest.skipped.len()
    );
    let options = EvalOptions {
        saliency: args.saliency,
        compare: args.compare,
        jobs: args.jobs,
        confidence: args.confidence,
    };
    let report = evaluate_manifest(&manifest, &options)?;
    let table = summary::eval_table(&report);
    match &args.out {
        Some(path) => {
            write_report(path, &report)?;
            print!("{table}");
        }
        None => {
            eprint!("{table}");
            print!("{}", report.to_json()?);
        }
    }
    if let Some(path) = &args.records {
        write_records_csv(path, &report)?;
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("iqa: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
