use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dilation_core::experiments::{run_cara_check, run_rate_study, run_table1, run_table2};
use dilation_core::{Design, ExperimentConfig, GridSpec};

mod config;

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "dilation", version, about = "Monte Carlo studies for dilation bootstrap confidence regions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bootstrap dilation rejection rates
    Table1(Flags),
    /// Subsampling comparator rejection rates
    Table2(Flags),
    /// Median bootstrap matching cost against n for uniform data in d >= 2
    RateStudy(Flags),
    /// Portfolio identified set: closed form against a constraint scan
    CaraCheck(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Sample size (repeatable)
    #[arg(long = "n")]
    n: Vec<usize>,
    /// Monte Carlo worlds per cell
    #[arg(long)]
    mc_reps: Option<usize>,
    /// Bootstrap replicates (table2: number of subsamples)
    #[arg(long)]
    bootstrap_reps: Option<usize>,
    /// Subsample size (repeatable, table2)
    #[arg(long)]
    subsample_size: Vec<usize>,
    /// Significance level (repeatable)
    #[arg(long)]
    alpha: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter grid as lo:hi:step
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    /// Dimension for the rate study
    #[arg(long)]
    dimension: Option<usize>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    lambda_lo: Option<f64>,
    #[arg(long)]
    lambda_hi: Option<f64>,
    /// Measurement-error radius for cara-check
    #[arg(long)]
    eta: Option<f64>,
    /// Write CSV here
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value defaults, overridden by flags
    #[arg(long)]
    config: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<dilation_core::Error> for Failure {
    fn from(e: dilation_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn build_config(design: Design, flags: Flags) -> Result<(ExperimentConfig, Option<PathBuf>), Failure> {
    let file = match &flags.config {
        Some(path) => ConfigFile::load(path).map_err(Failure::Usage)?,
        None => ConfigFile::default(),
    };
    let mut c = ExperimentConfig::new(design);
    c.sizes = pick_list(flags.n, file.list("n")?);
    c.mc_reps = flags.mc_reps.or(file.get("mc-reps")?);
    c.bootstrap_reps = flags.bootstrap_reps.or(file.get("bootstrap-reps")?);
    c.subsample_sizes = pick_list(flags.subsample_size, file.list("subsample-size")?);
    c.alphas = pick_list(flags.alpha, file.list("alpha")?);
    if let Some(seed) = flags.seed.or(file.get("seed")?) {
        c.seed = seed;
    }
    c.grid = flags.grid.or(file.get("grid")?);
    c.dimension = flags.dimension.or(file.get("dimension")?);
    c.workers = flags.workers.or(file.get("workers")?);
    if let Some(v) = flags.lambda_lo.or(file.get("lambda-lo")?) {
        c.lambda_lo = v;
    }
    if let Some(v) = flags.lambda_hi.or(file.get("lambda-hi")?) {
        c.lambda_hi = v;
    }
    if let Some(v) = flags.eta.or(file.get("eta")?) {
        c.eta = v;
    }
    let out = flags.out.or(file.get::<PathBuf>("out")?);
    c.validate()?;
    Ok((c, out))
}

fn pick_list<T>(cli: Vec<T>, file: Vec<T>) -> Vec<T> {
    if cli.is_empty() {
        file
    } else {
        cli
    }
}

fn run(command: Command) -> Result<(), Failure> {
    let (design, flags) = match command {
        Command::Table1(f) => (Design::Table1, f),
        Command::Table2(f) => (Design::Table2, f),
        Command::RateStudy(f) => (Design::RateStudy, f),
        Command::CaraCheck(f) => (Design::CaraCheck, f),
    };
    let (config, out) = build_config(design, flags)?;
    let mut failure = None;
    let table = match design {
        Design::Table1 => run_table1(&config)?.table(),
        Design::Table2 => run_table2(&config)?.table(),
        Design::RateStudy => {
            let study = run_rate_study(&config)?;
            println!("normalized statistic spread (max / min): {:.3}", study.spread());
            study.table()
        }
        Design::CaraCheck => {
            let check = run_cara_check(&config)?;
            if !check.passed() {
                failure = Some(format!(
                    "analytic [{}, {}] and scanned interval {:?} differ by more than one grid step",
                    check.analytic.lo, check.analytic.hi, check.scanned
                ));
            }
            check.table()
        }
    };
    print!("{}", table.to_text());
    if let Some(path) = out {
        std::fs::write(&path, table.to_csv())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    match failure {
        Some(msg) => Err(Failure::Check(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
