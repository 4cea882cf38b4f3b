use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lookout::experiments::{
    asymptotics_sweep, counterexample_trial_for, io as csv_io, run_comparison, Family,
};
use lookout::{lookout, KernelKind, LookoutError, LookoutParams, Variant};

#[derive(Parser)]
#[command(name = "lookout", version, about = "Density-based anomaly detection with extreme value calibration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every row of a numeric CSV file.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0.001)]
        alpha: f64,
        #[arg(long, default_value_t = 0.9)]
        beta: f64,
        #[arg(long, default_value_t = 0.98)]
        gamma: f64,
        /// Use the raw coordinates.
        #[arg(long)]
        no_scale: bool,
        #[arg(long, default_value = "gaussian")]
        kernel: KernelKind,
        #[arg(long, default_value = "v2")]
        variant: Variant,
    },
    /// Compare both detector variants on a synthetic experiment.
    Experiment {
        #[arg(long)]
        id: u8,
        /// Comma-separated 1-based iterations; all when omitted.
        #[arg(long, value_delimiter = ',')]
        iterations: Option<Vec<usize>>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Death-diameter quantiles across sample sizes.
    Asymptotics {
        #[arg(long, default_value = "gaussian")]
        family: Family,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "200,2000,20000")]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 0.98)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fraction of samples whose omega-th death exceeds 1.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "10000,100000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "fat_tail")]
        family: Family,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads().and_then(|()| run(cli.command)) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> Result<(), LookoutError> {
    let Ok(value) = std::env::var("LOOKOUT_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| LookoutError::InvalidParameter(format!("LOOKOUT_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| LookoutError::InvalidParameter(e.to_string()))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, LookoutError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(command: Command) -> Result<(), LookoutError> {
    match command {
        Command::Detect { input, output, alpha, beta, gamma, no_scale, kernel, variant } => {
            let params = LookoutParams { alpha, beta, gamma, scale: !no_scale, kernel, variant };
            params.validate()?;
            let data = csv_io::read_matrix(BufReader::new(File::open(&input)?))?;
            let result = lookout(&data, &params)?;
            csv_io::write_detect(sink(output.as_deref())?, &result)
        }
        Command::Experiment { id, iterations, reps, seed, out_dir } => {
            let table = run_comparison(id, iterations.as_deref(), reps, seed)?;
            std::fs::create_dir_all(&out_dir)?;
            let results = File::create(out_dir.join(format!("experiment_{id}_results.csv")))?;
            csv_io::write_results(BufWriter::new(results), id, &table.rows)?;
            let summary = File::create(out_dir.join(format!("experiment_{id}_summary.csv")))?;
            csv_io::write_summary(BufWriter::new(summary), id, &table.summary)
        }
        Command::Asymptotics { family, dim, n_grid, gamma, reps, seed, output } => {
            let records = asymptotics_sweep(family, dim, &n_grid, gamma, reps, seed)?;
            csv_io::write_asymptotics(sink(output.as_deref())?, &records)
        }
        Command::Counterexample { dim, n, reps, seed, family, output } => {
            let outcomes = n
                .iter()
                .map(|&n| counterexample_trial_for(family, n, dim, reps, seed))
                .collect::<Result<Vec<_>, _>>()?;
            csv_io::write_counterexample(sink(output.as_deref())?, &outcomes)
        }
    }
}
