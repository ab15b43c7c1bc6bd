use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use super::{
    compare_runs, execute, files::write_text, load_network, Algorithm, HarnessConfig,
    HarnessError,
};
use crate::mads::{IncumbentPolicy, MadsConfig, PollOrder};
use crate::sim::FeederEvaluator;

#[derive(Debug, Parser)]
#[command(name = "mads-reconfig", version, about = "Bi-objective feeder reconfiguration search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run MADS or random search on a network.
    Run(RunArgs),
    /// Evaluate every configuration and emit the exact frontier.
    Enumerate(EnumerateArgs),
    /// Compare MADS against random search over several seeds.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Mads,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PollOrderArg {
    Lex,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum IncumbentArg {
    RoundRobin,
    FeasFirst,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "lex")]
    poll_order: PollOrderArg,
    #[arg(long, value_enum, default_value = "round-robin")]
    incumbent: IncumbentArg,
    /// Enable the adaptive Hamming-radius mesh (extension).
    #[arg(long)]
    mesh_adaptive: bool,
}

impl SearchArgs {
    fn poll_order(&self) -> PollOrder {
        match self.poll_order {
            PollOrderArg::Lex => PollOrder::Lexicographic,
            PollOrderArg::Random => PollOrder::SeededRandom,
        }
    }

    fn incumbent_policy(&self) -> IncumbentPolicy {
        match self.incumbent {
            IncumbentArg::RoundRobin => IncumbentPolicy::RoundRobin,
            IncumbentArg::FeasFirst => IncumbentPolicy::FeasibilityFirst,
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long = "algo", value_enum, default_value = "mads")]
    algo: AlgoArg,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    search: SearchArgs,
    /// Trace CSV output path.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Frontier JSON output path.
    #[arg(long)]
    frontier: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    frontier: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Comma-separated seeds, e.g. `0,1,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    seeds: Vec<u64>,
    #[command(flatten)]
    search: SearchArgs,
    /// Report JSON output path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(line) => {
            println!("{line}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<String, HarnessError> {
    match command {
        Command::Run(args) => {
            let config = HarnessConfig {
                network_path: args.network,
                algorithm: match args.algo {
                    AlgoArg::Mads => Algorithm::Mads,
                    AlgoArg::Random => Algorithm::Random,
                },
                budget: args.budget,
                seed: args.seed,
                poll_order: args.search.poll_order(),
                incumbent_policy: args.search.incumbent_policy(),
                mesh_adaptive: args.search.mesh_adaptive,
                trace_path: args.trace,
                frontier_path: args.frontier,
            };
            execute(&config).map(|s| s.to_string())
        }
        Command::Enumerate(args) => {
            let mut config = HarnessConfig::new(args.network, Algorithm::Enumerate);
            config.trace_path = args.trace;
            config.frontier_path = args.frontier;
            execute(&config).map(|s| s.to_string())
        }
        Command::Compare(args) => {
            let network = load_network(&args.network)?;
            let config = MadsConfig {
                budget: args.budget,
                poll_order: args.search.poll_order(),
                incumbent_policy: args.search.incumbent_policy(),
                mesh_adaptive: args.search.mesh_adaptive,
                ..MadsConfig::default()
            };
            let report = compare_runs(&mut FeederEvaluator::new(&network), &config, &args.seeds)?;
            let fmt = |v: Option<f64>| v.map_or("none".to_owned(), |v| format!("{v:.4}"));
            let line = format!(
                "seeds={} budget={} mads_median_best_feasible_f_kw={} random_median_best_feasible_f_kw={} \
                 mads_median_evals_to_feasible={} random_median_evals_to_feasible={}",
                report.seeds.len(),
                report.budget,
                fmt(report.mads_median.best_feasible_f),
                fmt(report.random_median.best_feasible_f),
                fmt(report.mads_median.evaluations_to_first_feasible),
                fmt(report.random_median.evaluations_to_first_feasible),
            );
            match &args.report {
                Some(path) => {
                    write_text(path, &report.to_json())?;
                    Ok(line)
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    let _ = stdout.write_all(report.to_json().as_bytes());
                    Ok(line)
                }
            }
        }
    }
}
