use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tgkz::cli::{run_text, Command, RunOptions, EXIT_PARSE};
use tgkz::exact_algebra::DEFAULT_PAIR_BUDGET;

/// Better-behaved GKZ systems: exact reports from a JSON problem spec.
#[derive(Parser, Debug)]
#[command(name = "tgkz", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON problem specification.
    #[arg(long)]
    spec: PathBuf,
    /// Degree bound for the binomial relations of the primitive presentation.
    #[arg(long)]
    bound: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pair budget for every Gröbner basis computation.
    #[arg(long, env = "TGKZ_PAIR_BUDGET", default_value_t = DEFAULT_PAIR_BUDGET)]
    pair_budget: usize,
    /// Worker threads (the report does not depend on this).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("tgkz: cannot read {}: {e}", args.spec.display());
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let opts = RunOptions { pair_budget: args.pair_budget, bound: args.bound };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = args.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().expect("thread pool");
    let outcome = pool.install(|| run_text(&text, args.command, &opts));
    let rendered = outcome.render();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("tgkz: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{rendered}"),
    }
    if let Some(err) = outcome.report.get("error") {
        eprintln!("tgkz: {}: {}", err["code"].as_str().unwrap_or(""), err["message"].as_str().unwrap_or(""));
    }
    ExitCode::from(outcome.exit_code as u8)
}
