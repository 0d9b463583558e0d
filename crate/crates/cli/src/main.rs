use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dplab_experiment::{execute, plot, Kind, Overrides};

#[derive(Parser)]
#[command(
    name = "dplab",
    version,
    about = "Double phase obstacle problems, capacities, covering estimates and removability runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Uniform refinements after the coarse mesh.
    #[arg(long)]
    refine: Option<usize>,
    /// Enforce 1 < p < q < n and q/p <= 1 + alpha/n even if the config is exploratory.
    #[arg(long)]
    strict_pq: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    Solve(RunArgs),
    Obstacle(RunArgs),
    Capacity(RunArgs),
    Hausdorff(RunArgs),
    Regularity(RunArgs),
    Removability(RunArgs),
    /// Rebuild plotdata.csv from an existing report directory.
    Plotdata {
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Solve(a) => (Kind::Solve, a),
        Command::Obstacle(a) => (Kind::Obstacle, a),
        Command::Capacity(a) => (Kind::Capacity, a),
        Command::Hausdorff(a) => (Kind::Hausdorff, a),
        Command::Regularity(a) => (Kind::Regularity, a),
        Command::Removability(a) => (Kind::Removability, a),
        Command::Plotdata { dir } => {
            return match plot::emit_plotdata(&dir) {
                Ok(t) => {
                    println!("wrote {} rows to {}", t.rows.len(), dir.join(plot::PLOTDATA).display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("dplab: {e}");
                    ExitCode::from(e.exit_code())
                }
            };
        }
    };
    let overrides = Overrides { out: args.out, refine: args.refine, strict_pq: args.strict_pq, seed: args.seed };
    match execute(kind, &args.config, &overrides) {
        Ok(summary) => {
            for c in &summary.outcome.checks {
                let detail = match (c.value, c.limit) {
                    (Some(v), Some(l)) => format!(" ({v:.6e} vs {l:.3e})"),
                    _ => String::new(),
                };
                println!("{} {}{detail}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            println!("reports in {}", summary.out.display());
            if summary.passed() {
                ExitCode::SUCCESS
            } else {
                let failed: Vec<_> =
                    summary.outcome.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                eprintln!("dplab: failing checks: {}", failed.join(", "));
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dplab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
