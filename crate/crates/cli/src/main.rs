use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use arrlab_cli::case::read_case;
use arrlab_cli::{commands, CliError, CommandOutput};

/// Pak-Stanley labelings of multigraphical hyperplane arrangements.
#[derive(Parser)]
#[command(name = "arrlab", version, about)]
struct Cli {
    /// Emit machine-readable JSON instead of the human report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide label injectivity of a digraph's central arrangement.
    Injective { case: PathBuf },
    /// Label multiset over acyclic reorientations, duplicates annotated.
    Labels { case: PathBuf },
    /// Construct two reorientations sharing a label.
    Witness {
        case: PathBuf,
        /// Condition triple k i j (in the input labeling); defaults to the
        /// first one found.
        #[arg(long, num_args = 3, value_names = ["K", "I", "J"])]
        triple: Option<Vec<usize>>,
    },
    /// Enumerate regions with sign vectors, labels, and witness points.
    Regions { case: PathBuf },
    /// G-parking functions of the case's multigraph.
    Parking { case: PathBuf },
    /// Check that region labels are exactly the G-parking functions.
    Verify { case: PathBuf },
    /// Duplicate-closure connectivity and local-injectivity reports.
    Conjectures { case: PathBuf },
    /// Randomized conjecture sweep; counterexamples become case files.
    #[command(name = "scan-random")]
    ScanRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hyperplanes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Directory for counterexample case files (defaults to the current
        /// directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Replay the golden cases and the invariant suite.
    Selftest,
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Injective { case } => commands::injective(&read_case(case)?),
        Command::Labels { case } => commands::labels(&read_case(case)?),
        Command::Witness { case, triple } => {
            let triple = triple.as_ref().map(|v| (v[0], v[1], v[2]));
            commands::witness(&read_case(case)?, triple)
        }
        Command::Regions { case } => commands::regions(&read_case(case)?),
        Command::Parking { case } => commands::parking(&read_case(case)?),
        Command::Verify { case } => commands::verify(&read_case(case)?),
        Command::Conjectures { case } => commands::conjectures(&read_case(case)?),
        Command::ScanRandom {
            n,
            hyperplanes,
            seed,
            count,
            out_dir,
        } => commands::scan_random(*n, *hyperplanes, *seed, *count, out_dir.clone()),
        Command::Selftest => commands::selftest(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&output.json).expect("valid JSON value")
                );
            } else {
                print!("{}", output.human);
            }
            if output.verification_failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
