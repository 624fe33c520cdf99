use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use massey_cli::{
    cmd_cocycle_check, cmd_formation, cmd_massey, cmd_pipeline, cmd_sweep, error_report, render, write_atomic, CliError,
    CliResult, Outcome, DEFAULT_SAMPLES,
};

/// Mod-m cohomology, triple Massey products and Kummer formations of finite groups.
///
/// Exit codes: 0 ok, 2 invalid input (including a failed named step of the
/// formation pipeline), 3 guard exceeded, 4 internal inconsistency.
#[derive(Parser)]
#[command(name = "massey", version)]
struct Cli {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Size cap for the job (enumeration cap, triple limit or H² order limit)
    #[arg(long, global = true)]
    guard: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the triple Massey product ⟨χ1, χ2, χ3⟩
    Massey {
        /// Library name, inline JSON group spec, or a JSON file
        #[arg(long)]
        group: String,
        #[arg(long)]
        modulus: u32,
        /// JSON array of three characters, e.g. [[1,0],[0,1],[1,1]]
        #[arg(long)]
        chars: String,
        /// Cross-check against the brute-force oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Check the 2-cocycle identity for c and the Schreier isomorphism on Ū_n(Z/m)
    CocycleCheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        modulus: u32,
        /// Random triples or pairs when the check is not exhaustive
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// Check KF1–KF4 on a formation fixture and run its pipeline section
    Formation {
        #[arg(long)]
        fixture: PathBuf,
        /// Override the pipeline characters
        #[arg(long)]
        chars: Option<String>,
    },
    /// Run the lifting pipeline on a formation fixture
    Pipeline {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        chars: Option<String>,
    },
    /// Sweep all character triples of library groups
    Sweep {
        /// Comma-separated library names; all groups of order ≤ 16 when absent
        #[arg(long)]
        group: Option<String>,
        /// Comma-separated moduli
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        modulus: Vec<u32>,
        #[arg(long)]
        oracle: bool,
    },
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Massey {
            group,
            modulus,
            chars,
            oracle,
        } => cmd_massey(group, *modulus, chars, *oracle, cli.guard),
        Command::CocycleCheck { n, modulus, samples } => cmd_cocycle_check(*n, *modulus, *samples, cli.guard, cli.seed),
        Command::Formation { fixture, chars } => cmd_formation(fixture, chars.as_deref(), cli.guard),
        Command::Pipeline { fixture, chars } => cmd_pipeline(fixture, chars.as_deref(), cli.guard),
        Command::Sweep { group, modulus, oracle } => cmd_sweep(group.as_deref(), modulus, *oracle, cli.guard),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, code) = match run(&cli) {
        Ok(o) => (o.report, o.exit),
        Err(e) => {
            eprintln!("error: {e}");
            (error_report(&e), e.exit_code())
        }
    };
    if let Err(e) = emit(&cli, &render(&report)) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
