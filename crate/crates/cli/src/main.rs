use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use discord_core::discord::{analyze, AnalysisOptions, ZERO_DISCORD_TOL};
use discord_core::families::sweep;
use discord_core::measurement::{qubit_basis, QubitBasisAngles};
use discord_core::suites::{run_suite, Suite, VerifyConfig};
use discord_core::{Family, SearchConfig};

mod error;
mod output;
mod state_file;

use error::CliError;
use output::LogBase;

#[derive(Parser)]
#[command(
    name = "discord",
    version,
    about = "Quantum discord measures for bipartite states"
)]
struct Cli {
    /// Logarithm base for printed entropies
    #[arg(long, value_enum, default_value = "2", global = true)]
    log_base: LogBase,

    /// Grid points per angle for every search (replaces the defaults)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..))]
    grid: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every measure for the state in a file
    Compute(ComputeArgs),
    /// Evaluate a state family on an evenly spaced parameter range and write CSV
    Sweep(SweepArgs),
    /// Run seeded property suites
    Verify(VerifyArgs),
    /// Write a family member as a state file
    State(StateArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// State file: 'dims m n' followed by one row of (re, im) pairs per line
    file: PathBuf,
    /// Threshold below which alpha counts as zero
    #[arg(long, default_value_t = ZERO_DISCORD_TOL)]
    tol: f64,
    /// Also run the brute-force search over all product bases
    #[arg(long)]
    oracle: bool,
    /// Run the oracle even on entangled input
    #[arg(long)]
    entangled: bool,
    /// Also report delta for the qubit basis on A with these Bloch angles
    #[arg(long, value_name = "THETA,PHI", value_parser = parse_angles)]
    delta_basis: Option<QubitBasisAngles>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// First parameter; fractions such as 1/3 are accepted
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    from: f64,
    /// Last parameter; fractions such as 1/3 are accepted
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    to: f64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    steps: u32,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemma1, lemma2, theorem1, theorem2, strongness, zerodiscord or all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the headline tolerance of each suite
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_parser = parse_number, allow_hyphen_values = true)]
    param: f64,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
        .map_err(|e: discord_core::DiscordError| e.to_string())
}

fn parse_number(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| format!("'{s}' is not a number"))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| format!("'{s}' is not a number"))?;
            num / den
        }
        None => s
            .trim()
            .parse()
            .map_err(|_| format!("'{s}' is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_angles(s: &str) -> Result<QubitBasisAngles, String> {
    let (theta, phi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected THETA,PHI, found '{s}'"))?;
    QubitBasisAngles::new(parse_number(theta)?, parse_number(phi)?).map_err(|e| e.to_string())
}

fn searches(grid: Option<u32>) -> (SearchConfig, SearchConfig, SearchConfig) {
    let (d, a, o) = (
        SearchConfig::delta_default(),
        SearchConfig::degenerate_default(),
        SearchConfig::oracle_default(),
    );
    match grid {
        Some(g) => (
            d.with_grid(g as usize),
            a.with_grid(g as usize),
            o.with_grid(g as usize),
        ),
        None => (d, a, o),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

fn compute(args: &ComputeArgs, cli: &Cli) -> Result<bool, CliError> {
    let rho = state_file::read(&args.file)?;
    let (delta_search, alpha_search, oracle) = searches(cli.grid);
    let delta_basis = match args.delta_basis {
        Some(angles) if rho.require_split()?.n == 2 => Some(qubit_basis(angles)),
        Some(_) => {
            return Err(CliError::Usage(
                "--delta-basis needs a qubit A subsystem".into(),
            ));
        }
        None => None,
    };
    let options = AnalysisOptions {
        delta_search,
        alpha_search,
        oracle: (args.oracle || args.entangled).then_some(oracle),
        allow_entangled_oracle: args.entangled,
        delta_basis,
        zero_tol: args.tol,
    };
    let report = analyze(&rho, &options)?;
    emit(&output::report(&report, cli.log_base), None)?;
    Ok(true)
}

fn run_sweep(args: &SweepArgs, cli: &Cli) -> Result<bool, CliError> {
    let (delta_search, alpha_search, _) = searches(cli.grid);
    let rows = sweep(
        args.family,
        args.from,
        args.to,
        args.steps as usize,
        &delta_search,
        &alpha_search,
    )?;
    emit(&output::sweep_csv(&rows, cli.log_base), args.out.as_ref())?;
    Ok(true)
}

fn verify(args: &VerifyArgs, cli: &Cli) -> Result<bool, CliError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse()?]
    };
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let (delta_search, alpha_search, oracle_search) = searches(cli.grid);
    let cfg = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        tolerance: args.tol,
        delta_search,
        alpha_search,
        oracle_search,
    };
    let mut all_passed = true;
    for suite in suites {
        let outcome = run_suite(suite, &cfg)?;
        all_passed &= outcome.passed();
        emit(&output::suite_outcome(&outcome), None)?;
    }
    emit(
        if all_passed {
            "verify: pass\n"
        } else {
            "verify: FAIL\n"
        },
        None,
    )?;
    Ok(all_passed)
}

fn write_state(args: &StateArgs) -> Result<bool, CliError> {
    let rho = args.family.state(args.param)?;
    let header = format!("{} state, parameter {}", args.family, args.param);
    emit(&state_file::render(&rho, &header), args.out.as_ref())?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(args) => compute(args, &cli),
        Command::Sweep(args) => run_sweep(args, &cli),
        Command::Verify(args) => verify(args, &cli),
        Command::State(args) => write_state(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
