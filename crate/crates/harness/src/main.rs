use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qtau_core::qtau::{describe_tau2, tau2_check, QSetup};
use qtau_core::slnq::{QSymbols, SymbolConfig};
use qtau_harness::{emit_report, run_suite, Format, HarnessError, Limits, Parametrization, Scenario, Suite};

#[derive(Debug, Parser)]
#[command(name = "qtau", version, about = "Exact checks of classical and quantum tau-function identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Print worked examples.
    Demo {
        #[command(subcommand)]
        what: Demo,
    },
    /// List the registered check names of both suites.
    ListChecks,
}

#[derive(Debug, Subcommand)]
enum VerifySuite {
    Classical(ClassicalArgs),
    Quantum(CommonArgs),
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// The four-term expansion of the second quantum tau-function with its time twists.
    Tau2 {
        #[arg(long = "N", default_value_t = 3)]
        n: usize,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Rank plus one of the group.
    #[arg(long = "N")]
    n: usize,

    /// Comma-separated levels; all supported levels when omitted.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<usize>,

    /// Comma-separated check names; the whole suite when omitted.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write the report here.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,

    /// Lift the desk-scale caps on N and levels.
    #[arg(long)]
    unsafe_large: bool,
}

#[derive(Debug, Args)]
struct ClassicalArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[arg(long, value_enum, default_value_t = ParamArg::B)]
    param: ParamArg,

    /// One symbol per entry of g instead of a seeded rational matrix.
    #[arg(long)]
    symbolic_g: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum ParamArg {
    A,
    B,
    C,
}

fn scenario(suite: Suite, c: &CommonArgs) -> Scenario {
    let mut s = Scenario::new(suite, c.n);
    s.levels = c.levels.clone();
    if !c.checks.is_empty() {
        s.checks = c.checks.clone();
    }
    s.seed = c.seed;
    s
}

fn verify(s: Scenario, c: &CommonArgs) -> Result<u8, HarnessError> {
    let mut limits = Limits::from_env()?;
    limits.unsafe_large = c.unsafe_large;
    let report = run_suite(&s, &limits)?;
    print!("{}", report.to_text());
    if let Some(path) = &c.out {
        let format = match c.format {
            OutFormat::Json => Format::Json,
            OutFormat::Text => Format::Text,
        };
        emit_report(&report, format, path)?;
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<u8, HarnessError> {
    match cli.command {
        Command::Verify { suite: VerifySuite::Classical(a) } => {
            let mut s = scenario(Suite::Classical, &a.common);
            s.parametrization = match a.param {
                ParamArg::A => Parametrization::A,
                ParamArg::B => Parametrization::B,
                ParamArg::C => Parametrization::C,
            };
            s.symbolic_g = a.symbolic_g;
            verify(s, &a.common)
        }
        Command::Verify { suite: VerifySuite::Quantum(c) } => verify(scenario(Suite::Quantum, &c), &c),
        Command::Demo { what: Demo::Tau2 { n } } => {
            let limits = Limits::from_env()?;
            Scenario::new(Suite::Quantum, n).validate(&limits)?;
            let setup = QSetup::new(&QSymbols::new(SymbolConfig::new(n)), 0);
            println!("tau_2 for SL_q({n}):");
            for line in describe_tau2(&setup) {
                println!("  {line}");
            }
            match tau2_check(&setup) {
                Ok(out) if out.passed() => {
                    println!("compact operator form and permutation-pair expansion agree term by term")
                }
                Ok(out) => println!("mismatch: {}", out.witness.unwrap_or_default()),
                Err(e) => println!("error: {e}"),
            }
            Ok(0)
        }
        Command::ListChecks => {
            for suite in [Suite::Classical, Suite::Quantum] {
                println!("{}: {}", suite.name(), suite.registry().join(", "));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("qtau: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
