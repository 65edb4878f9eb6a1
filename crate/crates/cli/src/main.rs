use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sl2cover::character::{ramified_quadratic_chars, AddChar, ExtChar, Root};
use sl2cover::integrate::{factors_and_equations, gauss_sum, local_coefficient};
use sl2cover::FieldContext;
use sl2cover_cli::config::{RunConfig, Suite};
use sl2cover_cli::report::Value;
use sl2cover_cli::run_suite;

#[derive(Parser)]
#[command(
    name = "sl2cover",
    version,
    about = "Exact verification of local coefficients and Hecke actions for SL(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report
    Verify(VerifyArgs),
    /// Print a single computed quantity without verifying anything
    #[command(subcommand)]
    Compute(ComputeCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    All,
    LocalCoefficient,
    Plancherel,
    FunctionalEquation,
    GaussSum,
    HeckeAlgebra,
    GelfandGraev,
    Invariants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// A selection of extension values at the uniformizer.
#[derive(Clone, Debug)]
struct WPi(Vec<i8>);

fn parse_w_pi(s: &str) -> Result<WPi, String> {
    match s {
        "+1" | "1" => Ok(WPi(vec![1])),
        "-1" => Ok(WPi(vec![-1])),
        "both" => Ok(WPi(vec![1, -1])),
        _ => Err(format!("expected +1, -1 or both, got {s}")),
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run
    #[arg(value_enum)]
    target: Target,
    /// Primes to cover (repeatable); defaults to 2, 3, 5, 7, 11, 13
    #[arg(long = "p", env = "SL2COVER_P", value_delimiter = ',')]
    primes: Vec<u64>,
    /// Value of the extension at the uniformizer
    #[arg(long, env = "SL2COVER_W_PI", default_value = "both", value_parser = parse_w_pi, allow_hyphen_values = true)]
    w_pi: WPi,
    /// Principal-value depth (default: conductor + 2); integrals are probed two shells further
    #[arg(long, env = "SL2COVER_SHELL_DEPTH")]
    shell_depth: Option<u32>,
    /// Torus exponents probed by the projection check run over [-R, R]
    #[arg(long, env = "SL2COVER_TORUS_RANGE", default_value_t = 3)]
    torus_range: u32,
    /// Worker threads across configurations
    #[arg(long, env = "SL2COVER_JOBS")]
    jobs: Option<usize>,
    #[arg(long, env = "SL2COVER_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output
    #[arg(long, env = "SL2COVER_OUT")]
    out: Option<PathBuf>,
    /// Zero all timings so identical runs give identical bytes
    #[arg(long, env = "SL2COVER_REPRODUCIBLE")]
    reproducible: bool,
    /// Seed for the randomized property checks
    #[arg(long, env = "SL2COVER_SEED", default_value_t = 0x5eed)]
    seed: u64,
    /// Randomized cases per property check
    #[arg(long, env = "SL2COVER_CASES", default_value_t = 100)]
    cases: usize,
}

#[derive(Subcommand)]
enum ComputeCommand {
    /// tau(eta, psi, p^c) for every ramified quadratic character mod p
    GaussSum {
        #[arg(long = "p", env = "SL2COVER_P")]
        p: u64,
        /// Valuation of c
        #[arg(long, allow_hyphen_values = true)]
        c_val: i32,
    },
    /// C_psi(s, eta~) for every ramified quadratic extension
    LocalCoefficient {
        #[arg(long = "p", env = "SL2COVER_P")]
        p: u64,
        #[arg(long, env = "SL2COVER_W_PI", default_value = "both", value_parser = parse_w_pi, allow_hyphen_values = true)]
        w_pi: WPi,
    },
    /// The Plancherel constant
    Plancherel {
        #[arg(long = "p", env = "SL2COVER_P")]
        p: u64,
        #[arg(long, env = "SL2COVER_W_PI", default_value = "both", value_parser = parse_w_pi, allow_hyphen_values = true)]
        w_pi: WPi,
    },
}

fn suites(target: Target) -> Vec<Suite> {
    match target {
        Target::All => Suite::ALL.to_vec(),
        Target::LocalCoefficient => vec![Suite::LocalCoefficient],
        Target::Plancherel => vec![Suite::Plancherel],
        Target::FunctionalEquation => vec![Suite::FunctionalEquation],
        Target::GaussSum => vec![Suite::GaussSum],
        Target::HeckeAlgebra => vec![Suite::HeckeAlgebra],
        Target::GelfandGraev => vec![Suite::GelfandGraev],
        Target::Invariants => vec![Suite::Invariants],
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    let defaults = RunConfig::default();
    let cfg = RunConfig {
        primes: if args.primes.is_empty() {
            defaults.primes
        } else {
            args.primes
        },
        w_pi: args.w_pi.0,
        shell_depth: args.shell_depth,
        torus_range: args.torus_range,
        suites: suites(args.target),
        seed: args.seed,
        cases: args.cases,
    };
    if let Err(e) = cfg.validate() {
        eprintln!("configuration error: {e}");
        return ExitCode::from(2);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    let mut report = match pool.install(|| run_suite(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if args.reproducible {
        report.zero_timings();
    }
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn compute(cmd: ComputeCommand) -> sl2cover::error::Result<()> {
    let show = |label: String, v: Value| {
        println!("{label}\n  exact:  {}\n  approx: {}", v.exact, v.approx)
    };
    match cmd {
        ComputeCommand::GaussSum { p, c_val } => {
            for eta in ramified_quadratic_chars(p) {
                let n = eta.level();
                let ctx = FieldContext::new(p, n, n.max(c_val.unsigned_abs()) + 1)?;
                let tau = gauss_sum(&ctx, &eta, AddChar::STANDARD, &ctx.pi_pow(c_val))?;
                let sign = eta.at_minus_one().as_sign().unwrap_or(0);
                show(
                    format!("p = {p}, level {n}, eta(-1) = {sign:+}, c = p^{c_val}"),
                    Value::cyc(&tau),
                );
            }
        }
        ComputeCommand::LocalCoefficient { p, w_pi } => {
            for eta in ramified_quadratic_chars(p) {
                for &w in &w_pi.0 {
                    let n = eta.level();
                    let ctx = FieldContext::new(p, n, n + 2)?;
                    let chi = ExtChar::new(eta.clone(), Root::sign(w));
                    let lc = local_coefficient(&ctx, &chi, AddChar::STANDARD, n + 2)?;
                    let sign = eta.at_minus_one().as_sign().unwrap_or(0);
                    show(
                        format!("p = {p}, level {n}, eta(-1) = {sign:+}, w_pi = {w:+}"),
                        Value::laurent(&lc.ratio),
                    );
                }
            }
        }
        ComputeCommand::Plancherel { p, w_pi } => {
            for eta in ramified_quadratic_chars(p) {
                for &w in &w_pi.0 {
                    let n = eta.level();
                    let ctx = FieldContext::new(p, n, n + 2)?;
                    let chi = ExtChar::new(eta.clone(), Root::sign(w));
                    let f = factors_and_equations(&ctx, &chi, n + 2)?;
                    let sign = eta.at_minus_one().as_sign().unwrap_or(0);
                    show(
                        format!("p = {p}, level {n}, eta(-1) = {sign:+}, w_pi = {w:+}"),
                        Value::laurent(&f.plancherel),
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Compute(cmd) => match compute(cmd) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
