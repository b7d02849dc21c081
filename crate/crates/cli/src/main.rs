use std::collections::BTreeMap;
use std::process::ExitCode;

use brieskorn_cli::{render, run, Format, Mode, RunConfig};
use brieskorn_core::hyperbolic::TOLERANCE_PROFILE_ENV;
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "brieskorn", version, about = "Cylindrical contact homology of Brieskorn manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seifert invariants d, m, s_j, t_j and the genus
    Invariants(Common),
    /// Reeb orbit generators above a grading floor or below an action bound
    Generators(GeneratorArgs),
    /// Chain complexes of the free homotopy classes, with differentials
    Complex(ChainArgs),
    /// Graded homology of the chain complexes
    #[command(name = "compute-homology", alias = "homology")]
    Homology(ChainArgs),
    /// Chain-level homology against the closed form
    Compare(ChainArgs),
    /// Polygon group relations and invariance of the contact form
    VerifyGeometry(GeometryArgs),
    /// Linearized return maps and Conley-Zehnder indices
    VerifyDynamics(Common),
}

#[derive(Args)]
struct Common {
    /// Comma-separated exponents, e.g. 2,3,7
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    exponents: Vec<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Tolerance override name=value (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Tolerance profile: default, strict or loose
    #[arg(long, env = TOLERANCE_PROFILE_ENV)]
    tolerance_profile: Option<String>,
    /// Seed for sampled verification points
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ChainArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = -20, allow_negative_numbers = true)]
    grading_floor: i64,
    /// Number of fiber classes to build (default: enough for the floor)
    #[arg(long)]
    classes: Option<u64>,
}

#[derive(Args)]
struct GeneratorArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "action_bound")]
    grading_floor: Option<i64>,
    /// Action bound in units of 2pi, integer or fraction such as 7/2
    #[arg(long)]
    action_bound: Option<BigRational>,
}

#[derive(Args)]
struct GeometryArgs {
    #[command(flatten)]
    common: Common,
    /// Random (element, point) pairs for the invariance check
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Differentiate the lifted action numerically instead of analytically
    #[arg(long)]
    finite_difference: bool,
}

fn base(mode: Mode, common: Common) -> Result<RunConfig, String> {
    let mut config = RunConfig::new(mode, common.exponents);
    config.format = common.format;
    config.rng_seed = common.seed;
    config.tolerance_profile = common.tolerance_profile;
    let mut overrides = BTreeMap::new();
    for spec in common.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| format!("malformed --tol `{spec}`, expected name=value"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("tolerance `{name}` has non-numeric value `{value}`"))?;
        overrides.insert(name.trim().to_string(), value);
    }
    config.tolerances = overrides;
    Ok(config)
}

fn chain(mode: Mode, args: ChainArgs) -> Result<RunConfig, String> {
    let mut cfg = base(mode, args.common)?;
    cfg.grading_floor = args.grading_floor;
    cfg.classes = args.classes;
    Ok(cfg)
}

fn config(command: Command) -> Result<RunConfig, String> {
    match command {
        Command::Invariants(c) => base(Mode::Invariants, c),
        Command::VerifyDynamics(c) => base(Mode::VerifyDynamics, c),
        Command::Generators(a) => {
            let mut cfg = base(Mode::Generators, a.common)?;
            if let Some(floor) = a.grading_floor {
                cfg.grading_floor = floor;
            }
            cfg.action_bound = a.action_bound;
            Ok(cfg)
        }
        Command::Complex(a) => chain(Mode::Complex, a),
        Command::Homology(a) => chain(Mode::Homology, a),
        Command::Compare(a) => chain(Mode::Compare, a),
        Command::VerifyGeometry(a) => {
            let mut cfg = base(Mode::VerifyGeometry, a.common)?;
            cfg.samples = a.samples;
            cfg.finite_difference = a.finite_difference;
            Ok(cfg)
        }
    }
}

fn main() -> ExitCode {
    // usage errors share the validation exit code; 2 is reserved for mismatches
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match config(cli.command) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    let report = run(&cfg);
    print!("{}", render(&report, cfg.format));
    ExitCode::from(report.exit_code as u8)
}
