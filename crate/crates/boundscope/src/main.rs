//! Thin command-line front end; all work happens in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use boundscope::cli::{
    self, emit_density_grid, reproduce_table, resolve_function, run_bound, run_verification,
    GridKind, RunConfig, RunOutcome, TableId,
};

#[derive(Parser)]
#[command(
    name = "boundscope",
    version,
    about = "Upper bounds for polynomial minimization over boxes: \
             sum-of-squares density bounds, Boltzmann bounds, and their cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single bound (or an r-range) and append a CSV row per value
    Bound(BoundArgs),
    /// Recompute a bundled reference table and report deviations
    Table(TableArgs),
    /// Emit a density surface on a 2-D box as x1,x2,density rows
    Grid(GridArgs),
    /// Run the built-in verification suite
    Verify,
}

#[derive(Args)]
struct FunctionArgs {
    /// Builtin objective: booth, matyas, motzkin, camel3
    #[arg(long)]
    function: Option<String>,
    /// Polynomial expression in x1..xn (alternative to --function)
    #[arg(long)]
    expr: Option<String>,
    /// Number of variables for --expr
    #[arg(long)]
    n: Option<usize>,
    /// Domain as "lo:hi,lo:hi,..."; defaults to [-1,1]^n
    #[arg(long = "box")]
    box_spec: Option<String>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// lasserre, sa, taylor, or chain
    #[arg(long)]
    method: Option<String>,
    /// Hierarchy index
    #[arg(long)]
    r: Option<u32>,
    /// Run every index from --r through this value
    #[arg(long = "r-max")]
    r_max: Option<u32>,
    /// Temperature (taylor and chain; chain defaults to e*fhat/r)
    #[arg(long)]
    t: Option<f64>,
    /// monomial or orthonormal (default)
    #[arg(long)]
    basis: Option<String>,
    /// paper or computed (default): source of the max of |f| in schedules
    #[arg(long)]
    fhat: Option<String>,
    /// CSV output path (appends); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value config file supplying defaults for any flag above
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// table1 or table2
    which: String,
    /// CSV output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// boltzmann, sos, or taylor
    #[arg(long)]
    kind: Option<String>,
    /// Hierarchy index (sos and taylor kinds)
    #[arg(long)]
    r: Option<u32>,
    /// Temperature (boltzmann and taylor kinds)
    #[arg(long)]
    t: Option<f64>,
    /// Points per axis
    #[arg(long = "grid-m", default_value_t = 201)]
    grid_m: usize,
    /// CSV output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value config file supplying defaults for any flag above
    #[arg(long)]
    config: Option<PathBuf>,
}

fn bound_config(args: &BoundArgs) -> Result<RunConfig, boundscope::Error> {
    let mut cfg = RunConfig {
        function: args.function.function.clone(),
        expr: args.function.expr.clone(),
        dimension: args.function.n,
        box_spec: args.function.box_spec.clone(),
        method: args.method.clone(),
        r: args.r,
        r_max: args.r_max,
        t: args.t,
        basis: args.basis.clone(),
        fhat: args.fhat.clone(),
        out: args.out.clone(),
        ..RunConfig::default()
    };
    if let Some(path) = &args.config {
        cfg.merge_file(path)?;
    }
    Ok(cfg)
}

fn grid_config(args: &GridArgs) -> Result<RunConfig, boundscope::Error> {
    let mut cfg = RunConfig {
        function: args.function.function.clone(),
        expr: args.function.expr.clone(),
        dimension: args.function.n,
        box_spec: args.function.box_spec.clone(),
        kind: args.kind.clone(),
        r: args.r,
        t: args.t,
        grid_m: Some(args.grid_m),
        out: args.out.clone(),
        ..RunConfig::default()
    };
    if let Some(path) = &args.config {
        cfg.merge_file(path)?;
    }
    Ok(cfg)
}

fn run(command: Command) -> Result<i32, boundscope::Error> {
    match command {
        Command::Bound(args) => {
            let cfg = bound_config(&args)?;
            match run_bound(&cfg)? {
                RunOutcome::Bounds(reports) => {
                    for report in reports {
                        eprintln!(
                            "{} {} r={} value={}",
                            report.function, report.method, report.r, report.value
                        );
                    }
                }
                RunOutcome::Chains(chains) => {
                    for chain in chains {
                        eprintln!(
                            "chain r={} t={:.4} holds={}",
                            chain.r,
                            chain.t,
                            chain.holds()
                        );
                    }
                }
            }
            Ok(cli::EXIT_OK)
        }
        Command::Table(args) => {
            let which: TableId = args.which.parse()?;
            let report = reproduce_table(which, args.out.as_deref())?;
            eprint!("{}", report.summary());
            if report.all_within() {
                Ok(cli::EXIT_OK)
            } else {
                Ok(cli::EXIT_TOLERANCE)
            }
        }
        Command::Grid(args) => {
            let cfg = grid_config(&args)?;
            let kind: GridKind = cfg
                .kind
                .as_deref()
                .ok_or_else(|| boundscope::Error::Config("--kind is required".into()))?
                .parse()?;
            let resolved = resolve_function(&cfg)?;
            emit_density_grid(
                &resolved.polynomial,
                &resolved.domain,
                kind,
                cfg.r,
                cfg.t,
                cfg.grid_m.unwrap_or(201),
                cfg.out.as_deref(),
            )?;
            Ok(cli::EXIT_OK)
        }
        Command::Verify => {
            let lines = run_verification()?;
            let mut all_passed = true;
            for line in &lines {
                println!(
                    "{}: {} ({})",
                    if line.passed { "PASS" } else { "FAIL" },
                    line.name,
                    line.details
                );
                all_passed &= line.passed;
            }
            Ok(if all_passed {
                cli::EXIT_OK
            } else {
                cli::EXIT_NUMERIC
            })
        }
    }
}

fn main() -> ExitCode {
    cli::init_thread_pool();
    let parsed = Cli::try_parse();
    let cli_args = match parsed {
        Ok(args) => args,
        Err(e) => {
            // help/version requests are not usage errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(cli::EXIT_USAGE as u8);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli_args.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
