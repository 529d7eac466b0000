use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use arithdeg::degree::dedup_width;
use arithdeg::exec::with_workers;
use arithdeg::polyfactor::DEFAULT_SEED;
use arithdeg_cli::bundled::{source_dir, Suite};
use arithdeg_cli::report::{self, Body, ReportDocument, Status};
use arithdeg_cli::run::{self, CliError, RunOptions};
use arithdeg_cli::scenario::{format_rational, parse_tolerance, SchemaError};
use clap::{Parser, Subcommand};
use num_rational::BigRational;

/// Dynamical and arithmetic degrees of semi-abelian endomorphisms, checked on exact orbits.
#[derive(Debug, Parser)]
#[command(name = "arithdeg", version)]
struct Cli {
    /// Print a JSON report instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized factorization steps.
    #[arg(long, global = true, env = "ARITHDEG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Maximal width of reported enclosures (p/q, decimal or 1e-k).
    #[arg(long, global = true, value_parser = parse_tolerance)]
    tol: Option<BigRational>,
    /// Write height sequences as CSV (n,h,log_h) into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    dump_heights: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree calculus for the endomorphism of a scenario file.
    Degrees { file: PathBuf },
    /// Factor a polynomial over Q: `t^4 - 1` or `-1,0,0,0,1` (constant term first).
    Factor {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Run the orbit experiments of a scenario file.
    Orbit { file: PathBuf },
    /// Run the bundled scenario suite against its golden files.
    Verify {
        /// Print scenario names without running them.
        #[arg(long)]
        list: bool,
        /// Rewrite golden files from the current results.
        #[arg(long, hide = true)]
        bless: bool,
        /// Use the scenarios in this directory instead of the bundled ones.
        #[arg(long, hide = true, value_name = "DIR")]
        scenarios: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let workers = cli.workers;
    match with_workers(workers, || execute(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let tol = cli.tol.clone().unwrap_or_else(dedup_width);
    let opts = RunOptions {
        seed: cli.seed,
        tol: tol.clone(),
        dump_heights: cli.dump_heights.clone(),
    };
    let document = |body: Body| ReportDocument {
        tool: "arithdeg".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cli.seed,
        tol: format_rational(&tol),
        body,
    };
    let (text, body, status) = match &cli.command {
        Command::Degrees { file } => {
            let s = run::read_scenario(file)?;
            let r = run::run_degrees(&s, &opts)?;
            let st = r.status;
            (report::render_degrees(&r), Body::Degrees(r), st)
        }
        Command::Factor { poly } => {
            let f = run::parse_poly_arg(poly)?;
            let r = run::run_factor(&f, &opts)?;
            (report::render_factor(&r), Body::Factor(r), Status::Pass)
        }
        Command::Orbit { file } => {
            let s = run::read_scenario(file)?;
            if s.orbits.is_empty() {
                return Err(SchemaError {
                    origin: s.name.clone(),
                    message: "no [[orbit]] blocks".into(),
                }
                .into());
            }
            let r = run::run_scenario(&s, &opts)?;
            let text = report::render_degrees(&r) + "\n" + &report::render_orbits(&r);
            let st = r.status;
            (text, Body::Orbit(r), st)
        }
        Command::Verify {
            list,
            bless,
            scenarios,
        } => {
            let suite = match scenarios {
                Some(dir) => Suite::from_dir(dir)?,
                None => Suite::bundled(),
            };
            if *list {
                let mut out = std::io::stdout().lock();
                for s in &suite.scenarios {
                    let _ = writeln!(out, "{}", s.name);
                }
                return Ok(0);
            }
            let bless_dir = bless.then(|| scenarios.clone().unwrap_or_else(source_dir));
            let r = run::run_verify(&suite, &opts, bless_dir.as_deref())?;
            let st = r.status;
            (report::render_verify(&r), Body::Verify(r), st)
        }
    };
    let out = if cli.json { document(body).to_json() } else { text };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    Ok(if status == Status::Pass { 0 } else { 1 })
}
