//! Command-line front end: problem files in, deterministic JSON reports out.
//!
//! Exit codes: 0 success, 2 parse/schema/option errors, 3 domain
//! preconditions, 4 internal consistency failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use isodef::commands::{
    cohomology_results, deform_results, dgla_results, parse_ring_spec, rigidity_results,
};
use isodef::errors::{Error, Result};
use isodef::problem::{parse_problem, verify_install, Problem};
use isodef::report::render_report;
use isodef::selftest;

#[derive(Parser)]
#[command(name = "isodef", version, about = "Exact deformation-theory workbench for Fuchsian differential modules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// De Rham / parabolic cohomology report for a connection problem
    Cohomology {
        file: PathBuf,
        /// Minimum filtration truncation level (advisory floor; recorded)
        #[arg(long)]
        truncation: Option<usize>,
        /// Minimum Laurent-jet precision (advisory floor; recorded)
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Katz rigidity report for a monodromy tuple
    Rigidity { file: PathBuf },
    /// Deformation report: first-order classes, lifts to the given order
    Deform {
        file: PathBuf,
        /// Target truncation order (at most 6)
        #[arg(long)]
        order: u32,
        /// Compute the sharp obstruction class at every lifting step
        #[arg(long)]
        sharp: bool,
    },
    /// Validate a DGLA descriptor and report its cohomology over a test ring
    Dgla {
        file: PathBuf,
        /// Test ring as VARS:ORDER, e.g. e:3 or e,u:2
        #[arg(long)]
        ring: String,
    },
    /// Run the full acceptance suite on a seeded deterministic corpus
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let payload = json!({
                "error": {
                    "code": e.code(),
                    "message": e.to_string(),
                    "exit": e.exit_code(),
                }
            });
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::OptionError(format!("cannot read {:?}: {}", path, e)))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Cohomology {
            file,
            truncation,
            precision,
        } => {
            if truncation == Some(0) {
                return Err(Error::OptionError("--truncation must be positive".into()));
            }
            if precision.is_some_and(|p| p < 1) {
                return Err(Error::OptionError("--precision must be positive".into()));
            }
            let input = read_input(&file)?;
            let text = String::from_utf8_lossy(&input);
            let e = match parse_problem(&text, Some("connection"))? {
                Problem::Connection(e) => e,
                _ => unreachable!(),
            };
            let options = json!({ "truncation": truncation, "precision": precision });
            let (results, flags) = cohomology_results(&e)?;
            emit("cohomology", &input, options, results, flags)
        }
        Cmd::Rigidity { file } => {
            let input = read_input(&file)?;
            let text = String::from_utf8_lossy(&input);
            let t = match parse_problem(&text, Some("tuple"))? {
                Problem::Tuple(t) => t,
                _ => unreachable!(),
            };
            let (results, flags) = rigidity_results(&t)?;
            emit("rigidity", &input, json!({}), results, flags)
        }
        Cmd::Deform { file, order, sharp } => {
            if !(1..=6).contains(&order) {
                return Err(Error::OptionError(format!(
                    "--order must be between 1 and 6, got {}",
                    order
                )));
            }
            let input = read_input(&file)?;
            let text = String::from_utf8_lossy(&input);
            let p = match parse_problem(&text, Some("deform"))? {
                Problem::Deform(p) => p,
                _ => unreachable!(),
            };
            let options = json!({ "order": order, "sharp": sharp });
            let (results, flags) = deform_results(&p, order, sharp)?;
            emit("deform", &input, options, results, flags)
        }
        Cmd::Dgla { file, ring } => {
            let r = parse_ring_spec(&ring)?;
            let input = read_input(&file)?;
            let text = String::from_utf8_lossy(&input);
            let l = match parse_problem(&text, Some("dgla"))? {
                Problem::Dgla(l) => l,
                _ => unreachable!(),
            };
            let options = json!({ "ring": ring });
            let (results, flags) = dgla_results(&l, &r)?;
            emit("dgla", &input, options, results, flags)
        }
        Cmd::Selftest { seed } => {
            verify_install()?;
            let summary = selftest::run_all(seed.unwrap_or(selftest::DEFAULT_SEED));
            print!("{}", summary.render());
            for r in &summary.results {
                eprintln!("# {:<34} {:>7} ms", r.name, r.millis);
            }
            if summary.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(4))
            }
        }
    }
}

fn emit(
    command: &str,
    input: &[u8],
    options: Value,
    results: Value,
    flags: Vec<String>,
) -> Result<ExitCode> {
    print!("{}", render_report(command, input, options, results, &flags));
    if flags.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(4))
    }
}
