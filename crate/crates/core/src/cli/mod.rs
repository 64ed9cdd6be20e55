//! The `wetpaper` command line.
//!
//! Exit codes: 0 on success, 2 when a wet system has no solution, 1 on
//! usage, parse or I/O errors.

mod pgm;
mod spec;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use pgm::{encode_pgm, lsb_extract, lsb_inject, parse_pgm, read_pgm, write_pgm, GrayImage};
pub use spec::{parse_code_spec, parse_instance, parse_mask_spec, parse_message};

use crate::analysis::profile;
use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::experiments::{
    monte_carlo_dry_overhead, monte_carlo_overhead, monte_carlo_rank, monte_carlo_wet_feasibility,
    ExperimentReport,
};
use crate::stego::{emb, solve_wet, wet_threshold, WetProblem, WetResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "wetpaper", version, about = "Syndrome coding with wet (locked) positions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hide a message in the LSBs of the first n pixels of a PGM image.
    Embed {
        #[arg(long)]
        image: PathBuf,
        /// hamming:S, nadler, nadler-sigma or file:PATH
        #[arg(long)]
        code: String,
        /// 0/1 string or hex:DIGITS:BITS
        #[arg(long)]
        message: String,
        /// Inline 0/1 mask (1 = locked) or file:PATH
        #[arg(long)]
        wet: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the message carried by an image.
    Extract {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        code: String,
    },
    /// Print the parameters of a code.
    Analyze {
        #[arg(long)]
        code: String,
        #[arg(long)]
        json: bool,
    },
    /// Solve the wet system described by an instance file.
    Wetsolve {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a Monte Carlo experiment against its closed form.
    Simulate {
        kind: SimKind,
        /// Comma separated key=value pairs
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the table here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimKind {
    /// Rank defects of (t+m) x t matrices; params t, m
    Rank,
    /// Extra rows until full rank; param t
    Overhead,
    /// Dry positions until every instance is solvable; params n, r
    DryOverhead,
    /// Solvability of random instances; params n, r, delta, enforce
    Feasibility,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Embed { image, code, message, wet, out: path } => {
            let code = parse_code_spec(&code)?;
            let n = code.length();
            let img = read_pgm(&image)?;
            let cover = lsb_extract(&img, n)?;
            let message = parse_message(&message, code.syndrome_len())?;
            let result = match wet {
                Some(mask) => {
                    let wet = parse_mask_spec(&mask, n)?;
                    solve_wet(&code, &WetProblem::new(cover, message, wet))?
                }
                None => {
                    let stego = emb(&code, &cover, &message)?;
                    WetResult {
                        feasible: true,
                        changes: stego.distance(&cover),
                        stego: Some(stego),
                        solution_count: num_bigint::BigUint::from(1u8) << code.dimension(),
                        exact_minimum: true,
                    }
                }
            };
            writeln!(out, "feasible: {}", result.feasible)?;
            let Some(stego) = &result.stego else {
                return Ok(EXIT_INFEASIBLE);
            };
            writeln!(out, "changes: {}", result.changes)?;
            writeln!(out, "solutions: {}", result.solution_count)?;
            write_pgm(&lsb_inject(&img, stego)?, &path)?;
            Ok(EXIT_OK)
        }
        Command::Extract { image, code } => {
            let code = parse_code_spec(&code)?;
            let img = read_pgm(&image)?;
            let x = lsb_extract(&img, code.length())?;
            writeln!(out, "{}", code.syndrome(&x)?)?;
            Ok(EXIT_OK)
        }
        Command::Analyze { code, json } => {
            let code = parse_code_spec(&code)?;
            let p = profile(&code)?;
            let tau = wet_threshold(&code)?;
            if json {
                let mut v = serde_json::to_value(&p).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                v["wet_threshold"] = tau.tau.into();
                v["wet_threshold_dual_bound"] = tau.dual_bound.into();
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("values serialise"))?;
            } else {
                write!(out, "{p}")?;
                writeln!(out, "wet_threshold: {}", tau.tau)?;
                writeln!(out, "wet_threshold_dual_bound: {}", tau.dual_bound)?;
                writeln!(out, "max_locked: {}", tau.max_locked(p.n))?;
            }
            Ok(EXIT_OK)
        }
        Command::Wetsolve { instance } => {
            let text = std::fs::read_to_string(&instance)
                .map_err(|e| Error::parse(format!("cannot read {}: {e}", instance.display())))?;
            let inst = parse_instance(&text, instance.parent())
                .map_err(|e| Error::parse(format!("{}: {e}", instance.display())))?;
            let r = inst.solve()?;
            writeln!(out, "feasible: {}", r.feasible)?;
            writeln!(out, "solutions: {}", r.solution_count)?;
            let Some(stego) = &r.stego else {
                return Ok(EXIT_INFEASIBLE);
            };
            writeln!(out, "changes: {}", r.changes)?;
            writeln!(out, "exact_minimum: {}", r.exact_minimum)?;
            writeln!(out, "stego: {stego}")?;
            Ok(EXIT_OK)
        }
        Command::Simulate { kind, params, trials, seed, csv } => {
            let report = simulate(kind, &params, trials, seed)?;
            writeln!(out, "{}", report.summary_line())?;
            match csv {
                Some(path) => std::fs::write(path, report.to_csv())?,
                None => write!(out, "{}", report.to_csv())?,
            }
            Ok(EXIT_OK)
        }
    }
}

struct Params(BTreeMap<String, String>);

impl Params {
    fn parse(text: &str, allowed: &[&str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("parameter {pair:?} is not key=value")))?;
            if !allowed.contains(&k) {
                return Err(Error::parse(format!("unknown parameter {k:?}; expected one of {allowed:?}")));
            }
            map.insert(k.to_string(), v.to_string());
        }
        Ok(Self(map))
    }

    fn get(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::parse(format!("parameter {key}={v:?} is not a number"))),
        }
    }
}

fn simulate(kind: SimKind, params: &str, trials: u64, seed: u64) -> Result<ExperimentReport> {
    match kind {
        SimKind::Rank => {
            let p = Params::parse(params, &["t", "m"])?;
            monte_carlo_rank(p.get("t", 30)?, p.get("m", 0)?, trials, seed)
        }
        SimKind::Overhead => {
            let p = Params::parse(params, &["t"])?;
            monte_carlo_overhead(p.get("t", 30)?, trials, seed)
        }
        SimKind::DryOverhead => {
            let p = Params::parse(params, &["n", "r"])?;
            monte_carlo_dry_overhead(p.get("n", 48)?, p.get("r", 16)?, trials, seed)
        }
        SimKind::Feasibility => {
            let p = Params::parse(params, &["n", "r", "delta", "enforce"])?;
            let enforce = p.get("enforce", 0)? != 0;
            monte_carlo_wet_feasibility(p.get("n", 16)?, p.get("r", 6)?, p.get("delta", 8)?, trials, seed, enforce)
        }
    }
}
