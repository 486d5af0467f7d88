use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use oagrank_core::dsl::{self, golden, Report, RunOptions};

#[derive(Parser)]
#[command(name = "oagrank", version, about = "Definable ranks of orders, groups and power series fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a query script.
    Run {
        file: PathBuf,
        /// Emit the JSON report instead of a table.
        #[arg(long)]
        json: bool,
        /// Exit with 3 when any verdict is unknown.
        #[arg(long)]
        strict: bool,
    },
    /// Check the embedded corpus of worked examples.
    Verify,
    /// Evaluate a script, cross-checking invariants against brute force.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// `OAGRANK_MODULI`: comma-separated integers, each at least 2.
fn moduli_from_env() -> anyhow::Result<Option<Vec<u64>>> {
    let Ok(raw) = std::env::var("OAGRANK_MODULI") else {
        return Ok(None);
    };
    let mut out = Vec::new();
    for part in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let n: u64 = part.parse().with_context(|| format!("OAGRANK_MODULI: {part:?} is not an integer"))?;
        if n < 2 {
            bail!("OAGRANK_MODULI: {n} is below 2");
        }
        out.push(n);
    }
    if out.is_empty() {
        bail!("OAGRANK_MODULI is empty");
    }
    out.sort_unstable();
    out.dedup();
    Ok(Some(out))
}

fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json_string());
    } else {
        print!("{}", report.to_table());
    }
}

fn run_file(file: &PathBuf, opts: &RunOptions, json: bool) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    match dsl::run_text(&text, opts) {
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            Ok(1)
        }
        Ok(report) => {
            emit(&report, json);
            Ok(report.exit_code(opts.strict) as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> anyhow::Result<u8> {
        let moduli = moduli_from_env()?;
        match &cli.cmd {
            Cmd::Run { file, json, strict } => {
                run_file(file, &RunOptions { strict: *strict, moduli, oracle: false }, *json)
            }
            Cmd::Oracle { file, json } => run_file(file, &RunOptions { strict: false, moduli, oracle: true }, *json),
            Cmd::Verify => {
                let bad = golden::verify();
                for m in &bad {
                    println!("FAIL {}: expected {}, got {}", m.anchor, m.expected, m.actual);
                }
                println!("{} of {} corpus entries match", golden::CORPUS.len() - bad.len(), golden::CORPUS.len());
                Ok(if bad.is_empty() { 0 } else { 2 })
            }
        }
    })();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
