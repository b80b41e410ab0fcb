use clap::{Parser, Subcommand};
use jacaut::catalog::{builtin, lookup};
use jacaut::cyclic_cover::{analyze, period_matrix, validate};
use jacaut::io::{read_file, write_file};
use jacaut::pipeline::{self, RowStatus, RunOptions, DEFAULT_BUDGET, DEFAULT_PRECISION};
use jacaut::torus::PeriodMatrix;
use jacaut::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "jacaut", version, about = "Automorphism groups of principally polarized Jacobians from period matrices")]
struct Cli {
    /// Working precision in decimal digits (default 100, or $JACAUT_PREC).
    #[arg(long, global = true)]
    prec: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the cyclic cover d(d1,...,dn) of the sphere.
    Cover {
        d: u64,
        #[arg(value_delimiter = ',', num_args = 1..)]
        indices: Vec<u64>,
        /// Write the synthesized period matrix to this JSON file.
        #[arg(long)]
        emit_period: Option<PathBuf>,
    },
    /// Integral homomorphism lattice between two tori (or End of one).
    Endo { file1: String, file2: Option<String> },
    /// Principal polarizations with their Frobenius forms.
    Polarize {
        file: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: i64,
    },
    /// Full run: polarizations, isomorphism classes, groups, Torelli correction.
    Aut {
        file: String,
        #[arg(long)]
        budget: Option<i64>,
        /// Treat the curve as hyperelliptic (overrides file metadata).
        #[arg(long)]
        hyperelliptic: bool,
        /// Expected |Aut(C)|, used to designate the canonical class.
        #[arg(long)]
        curve_order: Option<u64>,
    },
    /// Reproduce the builtin catalog and compare with its annotations.
    Table {
        /// Restrict to one catalog key or label.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn precision(flag: Option<u32>) -> Result<u32> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var("JACAUT_PREC") {
        Ok(v) => v.trim().parse().map_err(|_| Error::InvalidInput(format!("JACAUT_PREC={v} is not an integer"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

/// A path to a period-matrix file, or else a builtin catalog key.
fn load(arg: &str, digits: u32) -> Result<PeriodMatrix> {
    let path = Path::new(arg);
    if path.exists() {
        return read_file(path, Some(digits));
    }
    match lookup(arg) {
        Some(e) => e.period_matrix(digits),
        None => Err(Error::InvalidInput(format!("{arg}: no such file or catalog entry"))),
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable report"));
}

fn run(cli: Cli) -> Result<ExitCode> {
    let digits = precision(cli.prec)?;
    match cli.command {
        Command::Cover { d, indices, emit_period } => {
            let b = validate(d, &indices)?;
            print_json(&analyze(&b));
            if let Some(path) = emit_period {
                write_file(&period_matrix(&b, digits)?, &path)?;
                eprintln!("period matrix written to {}", path.display());
            }
        }
        Command::Endo { file1, file2 } => {
            let a = load(&file1, digits)?;
            let b = file2.map(|f| load(&f, digits)).transpose()?;
            print_json(&pipeline::endo(&a, b.as_ref())?);
        }
        Command::Polarize { file, budget } => {
            let report = pipeline::polarize(&load(&file, digits)?, budget)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print_json(&report);
        }
        Command::Aut { file, budget, hyperelliptic, curve_order } => {
            let pm = load(&file, digits)?;
            let entry = lookup(&file).or_else(|| pm.label.as_deref().and_then(lookup));
            let mut opts = entry.as_ref().map(RunOptions::for_entry).unwrap_or_default();
            opts.budget = budget.or(opts.budget);
            if hyperelliptic {
                opts.hyperelliptic = Some(true);
            } else if pm.hyperelliptic.is_some() {
                opts.hyperelliptic = pm.hyperelliptic;
            }
            opts.expected_curve_order = curve_order.or(opts.expected_curve_order);
            let report = pipeline::run(&pm, &opts)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print_json(&report);
        }
        Command::Table { only, json } => {
            let entries = match only {
                Some(k) => vec![lookup(&k).ok_or_else(|| Error::InvalidInput(format!("unknown catalog entry {k}")))?],
                None => builtin(),
            };
            let mut rows = Vec::new();
            for e in &entries {
                let row = pipeline::table_row(e, digits);
                if !json {
                    println!(
                        "{:<4} {:<11} g={} |Aut(C)|={:<4} {:<10} expected {:?} found {:?} {}",
                        row.status,
                        row.label,
                        row.genus,
                        row.expected_curve_order,
                        row.curve_group.join("|"),
                        row.expected_orders,
                        row.found_orders,
                        row.details.join("; ")
                    );
                }
                rows.push(row);
            }
            if json {
                print_json(&rows);
            }
            if rows.iter().any(|r| r.status == RowStatus::Fail) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
