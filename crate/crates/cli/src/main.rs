// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the orbit-space cohomology engine.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orbits_cli::commands;
use orbits_cli::records::OutputFormat;

/// Mod-2 cohomology of orbit spaces of free involutions on products of
/// three spheres, computed through a spectral-sequence engine.
#[derive(Debug, Parser)]
#[command(name = "orbits", version, about)]
struct Cli {
    /// Output format; the flag wins over the environment variable.
    #[arg(
        long,
        global = true,
        env = "ORBITS_FORMAT",
        value_enum,
        default_value_t = OutputFormat::Human
    )]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate admissible runs for a triple, or check one explicit pattern.
    Analyze(AnalyzeArgs),
    /// Re-run a catalog case at a stored triple and diff against the golden.
    Verify(VerifyArgs),
    /// Cross-check an antipodal quotient against an independent chain model.
    Oracle(OracleArgs),
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    /// Degree of the first sphere factor.
    #[arg(long)]
    n: usize,
    /// Degree of the second sphere factor.
    #[arg(long)]
    m: usize,
    /// Degree of the third sphere factor.
    #[arg(long)]
    l: usize,
    /// Action selector: "trivial", "all", or explicit generator images
    /// such as "a->a,b->c,c->b".
    #[arg(long, default_value = "trivial")]
    action: String,
    /// Check a single differential pattern instead of enumerating,
    /// e.g. "a->2:1, b->surv, c->surv".
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Catalog case token, e.g. "thm3.6-1".
    case: String,
    /// Degree of the first sphere factor.
    #[arg(long)]
    n: usize,
    /// Degree of the second sphere factor.
    #[arg(long)]
    m: usize,
    /// Degree of the third sphere factor.
    #[arg(long)]
    l: usize,
}

#[derive(Debug, clap::Args)]
struct OracleArgs {
    /// Degree of the first sphere factor.
    #[arg(long)]
    n: usize,
    /// Degree of the second sphere factor.
    #[arg(long)]
    m: usize,
    /// Degree of the third sphere factor.
    #[arg(long)]
    l: usize,
    /// Which factor carries the antipodal action: 1, 2 or 3.
    #[arg(long)]
    factor: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(args) => commands::analyze(
            args.n,
            args.m,
            args.l,
            &args.action,
            args.pattern.as_deref(),
            cli.format,
        ),
        Command::Verify(args) => commands::verify(&args.case, args.n, args.m, args.l, cli.format),
        Command::Oracle(args) => {
            commands::oracle_check(args.n, args.m, args.l, args.factor, cli.format)
        }
    };
    match outcome {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(error) => {
            eprintln!("{error}");
            ExitCode::from(error.exit_code())
        }
    }
}
