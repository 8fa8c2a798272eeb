//! `mathrepro` command-line tool.
//!
//! Exit codes: 0 success, 1 verification or evaluation failure, 2 usage
//! error, 3 I/O or format error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "mathrepro", version, about = "Reproducible computer-algebra experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a script through the interpreter ("-" reads standard input).
    Eval {
        script: PathBuf,
    },
    /// Evaluate an expression and save its value to a .mrdi file.
    Save {
        out: PathBuf,
        expr: String,
    },
    /// Load a .mrdi file and print its value.
    Show {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check a .mrdi file against the format rules.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Upgrade a .mrdi file to a newer format version.
    Upgrade {
        file: PathBuf,
        /// Target format version; defaults to the current one.
        #[arg(long)]
        to: Option<u64>,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smith normal form of an integer matrix file (one row per line).
    Snf {
        matrix: PathBuf,
        /// Use the generic Euclidean-domain implementation.
        #[arg(long)]
        generic: bool,
        #[arg(long)]
        json: bool,
    },
    /// Report tool, OS, CPU and pinned dependency versions.
    Versioninfo {
        /// Include memory and the active manifest's dependencies.
        #[arg(long)]
        full: bool,
        /// Manifest to report; defaults to ./Manifest.toml when present.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Content digest of a directory tree.
    HashTree {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Pin and verify project dependencies against a local registry.
    #[command(subcommand)]
    Env(EnvCommand),
    /// Check or fix sessions embedded in documents.
    #[command(subcommand)]
    Doctest(DoctestCommand),
}

#[derive(Debug, Args)]
struct RegistryArg {
    /// Registry directory; defaults to $MATHREPRO_REGISTRY.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum EnvCommand {
    /// Resolve a project file into a manifest.
    WriteManifest {
        #[arg(long, default_value = "Project.toml")]
        project: PathBuf,
        #[command(flatten)]
        registry: RegistryArg,
        #[arg(short, long, default_value = "Manifest.toml")]
        output: PathBuf,
    },
    /// Compare a manifest with the registry contents.
    Verify {
        #[arg(long, default_value = "Manifest.toml")]
        manifest: PathBuf,
        #[command(flatten)]
        registry: RegistryArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct DoctestArgs {
    #[arg(required = true)]
    docs: Vec<PathBuf>,
    /// Statements run in every label's environment first.
    #[arg(long)]
    prelude: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum DoctestCommand {
    /// Re-run embedded sessions and report output drift.
    Check(DoctestArgs),
    /// Rewrite drifted expected output in place.
    Fix(DoctestArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
