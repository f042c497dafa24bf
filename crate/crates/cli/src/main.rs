//! `apple`: reason, classify, query, validate and run competency questions
//! over Turtle inputs or the bundled ethics assets.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use apple_core::query::QueryMode;
use apple_core::validate::World;

#[derive(Debug, Parser)]
#[command(name = "apple", version, about = "Applied-ethics ontology toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Materialize the inputs and write the result as Turtle.
    Reason {
        #[command(flatten)]
        io: InputArgs,
        /// Also apply this rule file before writing.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Run the verdict rules and print one verdict per classified action.
    Classify {
        #[command(flatten)]
        io: InputArgs,
        /// Rule file; the bundled verdict rules by default.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Answer a class expression or triple-pattern query.
    Query {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Instances)]
        mode: ModeArg,
        /// Apply this rule file before querying.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Query text, e.g. `Agent` or `?x doesAction ?a`.
        query: String,
    },
    /// Check disjointness and existential obligations.
    Validate {
        #[command(flatten)]
        io: InputArgs,
        /// Closed when a data document is loaded, open otherwise.
        #[arg(long, value_enum)]
        world: Option<WorldArg>,
    },
    /// Run a competency-question manifest and print a pass/fail table.
    Cq {
        #[command(flatten)]
        io: InputArgs,
        /// Manifest file; the bundled one by default.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Shuffle the manifest with this seed before running.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Turtle input, repeatable. Without any, the bundled assets are used.
    #[arg(short, long = "input")]
    input: Vec<PathBuf>,
    /// Load the bundled taxonomy and scenario (before any `-i` files).
    #[arg(long)]
    bundled: bool,
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Turtle,
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Instances,
    Classes,
    Select,
}

impl From<ModeArg> for QueryMode {
    fn from(m: ModeArg) -> QueryMode {
        match m {
            ModeArg::Instances => QueryMode::Instances,
            ModeArg::Classes => QueryMode::Classes,
            ModeArg::Select => QueryMode::Select,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WorldArg {
    Open,
    Closed,
}

impl From<WorldArg> for World {
    fn from(w: WorldArg) -> World {
        match w {
            WorldArg::Open => World::Open,
            WorldArg::Closed => World::Closed,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_CONFIG } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("apple: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
