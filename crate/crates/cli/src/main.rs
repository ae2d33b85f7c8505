mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

/// Runs graph transformations over schema-typed attributed graphs.
#[derive(Parser)]
#[command(name = "gretl-mini", version)]
struct Cli {
    /// Diagnostics on stderr: -v for progress, -vv for every statement.
    #[arg(short, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a transformation and write the target graph.
    Transform {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a graph document against its schema.
    Validate {
        #[arg(long)]
        source: PathBuf,
    },
    /// Evaluate a query on a graph and print the result.
    Query {
        #[arg(long)]
        source: PathBuf,
        query: String,
    },
    /// Run the bundled state-machine fixtures, or those in a directory.
    Case {
        #[arg(long)]
        source: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .init();

    let result = match cli.command {
        Command::Transform {
            source,
            rules,
            out,
            dot,
            trace,
        } => commands::transform(&source, &rules, &out, dot.as_deref(), trace.as_deref()),
        Command::Validate { source } => commands::validate(&source),
        Command::Query { source, query } => commands::query(&source, &query),
        Command::Case { source } => commands::case(source.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            report::error_line(&e);
            ExitCode::FAILURE
        }
    }
}
