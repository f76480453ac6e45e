use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod inputs;

/// Checks, composes and exports asynchronous games and strategies.
#[derive(Parser, Debug)]
#[command(name = "agw", version)]
pub struct Cli {
    /// Structured JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Extra environment files (files ending in `.env` are also picked up
    /// from the positional arguments).
    #[arg(long = "env", global = true, value_name = "FILE")]
    pub envs: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tile axioms, cube property, contractibility and lattice checks.
    CheckGame {
        files: Vec<PathBuf>,
        /// A formula over the environment, checked as a game.
        #[arg(long)]
        formula: Vec<String>,
    },
    /// Ingenuity, receptivity and the play characterization.
    CheckStrategy { files: Vec<PathBuf> },
    /// Scheduling, acyclicity and clustered criteria per switching.
    Innocence {
        files: Vec<PathBuf>,
        /// Report only this switching, e.g. `right-first` or `L=left-first`.
        #[arg(long)]
        switching: Option<String>,
    },
    /// Explores the interaction of two strategies.
    Interact { files: Vec<PathBuf> },
    /// Composes two strategies and prints the result as a strategy file.
    Compose {
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Halting positions, closure laws and the round trip back to plays.
    Fixpoints { files: Vec<PathBuf> },
    /// Graphviz output of a game, strategy, causality order or jump graph.
    ExportDot {
        files: Vec<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<DotKind>,
        /// Draw tiles as shaded squares.
        #[arg(long)]
        tiles: bool,
        /// Position for `order` and `jumps`, as comma-separated addresses.
        #[arg(long)]
        position: Option<String>,
        /// Par switching for `jumps`, e.g. `left`.
        #[arg(long)]
        switching: Option<String>,
        /// Which game of an environment file to draw.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    Game,
    Strategy,
    Order,
    Jumps,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
