//! `fwsets`: minimize quadratics over Motzkin sets, classify sets as FW/qFW, and run the
//! regression gallery.

mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fwsets::caps::{set_caps, Caps};

use commands::{Outcome, Settings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "fwsets", version, about = "Exact attainment analysis for quadratic programs")]
struct Cli {
    /// Report format; json is the stable machine-readable form.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Absolute tolerance for checks of inexact (ball) minima against random samples.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tolerance: f64,

    /// Seed for every random sample drawn by a command.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Number of random feasible points used to spot-check a reported minimum.
    #[arg(long, default_value_t = 1000, global = true)]
    samples: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize a quadratic over a set.
    Solve { set: String, quadratic: String },
    /// FW and qFW verdicts for a set, with justifications.
    Classify { set: String },
    /// Motzkin decomposition K + D of a polyhedral set.
    Decompose { set: String },
    /// Closedness of a coordinate projection, and the projected set when it is polyhedral.
    Project {
        set: String,
        /// Kept coordinates, 1-based and comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        coords: Vec<usize>,
    },
    /// Intersect a set with another set or with a linear subspace.
    Intersect { set: String, other: String },
    /// Decide whether an affine manifold is an f-asymptote of a set.
    Asymptote { set: String, manifold: String },
    /// Registered regression cases.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Run a job document.
    Run { job: String },
}

#[derive(Debug, Subcommand)]
enum GalleryAction {
    /// List the registered cases.
    List,
    /// Run one case by name, or `all`.
    Run { name: String },
}

fn install_caps() -> Result<()> {
    if let Ok(spec) = std::env::var("FWSETS_CAPS") {
        let caps = Caps::parse(&spec).context("FWSETS_CAPS")?;
        set_caps(caps);
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    install_caps()?;
    let s = Settings {
        tolerance: cli.tolerance,
        seed: cli.seed,
        samples: cli.samples,
    };
    match &cli.command {
        Command::Solve { set, quadratic } => commands::solve_files(set, quadratic, &s),
        Command::Classify { set } => commands::classify(&commands::read_set(set)?),
        Command::Decompose { set } => commands::decompose(&commands::read_set(set)?),
        Command::Project { set, coords } => commands::project(&commands::read_set(set)?, coords),
        Command::Intersect { set, other } => {
            let f = commands::read_set(set)?;
            commands::intersect(&f, &commands::read_operand(other)?)
        }
        Command::Asymptote { set, manifold } => commands::asymptote_files(set, manifold),
        Command::Gallery { action: GalleryAction::List } => commands::gallery_list(),
        Command::Gallery { action: GalleryAction::Run { name } } => commands::gallery_run(name, &s),
        Command::Run { job } => commands::run_document(job, &s),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&out.report).expect("reports serialize") + "\n"
                }
                Format::Text => render::text(&out.report),
            };
            // A reader that closes the pipe early (`| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::status_of(&e) as u8)
        }
    }
}
