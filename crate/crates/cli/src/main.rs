//! `ballcollar`: validate Schottky group specs, enumerate orbits and limit-set
//! covers, certify isometric collars and render planar pictures.
//!
//! Exit status: 0 for a positive outcome (valid group, issued certificate,
//! certified distance, artifact written), 1 for a negative one, 2 for errors.

mod commands;
mod scene;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CertifyArgs, Outcome, RenderLayers};

#[derive(Parser, Debug)]
#[command(name = "ballcollar", version, about = "Certified isometric collars for Schottky groups on the Poincaré ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the Schottky conditions; exit 0 iff the group is valid.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Orbit of a base point as CSV: word, x1..xn, orbit_norm, isometric_radius.
    Orbit {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "max-word-length", default_value_t = 3)]
        max_word_length: usize,
        /// Comma-separated interior point (default: the origin).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level-k disk cover and one limit-set sample per disk as CSV.
    Limitset {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 4)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print r_pi, sup r, C' and C at a boundary point, with provenance.
    Constants {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated boundary point; normalized to unit length.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
    /// Certify an isometric collar at a boundary point; exit 0 iff issued.
    Certify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 6)]
        level: usize,
        /// Write the certificate report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also verify the certificate on this many sampled pairs.
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quotient distance between two interior points; exit 0 iff certified.
    Dist {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
    /// Render a planar scene as SVG (dimension 2 only).
    Render {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Omit the pairing disks.
        #[arg(long)]
        no_disks: bool,
        /// Draw the orbit of the origin up to this word length.
        #[arg(long)]
        orbit: Option<usize>,
        /// Draw isometric circles of words up to this length.
        #[arg(long)]
        isometric: Option<usize>,
        /// Draw disk-cover outlines for levels 1..=K.
        #[arg(long)]
        cover: Option<usize>,
        /// Certify and draw the collar at this boundary point.
        #[arg(long, allow_hyphen_values = true)]
        collar: Option<String>,
        /// Truncation level for --collar.
        #[arg(long, default_value_t = 6)]
        level: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Validate { spec } => commands::validate(&spec),
        Command::Orbit {
            spec,
            max_word_length,
            base,
            out,
        } => commands::orbit_csv(&spec, max_word_length, base.as_deref(), out.as_deref()),
        Command::Limitset { spec, level, out } => commands::limitset_csv(&spec, level, out.as_deref()),
        Command::Constants { spec, point, level } => commands::constants(&spec, &point, level),
        Command::Certify {
            spec,
            point,
            level,
            out,
            verify,
            seed,
        } => commands::certify(CertifyArgs {
            spec: &spec,
            point: &point,
            level,
            out: out.as_deref(),
            verify,
            seed,
        }),
        Command::Dist { spec, x, y, level } => commands::dist(&spec, &x, &y, level),
        Command::Render {
            spec,
            out,
            no_disks,
            orbit,
            isometric,
            cover,
            collar,
            level,
        } => commands::render(
            &spec,
            &out,
            &RenderLayers {
                no_disks,
                orbit,
                isometric,
                cover,
                collar,
                level,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
