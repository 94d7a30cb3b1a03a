//! `entlab`: sector projectors, witnesses, overlap optimizers, semidefinite
//! boundaries, state-space sweeps, and the ancilla permutation test, all from
//! one binary. A single --seed makes every run reproducible; machine outputs
//! are byte-stable for identical arguments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use entlab_core::Error;

#[derive(Parser)]
#[command(
    name = "entlab",
    version,
    about = "Permutation-sector entanglement toolkit for three-qudit systems"
)]
struct Cli {
    /// Master seed; every randomized stage derives its own stream from it
    #[arg(long, global = true, default_value_t = 17)]
    seed: u64,

    /// Worker thread cap (the ENTLAB_THREADS variable is read when absent)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the four sector projectors, the sector bases, and their traces
    Projectors {
        /// local dimension (2..6)
        #[arg(long)]
        d: usize,
        /// write the full JSON artifact here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a witness operator and report its spectrum and class ceilings
    Witness {
        /// local dimension
        #[arg(long)]
        d: usize,
        /// minus | plus | pt-minus | pt-plus | P
        #[arg(long)]
        which: String,
        /// print the fully separable / biseparable / quantum ceilings
        #[arg(long)]
        bounds: bool,
        /// write the operator as JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric measure of a named or user-supplied state via see-saw
    Gm {
        /// w | chiral | j2 | flipconj | m4 | qutrit4 | file:PATH
        #[arg(long)]
        state: String,
        /// local dimension for the presets that take one
        #[arg(long)]
        d: Option<usize>,
        /// see-saw restarts (default 64, or 256 for four parties)
        #[arg(long)]
        restarts: Option<usize>,
        /// also write the result JSON here (it always goes to stdout)
        #[arg(long, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
    },
    /// Semidefinite programs: relaxed overlap, family boundaries, GME decision
    Sdp {
        /// overlap | boundary | gme | pptgme
        #[arg(long)]
        problem: String,
        /// local dimension
        #[arg(long)]
        d: usize,
        /// direction angle in the witness plane, radians
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// detection margin for the GME decision
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// sweep points for the pptgme search
        #[arg(long, default_value_t = 13)]
        points: usize,
        /// write the pptgme CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        /// also write the result JSON here (it always goes to stdout)
        #[arg(long, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
    },
    /// Support sweeps of the state-space families in a witness plane
    Statespace {
        /// local dimension (3 or 4)
        #[arg(long)]
        d: usize,
        /// w (commuting pair) | wpt (transposed pair)
        #[arg(long, default_value = "w")]
        pair: String,
        /// comma list of fs, bs, ppt, ppt0..ppt2, pptmix, quantum
        #[arg(long, default_value = "fs,bs,pptmix,quantum")]
        families: String,
        /// angle samples of the full circle (at least 16)
        #[arg(long, default_value_t = 96)]
        grid: usize,
        /// see-saw restarts per angle
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// add the PPT-GME overlay with this many sweep points
        #[arg(long)]
        overlay: Option<usize>,
        /// write the sweep table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        /// render the regions as SVG
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for PPT states a genuine-multiparticle witness still detects
    /// (same as: sdp --problem pptgme)
    Pptgme {
        /// local dimension (2, 3, or 4)
        #[arg(long)]
        d: usize,
        /// sweep points
        #[arg(long, default_value_t = 13)]
        points: usize,
        /// write the CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Ancilla permutation test plus the operator-algebra entanglement probes
    /// (trace_cube reduces to the first party; gce averages over all of them)
    Povm {
        /// preset (w, chiral, antichiral, flipconj, product) or a JSON state path
        #[arg(long)]
        state: String,
        /// local dimension for the presets that take one
        #[arg(long)]
        d: Option<usize>,
        /// sample this many shots instead of exact probabilities
        #[arg(long, conflicts_with = "exact")]
        shots: Option<u64>,
        /// exact outcome probabilities (the default)
        #[arg(long)]
        exact: bool,
        /// Tsallis order of the concentratable-entanglement average
        #[arg(long, default_value_t = 2)]
        gce_k: u32,
        /// also write the result JSON here (it always goes to stdout)
        #[arg(long, value_name = "PATH")]
        json: Option<Option<PathBuf>>,
    },
    /// Replay the acceptance checks and report pass/fail per criterion
    Verify {
        /// algebra | bounds | sdp | povm | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn configure_threads(requested: Option<usize>) {
    let n = requested.or_else(|| {
        std::env::var("ENTLAB_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        if n > 0 {
            // a second initialization in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> entlab_core::Result<u8> {
    let seed = cli.seed;
    match cli.command {
        Command::Projectors { d, out } => commands::projectors(d, out.as_deref()),
        Command::Witness { d, which, bounds, out } => {
            commands::witness(d, &which, bounds, out.as_deref())
        }
        Command::Gm { state, d, restarts, json } => {
            commands::gm(&state, d, restarts, seed, json_path(&json))
        }
        Command::Sdp { problem, d, theta, tol, points, csv, json } => {
            commands::sdp(&problem, d, theta, tol, points, csv.as_deref(), json_path(&json))
        }
        Command::Statespace { d, pair, families, grid, restarts, overlay, csv, svg } => {
            commands::statespace(
                d, &pair, &families, grid, restarts, overlay, seed,
                csv.as_deref(), svg.as_deref(),
            )
        }
        Command::Pptgme { d, points, csv } => {
            commands::sdp("pptgme", d, 0.0, 1e-6, points, csv.as_deref(), None)
        }
        Command::Povm { state, d, shots, exact, gce_k, json } => {
            let _ = exact;
            commands::povm(&state, d, shots, gce_k, seed, json_path(&json))
        }
        Command::Verify { suite } => commands::verify(&suite, seed),
    }
}

/// Flatten the optional-value --json flag; a bare flag keeps stdout only.
fn json_path(flag: &Option<Option<PathBuf>>) -> Option<&std::path::Path> {
    flag.as_ref().and_then(|inner| inner.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    configure_threads(cli.threads);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NotConverged(_) => 2,
                _ => 1,
            })
        }
    }
}
