use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sohrlab_core::sohr::{FluxScheme, ModelMode, TimeStep};

mod commands;

/// Hydrodynamic and particle simulations of self-propelled particles with
/// alignment and repulsion.
#[derive(Parser, Debug)]
#[command(name = "sohrlab", version)]
struct Cli {
    /// Root for relative output directories.
    #[arg(long, env = "SOHRLAB_OUT", global = true, value_name = "DIR")]
    out_root: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Configuration file or run manifest to start from.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
struct Timing {
    /// Time step, or `adaptive`.
    #[arg(long, value_parser = parse_time_step)]
    dt: Option<TimeStep>,

    /// Final time.
    #[arg(long = "T", value_name = "T")]
    t_final: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct Mesh {
    #[arg(long)]
    nx: Option<usize>,

    #[arg(long)]
    ny: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldPreset {
    Vortex,
    Riemann,
    TaylorGreen,
    FourVortex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParticlePreset {
    Riemann,
    TaylorGreen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sohr,
    Soh,
    Dlmp,
}

impl From<Mode> for ModelMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sohr => ModelMode::Sohr,
            Mode::Soh => ModelMode::Soh,
            Mode::Dlmp => ModelMode::Dlmp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Flux {
    Poly,
    Rusanov,
}

impl From<Flux> for FluxScheme {
    fn from(f: Flux) -> Self {
        match f {
            Flux::Poly => FluxScheme::Polynomial,
            Flux::Rusanov => FluxScheme::Rusanov,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
struct FieldRun {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    timing: Timing,
    #[command(flatten)]
    mesh: Mesh,

    /// Relaxation rate; 0 projects onto the unit circle.
    #[arg(long)]
    eta: Option<f64>,

    /// Snapshot times, comma separated.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print c1, c2, k0, Φ0 and β1..β6 as CSV.
    Coefficients {
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Repulsion scaling of the quadratic well.
        #[arg(long = "F0", default_value_t = 1.0)]
        f0: f64,
        /// Coefficient cache file, created or extended as needed.
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
    },
    /// Particle ensemble deposited on the preset grid.
    Ibm {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ParticlePreset::Riemann)]
        preset: ParticlePreset,
        /// Number of particles.
        #[arg(long = "N", value_name = "N")]
        n: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Particle time step.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "T", value_name = "T")]
        t_final: Option<f64>,
        #[arg(long)]
        realizations: Option<usize>,
        /// Snapshot times, comma separated.
        #[arg(long, value_delimiter = ',')]
        snapshots: Option<Vec<f64>>,
    },
    /// Macroscopic run on a preset.
    Sohr {
        #[command(flatten)]
        run: FieldRun,
        #[arg(long, value_enum)]
        preset: Option<FieldPreset>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum)]
        flux: Option<Flux>,
        #[arg(long = "F0", value_name = "F0")]
        f0: Option<f64>,
    },
    /// Grid convergence study on the vortex preset.
    Convergence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        timing: Timing,
        /// Cells per side of the coarsest grid.
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Riemann problem for the macroscopic model.
    Riemann {
        #[command(flatten)]
        run: FieldRun,
    },
    /// Taylor-Green vortex: macroscopic run against the particle ensemble.
    TaylorGreen {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N", value_name = "N")]
        n: Option<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long = "T", value_name = "T")]
        t_final: Option<f64>,
    },
    /// Particle ensembles against the macroscopic Riemann solution.
    CompareMicroMacro {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N", value_name = "N")]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        epsilons: Option<Vec<f64>>,
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long = "T", value_name = "T")]
        t_final: Option<f64>,
        /// 10⁵ particles on the full 10 × 10 box.
        #[arg(long)]
        full: bool,
    },
    /// Strong against weak repulsion on the four-vortex preset.
    CompareRepulsion {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        timing: Timing,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long = "strong-F0", default_value_t = 5.0)]
        strong_f0: f64,
        #[arg(long = "weak-F0", default_value_t = 0.05)]
        weak_f0: f64,
    },
    /// Relaxation model against the density-dependent pressure model.
    CompareDlmp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        timing: Timing,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long = "F0", value_name = "F0")]
        f0: Option<f64>,
    },
}

fn parse_time_step(s: &str) -> Result<TimeStep, String> {
    if s == "adaptive" {
        return Ok(TimeStep::Adaptive);
    }
    match s.parse::<f64>() {
        Ok(dt) if dt > 0.0 && dt.is_finite() => Ok(TimeStep::Fixed(dt)),
        _ => Err(format!("expected a positive number or `adaptive`, got `{s}`")),
    }
}

/// 2 for numerical failures, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err.chain().any(|e| {
        e.downcast_ref::<sohrlab_core::Error>()
            .is_some_and(|e| e.is_numerical())
    });
    if numerical {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
