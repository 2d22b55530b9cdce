//! `qil`: runs the property suite and the named experiments, writing JSON
//! reports (and CSV trajectories for the cascade).
//!
//! Exit codes: 0 pass, 1 property violation, 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qil_core::channels::Channel;
use qil_core::io::{self, ChannelSpec};
use qil_core::protocols::{
    simulate_cascade, simulate_classical_communication, simulate_dpi_chain, zeroth_law_from_parts,
    CascadeConfig, CommunicationLabels,
};
use qil_core::random::{
    haar_matrix, physical_registry, random_density, random_haar_unitary, rng_from_seed,
};
use qil_core::suite::{
    check_property, default_suite, PropertyCheckConfig, PropertyId, SuiteReport,
    SUITE_MAX_TOTAL_DIM,
};
use qil_core::{DensityMatrix, ExperimentReport, QilError, DEFAULT_MAX_TOTAL_DIM};

#[derive(Parser, Debug)]
#[command(
    name = "qil",
    version,
    about = "Directed-entanglement simulator and inequality checker"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Base seed; all randomness derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Absolute tolerance for margins (per-property defaults when omitted).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cap on the total Hilbert-space dimension of any registry.
    #[arg(long, global = true, env = "QIL_MAX_DIM")]
    max_dim: Option<usize>,
    /// Report path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Restrict to these properties (repeatable), e.g. `--property b_prime`.
        #[arg(long = "property")]
        properties: Vec<PropertyId>,
    },
    /// Ensemble through a channel, measured by the receiver.
    Holevo {
        #[arg(long)]
        ensemble: PathBuf,
        /// Channel JSON; identity when omitted.
        #[arg(long)]
        channel: Option<PathBuf>,
        /// Measure in a Haar-random basis drawn from the seed instead of the computational basis.
        #[arg(long)]
        random_basis: bool,
    },
    /// Two channels in sequence applied to one half of a purification.
    Dpi {
        /// Exactly two channel files, applied in order.
        #[arg(long = "channel", required = true, num_args = 1)]
        channels: Vec<PathBuf>,
        /// Input state is the ensemble average; a random full-rank state when omitted.
        #[arg(long)]
        ensemble: Option<PathBuf>,
    },
    /// Second-law cascade; trajectory CSV next to the JSON summary.
    Cascade {
        #[arg(long)]
        cascade: PathBuf,
        /// CSV path; defaults to the --out path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Two systems interacting through a Haar-random unitary.
    Zeroth {
        /// Run this many random trials as a property check instead of one report.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: Option<u64>,
    },
}

enum Failure {
    Config(String),
    Violation,
}

impl From<QilError> for Failure {
    fn from(e: QilError) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_atomic(p, text).map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish<T: serde::Serialize>(c: &Common, report: &T, passed: bool) -> Outcome {
    emit(c.out.as_deref(), &io::to_json(report)?)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn channel(path: &Path, dim: usize) -> Result<Channel, Failure> {
    Ok(io::parse_channel(&io::read_text(path)?)?.build(dim)?)
}

fn preset_dim(path: &Path) -> Result<Option<usize>, Failure> {
    Ok(match io::parse_channel(&io::read_text(path)?)? {
        ChannelSpec::Kraus { dim_in, .. } => Some(dim_in),
        ChannelSpec::Preset { dim, .. } => dim,
    })
}

fn verify(c: &Common, trials: u64, properties: &[PropertyId]) -> Outcome {
    let mut configs: Vec<PropertyCheckConfig> = default_suite(c.seed, trials as usize);
    if !properties.is_empty() {
        configs = properties
            .iter()
            .map(|&p| PropertyCheckConfig::new(p, trials as usize, c.seed))
            .collect();
    }
    for cfg in &mut configs {
        if let Some(t) = c.tol {
            cfg.tolerance = t;
        }
        cfg.max_total_dim = c.max_dim.unwrap_or(SUITE_MAX_TOTAL_DIM);
        cfg.validate()?;
    }
    let properties = configs
        .iter()
        .map(check_property)
        .collect::<qil_core::Result<Vec<_>>>()?;
    let passed = properties.iter().all(|p| p.passed());
    let report = SuiteReport {
        seed: c.seed,
        properties,
        passed,
    };
    finish(c, &report, passed)
}

fn holevo(c: &Common, ensemble: &Path, ch: Option<&Path>, random_basis: bool) -> Outcome {
    let ens = io::parse_ensemble(&io::read_text(ensemble)?)?;
    let ch = match ch {
        Some(p) => channel(p, ens.dim())?,
        None => Channel::identity(ens.dim()),
    };
    let basis = if random_basis {
        Some(haar_matrix(ens.dim(), &mut rng_from_seed(c.seed))?)
    } else {
        None
    };
    let mut labels = CommunicationLabels::default();
    labels.preparation.max_total_dim = c.max_dim.unwrap_or(DEFAULT_MAX_TOTAL_DIM);
    let mut r = simulate_classical_communication(
        &ens,
        &ch,
        basis.as_ref(),
        &labels,
        c.tol.unwrap_or(1e-9),
    )?;
    if random_basis {
        r.seed = Some(c.seed);
    }
    finish(c, &r, r.passed)
}

fn dpi(c: &Common, channels: &[PathBuf], ensemble: Option<&Path>) -> Outcome {
    if channels.len() != 2 {
        return Err(Failure::Config(format!(
            "dpi needs exactly two --channel files, got {}",
            channels.len()
        )));
    }
    let mut seeded = None;
    let rho = match ensemble {
        Some(p) => io::parse_ensemble(&io::read_text(p)?)?.average_state("Q")?,
        None => {
            let d = preset_dim(&channels[0])?
                .or(preset_dim(&channels[1])?)
                .unwrap_or(2);
            let reg = physical_registry(&["Q"], &[d], c.max_dim.unwrap_or(DEFAULT_MAX_TOTAL_DIM))?;
            seeded = Some(c.seed);
            random_density(&reg, d, &mut rng_from_seed(c.seed))?
        }
    };
    let ch1 = channel(&channels[0], rho.dim())?;
    let ch2 = channel(&channels[1], rho.dim())?;
    let mut r = simulate_dpi_chain(&rho, &ch1, &ch2, c.tol.unwrap_or(1e-9))?;
    r.seed = seeded;
    finish(c, &r, r.passed)
}

fn cascade(c: &Common, path: &Path, csv: Option<&Path>) -> Outcome {
    let mut cfg: CascadeConfig = serde_json::from_str(&io::read_text(path)?)
        .map_err(|e| Failure::Config(format!("cascade: {e}")))?;
    if let Some(m) = c.max_dim {
        cfg.max_total_dim = m;
    }
    let r = simulate_cascade(&cfg, "B", c.tol.unwrap_or(1e-9))?;
    let csv_path = csv
        .map(Path::to_path_buf)
        .or_else(|| c.out.as_ref().map(|o| o.with_extension("csv")));
    if let (Some(p), Some(traj)) = (csv_path, &r.trajectory) {
        io::write_atomic(&p, &io::trajectory_csv(traj))?;
    }
    let mut summary: ExperimentReport = r.clone();
    summary.trajectory = None;
    finish(c, &summary, r.passed)
}

fn zeroth(c: &Common, trials: Option<u64>) -> Outcome {
    if let Some(n) = trials {
        let mut cfg = PropertyCheckConfig::new(PropertyId::Zeroth, n as usize, c.seed);
        if let Some(t) = c.tol {
            cfg.tolerance = t;
        }
        let r = check_property(&cfg)?;
        let passed = r.passed();
        return finish(c, &r, passed);
    }
    let mut rng = rng_from_seed(c.seed);
    let max = c.max_dim.unwrap_or(DEFAULT_MAX_TOTAL_DIM);
    let part = |q: &str, b: &str, rng: &mut _| -> qil_core::Result<DensityMatrix> {
        random_density(&physical_registry(&[q, b], &[2, 2], max)?, 4, rng)
    };
    let p1 = part("Q1", "B1", &mut rng)?;
    let p2 = part("Q2", "B2", &mut rng)?;
    let u = random_haar_unitary(4, &["Q1", "Q2"], &mut rng)?;
    let mut r = zeroth_law_from_parts(&p1, &p2, "Q1", "Q2", &u, c.tol.unwrap_or(1e-9))?;
    r.seed = Some(c.seed);
    finish(c, &r, r.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    if let Some(t) = c.tol {
        if !(t >= 0.0 && t.is_finite()) {
            eprintln!("error: --tol must be a finite nonnegative number");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Verify { trials, properties } => verify(c, *trials, properties),
        Command::Holevo {
            ensemble,
            channel,
            random_basis,
        } => holevo(c, ensemble, channel.as_deref(), *random_basis),
        Command::Dpi { channels, ensemble } => dpi(c, channels, ensemble.as_deref()),
        Command::Cascade { cascade: path, csv } => cascade(c, path, csv.as_deref()),
        Command::Zeroth { trials } => zeroth(c, *trials),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
