use serde::{Deserialize, Serialize};

use crate::entropy::thermodynamic_entropy;
use crate::error::{QilError, Result};
use crate::linalg::{self, c, CMatrix};
use crate::random::{random_haar_unitary, rng_from_seed, SeededRng};
use crate::registry::{Subsystem, SystemRegistry};
use crate::report::{ExperimentReport, TrajectoryPoint};
use crate::state::{DensityMatrix, Unitary};
use crate::tol::DEFAULT_MAX_TOTAL_DIM;

/// Macroscopic factor `Q^>` followed by microscopic factors `Q_0, Q_1, …`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    /// `[d_>, d_0, d_1, …]`.
    pub dims: Vec<usize>,
    pub sweeps: usize,
    pub seed: u64,
    /// Pairs of indices into `dims` coupled in order within each sweep.
    /// Defaults to the nearest-neighbor chain `(0,1), (1,2), …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<(usize, usize)>>,
    #[serde(default = "default_max_dim")]
    pub max_total_dim: usize,
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_TOTAL_DIM
}

/// Dimension of the untouched dummy knowledge system.
const DUMMY_DIM: usize = 2;

impl CascadeConfig {
    pub fn new(dims: Vec<usize>, sweeps: usize, seed: u64) -> Self {
        CascadeConfig {
            dims,
            sweeps,
            seed,
            couplings: None,
            max_total_dim: DEFAULT_MAX_TOTAL_DIM,
        }
    }

    pub fn schedule(&self) -> Vec<(usize, usize)> {
        self.couplings
            .clone()
            .unwrap_or_else(|| (1..self.dims.len()).map(|k| (k - 1, k)).collect())
    }

    pub fn label(&self, index: usize) -> String {
        if index == 0 {
            "Q>".to_string()
        } else {
            format!("Q{}", index - 1)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.len() < 2 {
            return Err(QilError::InvalidConfig(
                "dims needs the macroscopic factor and at least one microscopic factor".into(),
            ));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(QilError::InvalidConfig(format!(
                "subsystem dimension {d} < 2"
            )));
        }
        for &(a, b) in &self.schedule() {
            if a >= self.dims.len() || b >= self.dims.len() || a.abs_diff(b) != 1 {
                return Err(QilError::InvalidConfig(format!(
                    "coupling ({a}, {b}) is not a nearest-neighbor pair"
                )));
            }
        }
        let total = self
            .dims
            .iter()
            .fold(self.dims[0] * DUMMY_DIM, |acc: usize, &d| {
                acc.saturating_mul(d)
            });
        if total > self.max_total_dim {
            return Err(QilError::DimensionOverflow {
                total,
                max: self.max_total_dim,
            });
        }
        Ok(())
    }
}

/// Second-law cascade. `b_label` starts maximally entangled with `Q^>`,
/// every `Q_k` starts maximally mixed, and a dummy knowledge system `B~`
/// sits in a pure state throughout. Each sweep applies a fresh Haar
/// unitary to every scheduled pair; the coarse-grained entropy
/// `S_T(Q^>|B) = −E(Q^> → B^c)` is recorded after every coupling.
///
/// Only the first step is checked for monotonicity; all steps are checked
/// against `[0, log₂ d_>]`.
pub fn simulate_cascade(cfg: &CascadeConfig, b_label: &str, tol: f64) -> Result<ExperimentReport> {
    simulate_cascade_with(cfg, b_label, tol, |dim, targets, rng| {
        random_haar_unitary(dim, targets, rng)
    })
}

/// [`simulate_cascade`] with a caller-chosen coupling unitary per step.
pub fn simulate_cascade_with<F>(
    cfg: &CascadeConfig,
    b_label: &str,
    tol: f64,
    mut coupling: F,
) -> Result<ExperimentReport>
where
    F: FnMut(usize, &[&str], &mut SeededRng) -> Result<Unitary>,
{
    cfg.validate()?;
    let d_macro = cfg.dims[0];
    let labels: Vec<String> = (0..cfg.dims.len()).map(|k| cfg.label(k)).collect();
    if labels.iter().any(|l| l == b_label) || b_label == "B~" {
        return Err(QilError::DuplicateLabel(b_label.to_string()));
    }

    let pair_reg = SystemRegistry::with_max_dim(
        vec![
            Subsystem::knowledge(b_label, d_macro, "Bob"),
            Subsystem::physical(&labels[0], d_macro),
        ],
        cfg.max_total_dim,
    )?;
    let mut phi = CMatrix::zeros(d_macro * d_macro, d_macro * d_macro);
    for i in 0..d_macro {
        for j in 0..d_macro {
            phi[(i * d_macro + i, j * d_macro + j)] = c(1.0 / d_macro as f64, 0.0);
        }
    }
    let mut rho = DensityMatrix::from_parts(pair_reg, phi);
    for (label, &d) in labels.iter().zip(&cfg.dims).skip(1) {
        let reg =
            SystemRegistry::with_max_dim(vec![Subsystem::physical(label, d)], cfg.max_total_dim)?;
        rho = rho.tensor(&DensityMatrix::maximally_mixed(reg))?;
    }
    let dummy_reg = SystemRegistry::with_max_dim(
        vec![Subsystem::knowledge("B~", DUMMY_DIM, "Bob")],
        cfg.max_total_dim,
    )?;
    let dummy = DensityMatrix::from_parts(
        dummy_reg,
        linalg::outer(&linalg::basis_vector(DUMMY_DIM, 0)),
    );
    rho = rho.tensor(&dummy)?;

    let coarse = |r: &DensityMatrix| thermodynamic_entropy(r, &[labels[0].as_str()], &[b_label]);
    let mut trajectory = vec![TrajectoryPoint {
        step: 0,
        coupling_pair: "initial".into(),
        s_t: coarse(&rho)?,
    }];
    let mut rng = rng_from_seed(cfg.seed);
    let schedule = cfg.schedule();
    for _ in 0..cfg.sweeps {
        for &(a, b) in &schedule {
            let targets = [labels[a].as_str(), labels[b].as_str()];
            let u = coupling(cfg.dims[a] * cfg.dims[b], &targets, &mut rng)?;
            rho = rho.apply_unitary(&u)?;
            trajectory.push(TrajectoryPoint {
                step: trajectory.len(),
                coupling_pair: format!("{}-{}", targets[0], targets[1]),
                s_t: coarse(&rho)?,
            });
        }
    }

    let values: Vec<f64> = trajectory.iter().map(|p| p.s_t).collect();
    let upper = (d_macro as f64).log2();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut r = ExperimentReport::new("cascade", tol);
    r.seed = Some(cfg.seed);
    r.value("initial", values[0])
        .value("final", *values.last().unwrap())
        .value("min", lo)
        .value("max", hi)
        .value("upper_bound", upper);
    if values.len() > 1 {
        r.value("first_step_delta", values[1] - values[0]);
        r.check_ge("first_step_nondecreasing", values[1], values[0]);
    }
    r.check_ge("lower_bound", lo, 0.0)
        .check_ge("upper_bound", upper, hi);
    r.trajectory = Some(trajectory);
    Ok(r)
}
