//! Randomized verification of the directed-entanglement inequalities and of
//! the protocol-level bounds, reported as signed margins.
//!
//! Every trial draws its own seed from the base seed, so trials run in
//! parallel and any single trial can be replayed from its recorded seed.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{preset_channel, Channel, Ensemble, Preset};
use crate::entropy::{
    classicize, diagonal_distribution, directed_entanglement, mutual_information_rv,
    pure_entropy_of, shannon,
};
use crate::error::{QilError, Result};
use crate::linalg::{c, CVector, ZERO};
use crate::protocols::{
    add_observer, simulate_cascade, simulate_cascade_with, simulate_classical_communication,
    simulate_dpi_chain, simulate_measurement, zeroth_law_from_parts, CascadeConfig,
    CommunicationLabels, MeasurementSpec,
};
use crate::random::{
    haar_matrix, haar_vector, physical_registry, random_density, random_pure, rng_from_seed,
    split_seed, SeededRng,
};
use crate::state::{DensityMatrix, PureState, Unitary};
use crate::tol::DEFAULT_MAX_TOTAL_DIM;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b_prime")]
    BPrime,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "e_prime")]
    EPrime,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "holevo")]
    Holevo,
    #[serde(rename = "dpi")]
    Dpi,
    #[serde(rename = "zeroth")]
    Zeroth,
    #[serde(rename = "second_first_step")]
    SecondFirstStep,
    #[serde(rename = "chi_identity")]
    ChiIdentity,
    #[serde(rename = "observer_agreement")]
    ObserverAgreement,
    /// Deliberately false claim `E(X→Y) ≤ 0`, used to confirm the suite can
    /// report violations. Not part of the default suite.
    #[serde(rename = "control_nonpositive")]
    ControlNonpositive,
}

impl PropertyId {
    pub const DEFAULT_SUITE: [PropertyId; 16] = [
        PropertyId::A,
        PropertyId::B,
        PropertyId::BPrime,
        PropertyId::C,
        PropertyId::D,
        PropertyId::E,
        PropertyId::EPrime,
        PropertyId::F,
        PropertyId::G,
        PropertyId::H,
        PropertyId::Holevo,
        PropertyId::Dpi,
        PropertyId::Zeroth,
        PropertyId::SecondFirstStep,
        PropertyId::ChiIdentity,
        PropertyId::ObserverAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::A => "a",
            PropertyId::B => "b",
            PropertyId::BPrime => "b_prime",
            PropertyId::C => "c",
            PropertyId::D => "d",
            PropertyId::E => "e",
            PropertyId::EPrime => "e_prime",
            PropertyId::F => "f",
            PropertyId::G => "g",
            PropertyId::H => "h",
            PropertyId::Holevo => "holevo",
            PropertyId::Dpi => "dpi",
            PropertyId::Zeroth => "zeroth",
            PropertyId::SecondFirstStep => "second_first_step",
            PropertyId::ChiIdentity => "chi_identity",
            PropertyId::ObserverAgreement => "observer_agreement",
            PropertyId::ControlNonpositive => "control_nonpositive",
        }
    }

    /// Constructed equalities are held to a tighter tolerance.
    pub fn default_tolerance(self) -> f64 {
        match self {
            PropertyId::BPrime | PropertyId::EPrime | PropertyId::G => 1e-10,
            _ => 1e-9,
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyId {
    type Err = QilError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace(['′', '\''], "_prime");
        PropertyId::DEFAULT_SUITE
            .iter()
            .chain(&[PropertyId::ControlNonpositive])
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| QilError::InvalidConfig(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankPolicy {
    Pure,
    Full,
    /// Uniform over `1..=total_dim`.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheckConfig {
    pub property: PropertyId,
    pub trials: usize,
    /// Subsystem dimensions are drawn uniformly from this list, so repeated
    /// entries act as weights.
    pub dims: Vec<usize>,
    pub rank: RankPolicy,
    pub seed: u64,
    pub tolerance: f64,
    pub max_total_dim: usize,
}

/// Default dimension choices: mostly qubits, occasionally qutrits and ququarts.
pub const DEFAULT_DIMS: [usize; 5] = [2, 2, 2, 3, 4];
pub const DEFAULT_TRIALS: usize = 500;
pub const SUITE_MAX_TOTAL_DIM: usize = 256;

impl PropertyCheckConfig {
    pub fn new(property: PropertyId, trials: usize, seed: u64) -> Self {
        PropertyCheckConfig {
            property,
            trials,
            dims: DEFAULT_DIMS.to_vec(),
            rank: RankPolicy::Random,
            seed,
            tolerance: property.default_tolerance(),
            max_total_dim: SUITE_MAX_TOTAL_DIM,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(QilError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 2) {
            return Err(QilError::InvalidConfig(
                "dimension choices must be nonempty and ≥ 2".into(),
            ));
        }
        let smallest = *self.dims.iter().min().unwrap();
        if smallest.pow(4) > self.max_total_dim {
            return Err(QilError::InvalidConfig(format!(
                "four subsystems of dimension {smallest} exceed max_total_dim {}",
                self.max_total_dim
            )));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(QilError::InvalidConfig(format!(
                "tolerance {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        split_seed(self.seed, self.property.stream(), trial as u64)
    }
}

/// Per-property summary. `worst_margin` is the smallest signed margin seen
/// and `worst_seed` the trial seed that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub worst_seed: u64,
    pub tolerance: f64,
    pub witness_margin: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors.is_empty() && self.witness_margin >= -self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn get(&self, property: PropertyId) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.property == property)
    }
}

/// Random pure state on the named systems plus a hidden purifier, so mixed
/// states of any rank are handled through the pure-state Gram route.
#[derive(Clone, Debug)]
struct Sample {
    psi: PureState,
}

const PURIFIER: &str = "~P";

impl Sample {
    fn random(labels: &[&str], dims: &[usize], rank: usize, rng: &mut SeededRng) -> Result<Sample> {
        let mut labels = labels.to_vec();
        let mut dims = dims.to_vec();
        if rank > 1 {
            labels.push(PURIFIER);
            dims.push(rank);
        }
        let reg = physical_registry(&labels, &dims, usize::MAX)?;
        Ok(Sample {
            psi: random_pure(&reg, rng),
        })
    }

    fn from_pure(psi: PureState) -> Sample {
        Sample { psi }
    }

    /// Product of two samples; purifiers are renamed to stay distinct.
    fn product(a: &Sample, b: &Sample) -> Result<Sample> {
        let rename = |s: &Sample, tag: &str| -> Result<PureState> {
            let entries = s
                .psi
                .registry()
                .entries()
                .iter()
                .map(|e| {
                    let mut e = e.clone();
                    if e.label == PURIFIER {
                        e.label = format!("{PURIFIER}{tag}");
                    }
                    e
                })
                .collect();
            let reg = crate::registry::SystemRegistry::with_max_dim(entries, usize::MAX)?;
            PureState::new(reg, s.psi.amplitudes().clone())
        };
        Ok(Sample {
            psi: rename(a, "1")?.tensor(&rename(b, "2")?)?,
        })
    }

    fn s(&self, labels: &[&str]) -> Result<f64> {
        pure_entropy_of(&self.psi, labels)
    }

    fn e(&self, x: &[&str], y: &[&str]) -> Result<f64> {
        let xy: Vec<&str> = x.iter().chain(y).copied().collect();
        Ok(self.s(y)? - self.s(&xy)?)
    }

    fn reduce(&self, labels: &[&str]) -> Result<DensityMatrix> {
        self.psi.partial_trace(labels)
    }

    fn apply(&self, u: &Unitary) -> Result<Sample> {
        Ok(Sample {
            psi: self.psi.apply_unitary(u)?,
        })
    }
}

fn draw_dims(n: usize, cfg: &PropertyCheckConfig, rng: &mut SeededRng) -> Vec<usize> {
    for _ in 0..64 {
        let dims: Vec<usize> = (0..n).map(|_| *cfg.dims.choose(rng).unwrap()).collect();
        if dims.iter().product::<usize>() <= cfg.max_total_dim {
            return dims;
        }
    }
    vec![*cfg.dims.iter().min().unwrap(); n]
}

fn draw_rank(total: usize, policy: RankPolicy, rng: &mut SeededRng) -> usize {
    match policy {
        RankPolicy::Pure => 1,
        RankPolicy::Full => total,
        RankPolicy::Random => rng.random_range(1..=total),
    }
}

fn random_sample(
    labels: &[&str],
    cfg: &PropertyCheckConfig,
    rng: &mut SeededRng,
) -> Result<Sample> {
    let dims = draw_dims(labels.len(), cfg, rng);
    let rank = draw_rank(dims.iter().product(), cfg.rank, rng);
    Sample::random(labels, &dims, rank, rng)
}

fn equality(lhs: f64, rhs: f64) -> f64 {
    -(lhs - rhs).abs()
}

fn random_preset(dim: usize, rng: &mut SeededRng) -> Result<Channel> {
    let preset = *Preset::ALL.choose(rng).unwrap();
    preset_channel(preset, rng.random::<f64>(), dim)
}

fn random_ensemble(dim: usize, rng: &mut SeededRng) -> Result<Ensemble> {
    let n = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let items = weights
        .iter()
        .map(|w| (w / total, haar_vector(dim, rng)))
        .collect();
    Ensemble::new(dim, items)
}

fn communication_trial(cfg: &PropertyCheckConfig, rng: &mut SeededRng, check: &str) -> Result<f64> {
    let dim = *[2usize, 3].choose(rng).unwrap();
    let ens = random_ensemble(dim, rng)?;
    let ch = random_preset(dim, rng)?;
    let basis = haar_matrix(dim, rng)?;
    let r = simulate_classical_communication(
        &ens,
        &ch,
        Some(&basis),
        &CommunicationLabels::default(),
        cfg.tolerance,
    )?;
    Ok(r.margin(check))
}

fn observer_margin(state: &PureState, target: &str) -> Result<f64> {
    let out = simulate_measurement(state, &MeasurementSpec::computational(target, "M", "B"))?;
    let out = add_observer(&out, "M", "C", "Charlie")?;
    let bc = out.partial_trace(&["B", "C"])?;
    let m = bc.registry().dim_of("B")?;
    let joint = diagonal_distribution(&bc, &["B", "C"])?;
    let agree: f64 = (0..m).map(|j| joint[j * m + j]).sum();
    let i = mutual_information_rv(&bc, &["B"], &["C"])?;
    let hb = shannon(&diagonal_distribution(&bc, &["B"])?);
    let hc = shannon(&diagonal_distribution(&bc, &["C"])?);
    Ok(equality(agree, 1.0)
        .min(equality(i, hb))
        .min(equality(hb, hc)))
}

fn zeroth_parts(
    cfg: &PropertyCheckConfig,
    rng: &mut SeededRng,
) -> Result<(DensityMatrix, DensityMatrix, usize)> {
    let dq = *[2usize, 2, 3].choose(rng).unwrap();
    let part = |q: &str, b: &str, rng: &mut SeededRng| -> Result<DensityMatrix> {
        let reg = physical_registry(&[q, b], &[dq, 2], DEFAULT_MAX_TOTAL_DIM)?;
        let rank = draw_rank(2 * dq, cfg.rank, rng);
        random_density(&reg, rank, rng)
    };
    let p1 = part("Q1", "B1", rng)?;
    let p2 = part("Q2", "B2", rng)?;
    Ok((p1, p2, dq))
}

/// Signed margin of one trial of `cfg.property` with the given trial seed.
pub fn evaluate_trial(cfg: &PropertyCheckConfig, seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let rng = &mut rng;
    let xy = ["X", "Y"];
    let xyz = ["X", "Y", "Z"];
    let xyzw = ["X", "Y", "Z", "W"];
    match cfg.property {
        PropertyId::A => {
            let s = random_sample(&xy, cfg, rng)?;
            let (e, sx) = (s.e(&["X"], &["Y"])?, s.s(&["X"])?);
            Ok((e + sx).min(sx - e))
        }
        PropertyId::B => {
            let s = random_sample(&xyz, cfg, rng)?;
            Ok(s.e(&["X"], &["Y", "Z"])? - s.e(&["X"], &["Y"])?)
        }
        PropertyId::BPrime => {
            let xy = random_sample(&xy, cfg, rng)?;
            let z = random_sample(&["Z"], cfg, rng)?;
            let s = Sample::product(&xy, &z)?;
            Ok(equality(s.e(&["X"], &["Y", "Z"])?, s.e(&["X"], &["Y"])?))
        }
        PropertyId::C => {
            let s = random_sample(&xyz, cfg, rng)?;
            let lhs = s.e(&["X", "Y"], &["Z"])?;
            Ok(equality(
                lhs,
                s.e(&["X"], &["Z"])? + s.e(&["Y"], &["X", "Z"])?,
            ))
        }
        PropertyId::D => {
            let s = random_sample(&xyz, cfg, rng)?;
            Ok(s.e(&["X"], &["Y", "Z"])? - s.e(&["X"], &["Y"])? - s.e(&["X"], &["Z"])?)
        }
        PropertyId::E => {
            let s = random_sample(&xyzw, cfg, rng)?;
            Ok(s.e(&["X", "Y"], &["Z", "W"])? - s.e(&["X"], &["Z"])? - s.e(&["Y"], &["W"])?)
        }
        PropertyId::EPrime => {
            let xz = random_sample(&["X", "Z"], cfg, rng)?;
            let yw = random_sample(&["Y", "W"], cfg, rng)?;
            let s = Sample::product(&xz, &yw)?;
            let lhs = s.e(&["X", "Y"], &["Z", "W"])?;
            Ok(equality(lhs, s.e(&["X"], &["Z"])? + s.e(&["Y"], &["W"])?))
        }
        PropertyId::F => {
            let rho = random_sample(&xy, cfg, rng)?.reduce(&xy)?;
            f_margin(&rho)
        }
        PropertyId::G => {
            let s = random_sample(&xy, cfg, rng)?;
            let dx = s.psi.registry().dim_of("X")?;
            let dy = s.psi.registry().dim_of("Y")?;
            let ux = Unitary::new(haar_matrix(dx, rng)?, &["X"])?;
            let uy = Unitary::new(haar_matrix(dy, rng)?, &["Y"])?;
            let rotated = s.apply(&ux)?.apply(&uy)?;
            Ok(equality(s.e(&["X"], &["Y"])?, rotated.e(&["X"], &["Y"])?))
        }
        PropertyId::H => {
            let s = random_sample(&xy, cfg, rng)?;
            let rho = s.reduce(&xy)?;
            h_margin(&rho, s.s(&["X"])?)
        }
        PropertyId::Holevo => communication_trial(cfg, rng, "holevo_bound"),
        PropertyId::ChiIdentity => communication_trial(cfg, rng, "chi_identity"),
        PropertyId::Dpi => {
            let reg = physical_registry(&["Q"], &[2], DEFAULT_MAX_TOTAL_DIM)?;
            let rank = draw_rank(2, cfg.rank, rng);
            let rho = random_density(&reg, rank, rng)?;
            let ch1 = random_preset(2, rng)?;
            let ch2 = random_preset(2, rng)?;
            let r = simulate_dpi_chain(&rho, &ch1, &ch2, cfg.tolerance)?;
            Ok(r.margin("S_ge_Ic1").min(r.margin("Ic1_ge_Ic21")))
        }
        PropertyId::Zeroth => {
            let (p1, p2, dq) = zeroth_parts(cfg, rng)?;
            let u = Unitary::new(haar_matrix(dq * dq, rng)?, &["Q1", "Q2"])?;
            let r = zeroth_law_from_parts(&p1, &p2, "Q1", "Q2", &u, cfg.tolerance)?;
            Ok(r.margin("no_decrease"))
        }
        PropertyId::SecondFirstStep => {
            let mut cascade = CascadeConfig::new(vec![2, 4, 8], 1, rng.random());
            cascade.couplings = Some(vec![(0, 1)]);
            let r = simulate_cascade(&cascade, "B", cfg.tolerance)?;
            Ok(r.margin("first_step_nondecreasing"))
        }
        PropertyId::ObserverAgreement => {
            let dims = draw_dims(2, cfg, rng);
            let reg = physical_registry(&["R", "L"], &dims, DEFAULT_MAX_TOTAL_DIM)?;
            observer_margin(&random_pure(&reg, rng), "L")
        }
        PropertyId::ControlNonpositive => {
            let s = random_sample(&xy, cfg, rng)?;
            Ok(-s.e(&["X"], &["Y"])?)
        }
    }
}

fn f_margin(rho: &DensityMatrix) -> Result<f64> {
    let e = directed_entanglement(rho, &["X"], &["Y"])?;
    let yc = classicize(rho, &["Y"])?;
    let e_yc = directed_entanglement(&yc, &["X"], &["Y"])?;
    let e_xcyc = directed_entanglement(&classicize(&yc, &["X"])?, &["X"], &["Y"])?;
    Ok((e - e_yc).min(e_yc - e_xcyc))
}

fn h_margin(rho: &DensityMatrix, s_x: f64) -> Result<f64> {
    let e_yc = directed_entanglement(&classicize(rho, &["Y"])?, &["X"], &["Y"])?;
    Ok((e_yc + s_x).min(-e_yc))
}

fn ket(dims: &[usize], terms: &[(&[usize], f64)]) -> Result<CVector> {
    let total: usize = dims.iter().product();
    let mut v = CVector::from_element(total, ZERO);
    for (digits, amp) in terms {
        let idx = digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d);
        v[idx] += c(*amp, 0.0);
    }
    Ok(v)
}

fn pure(labels: &[&str], dims: &[usize], terms: &[(&[usize], f64)]) -> Result<PureState> {
    let reg = physical_registry(labels, dims, DEFAULT_MAX_TOTAL_DIM)?;
    PureState::normalized(reg, ket(dims, terms)?)
}

fn bell(x: &str, y: &str) -> Result<PureState> {
    pure(&[x, y], &[2, 2], &[(&[0, 0], 1.0), (&[1, 1], 1.0)])
}

/// Margin of the constructed equality or extremal case of `property`.
pub fn witness_margin(property: PropertyId, tolerance: f64) -> Result<f64> {
    let product3 = || pure(&["X", "Y", "Z"], &[2, 2, 2], &[(&[0, 1, 0], 1.0)]);
    match property {
        // upper bound of (a) attained by a maximally entangled pair
        PropertyId::A => {
            let s = Sample::from_pure(bell("X", "Y")?);
            let (e, sx) = (s.e(&["X"], &["Y"])?, s.s(&["X"])?);
            Ok((e + sx).min(sx - e))
        }
        PropertyId::B | PropertyId::D => {
            let s = Sample::from_pure(product3()?);
            let m = match property {
                PropertyId::B => s.e(&["X"], &["Y", "Z"])? - s.e(&["X"], &["Y"])?,
                _ => s.e(&["X"], &["Y", "Z"])? - s.e(&["X"], &["Y"])? - s.e(&["X"], &["Z"])?,
            };
            Ok(m)
        }
        PropertyId::BPrime => {
            let s =
                Sample::from_pure(bell("X", "Y")?.tensor(&pure(&["Z"], &[2], &[(&[0], 1.0)])?)?);
            Ok(equality(s.e(&["X"], &["Y", "Z"])?, s.e(&["X"], &["Y"])?))
        }
        PropertyId::C => {
            let ghz = pure(
                &["X", "Y", "Z"],
                &[2, 2, 2],
                &[(&[0, 0, 0], 1.0), (&[1, 1, 1], 1.0)],
            )?;
            let s = Sample::from_pure(ghz);
            let lhs = s.e(&["X", "Y"], &["Z"])?;
            Ok(equality(
                lhs,
                s.e(&["X"], &["Z"])? + s.e(&["Y"], &["X", "Z"])?,
            ))
        }
        PropertyId::E | PropertyId::EPrime => {
            let s = Sample::from_pure(bell("X", "Z")?.tensor(&bell("Y", "W")?)?);
            let lhs = s.e(&["X", "Y"], &["Z", "W"])?;
            let rhs = s.e(&["X"], &["Z"])? + s.e(&["Y"], &["W"])?;
            Ok(if property == PropertyId::E {
                lhs - rhs
            } else {
                equality(lhs, rhs)
            })
        }
        PropertyId::F => {
            let reg = physical_registry(&["X", "Y"], &[2, 2], DEFAULT_MAX_TOTAL_DIM)?;
            let classical =
                DensityMatrix::new(reg, crate::linalg::diag_real(&[0.5, 0.0, 0.0, 0.5]))?;
            f_margin(&classical)
        }
        PropertyId::G => {
            let s = Sample::from_pure(bell("X", "Y")?);
            let h = 0.5f64.sqrt();
            let had = crate::linalg::CMatrix::from_row_slice(
                2,
                2,
                &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
            );
            let r = s.apply(&Unitary::new(had, &["X"])?)?;
            Ok(equality(s.e(&["X"], &["Y"])?, r.e(&["X"], &["Y"])?))
        }
        PropertyId::H => h_margin(&bell("X", "Y")?.to_density(), 1.0),
        PropertyId::Holevo | PropertyId::ChiIdentity => {
            let ens = Ensemble::new(
                2,
                vec![
                    (0.5, ket(&[2], &[(&[0], 1.0)])?),
                    (0.5, ket(&[2], &[(&[1], 1.0)])?),
                ],
            )?;
            let r = simulate_classical_communication(
                &ens,
                &Channel::identity(2),
                None,
                &CommunicationLabels::default(),
                tolerance,
            )?;
            let name = if property == PropertyId::Holevo {
                "holevo_bound"
            } else {
                "chi_identity"
            };
            Ok(r.margin(name))
        }
        PropertyId::Dpi => {
            let reg = physical_registry(&["Q"], &[2], DEFAULT_MAX_TOTAL_DIM)?;
            let rho = random_density(&reg, 2, &mut rng_from_seed(0))?;
            let r = simulate_dpi_chain(
                &rho,
                &Channel::identity(2),
                &Channel::identity(2),
                tolerance,
            )?;
            Ok(r.margin("S_ge_Ic1").min(r.margin("Ic1_ge_Ic21")))
        }
        PropertyId::Zeroth => {
            let reg = |q: &str, b: &str| physical_registry(&[q, b], &[2, 2], DEFAULT_MAX_TOTAL_DIM);
            let p1 = random_density(&reg("Q1", "B1")?, 2, &mut rng_from_seed(1))?;
            let p2 = random_density(&reg("Q2", "B2")?, 3, &mut rng_from_seed(2))?;
            let u = Unitary::identity(4, &["Q1", "Q2"])?;
            let r = zeroth_law_from_parts(&p1, &p2, "Q1", "Q2", &u, tolerance)?;
            Ok(r.margin("no_decrease"))
        }
        PropertyId::SecondFirstStep => {
            let mut cascade = CascadeConfig::new(vec![2, 4, 8], 1, 0);
            cascade.couplings = Some(vec![(0, 1)]);
            let r =
                simulate_cascade_with(&cascade, "B", tolerance, |d, t, _| Unitary::identity(d, t))?;
            Ok(r.margin("first_step_nondecreasing"))
        }
        PropertyId::ObserverAgreement => {
            observer_margin(&pure(&["L"], &[2], &[(&[0], 1.0), (&[1], 1.0)])?, "L")
        }
        PropertyId::ControlNonpositive => {
            Ok(-Sample::from_pure(bell("X", "Y")?).e(&["X"], &["Y"])?)
        }
    }
}

/// Runs every trial of one property and summarizes the margins.
pub fn check_property(cfg: &PropertyCheckConfig) -> Result<PropertyReport> {
    cfg.validate()?;
    let outcomes: Vec<(u64, Result<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = cfg.trial_seed(t);
            (seed, evaluate_trial(cfg, seed))
        })
        .collect();
    let mut report = PropertyReport {
        property: cfg.property,
        trials: cfg.trials,
        violations: 0,
        worst_margin: f64::INFINITY,
        worst_seed: 0,
        tolerance: cfg.tolerance,
        witness_margin: f64::NAN,
        errors: Vec::new(),
    };
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(m) => {
                if m.is_nan() || m < -cfg.tolerance {
                    report.violations += 1;
                }
                if m < report.worst_margin || m.is_nan() {
                    report.worst_margin = m;
                    report.worst_seed = seed;
                }
            }
            Err(e) => report.errors.push(format!("seed {seed}: {e}")),
        }
    }
    match witness_margin(cfg.property, cfg.tolerance) {
        Ok(m) => report.witness_margin = m,
        Err(e) => report.errors.push(format!("witness: {e}")),
    }
    Ok(report)
}

/// Configurations for every default property.
pub fn default_suite(seed: u64, trials: usize) -> Vec<PropertyCheckConfig> {
    PropertyId::DEFAULT_SUITE
        .iter()
        .map(|&p| PropertyCheckConfig::new(p, trials, seed))
        .collect()
}

/// Runs each configuration; a configuration that fails validation is
/// recorded as an error entry rather than aborting the run.
pub fn run_suite(configs: &[PropertyCheckConfig]) -> Result<SuiteReport> {
    if configs.is_empty() {
        return Err(QilError::InvalidConfig("empty suite".into()));
    }
    let properties: Vec<PropertyReport> = configs
        .iter()
        .map(|cfg| {
            check_property(cfg).unwrap_or_else(|e| PropertyReport {
                property: cfg.property,
                trials: 0,
                violations: 0,
                worst_margin: f64::NAN,
                worst_seed: 0,
                tolerance: cfg.tolerance,
                witness_margin: f64::NAN,
                errors: vec![e.to_string()],
            })
        })
        .collect();
    let passed = properties.iter().all(PropertyReport::passed);
    Ok(SuiteReport {
        seed: configs[0].seed,
        properties,
        passed,
    })
}
