//! Quantum channels stored as Kraus families, their Stinespring
//! environment picture, and the channel-level information quantities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::von_neumann;
use crate::error::{QilError, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::prob::ProbabilityVector;
use crate::registry::{Kind, Subsystem, SystemRegistry};
use crate::state::{DensityMatrix, PureState, Unitary};
use crate::tol::TOL;

/// Completely positive trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

impl Channel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| QilError::KrausShape("no Kraus operators".into()))?;
        let (dim_out, dim_in) = first.shape();
        if dim_in == 0 || dim_out == 0 {
            return Err(QilError::KrausShape("zero-sized operator".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (dim_out, dim_in)) {
            return Err(QilError::KrausShape(format!(
                "expected {dim_out}x{dim_in}, found {}x{}",
                k.nrows(),
                k.ncols()
            )));
        }
        let sum = kraus.iter().fold(CMatrix::zeros(dim_in, dim_in), |acc, k| {
            acc + k.adjoint() * k
        });
        let deviation = linalg::max_abs(&(sum - linalg::identity(dim_in)));
        if deviation > TOL.unitary {
            return Err(QilError::KrausIncomplete { deviation });
        }
        Ok(Channel {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(dim: usize) -> Channel {
        Channel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![linalg::identity(dim)],
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    fn check_input(&self, d: usize) -> Result<()> {
        if d != self.dim_in {
            return Err(QilError::DimensionMismatch {
                expected: self.dim_in,
                found: d,
            });
        }
        Ok(())
    }

    /// `Σ K ρ K†` on a raw matrix.
    pub fn apply_matrix(&self, rho: &CMatrix) -> Result<CMatrix> {
        self.check_input(rho.nrows())?;
        Ok(self
            .kraus
            .iter()
            .fold(CMatrix::zeros(self.dim_out, self.dim_out), |acc, k| {
                acc + k * rho * k.adjoint()
            }))
    }

    /// Applies the channel to the whole state. If the output dimension
    /// differs, the state must consist of a single subsystem.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho.dim())?;
        let reg = if self.dim_in == self.dim_out {
            rho.registry().clone()
        } else if rho.registry().len() == 1 {
            let e = &rho.registry().entries()[0];
            SystemRegistry::with_max_dim(
                vec![Subsystem::new(&e.label, self.dim_out, e.kind.clone())],
                rho.registry().max_total_dim(),
            )?
        } else {
            return Err(QilError::DimensionMismatch {
                expected: self.dim_in,
                found: self.dim_out,
            });
        };
        Ok(DensityMatrix::from_parts(
            reg,
            self.apply_matrix(rho.matrix())?,
        ))
    }

    /// Applies the channel to subsystem `label`, identity elsewhere.
    pub fn apply_on(&self, rho: &DensityMatrix, label: &str) -> Result<DensityMatrix> {
        self.check_input(rho.registry().dim_of(label)?)?;
        rho.map_local(label, &self.kraus, self.dim_out)
    }

    /// Number of Kraus operators, which is the environment dimension of
    /// [`Channel::stinespring`].
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    /// Unitary `V` on `Q ⊗ E` (row-major, `Q` first) with
    /// `V(|ψ⟩ ⊗ |0⟩_E) = Σ_k K_k|ψ⟩ ⊗ |k⟩_E`. The columns for `E ≠ 0` are an
    /// arbitrary orthonormal completion. Requires `dim_in == dim_out`.
    pub fn stinespring(&self) -> Result<Dilation> {
        if self.dim_in != self.dim_out {
            return Err(QilError::DimensionMismatch {
                expected: self.dim_in,
                found: self.dim_out,
            });
        }
        let d = self.dim_in;
        let env = self.env_dim();
        let n = d * env;
        let mut isometry = CMatrix::zeros(n, d);
        for (k, kr) in self.kraus.iter().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    isometry[(a * env + k, b)] = kr[(a, b)];
                }
            }
        }
        let completed = linalg::complete_unitary(&isometry);
        // put the defined columns at |b⟩|0⟩_E, the completion elsewhere
        let mut unitary = CMatrix::zeros(n, n);
        let mut extra = d;
        for col in 0..n {
            let src = if col % env == 0 {
                col / env
            } else {
                extra += 1;
                extra - 1
            };
            unitary.set_column(col, &completed.column(src));
        }
        Ok(Dilation {
            unitary,
            env_dim: env,
        })
    }

    /// Environment route: dilate, apply `V`, trace out `E`.
    pub fn apply_via_dilation(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_input(rho.dim())?;
        let dil = self.stinespring()?;
        let env_label = fresh_label(rho.registry(), "E");
        let merged = as_single(rho, "__q")?;
        let ext = merged.extend_fresh(&env_label, dil.env_dim, Kind::Physical)?;
        let out = ext.apply_unitary(&dil.unitary_on("__q", &env_label)?)?;
        let reduced = out.partial_trace(&["__q"])?;
        Ok(DensityMatrix::from_parts(
            rho.registry().clone(),
            reduced.matrix().clone(),
        ))
    }
}

/// Stinespring dilation of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct Dilation {
    pub unitary: CMatrix,
    pub env_dim: usize,
}

impl Dilation {
    pub fn unitary_on(&self, system: &str, env: &str) -> Result<Unitary> {
        Unitary::new(self.unitary.clone(), &[system, env])
    }
}

/// `ch2 ∘ ch1` with Kraus operators `{K2_j K1_i}`.
pub fn compose(ch2: &Channel, ch1: &Channel) -> Result<Channel> {
    if ch1.dim_out != ch2.dim_in {
        return Err(QilError::DimensionMismatch {
            expected: ch2.dim_in,
            found: ch1.dim_out,
        });
    }
    let kraus = ch2
        .kraus
        .iter()
        .flat_map(|k2| ch1.kraus.iter().map(move |k1| k2 * k1))
        .collect();
    Ok(Channel {
        dim_in: ch1.dim_in,
        dim_out: ch2.dim_out,
        kraus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Identity,
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Identity,
        Preset::Dephasing,
        Preset::Depolarizing,
        Preset::AmplitudeDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Identity => "identity",
            Preset::Dephasing => "dephasing",
            Preset::Depolarizing => "depolarizing",
            Preset::AmplitudeDamping => "amplitude_damping",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = QilError;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| QilError::UnknownPreset(s.to_string()))
    }
}

/// Generalized Pauli `X^a Z^b` on `C^d`.
fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        let phase = omega * ((b * k) % d) as f64;
        m[((k + a) % d, k)] = c(phase.cos(), phase.sin());
    }
    m
}

/// Standard noise families on `C^dim`; `param ∈ [0, 1]`, 0 acts as identity.
///
/// * dephasing: `(1−p) ρ + p diag(ρ)`
/// * depolarizing: `(1−p) ρ + p I/d`
/// * amplitude damping: each excited level decays to `|0⟩` with probability γ
pub fn preset_channel(preset: Preset, param: f64, dim: usize) -> Result<Channel> {
    if !(0.0..=1.0).contains(&param) {
        return Err(QilError::ParameterOutOfRange {
            name: "param",
            value: param,
            range: "[0, 1]",
        });
    }
    if dim < 1 {
        return Err(QilError::InvalidDimension(dim));
    }
    let d = dim as f64;
    let scaled = |m: CMatrix, w: f64| m * c(w.max(0.0).sqrt(), 0.0);
    let kraus = match preset {
        Preset::Identity => vec![linalg::identity(dim)],
        Preset::Dephasing => {
            let mut ks = vec![scaled(linalg::identity(dim), 1.0 - param + param / d)];
            ks.extend((1..dim).map(|b| scaled(weyl(dim, 0, b), param / d)));
            ks
        }
        Preset::Depolarizing => {
            let mut ks = vec![scaled(linalg::identity(dim), 1.0 - param + param / (d * d))];
            for a in 0..dim {
                for b in 0..dim {
                    if a != 0 || b != 0 {
                        ks.push(scaled(weyl(dim, a, b), param / (d * d)));
                    }
                }
            }
            ks
        }
        Preset::AmplitudeDamping => {
            let mut k0 = linalg::identity(dim);
            for j in 1..dim {
                k0[(j, j)] = c((1.0 - param).sqrt(), 0.0);
            }
            let mut ks = vec![k0];
            for j in 1..dim {
                let mut k = CMatrix::zeros(dim, dim);
                k[(0, j)] = c(param.sqrt(), 0.0);
                ks.push(k);
            }
            ks
        }
    };
    Channel::new(kraus)
}

/// Weighted pure states `{(p_i, |ψ_i⟩)}` on one `dim`-dimensional system,
/// optionally with preparation unitaries `U_i|0⟩ = |ψ_i⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    dim: usize,
    probs: ProbabilityVector,
    states: Vec<CVector>,
    unitaries: Option<Vec<CMatrix>>,
}

impl Ensemble {
    pub fn new(dim: usize, items: Vec<(f64, CVector)>) -> Result<Self> {
        if items.is_empty() {
            return Err(QilError::InvalidEnsemble("no items".into()));
        }
        if dim < 1 {
            return Err(QilError::InvalidEnsemble(
                "dimension must be at least 1".into(),
            ));
        }
        let (probs, states): (Vec<f64>, Vec<CVector>) = items.into_iter().unzip();
        let probs =
            ProbabilityVector::new(probs).map_err(|e| QilError::InvalidEnsemble(e.to_string()))?;
        for (i, s) in states.iter().enumerate() {
            if s.len() != dim {
                return Err(QilError::InvalidEnsemble(format!(
                    "item {i} has {} amplitudes, expected {dim}",
                    s.len()
                )));
            }
            let n = s.norm();
            if (n - 1.0).abs() > TOL.norm {
                return Err(QilError::InvalidEnsemble(format!("item {i} has norm {n}")));
            }
        }
        Ok(Ensemble {
            dim,
            probs,
            states,
            unitaries: None,
        })
    }

    /// Attaches explicit preparation unitaries, checked against the states.
    pub fn with_unitaries(mut self, unitaries: Vec<CMatrix>) -> Result<Self> {
        if unitaries.len() != self.states.len() {
            return Err(QilError::InvalidEnsemble(
                "one unitary per item required".into(),
            ));
        }
        for (i, (u, s)) in unitaries.iter().zip(&self.states).enumerate() {
            if u.shape() != (self.dim, self.dim) || linalg::unitarity_defect(u) > TOL.unitary {
                return Err(QilError::InvalidEnsemble(format!(
                    "unitary {i} is not a {0}x{0} unitary",
                    self.dim
                )));
            }
            if (u.column(0) - s).norm() > TOL.norm {
                return Err(QilError::InvalidEnsemble(format!(
                    "unitary {i} does not map |0> to its state"
                )));
            }
        }
        self.unitaries = Some(unitaries);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn probs(&self) -> &ProbabilityVector {
        &self.probs
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    /// Provided unitaries, or the deterministic completion of each `|ψ_i⟩`.
    pub fn preparation_unitaries(&self) -> Vec<CMatrix> {
        match &self.unitaries {
            Some(us) => us.clone(),
            None => self
                .states
                .iter()
                .map(|s| {
                    linalg::complete_unitary(&CMatrix::from_column_slice(self.dim, 1, s.as_slice()))
                })
                .collect(),
        }
    }

    /// `ρ̄ = Σ p_i |ψ_i⟩⟨ψ_i|`.
    pub fn average(&self) -> CMatrix {
        self.states
            .iter()
            .zip(self.probs.probs())
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, (s, p)| {
                acc + linalg::outer(s) * c(*p, 0.0)
            })
    }

    pub fn average_state(&self, label: &str) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_parts(
            single_registry(label, self.dim)?,
            self.average(),
        ))
    }
}

fn single_registry(label: &str, dim: usize) -> Result<SystemRegistry> {
    SystemRegistry::with_max_dim(vec![Subsystem::physical(label, dim)], usize::MAX)
}

fn matrix_entropy(m: CMatrix) -> Result<f64> {
    let d = m.nrows();
    Ok(von_neumann(&DensityMatrix::from_parts(
        single_registry("Q", d)?,
        m,
    )))
}

/// Whole state relabeled as one subsystem.
fn as_single(rho: &DensityMatrix, label: &str) -> Result<DensityMatrix> {
    let reg = SystemRegistry::with_max_dim(
        vec![Subsystem::physical(label, rho.dim())],
        rho.registry().max_total_dim(),
    )?;
    Ok(DensityMatrix::from_parts(reg, rho.matrix().clone()))
}

pub(crate) fn fresh_label(reg: &SystemRegistry, base: &str) -> String {
    let mut label = base.to_string();
    let mut k = 0;
    while reg.contains(&label) {
        k += 1;
        label = format!("{base}{k}");
    }
    label
}

/// Holevo quantity `χ = S(ℰ(ρ̄)) − Σ p_i S(ℰ(|ψ_i⟩⟨ψ_i|))`.
pub fn holevo_chi(ens: &Ensemble, ch: &Channel) -> Result<f64> {
    if ens.dim != ch.dim_in {
        return Err(QilError::DimensionMismatch {
            expected: ch.dim_in,
            found: ens.dim,
        });
    }
    let mut chi = matrix_entropy(ch.apply_matrix(&ens.average())?)?;
    for (s, p) in ens.states.iter().zip(ens.probs.probs()) {
        if *p > 0.0 {
            chi -= p * matrix_entropy(ch.apply_matrix(&linalg::outer(s))?)?;
        }
    }
    Ok(chi)
}

/// Minimal purification `Σ √λ_k |k⟩_R |v_k⟩_Q` from the eigendecomposition
/// of `rho`, with the reference dimension equal to the numerical rank.
pub fn purify(rho: &DensityMatrix, reference: &str, system: &str) -> Result<PureState> {
    let (vals, vecs) = linalg::eigh(rho.matrix());
    let cutoff = 1e-14 * vals[0].max(1.0);
    let rank = vals.iter().take_while(|&&v| v > cutoff).count().max(1);
    let d = rho.dim();
    let mut amps = CVector::zeros(rank * d);
    for k in 0..rank {
        let w = vals[k].max(0.0).sqrt();
        for q in 0..d {
            amps[k * d + q] = vecs[(q, k)] * c(w, 0.0);
        }
    }
    let reg = SystemRegistry::with_max_dim(
        vec![
            Subsystem::physical(reference, rank),
            Subsystem::physical(system, d),
        ],
        rho.registry().max_total_dim().max(rank * d),
    )?;
    PureState::normalized(reg, amps)
}

/// `I_c(ρ, ℰ) = S(ℰ(ρ)) − S((id_R ⊗ ℰ)(|ψ_ρ⟩⟨ψ_ρ|))`.
pub fn coherent_information(rho: &DensityMatrix, ch: &Channel) -> Result<f64> {
    ch.check_input(rho.dim())?;
    let psi = purify(rho, "R", "Q")?;
    coherent_information_from_purification(&psi, "Q", ch)
}

/// Same quantity evaluated on a caller-supplied purification `psi` of the
/// input on subsystem `system`.
pub fn coherent_information_from_purification(
    psi: &PureState,
    system: &str,
    ch: &Channel,
) -> Result<f64> {
    let joint = ch.apply_on(&psi.to_density(), system)?;
    let out = joint.partial_trace(&[system])?;
    Ok(von_neumann(&out) - von_neumann(&joint))
}

impl Channel {
    /// Convenience: a channel from `{K}` given as flat row-major complex slices.
    pub fn from_rows(dim_out: usize, dim_in: usize, kraus: &[&[(f64, f64)]]) -> Result<Channel> {
        let ks = kraus
            .iter()
            .map(|k| {
                if k.len() != dim_out * dim_in {
                    return Err(QilError::KrausShape(format!(
                        "expected {} entries",
                        dim_out * dim_in
                    )));
                }
                Ok(CMatrix::from_row_iterator(
                    dim_out,
                    dim_in,
                    k.iter().map(|&(re, im)| c(re, im)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Channel::new(ks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::directed_entanglement;
    use crate::linalg::{diag_real, max_abs, ZERO};
    use crate::random::{haar_matrix, physical_registry, random_density, rng_from_seed};

    fn qubit(label: &str) -> SystemRegistry {
        physical_registry(&[label], &[2], 4096).unwrap()
    }

    fn z() -> CMatrix {
        diag_real(&[1.0, -1.0])
    }

    #[test]
    fn create_examples() {
        let id = Channel::new(vec![linalg::identity(2)]).unwrap();
        assert_eq!(id, Channel::identity(2));
        let s = c(0.5f64.sqrt(), 0.0);
        Channel::new(vec![linalg::identity(2) * s, z() * s]).unwrap();
        assert!(matches!(
            Channel::new(vec![linalg::identity(2), linalg::identity(2)]),
            Err(QilError::KrausIncomplete { .. })
        ));
        assert!(matches!(
            Channel::new(vec![linalg::identity(2), linalg::identity(3)]),
            Err(QilError::KrausShape(_))
        ));
        assert!(matches!(Channel::new(vec![]), Err(QilError::KrausShape(_))));
    }

    #[test]
    fn apply_examples() {
        let mut rng = rng_from_seed(2);
        let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
        assert_eq!(Channel::identity(2).apply(&rho).unwrap(), rho);
        let dep = preset_channel(Preset::Depolarizing, 1.0, 2).unwrap();
        let out = dep.apply(&rho).unwrap();
        assert!(max_abs(&(out.matrix() - linalg::identity(2) * c(0.5, 0.0))) < 1e-12);
        out.validate().unwrap();
        let three = preset_channel(Preset::Identity, 0.0, 3).unwrap();
        assert!(matches!(
            three.apply(&rho),
            Err(QilError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn kraus_and_dilation_routes_agree() {
        let mut rng = rng_from_seed(3);
        for preset in Preset::ALL {
            for dim in [2usize, 3] {
                let ch = preset_channel(preset, 0.37, dim).unwrap();
                let reg = physical_registry(&["Q"], &[dim], 4096).unwrap();
                for rank in 1..=dim {
                    let rho = random_density(&reg, rank, &mut rng).unwrap();
                    let a = ch.apply(&rho).unwrap();
                    let b = ch.apply_via_dilation(&rho).unwrap();
                    assert!(
                        max_abs(&(a.matrix() - b.matrix())) < 1e-10,
                        "{preset} d={dim}"
                    );
                }
            }
        }
    }

    #[test]
    fn apply_on_subsystem_matches_kron_route() {
        let mut rng = rng_from_seed(31);
        let reg = physical_registry(&["A", "Q"], &[2, 2], 4096).unwrap();
        let rho = random_density(&reg, 3, &mut rng).unwrap();
        let ch = preset_channel(Preset::AmplitudeDamping, 0.4, 2).unwrap();
        let got = ch.apply_on(&rho, "Q").unwrap();
        let expect = ch
            .kraus()
            .iter()
            .map(|k| linalg::kron(&linalg::identity(2), k))
            .fold(CMatrix::zeros(4, 4), |acc, k| {
                acc + &k * rho.matrix() * k.adjoint()
            });
        assert!(max_abs(&(got.matrix() - expect)) < 1e-12);
    }

    #[test]
    fn compose_examples() {
        let mut rng = rng_from_seed(5);
        let ch = preset_channel(Preset::AmplitudeDamping, 0.2, 2).unwrap();
        let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
        let c1 = compose(&Channel::identity(2), &ch).unwrap();
        assert!(
            max_abs(&(c1.apply(&rho).unwrap().matrix() - ch.apply(&rho).unwrap().matrix())) < 1e-12
        );
        let d1 = preset_channel(Preset::Dephasing, 0.5, 2).unwrap();
        let both = compose(&d1, &d1).unwrap();
        let seq = d1.apply(&d1.apply(&rho).unwrap()).unwrap();
        assert!(max_abs(&(both.apply(&rho).unwrap().matrix() - seq.matrix())) < 1e-12);
        assert!(matches!(
            compose(&Channel::identity(3), &ch),
            Err(QilError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dilation_examples() {
        let dil = Channel::identity(2).stinespring().unwrap();
        assert_eq!(dil.env_dim, 1);
        assert!(max_abs(&(dil.unitary - linalg::identity(2))) < 1e-15);

        let deph = preset_channel(Preset::Dephasing, 0.5, 2).unwrap();
        let dil = deph.stinespring().unwrap();
        assert_eq!(dil.env_dim, 2);
        assert!(linalg::unitarity_defect(&dil.unitary) < 1e-10);
        let mut rng = rng_from_seed(6);
        for _ in 0..20 {
            let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
            let a = deph.apply(&rho).unwrap();
            let b = deph.apply_via_dilation(&rho).unwrap();
            assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-10);
        }
    }

    #[test]
    fn preset_examples() {
        let mut rng = rng_from_seed(7);
        let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
        for p in Preset::ALL {
            let ch = preset_channel(p, 0.0, 2).unwrap();
            assert!(max_abs(&(ch.apply(&rho).unwrap().matrix() - rho.matrix())) < 1e-12);
        }
        let one = DensityMatrix::new(qubit("Q"), diag_real(&[0.0, 1.0])).unwrap();
        let ad = preset_channel(Preset::AmplitudeDamping, 0.3, 2).unwrap();
        let out = ad.apply(&one).unwrap();
        assert!(max_abs(&(out.matrix() - diag_real(&[0.3, 0.7]))) < 1e-15);
        // full dephasing kills coherences
        let deph = preset_channel(Preset::Dephasing, 1.0, 3).unwrap();
        let reg3 = physical_registry(&["Q"], &[3], 4096).unwrap();
        let r3 = random_density(&reg3, 3, &mut rng).unwrap();
        let o3 = deph.apply(&r3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { r3.matrix()[(i, i)] } else { ZERO };
                assert!((o3.matrix()[(i, j)] - expect).norm() < 1e-12);
            }
        }
        assert!(matches!(
            preset_channel(Preset::Dephasing, 1.5, 2),
            Err(QilError::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            "bogus".parse::<Preset>(),
            Err(QilError::UnknownPreset(_))
        ));
        assert_eq!(
            "amplitude_damping".parse::<Preset>().unwrap(),
            Preset::AmplitudeDamping
        );
    }

    fn ket(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| c(a, b)))
    }

    #[test]
    fn holevo_examples() {
        let s = 0.5f64.sqrt();
        let orth = Ensemble::new(
            2,
            vec![
                (0.5, ket(&[(1.0, 0.0), (0.0, 0.0)])),
                (0.5, ket(&[(0.0, 0.0), (1.0, 0.0)])),
            ],
        )
        .unwrap();
        assert!((holevo_chi(&orth, &Channel::identity(2)).unwrap() - 1.0).abs() < 1e-12);
        let dep = preset_channel(Preset::Depolarizing, 1.0, 2).unwrap();
        assert!(holevo_chi(&orth, &dep).unwrap().abs() < 1e-12);
        let nonorth = Ensemble::new(
            2,
            vec![
                (0.5, ket(&[(1.0, 0.0), (0.0, 0.0)])),
                (0.5, ket(&[(s, 0.0), (s, 0.0)])),
            ],
        )
        .unwrap();
        // oracle: average state [[3/4, 1/4],[1/4, 1/4]] has eigenvalues (1 ± 1/√2)/2
        let p = (1.0 + s) / 2.0;
        let h2 = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert!((h2 - 0.600_876_8).abs() < 1e-6);
        assert!((holevo_chi(&nonorth, &Channel::identity(2)).unwrap() - h2).abs() < 1e-12);
        assert!(holevo_chi(&orth, &Channel::identity(3)).is_err());
    }

    #[test]
    fn ensemble_validation() {
        assert!(Ensemble::new(2, vec![]).is_err());
        assert!(Ensemble::new(2, vec![(0.5, ket(&[(1.0, 0.0), (0.0, 0.0)]))]).is_err());
        assert!(Ensemble::new(2, vec![(1.0, ket(&[(1.0, 0.0), (1.0, 0.0)]))]).is_err());
        let e = Ensemble::new(2, vec![(1.0, ket(&[(0.0, 0.0), (1.0, 0.0)]))]).unwrap();
        let u = e.preparation_unitaries();
        assert!((u[0].column(0) - &e.states()[0]).norm() < 1e-15);
        assert!(e.clone().with_unitaries(vec![linalg::identity(2)]).is_err());
    }

    #[test]
    fn coherent_information_examples() {
        let mut rng = rng_from_seed(8);
        let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
        let ic = coherent_information(&rho, &Channel::identity(2)).unwrap();
        assert!((ic - von_neumann(&rho)).abs() < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(qubit("Q"));
        let dep = preset_channel(Preset::Depolarizing, 1.0, 2).unwrap();
        assert!((coherent_information(&mixed, &dep).unwrap() + 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_information_is_purification_independent() {
        let mut rng = rng_from_seed(9);
        let ch = preset_channel(Preset::AmplitudeDamping, 0.45, 2).unwrap();
        for _ in 0..10 {
            let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
            let a = coherent_information(&rho, &ch).unwrap();
            // second purification: embed R into a 3-dim reference and rotate it
            let psi = purify(&rho, "R", "Q").unwrap();
            let wide = psi
                .tensor(&PureState::basis(qubit("R2"), &[0]).unwrap())
                .unwrap();
            let u = Unitary::new(haar_matrix(4, &mut rng).unwrap(), &["R", "R2"]).unwrap();
            let rotated = wide.apply_unitary(&u).unwrap();
            let b = coherent_information_from_purification(&rotated, "Q", &ch).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn coherent_information_matches_dilated_state() {
        let mut rng = rng_from_seed(10);
        let ch = preset_channel(Preset::Dephasing, 0.3, 2).unwrap();
        for _ in 0..10 {
            let rho = random_density(&qubit("Q"), 2, &mut rng).unwrap();
            let psi = purify(&rho, "R", "Q").unwrap();
            let dil = ch.stinespring().unwrap();
            let st = psi.extend_fresh("E", dil.env_dim, Kind::Physical).unwrap();
            let st = st
                .apply_unitary(&dil.unitary_on("Q", "E").unwrap())
                .unwrap();
            let e = directed_entanglement(&st.to_density(), &["R"], &["Q"]).unwrap();
            let ic = coherent_information(&rho, &ch).unwrap();
            assert!((e - ic).abs() < 1e-10);
        }
    }
}
