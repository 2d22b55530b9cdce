use crate::channels::{holevo_chi, Channel, Ensemble};
use crate::entropy::{
    classicize, diagonal_distribution, directed_entanglement, mutual_information_rv, shannon,
};
use crate::error::{QilError, Result};
use crate::linalg::CMatrix;
use crate::registry::Kind;
use crate::report::ExperimentReport;
use crate::state::PureState;

use super::measurement::{simulate_measurement, MeasurementSpec};
use super::preparation::{simulate_preparation, PreparationLabels};

#[derive(Clone, Debug, PartialEq)]
pub struct CommunicationLabels {
    pub preparation: PreparationLabels,
    pub environment: String,
    pub apparatus: String,
    pub receiver: String,
}

impl Default for CommunicationLabels {
    fn default() -> Self {
        CommunicationLabels {
            preparation: PreparationLabels::default(),
            environment: "E".into(),
            apparatus: "M".into(),
            receiver: "B".into(),
        }
    }
}

fn e_of(st: &PureState, x: &[&str], y: &[&str]) -> Result<f64> {
    let keep: Vec<&str> = x.iter().chain(y).copied().collect();
    directed_entanglement(&st.partial_trace(&keep)?, x, y)
}

/// Alice prepares `Q` from `ens`, `Q` interacts with an environment through
/// the Stinespring unitary of `ch`, and Bob measures `Q` in `basis`
/// (computational when `None`).
///
/// Reports `H(A)`, `χ`, `E(A→Q)` after the environment step and
/// `I(A;B)`, and checks the identity `E(A→Q) = χ − H(A)`, the bound
/// `I(A;B) ≤ χ`, and each link of the directed-entanglement chain
/// `E(A→Q) = E'(A→QMB) ≥ E'(A→B) ≥ E'(A^c→B^c)`.
pub fn simulate_classical_communication(
    ens: &Ensemble,
    ch: &Channel,
    basis: Option<&CMatrix>,
    labels: &CommunicationLabels,
    tol: f64,
) -> Result<ExperimentReport> {
    if ch.dim_in() != ens.dim() || ch.dim_out() != ens.dim() {
        return Err(QilError::DimensionMismatch {
            expected: ens.dim(),
            found: ch.dim_in(),
        });
    }
    let p = &labels.preparation;
    let (a, q) = (p.a.as_str(), p.q.as_str());
    let (m, b) = (labels.apparatus.as_str(), labels.receiver.as_str());

    let prepared = simulate_preparation(ens, p)?;
    let h_a = shannon(&diagonal_distribution(
        &prepared.partial_trace(&[a])?,
        &[a],
    )?);
    let chi = holevo_chi(ens, ch)?;

    let dil = ch.stinespring()?;
    let st = prepared.extend_fresh(&labels.environment, dil.env_dim, Kind::Physical)?;
    let st = st.apply_unitary(&dil.unitary_on(q, &labels.environment)?)?;
    let e_aq = e_of(&st, &[a], &[q])?;

    let mut spec = MeasurementSpec::computational(q, m, b);
    if let Some(u) = basis {
        spec = spec.in_basis(u.clone());
    }
    let measured = simulate_measurement(&st, &spec)?;
    let e_a_qmb = e_of(&measured, &[a], &[q, m, b])?;
    let e_a_b = e_of(&measured, &[a], &[b])?;
    let rho_ab = measured.partial_trace(&[a, b])?;
    let e_classical = directed_entanglement(&classicize(&rho_ab, &[a, b])?, &[a], &[b])?;
    let i_ab = mutual_information_rv(&rho_ab, &[a], &[b])?;
    let h_b = shannon(&diagonal_distribution(&rho_ab, &[b])?);

    let mut r = ExperimentReport::new("holevo", tol);
    r.value("H_A", h_a)
        .value("chi", chi)
        .value("E_A_to_Q", e_aq)
        .value("E_A_to_QMB_after", e_a_qmb)
        .value("E_A_to_B_after", e_a_b)
        .value("E_Ac_to_Bc_after", e_classical)
        .value("H_B", h_b)
        .value("I_AB", i_ab);
    r.check_eq("chi_identity", e_aq, chi - h_a)
        .check_ge("holevo_bound", chi, i_ab)
        .check_eq("fresh_registers", e_aq, e_a_qmb)
        .check_ge("discard_QM", e_a_qmb, e_a_b)
        .check_ge("classicize_AB", e_a_b, e_classical)
        .check_eq("classical_readout", e_classical + h_a, i_ab);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{preset_channel, Preset};
    use crate::linalg::{c, CVector};

    fn ket(v: &[f64]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&a| c(a, 0.0)))
    }

    fn run(ens: &Ensemble, ch: &Channel) -> ExperimentReport {
        simulate_classical_communication(ens, ch, None, &CommunicationLabels::default(), 1e-9)
            .unwrap()
    }

    #[test]
    fn noiseless_bit() {
        let ens = Ensemble::new(2, vec![(0.5, ket(&[1.0, 0.0])), (0.5, ket(&[0.0, 1.0]))]).unwrap();
        let r = run(&ens, &Channel::identity(2));
        assert!(r.passed, "{r:?}");
        assert!((r.get("I_AB") - 1.0).abs() < 1e-12);
        assert!((r.get("chi") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_channel_carries_nothing() {
        let s = 0.5f64.sqrt();
        let ens = Ensemble::new(2, vec![(0.3, ket(&[1.0, 0.0])), (0.7, ket(&[s, s]))]).unwrap();
        let r = run(&ens, &preset_channel(Preset::Depolarizing, 1.0, 2).unwrap());
        assert!(r.passed);
        assert!(r.get("I_AB").abs() < 1e-9 && r.get("chi").abs() < 1e-9);
    }

    #[test]
    fn non_orthogonal_pair() {
        let s = 0.5f64.sqrt();
        let ens = Ensemble::new(2, vec![(0.5, ket(&[1.0, 0.0])), (0.5, ket(&[s, s]))]).unwrap();
        let r = run(&ens, &Channel::identity(2));
        assert!(r.passed);
        // joint table: P(0,0)=1/2, P(1,0)=P(1,1)=1/4
        let h = |v: &[f64]| -> f64 { v.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum() };
        let i_oracle = h(&[0.5, 0.5]) + h(&[0.75, 0.25]) - h(&[0.5, 0.25, 0.25]);
        assert!((i_oracle - 0.311_278_124_459_132_8).abs() < 1e-12);
        assert!((r.get("I_AB") - i_oracle).abs() < 1e-12);
        let p = (1.0 + s) / 2.0;
        assert!((r.get("chi") - h(&[p, 1.0 - p])).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let ens = Ensemble::new(2, vec![(1.0, ket(&[1.0, 0.0]))]).unwrap();
        let e = simulate_classical_communication(
            &ens,
            &Channel::identity(3),
            None,
            &CommunicationLabels::default(),
            1e-9,
        );
        assert!(matches!(e, Err(QilError::DimensionMismatch { .. })));
    }
}
