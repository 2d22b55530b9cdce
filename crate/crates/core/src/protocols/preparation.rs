use crate::channels::Ensemble;
use crate::error::Result;
use crate::linalg::{self, c, CMatrix};
use crate::registry::{Subsystem, SystemRegistry};
use crate::state::{PureState, Unitary};
use crate::tol::DEFAULT_MAX_TOTAL_DIM;

#[derive(Clone, Debug, PartialEq)]
pub struct PreparationLabels {
    /// Knowledge that `Q` was reset; one-dimensional, always `|0⟩`.
    pub a1: String,
    pub q: String,
    /// Record of which conditional unitary was applied.
    pub a2: String,
    /// Knowledge of which state `Q` was prepared in.
    pub a: String,
    pub owner: String,
    pub max_total_dim: usize,
}

impl Default for PreparationLabels {
    fn default() -> Self {
        PreparationLabels {
            a1: "A1".into(),
            q: "Q".into(),
            a2: "A2".into(),
            a: "A".into(),
            owner: "Alice".into(),
            max_total_dim: DEFAULT_MAX_TOTAL_DIM,
        }
    }
}

/// Ensemble preparation: from `|0⟩_{A1}|0⟩_Q`, put `A2` into
/// `Σ √p_i |i⟩`, apply `U_i` to `Q` controlled on `|i⟩_{A2}`, then copy
/// `A2` into a fresh `A`. The result is
/// `|0⟩_{A1} Σ √p_i |ψ_i⟩_Q |i⟩_{A2} |i⟩_A`.
pub fn simulate_preparation(ens: &Ensemble, labels: &PreparationLabels) -> Result<PureState> {
    let d = ens.dim();
    let n = ens.len();
    let reg = SystemRegistry::with_max_dim(
        vec![
            Subsystem::knowledge(&labels.a1, 1, &labels.owner),
            Subsystem::physical(&labels.q, d),
        ],
        labels.max_total_dim,
    )?;
    let mut st = PureState::basis(reg, &[0, 0])?;
    st = st.extend_fresh(
        &labels.a2,
        n,
        crate::registry::Kind::knowledge(&labels.owner),
    )?;

    let amps: Vec<_> = ens
        .probs()
        .probs()
        .iter()
        .map(|p| c(p.sqrt(), 0.0))
        .collect();
    let first = CMatrix::from_column_slice(n, 1, &amps);
    let load = Unitary::new(linalg::complete_unitary(&first), &[labels.a2.as_str()])?;
    st = st.apply_unitary(&load)?;

    let mut controlled = CMatrix::zeros(n * d, n * d);
    for (i, u) in ens.preparation_unitaries().iter().enumerate() {
        controlled.view_mut((i * d, i * d), (d, d)).copy_from(u);
    }
    st = st.apply_unitary(&Unitary::new(
        controlled,
        &[labels.a2.as_str(), labels.q.as_str()],
    )?)?;

    st = st.extend_fresh(
        &labels.a,
        n,
        crate::registry::Kind::knowledge(&labels.owner),
    )?;
    st.apply_unitary(&Unitary::copy(&labels.a2, n, &labels.a, n)?)
}
