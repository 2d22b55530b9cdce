use crate::error::{QilError, Result};
use crate::linalg::CMatrix;
use crate::registry::Kind;
use crate::state::{PureState, Unitary};

/// Elementary measurement of `target` in the basis given by the columns of
/// `basis` (computational basis when `None`), recorded by a physical
/// apparatus and a knowledge system.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSpec {
    pub target: String,
    pub basis: Option<CMatrix>,
    pub apparatus_label: String,
    pub knowledge_label: String,
    pub owner: String,
}

impl MeasurementSpec {
    pub fn computational(target: &str, apparatus: &str, knowledge: &str) -> Self {
        MeasurementSpec {
            target: target.to_string(),
            basis: None,
            apparatus_label: apparatus.to_string(),
            knowledge_label: knowledge.to_string(),
            owner: "Bob".to_string(),
        }
    }

    pub fn in_basis(mut self, basis: CMatrix) -> Self {
        self.basis = Some(basis);
        self
    }

    pub fn owned_by(mut self, owner: &str) -> Self {
        self.owner = owner.to_string();
        self
    }
}

/// Unobserved then observed measurement: the target is rotated into the
/// measurement basis, a fresh apparatus `M` copies it, and a fresh knowledge
/// system `B` copies `M`. For the computational basis this produces
/// `Σ λ_j |φ_j⟩_R |j⟩_L |j⟩_M |j⟩_B`.
pub fn simulate_measurement(state: &PureState, spec: &MeasurementSpec) -> Result<PureState> {
    let reg = state.registry();
    let m = reg.dim_of(&spec.target)?;
    for l in [&spec.apparatus_label, &spec.knowledge_label] {
        if reg.contains(l) {
            return Err(QilError::DuplicateLabel(l.clone()));
        }
    }
    if spec.apparatus_label == spec.knowledge_label {
        return Err(QilError::DuplicateLabel(spec.apparatus_label.clone()));
    }
    let mut st = state.clone();
    if let Some(basis) = &spec.basis {
        if basis.shape() != (m, m) {
            return Err(QilError::DimensionMismatch {
                expected: m,
                found: basis.nrows(),
            });
        }
        let rot = Unitary::new(basis.adjoint(), &[spec.target.as_str()])?;
        st = st.apply_unitary(&rot)?;
    }
    st = st.extend_fresh(&spec.apparatus_label, m, Kind::Physical)?;
    st = st.extend_fresh(&spec.knowledge_label, m, Kind::knowledge(&spec.owner))?;
    st = st.apply_unitary(&Unitary::copy(&spec.target, m, &spec.apparatus_label, m)?)?;
    st.apply_unitary(&Unitary::copy(
        &spec.apparatus_label,
        m,
        &spec.knowledge_label,
        m,
    )?)
}

/// A further observer reads the apparatus: a fresh knowledge system copies
/// `apparatus_label`.
pub fn add_observer(
    state: &PureState,
    apparatus_label: &str,
    knowledge_label: &str,
    owner: &str,
) -> Result<PureState> {
    let m = state.registry().dim_of(apparatus_label)?;
    let st = state.extend_fresh(knowledge_label, m, Kind::knowledge(owner))?;
    st.apply_unitary(&Unitary::copy(apparatus_label, m, knowledge_label, m)?)
}
