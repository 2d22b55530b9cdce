//! Pure states, density matrices and local unitaries over a [`SystemRegistry`].

use crate::error::{QilError, Result};
use crate::linalg::{self, c, CMatrix, CVector, ZERO};
use crate::registry::{split_indices, Kind, Subsystem, SystemRegistry};
use crate::tol::TOL;

/// Unitary acting on an ordered list of target labels. The matrix index is
/// row-major over the targets in the order listed.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: CMatrix,
    targets: Vec<String>,
}

impl Unitary {
    pub fn new<S: AsRef<str>>(matrix: CMatrix, targets: &[S]) -> Result<Self> {
        if targets.is_empty() {
            return Err(QilError::EmptySelection);
        }
        let targets: Vec<String> = targets.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(QilError::DuplicateLabel(t.clone()));
            }
        }
        let deviation = linalg::unitarity_defect(&matrix);
        if deviation > TOL.unitary {
            return Err(QilError::NotUnitary { deviation });
        }
        Ok(Unitary { matrix, targets })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
            targets: self.targets.clone(),
        }
    }

    /// Same matrix, different target labels.
    pub fn retarget<S: AsRef<str>>(&self, targets: &[S]) -> Result<Unitary> {
        Unitary::new(self.matrix.clone(), targets)
    }

    /// Modular-shift copy `|j⟩|k⟩ → |j⟩|k ⊕ j mod m_target⟩` from `control`
    /// into `target`. Reduces to CNOT for two qubits.
    pub fn copy(
        control: &str,
        control_dim: usize,
        target: &str,
        target_dim: usize,
    ) -> Result<Unitary> {
        let n = control_dim * target_dim;
        let mut m = CMatrix::zeros(n, n);
        for j in 0..control_dim {
            for k in 0..target_dim {
                m[(j * target_dim + (k + j) % target_dim, j * target_dim + k)] = linalg::ONE;
            }
        }
        Unitary::new(m, &[control, target])
    }

    /// Swap of two equal-dimension subsystems.
    pub fn swap(a: &str, b: &str, dim: usize) -> Result<Unitary> {
        let n = dim * dim;
        let mut m = CMatrix::zeros(n, n);
        for i in 0..dim {
            for j in 0..dim {
                m[(j * dim + i, i * dim + j)] = linalg::ONE;
            }
        }
        Unitary::new(m, &[a, b])
    }

    pub fn identity<S: AsRef<str>>(dim: usize, targets: &[S]) -> Result<Unitary> {
        Unitary::new(linalg::identity(dim), targets)
    }

    fn check_against(&self, reg: &SystemRegistry) -> Result<Vec<usize>> {
        let pos = reg.positions(&self.targets)?;
        let d = reg.dim_of_set(&self.targets)?;
        if d != self.matrix.nrows() {
            return Err(QilError::DimensionMismatch {
                expected: d,
                found: self.matrix.nrows(),
            });
        }
        Ok(pos)
    }
}

/// Applies a (possibly rectangular) operator on `targets` to the row index of
/// `mat`, identity on the other subsystems. `reg_out` differs from `reg_in`
/// only in the target dimensions.
pub(crate) fn apply_local_rows(
    mat: &CMatrix,
    reg_in: &SystemRegistry,
    reg_out: &SystemRegistry,
    targets: &[usize],
    op: &CMatrix,
) -> CMatrix {
    let split_in = split_indices(reg_in, targets);
    let d_in = op.ncols();
    let rest = reg_in.total_dim() / d_in;
    let mut inverse = vec![0usize; reg_in.total_dim()];
    for (i, &(t, r)) in split_in.iter().enumerate() {
        inverse[t * rest + r] = i;
    }
    let split_out = if reg_out == reg_in {
        split_in
    } else {
        split_indices(reg_out, targets)
    };
    let ncols = mat.ncols();
    let mut out = CMatrix::zeros(reg_out.total_dim(), ncols);
    for j in 0..ncols {
        let col = mat.column(j);
        let mut out_col = out.column_mut(j);
        for (i_out, &(t_out, r)) in split_out.iter().enumerate() {
            let mut acc = ZERO;
            for t in 0..d_in {
                let w = op[(t_out, t)];
                if w != ZERO {
                    acc += w * col[inverse[t * rest + r]];
                }
            }
            out_col[i_out] = acc;
        }
    }
    out
}

/// `A ρ A†` for an operator `A` local to `targets`.
pub(crate) fn conjugate_local(
    rho: &CMatrix,
    reg_in: &SystemRegistry,
    reg_out: &SystemRegistry,
    targets: &[usize],
    op: &CMatrix,
) -> CMatrix {
    let left = apply_local_rows(rho, reg_in, reg_out, targets, op);
    apply_local_rows(&left.adjoint(), reg_in, reg_out, targets, op).adjoint()
}

/// Reduced matrix on the positions `keep` (sorted, registry order).
fn trace_out_matrix(rho: &CMatrix, reg: &SystemRegistry, keep: &[usize]) -> CMatrix {
    let split = split_indices(reg, keep);
    let dk: usize = keep.iter().map(|&p| reg.entries()[p].dim).product();
    let rest = reg.total_dim() / dk;
    let mut groups = vec![Vec::with_capacity(dk); rest];
    for (i, &(k, r)) in split.iter().enumerate() {
        groups[r].push((k, i));
    }
    let mut out = CMatrix::zeros(dk, dk);
    for g in &groups {
        for &(k2, i2) in g {
            for &(k1, i1) in g {
                out[(k1, k2)] += rho[(i1, i2)];
            }
        }
    }
    out
}

fn keep_positions<S: AsRef<str>>(reg: &SystemRegistry, keep: &[S]) -> Result<Vec<usize>> {
    let mut pos = reg.positions(keep)?;
    pos.sort_unstable();
    Ok(pos)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    registry: SystemRegistry,
    amplitudes: CVector,
}

impl PureState {
    pub fn new(registry: SystemRegistry, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != registry.total_dim() {
            return Err(QilError::DimensionMismatch {
                expected: registry.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > TOL.norm {
            return Err(QilError::NotNormalized { norm });
        }
        Ok(PureState {
            registry,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before validation.
    pub fn normalized(registry: SystemRegistry, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QilError::NotNormalized { norm });
        }
        Self::new(registry, amplitudes / c(norm, 0.0))
    }

    /// Computational basis state with one digit per registry entry.
    pub fn basis(registry: SystemRegistry, digits: &[usize]) -> Result<Self> {
        if digits.len() != registry.len() {
            return Err(QilError::DimensionMismatch {
                expected: registry.len(),
                found: digits.len(),
            });
        }
        for (d, e) in digits.iter().zip(registry.entries()) {
            if *d >= e.dim {
                return Err(QilError::DimensionMismatch {
                    expected: e.dim,
                    found: *d,
                });
            }
        }
        let idx = crate::registry::compose_index(&registry, digits);
        let amps = linalg::basis_vector(registry.total_dim(), idx);
        Ok(PureState {
            registry,
            amplitudes: amps,
        })
    }

    pub(crate) fn from_parts(registry: SystemRegistry, amplitudes: CVector) -> Self {
        PureState {
            registry,
            amplitudes,
        }
    }

    pub fn registry(&self) -> &SystemRegistry {
        &self.registry
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.registry.clone(), linalg::outer(&self.amplitudes))
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let registry = self.registry.concat(&other.registry)?;
        Ok(PureState::from_parts(
            registry,
            self.amplitudes.kronecker(&other.amplitudes),
        ))
    }

    /// Reduced state on `keep`, in registry order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let pos = keep_positions(&self.registry, keep)?;
        let sub = self.registry.subset(keep)?;
        let split = split_indices(&self.registry, &pos);
        let dk = sub.total_dim();
        let rest = self.registry.total_dim() / dk;
        let mut m = CMatrix::zeros(dk, rest);
        for (i, &(k, r)) in split.iter().enumerate() {
            m[(k, r)] = self.amplitudes[i];
        }
        Ok(DensityMatrix::from_parts(sub, &m * m.adjoint()))
    }

    pub fn apply_unitary(&self, u: &Unitary) -> Result<PureState> {
        let pos = u.check_against(&self.registry)?;
        let amps = CMatrix::from_column_slice(self.amplitudes.len(), 1, self.amplitudes.as_slice());
        let out = apply_local_rows(&amps, &self.registry, &self.registry, &pos, &u.matrix);
        Ok(PureState::from_parts(
            self.registry.clone(),
            CVector::from_column_slice(out.as_slice()),
        ))
    }

    /// Appends a new subsystem in its basis state 0.
    pub fn extend_fresh(&self, label: &str, dim: usize, kind: Kind) -> Result<PureState> {
        if dim == 0 {
            return Err(QilError::InvalidDimension(0));
        }
        let registry = self.registry.push(Subsystem::new(label, dim, kind))?;
        let fresh = linalg::basis_vector(dim, 0);
        Ok(PureState::from_parts(
            registry,
            self.amplitudes.kronecker(&fresh),
        ))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    registry: SystemRegistry,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(registry: SystemRegistry, matrix: CMatrix) -> Result<Self> {
        let d = registry.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(QilError::DimensionMismatch {
                expected: d,
                found: matrix.nrows(),
            });
        }
        let rho = DensityMatrix { registry, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(registry: SystemRegistry, matrix: CMatrix) -> Self {
        DensityMatrix { registry, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > TOL.herm {
            return Err(QilError::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = linalg::trace(&self.matrix);
        if (tr.re - 1.0).abs() > TOL.trace || tr.im.abs() > TOL.trace {
            return Err(QilError::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let eig = linalg::eigvals_hermitian(&self.matrix);
        let scale = eig.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        if eig[0] < -TOL.psd * scale {
            return Err(QilError::InvalidDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                eig[0]
            )));
        }
        Ok(())
    }

    pub fn maximally_mixed(registry: SystemRegistry) -> Self {
        let d = registry.total_dim();
        let m = linalg::identity(d) * c(1.0 / d as f64, 0.0);
        DensityMatrix::from_parts(registry, m)
    }

    pub fn registry(&self) -> &SystemRegistry {
        &self.registry
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let registry = self.registry.concat(&other.registry)?;
        Ok(DensityMatrix::from_parts(
            registry,
            linalg::kron(&self.matrix, &other.matrix),
        ))
    }

    /// Reduced state on `keep`, in registry order.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let pos = keep_positions(&self.registry, keep)?;
        let sub = self.registry.subset(keep)?;
        if pos.len() == self.registry.len() {
            return Ok(self.clone());
        }
        Ok(DensityMatrix::from_parts(
            sub,
            trace_out_matrix(&self.matrix, &self.registry, &pos),
        ))
    }

    pub fn apply_unitary(&self, u: &Unitary) -> Result<DensityMatrix> {
        let pos = u.check_against(&self.registry)?;
        Ok(DensityMatrix::from_parts(
            self.registry.clone(),
            conjugate_local(
                &self.matrix,
                &self.registry,
                &self.registry,
                &pos,
                &u.matrix,
            ),
        ))
    }

    /// Appends a new subsystem in `|0⟩⟨0|`.
    pub fn extend_fresh(&self, label: &str, dim: usize, kind: Kind) -> Result<DensityMatrix> {
        if dim == 0 {
            return Err(QilError::InvalidDimension(0));
        }
        let registry = self.registry.push(Subsystem::new(label, dim, kind))?;
        let fresh = linalg::outer(&linalg::basis_vector(dim, 0));
        Ok(DensityMatrix::from_parts(
            registry,
            linalg::kron(&self.matrix, &fresh),
        ))
    }

    /// Replaces the subsystem `label` by `op ρ op†` summed over `ops`, where
    /// each `op` maps the label's space into a space of `dim_out`.
    pub(crate) fn map_local(
        &self,
        label: &str,
        ops: &[CMatrix],
        dim_out: usize,
    ) -> Result<DensityMatrix> {
        let pos = self
            .registry
            .position(label)
            .ok_or_else(|| QilError::UnknownLabel(label.to_string()))?;
        let reg_out = self.registry.with_dim(label, dim_out)?;
        let d = reg_out.total_dim();
        let mut acc = CMatrix::zeros(d, d);
        for k in ops {
            acc += conjugate_local(&self.matrix, &self.registry, &reg_out, &[pos], k);
        }
        Ok(DensityMatrix::from_parts(reg_out, acc))
    }

    /// Diagonal of the matrix as real numbers.
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvals_hermitian(&self.matrix)
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}
