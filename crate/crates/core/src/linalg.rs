//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `(M + M†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Largest absolute entry of `M - M†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest absolute entry of `U†U - I`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

/// Unitary DFT matrix.
fn dft(n: usize) -> CMatrix {
    let norm = (n as f64).sqrt().recip();
    CMatrix::from_fn(n, n, |j, k| {
        let phase = 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(norm, phase)
    })
}

/// Hermitian eigendecomposition with a fallback for the occasional NaN
/// nalgebra's QR iteration returns on sparse block-structured input:
/// the matrix is rotated by a DFT (same spectrum, dense entries) and the
/// eigenvectors are rotated back.
fn hermitian_eigen(h: CMatrix, vectors: bool) -> (DVector<f64>, Option<CMatrix>) {
    let bad = |v: &DVector<f64>| v.iter().any(|x| !x.is_finite());
    if vectors {
        let e = h.clone().symmetric_eigen();
        if !bad(&e.eigenvalues)
            && e.eigenvectors
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return (e.eigenvalues, Some(e.eigenvectors));
        }
    } else {
        let v = h.symmetric_eigenvalues();
        if !bad(&v) {
            return (v, None);
        }
    }
    let f = dft(h.nrows());
    let rotated = hermitize(&(&f * &h * f.adjoint()));
    for eps in [f64::EPSILON, 1e-15, 1e-14, 1e-13] {
        if let Some(e) = rotated.clone().try_symmetric_eigen(eps, 0) {
            if !bad(&e.eigenvalues) {
                return (e.eigenvalues, Some(f.adjoint() * e.eigenvectors));
            }
        }
    }
    panic!(
        "Hermitian eigensolver failed on a {}x{} matrix",
        h.nrows(),
        h.ncols()
    );
}

/// Eigenvalues of the hermitized matrix, ascending.
pub fn eigvals_hermitian(m: &CMatrix) -> Vec<f64> {
    let (vals, _) = hermitian_eigen(hermitize(m), false);
    let mut vals: Vec<f64> = vals.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Eigen-decomposition of the hermitized matrix; eigenpairs sorted by
/// descending eigenvalue.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let (vals, vecs) = hermitian_eigen(hermitize(m), true);
    let vecs = vecs.expect("eigenvectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let sorted = order.iter().map(|&k| vals[k]).collect();
    let vecs = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    (sorted, vecs)
}

/// Kronecker product with `a` as the more significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Extends the orthonormal columns of `partial` to a full `n × n` unitary.
///
/// Missing columns are taken from the computational basis by Gram-Schmidt
/// (two passes), so the completion is deterministic.
pub fn complete_unitary(partial: &CMatrix) -> CMatrix {
    let n = partial.nrows();
    let mut cols: Vec<CVector> = partial.column_iter().map(|col| col.into_owned()).collect();
    let mut candidate = 0;
    while cols.len() < n && candidate < n {
        let mut v = CVector::zeros(n);
        v[candidate] = ONE;
        candidate += 1;
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / c(norm, 0.0));
        }
    }
    CMatrix::from_columns(&cols)
}

/// Projector `|ψ⟩⟨ψ|`.
pub fn outer(psi: &CVector) -> CMatrix {
    psi * psi.adjoint()
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i], 0.0) } else { ZERO })
}
