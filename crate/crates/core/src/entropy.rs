//! Entropic functionals, all in bits.

use crate::error::{QilError, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::prob::ProbabilityVector;
use crate::registry::split_indices;
use crate::state::{DensityMatrix, PureState};
use crate::tol::TOL;

fn entropy_of_spectrum(values: impl IntoIterator<Item = f64>) -> f64 {
    let h: f64 = values
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    // -0.0 on pure inputs
    h + 0.0
}

/// `S(ρ) = −Σ λ log₂ λ` over eigenvalues; eigenvalues in `[−tol_psd, 0)` count as 0.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let eig = rho.eigenvalues();
    let scale = eig.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    debug_assert!(
        eig[0] >= -TOL.psd * scale * 10.0,
        "eigenvalue {} below tolerance",
        eig[0]
    );
    entropy_of_spectrum(eig)
}

/// `S` of the reduction of `rho` to `labels`.
pub fn entropy_of<S: AsRef<str>>(rho: &DensityMatrix, labels: &[S]) -> Result<f64> {
    Ok(von_neumann(&rho.partial_trace(labels)?))
}

/// `S` of the reduction of the pure state `psi` to `labels`, computed from
/// the smaller of the two Gram matrices of the bipartition.
pub fn pure_entropy_of<S: AsRef<str>>(psi: &PureState, labels: &[S]) -> Result<f64> {
    let reg = psi.registry();
    let mut pos = reg.positions(labels)?;
    pos.sort_unstable();
    let split = split_indices(reg, &pos);
    let dk = reg.dim_of_set(labels)?;
    let rest = reg.total_dim() / dk;
    if rest == 1 {
        return Ok(0.0);
    }
    let mut m = CMatrix::zeros(dk, rest);
    for (i, &(k, r)) in split.iter().enumerate() {
        m[(k, r)] = psi.amplitudes()[i];
    }
    let gram = if dk <= rest {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    Ok(entropy_of_spectrum(linalg::eigvals_hermitian(&gram)))
}

/// `H(p) = −Σ p log₂ p`, with `0 log 0 = 0`.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    entropy_of_spectrum(p.probs().iter().copied())
}

/// Computational-basis diagonal of the reduction to `labels` (registry
/// order), clamped and renormalized.
pub fn diagonal_distribution<S: AsRef<str>>(
    rho: &DensityMatrix,
    labels: &[S],
) -> Result<ProbabilityVector> {
    let reduced = rho.partial_trace(labels)?;
    Ok(ProbabilityVector::from_weights(reduced.diagonal()))
}

/// Removes every coherence between computational basis states of `labels`.
pub fn classicize<S: AsRef<str>>(rho: &DensityMatrix, labels: &[S]) -> Result<DensityMatrix> {
    let reg = rho.registry();
    let pos = reg.positions(labels)?;
    let key: Vec<usize> = split_indices(reg, &pos)
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    let mut m = rho.matrix().clone();
    let d = m.nrows();
    for j in 0..d {
        for i in 0..d {
            if key[i] != key[j] {
                m[(i, j)] = ZERO;
            }
        }
    }
    Ok(DensityMatrix::from_parts(reg.clone(), m))
}

fn ensure_disjoint<S: AsRef<str>, T: AsRef<str>>(x: &[S], y: &[T]) -> Result<()> {
    if x.is_empty() || y.is_empty() {
        return Err(QilError::EmptySelection);
    }
    for a in x {
        if y.iter().any(|b| b.as_ref() == a.as_ref()) {
            return Err(QilError::OverlappingLabels(a.as_ref().to_string()));
        }
    }
    Ok(())
}

fn union<S: AsRef<str>, T: AsRef<str>>(x: &[S], y: &[T]) -> Vec<String> {
    x.iter()
        .map(|s| s.as_ref().to_string())
        .chain(y.iter().map(|s| s.as_ref().to_string()))
        .collect()
}

/// Directed entanglement `E(X → Y) = S(Y) − S(XY)`, the negated conditional
/// entropy `S(X|Y)`.
pub fn directed_entanglement<S: AsRef<str>, T: AsRef<str>>(
    rho: &DensityMatrix,
    x: &[S],
    y: &[T],
) -> Result<f64> {
    ensure_disjoint(x, y)?;
    let xy = rho.partial_trace(&union(x, y))?;
    let s_y = entropy_of(&xy, y)?;
    Ok(s_y - von_neumann(&xy))
}

/// Shannon mutual information `H(A) + H(B) − H(AB)` of the joint diagonal
/// distribution of the reduction to `A ∪ B`.
pub fn mutual_information_rv<S: AsRef<str>, T: AsRef<str>>(
    rho: &DensityMatrix,
    a: &[S],
    b: &[T],
) -> Result<f64> {
    ensure_disjoint(a, b)?;
    let ab = rho.partial_trace(&union(a, b))?;
    let joint = ProbabilityVector::from_weights(ab.diagonal());
    let pos_a = ab.registry().positions(a)?;
    let split = split_indices(ab.registry(), &pos_a);
    let da = ab.registry().dim_of_set(a)?;
    let db = ab.dim() / da;
    let mut pa = vec![0.0; da];
    let mut pb = vec![0.0; db];
    for (i, &(ia, ib)) in split.iter().enumerate() {
        pa[ia] += joint[i];
        pb[ib] += joint[i];
    }
    let h = |v: Vec<f64>| shannon(&ProbabilityVector::from_weights(v));
    Ok(h(pa) + h(pb) - shannon(&joint))
}

/// `S_T(Q|B) = −E(Q → B^c)`: classicize `B`, then negate the directed
/// entanglement from `Q`.
pub fn thermodynamic_entropy<S: AsRef<str>, T: AsRef<str>>(
    rho: &DensityMatrix,
    q: &[S],
    b: &[T],
) -> Result<f64> {
    ensure_disjoint(q, b)?;
    let qb = rho.partial_trace(&union(q, b))?;
    let classical = classicize(&qb, b)?;
    Ok(-directed_entanglement(&classical, q, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag_real, CMatrix, CVector};
    use crate::random::random_pure;
    use crate::random::{physical_registry, random_density, rng_from_seed};
    use crate::registry::{Subsystem, SystemRegistry};

    fn qubits(labels: &[&str]) -> SystemRegistry {
        physical_registry(labels, &vec![2; labels.len()], 4096).unwrap()
    }

    fn bell() -> DensityMatrix {
        let s = 0.5f64.sqrt();
        PureState::new(
            qubits(&["X", "Y"]),
            CVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]),
        )
        .unwrap()
        .to_density()
    }

    fn classical_pair() -> DensityMatrix {
        DensityMatrix::new(qubits(&["X", "Y"]), diag_real(&[0.5, 0.0, 0.0, 0.5])).unwrap()
    }

    fn plus_projector() -> DensityMatrix {
        DensityMatrix::new(qubits(&["Q"]), CMatrix::from_element(2, 2, c(0.5, 0.0))).unwrap()
    }

    #[test]
    fn von_neumann_examples() {
        assert!(von_neumann(&bell()).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(qubits(&["Q"]));
        assert!((von_neumann(&mixed) - 1.0).abs() < 1e-12);
        let reg = SystemRegistry::new(vec![Subsystem::physical("Q", 3)]).unwrap();
        let dy = DensityMatrix::new(reg, diag_real(&[0.5, 0.25, 0.25])).unwrap();
        assert!((von_neumann(&dy) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn pure_entropy_matches_density_route() {
        let mut rng = rng_from_seed(40);
        let reg = physical_registry(&["A", "B", "C"], &[2, 3, 4], 4096).unwrap();
        for _ in 0..10 {
            let psi = random_pure(&reg, &mut rng);
            let rho = psi.to_density();
            for set in [
                vec!["A"],
                vec!["B", "C"],
                vec!["C", "A"],
                vec!["A", "B", "C"],
            ] {
                let a = pure_entropy_of(&psi, &set).unwrap();
                let b = entropy_of(&rho, &set).unwrap();
                assert!((a - b).abs() < 1e-10, "{set:?}");
            }
        }
    }

    #[test]
    fn shannon_examples() {
        let h = |v: Vec<f64>| shannon(&ProbabilityVector::new(v).unwrap());
        assert_eq!(h(vec![1.0, 0.0]), 0.0);
        assert!((h(vec![0.5, 0.5]) - 1.0).abs() < 1e-15);
        // -0.9 log2 0.9 - 0.1 log2 0.1
        assert!((h(vec![0.9, 0.1]) - 0.468_995_593_589_281_2).abs() < 1e-12);
    }

    #[test]
    fn diagonal_distribution_examples() {
        let p = diagonal_distribution(&bell(), &["Y"]).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
        let one = DensityMatrix::new(qubits(&["Q"]), diag_real(&[0.0, 1.0])).unwrap();
        assert_eq!(
            diagonal_distribution(&one, &["Q"]).unwrap().probs(),
            &[0.0, 1.0]
        );
        let p = diagonal_distribution(&plus_projector(), &["Q"]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        assert!(matches!(
            diagonal_distribution(&bell(), &["Z"]),
            Err(QilError::UnknownLabel(_))
        ));
    }

    #[test]
    fn classicize_examples() {
        let cl = classical_pair();
        assert_eq!(classicize(&cl, &["X", "Y"]).unwrap(), cl);
        let dephased = classicize(&plus_projector(), &["Q"]).unwrap();
        assert_eq!(dephased.matrix(), &diag_real(&[0.5, 0.5]));
        assert!(classicize(&cl, &["W"]).is_err());
    }

    #[test]
    fn classicize_one_label_keeps_other_coherences() {
        // Bell state dephased on X alone becomes the classical pair
        let out = classicize(&bell(), &["X"]).unwrap();
        assert!(crate::linalg::max_abs(&(out.matrix() - classical_pair().matrix())) < 1e-15);
    }

    #[test]
    fn classicized_entropy_is_shannon_of_diagonal() {
        let mut rng = rng_from_seed(4);
        for _ in 0..20 {
            let rho = random_density(&qubits(&["X"]), 2, &mut rng).unwrap();
            let s = von_neumann(&classicize(&rho, &["X"]).unwrap());
            let h = shannon(&diagonal_distribution(&rho, &["X"]).unwrap());
            assert!((s - h).abs() < 1e-12);
        }
    }

    #[test]
    fn directed_entanglement_examples() {
        assert!((directed_entanglement(&bell(), &["X"], &["Y"]).unwrap() - 1.0).abs() < 1e-12);
        let prod = PureState::basis(qubits(&["X", "Y"]), &[0, 1])
            .unwrap()
            .to_density();
        assert!(directed_entanglement(&prod, &["X"], &["Y"]).unwrap().abs() < 1e-12);
        assert!(
            directed_entanglement(&classical_pair(), &["X"], &["Y"])
                .unwrap()
                .abs()
                < 1e-12
        );
        assert_eq!(
            directed_entanglement(&bell(), &["X"], &["X"]),
            Err(QilError::OverlappingLabels("X".into()))
        );
    }

    #[test]
    fn mutual_information_examples() {
        let i = mutual_information_rv(&classical_pair(), &["X"], &["Y"]).unwrap();
        let hx = shannon(&diagonal_distribution(&classical_pair(), &["X"]).unwrap());
        assert!((i - 1.0).abs() < 1e-12 && (i - hx).abs() < 1e-12);
        let prod = PureState::basis(qubits(&["X", "Y"]), &[1, 0])
            .unwrap()
            .to_density();
        assert!(mutual_information_rv(&prod, &["X"], &["Y"]).unwrap().abs() < 1e-12);
        assert!(mutual_information_rv(&prod, &["X"], &["X"]).is_err());
    }

    #[test]
    fn mutual_information_matches_joint_table() {
        let mut rng = rng_from_seed(21);
        let reg = physical_registry(&["A", "B"], &[2, 3], 4096).unwrap();
        for _ in 0..20 {
            let rho = random_density(&reg, 3, &mut rng).unwrap();
            let m = rho.matrix();
            // joint table p[a][b] = ρ[(a,b),(a,b)]
            let p: Vec<Vec<f64>> = (0..2)
                .map(|a| (0..3).map(|b| m[(a * 3 + b, a * 3 + b)].re).collect())
                .collect();
            let h =
                |v: &[f64]| -> f64 { v.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum() };
            let pa: Vec<f64> = p.iter().map(|r| r.iter().sum()).collect();
            let pb: Vec<f64> = (0..3).map(|b| p[0][b] + p[1][b]).collect();
            let flat: Vec<f64> = p.concat();
            let oracle = h(&pa) + h(&pb) - h(&flat);
            let got = mutual_information_rv(&rho, &["A"], &["B"]).unwrap();
            assert!((got - oracle).abs() < 1e-12);
            // argument order and registry order do not matter
            let swapped = mutual_information_rv(&rho, &["B"], &["A"]).unwrap();
            assert!((got - swapped).abs() < 1e-12);
        }
    }

    #[test]
    fn thermodynamic_entropy_examples() {
        let reg = physical_registry(&["Q", "B"], &[2, 2], 4096).unwrap();
        let s = 0.5f64.sqrt();
        let bell = PureState::new(
            reg.clone(),
            CVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]),
        )
        .unwrap()
        .to_density();
        assert!(thermodynamic_entropy(&bell, &["Q"], &["B"]).unwrap().abs() < 1e-12);
        let q = DensityMatrix::maximally_mixed(qubits(&["Q"]));
        let b = PureState::basis(qubits(&["B"]), &[0]).unwrap().to_density();
        let prod = q.tensor(&b).unwrap();
        assert!((thermodynamic_entropy(&prod, &["Q"], &["B"]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thermodynamic_entropy_bounds_on_random_states() {
        let reg = physical_registry(&["Q", "B"], &[2, 2], 4096).unwrap();
        let mut rng = rng_from_seed(77);
        for rank in 1..=4 {
            for _ in 0..25 {
                let rho = random_density(&reg, rank, &mut rng).unwrap();
                let st = thermodynamic_entropy(&rho, &["Q"], &["B"]).unwrap();
                // oracle: eigenvalues of the explicitly dephased 4x4 and its 2x2 B-marginal
                let m = rho.matrix();
                let mut dephased = m.clone();
                for i in 0..4 {
                    for j in 0..4 {
                        if i % 2 != j % 2 {
                            dephased[(i, j)] = ZERO;
                        }
                    }
                }
                let h = |v: Vec<f64>| -> f64 {
                    v.into_iter()
                        .filter(|x| *x > 0.0)
                        .map(|x| -x * x.log2())
                        .sum()
                };
                let s_qb = h(crate::linalg::eigvals_hermitian(&dephased));
                let pb0 = m[(0, 0)].re + m[(2, 2)].re;
                let oracle = s_qb - h(vec![pb0, 1.0 - pb0]);
                assert!((st - oracle).abs() < 1e-10);
                let sq = entropy_of(&rho, &["Q"]).unwrap();
                assert!(st >= -1e-9 && st <= sq + 1e-9);
            }
        }
    }
}
