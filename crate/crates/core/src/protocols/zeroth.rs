use crate::entropy::thermodynamic_entropy;
use crate::error::{QilError, Result};
use crate::report::ExperimentReport;
use crate::state::{DensityMatrix, Unitary};

/// Lets `Q1` and `Q2` interact through `u` and compares the summed
/// thermodynamic entropies relative to the knowledge systems `b`.
///
/// The joint state must start with `S_T(Q1|B) + S_T(Q2|B) = S_T(Q1Q2|B)`,
/// i.e. `Q1` and `Q2` uncorrelated given `B^c`; otherwise a precondition
/// error is returned.
pub fn check_zeroth_law(
    rho: &DensityMatrix,
    q1: &str,
    q2: &str,
    b: &[&str],
    u: &Unitary,
    tol: f64,
) -> Result<ExperimentReport> {
    let mut targets: Vec<&str> = u.targets().iter().map(String::as_str).collect();
    targets.sort_unstable();
    let mut expected = vec![q1, q2];
    expected.sort_unstable();
    if targets != expected {
        return Err(QilError::Precondition(format!(
            "interaction must act on exactly {q1} and {q2}, got {:?}",
            u.targets()
        )));
    }
    let st = |r: &DensityMatrix| -> Result<(f64, f64, f64)> {
        Ok((
            thermodynamic_entropy(r, &[q1], b)?,
            thermodynamic_entropy(r, &[q2], b)?,
            thermodynamic_entropy(r, &[q1, q2], b)?,
        ))
    };
    let (s1, s2, s12) = st(rho)?;
    let conditional_mi = s1 + s2 - s12;
    if conditional_mi.abs() > tol {
        return Err(QilError::Precondition(format!(
            "{q1} and {q2} are initially correlated (conditional mutual information {conditional_mi:.3e})"
        )));
    }
    let after = rho.apply_unitary(u)?;
    let (t1, t2, t12) = st(&after)?;

    let mut r = ExperimentReport::new("zeroth", tol);
    r.value("S_T_Q1_before", s1)
        .value("S_T_Q2_before", s2)
        .value("S_T_Q1Q2_before", s12)
        .value("sum_before", s1 + s2)
        .value("S_T_Q1_after", t1)
        .value("S_T_Q2_after", t2)
        .value("S_T_Q1Q2_after", t12)
        .value("sum_after", t1 + t2);
    r.check_ge("no_decrease", t1 + t2, s1 + s2)
        .check_eq("additive_before", s1 + s2, s12)
        .check_ge("subadditive_after", t1 + t2, t12)
        .check_eq("joint_invariant", t12, s12);
    Ok(r)
}

/// Builds `part1 ⊗ part2`, where `part1` holds `q1` and `part2` holds `q2`;
/// every other label is treated as a knowledge system.
pub fn zeroth_law_from_parts(
    part1: &DensityMatrix,
    part2: &DensityMatrix,
    q1: &str,
    q2: &str,
    u: &Unitary,
    tol: f64,
) -> Result<ExperimentReport> {
    if !part1.registry().contains(q1) {
        return Err(QilError::UnknownLabel(q1.to_string()));
    }
    if !part2.registry().contains(q2) {
        return Err(QilError::UnknownLabel(q2.to_string()));
    }
    let joint = part1.tensor(part2)?;
    let b = joint.registry().complement(&[q1, q2]);
    if b.is_empty() {
        return Err(QilError::Precondition(
            "no knowledge systems present".into(),
        ));
    }
    let b: Vec<&str> = b.iter().map(String::as_str).collect();
    check_zeroth_law(&joint, q1, q2, &b, u, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{physical_registry, random_density, random_haar_unitary, rng_from_seed};

    fn part(q: &str, b: &str, seed: u64, rank: usize) -> DensityMatrix {
        let reg = physical_registry(&[q, b], &[2, 2], 4096).unwrap();
        random_density(&reg, rank, &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn identity_keeps_sums() {
        let u = Unitary::identity(4, &["Q1", "Q2"]).unwrap();
        let r = zeroth_law_from_parts(
            &part("Q1", "B1", 1, 2),
            &part("Q2", "B2", 2, 3),
            "Q1",
            "Q2",
            &u,
            1e-9,
        )
        .unwrap();
        assert!(r.passed);
        assert!((r.get("sum_after") - r.get("sum_before")).abs() < 1e-12);
    }

    #[test]
    fn swap_of_identical_marginals() {
        let p1 = part("Q1", "B1", 5, 2);
        let reg2 = physical_registry(&["Q2", "B2"], &[2, 2], 4096).unwrap();
        let p2 = DensityMatrix::new(reg2, p1.matrix().clone()).unwrap();
        let u = Unitary::swap("Q1", "Q2", 2).unwrap();
        let r = zeroth_law_from_parts(&p1, &p2, "Q1", "Q2", &u, 1e-9).unwrap();
        assert!(r.passed);
        assert!((r.get("sum_after") - r.get("sum_before")).abs() < 1e-12);
    }

    #[test]
    fn random_interactions_never_decrease() {
        let mut rng = rng_from_seed(3);
        for k in 0..30 {
            let u = random_haar_unitary(4, &["Q1", "Q2"], &mut rng).unwrap();
            let r = zeroth_law_from_parts(
                &part("Q1", "B1", 100 + k, 1 + (k as usize % 4)),
                &part("Q2", "B2", 200 + k, 2),
                "Q1",
                "Q2",
                &u,
                1e-9,
            )
            .unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn correlated_start_rejected() {
        let reg = physical_registry(&["Q1", "Q2", "B"], &[2, 2, 2], 4096).unwrap();
        // Q1 Q2 in a Bell pair, B pure: conditional mutual information 2
        let s = 0.5f64.sqrt();
        let mut amps = crate::linalg::CVector::zeros(8);
        amps[0] = crate::linalg::c(s, 0.0);
        amps[6] = crate::linalg::c(s, 0.0);
        let rho = crate::state::PureState::new(reg, amps)
            .unwrap()
            .to_density();
        let u = Unitary::identity(4, &["Q1", "Q2"]).unwrap();
        assert!(matches!(
            check_zeroth_law(&rho, "Q1", "Q2", &["B"], &u, 1e-9),
            Err(QilError::Precondition(_))
        ));
        let wrong = Unitary::identity(4, &["Q1", "B"]).unwrap();
        assert!(matches!(
            check_zeroth_law(&rho, "Q1", "Q2", &["B"], &wrong, 1e-9),
            Err(QilError::Precondition(_))
        ));
    }
}
