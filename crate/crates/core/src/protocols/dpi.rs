use crate::channels::{coherent_information, compose, purify, Channel};
use crate::entropy::{directed_entanglement, von_neumann};
use crate::error::{QilError, Result};
use crate::registry::Kind;
use crate::report::ExperimentReport;
use crate::state::{DensityMatrix, PureState};

fn e_of(st: &PureState, x: &[&str], y: &[&str]) -> Result<f64> {
    let keep: Vec<&str> = x.iter().chain(y).copied().collect();
    directed_entanglement(&st.partial_trace(&keep)?, x, y)
}

/// Sends the `Q` half of a purification of `rho` through the environment
/// pictures of `ch1` and then `ch2`.
///
/// Checks the directed-entanglement chain
/// `E''(R→QE1E2) ≥ E''(R→QE2) ≥ E''(R→Q)`, the processing chain
/// `S(ρ) ≥ I_c(ρ, ℰ1) ≥ I_c(ρ, ℰ2∘ℰ1)` computed by the Kraus route, and
/// the identities linking the two.
pub fn simulate_dpi_chain(
    rho: &DensityMatrix,
    ch1: &Channel,
    ch2: &Channel,
    tol: f64,
) -> Result<ExperimentReport> {
    let d = rho.dim();
    for ch in [ch1, ch2] {
        if ch.dim_in() != d || ch.dim_out() != d {
            return Err(QilError::DimensionMismatch {
                expected: d,
                found: ch.dim_in(),
            });
        }
    }
    let s_rho = von_neumann(rho);
    let ic1 = coherent_information(rho, ch1)?;
    let ic21 = coherent_information(rho, &compose(ch2, ch1)?)?;

    let psi = purify(rho, "R", "Q")?;
    let e_initial = e_of(&psi, &["R"], &["Q"])?;
    let dil1 = ch1.stinespring()?;
    let st = psi.extend_fresh("E1", dil1.env_dim, Kind::Physical)?;
    let st = st.apply_unitary(&dil1.unitary_on("Q", "E1")?)?;
    let e1_rq = e_of(&st, &["R"], &["Q"])?;
    let dil2 = ch2.stinespring()?;
    let st = st.extend_fresh("E2", dil2.env_dim, Kind::Physical)?;
    let st = st.apply_unitary(&dil2.unitary_on("Q", "E2")?)?;
    let e2_all = e_of(&st, &["R"], &["Q", "E1", "E2"])?;
    let e2_qe2 = e_of(&st, &["R"], &["Q", "E2"])?;
    let e2_q = e_of(&st, &["R"], &["Q"])?;

    let mut r = ExperimentReport::new("dpi", tol);
    r.value("S_rho", s_rho)
        .value("Ic_1", ic1)
        .value("Ic_21", ic21)
        .value("E_R_to_Q_initial", e_initial)
        .value("E1_R_to_Q", e1_rq)
        .value("E2_R_to_QE1E2", e2_all)
        .value("E2_R_to_QE2", e2_qe2)
        .value("E2_R_to_Q", e2_q);
    r.check_ge("E2_all_ge_QE2", e2_all, e2_qe2)
        .check_ge("E2_QE2_ge_Q", e2_qe2, e2_q)
        .check_ge("S_ge_Ic1", s_rho, ic1)
        .check_ge("Ic1_ge_Ic21", ic1, ic21)
        .check_eq("E2_all_eq_S", e2_all, s_rho)
        .check_eq("E2_QE2_eq_E1_Q", e2_qe2, e1_rq)
        .check_eq("E2_QE2_eq_Ic1", e2_qe2, ic1)
        .check_eq("E2_Q_eq_Ic21", e2_q, ic21);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{preset_channel, Preset};
    use crate::random::{physical_registry, random_density, rng_from_seed};

    fn qubit() -> crate::registry::SystemRegistry {
        physical_registry(&["Q"], &[2], 4096).unwrap()
    }

    #[test]
    fn identity_channels_keep_everything() {
        let rho = random_density(&qubit(), 2, &mut rng_from_seed(1)).unwrap();
        let id = Channel::identity(2);
        let r = simulate_dpi_chain(&rho, &id, &id, 1e-9).unwrap();
        assert!(r.passed);
        let s = r.get("S_rho");
        for k in ["Ic_1", "Ic_21", "E2_R_to_QE1E2", "E2_R_to_QE2", "E2_R_to_Q"] {
            assert!((r.get(k) - s).abs() < 1e-12, "{k}");
        }
    }

    #[test]
    fn identity_then_depolarize() {
        let rho = DensityMatrix::maximally_mixed(qubit());
        let dep = preset_channel(Preset::Depolarizing, 1.0, 2).unwrap();
        let r = simulate_dpi_chain(&rho, &Channel::identity(2), &dep, 1e-9).unwrap();
        assert!(r.passed);
        assert!((r.get("S_rho") - 1.0).abs() < 1e-12);
        assert!((r.get("Ic_1") - 1.0).abs() < 1e-12);
        assert!((r.get("Ic_21") + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dephasing_chain_matches_dilation_route() {
        let mut rng = rng_from_seed(2);
        let d1 = preset_channel(Preset::Dephasing, 0.3, 2).unwrap();
        let d2 = preset_channel(Preset::Dephasing, 0.5, 2).unwrap();
        for _ in 0..10 {
            let rho = random_density(&qubit(), 2, &mut rng).unwrap();
            let r = simulate_dpi_chain(&rho, &d1, &d2, 1e-9).unwrap();
            assert!(r.passed);
            assert!((r.get("E2_R_to_QE2") - r.get("Ic_1")).abs() < 1e-10);
            assert!((r.get("E2_R_to_Q") - r.get("Ic_21")).abs() < 1e-10);
        }
    }
}
