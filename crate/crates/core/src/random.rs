//! Seeded random instances: Haar unitaries, Haar pure states and
//! fixed-rank mixed states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{QilError, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::registry::{Subsystem, SystemRegistry};
use crate::state::{DensityMatrix, PureState, Unitary};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed; used to split a base seed over trials
/// so results do not depend on scheduling.
pub fn split_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed `dim × dim` unitary matrix: QR of a Ginibre matrix with
/// the phases of `diag(R)` moved into `Q`.
pub fn haar_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<CMatrix> {
    if dim < 1 {
        return Err(QilError::InvalidDimension(dim));
    }
    let qr = ginibre(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Haar-random unitary on the given targets.
pub fn random_haar_unitary<R: Rng + ?Sized, S: AsRef<str>>(
    dim: usize,
    targets: &[S],
    rng: &mut R,
) -> Result<Unitary> {
    Unitary::new(haar_matrix(dim, rng)?, targets)
}

pub fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    let g = ginibre(dim, 1, rng);
    let n = g.norm();
    CVector::from_column_slice(g.as_slice()) / c(n, 0.0)
}

pub fn random_pure<R: Rng + ?Sized>(registry: &SystemRegistry, rng: &mut R) -> PureState {
    let psi = haar_vector(registry.total_dim(), rng);
    PureState::normalized(registry.clone(), psi).expect("Haar vector is normalizable")
}

/// Reduction of a Haar-random pure state on `registry ⊗ C^rank`.
/// `rank == 1` gives a random pure state's projector.
pub fn random_density<R: Rng + ?Sized>(
    registry: &SystemRegistry,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let d = registry.total_dim();
    if rank < 1 || rank > d {
        return Err(QilError::InvalidRank { rank, max: d });
    }
    // the reduction of a Haar vector on C^d ⊗ C^rank is G G† / tr for a
    // d × rank Ginibre G
    let g = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = crate::linalg::trace(&m).re;
    Ok(DensityMatrix::from_parts(registry.clone(), m / c(tr, 0.0)))
}

/// Either a pure state (rank 1) or a mixed state of the given rank.
#[derive(Clone, Debug)]
pub enum RandomState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl RandomState {
    pub fn into_density(self) -> DensityMatrix {
        match self {
            RandomState::Pure(p) => p.to_density(),
            RandomState::Mixed(m) => m,
        }
    }
}

pub fn random_state<R: Rng + ?Sized>(
    registry: &SystemRegistry,
    rank: usize,
    rng: &mut R,
) -> Result<RandomState> {
    let d = registry.total_dim();
    if rank < 1 || rank > d {
        return Err(QilError::InvalidRank { rank, max: d });
    }
    if rank == 1 {
        Ok(RandomState::Pure(random_pure(registry, rng)))
    } else {
        Ok(RandomState::Mixed(random_density(registry, rank, rng)?))
    }
}

/// Registry of physical subsystems named by `labels` with `dims`.
pub fn physical_registry(
    labels: &[&str],
    dims: &[usize],
    max_total_dim: usize,
) -> Result<SystemRegistry> {
    SystemRegistry::with_max_dim(
        labels
            .iter()
            .zip(dims)
            .map(|(l, d)| Subsystem::physical(l, *d))
            .collect(),
        max_total_dim,
    )
}
