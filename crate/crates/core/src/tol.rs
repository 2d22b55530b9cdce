//! Numerical tolerances shared by every validation check.

use serde::{Deserialize, Serialize};

/// Default cap on the dense total dimension of a registry.
pub const DEFAULT_MAX_TOTAL_DIM: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub norm: f64,
    pub trace: f64,
    pub herm: f64,
    pub unitary: f64,
    /// Relative to the spectral scale of the matrix.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}

pub const TOL: Tolerances = Tolerances {
    norm: 1e-9,
    trace: 1e-9,
    herm: 1e-9,
    unitary: 1e-9,
    psd: 1e-8,
};
