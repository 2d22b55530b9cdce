use serde::{Deserialize, Serialize};

use crate::error::{QilError, Result};
use crate::tol::TOL;

/// Probability distribution over basis outcomes.
///
/// Entries down to `-tol_psd` are accepted and clamped to zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(QilError::InvalidProbabilities("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < -TOL.psd) {
            return Err(QilError::InvalidProbabilities(format!("entry {p}")));
        }
        let probs: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TOL.trace {
            return Err(QilError::InvalidProbabilities(format!("sum {sum}")));
        }
        Ok(ProbabilityVector(probs))
    }

    /// Clamps negative rounding to zero and renormalizes.
    pub(crate) fn from_weights(weights: Vec<f64>) -> Self {
        let clamped: Vec<f64> = weights.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        ProbabilityVector(clamped.into_iter().map(|p| p / sum).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for ProbabilityVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_small_negatives() {
        let p = ProbabilityVector::new(vec![1.0 + 1e-10, -1e-10]).unwrap();
        assert_eq!(p[1], 0.0);
        assert!(ProbabilityVector::new(vec![1.2, -0.2]).is_err());
        assert!(ProbabilityVector::new(vec![0.3, 0.3]).is_err());
    }
}
