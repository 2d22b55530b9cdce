use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One asserted relation. `margin` is the signed slack; negative means the
/// relation is violated, equalities use `−|difference|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    /// `"initial"` or `"A-B"` for the coupled pair.
    pub coupling_pair: String,
    pub s_t: f64,
}

/// Output of a protocol simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub values: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new(experiment: &str, tolerance: f64) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            seed: None,
            tolerance,
            values: BTreeMap::new(),
            checks: Vec::new(),
            trajectory: None,
            passed: true,
        }
    }

    pub fn value(&mut self, name: &str, v: f64) -> &mut Self {
        self.values.insert(name.to_string(), v);
        self
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values.get(name).copied().unwrap_or(f64::NAN)
    }

    /// Records `lhs ≥ rhs`.
    pub fn check_ge(&mut self, name: &str, lhs: f64, rhs: f64) -> &mut Self {
        self.check(name, lhs - rhs)
    }

    /// Records `lhs = rhs`.
    pub fn check_eq(&mut self, name: &str, lhs: f64, rhs: f64) -> &mut Self {
        self.check(name, -(lhs - rhs).abs())
    }

    pub fn check(&mut self, name: &str, margin: f64) -> &mut Self {
        let passed = margin.is_finite() && margin >= -self.tolerance;
        self.passed &= passed;
        self.checks.push(Check {
            name: name.to_string(),
            margin,
            passed,
        });
        self
    }

    pub fn margin(&self, name: &str) -> f64 {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.margin)
            .unwrap_or(f64::NAN)
    }

    /// Smallest margin over all checks.
    pub fn worst_margin(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_follow_margins() {
        let mut r = ExperimentReport::new("t", 1e-9);
        r.check_ge("ok", 1.0, 1.0 + 1e-12).check_eq("eq", 2.0, 2.0);
        assert!(r.passed);
        r.check_ge("bad", 0.0, 1.0);
        assert!(!r.passed);
        assert_eq!(r.margin("bad"), -1.0);
        assert_eq!(r.worst_margin(), -1.0);
    }
}
