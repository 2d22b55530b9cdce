//! Ordered, labeled subsystems of a multipartite Hilbert space.
//!
//! Index layout is row-major over the entry order: the first entry is the
//! most significant digit of a global basis index. Entry order is never
//! sorted or otherwise normalized.

use serde::{Deserialize, Serialize};

use crate::error::{QilError, Result};
use crate::tol::DEFAULT_MAX_TOTAL_DIM;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Kind {
    Physical,
    Knowledge { owner: String },
}

impl Kind {
    pub fn knowledge(owner: &str) -> Self {
        Kind::Knowledge {
            owner: owner.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
    pub kind: Kind,
}

impl Subsystem {
    pub fn new(label: &str, dim: usize, kind: Kind) -> Self {
        Subsystem {
            label: label.to_string(),
            dim,
            kind,
        }
    }

    pub fn physical(label: &str, dim: usize) -> Self {
        Self::new(label, dim, Kind::Physical)
    }

    pub fn knowledge(label: &str, dim: usize, owner: &str) -> Self {
        Self::new(label, dim, Kind::knowledge(owner))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemRegistry {
    entries: Vec<Subsystem>,
    max_total_dim: usize,
}

impl SystemRegistry {
    pub fn new(entries: Vec<Subsystem>) -> Result<Self> {
        Self::with_max_dim(entries, DEFAULT_MAX_TOTAL_DIM)
    }

    pub fn with_max_dim(entries: Vec<Subsystem>, max_total_dim: usize) -> Result<Self> {
        if entries.is_empty() {
            return Err(QilError::EmptyRegistry);
        }
        let mut total: usize = 1;
        for (i, e) in entries.iter().enumerate() {
            if e.dim == 0 {
                return Err(QilError::InvalidDimension(0));
            }
            if entries[..i].iter().any(|o| o.label == e.label) {
                return Err(QilError::DuplicateLabel(e.label.clone()));
            }
            total = total.saturating_mul(e.dim);
        }
        if total > max_total_dim {
            return Err(QilError::DimensionOverflow {
                total,
                max: max_total_dim,
            });
        }
        Ok(SystemRegistry {
            entries,
            max_total_dim,
        })
    }

    pub fn entries(&self) -> &[Subsystem] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_total_dim(&self) -> usize {
        self.max_total_dim
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(|e| e.dim).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    pub fn get(&self, label: &str) -> Result<&Subsystem> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .ok_or_else(|| QilError::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.get(label)?.dim)
    }

    /// Product of the dimensions of `labels` (each must be known).
    pub fn dim_of_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        labels
            .iter()
            .try_fold(1usize, |acc, l| Ok(acc * self.dim_of(l.as_ref())?))
    }

    /// Positions of `labels`, in the order given. Rejects unknown, empty and
    /// repeated selections.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        if labels.is_empty() {
            return Err(QilError::EmptySelection);
        }
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let p = self
                .position(l)
                .ok_or_else(|| QilError::UnknownLabel(l.to_string()))?;
            if out.contains(&p) {
                return Err(QilError::DuplicateLabel(l.to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Sub-registry holding `labels` in registry order.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<SystemRegistry> {
        let mut pos = self.positions(labels)?;
        pos.sort_unstable();
        Ok(SystemRegistry {
            entries: pos.iter().map(|&p| self.entries[p].clone()).collect(),
            max_total_dim: self.max_total_dim,
        })
    }

    /// Registry order concatenation; labels must be disjoint.
    pub fn concat(&self, other: &SystemRegistry) -> Result<SystemRegistry> {
        if let Some(e) = other.entries.iter().find(|e| self.contains(&e.label)) {
            return Err(QilError::OverlappingLabels(e.label.clone()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        SystemRegistry::with_max_dim(entries, self.max_total_dim.max(other.max_total_dim))
    }

    pub fn push(&self, entry: Subsystem) -> Result<SystemRegistry> {
        if self.contains(&entry.label) {
            return Err(QilError::DuplicateLabel(entry.label));
        }
        let mut entries = self.entries.clone();
        entries.push(entry);
        SystemRegistry::with_max_dim(entries, self.max_total_dim)
    }

    /// Same entries with dimension of `label` replaced.
    pub(crate) fn with_dim(&self, label: &str, dim: usize) -> Result<SystemRegistry> {
        let p = self
            .position(label)
            .ok_or_else(|| QilError::UnknownLabel(label.to_string()))?;
        let mut entries = self.entries.clone();
        entries[p].dim = dim;
        SystemRegistry::with_max_dim(entries, self.max_total_dim)
    }

    /// Labels not in `labels`, in registry order.
    pub fn complement<S: AsRef<str>>(&self, labels: &[S]) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !labels.iter().any(|l| l.as_ref() == e.label))
            .map(|e| e.label.clone())
            .collect()
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.entries.len()];
        for k in (0..self.entries.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.entries[k + 1].dim;
        }
        strides
    }
}

/// Splits every global index of `reg` into (index over `targets` in the
/// given order, index over the remaining subsystems in registry order).
pub(crate) fn split_indices(reg: &SystemRegistry, targets: &[usize]) -> Vec<(usize, usize)> {
    let dims = reg.dims();
    let strides = reg.strides();
    let rest: Vec<usize> = (0..dims.len()).filter(|p| !targets.contains(p)).collect();
    (0..reg.total_dim())
        .map(|i| {
            let digit = |p: usize| (i / strides[p]) % dims[p];
            let t = targets.iter().fold(0, |acc, &p| acc * dims[p] + digit(p));
            let r = rest.iter().fold(0, |acc, &p| acc * dims[p] + digit(p));
            (t, r)
        })
        .collect()
}

/// Builds the global index of `reg` from per-position digits.
pub(crate) fn compose_index(reg: &SystemRegistry, digits: &[usize]) -> usize {
    reg.entries
        .iter()
        .zip(digits)
        .fold(0, |acc, (e, &d)| acc * e.dim + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit() {
        let r = SystemRegistry::new(vec![Subsystem::physical("Q", 2)]).unwrap();
        assert_eq!(r.total_dim(), 2);
    }

    #[test]
    fn duplicate_label_rejected() {
        let e = SystemRegistry::new(vec![
            Subsystem::physical("Q", 2),
            Subsystem::physical("Q", 3),
        ]);
        assert_eq!(e, Err(QilError::DuplicateLabel("Q".into())));
    }

    #[test]
    fn thirteen_qubits_overflow() {
        let entries = (0..13)
            .map(|k| Subsystem::physical(&format!("q{k}"), 2))
            .collect();
        let e = SystemRegistry::with_max_dim(entries, 4096);
        assert_eq!(
            e,
            Err(QilError::DimensionOverflow {
                total: 8192,
                max: 4096
            })
        );
    }

    #[test]
    fn zero_dim_and_empty_rejected() {
        assert!(SystemRegistry::new(vec![Subsystem::physical("Q", 0)]).is_err());
        assert_eq!(SystemRegistry::new(vec![]), Err(QilError::EmptyRegistry));
    }

    #[test]
    fn split_indices_row_major() {
        let r = SystemRegistry::new(vec![
            Subsystem::physical("A", 2),
            Subsystem::physical("B", 3),
            Subsystem::physical("C", 2),
        ])
        .unwrap();
        let s = split_indices(&r, &[2, 0]);
        // index 7 = (a=1, b=0, c=1)
        assert_eq!(s[7], (3, 0));
        assert_eq!(compose_index(&r, &[1, 2, 1]), 11);
    }
}
