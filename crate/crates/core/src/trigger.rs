//! Trigger sets: the qudit levels that fire a multi-level gate.

use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TriggerError {
    #[error("qudit dimension {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("trigger set is empty")]
    Empty,
    #[error("trigger set covers {count} of {dim} levels; at least one level must stay free")]
    Full { count: usize, dim: usize },
    #[error("trigger index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },
    #[error("trigger index {0} listed more than once")]
    Duplicate(usize),
}

/// Strictly ascending set of trigger levels `1 <= k < d` for a qudit of dimension `d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriggerSet {
    dim: usize,
    indices: Vec<usize>,
}

impl TriggerSet {
    pub fn new(dim: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self, TriggerError> {
        if dim < 2 {
            return Err(TriggerError::DimensionTooSmall(dim));
        }
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        for pair in indices.windows(2) {
            if pair[0] == pair[1] {
                return Err(TriggerError::Duplicate(pair[0]));
            }
        }
        if let Some(&index) = indices.iter().find(|&&i| i >= dim) {
            return Err(TriggerError::OutOfRange { index, dim });
        }
        if indices.is_empty() {
            return Err(TriggerError::Empty);
        }
        if indices.len() >= dim {
            return Err(TriggerError::Full {
                count: indices.len(),
                dim,
            });
        }
        Ok(Self { dim, indices })
    }

    pub fn singleton(dim: usize, index: usize) -> Result<Self, TriggerError> {
        Self::new(dim, [index])
    }

    /// `{d - 1}`, the trigger of the two-level CZ.
    pub fn top(dim: usize) -> Result<Self, TriggerError> {
        Self::singleton(dim, dim.saturating_sub(1))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of trigger levels, `k`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, level: usize) -> bool {
        self.indices.binary_search(&level).is_ok()
    }

    /// Ancilla level paired with a trigger level (`c_i ↦ i`).
    pub fn position(&self, level: usize) -> Option<usize> {
        self.indices.binary_search(&level).ok()
    }

    /// Lowest level that is not a trigger.
    pub fn first_free(&self) -> usize {
        (0..self.dim)
            .find(|l| !self.contains(*l))
            .expect("a trigger set always leaves a free level")
    }

    /// Physical mode of each ancilla level `0..=k` when the ancilla enters a
    /// router over this qudit's mode labels: level `i < k` rides on trigger
    /// mode `c_i`, the extra level `k` rides on the lowest free mode.
    pub fn ancilla_modes(&self) -> Vec<usize> {
        let mut modes = self.indices.clone();
        modes.push(self.first_free());
        modes
    }
}

impl fmt::Debug for TriggerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriggerSet(d={}, {:?})", self.dim, self.indices)
    }
}

impl fmt::Display for TriggerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, idx) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{idx}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_validates() {
        let t = TriggerSet::new(8, [7, 3]).unwrap();
        assert_eq!(t.indices(), &[3, 7]);
        assert_eq!(t.position(7), Some(1));
        assert_eq!(t.first_free(), 0);
        assert_eq!(t.ancilla_modes(), alloc::vec![3, 7, 0]);
        assert_eq!(alloc::format!("{t}"), "{3,7}");
    }

    #[test]
    fn rejects_invalid_sets() {
        assert_eq!(
            TriggerSet::new(2, [0, 1]),
            Err(TriggerError::Full { count: 2, dim: 2 })
        );
        assert_eq!(TriggerSet::new(4, []), Err(TriggerError::Empty));
        assert_eq!(
            TriggerSet::new(4, [4]),
            Err(TriggerError::OutOfRange { index: 4, dim: 4 })
        );
        assert_eq!(TriggerSet::new(4, [1, 1]), Err(TriggerError::Duplicate(1)));
        assert_eq!(
            TriggerSet::new(1, [0]),
            Err(TriggerError::DimensionTooSmall(1))
        );
    }

    #[test]
    fn top_level() {
        let t = TriggerSet::top(4).unwrap();
        assert_eq!(t.indices(), &[3]);
        assert_eq!(t.ancilla_modes(), alloc::vec![3, 0]);
    }
}
