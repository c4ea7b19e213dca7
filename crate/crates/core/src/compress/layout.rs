use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::CompressError;

/// Largest group the layout accepts (a `2^16`-level qudit).
pub const MAX_GROUP_SIZE: usize = 16;

/// Partition of qubits into qudits.
///
/// A group of `g` qubits becomes a qudit with `2^g` modes. Within a group the
/// first listed qubit is the most significant bit of the mode index.
#[derive(Clone, PartialEq, Eq)]
pub struct QuditLayout {
    groups: Vec<Vec<usize>>,
    /// qubit -> (group, position within group)
    location: Vec<(usize, usize)>,
}

impl QuditLayout {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self, CompressError> {
        let qubits: usize = groups.iter().map(Vec::len).sum();
        let mut location = vec![None; qubits];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(CompressError::EmptyGroup(g));
            }
            if group.len() > MAX_GROUP_SIZE {
                return Err(CompressError::GroupTooLarge {
                    group: g,
                    size: group.len(),
                });
            }
            for (pos, &q) in group.iter().enumerate() {
                let slot = location
                    .get_mut(q)
                    .ok_or(CompressError::LayoutQubitOutOfRange { qubit: q, qubits })?;
                if slot.is_some() {
                    return Err(CompressError::LayoutDuplicate(q));
                }
                *slot = Some((g, pos));
            }
        }
        // every slot is filled: there are exactly `qubits` distinct in-range entries
        let location = location.into_iter().map(|l| l.expect("filled")).collect();
        Ok(Self { groups, location })
    }

    /// One qubit per group, in index order.
    pub fn trivial(qubits: usize) -> Self {
        Self::new((0..qubits).map(|q| vec![q]).collect()).expect("valid")
    }

    /// All qubits in a single group.
    pub fn single(qubits: usize) -> Result<Self, CompressError> {
        Self::new(vec![(0..qubits).collect()])
    }

    pub fn qubit_count(&self) -> usize {
        self.location.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group_of(&self, qubit: usize) -> usize {
        self.location[qubit].0
    }

    /// Qudit dimension `2^g` of a group.
    pub fn dim(&self, group: usize) -> usize {
        1 << self.groups[group].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.groups.len()).map(|g| self.dim(g)).collect()
    }

    /// Place value of a qubit's bit within its group's mode index.
    pub fn bit_weight(&self, qubit: usize) -> usize {
        let (g, pos) = self.location[qubit];
        1 << (self.groups[g].len() - 1 - pos)
    }

    /// Qubit order obtained by concatenating the groups; reshaping a qudit
    /// register to qubits yields this order.
    pub fn concatenated(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }
}

impl fmt::Debug for QuditLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuditLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for group in &self.groups {
            f.write_str("(")?;
            for q in group {
                write!(f, "q{q}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_order() {
        let l = QuditLayout::new(vec![vec![0, 1, 2], vec![3]]).unwrap();
        assert_eq!(l.dims(), [8, 2]);
        assert_eq!(l.bit_weight(0), 4);
        assert_eq!(l.bit_weight(2), 1);
        assert_eq!(l.group_of(3), 1);
        assert_eq!(alloc::format!("{l}"), "(q0q1q2)(q3)");
    }

    #[test]
    fn rejects_bad_partitions() {
        assert_eq!(
            QuditLayout::new(vec![vec![0, 1], vec![1]]),
            Err(CompressError::LayoutDuplicate(1))
        );
        assert!(matches!(
            QuditLayout::new(vec![vec![0, 5]]),
            Err(CompressError::LayoutQubitOutOfRange {
                qubit: 5,
                qubits: 2
            })
        ));
        assert_eq!(
            QuditLayout::new(vec![vec![0], vec![]]),
            Err(CompressError::EmptyGroup(1))
        );
    }
}
