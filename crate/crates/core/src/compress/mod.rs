//! Qudit circuit compression.
//!
//! A [`QuditLayout`] packs qubits into qudits. Gates inside one qudit become
//! local; a controlled gate spanning two qudits becomes a multi-level CZ whose
//! trigger sets collect every mode in which the participating qubits read 1.

mod circuit;
mod cost;
mod layout;
mod simulate;

use alloc::vec::Vec;
use core::fmt;

pub use circuit::{Circuit, Gate, GateKind};
pub use cost::{cost_report, Backend, CostReport, CostRow, Diagnostic, GateCost};
pub use layout::{QuditLayout, MAX_GROUP_SIZE};
pub use simulate::{gate_matrix, run_compressed, simulate_compressed, SimEntry, SimulationMap};

use crate::schemes::SchemeError;
use crate::trigger::{TriggerError, TriggerSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompressError {
    #[error("gate {gate}: qubit {qubit} out of range for {qubits} qubits")]
    OperandOutOfRange {
        gate: usize,
        qubit: usize,
        qubits: usize,
    },
    #[error("gate {gate}: qubit {qubit} listed more than once")]
    DuplicateOperand { gate: usize, qubit: usize },
    #[error("gate {gate}: {kind} does not take {found} operands")]
    Arity {
        gate: usize,
        kind: GateKind,
        found: usize,
    },
    #[error("layout group {0} is empty")]
    EmptyGroup(usize),
    #[error("layout group {group} has {size} qubits (limit {max})", max = MAX_GROUP_SIZE)]
    GroupTooLarge { group: usize, size: usize },
    #[error("layout lists qubit {0} more than once")]
    LayoutDuplicate(usize),
    #[error("layout qubit {qubit} out of range for {qubits} qubits")]
    LayoutQubitOutOfRange { qubit: usize, qubits: usize },
    #[error("layout covers {layout} qubits but the circuit has {circuit}")]
    LayoutMismatch { layout: usize, circuit: usize },
    #[error("gate {0} is local under this layout")]
    NotNonLocal(usize),
    #[error("gate {gate} spans {groups} qudits; only two-qudit gates are supported")]
    TooManyGroups { gate: usize, groups: usize },
    #[error("gate {gate}: {source}")]
    Trigger { gate: usize, source: TriggerError },
    #[error("gate {gate}: {source}")]
    Scheme { gate: usize, source: SchemeError },
}

/// Where a gate acts relative to the layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Locality {
    Local(usize),
    /// Groups touched, ascending.
    NonLocal(Vec<usize>),
}

impl Locality {
    pub fn is_local(&self) -> bool {
        matches!(self, Locality::Local(_))
    }
}

fn check_layout(c: &Circuit, l: &QuditLayout) -> Result<(), CompressError> {
    if c.qubit_count() != l.qubit_count() {
        return Err(CompressError::LayoutMismatch {
            layout: l.qubit_count(),
            circuit: c.qubit_count(),
        });
    }
    Ok(())
}

pub fn locality(gate: &Gate, l: &QuditLayout) -> Locality {
    let mut groups: Vec<usize> = gate.operands.iter().map(|&q| l.group_of(q)).collect();
    groups.sort_unstable();
    groups.dedup();
    if groups.len() == 1 {
        Locality::Local(groups[0])
    } else {
        Locality::NonLocal(groups)
    }
}

pub fn classify_gates(c: &Circuit, l: &QuditLayout) -> Result<Vec<Locality>, CompressError> {
    check_layout(c, l)?;
    Ok(c.gates().iter().map(|g| locality(g, l)).collect())
}

/// Trigger sets of a two-qudit gate after rewriting it as a multi-level CZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerDerivation {
    /// The two groups, ascending; `c1` belongs to the first.
    pub groups: (usize, usize),
    pub c1: TriggerSet,
    pub c2: TriggerSet,
    /// Qubits of each group that do not take part in the gate.
    pub r1: u32,
    pub r2: u32,
    /// Target qubit conjugated by Hadamards to turn an X-type gate into Z-type.
    pub conjugated: Option<usize>,
}

impl fmt::Display for TriggerDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C1={} (r1={}), C2={} (r2={})",
            self.c1, self.r1, self.c2, self.r2
        )
    }
}

/// Modes of `group` in which every qubit of `participating` reads 1.
pub fn trigger_set_for_group(
    l: &QuditLayout,
    group: usize,
    participating: &[usize],
) -> Result<(TriggerSet, u32), TriggerError> {
    let mask: usize = participating.iter().map(|&q| l.bit_weight(q)).sum();
    let dim = l.dim(group);
    let set = TriggerSet::new(dim, (0..dim).filter(|m| m & mask == mask))?;
    let removed = (l.groups()[group].len() - participating.len()) as u32;
    Ok((set, removed))
}

/// Trigger sets for gate `index` of `c`.
pub fn trigger_sets(
    c: &Circuit,
    index: usize,
    l: &QuditLayout,
) -> Result<TriggerDerivation, CompressError> {
    check_layout(c, l)?;
    let gate = &c.gates()[index];
    let groups = match locality(gate, l) {
        Locality::Local(_) => return Err(CompressError::NotNonLocal(index)),
        Locality::NonLocal(groups) if groups.len() > 2 => {
            return Err(CompressError::TooManyGroups {
                gate: index,
                groups: groups.len(),
            })
        }
        Locality::NonLocal(groups) => (groups[0], groups[1]),
    };
    let in_group = |g: usize| -> Vec<usize> {
        gate.operands
            .iter()
            .copied()
            .filter(|&q| l.group_of(q) == g)
            .collect()
    };
    let wrap = |source| CompressError::Trigger {
        gate: index,
        source,
    };
    let (c1, r1) = trigger_set_for_group(l, groups.0, &in_group(groups.0)).map_err(wrap)?;
    let (c2, r2) = trigger_set_for_group(l, groups.1, &in_group(groups.1)).map_err(wrap)?;
    Ok(TriggerDerivation {
        groups,
        c1,
        c2,
        r1,
        r2,
        conjugated: gate.kind.is_x_type().then(|| gate.target()),
    })
}

/// Whether the state-dependent scheme can realize a non-local gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Legality {
    Legal,
    /// An earlier gate is non-local, so the ancillas cannot be prepared by
    /// replaying local operations.
    Blocked {
        by: usize,
    },
}

impl Legality {
    pub fn is_legal(&self) -> bool {
        matches!(self, Legality::Legal)
    }
}

impl fmt::Display for Legality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Legality::Legal => f.write_str("all preceding gates are local"),
            Legality::Blocked { by } => write!(f, "preceded by non-local gate {by}"),
        }
    }
}

pub fn legality_state_dependent(
    c: &Circuit,
    index: usize,
    l: &QuditLayout,
) -> Result<Legality, CompressError> {
    let tags = classify_gates(c, l)?;
    if tags[index].is_local() {
        return Err(CompressError::NotNonLocal(index));
    }
    Ok(match tags[..index].iter().position(|t| !t.is_local()) {
        Some(by) => Legality::Blocked { by },
        None => Legality::Legal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn qfa() -> Circuit {
        use GateKind::*;
        Circuit::new(
            4,
            vec![
                Gate::new(Ccx, [0, 1, 3]),
                Gate::new(Cx, [0, 1]),
                Gate::new(Ccx, [1, 2, 3]),
                Gate::new(Cx, [1, 2]),
                Gate::new(Cx, [0, 1]),
            ],
        )
        .unwrap()
    }

    fn qfa_layout() -> QuditLayout {
        QuditLayout::new(vec![vec![0, 1, 2], vec![3]]).unwrap()
    }

    #[test]
    fn classification() {
        let tags = classify_gates(&qfa(), &qfa_layout()).unwrap();
        let local: Vec<bool> = tags.iter().map(Locality::is_local).collect();
        assert_eq!(local, [false, true, false, true, true]);
        let single = classify_gates(&qfa(), &QuditLayout::single(4).unwrap()).unwrap();
        assert!(single.iter().all(Locality::is_local));
        let trivial = classify_gates(&qfa(), &QuditLayout::trivial(4)).unwrap();
        assert!(trivial.iter().all(|t| !t.is_local()));
    }

    #[test]
    fn gate_c_triggers() {
        let d = trigger_sets(&qfa(), 2, &qfa_layout()).unwrap();
        assert_eq!(d.c1.indices(), &[3, 7]);
        assert_eq!(d.c2.indices(), &[1]);
        assert_eq!((d.r1, d.r2), (1, 0));
        assert_eq!(d.conjugated, Some(3));
    }

    #[test]
    fn no_removed_qubits_is_two_level() {
        let c = Circuit::new(3, vec![Gate::new(GateKind::Ccz, [0, 1, 2])]).unwrap();
        let l = QuditLayout::new(vec![vec![0, 1], vec![2]]).unwrap();
        let d = trigger_sets(&c, 0, &l).unwrap();
        assert_eq!(d.c1.indices(), &[3]);
        assert_eq!(d.c2.indices(), &[1]);
        assert_eq!(d.conjugated, None);
    }

    #[test]
    fn three_groups_rejected() {
        let c = Circuit::new(3, vec![Gate::new(GateKind::Ccz, [0, 1, 2])]).unwrap();
        assert_eq!(
            trigger_sets(&c, 0, &QuditLayout::trivial(3)),
            Err(CompressError::TooManyGroups { gate: 0, groups: 3 })
        );
    }

    #[test]
    fn legality() {
        let l = qfa_layout();
        assert_eq!(
            legality_state_dependent(&qfa(), 0, &l).unwrap(),
            Legality::Legal
        );
        assert_eq!(
            legality_state_dependent(&qfa(), 2, &l).unwrap(),
            Legality::Blocked { by: 0 }
        );
        assert_eq!(
            legality_state_dependent(&qfa(), 1, &l),
            Err(CompressError::NotNonLocal(1))
        );
    }
}
