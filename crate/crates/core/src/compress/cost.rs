use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{
    classify_gates, legality_state_dependent, trigger_sets, Circuit, CompressError, Legality,
    Locality, QuditLayout, TriggerDerivation,
};
use crate::mcz::BsmModel;
use crate::probability::{pow, ratio, to_f64};
use crate::schemes::{success_probability, SchemeKind};

/// Success probability of the baseline two-qubit entangling gate.
pub fn baseline_gate_probability() -> BigRational {
    ratio(1, 9)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Every qubit on its own; Toffolis cost three two-qubit gates.
    Uncompressed,
    /// Compressed layout, each multi-level gate expanded into two-level gates.
    Standard,
    StateDependent,
    StateIndependent,
}

impl Backend {
    pub const ALL: [Backend; 4] = [
        Backend::Uncompressed,
        Backend::Standard,
        Backend::StateDependent,
        Backend::StateIndependent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Uncompressed => "uncompressed",
            Backend::Standard => "standard",
            Backend::StateDependent => "state-dependent",
            Backend::StateIndependent => "state-independent",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Cost charged for one gate of the circuit by one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct GateCost {
    pub gate: usize,
    pub count: u64,
    pub probability: BigRational,
    pub ancillas: Option<u64>,
    pub legality: Option<Legality>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub backend: Backend,
    pub nonlocal_gate_count: u64,
    pub success_probability: BigRational,
    /// `None` when the backend's ancilla use is not modeled.
    pub ancilla_count: Option<u64>,
    pub legal: bool,
    pub reason: Option<String>,
    /// False when some gate could not be costed; see the report diagnostics.
    pub complete: bool,
    pub per_gate: Vec<GateCost>,
}

impl CostRow {
    pub fn probability_f64(&self) -> f64 {
        to_f64(&self.success_probability)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// Gate spans more than two qudits; not costed by compressed backends.
    TooManyGroups { gate: usize, groups: usize },
    /// Gate has more than two controls; no baseline decomposition is modeled.
    UnsupportedBaseline { gate: usize, operands: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::TooManyGroups { gate, groups } => {
                write!(f, "gate {gate} spans {groups} qudits; only two-qudit gates are supported")
            }
            Diagnostic::UnsupportedBaseline { gate, operands } => write!(
                f,
                "gate {gate} has {operands} operands; the uncompressed baseline covers at most three"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub rows: Vec<CostRow>,
    /// Trigger derivation of every costed non-local gate.
    pub nonlocal: Vec<(usize, TriggerDerivation)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl CostReport {
    pub fn row(&self, backend: Backend) -> &CostRow {
        self.rows
            .iter()
            .find(|r| r.backend == backend)
            .expect("every backend has a row")
    }
}

fn row(backend: Backend, per_gate: Vec<GateCost>, complete: bool) -> CostRow {
    let mut p = BigRational::one();
    let mut count = 0;
    let mut ancillas = Some(0);
    for g in &per_gate {
        p *= &g.probability;
        count += g.count;
        ancillas = ancillas.zip(g.ancillas).map(|(a, b)| a + b);
    }
    if per_gate.is_empty() && matches!(backend, Backend::Uncompressed | Backend::Standard) {
        ancillas = None;
    }
    let blocked = per_gate.iter().find_map(|g| match g.legality {
        Some(Legality::Blocked { by }) => Some((g.gate, by)),
        _ => None,
    });
    CostRow {
        backend,
        nonlocal_gate_count: count,
        success_probability: p,
        ancilla_count: ancillas,
        legal: blocked.is_none(),
        reason: blocked.map(|(gate, by)| format!("gate {gate} is preceded by non-local gate {by}")),
        complete,
        per_gate,
    }
}

pub fn cost_report(c: &Circuit, l: &QuditLayout) -> Result<CostReport, CompressError> {
    let tags = classify_gates(c, l)?;
    let baseline = baseline_gate_probability();
    let mut diagnostics = Vec::new();

    let mut uncompressed = Vec::new();
    for (index, gate) in c.gates().iter().enumerate() {
        let count = match gate.operands.len() {
            1 => continue,
            2 => 1,
            3 => 3,
            operands => {
                diagnostics.push(Diagnostic::UnsupportedBaseline {
                    gate: index,
                    operands,
                });
                continue;
            }
        };
        uncompressed.push(GateCost {
            gate: index,
            count,
            probability: pow(&baseline, count),
            ancillas: None,
            legality: None,
        });
    }
    let baseline_complete = diagnostics.is_empty();

    let mut nonlocal = Vec::new();
    let mut compressed_complete = true;
    for (index, tag) in tags.iter().enumerate() {
        if let Locality::NonLocal(groups) = tag {
            if groups.len() > 2 {
                diagnostics.push(Diagnostic::TooManyGroups {
                    gate: index,
                    groups: groups.len(),
                });
                compressed_complete = false;
                continue;
            }
            nonlocal.push((index, trigger_sets(c, index, l)?));
        }
    }

    let mut standard = Vec::new();
    let mut dependent = Vec::new();
    let mut independent = Vec::new();
    for (index, d) in &nonlocal {
        let (k1, k2) = (d.c1.len(), d.c2.len());
        let expanded = 1u64 << (d.r1 + d.r2);
        standard.push(GateCost {
            gate: *index,
            count: expanded,
            probability: pow(&baseline, expanded),
            ancillas: None,
            legality: None,
        });
        dependent.push(GateCost {
            gate: *index,
            count: 1,
            probability: success_probability(
                SchemeKind::StateDependent,
                k1,
                k2,
                BsmModel::LinearOptics,
            ),
            ancillas: Some(2),
            legality: Some(legality_state_dependent(c, *index, l)?),
        });
        independent.push(GateCost {
            gate: *index,
            count: (k1 + k2) as u64,
            probability: success_probability(
                SchemeKind::StateIndependent,
                k1,
                k2,
                BsmModel::LinearOptics,
            ),
            ancillas: Some(2 * (k1 + k2) as u64 + 2),
            legality: None,
        });
    }

    let rows = alloc::vec![
        row(Backend::Uncompressed, uncompressed, baseline_complete),
        row(Backend::Standard, standard, compressed_complete),
        row(Backend::StateDependent, dependent, compressed_complete),
        row(Backend::StateIndependent, independent, compressed_complete),
    ];
    Ok(CostReport {
        rows,
        nonlocal,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::{Gate, GateKind};
    use alloc::vec;

    #[test]
    fn empty_circuit_costs_nothing() {
        let c = Circuit::new(3, vec![]).unwrap();
        let r = cost_report(&c, &QuditLayout::trivial(3)).unwrap();
        for row in &r.rows {
            assert_eq!(row.nonlocal_gate_count, 0);
            assert!(row.success_probability.is_one());
            assert!(row.legal && row.complete);
        }
    }

    #[test]
    fn single_mcz_with_two_removed_each() {
        // groups (q0 q1 q2)(q3 q4 q5), gate MCZ(q0, q3): r1 = r2 = 2
        let c = Circuit::new(6, vec![Gate::new(GateKind::Mcz, [0, 3])]).unwrap();
        let l = QuditLayout::new(vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let r = cost_report(&c, &l).unwrap();
        assert_eq!(r.row(Backend::Standard).nonlocal_gate_count, 16);
        assert_eq!(r.row(Backend::StateIndependent).nonlocal_gate_count, 8);
        assert_eq!(r.row(Backend::StateIndependent).ancilla_count, Some(18));
        assert_eq!(r.row(Backend::Uncompressed).nonlocal_gate_count, 1);
    }

    #[test]
    fn diagnostics_are_reported() {
        let c = Circuit::new(4, vec![Gate::new(GateKind::Mcz, [0, 1, 2, 3])]).unwrap();
        let r = cost_report(&c, &QuditLayout::trivial(4)).unwrap();
        assert_eq!(r.diagnostics.len(), 2);
        assert!(r.rows.iter().all(|row| !row.complete));
    }
}
