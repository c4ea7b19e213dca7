use alloc::vec::Vec;
use core::fmt;

use super::CompressError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Z,
    Cx,
    Cz,
    Ccx,
    Ccz,
    /// Multi-controlled Z; operands are the controls followed by the target.
    Mcz,
    /// Multi-controlled X; operands are the controls followed by the target.
    Mcx,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::H,
        GateKind::X,
        GateKind::Z,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Ccx,
        GateKind::Ccz,
        GateKind::Mcz,
        GateKind::Mcx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Ccx => "ccx",
            GateKind::Ccz => "ccz",
            GateKind::Mcz => "mcz",
            GateKind::Mcx => "mcx",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }

    /// Exact operand count, or `None` for the variadic kinds (at least two).
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::X | GateKind::Z => Some(1),
            GateKind::Cx | GateKind::Cz => Some(2),
            GateKind::Ccx | GateKind::Ccz => Some(3),
            GateKind::Mcz | GateKind::Mcx => None,
        }
    }

    /// Flips the target; becomes Z-type after Hadamards on the target.
    pub fn is_x_type(self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cx | GateKind::Ccx | GateKind::Mcx
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub operands: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, operands: impl Into<Vec<usize>>) -> Self {
        Self {
            kind,
            operands: operands.into(),
        }
    }

    pub fn target(&self) -> usize {
        *self.operands.last().expect("validated gates have operands")
    }

    pub fn controls(&self) -> &[usize] {
        &self.operands[..self.operands.len() - 1]
    }

    pub fn is_entangling(&self) -> bool {
        self.operands.len() > 1
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name().to_ascii_uppercase())?;
        for (i, q) in self.operands.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str(")")
    }
}

/// A validated qubit circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize, gates: Vec<Gate>) -> Result<Self, CompressError> {
        for (index, gate) in gates.iter().enumerate() {
            let found = gate.operands.len();
            let arity_ok = match gate.kind.arity() {
                Some(n) => found == n,
                None => found >= 2,
            };
            if !arity_ok {
                return Err(CompressError::Arity {
                    gate: index,
                    kind: gate.kind,
                    found,
                });
            }
            for (pos, &q) in gate.operands.iter().enumerate() {
                if q >= qubits {
                    return Err(CompressError::OperandOutOfRange {
                        gate: index,
                        qubit: q,
                        qubits,
                    });
                }
                if gate.operands[..pos].contains(&q) {
                    return Err(CompressError::DuplicateOperand {
                        gate: index,
                        qubit: q,
                    });
                }
            }
        }
        Ok(Self { qubits, gates })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
}
