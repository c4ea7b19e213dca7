use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{
    locality, trigger_sets, Backend, Circuit, CompressError, GateKind, Locality, QuditLayout,
};
use crate::mcz::{u_mcz, BsmModel};
use crate::qstate::{apply_matrix, hadamard, Matrix, PureState, StateError};
use crate::schemes::{run_state_dependent_on, run_state_independent_on, Execution, SchemeError};
use crate::TOLERANCE;

/// Qubit matrix of a gate over `n` operands, first operand most significant.
pub fn gate_matrix(kind: GateKind, n: usize) -> Matrix {
    let dim = 1usize << n;
    match kind {
        GateKind::H => hadamard().matrix().clone(),
        GateKind::Z | GateKind::Cz | GateKind::Ccz | GateKind::Mcz => {
            let mut diag = vec![Complex64::new(1.0, 0.0); dim];
            diag[dim - 1] = Complex64::new(-1.0, 0.0);
            Matrix::from_diagonal(&diag)
        }
        GateKind::X | GateKind::Cx | GateKind::Ccx | GateKind::Mcx => {
            let controls = dim - 2;
            let image: Vec<usize> = (0..dim)
                .map(|i| if i & controls == controls { i ^ 1 } else { i })
                .collect();
            Matrix::permutation(&image).expect("a bit flip is a permutation")
        }
    }
}

/// Qubit-level view of a qudit register: qubits in the layout's concatenated order.
struct Views {
    qudit_dims: Vec<usize>,
    /// circuit qubit -> position in the concatenated order
    position: Vec<usize>,
    concatenated: Vec<usize>,
}

impl Views {
    fn new(l: &QuditLayout) -> Self {
        let concatenated = l.concatenated();
        let mut position = vec![0; concatenated.len()];
        for (pos, &q) in concatenated.iter().enumerate() {
            position[q] = pos;
        }
        Self {
            qudit_dims: l.dims(),
            position,
            concatenated,
        }
    }

    fn qubit_dims(&self) -> Vec<usize> {
        vec![2; self.position.len()]
    }

    fn apply_qubit_gate(
        &self,
        register: &PureState,
        matrix: &Matrix,
        operands: &[usize],
    ) -> Result<PureState, StateError> {
        let qubits = register.reshape(self.qubit_dims())?;
        let target: Vec<usize> = operands.iter().map(|&q| self.position[q]).collect();
        apply_matrix(&qubits, matrix, &target)?.reshape(self.qudit_dims.clone())
    }
}

/// Runs the compressed circuit on a qubit-register input (circuit order).
///
/// Returns the output in circuit order and the product of the success
/// probabilities of every non-local gate realization.
pub fn run_compressed(
    c: &Circuit,
    l: &QuditLayout,
    backend: Backend,
    model: BsmModel,
    input: &PureState,
) -> Result<(PureState, f64), CompressError> {
    let views = Views::new(l);
    let state_err = |gate: usize| {
        move |e: StateError| CompressError::Scheme {
            gate,
            source: SchemeError::State(e),
        }
    };
    let mut register = input
        .permute(&views.concatenated)
        .and_then(|s| s.reshape(views.qudit_dims.clone()))
        .map_err(state_err(0))?;
    let mut probability = 1.0;

    for (index, gate) in c.gates().iter().enumerate() {
        let direct =
            backend == Backend::Uncompressed || matches!(locality(gate, l), Locality::Local(_));
        if direct {
            let m = gate_matrix(gate.kind, gate.operands.len());
            register = views
                .apply_qubit_gate(&register, &m, &gate.operands)
                .map_err(state_err(index))?;
            continue;
        }
        let d = trigger_sets(c, index, l)?;
        let h = hadamard().matrix().clone();
        if let Some(t) = d.conjugated {
            register = views
                .apply_qubit_gate(&register, &h, &[t])
                .map_err(state_err(index))?;
        }
        let (g1, g2) = d.groups;
        let wrap = |source| CompressError::Scheme {
            gate: index,
            source,
        };
        register = match backend {
            Backend::Uncompressed | Backend::Standard => u_mcz(&d.c1, &d.c2)
                .on([g1, g2])
                .apply(&register)
                .map_err(state_err(index))?,
            Backend::StateDependent | Backend::StateIndependent => {
                let result = if backend == Backend::StateDependent {
                    run_state_dependent_on(&register, g1, g2, &d.c1, &d.c2, model)
                } else {
                    run_state_independent_on(
                        &register,
                        g1,
                        g2,
                        &d.c1,
                        &d.c2,
                        model,
                        Execution::Logical,
                    )
                }
                .map_err(wrap)?;
                probability *= result.success_probability.value;
                result
                    .output()
                    .cloned()
                    .ok_or(wrap(SchemeError::NoHeraldedBranch))?
            }
        };
        if let Some(t) = d.conjugated {
            register = views
                .apply_qubit_gate(&register, &h, &[t])
                .map_err(state_err(index))?;
        }
    }

    let output = register
        .reshape(views.qubit_dims())
        .and_then(|s| s.permute(&views.position))
        .map_err(state_err(c.gates().len()))?;
    Ok((output, probability))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEntry {
    pub input: usize,
    /// Basis index of the output, `None` if the output is not a basis state.
    pub output: Option<usize>,
    pub probability: f64,
}

/// Classical truth table of a compressed circuit (qubit 0 is the most
/// significant bit of every index).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationMap {
    pub qubits: usize,
    pub backend: Backend,
    pub entries: Vec<SimEntry>,
}

impl SimulationMap {
    pub fn classical_output(&self, input: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.input == input)
            .and_then(|e| e.output)
    }
}

/// Runs every computational basis input through the compressed circuit.
pub fn simulate_compressed(
    c: &Circuit,
    l: &QuditLayout,
    backend: Backend,
    model: BsmModel,
) -> Result<SimulationMap, CompressError> {
    let n = c.qubit_count();
    let mut entries = Vec::with_capacity(1 << n);
    for input in 0..1usize << n {
        let basis =
            PureState::basis_index(vec![2; n], input).map_err(|e| CompressError::Scheme {
                gate: 0,
                source: SchemeError::State(e),
            })?;
        let (out, probability) = run_compressed(c, l, backend, model, &basis)?;
        entries.push(SimEntry {
            input,
            output: out.dominant_basis_index(TOLERANCE),
            probability,
        });
    }
    Ok(SimulationMap {
        qubits: n,
        backend,
        entries,
    })
}
