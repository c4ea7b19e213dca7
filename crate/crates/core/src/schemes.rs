//! End-to-end multi-level CZ realizations.
//!
//! Both schemes enumerate every Bell outcome exactly. Each stage whose
//! probability follows a closed-form law is checked against it, and a
//! mismatch is an error rather than a silently different number.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;

use crate::mcz::{self, bsm, build_o, feedforward, BellOutcome, BsmLabel, BsmModel, GateError};
use crate::optics::{route_through_smr, smr_kraus, OpticsError};
use crate::probability::{pow, ratio, Probability};
use crate::qstate::{
    apply_matrix, fidelity_up_to_phase, hadamard, tensor, PureState, StateError, Unitary,
};
use crate::trigger::{TriggerError, TriggerSet};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("{stage} probability {found:e} violates its law {expected:e}")]
    LawViolation {
        stage: &'static str,
        expected: f64,
        found: f64,
    },
    #[error("heralded branches disagree (fidelity {0:e})")]
    BranchMismatch(f64),
    #[error("no Bell outcome was heralded")]
    NoHeraldedBranch,
    #[error("subsystems {0} and {1} must be distinct")]
    SameSubsystem(usize, usize),
    #[error("subsystem {subsystem} has dimension {found}, trigger set expects {expected}")]
    DimensionMismatch {
        subsystem: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Trigger(#[from] TriggerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    StateDependent,
    StateIndependent,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::StateDependent => "state-dependent",
            SchemeKind::StateIndependent => "state-independent",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the state-independent scheme realizes its internal two-level CZ gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    /// Apply the verified gate unitary and charge its probability symbolically.
    #[default]
    Logical,
    /// Run every internal gate through routers, post-selection and a BSM.
    Optical,
}

impl Execution {
    pub fn name(&self) -> &'static str {
        match self {
            Execution::Logical => "logical",
            Execution::Optical => "optical",
        }
    }
}

/// One heralded Bell outcome after feedforward.
#[derive(Clone, Debug, PartialEq)]
pub struct HeraldedBranch {
    pub outcome: BellOutcome,
    /// Absolute probability of reaching this branch.
    pub probability: f64,
    pub output: PureState,
    /// Fidelity of `output` with the ideal gate applied to the input.
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeResult {
    pub kind: SchemeKind,
    pub model: BsmModel,
    pub execution: Execution,
    pub branches: Vec<HeraldedBranch>,
    /// Probability of passing every stage before the final BSM.
    pub postselection: Probability,
    pub success_probability: Probability,
    pub ancilla_count: usize,
    pub nonlocal_gate_count: usize,
}

impl SchemeResult {
    /// Corrected output of the first heralded branch.
    pub fn output(&self) -> Option<&PureState> {
        self.branches.first().map(|b| &b.output)
    }

    /// Worst fidelity over heralded branches, `None` when nothing is heralded.
    pub fn min_fidelity(&self) -> Option<f64> {
        self.branches
            .iter()
            .map(|b| b.fidelity)
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn is_correct(&self) -> bool {
        self.min_fidelity().is_some_and(|f| f >= 1.0 - TOLERANCE)
    }
}

/// Closed-form success probability.
///
/// State-dependent: `¼·h`. State-independent: `(¼·h)^(k1+k2) · h`, where `h`
/// is the fraction of Bell outcomes the model heralds.
pub fn success_probability(kind: SchemeKind, k1: usize, k2: usize, model: BsmModel) -> BigRational {
    let h = model.herald_fraction();
    match kind {
        SchemeKind::StateDependent => ratio(1, 4) * h,
        SchemeKind::StateIndependent => {
            let per_gate = ratio(1, 4) * &h;
            pow(&per_gate, (k1 + k2) as u64) * h
        }
    }
}

fn check_law(stage: &'static str, p: &Probability) -> Result<(), SchemeError> {
    if p.is_consistent() {
        Ok(())
    } else {
        Err(SchemeError::LawViolation {
            stage,
            expected: p.exact_f64(),
            found: p.value,
        })
    }
}

/// Qudit routed against its ancilla, then `O`, restricted to two ancilla levels.
///
/// Returns the `[d, 2]` resource state and the router's coincidence probability.
pub fn state_dependent_resource(
    psi: &PureState,
    c: &TriggerSet,
) -> Result<(PureState, f64), SchemeError> {
    let ancilla = mcz::ancilla_state(psi, c)?;
    let xi = mcz::xi(psi, c)?;
    let routed = route_through_smr(psi, &ancilla, c)?;
    check_law(
        "router coincidence",
        &Probability::measured(ratio(1, 2), routed.probability),
    )?;
    let o = build_o(&xi.state, c.len())?.on([1]);
    let resource = o.apply(&routed.state)?.restrict(1, 2)?;
    Ok((resource, routed.probability))
}

/// Runs Bell measurement and feedforward on `[.., a3, a4]` with H already applied.
fn complete(
    state: &PureState,
    model: BsmModel,
    (c1, s1): (&TriggerSet, usize),
    (c2, s2): (&TriggerSet, usize),
    target: &PureState,
    scale: f64,
) -> Result<(Vec<HeraldedBranch>, f64), SchemeError> {
    let mut branches = Vec::new();
    let mut heralded = 0.0;
    for outcome in bsm(state, model)? {
        let BsmLabel::Bell(bell) = outcome.label else {
            continue;
        };
        heralded += outcome.probability;
        let Some(collapsed) = outcome.state else {
            continue;
        };
        let output = feedforward(&collapsed, bell, (c1, s1), (c2, s2))?;
        let fidelity = fidelity_up_to_phase(&output, target)?;
        branches.push(HeraldedBranch {
            outcome: bell,
            probability: outcome.probability * scale,
            output,
            fidelity,
        });
    }
    Ok((branches, heralded))
}

/// The state-dependent scheme on a product input.
pub fn run_state_dependent(
    psi1: &PureState,
    psi2: &PureState,
    c1: &TriggerSet,
    c2: &TriggerSet,
    model: BsmModel,
) -> Result<SchemeResult, SchemeError> {
    let (r1, p1) = state_dependent_resource(psi1, c1)?;
    let (r2, p2) = state_dependent_resource(psi2, c2)?;
    let postselection = Probability::measured(ratio(1, 4), p1 * p2);
    check_law("joint coincidence", &postselection)?;

    // [q1, a3, q2, a4] -> [q1, q2, a3, a4]
    let joint = tensor(&r1, &r2).permute(&[0, 2, 1, 3])?;
    let joint = hadamard().on([3]).apply(&joint)?;
    let target = mcz::u_mcz(c1, c2).apply(&tensor(psi1, psi2))?;
    let (branches, heralded) = complete(&joint, model, (c1, 0), (c2, 1), &target, p1 * p2)?;

    let success = Probability::measured(
        success_probability(SchemeKind::StateDependent, c1.len(), c2.len(), model),
        p1 * p2 * heralded,
    );
    check_law("success", &success)?;
    Ok(SchemeResult {
        kind: SchemeKind::StateDependent,
        model,
        execution: Execution::Optical,
        branches,
        postselection,
        success_probability: success,
        ancilla_count: 2,
        nonlocal_gate_count: 1,
    })
}

/// The state-dependent scheme between subsystems `s1` and `s2` of a larger
/// register. Both qudits must be unentangled with everything else.
pub fn run_state_dependent_on(
    register: &PureState,
    s1: usize,
    s2: usize,
    c1: &TriggerSet,
    c2: &TriggerSet,
    model: BsmModel,
) -> Result<SchemeResult, SchemeError> {
    check_pair(register, s1, s2, c1, c2)?;
    let n = register.subsystem_count();
    let (f1, rest) = register.factor(s1)?;
    let (f2, rest) = if n == 2 {
        (rest.normalized()?.0, None)
    } else {
        let (f2, rest) = rest.factor(s2 - usize::from(s2 > s1))?;
        (f2, Some(rest.normalized()?.0))
    };
    let mut result = run_state_dependent(&f1, &f2, c1, c2, model)?;

    // combined order is [s1, s2, rest...]; map back to the register's order
    let mut order = vec![0; n];
    let mut next = 2;
    for (i, slot) in order.iter_mut().enumerate() {
        *slot = if i == s1 {
            0
        } else if i == s2 {
            1
        } else {
            next += 1;
            next - 1
        };
    }
    let target = mcz::u_mcz(c1, c2).on([s1, s2]).apply(register)?;
    for branch in &mut result.branches {
        let combined = match &rest {
            Some(rest) => tensor(&branch.output, rest),
            None => branch.output.clone(),
        };
        branch.output = combined.permute(&order)?;
        branch.fidelity = fidelity_up_to_phase(&branch.output, &target)?;
    }
    Ok(result)
}

/// `Õ = (1 ⊗ H) · Π_{s∈C} CZ(|s⟩, |1⟩) · (1 ⊗ H)` on `[qudit, qubit]`.
pub fn build_o_tilde(c: &TriggerSet) -> Result<Unitary, SchemeError> {
    let flag = TriggerSet::singleton(2, 1)?;
    let h = Unitary::identity(c.dim()).kron(&hadamard());
    Ok(h.after(&mcz::u_mcz(c, &flag)).after(&h))
}

/// `[qudit, qubit]` state after `Õ` acts on `psi ⊗ |0⟩`, plus the
/// probability of producing it.
pub fn state_independent_resource(
    psi: &PureState,
    c: &TriggerSet,
    execution: Execution,
    model: BsmModel,
) -> Result<(PureState, Probability), SchemeError> {
    let start = tensor(psi, &PureState::basis(vec![2], &[0])?);
    match execution {
        Execution::Logical => {
            let h = model.herald_fraction();
            let law = pow(&(ratio(1, 4) * h), c.len() as u64);
            Ok((build_o_tilde(c)?.apply(&start)?, Probability::exact(law)))
        }
        Execution::Optical => {
            let (state, p) = o_tilde_optical(&start, 0, 1, c, model)?;
            Ok((state, p))
        }
    }
}

/// `Õ` on subsystems `(q, a)` with each CZ run optically.
fn o_tilde_optical(
    register: &PureState,
    q: usize,
    a: usize,
    c: &TriggerSet,
    model: BsmModel,
) -> Result<(PureState, Probability), SchemeError> {
    let mut state = hadamard().on([a]).apply(register)?;
    let mut value = 1.0;
    for &level in c.indices() {
        let (next, p) = two_level_cz_optical(&state, q, a, level, model)?;
        state = next;
        value *= p;
    }
    state = hadamard().on([a]).apply(&state)?;
    let law = pow(&(ratio(1, 4) * model.herald_fraction()), c.len() as u64);
    let p = Probability::measured(law, value);
    check_law("internal gates", &p)?;
    Ok((state, p))
}

/// Two-level CZ between level `level` of qudit `q` and level 1 of qubit `a`,
/// run through two routers, coincidence post-selection, a BSM and feedforward.
///
/// Returns the corrected register and the probability of success. Every
/// heralded branch must agree.
pub fn two_level_cz_optical(
    register: &PureState,
    q: usize,
    a: usize,
    level: usize,
    model: BsmModel,
) -> Result<(PureState, f64), SchemeError> {
    let dims = register.dims();
    if q == a {
        return Err(SchemeError::SameSubsystem(q, a));
    }
    let cq = TriggerSet::singleton(dims[q], level)?;
    let ca = TriggerSet::singleton(2, 1)?;
    if dims[a] != 2 {
        return Err(GateError::NotQubit {
            subsystem: a,
            dim: dims[a],
        }
        .into());
    }
    let n = register.subsystem_count();
    let (e1, e2) = (n, n + 1);
    // singleton ancillas are (|0⟩ + |1⟩)/√2 whatever the input
    let plus = PureState::qudit_real(&[1.0, 1.0])?;
    let extended = tensor(&tensor(register, &plus), &plus);

    let routed = apply_matrix(&extended, &smr_kraus(&cq)?, &[q, e1])?;
    let routed = apply_matrix(&routed, &smr_kraus(&ca)?, &[a, e2])?;
    let (routed, coincidence) = routed.normalized()?;
    check_law(
        "internal coincidence",
        &Probability::measured(ratio(1, 4), coincidence),
    )?;

    let swap = build_o(&PureState::basis(vec![2], &[0])?, 1)?;
    let mut state = swap.clone().on([e1]).apply(&routed)?;
    state = swap.on([e2]).apply(&state)?;
    state = hadamard().on([e2]).apply(&state)?;

    let mut reference: Option<PureState> = None;
    let mut heralded = 0.0;
    for outcome in bsm(&state, model)? {
        let BsmLabel::Bell(bell) = outcome.label else {
            continue;
        };
        heralded += outcome.probability;
        let Some(collapsed) = outcome.state else {
            continue;
        };
        let fixed = feedforward(&collapsed, bell, (&cq, q), (&ca, a))?;
        match &reference {
            None => reference = Some(fixed),
            Some(r) => {
                let f = fidelity_up_to_phase(r, &fixed)?;
                if f < 1.0 - TOLERANCE {
                    return Err(SchemeError::BranchMismatch(f));
                }
            }
        }
    }
    let state = reference.ok_or(SchemeError::NoHeraldedBranch)?;
    Ok((state, coincidence * heralded))
}

/// The state-independent scheme on a product input.
pub fn run_state_independent(
    psi1: &PureState,
    psi2: &PureState,
    c1: &TriggerSet,
    c2: &TriggerSet,
    model: BsmModel,
    execution: Execution,
) -> Result<SchemeResult, SchemeError> {
    run_state_independent_joint(&tensor(psi1, psi2), c1, c2, model, execution)
}

/// The state-independent scheme on an arbitrary (possibly entangled) two-qudit input.
pub fn run_state_independent_joint(
    psi12: &PureState,
    c1: &TriggerSet,
    c2: &TriggerSet,
    model: BsmModel,
    execution: Execution,
) -> Result<SchemeResult, SchemeError> {
    run_state_independent_on(psi12, 0, 1, c1, c2, model, execution)
}

/// The state-independent scheme between subsystems `s1` and `s2` of a register.
pub fn run_state_independent_on(
    register: &PureState,
    s1: usize,
    s2: usize,
    c1: &TriggerSet,
    c2: &TriggerSet,
    model: BsmModel,
    execution: Execution,
) -> Result<SchemeResult, SchemeError> {
    check_pair(register, s1, s2, c1, c2)?;
    let n = register.subsystem_count();
    let (a3, a4) = (n, n + 1);
    let zero = PureState::basis(vec![2], &[0])?;
    let mut state = tensor(&tensor(register, &zero), &zero);

    let per_gate = ratio(1, 4) * model.herald_fraction();
    let law = pow(&per_gate, (c1.len() + c2.len()) as u64);
    let postselection = match execution {
        Execution::Logical => {
            state = build_o_tilde(c1)?.on([s1, a3]).apply(&state)?;
            state = build_o_tilde(c2)?.on([s2, a4]).apply(&state)?;
            Probability::exact(law)
        }
        Execution::Optical => {
            let (next, p1) = o_tilde_optical(&state, s1, a3, c1, model)?;
            let (next, p2) = o_tilde_optical(&next, s2, a4, c2, model)?;
            state = next;
            let p = p1.times(&p2);
            check_law("internal gates", &p)?;
            p
        }
    };

    state = hadamard().on([a4]).apply(&state)?;
    let target = mcz::u_mcz(c1, c2).on([s1, s2]).apply(register)?;
    let (branches, heralded) = complete(
        &state,
        model,
        (c1, s1),
        (c2, s2),
        &target,
        postselection.value,
    )?;

    let success = Probability::measured(
        success_probability(SchemeKind::StateIndependent, c1.len(), c2.len(), model),
        postselection.value * heralded,
    );
    check_law("success", &success)?;
    Ok(SchemeResult {
        kind: SchemeKind::StateIndependent,
        model,
        execution,
        branches,
        postselection,
        success_probability: success,
        ancilla_count: 2 * (c1.len() + c2.len()) + 2,
        nonlocal_gate_count: c1.len() + c2.len(),
    })
}

fn check_pair(
    register: &PureState,
    s1: usize,
    s2: usize,
    c1: &TriggerSet,
    c2: &TriggerSet,
) -> Result<(), SchemeError> {
    if s1 == s2 {
        return Err(SchemeError::SameSubsystem(s1, s2));
    }
    let count = register.subsystem_count();
    for (s, c) in [(s1, c1), (s2, c2)] {
        if s >= count {
            return Err(StateError::SubsystemOutOfRange { index: s, count }.into());
        }
        if register.dims()[s] != c.dim() {
            return Err(SchemeError::DimensionMismatch {
                subsystem: s,
                expected: c.dim(),
                found: register.dims()[s],
            });
        }
    }
    Ok(())
}
