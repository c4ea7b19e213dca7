//! Gate oracles and the building blocks shared by both realizations:
//! ancilla preparation, the `O` transformation, Bell-state measurement and
//! feedforward corrections.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::optics::CERTAIN_FAILURE;
use crate::probability::ratio;
use crate::qstate::{gram_schmidt_complement, Matrix, PureState, StateError, Unitary};
use crate::trigger::{TriggerError, TriggerSet};
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GateError {
    #[error("subsystem {subsystem} has dimension {dim}; a qubit is required")]
    NotQubit { subsystem: usize, dim: usize },
    #[error("register needs at least {needed} subsystems, found {found}")]
    TooFewSubsystems { needed: usize, found: usize },
    #[error("input dimension {found} does not match trigger set dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ξ has weight {0:e} on level k; it must be orthogonal to |k⟩")]
    XiNotOrthogonal(f64),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Trigger(#[from] TriggerError),
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Two-level CZ: `-1` only on `|d-1, d-1⟩`.
pub fn u_cz(d: usize) -> Result<Unitary, GateError> {
    let top = TriggerSet::top(d)?;
    Ok(u_mcz(&top, &top))
}

/// Multi-level CZ: `-1` on every `|m, n⟩` with `m ∈ C1`, `n ∈ C2`.
pub fn u_mcz(c1: &TriggerSet, c2: &TriggerSet) -> Unitary {
    let d2 = c2.dim();
    let mut diag = vec![real(1.0); c1.dim() * d2];
    for &m in c1.indices() {
        for &n in c2.indices() {
            diag[m * d2 + n] = real(-1.0);
        }
    }
    Unitary::from_matrix_unchecked(Matrix::from_diagonal(&diag))
}

/// `I - 2 Σ_{m∈C} |m⟩⟨m|` on one qudit.
pub fn correction_unitary(c: &TriggerSet) -> Unitary {
    let diag: Vec<Complex64> = (0..c.dim())
        .map(|m| real(if c.contains(m) { -1.0 } else { 1.0 }))
        .collect();
    Unitary::from_matrix_unchecked(Matrix::from_diagonal(&diag))
}

/// Trigger amplitudes of `psi` gathered into ancilla levels.
#[derive(Clone, Debug, PartialEq)]
pub struct Xi {
    /// Normalized `ξ` over `k + 1` levels; level `k` is always empty.
    pub state: PureState,
    /// Weight `P` of `psi` on the trigger levels.
    pub weight: f64,
    /// True when `P = 0` and `ξ` fell back to the uniform superposition.
    pub fallback: bool,
}

/// `ξ = (1/√P) Σ_i β_{c_i} |i⟩`, or the uniform superposition over `0..k`
/// when `psi` has no trigger support.
pub fn xi(psi: &PureState, c: &TriggerSet) -> Result<Xi, GateError> {
    check_qudit(psi, c)?;
    let k = c.len();
    let mut amps = vec![Complex64::zero(); k + 1];
    for (i, &ci) in c.indices().iter().enumerate() {
        amps[i] = psi.amps()[ci];
    }
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if weight < CERTAIN_FAILURE {
        let u = 1.0 / libm::sqrt(k as f64);
        let mut uniform = vec![real(u); k];
        uniform.push(Complex64::zero());
        return Ok(Xi {
            state: PureState::new(vec![k + 1], uniform)?,
            weight,
            fallback: true,
        });
    }
    let (state, _) = PureState::new(vec![k + 1], amps)?.normalized()?;
    Ok(Xi {
        state,
        weight,
        fallback: false,
    })
}

/// The ancilla `(|ξ⟩ + |k⟩)/√2` paired with `psi`.
pub fn ancilla_state(psi: &PureState, c: &TriggerSet) -> Result<PureState, GateError> {
    let xi = xi(psi, c)?;
    let k = c.len();
    let mut amps: Vec<Complex64> = xi
        .state
        .amps()
        .iter()
        .map(|a| a * core::f64::consts::FRAC_1_SQRT_2)
        .collect();
    amps[k] = real(core::f64::consts::FRAC_1_SQRT_2);
    Ok(PureState::new(vec![k + 1], amps)?)
}

/// Ancillas for qudits 1 and 2; reads the input amplitudes.
pub fn prepare_ancillas(
    psi1: &PureState,
    psi2: &PureState,
    c1: &TriggerSet,
    c2: &TriggerSet,
) -> Result<(PureState, PureState), GateError> {
    Ok((ancilla_state(psi1, c1)?, ancilla_state(psi2, c2)?))
}

/// `O = |0⟩⟨k| + |1⟩⟨ξ| + Σ_{j≥2} |j⟩⟨v_j|`, the `v_j` completing the basis.
pub fn build_o(xi: &PureState, k: usize) -> Result<Unitary, GateError> {
    if xi.dims() != [k + 1] {
        return Err(GateError::DimensionMismatch {
            expected: k + 1,
            found: xi.len(),
        });
    }
    let leak = xi.amps()[k].norm_sqr();
    if leak > TOLERANCE {
        return Err(GateError::XiNotOrthogonal(leak));
    }
    let top = PureState::basis(vec![k + 1], &[k])?;
    let fixed = [top, xi.clone()];
    let rest = gram_schmidt_complement(&fixed, k + 1)?;
    let rows: Vec<&[Complex64]> = fixed.iter().chain(rest.iter()).map(|v| v.amps()).collect();
    Ok(Unitary::new(Matrix::from_bras(&rows)?)?)
}

/// Post-`O` form of a qudit paired with its resource qubit:
/// `Σ_{m∉C} β_m |m⟩|0⟩ + Σ_{m∈C} β_m |m⟩|1⟩`.
pub fn expected_resource(psi: &PureState, c: &TriggerSet) -> Result<PureState, GateError> {
    check_qudit(psi, c)?;
    let mut amps = vec![Complex64::zero(); 2 * c.dim()];
    for (m, &b) in psi.amps().iter().enumerate() {
        amps[2 * m + usize::from(c.contains(m))] = b;
    }
    Ok(PureState::new(vec![c.dim(), 2], amps)?)
}

fn check_qudit(psi: &PureState, c: &TriggerSet) -> Result<(), GateError> {
    if psi.dims() != [c.dim()] {
        return Err(GateError::DimensionMismatch {
            expected: c.dim(),
            found: psi.len(),
        });
    }
    Ok(())
}

/// The four Bell states of two qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn vector(self) -> PureState {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let amps = match self {
            BellOutcome::PhiPlus => [h, 0.0, 0.0, h],
            BellOutcome::PhiMinus => [h, 0.0, 0.0, -h],
            BellOutcome::PsiPlus => [0.0, h, h, 0.0],
            BellOutcome::PsiMinus => [0.0, h, -h, 0.0],
        };
        PureState::new(vec![2, 2], amps.iter().map(|&a| real(a)).collect())
            .expect("Bell vector has four amplitudes")
    }

    /// Which of the two corrections `(U1, U2)` this outcome calls for.
    pub fn corrections(self) -> (bool, bool) {
        match self {
            BellOutcome::PhiPlus => (false, false),
            BellOutcome::PhiMinus => (true, false),
            BellOutcome::PsiPlus => (false, true),
            BellOutcome::PsiMinus => (true, true),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "Φ+",
            BellOutcome::PhiMinus => "Φ-",
            BellOutcome::PsiPlus => "Ψ+",
            BellOutcome::PsiMinus => "Ψ-",
        }
    }

    /// ASCII name used in machine-readable output.
    pub fn name(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "phi+",
            BellOutcome::PhiMinus => "phi-",
            BellOutcome::PsiPlus => "psi+",
            BellOutcome::PsiMinus => "psi-",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == name || o.symbol() == name)
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Subset of Bell outcomes a measurement device can herald.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HeraldSet([bool; 4]);

impl HeraldSet {
    pub fn new(outcomes: impl IntoIterator<Item = BellOutcome>) -> Self {
        let mut set = [false; 4];
        for o in outcomes {
            set[o.index()] = true;
        }
        Self(set)
    }

    pub fn contains(&self, o: BellOutcome) -> bool {
        self.0[o.index()]
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = BellOutcome> + '_ {
        BellOutcome::ALL.into_iter().filter(|o| self.contains(*o))
    }
}

impl fmt::Debug for HeraldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for HeraldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, o) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str("}")
    }
}

/// Bell-state measurement device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BsmModel {
    /// Resolves all four Bell states.
    Ideal,
    /// Heralds only `Ψ+` and `Ψ-`.
    LinearOptics,
    /// Heralds an arbitrary subset.
    Custom(HeraldSet),
}

impl BsmModel {
    pub fn heralds(&self) -> HeraldSet {
        match self {
            BsmModel::Ideal => HeraldSet::new(BellOutcome::ALL),
            BsmModel::LinearOptics => HeraldSet::new([BellOutcome::PsiPlus, BellOutcome::PsiMinus]),
            BsmModel::Custom(set) => *set,
        }
    }

    /// Fraction of the four Bell outcomes that are heralded.
    pub fn herald_fraction(&self) -> BigRational {
        ratio(self.heralds().len() as u64, 4)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BsmModel::Ideal => "ideal",
            BsmModel::LinearOptics => "linear-optics",
            BsmModel::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for BsmModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BsmModel::Custom(set) => write!(f, "custom{set}"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BsmLabel {
    Bell(BellOutcome),
    Fail,
}

impl fmt::Display for BsmLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BsmLabel::Bell(o) => write!(f, "{o}"),
            BsmLabel::Fail => f.write_str("fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsmOutcome {
    pub label: BsmLabel,
    pub probability: f64,
    /// Renormalized state on the unmeasured subsystems; `None` for `Fail`
    /// and for heralded outcomes of zero probability.
    pub state: Option<PureState>,
}

/// Bell-state measurement on the last two subsystems, which must be qubits.
///
/// Heralded outcomes come first in `Φ+, Φ-, Ψ+, Ψ-` order, followed by one
/// `Fail` entry collecting the rest when the model is not ideal.
pub fn bsm(state: &PureState, model: BsmModel) -> Result<Vec<BsmOutcome>, GateError> {
    let n = state.subsystem_count();
    if n < 3 {
        return Err(GateError::TooFewSubsystems {
            needed: 3,
            found: n,
        });
    }
    let measured = [n - 2, n - 1];
    for &s in &measured {
        let dim = state.dims()[s];
        if dim != 2 {
            return Err(GateError::NotQubit { subsystem: s, dim });
        }
    }
    let heralds = model.heralds();
    let mut outcomes = Vec::with_capacity(5);
    let mut failed = 0.0;
    for o in BellOutcome::ALL {
        let branch = state.project(&measured, &o.vector())?;
        let p = branch.norm_sqr();
        if !heralds.contains(o) {
            failed += p;
            continue;
        }
        let collapsed = if p < CERTAIN_FAILURE {
            None
        } else {
            Some(branch.normalized()?.0)
        };
        outcomes.push(BsmOutcome {
            label: BsmLabel::Bell(o),
            probability: p,
            state: collapsed,
        });
    }
    if heralds.len() < 4 {
        outcomes.push(BsmOutcome {
            label: BsmLabel::Fail,
            probability: failed,
            state: None,
        });
    }
    Ok(outcomes)
}

/// Applies the corrections called for by `outcome`: `U1` built from `c1` on
/// subsystem `s1` and `U2` built from `c2` on subsystem `s2`.
pub fn feedforward(
    state: &PureState,
    outcome: BellOutcome,
    (c1, s1): (&TriggerSet, usize),
    (c2, s2): (&TriggerSet, usize),
) -> Result<PureState, GateError> {
    let (first, second) = outcome.corrections();
    let mut out = state.clone();
    if first {
        out = correction_unitary(c1).on([s1]).apply(&out)?;
    }
    if second {
        out = correction_unitary(c2).on([s2]).apply(&out)?;
    }
    Ok(out)
}
