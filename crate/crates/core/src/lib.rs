//! Multi-level controlled-Z gates for spatial-mode photonic qudits.
//!
//! The crate is `no_std` (with `alloc`) and has four layers:
//!
//! * [`qstate`]: dense state vectors over mixed-radix qudit registers and the
//!   [`Matrix`]/[`Unitary`] types that act on them.
//! * [`optics`]: a two-photon Fock-space layer holding the selective mode router,
//!   built both as a case table and as a Mach-Zehnder mesh, with coincidence
//!   post-selection.
//! * [`mcz`] and [`schemes`]: the gate oracles (`U_CZ`, `U_MCZ`), ancilla
//!   preparation, Bell-state measurement with feedforward, and the two end-to-end
//!   realizations of the multi-level CZ gate, with exact success probabilities.
//! * [`compress`]: a qubit circuit IR, a qubit-to-qudit layout, trigger-set
//!   derivation for removed controls, and the four-backend cost model.
//!
//! Probabilities that follow a closed-form law are carried as exact rationals
//! ([`Probability`]) next to the value measured by simulation.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod compress;
pub mod mcz;
pub mod optics;
pub mod probability;
pub mod qstate;
pub mod schemes;
pub mod trigger;

pub use num_complex::Complex64;
pub use num_rational::BigRational;

pub use crate::mcz::{BellOutcome, BsmModel, BsmOutcome};
pub use crate::probability::Probability;
pub use crate::qstate::{Matrix, PureState, Unitary};
pub use crate::schemes::{Execution, SchemeKind, SchemeResult};
pub use crate::trigger::TriggerSet;

/// Entrywise tolerance used for unitarity, normalization and leakage checks.
pub const TOLERANCE: f64 = 1e-10;
