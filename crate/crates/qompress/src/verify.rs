//! Oracle-equivalence check for one gate configuration.

use qompress_core::qstate::{fidelity_up_to_phase, tensor};
use qompress_core::schemes::{run_state_dependent, run_state_independent, success_probability};
use qompress_core::{
    BigRational, BsmModel, Execution, PureState, SchemeKind, TriggerSet, TOLERANCE,
};
use serde::Serialize;

use crate::sampling::{random_state, rng};

/// Multi-level CZ by direct sign flips on the amplitudes.
pub fn mcz_oracle(psi: &PureState, c1: &TriggerSet, c2: &TriggerSet) -> PureState {
    let d2 = c2.dim();
    let amps = psi
        .amps()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if c1.contains(i / d2) && c2.contains(i % d2) {
                -a
            } else {
                a
            }
        })
        .collect();
    PureState::new(psi.dims().to_vec(), amps).expect("same shape")
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub c1: TriggerSet,
    pub c2: TriggerSet,
    pub scheme: SchemeKind,
    pub model: BsmModel,
    pub execution: Execution,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub scheme: String,
    pub model: String,
    pub execution: String,
    pub d1: usize,
    pub d2: usize,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub seed: u64,
    pub samples: usize,
    pub branches: usize,
    pub min_fidelity: f64,
    pub success_probability: String,
    pub success_probability_f64: f64,
    pub expected_probability: String,
    /// Largest gap between the measured and the exact probability.
    pub probability_deviation: f64,
    pub ancilla_count: usize,
    pub nonlocal_gate_count: usize,
    pub errors: Vec<String>,
    pub passed: bool,
}

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let expected: BigRational =
        success_probability(cfg.scheme, cfg.c1.len(), cfg.c2.len(), cfg.model);
    let mut r = rng(cfg.seed);
    let mut report = VerifyReport {
        scheme: cfg.scheme.name().into(),
        model: cfg.model.to_string(),
        execution: cfg.execution.name().into(),
        d1: cfg.c1.dim(),
        d2: cfg.c2.dim(),
        c1: cfg.c1.indices().to_vec(),
        c2: cfg.c2.indices().to_vec(),
        seed: cfg.seed,
        samples: cfg.samples,
        branches: 0,
        min_fidelity: 1.0,
        success_probability: String::new(),
        success_probability_f64: 0.0,
        expected_probability: expected.to_string(),
        probability_deviation: 0.0,
        ancilla_count: 0,
        nonlocal_gate_count: 0,
        errors: Vec::new(),
        passed: false,
    };
    let mut exact_ok = true;
    for _ in 0..cfg.samples {
        let psi1 = random_state(&mut r, &[cfg.c1.dim()]);
        let psi2 = random_state(&mut r, &[cfg.c2.dim()]);
        let target = mcz_oracle(&tensor(&psi1, &psi2), &cfg.c1, &cfg.c2);
        let result = match cfg.scheme {
            SchemeKind::StateDependent => {
                run_state_dependent(&psi1, &psi2, &cfg.c1, &cfg.c2, cfg.model)
            }
            SchemeKind::StateIndependent => {
                run_state_independent(&psi1, &psi2, &cfg.c1, &cfg.c2, cfg.model, cfg.execution)
            }
        };
        let result = match result {
            Ok(result) => result,
            Err(e) => {
                report.errors.push(e.to_string());
                continue;
            }
        };
        for b in &result.branches {
            report.branches += 1;
            let f = fidelity_up_to_phase(&b.output, &target).unwrap_or(0.0);
            report.min_fidelity = report.min_fidelity.min(f);
        }
        let p = &result.success_probability;
        exact_ok &= p.exact == expected;
        report.probability_deviation = report
            .probability_deviation
            .max((p.value - p.exact_f64()).abs());
        report.success_probability = p.exact.to_string();
        report.success_probability_f64 = p.exact_f64();
        report.ancilla_count = result.ancilla_count;
        report.nonlocal_gate_count = result.nonlocal_gate_count;
    }
    report.passed = report.errors.is_empty()
        && report.branches > 0
        && exact_ok
        && report.min_fidelity >= 1.0 - TOLERANCE;
    report
}
