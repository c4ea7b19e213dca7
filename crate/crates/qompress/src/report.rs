//! Human tables and JSON documents for every command.
//!
//! Probabilities are always given as an exact fraction first and a float
//! second.

use std::fmt::Write;

use qompress_core::compress::{Circuit, CostReport, CostRow, QuditLayout, SimulationMap};
use qompress_core::probability::to_f64;
use qompress_core::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::claims::Claim;
use crate::verify::VerifyReport;

fn probability(p: &BigRational) -> String {
    format!("{p} ({:e})", to_f64(p))
}

fn bits(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn row_json(row: &CostRow, circuit: &Circuit) -> Value {
    json!({
        "backend": row.backend.name(),
        "nonlocal_gates": row.nonlocal_gate_count,
        "success_probability": row.success_probability.to_string(),
        "success_probability_f64": row.probability_f64(),
        "ancillas": row.ancilla_count,
        "legal": row.legal,
        "reason": row.reason,
        "complete": row.complete,
        "per_gate": row.per_gate.iter().map(|g| json!({
            "gate": g.gate,
            "name": circuit.gates()[g.gate].to_string(),
            "count": g.count,
            "probability": g.probability.to_string(),
            "ancillas": g.ancillas,
            "legality": g.legality.as_ref().map(ToString::to_string),
        })).collect::<Vec<_>>(),
    })
}

pub fn cost_json(circuit: &Circuit, layout: &QuditLayout, report: &CostReport) -> Value {
    json!({
        "layout": layout.to_string(),
        "gates": circuit.gates().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rows": report.rows.iter().map(|r| row_json(r, circuit)).collect::<Vec<_>>(),
        "nonlocal": report.nonlocal.iter().map(|(gate, d)| json!({
            "gate": gate,
            "groups": [d.groups.0, d.groups.1],
            "c1": d.c1.indices(),
            "c2": d.c2.indices(),
            "r1": d.r1,
            "r2": d.r2,
            "conjugated": d.conjugated,
        })).collect::<Vec<_>>(),
        "diagnostics": report.diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

pub fn cost_table(circuit: &Circuit, layout: &QuditLayout, report: &CostReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "layout {layout}, dims {:?}", layout.dims());
    let _ = writeln!(
        out,
        "{:<18} {:>6} {:>9}  success probability",
        "backend", "gates", "ancillas"
    );
    for row in &report.rows {
        let ancillas = row.ancilla_count.map_or("-".into(), |a| a.to_string());
        let mut line = format!(
            "{:<18} {:>6} {:>9}  {}",
            row.backend.name(),
            row.nonlocal_gate_count,
            ancillas,
            probability(&row.success_probability)
        );
        if let Some(reason) = &row.reason {
            let _ = write!(line, "  [not legal: {reason}]");
        }
        if !row.complete {
            line.push_str("  [incomplete]");
        }
        let _ = writeln!(out, "{line}");
    }
    if !report.nonlocal.is_empty() {
        let _ = writeln!(out, "\nnon-local gates");
        for (gate, d) in &report.nonlocal {
            let _ = writeln!(out, "  {gate}: {}  {d}", circuit.gates()[*gate]);
        }
        let _ = writeln!(out, "\nper gate");
        for row in &report.rows {
            for g in &row.per_gate {
                let _ = writeln!(
                    out,
                    "  {:<18} gate {} {:<12} count {:>3}  p {}{}",
                    row.backend.name(),
                    g.gate,
                    circuit.gates()[g.gate].to_string(),
                    g.count,
                    probability(&g.probability),
                    g.legality
                        .as_ref()
                        .map_or(String::new(), |l| format!("  {l}"))
                );
            }
        }
    }
    if !report.diagnostics.is_empty() {
        let _ = writeln!(out, "\ndiagnostics");
        for d in &report.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    out
}

pub fn claims_table(claims: &[Claim]) -> String {
    let mut out = String::new();
    for c in claims {
        let _ = writeln!(out, "{c}");
    }
    let passed = claims.iter().filter(|c| c.passed).count();
    let _ = writeln!(out, "{passed}/{} claims pass", claims.len());
    out
}

pub fn verify_table(r: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} scheme, {} BSM, {} execution",
        r.scheme, r.model, r.execution
    );
    let _ = writeln!(out, "d1 {} C1 {:?}, d2 {} C2 {:?}", r.d1, r.c1, r.d2, r.c2);
    let _ = writeln!(
        out,
        "samples {} (seed {}), heralded branches {}",
        r.samples, r.seed, r.branches
    );
    let _ = writeln!(out, "min fidelity {:.15}", r.min_fidelity);
    let _ = writeln!(
        out,
        "success probability {} ({:e}), expected {}",
        r.success_probability, r.success_probability_f64, r.expected_probability
    );
    let _ = writeln!(
        out,
        "ancillas {}, non-local gates {}",
        r.ancilla_count, r.nonlocal_gate_count
    );
    for e in &r.errors {
        let _ = writeln!(out, "error: {e}");
    }
    let _ = writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" });
    out
}

/// Per-input outcome of a sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct ShotCounts {
    pub input: String,
    pub output: Option<String>,
    pub shots: u64,
    pub successes: u64,
}

pub fn simulation_json(maps: &[SimulationMap], shots: Option<&[Vec<ShotCounts>]>) -> Value {
    let tables: Vec<Value> = maps
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut v = json!({
                "backend": m.backend.name(),
                "entries": m.entries.iter().map(|e| json!({
                    "input": bits(e.input, m.qubits),
                    "output": e.output.map(|o| bits(o, m.qubits)),
                    "probability": e.probability,
                })).collect::<Vec<_>>(),
            });
            if let Some(shots) = shots {
                v["shots"] = json!(shots[i]);
            }
            v
        })
        .collect();
    json!({ "backends": tables })
}

pub fn simulation_table(maps: &[SimulationMap], shots: Option<&[Vec<ShotCounts>]>) -> String {
    let mut out = String::new();
    for (i, m) in maps.iter().enumerate() {
        let _ = writeln!(out, "{}", m.backend.name());
        for (j, e) in m.entries.iter().enumerate() {
            let output = e
                .output
                .map_or("superposition".into(), |o| bits(o, m.qubits));
            let mut line = format!(
                "  {} -> {}  p {:e}",
                bits(e.input, m.qubits),
                output,
                e.probability
            );
            if let Some(shots) = shots {
                let s = &shots[i][j];
                let _ = write!(line, "  {}/{} shots heralded", s.successes, s.shots);
            }
            let _ = writeln!(out, "{line}");
        }
    }
    out
}
