use std::collections::BTreeMap;

use log::debug;

use crate::circuit::{Basis, Circuit, Gate, SingleQubitOp};
use crate::error::{Error, Result};
use crate::linalg::{embed, CVector, ZERO};

use super::{check_initial, product_state, Distribution, PRUNE_THRESHOLD};

#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    /// Normalized register state.
    pub amplitudes: CVector,
    pub record: Vec<u8>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactRun {
    pub branches: Vec<BranchState>,
    pub pruned_mass: f64,
}

impl ExactRun {
    /// Merges branches that share a record.
    pub fn distribution(&self) -> Distribution {
        let mut out = BTreeMap::new();
        for b in &self.branches {
            *out.entry(b.record.clone()).or_insert(0.0) += b.weight;
        }
        out
    }
}

fn apply(gate: &Gate, n: usize, state: &CVector) -> CVector {
    let m = gate.local_matrix().expect("unitary gate");
    embed(&m, &gate.qubits(), n) * state
}

/// Splits `state` by the Z value of `qubit`; returns (probability, normalized state).
fn project(state: &CVector, qubit: usize, n: usize) -> [(f64, CVector); 2] {
    let mask = 1 << (n - 1 - qubit);
    [0, 1].map(|k| {
        let mut v = state.clone();
        for (i, a) in v.iter_mut().enumerate() {
            if usize::from(i & mask != 0) != k {
                *a = ZERO;
            }
        }
        let p = v.norm_squared();
        if p > 0.0 {
            v /= crate::linalg::c(p.sqrt());
        }
        (p, v)
    })
}

/// Enumerates every measurement and reset branch with its exact probability.
pub fn run_exact(circuit: &Circuit, qubits: &[CVector]) -> Result<ExactRun> {
    check_initial(circuit, qubits)?;
    let n = circuit.num_qubits();
    let mut branches = vec![BranchState {
        amplitudes: product_state(qubits),
        record: vec![0; circuit.num_cbits()],
        weight: 1.0,
    }];
    let mut pruned_mass = 0.0;
    let hadamard = |q: usize| Gate::single(q, SingleQubitOp::H);

    for gate in circuit.gates() {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for b in branches {
            match gate {
                Gate::Measure { qubit, basis, cbit } => {
                    let pre = match basis {
                        Basis::Z => b.amplitudes.clone(),
                        Basis::X => apply(&hadamard(*qubit), n, &b.amplitudes),
                    };
                    for (k, (p, v)) in project(&pre, *qubit, n).into_iter().enumerate() {
                        let w = b.weight * p;
                        if w < PRUNE_THRESHOLD {
                            pruned_mass += w;
                            continue;
                        }
                        let amplitudes = match basis {
                            Basis::Z => v,
                            Basis::X => apply(&hadamard(*qubit), n, &v),
                        };
                        let mut record = b.record.clone();
                        record[*cbit] = k as u8;
                        next.push(BranchState { amplitudes, record, weight: w });
                    }
                }
                Gate::Reset { qubit } => {
                    for (k, (p, v)) in project(&b.amplitudes, *qubit, n).into_iter().enumerate() {
                        let w = b.weight * p;
                        if w < PRUNE_THRESHOLD {
                            pruned_mass += w;
                            continue;
                        }
                        let amplitudes = if k == 1 {
                            apply(&Gate::single(*qubit, SingleQubitOp::X), n, &v)
                        } else {
                            v
                        };
                        next.push(BranchState { amplitudes, record: b.record.clone(), weight: w });
                    }
                }
                Gate::Conditioned { cbit, value, gate: inner } => {
                    let amplitudes = if b.record[*cbit] == *value {
                        apply(inner, n, &b.amplitudes)
                    } else {
                        b.amplitudes
                    };
                    next.push(BranchState { amplitudes, ..b });
                }
                g => next.push(BranchState { amplitudes: apply(g, n, &b.amplitudes), ..b }),
            }
        }
        branches = next;
    }
    if pruned_mass > 0.0 {
        debug!("pruned {} branch probability below {PRUNE_THRESHOLD:e}", pruned_mass);
    }
    let total: f64 = branches.iter().map(|b| b.weight).sum();
    if (total + pruned_mass - 1.0).abs() > 1e-12 {
        return Err(Error::Consistency(format!("branch weights sum to {total}")));
    }
    Ok(ExactRun { branches, pruned_mass })
}
