use std::collections::BTreeMap;

use log::debug;

use crate::circuit::{Basis, Circuit, Gate, SingleQubitOp};
use crate::error::{invalid, Error, Result};
use crate::linalg::{c, embed, kron, outer, pauli, trace, CMatrix, CVector};

use super::{check_initial, Distribution, NoiseModel, PRUNE_THRESHOLD};

const MAX_QUBITS: usize = 5;
const TRACE_TOL: f64 = 1e-9;

/// `ρ ↦ (1−p)ρ + p/(4^k−1) Σ PρP` over the non-identity Pauli strings on `qubits`.
pub fn apply_depolarizing(rho: &CMatrix, qubits: &[usize], p: f64, num_qubits: usize) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("depolarizing probability {p} outside [0, 1]")));
    }
    if !(1..=2).contains(&qubits.len()) {
        return Err(invalid("depolarizing acts on one or two qubits"));
    }
    if p == 0.0 {
        return Ok(rho.clone());
    }
    let k = qubits.len();
    let terms = (1usize << (2 * k)) - 1;
    let mut acc = CMatrix::zeros(rho.nrows(), rho.ncols());
    for idx in 1..=terms {
        let local = if k == 1 {
            pauli(idx)
        } else {
            kron(&pauli(idx / 4), &pauli(idx % 4))
        };
        let op = embed(&local, qubits, num_qubits);
        acc += &op * rho * op.adjoint();
    }
    Ok(rho * c(1.0 - p) + acc * c(p / terms as f64))
}

fn projector(qubit: usize, k: usize, basis: Basis, n: usize) -> CMatrix {
    let v = match (basis, k) {
        (Basis::Z, 0) => [1.0, 0.0],
        (Basis::Z, _) => [0.0, 1.0],
        (Basis::X, 0) => [std::f64::consts::FRAC_1_SQRT_2; 2],
        (Basis::X, _) => [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    };
    embed(&outer(&CVector::from_vec(v.map(c).to_vec())), &[qubit], n)
}

fn initial_density(qubits: &[CVector], prep_fail: f64) -> CMatrix {
    let mixed = CMatrix::identity(2, 2) * c(0.5);
    qubits.iter().fold(CMatrix::from_element(1, 1, c(1.0)), |acc, q| {
        let rho = outer(q) * c(1.0 - prep_fail) + &mixed * c(prep_fail);
        kron(&acc, &rho)
    })
}

/// Record distribution of the circuit under gate depolarizing noise and
/// preparation failure. Measurements and resets are ideal.
pub fn run_density(circuit: &Circuit, qubits: &[CVector], noise: &NoiseModel) -> Result<Distribution> {
    check_initial(circuit, qubits)?;
    let n = circuit.num_qubits();
    if n > MAX_QUBITS {
        return Err(invalid(format!("density engine supports at most {MAX_QUBITS} qubits")));
    }
    // Unnormalized branch operators keyed by record; the trace is the probability.
    let mut branches: BTreeMap<Vec<u8>, CMatrix> = BTreeMap::new();
    branches.insert(vec![0; circuit.num_cbits()], initial_density(qubits, noise.prep_fail()));
    let mut pruned = 0.0;

    let noisy = |g: &Gate, rho: CMatrix| -> Result<CMatrix> {
        let u = embed(&g.local_matrix().expect("unitary gate"), &g.qubits(), n);
        let rho = &u * rho * u.adjoint();
        let p = if g.is_two_qubit() { noise.p2() } else { noise.p1() };
        apply_depolarizing(&rho, &g.qubits(), p, n)
    };

    for gate in circuit.gates() {
        let mut next: BTreeMap<Vec<u8>, CMatrix> = BTreeMap::new();
        for (record, rho) in branches {
            match gate {
                Gate::Measure { qubit, basis, cbit } => {
                    for k in 0..2 {
                        let proj = projector(*qubit, k, *basis, n);
                        let part = &proj * &rho * &proj;
                        let w = trace(&part).re;
                        if w < PRUNE_THRESHOLD {
                            pruned += w.max(0.0);
                            continue;
                        }
                        let mut r = record.clone();
                        r[*cbit] = k as u8;
                        *next.entry(r).or_insert_with(|| CMatrix::zeros(rho.nrows(), rho.ncols())) += part;
                    }
                }
                Gate::Reset { qubit } => {
                    let flip = embed(&SingleQubitOp::X.matrix(), &[*qubit], n);
                    let p0 = projector(*qubit, 0, Basis::Z, n);
                    let p1 = projector(*qubit, 1, Basis::Z, n);
                    let out = &p0 * &rho * &p0 + &flip * &p1 * &rho * &p1 * &flip;
                    next.insert(record, out);
                }
                Gate::Conditioned { cbit, value, gate: inner } => {
                    let out = if record[*cbit] == *value { noisy(inner, rho)? } else { rho };
                    next.insert(record, out);
                }
                g => {
                    let out = noisy(g, rho)?;
                    next.insert(record, out);
                }
            }
        }
        branches = next;
    }
    if pruned > 0.0 {
        debug!("pruned {pruned:e} probability in density branches");
    }
    let dist: Distribution = branches.into_iter().map(|(r, rho)| (r, trace(&rho).re)).collect();
    let total: f64 = dist.values().sum::<f64>() + pruned;
    if (total - 1.0).abs() > TRACE_TOL {
        return Err(Error::Consistency(format!("density trace drifted to {total}")));
    }
    Ok(dist)
}
