use std::f64::consts::FRAC_PI_2;

use crate::code::Codeword;
use crate::error::{invalid, Result};

use super::ir::{inverse_sequence, Basis, Circuit, Gate, SingleQubitOp};
use super::ustar::{decompose_u_star, decompose_u_star_multiplexed, u_star_params};

/// Register positions of the three received symbols.
pub const Q1: usize = 0;
pub const Q2: usize = 1;
pub const Q3: usize = 2;

/// Which classical bits carry the decoded values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    FirstBit { x1: usize },
    Block { x1: usize, x3: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub first_bit: u8,
    pub block: Option<Codeword>,
}

/// A decoder circuit together with the map from measurement record to estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderCircuit {
    pub circuit: Circuit,
    pub readout: Readout,
}

impl DecoderCircuit {
    pub fn decide(&self, record: &[u8]) -> Decision {
        match self.readout {
            Readout::FirstBit { x1 } => Decision { first_bit: record[x1], block: None },
            Readout::Block { x1, x3 } => {
                let (b1, b3) = (record[x1], record[x3]);
                let word = Codeword::new([b1, b1 ^ b3, b3]).expect("parity holds by construction");
                Decision { first_bit: b1, block: Some(word) }
            }
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < FRAC_PI_2 {
        Ok(())
    } else {
        Err(invalid(format!("theta = {theta} outside (0, pi/2)")))
    }
}

/// Check node on (q2, q3), then a Z measurement of q3 selecting which
/// bit-node combiner acts on (q1, q2), then an X measurement of q1.
/// Record layout: bit 0 = check parity, bit 1 = first-bit estimate.
pub fn build_first_bit_circuit(theta: f64) -> Result<DecoderCircuit> {
    check_theta(theta)?;
    let check = u_star_params(theta, theta)?;
    let branch0 = u_star_params(theta, check.theta0)?;
    let branch1 = u_star_params(theta, check.theta1)?;
    let mut circuit = Circuit::new(3, 2);
    circuit.push(Gate::cnot(Q2, Q3))?;
    circuit.push(Gate::Measure { qubit: Q3, basis: Basis::Z, cbit: 0 })?;
    for (value, params) in [(0, &branch0), (1, &branch1)] {
        for g in decompose_u_star(params, [Q1, Q2]) {
            circuit.push(Gate::conditioned(0, value, g))?;
        }
    }
    circuit.push(Gate::Measure { qubit: Q1, basis: Basis::X, cbit: 1 })?;
    Ok(DecoderCircuit { circuit, readout: Readout::FirstBit { x1: 1 } })
}

/// First-bit decoder with the parity measurement replaced by coherent control.
pub fn build_first_bit_circuit_coherent(theta: f64) -> Result<DecoderCircuit> {
    let stages = full_circuit_stages(theta)?;
    let mut circuit = Circuit::new(3, 1);
    circuit.extend(stages.check)?;
    circuit.extend(stages.combine)?;
    circuit.push(Gate::Measure { qubit: Q1, basis: Basis::X, cbit: 0 })?;
    Ok(DecoderCircuit { circuit, readout: Readout::FirstBit { x1: 0 } })
}

/// Gate lists of the full decoder, grouped by stage.
#[derive(Debug, Clone, PartialEq)]
pub struct FullStages {
    /// CNOT(q2 → q3).
    pub check: Vec<Gate>,
    /// q3-selected combiner on (q1, q2).
    pub combine: Vec<Gate>,
    /// X measurement of q1, reset, and conditioned re-preparation.
    pub first_readout: Vec<Gate>,
    /// Inverse of `combine` then `check`.
    pub uncompute: Vec<Gate>,
    /// Recomputed check and combiner, then an X measurement of q3.
    pub second_readout: Vec<Gate>,
}

impl FullStages {
    pub fn all(&self) -> impl Iterator<Item = &Gate> {
        self.check
            .iter()
            .chain(&self.combine)
            .chain(&self.first_readout)
            .chain(&self.uncompute)
            .chain(&self.second_readout)
    }
}

/// Unitary that prepares the parity-0 compressed state `|±θ_out>` from `|0>`.
pub fn reprepare_gate(theta: f64, outcome: u8) -> Result<Gate> {
    check_theta(theta)?;
    let check = u_star_params(theta, theta)?;
    let angle = u_star_params(theta, check.theta0)?.output_angle();
    let signed = if outcome == 0 { angle } else { -angle };
    Ok(Gate::single(Q1, SingleQubitOp::Ry(signed)))
}

pub fn full_circuit_stages(theta: f64) -> Result<FullStages> {
    check_theta(theta)?;
    let check_params = u_star_params(theta, theta)?;
    let branch0 = u_star_params(theta, check_params.theta0)?;
    let branch1 = u_star_params(theta, check_params.theta1)?;

    let check = vec![Gate::cnot(Q2, Q3)];
    let combine = decompose_u_star_multiplexed(&branch0, &branch1, Q3, [Q1, Q2])?;
    let first_readout = vec![
        Gate::Measure { qubit: Q1, basis: Basis::X, cbit: 0 },
        Gate::Reset { qubit: Q1 },
        Gate::conditioned(0, 0, reprepare_gate(theta, 0)?),
        Gate::conditioned(0, 1, reprepare_gate(theta, 1)?),
    ];
    let mut uncompute = inverse_sequence(&combine)?;
    uncompute.extend(inverse_sequence(&check)?);
    let mut second_readout = check.clone();
    second_readout.extend(combine.iter().cloned());
    second_readout.push(Gate::Measure { qubit: Q3, basis: Basis::X, cbit: 1 });
    Ok(FullStages { check, combine, first_readout, uncompute, second_readout })
}

/// Full block decoder. Record layout: bit 0 = first-bit estimate, bit 1 =
/// third-bit estimate; the second bit follows from parity.
pub fn build_full_circuit(theta: f64) -> Result<DecoderCircuit> {
    let stages = full_circuit_stages(theta)?;
    let mut circuit = Circuit::new(3, 2);
    circuit.extend(stages.all().cloned())?;
    Ok(DecoderCircuit { circuit, readout: Readout::Block { x1: 0, x3: 1 } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ir::sequence_matrix;
    use crate::linalg::{is_unitary, max_abs_diff, CMatrix};

    const THETA: f64 = 0.19869011034924142;

    #[test]
    fn gate_counts() {
        assert_eq!(build_first_bit_circuit(THETA).unwrap().circuit.two_qubit_gate_count(), 5);
        assert_eq!(build_full_circuit(THETA).unwrap().circuit.two_qubit_gate_count(), 21);
        assert_eq!(build_first_bit_circuit_coherent(THETA).unwrap().circuit.two_qubit_gate_count(), 7);
    }

    #[test]
    fn rejects_boundary_angles() {
        for t in [0.0, FRAC_PI_2, -0.2, f64::NAN] {
            assert!(build_first_bit_circuit(t).is_err());
            assert!(build_full_circuit(t).is_err());
        }
    }

    #[test]
    fn forward_then_uncompute_is_identity() {
        for theta in [THETA, 0.05, 0.9, 1.4] {
            let s = full_circuit_stages(theta).unwrap();
            let gates: Vec<Gate> =
                s.check.iter().chain(&s.combine).chain(&s.uncompute).cloned().collect();
            let m = sequence_matrix(&gates, 3).unwrap();
            assert!(max_abs_diff(&m, &CMatrix::identity(8, 8)) < 1e-9);
        }
    }

    #[test]
    fn all_gate_matrices_unitary() {
        for dc in [build_first_bit_circuit(THETA).unwrap(), build_full_circuit(THETA).unwrap()] {
            for g in dc.circuit.gates() {
                if let Some(m) = g.local_matrix() {
                    assert!(is_unitary(&m, 1e-10));
                }
            }
        }
    }

    #[test]
    fn block_decision_respects_parity() {
        let dc = build_full_circuit(THETA).unwrap();
        for (b1, b3) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let d = dc.decide(&[b1, b3]);
            let w = d.block.unwrap().bits();
            assert_eq!((w[0], w[2], w[1]), (b1, b3, b1 ^ b3));
            assert_eq!(d.first_bit, b1);
        }
    }
}
