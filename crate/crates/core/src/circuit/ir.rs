use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, embed, is_unitary, CMatrix, I, ONE, ZERO};

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Z,
}

/// Named single-qubit gates, plus an escape hatch for raw matrices that must
/// be lowered before emission.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleQubitOp {
    H,
    X,
    Z,
    S,
    Sdg,
    Ry(f64),
    Rz(f64),
    Matrix(CMatrix),
}

impl SingleQubitOp {
    pub fn matrix(&self) -> CMatrix {
        let m = |v: [Complex64; 4]| CMatrix::from_row_slice(2, 2, &v);
        match self {
            Self::H => m([c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]),
            Self::X => m([ZERO, ONE, ONE, ZERO]),
            Self::Z => m([ONE, ZERO, ZERO, -ONE]),
            Self::S => m([ONE, ZERO, ZERO, I]),
            Self::Sdg => m([ONE, ZERO, ZERO, -I]),
            Self::Ry(t) => {
                let (s, co) = (t / 2.0).sin_cos();
                m([c(co), c(-s), c(s), c(co)])
            }
            Self::Rz(t) => {
                let half = Complex64::new(0.0, t / 2.0);
                m([(-half).exp(), ZERO, ZERO, half.exp()])
            }
            Self::Matrix(u) => u.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::H | Self::X | Self::Z => self.clone(),
            Self::S => Self::Sdg,
            Self::Sdg => Self::S,
            Self::Ry(t) => Self::Ry(-t),
            Self::Rz(t) => Self::Rz(-t),
            Self::Matrix(u) => Self::Matrix(u.adjoint()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single { qubit: usize, op: SingleQubitOp },
    /// Raw two-qubit unitary; `qubits[0]` is the most significant index bit.
    TwoQubit { qubits: [usize; 2], matrix: CMatrix },
    Cnot { control: usize, target: usize },
    Measure { qubit: usize, basis: Basis, cbit: usize },
    /// Project onto the computational basis and flip `|1>` back to `|0>`.
    Reset { qubit: usize },
    /// `gate` runs only when classical bit `cbit` holds `value`.
    Conditioned { cbit: usize, value: u8, gate: Box<Gate> },
}

impl Gate {
    pub fn single(qubit: usize, op: SingleQubitOp) -> Self {
        Self::Single { qubit, op }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::Cnot { control, target }
    }

    pub fn conditioned(cbit: usize, value: u8, gate: Gate) -> Self {
        Self::Conditioned { cbit, value, gate: Box::new(gate) }
    }

    /// Qubits the gate acts on, in matrix order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Self::Single { qubit, .. } | Self::Measure { qubit, .. } | Self::Reset { qubit } => {
                vec![*qubit]
            }
            Self::TwoQubit { qubits, .. } => qubits.to_vec(),
            Self::Cnot { control, target } => vec![*control, *target],
            Self::Conditioned { gate, .. } => gate.qubits(),
        }
    }

    /// Local unitary of a unitary gate; `None` for measurements and resets.
    pub fn local_matrix(&self) -> Option<CMatrix> {
        match self {
            Self::Single { op, .. } => Some(op.matrix()),
            Self::TwoQubit { matrix, .. } => Some(matrix.clone()),
            Self::Cnot { .. } => Some(CMatrix::from_fn(4, 4, |i, j| {
                const MAP: [usize; 4] = [0, 1, 3, 2];
                if MAP[j] == i {
                    ONE
                } else {
                    ZERO
                }
            })),
            Self::Measure { .. } | Self::Reset { .. } => None,
            Self::Conditioned { gate, .. } => gate.local_matrix(),
        }
    }

    /// Full-register unitary of an unconditioned unitary gate.
    pub fn register_matrix(&self, num_qubits: usize) -> Option<CMatrix> {
        match self {
            Self::Conditioned { .. } => None,
            _ => self.local_matrix().map(|m| embed(&m, &self.qubits(), num_qubits)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        match self {
            Self::TwoQubit { .. } | Self::Cnot { .. } => true,
            Self::Conditioned { gate, .. } => gate.is_two_qubit(),
            _ => false,
        }
    }

    pub fn is_unitary_kind(&self) -> bool {
        matches!(self, Self::Single { .. } | Self::TwoQubit { .. } | Self::Cnot { .. })
    }

    /// Inverse of a unitary gate (conditions are kept).
    pub fn inverse(&self) -> Result<Gate> {
        Ok(match self {
            Self::Single { qubit, op } => Self::Single { qubit: *qubit, op: op.inverse() },
            Self::TwoQubit { qubits, matrix } => {
                Self::TwoQubit { qubits: *qubits, matrix: matrix.adjoint() }
            }
            Self::Cnot { .. } => self.clone(),
            Self::Conditioned { cbit, value, gate } => {
                Self::Conditioned { cbit: *cbit, value: *value, gate: Box::new(gate.inverse()?) }
            }
            Self::Measure { .. } | Self::Reset { .. } => {
                return Err(Error::Circuit("measurements and resets have no inverse".into()))
            }
        })
    }
}

/// Inverse of a unitary gate sequence.
pub fn inverse_sequence(gates: &[Gate]) -> Result<Vec<Gate>> {
    gates.iter().rev().map(Gate::inverse).collect()
}

/// Product of an unconditioned unitary gate sequence, in application order.
pub fn sequence_matrix(gates: &[Gate], num_qubits: usize) -> Result<CMatrix> {
    let dim = 1 << num_qubits;
    gates.iter().try_fold(CMatrix::identity(dim, dim), |acc, g| {
        g.register_matrix(num_qubits)
            .map(|m| m * acc)
            .ok_or_else(|| Error::Circuit(format!("{g:?} is not an unconditioned unitary")))
    })
}

/// Ordered gate list over `num_qubits` qubits and `num_cbits` classical bits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_cbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_cbits: usize) -> Self {
        Self { num_qubits, num_cbits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_cbits(&self) -> usize {
        self.num_cbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        self.validate(&gate)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// CNOTs, raw two-qubit unitaries and conditioned two-qubit gates.
    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(Error::Circuit(format!("qubit {q} out of range ({} qubits)", self.num_qubits)))
        }
    }

    fn check_cbit(&self, b: usize) -> Result<()> {
        if b < self.num_cbits {
            Ok(())
        } else {
            Err(Error::Circuit(format!("classical bit {b} out of range ({} bits)", self.num_cbits)))
        }
    }

    fn validate(&self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            self.check_qubit(q)?;
        }
        match gate {
            Gate::Single { op, .. } => {
                if !is_unitary(&op.matrix(), UNITARY_TOL) || op.matrix().nrows() != 2 {
                    return Err(Error::Circuit(format!("{op:?} is not a 2x2 unitary")));
                }
            }
            Gate::TwoQubit { qubits, matrix } => {
                if qubits[0] == qubits[1] {
                    return Err(Error::Circuit("two-qubit gate on a repeated qubit".into()));
                }
                if matrix.nrows() != 4 || !is_unitary(matrix, UNITARY_TOL) {
                    return Err(Error::Circuit("two-qubit matrix is not a 4x4 unitary".into()));
                }
            }
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(Error::Circuit("CNOT control equals target".into()));
                }
            }
            Gate::Measure { cbit, .. } => self.check_cbit(*cbit)?,
            Gate::Reset { .. } => {}
            Gate::Conditioned { cbit, value, gate } => {
                self.check_cbit(*cbit)?;
                if *value > 1 {
                    return Err(Error::Circuit(format!("condition value {value} is not a bit")));
                }
                if !gate.is_unitary_kind() {
                    return Err(Error::Circuit("only unitary gates may be conditioned".into()));
                }
                self.validate(gate)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn named_gates_are_unitary_and_invert() {
        let ops = [
            SingleQubitOp::H,
            SingleQubitOp::X,
            SingleQubitOp::Z,
            SingleQubitOp::S,
            SingleQubitOp::Ry(0.37),
            SingleQubitOp::Rz(-1.2),
        ];
        for op in ops {
            let m = op.matrix();
            assert!(is_unitary(&m, 1e-12));
            let id = op.inverse().matrix() * m;
            assert!(max_abs_diff(&id, &CMatrix::identity(2, 2)) < 1e-12);
        }
    }

    #[test]
    fn validation_rejects_bad_indices_and_conditions() {
        let mut circ = Circuit::new(2, 1);
        assert!(circ.push(Gate::cnot(0, 2)).is_err());
        assert!(circ.push(Gate::cnot(1, 1)).is_err());
        assert!(circ.push(Gate::Measure { qubit: 0, basis: Basis::Z, cbit: 1 }).is_err());
        assert!(circ
            .push(Gate::conditioned(0, 1, Gate::Reset { qubit: 0 }))
            .is_err());
        assert!(circ
            .push(Gate::conditioned(0, 2, Gate::single(0, SingleQubitOp::X)))
            .is_err());
        let not_unitary = CMatrix::from_element(2, 2, c(1.0));
        assert!(circ
            .push(Gate::single(0, SingleQubitOp::Matrix(not_unitary)))
            .is_err());
        assert!(circ.push(Gate::cnot(0, 1)).is_ok());
    }

    #[test]
    fn two_qubit_count_includes_conditioned() {
        let mut circ = Circuit::new(2, 1);
        circ.push(Gate::cnot(0, 1)).unwrap();
        circ.push(Gate::conditioned(0, 1, Gate::cnot(1, 0))).unwrap();
        circ.push(Gate::single(0, SingleQubitOp::H)).unwrap();
        circ.push(Gate::TwoQubit { qubits: [1, 0], matrix: CMatrix::identity(4, 4) }).unwrap();
        assert_eq!(circ.two_qubit_gate_count(), 3);
    }

    #[test]
    fn inverse_sequence_undoes_sequence() {
        let gates = vec![
            Gate::single(0, SingleQubitOp::Ry(0.4)),
            Gate::cnot(0, 2),
            Gate::single(2, SingleQubitOp::S),
            Gate::cnot(2, 1),
        ];
        let fwd = sequence_matrix(&gates, 3).unwrap();
        let back = sequence_matrix(&inverse_sequence(&gates).unwrap(), 3).unwrap();
        assert!(max_abs_diff(&(back * fwd), &CMatrix::identity(8, 8)) < 1e-12);
    }
}
