use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, CMatrix};

use super::ir::{Gate, SingleQubitOp};

const NORM_TOL: f64 = 1e-12;

/// Parameters of the two-qubit combining unitary `U_⊛(θ, θ′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UStarParams {
    pub theta: f64,
    pub theta_prime: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
    /// Check-node output angle for parity 0.
    pub theta0: f64,
    /// Check-node output angle for parity 1.
    pub theta1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl UStarParams {
    /// Angle of the compressed qubit, `cos θ_out = cos θ · cos θ′`.
    pub fn output_angle(&self) -> f64 {
        (self.theta.cos() * self.theta_prime.cos()).clamp(-1.0, 1.0).acos()
    }
}

pub fn u_star_params(theta: f64, theta_prime: f64) -> Result<UStarParams> {
    for (name, v) in [("theta", theta), ("theta_prime", theta_prime)] {
        if !(0.0..=FRAC_PI_2).contains(&v) {
            return Err(invalid(format!("{name} = {v} outside [0, pi/2]")));
        }
    }
    if theta == 0.0 && theta_prime == 0.0 {
        return Err(Error::DegenerateAngles { theta, theta_prime });
    }
    let (ct, cp) = (theta.cos(), theta_prime.cos());
    let (s, d) = ((theta + theta_prime) / 2.0, (theta - theta_prime) / 2.0);
    let plus = (1.0 + ct * cp).sqrt() * std::f64::consts::SQRT_2;
    // 1 - cos θ cos θ′ loses precision when both angles are small.
    let one_minus = {
        let (sh, sph) = ((theta / 2.0).sin(), (theta_prime / 2.0).sin());
        2.0 * sh * sh + 2.0 * sph * sph - 4.0 * sh * sh * sph * sph
    };
    let minus = one_minus.sqrt() * std::f64::consts::SQRT_2;
    let a_plus = (d.cos() + s.cos()) / plus;
    let a_minus = (d.cos() - s.cos()) / plus;
    let b_plus = (s.sin() - d.sin()) / minus;
    let b_minus = (s.sin() + d.sin()) / minus;

    let cos0 = ((ct + cp) / (1.0 + ct * cp)).clamp(-1.0, 1.0);
    let theta1 = if theta == theta_prime {
        FRAC_PI_2
    } else {
        ((ct - cp) / one_minus).clamp(-1.0, 1.0).acos()
    };
    let params = UStarParams {
        theta,
        theta_prime,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        theta0: cos0.acos(),
        theta1,
        gamma1: 2.0 * a_minus.clamp(-1.0, 1.0).asin(),
        gamma2: 2.0 * b_plus.clamp(-1.0, 1.0).asin(),
    };
    let na = a_plus * a_plus + a_minus * a_minus - 1.0;
    let nb = b_plus * b_plus + b_minus * b_minus - 1.0;
    if na.abs() > NORM_TOL || nb.abs() > NORM_TOL {
        return Err(Error::Consistency(format!(
            "combining coefficients not normalized ({na:e}, {nb:e})"
        )));
    }
    Ok(params)
}

/// The 4×4 combining unitary in basis order `|00>, |01>, |10>, |11>`.
pub fn u_star_matrix(theta: f64, theta_prime: f64) -> Result<CMatrix> {
    Ok(params_matrix(&u_star_params(theta, theta_prime)?))
}

pub fn params_matrix(p: &UStarParams) -> CMatrix {
    #[rustfmt::skip]
    let rows = [
        p.a_plus, 0.0, 0.0, p.a_minus,
        p.a_minus, 0.0, 0.0, -p.a_plus,
        0.0, p.b_plus, p.b_minus, 0.0,
        0.0, p.b_minus, -p.b_plus, 0.0,
    ];
    CMatrix::from_row_slice(4, 4, &rows.map(c))
}

fn rotation_angles(p: &UStarParams) -> (f64, f64) {
    let alpha = (p.gamma1 - PI - p.gamma2) / 2.0;
    let beta = (PI - p.gamma1 - p.gamma2) / 2.0;
    (alpha, beta)
}

/// Two-CNOT realization of `U_⊛` on `qubits = [a, b]`, `a` being the
/// most significant index bit of the matrix.
pub fn decompose_u_star(params: &UStarParams, qubits: [usize; 2]) -> Vec<Gate> {
    let [a, b] = qubits;
    let (alpha, beta) = rotation_angles(params);
    vec![
        Gate::cnot(b, a),
        Gate::single(b, SingleQubitOp::Ry(beta)),
        Gate::cnot(a, b),
        Gate::single(b, SingleQubitOp::X),
        Gate::single(b, SingleQubitOp::Ry(alpha)),
    ]
}

fn multiplexed_ry(target: usize, control: usize, angle0: f64, angle1: f64) -> [Gate; 4] {
    [
        Gate::single(target, SingleQubitOp::Ry((angle0 + angle1) / 2.0)),
        Gate::cnot(control, target),
        Gate::single(target, SingleQubitOp::Ry((angle0 - angle1) / 2.0)),
        Gate::cnot(control, target),
    ]
}

/// Coherently selects `U_⊛` with `params0` or `params1` on `qubits` according
/// to the computational value of `control`.
pub fn decompose_u_star_multiplexed(
    params0: &UStarParams,
    params1: &UStarParams,
    control: usize,
    qubits: [usize; 2],
) -> Result<Vec<Gate>> {
    let [a, b] = qubits;
    if control == a || control == b || a == b {
        return Err(Error::Circuit("control overlaps the combined qubits".into()));
    }
    let (alpha0, beta0) = rotation_angles(params0);
    let (alpha1, beta1) = rotation_angles(params1);
    let mut gates = vec![Gate::cnot(b, a)];
    gates.extend(multiplexed_ry(b, control, beta0, beta1));
    gates.push(Gate::cnot(a, b));
    gates.push(Gate::single(b, SingleQubitOp::X));
    gates.extend(multiplexed_ry(b, control, alpha0, alpha1));
    Ok(gates)
}
