//! Coherent-state BPSK channel parameters and single-symbol detection limits.
//!
//! The received alphabet `{|+b>, |-b>}` with mean photon number `N = |b|^2`
//! has overlap `sigma = exp(-2N)`. In the qubit picture the same pair is
//! `cos(theta/2)|0> +/- sin(theta/2)|1>` with `cos(theta) = sigma`.

use std::f64::consts::FRAC_PI_2;

use libm::erfc;

use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, trace, CMatrix};

const CONSISTENCY_TOL: f64 = 8.0 * f64::EPSILON;

/// Mean photon number, overlap and qubit angle of one BPSK symbol, kept
/// mutually consistent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    mean_photon: f64,
    overlap: f64,
    angle: f64,
}

impl ChannelParams {
    pub fn from_mean_photon(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(invalid(format!("mean photon number must be finite and >= 0, got {n}")));
        }
        let overlap = (-2.0 * n).exp();
        Self::checked(n, overlap, overlap.acos())
    }

    /// From the overlap `sigma` in `(0, 1]`.
    pub fn from_overlap(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(invalid(format!("overlap must lie in (0, 1], got {sigma}")));
        }
        Self::checked(-0.5 * sigma.ln(), sigma, sigma.acos())
    }

    /// From the qubit angle `theta` in `[0, pi/2)`.
    pub fn from_angle(theta: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(invalid(format!("angle must lie in [0, pi/2), got {theta}")));
        }
        let overlap = theta.cos();
        Self::checked(-0.5 * overlap.ln(), overlap, theta)
    }

    fn checked(mean_photon: f64, overlap: f64, angle: f64) -> Result<Self> {
        if !(0.0..FRAC_PI_2).contains(&angle) || overlap <= 0.0 {
            return Err(invalid(format!(
                "mean photon number {mean_photon} leaves no representable angle below pi/2"
            )));
        }
        let drift_n = ((-2.0 * mean_photon).exp() - overlap).abs();
        let drift_theta = (angle.cos() - overlap).abs();
        if drift_n > CONSISTENCY_TOL * overlap * (1.0 + 2.0 * mean_photon) {
            return Err(invalid(format!("overlap {overlap} inconsistent with N = {mean_photon}")));
        }
        if drift_theta > CONSISTENCY_TOL {
            return Err(invalid(format!("angle {angle} inconsistent with overlap {overlap}")));
        }
        Ok(Self { mean_photon, overlap, angle })
    }

    pub fn mean_photon(&self) -> f64 {
        self.mean_photon
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Received amplitude `b = sqrt(N)`.
    pub fn amplitude(&self) -> f64 {
        self.mean_photon.sqrt()
    }

    /// Symbol-by-symbol Helstrom error for this channel.
    pub fn helstrom_error(&self) -> f64 {
        helstrom_binary_error(self.overlap).expect("overlap validated at construction")
    }

    /// Symbol-by-symbol homodyne error, `erfc(sqrt(2N)) / 2`.
    ///
    /// Uses `-ln cos(theta) = 2N` directly, so it stays defined at `N = 0`.
    pub fn homodyne_error(&self) -> f64 {
        0.5 * erfc((2.0 * self.mean_photon).sqrt())
    }
}

/// Minimum error for two equiprobable pure states with overlap `sigma`:
/// `(1 - sqrt(1 - sigma^2)) / 2`.
pub fn helstrom_binary_error(sigma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(invalid(format!("overlap must lie in [0, 1], got {sigma}")));
    }
    let gap = (1.0 - sigma) * (1.0 + sigma);
    Ok(0.5 * (1.0 - gap.sqrt()))
}

/// Homodyne detection error for the qubit angle `theta` in `(0, pi/2)`:
/// `erfc(sqrt(-ln cos theta)) / 2`.
pub fn homodyne_error(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(invalid(format!("angle must lie in (0, pi/2), got {theta}")));
    }
    Ok(0.5 * erfc((-theta.cos().ln()).sqrt()))
}

/// Binary entropy in bits, with `0 lg 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability must lie in [0, 1], got {p}")));
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

/// Minimum error of discriminating `rho0` (prior `p0`) from `rho1`:
/// `(1 - ||p0 rho0 - (1 - p0) rho1||_1) / 2`.
pub fn trace_norm_binary_helstrom(rho0: &CMatrix, rho1: &CMatrix, p0: f64) -> Result<f64> {
    const TOL: f64 = 1e-10;
    if !(0.0..=1.0).contains(&p0) {
        return Err(invalid(format!("prior must lie in [0, 1], got {p0}")));
    }
    if rho0.shape() != rho1.shape() || rho0.nrows() != rho0.ncols() {
        return Err(invalid("density operators must be square and of equal size"));
    }
    if rho0.nrows() > 16 {
        return Err(invalid(format!("dimension {} exceeds 16", rho0.nrows())));
    }
    for (name, rho) in [("rho0", rho0), ("rho1", rho1)] {
        let defect = hermiticity_defect(rho);
        if defect > TOL {
            return Err(invalid(format!("{name} is not Hermitian (defect {defect:e})")));
        }
        let tr = trace(rho);
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(invalid(format!("{name} has trace {tr}, expected 1")));
        }
    }
    let gamma = rho0 * crate::linalg::c(p0) - rho1 * crate::linalg::c(1.0 - p0);
    let norm: f64 = hermitian_eigenvalues(&gamma).iter().map(|l| l.abs()).sum();
    Ok((0.5 * (1.0 - norm)).max(0.0))
}
