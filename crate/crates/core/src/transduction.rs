//! Jaynes-Cummings photon-to-ion transduction.
//!
//! A received coherent state `|+/-b>` interacts with a ground-state ion for a
//! pulse area `phi`. Counting `n` photons afterwards heralds the ion in
//!
//! ```text
//! cos(sqrt(n) phi) b_n |0> - i sin(sqrt(n+1) phi) b_{n+1} |1>   (normalized)
//! ```
//!
//! where `b_n = e^{-b^2/2} (+/-b)^n / sqrt(n!)`. Only the pulse area enters;
//! the coupling profile itself is never modeled.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::channel::helstrom_binary_error;
use crate::error::{invalid, Error, Result};

/// Points in the coarse pulse-area grid used by [`optimize_phi`].
pub const OPTIMIZER_GRID_POINTS: usize = 1000;
/// Golden-section refinements after the grid scan.
pub const OPTIMIZER_REFINEMENTS: usize = 40;

/// Transduction settings for one received symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransductionConfig {
    beta: f64,
    phi: f64,
    n_trunc: u32,
}

impl TransductionConfig {
    pub fn new(beta: f64, phi: f64, n_trunc: u32) -> Result<Self> {
        check_beta(beta)?;
        check_phi(phi)?;
        Ok(Self { beta, phi, n_trunc })
    }

    /// Settings with the inner-product-preserving pulse area for `beta`.
    pub fn inner_product_preserving(beta: f64, n_trunc: u32) -> Result<Self> {
        let phi = phi_inner_product_preserving(beta)?.phi;
        Self::new(beta, phi, n_trunc)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn n_trunc(&self) -> u32 {
        self.n_trunc
    }

    pub fn receiver_error(&self) -> f64 {
        pnr_receiver_error(self.beta, self.phi, self.n_trunc).expect("validated config")
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("amplitude must be finite and >= 0, got {beta}")))
    }
}

fn check_phi(phi: f64) -> Result<()> {
    if (0.0..=PI).contains(&phi) {
        Ok(())
    } else {
        Err(invalid(format!("pulse area must lie in [0, pi], got {phi}")))
    }
}

/// `ln |b_n|^2`, the log Poisson weight of `n` photons at mean `b^2`.
fn ln_poisson(beta: f64, n: u32) -> f64 {
    let mean = beta * beta;
    if n == 0 {
        return -mean;
    }
    if mean == 0.0 {
        return f64::NEG_INFINITY;
    }
    -mean + f64::from(n) * mean.ln() - ln_gamma(f64::from(n) + 1.0)
}

/// Fock amplitude `e^{-b^2/2} (sign b)^n / sqrt(n!)`, evaluated in the log
/// domain so large `n` underflows gracefully instead of overflowing.
pub fn fock_coefficient(beta: f64, n: u32, sign: i8) -> Result<Complex64> {
    check_beta(beta)?;
    if sign != 1 && sign != -1 {
        return Err(invalid(format!("sign must be +1 or -1, got {sign}")));
    }
    let magnitude = (0.5 * ln_poisson(beta, n)).exp();
    let parity = if sign < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    Ok(Complex64::new(parity * magnitude, 0.0))
}

/// The two weights making up the herald probability of outcome `n`:
/// ion left in `|0>` and ion excited to `|1>`.
fn branch_weights(beta: f64, phi: f64, n: u32) -> (f64, f64) {
    let nf = f64::from(n);
    let ground = (nf.sqrt() * phi).cos().powi(2) * ln_poisson(beta, n).exp();
    let excited = ((nf + 1.0).sqrt() * phi).sin().powi(2) * ln_poisson(beta, n + 1).exp();
    (ground, excited)
}

/// Photon-count outcome `n` with its herald probability and heralded ion
/// states for the two BPSK symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct HeraldedOutcome {
    pub n: u32,
    pub p_n: f64,
    /// Closed-form inner product of the two heralded states. The amplitude
    /// overlap equals this up to the sign `(-1)^n`.
    pub sigma_n: f64,
    pub state_plus: [Complex64; 2],
    pub state_minus: [Complex64; 2],
    gap: f64,
}

impl HeraldedOutcome {
    /// `sqrt(1 - sigma_n^2)`, evaluated without cancellation.
    pub fn helstrom_gap(&self) -> f64 {
        self.gap
    }

    /// Success probability contributed by this outcome when the heralded
    /// states are discriminated optimally.
    pub fn success_mass(&self) -> f64 {
        0.5 * self.p_n * (1.0 + self.gap)
    }

    /// Map the heralded pair onto the decoder's real-amplitude convention
    /// `cos(t/2)|0> +/- sin(t/2)|1>` with an `S` phase gate on each state.
    pub fn decoder_qubits(&self) -> Result<DecoderQubits> {
        let fix = |s: &[Complex64; 2]| -> [Complex64; 2] {
            let rotated = [s[0], s[1] * Complex64::i()];
            let pivot = if rotated[0].norm() > 1e-300 { rotated[0] } else { rotated[1] };
            let phase = pivot.conj() / pivot.norm();
            [rotated[0] * phase, rotated[1] * phase]
        };
        let plus = fix(&self.state_plus);
        let minus = fix(&self.state_minus);
        for amp in plus.iter().chain(minus.iter()) {
            if amp.im.abs() > 1e-12 {
                return Err(Error::Consistency(format!(
                    "heralded state for n = {} is not real after phase correction",
                    self.n
                )));
            }
        }
        let theta = 2.0 * plus[1].re.abs().atan2(plus[0].re.abs());
        Ok(DecoderQubits {
            theta,
            swapped: plus[1].re < 0.0,
            plus: [plus[0].re, plus[1].re],
            minus: [minus[0].re, minus[1].re],
        })
    }
}

/// Heralded pair after phase correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderQubits {
    pub theta: f64,
    /// `true` when the `+` symbol landed on `cos|0> - sin|1>`.
    pub swapped: bool,
    pub plus: [f64; 2],
    pub minus: [f64; 2],
}

pub fn heralded_outcome(beta: f64, phi: f64, n: u32) -> Result<HeraldedOutcome> {
    check_beta(beta)?;
    check_phi(phi)?;
    let (ground, excited) = branch_weights(beta, phi, n);
    let p_n = ground + excited;
    if p_n.is_nan() || p_n <= 0.0 {
        return Err(Error::DegenerateOutcome { n });
    }
    let nf = f64::from(n);
    let sigma_n = (ground - excited) / p_n;
    let gap = 2.0 * (ground * excited).sqrt() / p_n;

    let norm = p_n.sqrt();
    let state = |sign: i8| -> Result<[Complex64; 2]> {
        let c0 = fock_coefficient(beta, n, sign)? * (nf.sqrt() * phi).cos();
        let c1 = fock_coefficient(beta, n + 1, sign)?
            * Complex64::new(0.0, -((nf + 1.0).sqrt() * phi).sin());
        Ok([c0 / norm, c1 / norm])
    };
    Ok(HeraldedOutcome {
        n,
        p_n,
        sigma_n,
        state_plus: state(1)?,
        state_minus: state(-1)?,
        gap,
    })
}

/// Inner-product-preserving pulse area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IppPhi {
    pub phi: f64,
    /// Set at `beta = 0`, where `pi/2` is returned as the limiting value.
    pub degenerate_limit: bool,
}

/// `phi = arcsin(sqrt(tanh b^2) / b)`, the pulse area whose `n = 0` herald
/// leaves the ion states with overlap exactly `e^{-2 b^2}`.
pub fn phi_inner_product_preserving(beta: f64) -> Result<IppPhi> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(IppPhi { phi: FRAC_PI_2, degenerate_limit: true });
    }
    let x = beta * beta;
    let ratio = if x < 1e-4 {
        1.0 - x * x / 3.0 + 2.0 * x.powi(4) / 15.0
    } else {
        x.tanh() / x
    };
    let arg = ratio.sqrt();
    if arg > 1.0 + 1e-12 {
        return Err(Error::Consistency(format!(
            "sin(phi) = {arg} exceeds 1 at beta = {beta}"
        )));
    }
    Ok(IppPhi { phi: arg.min(1.0).asin(), degenerate_limit: false })
}

/// `n = 0` herald probability under the inner-product-preserving pulse area:
/// `e^{-b^2} (1 + tanh b^2)`.
pub fn herald_prob_ipp(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let x = beta * beta;
    Ok((-x).exp() * (1.0 + x.tanh()))
}

/// Overall symbol error when only `n = 0` heralds count and the heralded
/// qubits are then discriminated at the Helstrom limit. Failed heralds count
/// as errors.
pub fn overall_error_n0(beta: f64, phi: f64) -> Result<f64> {
    check_beta(beta)?;
    check_phi(phi)?;
    let s = (phi.sin() * beta).powi(2);
    let p0 = (-beta * beta).exp() * (1.0 + s);
    let sigma0 = (1.0 - s) / (1.0 + s);
    Ok(1.0 - p0 * (1.0 - helstrom_binary_error(sigma0.abs())?))
}

/// The `n = 0` optimum over pulse area: `phi = pi/2` for every `beta`, with
/// error `1 - e^{-b^2} (1 + b)^2 / 2`.
pub fn optimal_phi_bound(beta: f64) -> Result<(f64, f64)> {
    check_beta(beta)?;
    Ok((FRAC_PI_2, 1.0 - 0.5 * (-beta * beta).exp() * (1.0 + beta).powi(2)))
}

/// Receiver error with photon-number resolution up to `n_trunc`; outcomes
/// above the truncation are counted as errors.
pub fn pnr_receiver_error(beta: f64, phi: f64, n_trunc: u32) -> Result<f64> {
    check_beta(beta)?;
    check_phi(phi)?;
    Ok(1.0 - pnr_success(beta, phi, n_trunc))
}

fn pnr_success(beta: f64, phi: f64, n_trunc: u32) -> f64 {
    (0..=n_trunc)
        .map(|n| {
            let (ground, excited) = branch_weights(beta, phi, n);
            // p_n (1 + sqrt(1 - sigma_n^2)) / 2 == (sqrt(g) + sqrt(e))^2 / 2
            0.5 * (ground.sqrt() + excited.sqrt()).powi(2)
        })
        .sum()
}

/// Minimizes [`pnr_receiver_error`] over `phi` in `[0, pi]`: a uniform grid
/// scan followed by golden-section refinement around the best grid point.
pub fn optimize_phi(beta: f64, n_trunc: u32) -> Result<(f64, f64)> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Err(invalid("pulse-area optimization needs beta > 0"));
    }
    let f = |phi: f64| 1.0 - pnr_success(beta, phi, n_trunc);
    let step = PI / (OPTIMIZER_GRID_POINTS - 1) as f64;
    let (best, _) = (0..OPTIMIZER_GRID_POINTS)
        .map(|i| (i, f(i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });

    let mut lo = best.saturating_sub(1) as f64 * step;
    let mut hi = ((best + 1).min(OPTIMIZER_GRID_POINTS - 1)) as f64 * step;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..OPTIMIZER_REFINEMENTS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let candidates = [(best as f64 * step, f(best as f64 * step)), (x1, f1), (x2, f2)];
    let (phi, err) = candidates
        .into_iter()
        .fold((0.0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    Ok((phi, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector};
    use proptest::prelude::*;

    fn inner(a: &[Complex64; 2], b: &[Complex64; 2]) -> Complex64 {
        a[0].conj() * b[0] + a[1].conj() * b[1]
    }

    /// Closed-form expression for sigma_n.
    fn sigma_closed(beta: f64, phi: f64, n: u32) -> f64 {
        let nf = f64::from(n);
        let cos2 = (nf.sqrt() * phi).cos().powi(2);
        let sin2 = beta * beta / (nf + 1.0) * ((nf + 1.0).sqrt() * phi).sin().powi(2);
        (cos2 - sin2) / (cos2 + sin2)
    }

    /// Builds the full post-interaction state of mode (truncated at `cutoff`)
    /// and ion directly from Fock amplitudes, then projects onto `n` photons.
    fn brute_force_outcome(beta: f64, phi: f64, n: usize, sign: f64) -> (f64, CVector) {
        let cutoff = 80;
        let mut fock = vec![0.0; cutoff + 2];
        let mut amp = (-beta * beta / 2.0).exp();
        for (k, slot) in fock.iter_mut().enumerate() {
            if k > 0 {
                amp *= sign * beta / (k as f64).sqrt();
            }
            *slot = amp;
        }
        // Jaynes-Cummings evolution couples |0,k> <-> |1,k-1> with angle phi sqrt(k).
        // Start in |0> (ion) x sum_k fock[k] |k>.
        let mut ground = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        let mut excited = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        for k in 0..=cutoff {
            let a = fock[k];
            let w = (k as f64).sqrt() * phi;
            ground[k] += c(a * w.cos());
            if k > 0 {
                excited[k - 1] += Complex64::new(0.0, -a * w.sin());
            }
        }
        let v = CVector::from_vec(vec![ground[n], excited[n]]);
        let p = v.norm_squared();
        (p, v / c(p.sqrt()))
    }

    #[test]
    fn fock_coefficient_examples() {
        assert_eq!(fock_coefficient(0.0, 0, 1).unwrap(), c(1.0));
        assert_eq!(fock_coefficient(0.0, 3, 1).unwrap(), c(0.0));
        let b = 0.8;
        assert!((fock_coefficient(b, 0, -1).unwrap().re - (-b * b / 2.0f64).exp()).abs() < 1e-15);
        assert!((fock_coefficient(1.0, 2, 1).unwrap().re - 0.428882).abs() < 1e-6);
        assert!((fock_coefficient(1.0, 3, -1).unwrap().re + (-0.5f64).exp() / 6f64.sqrt()).abs() < 1e-14);
        // Large n underflows to zero rather than overflowing.
        let huge = fock_coefficient(1.5, 5000, 1).unwrap();
        assert!(huge.re.is_finite() && huge.re >= 0.0 && huge.re < 1e-300);
    }

    #[test]
    fn n0_herald_probability_matches_closed_form() {
        for &(beta, phi) in &[(0.1, 0.3), (0.5, 1.2), (1.3, FRAC_PI_2), (0.0, 2.0)] {
            let out = heralded_outcome(beta, phi, 0).unwrap();
            let want = (-beta * beta).exp() * (1.0 + (phi.sin() * beta).powi(2));
            assert!((out.p_n - want).abs() < 1e-14);
        }
    }

    #[test]
    fn no_interaction_gives_poisson_and_unit_overlap() {
        let beta = 0.9f64;
        for n in 0..8 {
            let out = heralded_outcome(beta, 0.0, n).unwrap();
            let poisson = (-beta * beta).exp() * beta.powi(2 * n as i32)
                / (1..=n).map(f64::from).product::<f64>();
            assert!((out.p_n - poisson).abs() < 1e-14);
            assert!((out.sigma_n - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn small_beta_half_pi_example() {
        let out = heralded_outcome(0.1, FRAC_PI_2, 0).unwrap();
        assert!((out.p_n - 0.999950).abs() < 1e-6);
        assert!((out.sigma_n - 0.99 / 1.01).abs() < 1e-12);
        assert!((out.sigma_n - 0.980198).abs() < 1e-6);
    }

    #[test]
    fn zero_probability_outcome_is_degenerate() {
        assert_eq!(heralded_outcome(0.0, 1.0, 2), Err(Error::DegenerateOutcome { n: 2 }));
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        assert!(heralded_outcome(-1.0, 1.0, 0).is_err());
        assert!(heralded_outcome(1.0, 4.0, 0).is_err());
        assert!(TransductionConfig::new(1.0, -0.1, 0).is_err());
        assert!(phi_inner_product_preserving(f64::NAN).is_err());
    }

    #[test]
    fn states_normalized_and_overlap_matches_closed_form() {
        for &beta in &[0.05, 0.3, 1.0, 1.7] {
            for &phi in &[0.2, 1.0, FRAC_PI_2, 2.5] {
                for n in 0..=10 {
                    let out = heralded_outcome(beta, phi, n).unwrap();
                    for s in [&out.state_plus, &out.state_minus] {
                        assert!((inner(s, s).re - 1.0).abs() < 1e-12);
                    }
                    let ov = inner(&out.state_minus, &out.state_plus);
                    assert!(ov.im.abs() < 1e-12);
                    assert!((ov.norm() - out.sigma_n.abs()).abs() < 1e-10);
                    assert!((out.sigma_n - sigma_closed(beta, phi, n)).abs() < 1e-10);
                    let gap = (1.0 - out.sigma_n.powi(2)).max(0.0).sqrt();
                    assert!((out.helstrom_gap() - gap).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn herald_probabilities_normalize() {
        for &beta in &[0.0, 0.2, 0.7, 1.4, 2.0] {
            for &phi in &[0.0, 0.4, FRAC_PI_2, 2.2, PI] {
                let total: f64 = (0..=50)
                    .filter_map(|n| heralded_outcome(beta, phi, n).ok())
                    .map(|o| o.p_n)
                    .sum();
                assert!((total - 1.0).abs() < 1e-10, "beta {beta} phi {phi}: {total}");
            }
        }
    }

    #[test]
    fn ipp_phi_examples() {
        let small = phi_inner_product_preserving(1e-6).unwrap();
        assert!((small.phi - FRAC_PI_2).abs() < 1e-6);
        assert!(!small.degenerate_limit);
        let zero = phi_inner_product_preserving(0.0).unwrap();
        assert_eq!(zero.phi, FRAC_PI_2);
        assert!(zero.degenerate_limit);
        let p = phi_inner_product_preserving(0.1).unwrap().phi;
        assert!((p - 1.5650).abs() < 1e-3);
    }

    #[test]
    fn herald_prob_ipp_examples() {
        assert_eq!(herald_prob_ipp(0.0).unwrap(), 1.0);
        assert!((herald_prob_ipp(0.1).unwrap() - 0.999950).abs() < 1e-6);
        assert!((herald_prob_ipp(1.0).unwrap() - 0.648054).abs() < 1e-6);
    }

    #[test]
    fn overall_error_examples() {
        assert!((overall_error_n0(0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let want = 1.0 - (-0.01f64).exp() * 1.1f64.powi(2) / 2.0;
        assert!((overall_error_n0(0.1, FRAC_PI_2).unwrap() - want).abs() < 1e-12);
        assert!((want - 0.401020).abs() < 1e-5);
        for &beta in &[0.05, 0.3, 0.8, 1.5] {
            let phi = phi_inner_product_preserving(beta).unwrap().phi;
            let direct = overall_error_n0(beta, phi).unwrap();
            let composed = 1.0
                - herald_prob_ipp(beta).unwrap()
                    * (1.0 - helstrom_binary_error((-2.0 * beta * beta).exp()).unwrap());
            assert!((direct - composed).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_phi_bound_examples() {
        let (phi, err) = optimal_phi_bound(1.0).unwrap();
        assert_eq!(phi, FRAC_PI_2);
        assert!((err - (1.0 - 2.0 * (-1.0f64).exp())).abs() < 1e-15);
        assert!((err - 0.264241).abs() < 1e-6);
        for &beta in &[0.05, 0.1, 0.5, 1.0] {
            let (_, bound) = optimal_phi_bound(beta).unwrap();
            assert!((overall_error_n0(beta, FRAC_PI_2).unwrap() - bound).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_minimum_of_n0_error_is_half_pi() {
        for &beta in &[0.05, 0.1, 0.5, 1.0] {
            let (phi, _) = optimize_phi(beta, 0).unwrap();
            assert!((phi - FRAC_PI_2).abs() < 1e-6, "beta {beta}: {phi}");
        }
    }

    #[test]
    fn half_pi_overlap_stays_below_preserved_overlap() {
        // (1 - b^2)/(1 + b^2) < e^{-2 b^2} on (0, 2]; equality only at b = 0.
        for i in 1..=400 {
            let beta = 2.0 * i as f64 / 400.0;
            let x = beta * beta;
            let half_pi = heralded_outcome(beta, FRAC_PI_2, 0).unwrap().sigma_n;
            assert!((half_pi - (1.0 - x) / (1.0 + x)).abs() < 1e-12);
            assert!(half_pi < (-2.0 * x).exp(), "beta {beta}");
        }
    }

    #[test]
    fn pnr_single_term_matches_n0_error() {
        for &beta in &[0.1, 0.6, 1.2] {
            for &phi in &[0.3, FRAC_PI_2, 2.9] {
                let a = pnr_receiver_error(beta, phi, 0).unwrap();
                let b = overall_error_n0(beta, phi).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pnr_against_amplitude_level_oracle() {
        let (beta, phi) = (0.5, FRAC_PI_2);
        let mut success = 0.0;
        for n in 0..=5 {
            let (p_plus, v_plus) = brute_force_outcome(beta, phi, n, 1.0);
            let (p_minus, v_minus) = brute_force_outcome(beta, phi, n, -1.0);
            assert!((p_plus - p_minus).abs() < 1e-14);
            let ov = v_minus.dotc(&v_plus).norm();
            success += 0.5 * p_plus * (1.0 + (1.0 - ov * ov).sqrt());
            let out = heralded_outcome(beta, phi, n as u32).unwrap();
            assert!((out.p_n - p_plus).abs() < 1e-12);
            assert!((out.sigma_n.abs() - ov).abs() < 1e-10);
        }
        let got = pnr_receiver_error(beta, phi, 5).unwrap();
        assert!((got - (1.0 - success)).abs() < 1e-10);
    }

    #[test]
    fn pnr_large_truncation_uses_full_mass() {
        let (beta, phi) = (1.1, 1.3);
        let total: f64 = (0..=50).map(|n| heralded_outcome(beta, phi, n).unwrap().p_n).sum();
        assert!((total - 1.0).abs() < 1e-10);
        let err = pnr_receiver_error(beta, phi, 50).unwrap();
        let direct: f64 = 1.0
            - (0..=50)
                .map(|n| heralded_outcome(beta, phi, n).unwrap().success_mass())
                .sum::<f64>();
        assert!((err - direct).abs() < 1e-12);
    }

    #[test]
    fn optimized_error_improves_with_truncation_and_respects_helstrom() {
        for i in 1..=12 {
            let beta = i as f64 / 8.0;
            let floor = helstrom_binary_error((-2.0 * beta * beta).exp()).unwrap();
            let mut prev = f64::INFINITY;
            for k in 0..=4 {
                let (_, err) = optimize_phi(beta, k).unwrap();
                assert!(err <= prev + 1e-12, "beta {beta} k {k}");
                assert!(err >= floor - 1e-12);
                prev = err;
            }
        }
    }

    #[test]
    fn decoder_qubits_for_ipp_herald_match_channel_angle() {
        for &beta in &[0.05f64, 0.3, 0.9] {
            let phi = phi_inner_product_preserving(beta).unwrap().phi;
            let q = heralded_outcome(beta, phi, 0).unwrap().decoder_qubits().unwrap();
            assert!(!q.swapped);
            assert!((q.theta.cos() - (-2.0 * beta * beta).exp()).abs() < 1e-10);
            assert!((q.plus[0] - (q.theta / 2.0).cos()).abs() < 1e-12);
            assert!((q.plus[1] - (q.theta / 2.0).sin()).abs() < 1e-12);
            assert!((q.minus[1] + (q.theta / 2.0).sin()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn ipp_phi_preserves_overlap(beta in 1e-3f64..3.0) {
            let phi = phi_inner_product_preserving(beta).unwrap().phi;
            prop_assert!((0.0..=FRAC_PI_2).contains(&phi));
            let sigma = heralded_outcome(beta, phi, 0).unwrap().sigma_n;
            prop_assert!((sigma - (-2.0 * beta * beta).exp()).abs() < 1e-10);
        }
    }
}
