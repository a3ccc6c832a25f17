//! End-to-end decoder evaluation and the quantum limits it is measured against.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channel::{trace_norm_binary_helstrom, ChannelParams};
use crate::circuit::{build_first_bit_circuit, build_full_circuit, params_matrix, u_star_params, DecoderCircuit};
use crate::code::{codebook, Codeword, Target};
use crate::error::{invalid, Result};
use crate::linalg::{c, hermitian_eigenvalues, hermiticity_defect, kron_vec, outer, pseudo_inverse_sqrt_psd, trace, CMatrix, CVector};
use crate::simulator::{run_density, run_exact, sample_distribution, Distribution, NoiseModel};
use crate::transduction::herald_prob_ipp;

/// Symbols that must all transduce before a codeword can be decoded.
pub const JDR_SYMBOLS: i32 = 3;

const OPTIMALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    Noisy(NoiseModel),
    Sampled { shots: u64, seed: u64, noise: Option<NoiseModel> },
}

impl Mode {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Noisy(_) => "noisy",
            Self::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodewordResult {
    pub codeword: Codeword,
    pub first_bit_error: f64,
    pub block_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub mean_photon: f64,
    pub target: Target,
    pub mode: Mode,
    pub first_bit_error: f64,
    /// Present when the full decoder ran.
    pub block_error: Option<f64>,
    pub per_codeword: Vec<CodewordResult>,
}

impl DecodeResult {
    /// Error for the requested target.
    pub fn error(&self) -> f64 {
        match self.target {
            Target::FirstBit => self.first_bit_error,
            Target::Block => self.block_error.expect("full decoder reports block error"),
        }
    }

    pub fn shots(&self) -> Option<u64> {
        match self.mode {
            Mode::Sampled { shots, .. } => Some(shots),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            Mode::Sampled { seed, .. } => Some(seed),
            _ => None,
        }
    }
}

fn symbol(theta: f64, bit: u8) -> CVector {
    let s = if bit == 0 { 1.0 } else { -1.0 };
    CVector::from_vec(vec![c((theta / 2.0).cos()), c(s * (theta / 2.0).sin())])
}

/// Per-qubit received states for a codeword.
pub fn codeword_qubits(theta: f64, word: &Codeword) -> Vec<CVector> {
    word.bits().iter().map(|&b| symbol(theta, b)).collect()
}

fn codeword_state(theta: f64, word: &Codeword) -> CVector {
    let q = codeword_qubits(theta, word);
    kron_vec(&kron_vec(&q[0], &q[1]), &q[2])
}

/// Seed used for the codeword at position `index` of a sampled run.
pub fn codeword_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64) << 32)
}

fn record_distribution(dc: &DecoderCircuit, qubits: &[CVector], mode: &Mode, index: usize) -> Result<Distribution> {
    Ok(match mode {
        Mode::Exact => run_exact(&dc.circuit, qubits)?.distribution(),
        Mode::Noisy(noise) => run_density(&dc.circuit, qubits, noise)?,
        Mode::Sampled { shots, seed, noise } => {
            let exact = match noise {
                Some(n) => run_density(&dc.circuit, qubits, n)?,
                None => run_exact(&dc.circuit, qubits)?.distribution(),
            };
            sample_distribution(&exact, *shots, codeword_seed(*seed, index))?
                .into_iter()
                .map(|(r, k)| (r, k as f64 / *shots as f64))
                .collect()
        }
    })
}

fn check_n(n: f64) -> Result<ChannelParams> {
    if n.is_nan() || n <= 0.0 {
        return Err(invalid(format!("mean photon number must be > 0, got {n}")));
    }
    ChannelParams::from_mean_photon(n)
}

/// Runs the first-bit or full decoder on all four codewords.
pub fn decode(n: f64, target: Target, mode: &Mode) -> Result<DecodeResult> {
    let theta = check_n(n)?.angle();
    let dc = match target {
        Target::FirstBit => build_first_bit_circuit(theta)?,
        Target::Block => build_full_circuit(theta)?,
    };
    let mut per_codeword = Vec::with_capacity(4);
    for (i, word) in codebook().iter().enumerate() {
        let dist = record_distribution(&dc, &codeword_qubits(theta, word), mode, i)?;
        let mut first = 0.0;
        let mut block = 0.0;
        for (record, p) in &dist {
            let d = dc.decide(record);
            if d.first_bit != word.bit(0) {
                first += p;
            }
            if d.block.is_some_and(|b| b != *word) {
                block += p;
            }
        }
        per_codeword.push(CodewordResult {
            codeword: *word,
            first_bit_error: first,
            block_error: (target == Target::Block).then_some(block),
        });
    }
    let first_bit_error = per_codeword.iter().map(|r| r.first_bit_error).sum::<f64>() / 4.0;
    let block_error = (target == Target::Block)
        .then(|| per_codeword.iter().filter_map(|r| r.block_error).sum::<f64>() / 4.0);
    Ok(DecodeResult { mean_photon: n, target, mode: *mode, first_bit_error, block_error, per_codeword })
}

pub fn first_bit_error(n: f64, mode: &Mode) -> Result<f64> {
    Ok(decode(n, Target::FirstBit, mode)?.first_bit_error)
}

pub fn block_error(n: f64, mode: &Mode) -> Result<f64> {
    Ok(decode(n, Target::Block, mode)?.error())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if (0.0..1.0).contains(&sigma) {
        Ok(())
    } else {
        Err(invalid(format!("overlap must lie in [0, 1), got {sigma}")))
    }
}

/// First-bit error `((1 + s^2) - sqrt((1 - s^2)(1 + 3 s^2))) / 4` at overlap `s`.
pub fn first_bit_closed_form_sigma(sigma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(invalid(format!("overlap must lie in [0, 1], got {sigma}")));
    }
    let s2 = sigma * sigma;
    Ok(0.25 * ((1.0 + s2) - ((1.0 - s2) * (1.0 + 3.0 * s2)).sqrt()))
}

pub fn first_bit_closed_form(n: f64) -> Result<f64> {
    first_bit_closed_form_sigma(check_n(n)?.overlap())
}

/// Block error of the two-round strategy computed from state vectors: the
/// check/bit-node compression, an X measurement of the first qubit, and then
/// the Helstrom measurement between the two codewords consistent with it.
pub fn staged_oracle_block_error(n: f64) -> Result<f64> {
    staged_oracle_block_error_sigma(check_n(n)?.overlap())
}

pub fn staged_oracle_block_error_sigma(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let theta = sigma.acos();
    let check = u_star_params(theta, theta)?;
    let combiners = [
        params_matrix(&u_star_params(theta, check.theta0)?),
        params_matrix(&u_star_params(theta, check.theta1)?),
    ];
    let book = codebook();
    // residual[x][k]: unnormalized state of (q2, q3) after X outcome k on q1.
    let mut residual = Vec::with_capacity(4);
    for word in book.iter() {
        let q = codeword_qubits(theta, word);
        let mut psi = CVector::zeros(8);
        for (m, u) in combiners.iter().enumerate() {
            let branch = CVector::from_fn(2, |i, _| q[1][i] * q[2][i ^ m]);
            let phi = u * kron_vec(&q[0], &branch);
            for ab in 0..4 {
                psi[ab * 2 + m] = phi[ab];
            }
        }
        let outcome = |k: usize| {
            let h = [FRAC_1_SQRT_2, if k == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 }];
            CVector::from_fn(4, |bm, _| c(h[0]) * psi[bm] + c(h[1]) * psi[4 + bm])
        };
        residual.push([outcome(0), outcome(1)]);
    }
    let mut success = 0.0;
    for k in 0..2u8 {
        let idx: Vec<usize> = (0..4).filter(|&i| book.words()[i].bit(0) == k).collect();
        let (r, rp) = (&residual[idx[0]][k as usize], &residual[idx[1]][k as usize]);
        let (w, wp) = (r.norm_squared() / 4.0, rp.norm_squared() / 4.0);
        if w == 0.0 || wp == 0.0 {
            success += w + wp;
            continue;
        }
        let rho = outer(&(r / c(r.norm())));
        let rhop = outer(&(rp / c(rp.norm())));
        success += (w + wp) * (1.0 - trace_norm_binary_helstrom(&rho, &rhop, w / (w + wp))?);
    }
    Ok((1.0 - success).max(0.0))
}

/// Helstrom error for one code bit from the mixtures of the codeword states
/// sharing that bit value. `bit_index` counts from 1.
pub fn bitwise_helstrom_oracle(n: f64, bit_index: usize) -> Result<f64> {
    bitwise_helstrom_oracle_sigma(check_n(n)?.overlap(), bit_index)
}

pub fn bitwise_helstrom_oracle_sigma(sigma: f64, bit_index: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(invalid(format!("overlap must lie in [0, 1], got {sigma}")));
    }
    if !(1..=3).contains(&bit_index) {
        return Err(invalid(format!("bit index {bit_index} outside 1..=3")));
    }
    let theta = sigma.acos();
    let mut rho = [CMatrix::zeros(8, 8), CMatrix::zeros(8, 8)];
    for word in codebook().iter() {
        rho[word.bit(bit_index - 1) as usize] += outer(&codeword_state(theta, word)) * c(0.5);
    }
    trace_norm_binary_helstrom(&rho[0], &rho[1], 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrmLimit {
    /// Closed-form square-root-measurement error.
    pub error: f64,
    /// The same error from the explicit measurement operators.
    pub numeric_error: f64,
    /// Largest violation of the optimality conditions.
    pub max_violation: f64,
    /// False means the value is achievable but not certified optimal.
    pub optimality_verified: bool,
}

pub fn srm_block_limit(n: f64) -> Result<SrmLimit> {
    srm_block_limit_sigma(check_n(n)?.overlap())
}

/// Square-root measurement over the four codeword states, with a numerical
/// check that `Y - p_i rho_i` is positive semidefinite for `Y = sum p_i P_i rho_i`.
pub fn srm_block_limit_sigma(sigma: f64) -> Result<SrmLimit> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(invalid(format!("overlap must lie in [0, 1], got {sigma}")));
    }
    let s2 = sigma * sigma;
    let root = ((1.0 + 3.0 * s2).sqrt() + 3.0 * (1.0 - s2).sqrt()) / 4.0;
    let error = (1.0 - root * root).max(0.0);

    let theta = sigma.acos();
    let states: Vec<CMatrix> = codebook().iter().map(|w| outer(&codeword_state(theta, w))).collect();
    let total = states.iter().fold(CMatrix::zeros(8, 8), |acc, s| acc + s);
    let root_inv = pseudo_inverse_sqrt_psd(&total, 1e-12);
    let povm: Vec<CMatrix> = states.iter().map(|s| &root_inv * s * &root_inv).collect();
    let success: f64 = povm.iter().zip(&states).map(|(p, s)| 0.25 * trace(&(p * s)).re).sum();
    let upsilon = povm
        .iter()
        .zip(&states)
        .fold(CMatrix::zeros(8, 8), |acc, (p, s)| acc + p * s * c(0.25));
    let mut max_violation = hermiticity_defect(&upsilon);
    for s in &states {
        let lowest = hermitian_eigenvalues(&(&upsilon - s * c(0.25)))[0];
        max_violation = max_violation.max(-lowest);
    }
    let numeric_error = 1.0 - success;
    let optimality_verified =
        max_violation <= OPTIMALITY_TOL && (numeric_error - error).abs() <= OPTIMALITY_TOL;
    if !optimality_verified {
        log::warn!("square-root measurement optimality unverified at sigma = {sigma} (violation {max_violation:e})");
    }
    Ok(SrmLimit { error, numeric_error, max_violation, optimality_verified })
}

/// Pulse-area choice for the transduction stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseArea {
    InnerProductPreserving,
    Optimal,
}

/// Decoder error including transduction: all three symbols must herald, and a
/// failed herald counts as an error.
pub fn jdr_error(n: f64, target: Target) -> Result<f64> {
    jdr_error_with(n, target, PulseArea::InnerProductPreserving)
}

/// Composes a decoder error at `n` with inner-product-preserving transduction.
pub fn jdr_compose(n: f64, decoder_error: f64) -> Result<f64> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&decoder_error) {
        return Err(invalid(format!("decoder error {decoder_error} outside [0, 1]")));
    }
    Ok(1.0 - herald_prob_ipp(n.sqrt())?.powi(JDR_SYMBOLS) * (1.0 - decoder_error))
}

pub fn jdr_error_with(n: f64, target: Target, pulse: PulseArea) -> Result<f64> {
    check_n(n)?;
    let (herald, decoder) = match pulse {
        PulseArea::InnerProductPreserving => {
            let e = match target {
                Target::FirstBit => first_bit_error(n, &Mode::Exact)?,
                Target::Block => block_error(n, &Mode::Exact)?,
            };
            return jdr_compose(n, e);
        }
        PulseArea::Optimal => {
            // At pulse area pi/2 the heralded qubits have overlap |1 - N| / (1 + N).
            let sigma = (1.0 - n).abs() / (1.0 + n);
            let e = match target {
                Target::FirstBit => first_bit_closed_form_sigma(sigma)?,
                Target::Block => staged_oracle_block_error_sigma(sigma)?,
            };
            ((-n).exp() * (1.0 + n), e)
        }
    };
    Ok(1.0 - herald.powi(JDR_SYMBOLS) * (1.0 - decoder))
}
