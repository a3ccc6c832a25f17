//! Execution engines for decoder circuits.

mod density;
mod exact;

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{invalid, Error, Result};
use crate::linalg::{kron_vec, CVector};

pub use density::{apply_depolarizing, run_density};
pub use exact::{run_exact, BranchState, ExactRun};

/// Branches whose probability falls below this are dropped and accounted for.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Probability of each classical record.
pub type Distribution = BTreeMap<Vec<u8>, f64>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p1: f64,
    p2: f64,
    prep_fail: f64,
}

impl NoiseModel {
    pub const DEFAULT_PREP_FAIL: f64 = 1e-6;

    pub fn new(p1: f64, p2: f64, prep_fail: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("prep_fail", prep_fail)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(Self { p1, p2, prep_fail })
    }

    pub fn noiseless() -> Self {
        Self { p1: 0.0, p2: 0.0, prep_fail: 0.0 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn prep_fail(&self) -> f64 {
        self.prep_fail
    }
}

fn check_initial(circuit: &Circuit, qubits: &[CVector]) -> Result<()> {
    if qubits.len() != circuit.num_qubits() {
        return Err(invalid(format!(
            "{} input qubits for a {}-qubit circuit",
            qubits.len(),
            circuit.num_qubits()
        )));
    }
    for (k, q) in qubits.iter().enumerate() {
        if q.len() != 2 || (q.norm() - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("input qubit {k} is not a normalized 2-vector")));
        }
    }
    Ok(())
}

pub(crate) fn product_state(qubits: &[CVector]) -> CVector {
    qubits
        .iter()
        .fold(CVector::from_element(1, crate::linalg::ONE), |acc, q| kron_vec(&acc, q))
}

/// Seeded draw of `shots` records from a distribution.
pub fn sample_distribution(dist: &Distribution, shots: u64, seed: u64) -> Result<BTreeMap<Vec<u8>, u64>> {
    if shots == 0 {
        return Err(invalid("shots must be at least 1"));
    }
    let records: Vec<&Vec<u8>> = dist.keys().collect();
    let weights: Vec<f64> = dist.values().map(|w| w.max(0.0)).collect();
    let index = WeightedIndex::new(&weights)
        .map_err(|e| Error::Consistency(format!("unusable outcome distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(records[index.sample(&mut rng)].clone()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Shot counts from the exact engine, or the density engine when `noise` is given.
pub fn sample(
    circuit: &Circuit,
    qubits: &[CVector],
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<BTreeMap<Vec<u8>, u64>> {
    let dist = match noise {
        Some(n) => run_density(circuit, qubits, n)?,
        None => run_exact(circuit, qubits)?.distribution(),
    };
    sample_distribution(&dist, shots, seed)
}
