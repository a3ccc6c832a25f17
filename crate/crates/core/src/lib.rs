//! Exact desk-scale simulation of a quantum joint-detection receiver for
//! BPSK-modulated codewords of the 3-bit single-parity-check tree code.
//!
//! The crate covers the photon-to-ion transduction model, the gate-level
//! belief-propagation-with-quantum-messages decoder, exact and noisy circuit
//! engines, classical and quantum baselines, capacities and link budgets.

pub mod capacity;
pub mod channel;
pub mod circuit;
pub mod code;
pub mod error;
pub mod linalg;
pub mod receiver;
pub mod simulator;
pub mod transduction;

pub use error::{Error, Result};
