//! The 3-bit single-parity-check tree code `x1 ^ x2 ^ x3 = 0` and exact
//! classical maximum-likelihood baselines over hard symbol decisions.

use std::fmt;

use crate::channel::ChannelParams;
use crate::error::{invalid, Result};

/// A codeword of the parity-check code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword([u8; 3]);

impl Codeword {
    pub fn new(bits: [u8; 3]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(invalid(format!("codeword bits must be 0 or 1, got {bits:?}")));
        }
        if bits[0] ^ bits[1] ^ bits[2] != 0 {
            return Err(invalid(format!("{bits:?} violates the parity check")));
        }
        Ok(Self(bits))
    }

    pub fn bits(&self) -> [u8; 3] {
        self.0
    }

    pub fn bit(&self, index: usize) -> u8 {
        self.0[index]
    }

    pub fn xor(&self, other: &Codeword) -> Codeword {
        Codeword([self.0[0] ^ other.0[0], self.0[1] ^ other.0[1], self.0[2] ^ other.0[2]])
    }

    /// BPSK sign of each symbol, `(-1)^{x_i}`.
    pub fn signs(&self) -> [f64; 3] {
        self.0.map(|b| if b == 0 { 1.0 } else { -1.0 })
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    words: [Codeword; 4],
}

impl Codebook {
    pub fn words(&self) -> &[Codeword; 4] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = &Codeword> {
        self.words.iter()
    }

    pub fn contains(&self, word: &Codeword) -> bool {
        self.words.contains(word)
    }
}

/// `{000, 110, 101, 011}` in that order.
pub fn codebook() -> Codebook {
    Codebook {
        words: [
            Codeword([0, 0, 0]),
            Codeword([1, 1, 0]),
            Codeword([1, 0, 1]),
            Codeword([0, 1, 1]),
        ],
    }
}

fn check_crossover(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("symbol error probability must lie in [0, 0.5], got {p}")))
    }
}

fn hamming(a: [u8; 3], b: [u8; 3]) -> u32 {
    a.iter().zip(b.iter()).map(|(x, y)| u32::from(x != y)).sum()
}

fn likelihood(received: [u8; 3], sent: [u8; 3], p: f64) -> f64 {
    let d = hamming(received, sent) as i32;
    p.powi(d) * (1.0 - p).powi(3 - d)
}

/// Every received word with its probability given `sent`.
fn received_words(sent: Codeword, p: f64) -> impl Iterator<Item = ([u8; 3], f64)> {
    (0u8..8).map(move |pattern| {
        let flips = [(pattern >> 2) & 1, (pattern >> 1) & 1, pattern & 1];
        let r = [
            sent.0[0] ^ flips[0],
            sent.0[1] ^ flips[1],
            sent.0[2] ^ flips[2],
        ];
        (r, likelihood(r, sent.0, p))
    })
}

/// Average block error of minimum-Hamming-distance decoding on a binary
/// symmetric channel, with ties split uniformly and exactly.
pub fn ml_block_error_bsc(p: f64) -> Result<f64> {
    check_crossover(p)?;
    let book = codebook();
    let mut success = 0.0;
    for &sent in book.iter() {
        for (r, prob) in received_words(sent, p) {
            let dists: Vec<u32> = book.iter().map(|c| hamming(r, c.0)).collect();
            let best = *dists.iter().min().expect("non-empty codebook");
            let ties = dists.iter().filter(|&&d| d == best).count();
            if hamming(r, sent.0) == best {
                success += prob / ties as f64;
            }
        }
    }
    Ok(1.0 - success / 4.0)
}

/// Average error of the bitwise MAP decision on `x1`, with posterior mass
/// summed over the codewords agreeing on each value of `x1`.
pub fn ml_first_bit_error_bsc(p: f64) -> Result<f64> {
    check_crossover(p)?;
    let book = codebook();
    let mut error = 0.0;
    for &sent in book.iter() {
        for (r, prob) in received_words(sent, p) {
            let mut post = [0.0; 2];
            for c in book.iter() {
                post[c.0[0] as usize] += likelihood(r, c.0, p);
            }
            let scale = post[0].max(post[1]);
            let truth = sent.0[0] as usize;
            if (post[0] - post[1]).abs() <= 1e-12 * scale {
                error += 0.5 * prob;
            } else if post[1 - truth] > post[truth] {
                error += prob;
            }
        }
    }
    Ok(error / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    Helstrom,
    Homodyne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    FirstBit,
    Block,
}

/// Symbol-by-symbol detection followed by classical ML decoding.
pub fn classical_bound(n: f64, detector: Detector, target: Target) -> Result<f64> {
    if n.is_nan() || n <= 0.0 {
        return Err(invalid(format!("mean photon number must be > 0, got {n}")));
    }
    let ch = ChannelParams::from_mean_photon(n)?;
    let p = match detector {
        Detector::Helstrom => ch.helstrom_error(),
        Detector::Homodyne => ch.homodyne_error(),
    };
    match target {
        Target::FirstBit => ml_first_bit_error_bsc(p),
        Target::Block => ml_block_error_bsc(p),
    }
}
