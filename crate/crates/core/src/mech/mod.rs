//! Randomness and privacy primitives.

mod budget;
mod rng;

pub use budget::PrivacyBudget;
pub use rng::{RandomSource, Role, Stream, TrialSource};

use rand::RngCore;

use crate::error::{Error, Result};
use crate::graph::NeighborList;

/// Draws from `Lap(scale)` (density `exp(-|x|/scale) / (2·scale)`).
///
/// Inverse CDF on a uniform `u` in the open interval `(-1/2, 1/2)`:
/// `-scale·sgn(u)·ln(1 - 2|u|)`. Scale 0 and the silent stream give 0.
pub fn laplace(stream: &mut Stream, scale: f64) -> Result<f64> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::invalid(format!("Laplace scale {scale} must be finite and >= 0")));
    }
    if scale == 0.0 || stream.is_silent() {
        return Ok(0.0);
    }
    // 52 random bits, offset by half a step: strictly inside (0, 1), exact.
    let v = ((stream.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64);
    let u = v - 0.5;
    Ok(-scale * u.signum() * (-2.0 * u.abs()).ln_1p())
}

/// Randomized-response flip probability `1 / (e^eps + 1)`.
pub fn rr_flip_prob(eps: f64) -> f64 {
    1.0 / (eps.exp() + 1.0)
}

/// Keeps `bit` with probability `e^eps / (e^eps + 1)`, flips it otherwise.
/// Always consumes exactly one draw from a live stream.
pub fn rr_bit(stream: &mut Stream, eps: f64, bit: bool) -> bool {
    if stream.is_silent() {
        return bit;
    }
    let unit = (stream.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    bit ^ (unit < rr_flip_prob(eps))
}

/// A released bit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// User-side round of randomized response on the lower-triangular part of
/// the adjacency matrix: `R_i = (RR(a_{i,0}), ..., RR(a_{i,i-1}))`.
///
/// Draw `j` of the stream decides column `j`, which lets a collector
/// materialize single entries later with [`Stream::seek_draw`] and get the
/// same bit.
pub fn rr_lower_row(stream: &mut Stream, eps: f64, a: &NeighborList) -> BitRow {
    let owner = a.owner();
    let mut row = BitRow::zeros(owner);
    let mut lower = a.lower().iter().peekable();
    for j in 0..owner {
        let bit = lower.next_if(|&&v| v as usize == j).is_some();
        if rr_bit(stream, eps, bit) {
            row.set(j, true);
        }
    }
    row
}
