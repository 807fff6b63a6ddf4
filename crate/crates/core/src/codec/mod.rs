//! Classical block coding of membership strings.

mod huffman;
mod stream;

pub use huffman::{huffman_build, BlockDistribution, Codeword, HuffmanCodebook, MAX_BLOCK_BITS};
pub use stream::{decode, encode, EncodedStream};

use crate::{Error, Result};

/// Binary entropy `-P1 log2 P1 - P2 log2 P2` in bits, with `0 log 0 := 0`.
pub fn shannon_entropy_bits(p1: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::ProbabilityOutOfRange(p1));
    }
    Ok(crate::quantum::shannon_entropy(&[p1, 1.0 - p1]))
}

/// Expected bits per membership bit of the Huffman code over i.i.d. `k`-bit blocks.
///
/// Satisfies `H ≤ rate < H + 1/k` whenever both bit values are possible.
pub fn measured_rate(p1: f64, k: u32) -> Result<f64> {
    let dist = BlockDistribution::iid(p1, k)?;
    let cb = huffman_build(&dist);
    Ok(cb.expected_length(&dist) / k as f64)
}
