//! Wire layout: 8-byte little-endian unpadded bit count, then the
//! concatenated codewords packed most-significant-bit first into octets.
//! Unused low bits of the final octet are zero.

use super::huffman::HuffmanCodebook;
use crate::split::MembershipString;
use crate::{Error, Result};

const HEADER_LEN: usize = 8;

/// Huffman-coded membership string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedStream {
    /// Length of the membership string before block padding.
    pub original_len: u64,
    /// Zero bits appended to reach a multiple of the block length.
    pub padding: usize,
    /// Number of codeword bits in the payload.
    pub payload_bits: usize,
    payload: Vec<u8>,
}

impl EncodedStream {
    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Header followed by the packed payload.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.original_len.to_le_bytes());
        out.extend_from_slice(&self.payload);
        out
    }
}

struct BitWriter {
    bytes: Vec<u8>,
    bits: usize,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        if self.bits % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("pushed") |= 0x80 >> (self.bits % 8);
        }
        self.bits += 1;
    }
}

fn block_symbols(bits: &[bool], k: usize) -> impl Iterator<Item = u32> + '_ {
    bits.chunks(k).map(move |chunk| {
        let mut sym = 0u32;
        for i in 0..k {
            sym = (sym << 1) | chunk.get(i).copied().unwrap_or(false) as u32;
        }
        sym
    })
}

/// Pads with zero bits to a multiple of `k` and emits one codeword per block.
pub fn encode(codebook: &HuffmanCodebook, bits: &MembershipString) -> Result<EncodedStream> {
    let k = codebook.k() as usize;
    let mut w = BitWriter {
        bytes: Vec::new(),
        bits: 0,
    };
    for sym in block_symbols(bits.bits(), k) {
        let cw = codebook.codeword(sym).ok_or(Error::UnknownSymbol(sym))?;
        for &b in cw.bits() {
            w.push(b);
        }
    }
    let padding = (k - bits.len() % k) % k;
    Ok(EncodedStream {
        original_len: bits.len() as u64,
        padding,
        payload_bits: w.bits,
        payload: w.bytes,
    })
}

/// Inverse of [`encode`] over the wire layout from [`EncodedStream::to_bytes`].
pub fn decode(codebook: &HuffmanCodebook, stream: &[u8]) -> Result<MembershipString> {
    if stream.len() < HEADER_LEN {
        return Err(Error::Truncated(format!("{}-byte stream has no length header", stream.len())));
    }
    let (header, payload) = stream.split_at(HEADER_LEN);
    let original_len = u64::from_le_bytes(header.try_into().expect("8 bytes"));
    let original_len = usize::try_from(original_len)
        .map_err(|_| Error::invalid(format!("length header {original_len} too large")))?;
    let k = codebook.k() as usize;
    let blocks = original_len.div_ceil(k);

    let mut bit_iter = payload
        .iter()
        .flat_map(|byte| (0..8).map(move |i| byte & (0x80 >> i) != 0));
    let mut out = Vec::with_capacity(blocks * k);
    for b in 0..blocks {
        let sym = codebook.decode_symbol(&mut bit_iter)?.ok_or_else(|| {
            Error::Truncated(format!("stream ends after {b} of {blocks} blocks"))
        })?;
        for i in (0..k).rev() {
            out.push((sym >> i) & 1 == 1);
        }
    }
    out.truncate(original_len);
    Ok(MembershipString::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{huffman_build, BlockDistribution};

    fn quarter_codebook() -> HuffmanCodebook {
        huffman_build(&BlockDistribution::iid(0.25, 2).unwrap())
    }

    #[test]
    fn empty_string_gives_empty_payload() {
        let s = encode(&quarter_codebook(), &MembershipString::default()).unwrap();
        assert_eq!(s.payload_bits, 0);
        assert_eq!(s.to_bytes(), vec![0u8; 8]);
        assert!(decode(&quarter_codebook(), &s.to_bytes()).unwrap().is_empty());
    }

    #[test]
    fn concatenates_block_codewords() {
        let cb = quarter_codebook();
        let s = encode(&cb, &"0110".parse().unwrap()).unwrap();
        // blocks 01 -> "10", 10 -> "111"
        assert_eq!(s.payload_bits, 5);
        assert_eq!(s.payload(), &[0b1011_1000]);
        assert_eq!(s.to_bytes(), vec![4, 0, 0, 0, 0, 0, 0, 0, 0b1011_1000]);
        assert_eq!(decode(&cb, &s.to_bytes()).unwrap().to_string(), "0110");
    }

    #[test]
    fn odd_length_is_padded_and_restored() {
        let cb = quarter_codebook();
        let s = encode(&cb, &"011".parse().unwrap()).unwrap();
        assert_eq!(s.padding, 1);
        assert_eq!(decode(&cb, &s.to_bytes()).unwrap().to_string(), "011");
    }

    #[test]
    fn truncated_stream_is_an_error() {
        let cb = quarter_codebook();
        let bytes = encode(&cb, &"00000000".parse().unwrap()).unwrap().to_bytes();
        // four blocks of "110": 12 payload bits over 2 bytes
        assert_eq!(bytes.len(), 10);
        assert!(matches!(decode(&cb, &bytes[..9]), Err(Error::Truncated(_))));
        assert!(matches!(decode(&cb, &bytes[..5]), Err(Error::Truncated(_))));
    }

    #[test]
    fn symbol_without_codeword_is_rejected() {
        let cb = huffman_build(&BlockDistribution::iid(1.0, 2).unwrap());
        assert!(matches!(encode(&cb, &"01".parse().unwrap()), Err(Error::UnknownSymbol(1))));
    }
}
