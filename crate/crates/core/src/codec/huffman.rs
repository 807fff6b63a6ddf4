use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use crate::quantum::PROB_SUM_TOL;
use crate::{Error, Result};

/// Largest supported block length in bits.
pub const MAX_BLOCK_BITS: u32 = 16;

/// Distribution over the `2^k` values of a `k`-bit block.
///
/// Block symbols read their bits most-significant first, so the block `01`
/// is symbol 1 and `10` is symbol 2.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDistribution {
    k: u32,
    probs: Vec<f64>,
}

impl BlockDistribution {
    pub fn new(k: u32, probs: Vec<f64>) -> Result<Self> {
        check_block_bits(k)?;
        if probs.len() != 1usize << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                found: probs.len(),
            });
        }
        crate::quantum::check_probabilities(&probs)?;
        Ok(Self { k, probs })
    }

    /// i.i.d. membership bits: 0 (from `H1`) with probability `p1`, 1 with `1 - p1`.
    pub fn iid(p1: f64, k: u32) -> Result<Self> {
        check_block_bits(k)?;
        if !(0.0..=1.0).contains(&p1) {
            return Err(Error::ProbabilityOutOfRange(p1));
        }
        let p2 = 1.0 - p1;
        let probs: Vec<f64> = (0u32..1 << k)
            .map(|sym| {
                let ones = sym.count_ones() as i32;
                p1.powi(k as i32 - ones) * p2.powi(ones)
            })
            .collect();
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::NotNormalizedProbabilities(total));
        }
        Ok(Self { k, probs })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Shannon entropy of one block in bits.
    pub fn entropy(&self) -> f64 {
        crate::quantum::shannon_entropy(&self.probs)
    }
}

pub(crate) fn check_block_bits(k: u32) -> Result<()> {
    if (1..=MAX_BLOCK_BITS).contains(&k) {
        Ok(())
    } else {
        Err(Error::invalid(format!("block length k={k} outside 1..={MAX_BLOCK_BITS}")))
    }
}

/// Bit string, most significant (first transmitted) bit first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(Vec<bool>);

impl Codeword {
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Codeword) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Binary increment of a fixed-width word.
    fn increment(&mut self) {
        for b in self.0.iter_mut().rev() {
            if *b {
                *b = false;
            } else {
                *b = true;
                return;
            }
        }
        panic!("canonical code overflow: Kraft inequality violated");
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Codeword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!("codeword bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Codeword)
    }
}

#[derive(Clone, Copy, Debug)]
enum TrieNode {
    Branch([Option<u32>; 2]),
    Leaf(u32),
}

/// Canonical prefix code over the block symbols with nonzero probability.
#[derive(Clone, Debug)]
pub struct HuffmanCodebook {
    k: u32,
    codewords: Vec<Option<Codeword>>,
    trie: Vec<TrieNode>,
}

impl PartialEq for HuffmanCodebook {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.codewords == other.codewords
    }
}

#[derive(Debug, PartialEq)]
struct HeapKey {
    prob: f64,
    id: usize,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob.total_cmp(&other.prob).then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Builds an optimal prefix code for the block distribution.
///
/// Merges always take the two lowest-probability nodes, ties going to the
/// node created first (leaves are created in ascending symbol order). The
/// resulting lengths are then reassigned by probability rank (ties by
/// ascending symbol) and codewords assigned canonically in (length, symbol)
/// order. Zero-probability symbols get no codeword; a distribution with a
/// single possible block gets the 1-bit codeword `0`.
pub fn huffman_build(dist: &BlockDistribution) -> HuffmanCodebook {
    let live: Vec<usize> = (0..dist.probs.len()).filter(|&s| dist.probs[s] > 0.0).collect();
    let mut lengths = vec![0usize; dist.probs.len()];

    if live.len() == 1 {
        lengths[live[0]] = 1;
    } else {
        // parent links over leaves 0..live.len() followed by internal nodes
        let mut parent: Vec<usize> = Vec::with_capacity(2 * live.len());
        let mut heap = BinaryHeap::new();
        for (id, &sym) in live.iter().enumerate() {
            parent.push(usize::MAX);
            heap.push(Reverse(HeapKey {
                prob: dist.probs[sym],
                id,
            }));
        }
        while heap.len() > 1 {
            let Reverse(a) = heap.pop().expect("len > 1");
            let Reverse(b) = heap.pop().expect("len > 1");
            let id = parent.len();
            parent.push(usize::MAX);
            parent[a.id] = id;
            parent[b.id] = id;
            heap.push(Reverse(HeapKey {
                prob: a.prob + b.prob,
                id,
            }));
        }
        let mut depth = vec![0usize; parent.len()];
        for id in (0..parent.len()).rev() {
            if parent[id] != usize::MAX {
                depth[id] = depth[parent[id]] + 1;
            }
        }
        let mut by_rank = live.clone();
        by_rank.sort_by(|&a, &b| dist.probs[b].total_cmp(&dist.probs[a]).then(a.cmp(&b)));
        let mut sorted_lengths: Vec<usize> = (0..live.len()).map(|id| depth[id]).collect();
        sorted_lengths.sort_unstable();
        for (&sym, &len) in by_rank.iter().zip(&sorted_lengths) {
            lengths[sym] = len;
        }
    }
    HuffmanCodebook::from_lengths(dist.k, &lengths).expect("Huffman lengths satisfy Kraft")
}

impl HuffmanCodebook {
    /// Canonical code for per-symbol lengths (0 = no codeword).
    pub fn from_lengths(k: u32, lengths: &[usize]) -> Result<Self> {
        check_block_bits(k)?;
        if lengths.len() != 1usize << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                found: lengths.len(),
            });
        }
        let kraft: f64 = lengths.iter().filter(|&&l| l > 0).map(|&l| 0.5f64.powi(l as i32)).sum();
        if kraft > 1.0 + 1e-12 {
            return Err(Error::invalid(format!("lengths violate Kraft inequality (sum {kraft})")));
        }
        let mut order: Vec<usize> = (0..lengths.len()).filter(|&s| lengths[s] > 0).collect();
        order.sort_by_key(|&s| (lengths[s], s));

        let mut codewords = vec![None; lengths.len()];
        let mut code: Option<Codeword> = None;
        for &sym in &order {
            let len = lengths[sym];
            let next = match code.take() {
                None => Codeword(vec![false; len]),
                Some(mut c) => {
                    c.increment();
                    c.0.resize(len, false);
                    c
                }
            };
            codewords[sym] = Some(next.clone());
            code = Some(next);
        }
        let trie = build_trie(&codewords);
        Ok(Self { k, codewords, trie })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn codeword(&self, symbol: u32) -> Option<&Codeword> {
        self.codewords.get(symbol as usize).and_then(Option::as_ref)
    }

    /// `(symbol, codeword)` pairs in ascending symbol order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &Codeword)> {
        self.codewords
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.as_ref().map(|c| (s as u32, c)))
    }

    /// Codeword length per symbol, 0 where a symbol has none.
    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(|c| c.as_ref().map_or(0, Codeword::len)).collect()
    }

    pub fn kraft_sum(&self) -> f64 {
        self.entries().map(|(_, c)| 0.5f64.powi(c.len() as i32)).sum()
    }

    pub fn is_prefix_free(&self) -> bool {
        let mut words: Vec<&Codeword> = self.entries().map(|(_, c)| c).collect();
        words.sort();
        // in lexicographic order a prefix sorts immediately before some word it prefixes
        words.windows(2).all(|w| !w[0].is_prefix_of(w[1]))
    }

    /// Expected codeword length in bits per block.
    pub fn expected_length(&self, dist: &BlockDistribution) -> f64 {
        dist.probs
            .iter()
            .zip(self.lengths())
            .map(|(p, l)| p * l as f64)
            .sum()
    }

    /// Reads one symbol; `Ok(None)` when `bits` is exhausted at a codeword boundary.
    pub(crate) fn decode_symbol(&self, bits: &mut impl Iterator<Item = bool>) -> Result<Option<u32>> {
        let mut node = 0u32;
        let mut consumed = 0usize;
        loop {
            match self.trie[node as usize] {
                TrieNode::Leaf(sym) => return Ok(Some(sym)),
                TrieNode::Branch(children) => {
                    let Some(bit) = bits.next() else {
                        return if consumed == 0 {
                            Ok(None)
                        } else {
                            Err(Error::Truncated(format!("stream ends after {consumed} bits of a codeword")))
                        };
                    };
                    consumed += 1;
                    node = children[bit as usize]
                        .ok_or_else(|| Error::invalid("bit sequence is not a codeword prefix"))?;
                }
            }
        }
    }
}

fn build_trie(codewords: &[Option<Codeword>]) -> Vec<TrieNode> {
    let mut trie = vec![TrieNode::Branch([None, None])];
    for (sym, cw) in codewords.iter().enumerate() {
        let Some(cw) = cw else { continue };
        let mut node = 0usize;
        for (i, &bit) in cw.0.iter().enumerate() {
            let last = i + 1 == cw.len();
            let TrieNode::Branch(children) = trie[node] else {
                unreachable!("prefix-free code");
            };
            node = match children[bit as usize] {
                Some(n) => n as usize,
                None => {
                    let id = trie.len();
                    trie.push(if last {
                        TrieNode::Leaf(sym as u32)
                    } else {
                        TrieNode::Branch([None, None])
                    });
                    if let TrieNode::Branch(ref mut ch) = trie[node] {
                        ch[bit as usize] = Some(id as u32);
                    }
                    id
                }
            };
        }
    }
    trie
}
