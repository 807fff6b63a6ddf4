//! End-to-end hybrid compression accounting.
//!
//! A run samples `N` signals, Huffman-codes the membership string in blocks
//! of `k`, and sizes a q-ary block code for each subspace's realized
//! subsequence. Subsequences too short for the typical-subspace count are
//! stored raw; a one-dimensional subspace needs no quantum code at all.

use std::path::PathBuf;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::codec::{decode, encode, huffman_build, shannon_entropy_bits, BlockDistribution, MAX_BLOCK_BITS};
use crate::format::{serialize_decimal, OutputFormat};
use crate::quantum::von_neumann_entropy;
use crate::search::minimal_block_length;
use crate::source::{load_source, sample_sequence, DecomposableSource, Subspace};
use crate::split::membership_string;
use crate::typical::{d_lambda, fidelity_majority, site_weights, BigCount};
use crate::{Error, Result};

/// Longest sequence a single run will sample.
pub const MAX_SIGNALS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineParams {
    pub n: usize,
    /// Classical block length in membership bits.
    pub k: u32,
    /// Dimension of each quantum code carrier.
    pub q: u32,
    pub seed: u64,
}

impl PipelineParams {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SIGNALS).contains(&self.n) {
            return Err(Error::invalid(format!("N={} outside 1..={MAX_SIGNALS}", self.n)));
        }
        if !(1..=MAX_BLOCK_BITS).contains(&self.k) {
            return Err(Error::invalid(format!("k={} outside 1..={MAX_BLOCK_BITS}", self.k)));
        }
        if self.q < 2 {
            return Err(Error::invalid(format!("q={} must be at least 2", self.q)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub source: PathBuf,
    pub params: PipelineParams,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

/// How a subsequence is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sizing {
    /// One-dimensional subspace, `D = 1`.
    Degenerate,
    /// Fewer than 3 signals, `D = d^N`.
    Raw,
    /// Majority-species typical subspace, `D = D_Λ(d, N)`.
    Typical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubspaceReport {
    pub subspace: u8,
    /// Dimension of the subspace spanned by its signal states.
    pub d: usize,
    pub n_realized: usize,
    /// `round(P_k N)`.
    pub n_expected: usize,
    pub sizing: Sizing,
    #[serde(serialize_with = "serialize_decimal")]
    pub d_lambda: BigCount,
    /// Minimal q-ary block length for the realized subsequence.
    pub m: u32,
    pub qubits: f64,
    pub expected_sizing: Sizing,
    #[serde(serialize_with = "serialize_decimal")]
    pub d_lambda_expected: BigCount,
    pub m_expected: u32,
    /// `m - m_expected`: extra (or saved) code symbols forced by fluctuation.
    pub m_delta: i64,
    /// `Tr(ρ_k^{⊗N_k} W_λ)`; 1 when nothing is discarded.
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n_total: usize,
    pub n1: usize,
    pub n2: usize,
    pub seed: u64,
    pub k: u32,
    pub q: u32,
    pub p1: f64,
    pub p2: f64,
    /// `H(X)` of the membership bit.
    pub h_x_bound: f64,
    /// Expected Huffman codeword bits per signal.
    pub classical_bits_per_signal: f64,
    /// Payload bits actually emitted per signal, block padding included.
    pub realized_bits_per_signal: f64,
    pub stream_bytes: usize,
    pub round_trip_ok: bool,
    pub s1: f64,
    pub s2: f64,
    pub s_rho: f64,
    /// `S(ρ) - H(X) - P1 S(ρ1) - P2 S(ρ2)`.
    pub entropy_residual: f64,
    pub subspaces: Vec<SubspaceReport>,
    /// `Σ_k M_k log2 q` for the realized subsequences.
    pub quantum_qubits: f64,
    pub quantum_qubits_expected: f64,
    /// Classical rate plus quantum qubits, per signal.
    pub total_per_signal: f64,
    /// `S(ρ)`, the per-signal lower bound.
    pub bound_per_signal: f64,
}

fn size_block(d: usize, n: usize) -> Result<(Sizing, BigCount)> {
    if d == 1 {
        Ok((Sizing::Degenerate, BigUint::one()))
    } else if n < 3 {
        Ok((Sizing::Raw, BigUint::from(d).pow(n as u32)))
    } else {
        let n = u32::try_from(n).map_err(|_| Error::TooLarge(format!("block length {n}")))?;
        Ok((Sizing::Typical, d_lambda(d as u32, n)?))
    }
}

fn subspace_report(source: &DecomposableSource, k: Subspace, realized: usize, total: usize, q: u32) -> Result<SubspaceReport> {
    let d = source.sub(k).len();
    let expected = (source.weight(k) * total as f64).round() as usize;
    let (sizing, dl) = size_block(d, realized)?;
    let (expected_sizing, dl_expected) = size_block(d, expected)?;
    let m = minimal_block_length(&dl, q)?;
    let m_expected = minimal_block_length(&dl_expected, q)?;
    let fidelity = if sizing == Sizing::Typical {
        let ens = source.sub(k);
        let w = site_weights(&ens.density(), &ens.span_basis(), &[])?;
        fidelity_majority(&w, realized as u32)?
    } else {
        1.0
    };
    Ok(SubspaceReport {
        subspace: k.number(),
        d,
        n_realized: realized,
        n_expected: expected,
        sizing,
        d_lambda: dl,
        m,
        qubits: m as f64 * (q as f64).log2(),
        expected_sizing,
        d_lambda_expected: dl_expected,
        m_expected,
        m_delta: m as i64 - m_expected as i64,
        fidelity,
    })
}

/// Runs the accounting on an in-memory source.
pub fn run_on_source(source: &DecomposableSource, params: &PipelineParams) -> Result<PipelineReport> {
    params.validate()?;
    let seq = sample_sequence(source, params.n, params.seed)?;
    let bits = membership_string(&seq);
    let dist = BlockDistribution::iid(source.p1(), params.k)?;
    let book = huffman_build(&dist);
    let stream = encode(&book, &bits)?;
    let round_trip_ok = decode(&book, &stream.to_bytes())? == bits;

    let n1 = seq.count(Subspace::H1);
    let n2 = seq.count(Subspace::H2);
    let h_x = shannon_entropy_bits(source.p1())?;
    let s1 = von_neumann_entropy(&source.rho1())?;
    let s2 = von_neumann_entropy(&source.rho2())?;
    let s_rho = von_neumann_entropy(&source.total_density())?;
    let subspaces = vec![
        subspace_report(source, Subspace::H1, n1, params.n, params.q)?,
        subspace_report(source, Subspace::H2, n2, params.n, params.q)?,
    ];
    let log_q = (params.q as f64).log2();
    let quantum_qubits = subspaces.iter().map(|s| s.qubits).sum::<f64>();
    let quantum_qubits_expected = subspaces.iter().map(|s| s.m_expected as f64 * log_q).sum();
    let classical = book.expected_length(&dist) / params.k as f64;
    let n = params.n as f64;
    Ok(PipelineReport {
        n_total: params.n,
        n1,
        n2,
        seed: params.seed,
        k: params.k,
        q: params.q,
        p1: source.p1(),
        p2: source.p2(),
        h_x_bound: h_x,
        classical_bits_per_signal: classical,
        realized_bits_per_signal: stream.payload_bits as f64 / n,
        stream_bytes: stream.to_bytes().len(),
        round_trip_ok,
        s1,
        s2,
        s_rho,
        entropy_residual: s_rho - h_x - source.p1() * s1 - source.p2() * s2,
        subspaces,
        quantum_qubits,
        quantum_qubits_expected,
        total_per_signal: classical + quantum_qubits / n,
        bound_per_signal: s_rho,
    })
}

/// Loads the configured source file and runs the accounting.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineReport> {
    let source = load_source(&config.source)?.into_decomposable()?;
    run_on_source(&source, &config.params)
}
