//! Membership extraction and the orthogonal-subspace entropy decomposition.

use std::fmt;

use serde::Serialize;

use crate::codec::shannon_entropy_bits;
use crate::quantum::{
    hermitian_eigensystem, projector_from_basis, von_neumann_entropy,
    DensityOperator, Projector,
};
use crate::source::{DecomposableSource, SignalEnsemble, SignalSequence, Subspace};
use crate::{Error, Result};

/// Eigenvalues above this define the support of a density operator.
pub const SUPPORT_TOL: f64 = 1e-10;

/// `Π1 = Σ_j |e1_j><e1_j|`, the projector onto `H1`.
pub fn projector_pi1(source: &DecomposableSource) -> Projector {
    projector_from_basis(source.basis1()).expect("source bases are orthonormal")
}

/// Bit `i` is 0 when signal `i` came from `H1` and 1 when it came from `H2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MembershipString {
    bits: Vec<bool>,
}

impl MembershipString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_zeros(&self) -> usize {
        self.bits.iter().filter(|b| !**b).count()
    }
}

impl fmt::Display for MembershipString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for MembershipString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!("membership bit {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

pub fn membership_string(seq: &SignalSequence) -> MembershipString {
    MembershipString::new(seq.entries().iter().map(|s| s.subspace == Subspace::H2).collect())
}

/// Terms of `S(ρ) = H(X) + P1 S(ρ1) + P2 S(ρ2)`, all in bits.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub p1: f64,
    pub p2: f64,
    pub s_total: f64,
    pub h_x: f64,
    pub s1: f64,
    pub s2: f64,
    /// `s_total - h_x - p1 s1 - p2 s2`.
    pub residual: f64,
}

pub fn entropy_decomposition(source: &DecomposableSource) -> EntropyReport {
    let p1 = source.p1();
    let p2 = source.p2();
    let s_total = von_neumann_entropy(&source.total_density()).expect("valid density");
    let s1 = von_neumann_entropy(&source.rho1()).expect("valid density");
    let s2 = von_neumann_entropy(&source.rho2()).expect("valid density");
    let h_x = shannon_entropy_bits(p1).expect("p1 validated");
    EntropyReport {
        p1,
        p2,
        s_total,
        h_x,
        s1,
        s2,
        residual: s_total - h_x - p1 * s1 - p2 * s2,
    }
}

/// `H(X) + P1 S(ρ1) + P2 S(ρ2) - S(P1 ρ1 + P2 ρ2)`.
///
/// Nonnegative for any pair of ensembles and zero exactly when their
/// supports are orthogonal; a positive gap is the entropy the membership
/// string spends on distinctions the quantum states cannot carry.
pub fn subadditivity_gap(p1: f64, ens1: &SignalEnsemble, ens2: &SignalEnsemble) -> Result<f64> {
    let h_x = shannon_entropy_bits(p1)?;
    let rho1 = ens1.density();
    let rho2 = ens2.density();
    let mixed = rho1.mix(p1, &rho2)?;
    let s = von_neumann_entropy(&mixed)?;
    let s1 = von_neumann_entropy(&rho1)?;
    let s2 = von_neumann_entropy(&rho2)?;
    Ok(h_x + p1 * s1 + (1.0 - p1) * s2 - s)
}

/// Support overlaps `(‖Π_supp(ρ1) ρ2 Π_supp(ρ1)‖_1, ‖Π_supp(ρ2) ρ1 Π_supp(ρ2)‖_1)`.
///
/// Both vanish iff the supports are orthogonal, which is the condition under
/// which `Tr(ρ1 log ρ2) = Tr(ρ2 log ρ1) = 0`.
pub fn orthogonality_trace_check(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<(f64, f64)> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    Ok((compressed_trace_norm(rho1, rho2)?, compressed_trace_norm(rho2, rho1)?))
}

fn compressed_trace_norm(support_of: &DensityOperator, target: &DensityOperator) -> Result<f64> {
    let p = support_of.spectrum().support_projector(SUPPORT_TOL);
    let compressed = &(&p * target.matrix()) * &p;
    let spec = hermitian_eigensystem(&compressed)?;
    Ok(spec.eigenvalues().iter().map(|l| l.abs()).sum())
}
