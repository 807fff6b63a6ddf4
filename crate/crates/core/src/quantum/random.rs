//! Random states, operators and unitaries for property tests and synthetic sources.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::CMatrix;
use super::state::{gram_schmidt, DensityOperator, PureState};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-ish random pure state from a normalized complex Gaussian vector.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    PureState::normalized(gaussian_vector(rng, dim)).expect("gaussian vector is nonzero")
}

/// `count` random orthonormal vectors in `dim` dimensions.
pub fn random_orthonormal<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<PureState> {
    assert!(count <= dim);
    loop {
        let raw: Vec<PureState> = (0..count).map(|_| random_state(rng, dim)).collect();
        if let Ok(basis) = gram_schmidt(&raw) {
            return basis;
        }
    }
}

/// Random unitary whose columns are Gram-Schmidt orthonormalized Gaussian vectors.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let cols = random_orthonormal(rng, dim, dim);
    let mut u = CMatrix::zeros(dim);
    for (j, c) in cols.iter().enumerate() {
        for i in 0..dim {
            u[(i, j)] = c.amplitudes()[i];
        }
    }
    u
}

/// Random Hermitian matrix `(G + G†)/2` with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_row_major(dim, gaussian_vector(rng, dim * dim)).expect("square");
    (&g + &g.adjoint()).scale(0.5)
}

/// Random probability vector (normalized uniform draws).
pub fn random_probabilities<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Random mixed state of the given rank.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let vecs = random_orthonormal(rng, dim, rank);
    let probs = random_probabilities(rng, rank);
    let mut m = CMatrix::zeros(dim);
    for (v, p) in vecs.iter().zip(&probs) {
        m = &m + &v.projector().scale(*p);
    }
    DensityOperator::from_trusted(m)
}
