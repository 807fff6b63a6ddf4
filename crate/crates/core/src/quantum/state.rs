use num_complex::Complex64;

use super::eigen::{hermitian_eigensystem, Spectrum, HERMITIAN_TOL};
use super::matrix::{inner, kron_vec, norm, CMatrix, MAX_DIM};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PROB_SUM_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as numerical drift of a PSD operator.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;
pub const ORTHONORMAL_TOL: f64 = 1e-8;
pub const IDEMPOTENT_TOL: f64 = 1e-10;

/// Kronecker (tensor) product, left factor as the outer index.
pub trait Tensor: Sized {
    fn tensor(&self, rhs: &Self) -> Self;
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes whose squared norm is 1 within `1e-10`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !((sq - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized(sq));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let n = norm(&amplitudes);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        for z in amplitudes.iter_mut() {
            *z /= n;
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub(crate) fn from_trusted(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ><ψ|`.
    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

impl Tensor for PureState {
    fn tensor(&self, rhs: &Self) -> Self {
        Self {
            amplitudes: kron_vec(&self.amplitudes, &rhs.amplitudes),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        check_dim(matrix.dim())?;
        let herm = matrix.hermiticity_error();
        if !(herm < HERMITIAN_TOL) {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidDensity(format!("trace {} != 1", tr)));
        }
        let spec = hermitian_eigensystem(&matrix)?;
        let min = spec.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            matrix: state.projector(),
        }
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> Spectrum {
        hermitian_eigensystem(&self.matrix).expect("density operators are Hermitian")
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, w: f64, other: &DensityOperator) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::ProbabilityOutOfRange(w));
        }
        Ok(Self {
            matrix: &self.matrix.scale(w) + &other.matrix.scale(1.0 - w),
        })
    }

    /// `U ρ U†`; `u` is assumed unitary.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self {
            matrix: &(u * &self.matrix) * &u.adjoint(),
        }
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, rhs: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&rhs.matrix),
        }
    }
}

impl Tensor for CMatrix {
    fn tensor(&self, rhs: &Self) -> Self {
        self.kron(rhs)
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor_product<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Hermitian idempotent operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    rank: usize,
}

impl Projector {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_error();
        if !(herm < IDEMPOTENT_TOL) {
            return Err(Error::NotHermitian(herm));
        }
        let idem = (&matrix * &matrix).max_abs_diff(&matrix);
        if !(idem < IDEMPOTENT_TOL) {
            return Err(Error::NotProjector(idem));
        }
        let rank = matrix.trace().re.round() as usize;
        Ok(Self { matrix, rank })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }
}

/// `ρ = Σ p_i |a_i><a_i|`.
pub fn density_from_ensemble(states: &[PureState], probs: &[f64]) -> Result<DensityOperator> {
    if states.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if states.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: states.len(),
            found: probs.len(),
        });
    }
    let dim = states[0].dim();
    if let Some(s) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: s.dim(),
        });
    }
    check_probabilities(probs)?;
    let mut m = CMatrix::zeros(dim);
    for (s, &p) in states.iter().zip(probs) {
        if p > 0.0 {
            m = &m + &s.projector().scale(p);
        }
    }
    DensityOperator::new(m)
}

/// Sum of rank-1 projectors onto orthonormal vectors.
pub fn projector_from_basis(vectors: &[PureState]) -> Result<Projector> {
    let dim = vectors.first().map(PureState::dim).ok_or(Error::EmptyEnsemble)?;
    check_orthonormal(vectors)?;
    let mut m = CMatrix::zeros(dim);
    for v in vectors {
        m = &m + &v.projector();
    }
    Ok(Projector {
        matrix: m,
        rank: vectors.len(),
    })
}

/// Fails unless `max |<v_i|v_j> - δ_ij| < 1e-8`.
pub fn check_orthonormal(vectors: &[PureState]) -> Result<()> {
    let mut worst = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        if u.dim() != vectors[0].dim() {
            return Err(Error::DimensionMismatch {
                expected: vectors[0].dim(),
                found: u.dim(),
            });
        }
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((u.inner(v) - target).norm());
        }
    }
    if worst < ORTHONORMAL_TOL {
        Ok(())
    } else {
        Err(Error::NotOrthonormal(worst))
    }
}

/// Probabilities must be nonnegative and sum to 1 within `1e-10`.
pub fn check_probabilities(probs: &[f64]) -> Result<()> {
    if let Some(&p) = probs.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(Error::NotNormalizedProbabilities(total));
    }
    Ok(())
}

/// Orthonormalizes `vectors` in order (two passes of modified Gram-Schmidt).
///
/// The first output vector is the first input vector, normalized. Fails when
/// a vector has residual norm below `1e-10` after projecting out its
/// predecessors.
pub fn gram_schmidt(vectors: &[PureState]) -> Result<Vec<PureState>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.amplitudes().to_vec();
        for _ in 0..2 {
            for e in &out {
                let c = inner(e, &w);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
        }
        let n = norm(&w);
        if n < 1e-10 {
            return Err(Error::LinearlyDependent {
                index: idx,
                residual: n,
            });
        }
        for z in w.iter_mut() {
            *z /= n;
        }
        out.push(w);
    }
    Ok(out.into_iter().map(PureState::from_trusted).collect())
}

/// Gram matrix `G_ij = <a_i|a_j>`.
pub fn gram_matrix(vectors: &[PureState]) -> CMatrix {
    let n = vectors.len();
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = vectors[i].inner(&vectors[j]);
        }
    }
    g
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange(dim));
    }
    Ok(())
}
