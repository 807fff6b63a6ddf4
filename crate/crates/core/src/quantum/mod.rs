//! Dense complex linear algebra on small Hilbert spaces.

mod eigen;
mod entropy;
mod matrix;
pub mod random;
mod state;

pub use eigen::{hermitian_eigensystem, Spectrum, HERMITIAN_TOL};
pub use entropy::{entropy_of_spectrum, shannon_entropy, von_neumann_entropy, ZERO_EIGEN_TOL};
pub use matrix::{inner, kron_vec, norm, CMatrix, MAX_DIM};
pub use state::{
    check_orthonormal, check_probabilities, density_from_ensemble, gram_matrix, gram_schmidt,
    projector_from_basis, tensor_product, DensityOperator, Projector, PureState, Tensor,
    IDEMPOTENT_TOL, NEGATIVE_EIGEN_TOL, NORM_TOL, ORTHONORMAL_TOL, PROB_SUM_TOL, TRACE_TOL,
};

pub use num_complex::Complex64;
