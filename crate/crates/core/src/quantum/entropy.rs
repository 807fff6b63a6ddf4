use super::state::{DensityOperator, NEGATIVE_EIGEN_TOL};
use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as exact zeros (`0 log 0 := 0`).
pub const ZERO_EIGEN_TOL: f64 = 1e-12;

/// `-Σ λ log2 λ` over a spectrum, in bits.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -NEGATIVE_EIGEN_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {l:e}")));
        }
        if l > ZERO_EIGEN_TOL {
            s -= l * l.log2();
        }
    }
    let max = (eigenvalues.len().max(1) as f64).log2();
    Ok(s.clamp(0.0, max))
}

/// von Neumann entropy `S(ρ) = -Tr ρ log2 ρ` in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    entropy_of_spectrum(rho.spectrum().eigenvalues())
}

/// Shannon entropy of a probability vector in bits.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{CMatrix, PureState};

    #[test]
    fn pure_state_has_zero_entropy() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityOperator::from_pure(&PureState::from_real(&[s, -s]).unwrap());
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_qubit_is_one_bit() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        assert_eq!(entropy_of_spectrum(&[1.0, -5e-11]).unwrap(), 0.0);
        assert!(entropy_of_spectrum(&[1.0, -1e-9]).is_err());
    }

    #[test]
    fn diagonal_entropy_matches_shannon() {
        let rho = DensityOperator::new(CMatrix::from_diagonal(&[0.75, 0.25])).unwrap();
        let h = shannon_entropy(&[0.75, 0.25]);
        assert!((von_neumann_entropy(&rho).unwrap() - h).abs() < 1e-14);
    }
}
