//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the
//! combined update `A <- U† A U` zeroes `a_pq` while keeping `A` Hermitian.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Input is accepted as Hermitian when `max |H - H†| < HERMITIAN_TOL`.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;
const DEGENERACY_TOL: f64 = 1e-10;
const PHASE_PIVOT_TOL: f64 = 1e-8;

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors in the same order as [`Spectrum::eigenvalues`].
    pub fn eigenvectors(&self) -> &[Vec<Complex64>] {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                let vi = v[i] * *lambda;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    /// `max |V†V - I|` elementwise.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.eigenvectors.iter().enumerate() {
            for (j, v) in self.eigenvectors.iter().enumerate() {
                let g = super::matrix::inner(u, v);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }

    /// Projector onto the span of eigenvectors whose eigenvalue exceeds `threshold`.
    pub fn support_projector(&self, threshold: f64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            if *lambda > threshold {
                out = &out + &CMatrix::outer(v, v);
            }
        }
        out
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Ordering is deterministic: eigenvalues descending, and within a run of
/// eigenvalues equal to within `1e-10` the eigenvectors are ordered by
/// lexicographic comparison of the real parts of their components. Each
/// eigenvector is phase-fixed so that its first component with modulus above
/// `1e-8` is real and positive.
pub fn hermitian_eigensystem(h: &CMatrix) -> Result<Spectrum> {
    let herm_err = h.hermiticity_error();
    if !(herm_err < HERMITIAN_TOL) {
        return Err(Error::NotHermitian(herm_err));
    }
    let n = h.dim();
    let mut a = (h + &h.adjoint()).scale(0.5);
    let mut v = CMatrix::identity(n);

    let frob: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off == 0.0 || off <= f64::EPSILON * 1e-2 * frob {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    sort_pairs(&mut pairs);

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase_conj = (apq / r).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase_conj * -s;
    let u_qq = phase_conj * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

fn fix_phase(vec: &mut [Complex64]) {
    if let Some(pivot) = vec.iter().find(|z| z.norm() > PHASE_PIVOT_TOL) {
        let rot = pivot.conj() / pivot.norm();
        for z in vec.iter_mut() {
            *z *= rot;
        }
    }
}

fn lex_real(u: &[Complex64], v: &[Complex64]) -> Ordering {
    for (a, b) in u.iter().zip(v) {
        match a.re.total_cmp(&b.re) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn sort_pairs(pairs: &mut [(f64, Vec<Complex64>)]) {
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() {
            let scale = pairs[end - 1].0.abs().max(1.0);
            if pairs[end - 1].0 - pairs[end].0 > DEGENERACY_TOL * scale {
                break;
            }
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| lex_real(&x.1, &y.1));
        start = end;
    }
}
