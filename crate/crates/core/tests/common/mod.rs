#![allow(dead_code)]

use nalgebra::DMatrix;
use qnc_core::quantum::random::{random_density, random_orthonormal};
use qnc_core::quantum::{CMatrix, Complex64, DensityOperator, PureState};
use rand::Rng;

/// Eigenvalues from nalgebra, ascending.
pub fn nalgebra_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let a = DMatrix::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
    let mut ev: Vec<f64> = a.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `-Σ λ log2 λ` over nalgebra eigenvalues.
pub fn nalgebra_entropy(m: &CMatrix) -> f64 {
    nalgebra_eigenvalues(m)
        .into_iter()
        .filter(|&l| l > 1e-14)
        .map(|l| -l * l.log2())
        .sum()
}

/// Random `(ρ, retained basis, extension basis, n)` with `dim ≤ 4`, `n ≤ 6`.
pub fn fidelity_instance<R: Rng>(rng: &mut R) -> (DensityOperator, Vec<PureState>, Vec<PureState>, u32) {
    let dim = rng.random_range(2..=4);
    let d = rng.random_range(2..=dim);
    let n = rng.random_range(3..=6);
    let rank = rng.random_range(1..=dim);
    let rho = random_density(rng, dim, rank);
    let mut basis = random_orthonormal(rng, dim, dim);
    let rest = basis.split_off(d);
    (rho, basis, rest, n)
}

/// Minimum expected codeword length over all prefix codes, by exhaustive
/// search over nondecreasing length vectors satisfying Kraft's inequality
/// (paired with probabilities sorted in decreasing order).
pub fn optimal_prefix_length(probs: &[f64]) -> f64 {
    let mut p: Vec<f64> = probs.iter().copied().filter(|&x| x > 0.0).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    if p.len() == 1 {
        return p[0];
    }
    let max_len = p.len() - 1;
    let mut best = f64::INFINITY;
    let mut lengths = Vec::with_capacity(p.len());
    search(&p, max_len, 1, 0.0, &mut lengths, &mut best);
    best
}

fn search(p: &[f64], max_len: usize, min_len: usize, kraft: f64, lengths: &mut Vec<usize>, best: &mut f64) {
    if lengths.len() == p.len() {
        let cost: f64 = p.iter().zip(lengths.iter()).map(|(q, &l)| q * l as f64).sum();
        *best = best.min(cost);
        return;
    }
    for l in min_len..=max_len {
        let k = kraft + 0.5f64.powi(l as i32);
        if k > 1.0 + 1e-12 {
            continue;
        }
        lengths.push(l);
        search(p, max_len, l, k, lengths, best);
        lengths.pop();
    }
}

/// `C(n, k)` by the multiplicative formula.
pub fn binomial_u128(n: u32, k: u32) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c
}

/// Typical-subspace dimension in `u128`, from the counting formula.
pub fn d_lambda_u128(d: u32, n: u32) -> u128 {
    let half = n.div_ceil(2);
    let r = (d - 1) as u128;
    let mut total: u128 = (0..half).map(|j| r.pow(j) * binomial_u128(n, j)).sum();
    if n % 2 == 0 {
        total += r.pow(half - 1) * (d as u128 - 2) * binomial_u128(n, half);
    }
    total
}

/// All `(d, n, q, m, D)` with `q^m = D` in the default ranges, by `u128`
/// arithmetic and repeated division.
pub fn exact_solutions_u128() -> Vec<(u32, u32, u32, u32, u128)> {
    let mut out = Vec::new();
    for d in 2..=32 {
        for n in 3..=32 {
            let target = d_lambda_u128(d, n);
            for q in 2..=32u32 {
                let mut rest = target;
                let mut m = 0;
                while rest % q as u128 == 0 {
                    rest /= q as u128;
                    m += 1;
                }
                if rest == 1 && (2..=32).contains(&m) {
                    out.push((d, n, q, m, target));
                }
            }
        }
    }
    out.sort();
    out
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
