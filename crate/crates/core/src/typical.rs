//! Majority-species typical subspaces.
//!
//! Words are length-`n` strings over basis indices. Symbol `0` is the
//! majority species `|s> = |e_1> = |a_1>`, symbols `1..d` are the other
//! retained states `|r>` spanning `L`, and symbols `d..d*` index the
//! extension basis outside `L`.
//!
//! A word lies in `Λ` when every symbol is retained and either `|s>` fills
//! more than half the slots, or (even `n = 2L`) exactly `L` slots hold `|s>`
//! and the second `|r>` in positional order differs from the first. That rule
//! reproduces the counting formula
//!
//! ```text
//! D_Λ = Σ_{j<L} (d-1)^j C(n,j)  [+ (d-1)^{L-1} (d-2) C(n,L) for even n]
//! ```
//!
//! with `L = ⌈n/2⌉`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::quantum::{check_orthonormal, kron_vec, projector_from_basis, Complex64, DensityOperator, Projector, PureState};
use crate::{Error, Result};

/// Exact, unbounded counting type.
pub type BigCount = BigUint;

/// A word over basis indices; see the module docs.
pub type Word = Vec<usize>;

/// Enumeration limit for [`d_lambda_bruteforce`] and [`best_equal_dim_fidelity`].
pub const MAX_ENUMERATED_WORDS: u64 = 10_000_000;
/// Largest `dim(ρ)^n` accepted by [`fidelity_bruteforce`].
pub const MAX_TENSOR_DIM: u64 = 4096;
/// Largest `dim(ρ)^n` accepted by [`fidelity_explicit`], which stores dense operators.
pub const MAX_EXPLICIT_DIM: u64 = 1024;
/// Largest `dim` accepted by [`best_equal_dim_fidelity`].
pub const MAX_SELECTED_WORDS: u64 = 1_000_000;

/// Construction parameters: retained dimension `d`, block length `n`, ambient dimension `d*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypicalSubspaceSpec {
    d: u32,
    n: u32,
    d_star: u32,
}

impl TypicalSubspaceSpec {
    pub fn new(d: u32, n: u32, d_star: u32) -> Result<Self> {
        check_dn(d, n)?;
        if d_star < d {
            return Err(Error::invalid(format!("ambient dimension d*={d_star} below d={d}")));
        }
        Ok(Self { d, n, d_star })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d_star(&self) -> u32 {
        self.d_star
    }

    /// `L = ⌈n/2⌉`.
    pub fn half(&self) -> u32 {
        self.n.div_ceil(2)
    }

    pub fn dimension(&self) -> BigCount {
        d_lambda(self.d, self.n).expect("validated spec")
    }

    pub fn contains(&self, word: &[usize]) -> bool {
        word.len() == self.n as usize && lambda_membership(word, self.d as usize)
    }

    /// `dim(H^n) = d*^n`.
    pub fn ambient_dimension(&self) -> BigCount {
        BigUint::from(self.d_star).pow(self.n)
    }
}

fn check_dn(d: u32, n: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("retained dimension d={d} must be at least 2")));
    }
    if n < 3 {
        return Err(Error::invalid(format!("block length N={n} must be at least 3")));
    }
    Ok(())
}

/// Row `n` of Pascal's triangle, built by the additive recurrence.
pub fn pascal_row(n: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

/// Exact dimension of the majority-species subspace for retained dimension `d` and block length `n`.
///
/// Terms `(d-1)^j C(n,j)` advance by the exact recurrence
/// `t_{j+1} = t_j (d-1)(n-j) / (j+1)`, linear in `n` big-integer steps.
pub fn d_lambda(d: u32, n: u32) -> Result<BigCount> {
    check_dn(d, n)?;
    let half = n.div_ceil(2);
    let r = (d - 1) as u64;
    let mut term = BigUint::one();
    let mut total = BigUint::zero();
    for j in 0..half {
        total += &term;
        term *= r * (n - j) as u64;
        term /= (j + 1) as u64;
    }
    if n % 2 == 0 {
        // term is (d-1)^L C(n,L); the tie count is (d-1)^{L-1} (d-2) C(n,L)
        total += term * (r - 1) / r;
    }
    Ok(total)
}

/// [`d_lambda`] evaluated from a full row of Pascal's triangle.
pub fn d_lambda_pascal(d: u32, n: u32) -> Result<BigCount> {
    check_dn(d, n)?;
    let row = pascal_row(n);
    let half = n.div_ceil(2) as usize;
    let r = BigUint::from(d - 1);
    let mut total = BigUint::zero();
    let mut r_pow = BigUint::one();
    for c in row.iter().take(half) {
        total += &r_pow * c;
        r_pow *= &r;
    }
    if n % 2 == 0 {
        total += r.pow(half as u32 - 1) * BigUint::from(d - 2) * &row[half];
    }
    Ok(total)
}

/// Membership of `word` in `Λ` for retained dimension `d`.
pub fn lambda_membership(word: &[usize], d: usize) -> bool {
    if word.iter().any(|&s| s >= d) {
        return false;
    }
    let n = word.len();
    let majority = word.iter().filter(|&&s| s == 0).count();
    if 2 * majority > n {
        return true;
    }
    if 2 * majority == n {
        let mut others = word.iter().filter(|&&s| s != 0);
        if let (Some(first), Some(second)) = (others.next(), others.next()) {
            return first != second;
        }
    }
    false
}

/// Calls `f` on every word of length `n` over `0..alphabet` in lexicographic order.
pub fn for_each_word(alphabet: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if alphabet == 0 {
        return;
    }
    let mut word = vec![0usize; n];
    loop {
        f(&word);
        let mut pos = n;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < alphabet {
                break;
            }
            word[pos] = 0;
        }
    }
}

fn word_space_size(alphabet: u64, n: u32, limit: u64) -> Result<u64> {
    match alphabet.checked_pow(n) {
        Some(size) if size <= limit => Ok(size),
        _ => Err(Error::TooLarge(format!("{alphabet}^{n} words exceeds the limit {limit}"))),
    }
}

/// Counts `Λ` by testing every word of `d^n`; independent of the closed form.
pub fn d_lambda_bruteforce(d: u32, n: u32) -> Result<BigCount> {
    check_dn(d, n)?;
    word_space_size(d as u64, n, MAX_ENUMERATED_WORDS)?;
    let d = d as usize;
    let n = n as usize;
    let count: u64 = (0..d)
        .into_par_iter()
        .map(|lead| {
            let mut local = 0u64;
            let mut word = vec![lead; n];
            for_each_word(d, n - 1, |tail| {
                word[1..].copy_from_slice(tail);
                local += lambda_membership(&word, d) as u64;
            });
            local
        })
        .sum();
    Ok(BigUint::from(count))
}

/// All words of `Λ` in lexicographic order.
pub fn majority_words(d: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_word(d, n, |w| {
        if lambda_membership(w, d) {
            out.push(w.to_vec());
        }
    });
    out
}

/// Diagonal weights `<e|ρ|e>` of a density operator in a chosen basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteWeights {
    q_s: f64,
    q_r: Vec<f64>,
    q_ext: Vec<f64>,
}

impl SiteWeights {
    /// Retained weights `q_s`, `q_r` (for `e_2..e_d`) and extension weights.
    pub fn new(q_s: f64, q_r: Vec<f64>, q_ext: Vec<f64>) -> Result<Self> {
        let all = std::iter::once(q_s).chain(q_r.iter().copied()).chain(q_ext.iter().copied());
        let mut total = 0.0;
        for q in all {
            if !(0.0..=1.0 + 1e-10).contains(&q) {
                return Err(Error::ProbabilityOutOfRange(q));
            }
            total += q;
        }
        if total > 1.0 + 1e-10 {
            return Err(Error::NotNormalizedProbabilities(total));
        }
        Ok(Self { q_s, q_r, q_ext })
    }

    pub fn q_s(&self) -> f64 {
        self.q_s
    }

    pub fn q_r(&self) -> &[f64] {
        &self.q_r
    }

    pub fn q_ext(&self) -> &[f64] {
        &self.q_ext
    }

    /// Retained dimension `d`.
    pub fn d(&self) -> usize {
        1 + self.q_r.len()
    }

    /// Size of the full basis, `d*`.
    pub fn d_star(&self) -> usize {
        self.d() + self.q_ext.len()
    }

    /// Weight of basis symbol `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 {
            self.q_s
        } else if i < self.d() {
            self.q_r[i - 1]
        } else {
            self.q_ext[i - self.d()]
        }
    }

    /// `Π_t q_{word_t}`, evaluated from symbol counts so that permutations of
    /// a word give bit-identical weights.
    pub fn word_weight(&self, word: &[usize]) -> f64 {
        let mut counts = vec![0i32; self.d_star()];
        for &s in word {
            counts[s] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| self.weight(s).powi(c))
            .product()
    }
}

/// Weights `q_e = <e|ρ|e>` over the retained basis `e_1..e_d` followed by `extension`.
pub fn site_weights(rho: &DensityOperator, retained: &[PureState], extension: &[PureState]) -> Result<SiteWeights> {
    if retained.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let all: Vec<PureState> = retained.iter().chain(extension).cloned().collect();
    if let Some(e) = all.iter().find(|e| e.dim() != rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: e.dim(),
        });
    }
    check_orthonormal(&all)?;
    let q: Vec<f64> = all
        .iter()
        .map(|e| rho.matrix().expectation(e.amplitudes()).re.max(0.0))
        .collect();
    let d = retained.len();
    SiteWeights::new(q[0], q[1..d].to_vec(), q[d..].to_vec())
}

fn ln_pow(x: f64, e: u32) -> f64 {
    if e == 0 {
        0.0
    } else {
        e as f64 * x.ln()
    }
}

/// `F_λ = Tr(ρ^{⊗n} W_λ)` in closed form.
///
/// With `R = Σ q_r`, `F = Σ_{j<L} C(n,j) q_s^{n-j} R^j`, plus for even `n`
/// the tie term `C(n,L) q_s^L (R² - Σ q_r²) R^{L-2}`.
pub fn fidelity_majority(w: &SiteWeights, n: u32) -> Result<f64> {
    check_dn(w.d() as u32, n)?;
    let half = n.div_ceil(2);
    let r: f64 = w.q_r.iter().sum();
    let mut ln_binom = 0.0f64;
    let mut f = 0.0;
    for j in 0..half {
        f += (ln_binom + ln_pow(w.q_s, n - j) + ln_pow(r, j)).exp();
        ln_binom += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
    }
    if n % 2 == 0 {
        // Σ_{a≠b} q_a q_b, accumulated from nonnegative terms
        let distinct_pairs: f64 = w.q_r.iter().map(|q| q * (r - q).max(0.0)).sum();
        if distinct_pairs > 0.0 {
            f += (ln_binom + ln_pow(w.q_s, half) + distinct_pairs.ln() + ln_pow(r, half - 2)).exp();
        }
    }
    Ok(f.clamp(0.0, 1.0))
}

/// `Σ_{w∈Λ} <w|ρ^{⊗n}|w>` from explicit `dim(ρ)^n`-component product vectors.
///
/// Each `|w> = e_{w_1} ⊗ … ⊗ e_{w_n}` is materialized, and `ρ^{⊗n}|w>` is
/// materialized as `ρe_{w_1} ⊗ … ⊗ ρe_{w_n}`; `Λ` is enumerated word by word
/// through [`lambda_membership`].
pub fn fidelity_bruteforce(rho: &DensityOperator, retained: &[PureState], n: u32) -> Result<f64> {
    check_dn(retained.len() as u32, n)?;
    word_space_size(rho.dim() as u64, n, MAX_TENSOR_DIM)?;
    check_orthonormal(retained)?;
    if let Some(e) = retained.iter().find(|e| e.dim() != rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: e.dim(),
        });
    }
    let images: Vec<Vec<Complex64>> = retained.iter().map(|e| rho.matrix().mul_vec(e.amplitudes())).collect();
    let d = retained.len();
    let mut total = Complex64::new(0.0, 0.0);
    for_each_word(d, n as usize, |word| {
        if !lambda_membership(word, d) {
            return;
        }
        let mut ket = vec![Complex64::new(1.0, 0.0)];
        let mut image = vec![Complex64::new(1.0, 0.0)];
        for &s in word {
            ket = kron_vec(&ket, retained[s].amplitudes());
            image = kron_vec(&image, &images[s]);
        }
        total += crate::quantum::inner(&ket, &image);
    });
    Ok(total.re)
}

/// Explicit `W_λ = Σ_{w∈Λ} |w><w|` as a dense projector on `H^{⊗n}`.
pub fn majority_projector(retained: &[PureState], n: u32) -> Result<Projector> {
    check_dn(retained.len() as u32, n)?;
    let dim = retained[0].dim() as u64;
    word_space_size(dim, n, MAX_EXPLICIT_DIM)?;
    let kets: Vec<PureState> = majority_words(retained.len(), n as usize)
        .iter()
        .map(|word| {
            word.iter()
                .skip(1)
                .fold(retained[word[0]].clone(), |acc, &s| crate::quantum::tensor_product(&acc, &retained[s]))
        })
        .collect();
    projector_from_basis(&kets)
}

/// `Tr(ρ^{⊗n} W_λ)` from dense `ρ^{⊗n}` and dense `W_λ`.
pub fn fidelity_explicit(rho: &DensityOperator, retained: &[PureState], n: u32) -> Result<f64> {
    if let Some(e) = retained.iter().find(|e| e.dim() != rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: e.dim(),
        });
    }
    let w = majority_projector(retained, n)?;
    let rho_n = (1..n).fold(rho.clone(), |acc, _| crate::quantum::tensor_product(&acc, rho));
    let dim = w.dim();
    let (a, b) = (rho_n.matrix(), w.matrix());
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            tr += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(tr.re)
}

/// `F_Γ = Σ_{w∈Γ} Π_t q_{w_t}` for an explicit set of distinct words over the full basis.
pub fn fidelity_subspace(w: &SiteWeights, words: &[Word]) -> Result<f64> {
    let mut seen = HashSet::with_capacity(words.len());
    let mut f = 0.0;
    for word in words {
        if let Some(&s) = word.iter().find(|&&s| s >= w.d_star()) {
            return Err(Error::invalid(format!("symbol {s} outside the {}-vector basis", w.d_star())));
        }
        if !seen.insert(word.as_slice()) {
            return Err(Error::DuplicateWord(word.clone()));
        }
        f += w.word_weight(word);
    }
    Ok(f)
}

/// The `dim` heaviest words of length `n` over the full basis (ties broken
/// by lexicographic word order) and their total weight: the largest
/// fidelity any `dim`-dimensional span of basis product states can reach.
pub fn best_equal_dim_fidelity(w: &SiteWeights, n: u32, dim: &BigCount) -> Result<(f64, Vec<Word>)> {
    let take = dim
        .to_u64()
        .filter(|&t| t <= MAX_SELECTED_WORDS)
        .ok_or_else(|| Error::TooLarge(format!("dimension {dim} exceeds {MAX_SELECTED_WORDS}")))?;
    let space = word_space_size(w.d_star() as u64, n, MAX_ENUMERATED_WORDS)?;
    if take > space {
        return Err(Error::invalid(format!("dimension {dim} exceeds the {space} available words")));
    }
    let mut weighted: Vec<(f64, u64)> = Vec::with_capacity(space as usize);
    let mut idx = 0u64;
    for_each_word(w.d_star(), n as usize, |word| {
        weighted.push((w.word_weight(word), idx));
        idx += 1;
    });
    let by_rank = |a: &(f64, u64), b: &(f64, u64)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
    let take = take as usize;
    if take < weighted.len() && take > 0 {
        weighted.select_nth_unstable_by(take - 1, by_rank);
    }
    weighted.truncate(take);
    weighted.sort_by(by_rank);

    let base = w.d_star() as u64;
    let words: Vec<Word> = weighted
        .iter()
        .map(|&(_, mut i)| {
            let mut word = vec![0usize; n as usize];
            for slot in word.iter_mut().rev() {
                *slot = (i % base) as usize;
                i /= base;
            }
            word
        })
        .collect();
    let f = weighted.iter().map(|(x, _)| x).sum();
    Ok((f, words))
}
