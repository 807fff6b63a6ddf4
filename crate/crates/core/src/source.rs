//! Signal ensembles and sources split across two orthogonal subspaces.

mod file;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quantum::{
    check_probabilities, density_from_ensemble, gram_matrix, gram_schmidt, hermitian_eigensystem,
    random, DensityOperator, PureState,
};
use crate::{Error, Result};

pub use file::{
    load_ensemble_pair, load_source, parse_ensemble_pair, parse_source, save_source, source_to_json,
    EnsemblePair, LoadedSource,
};

/// Smallest Gram-matrix eigenvalue accepted for a linearly independent set.
pub const INDEPENDENCE_TOL: f64 = 1e-10;
/// Largest cross overlap `|<e1_i|e2_j>|` accepted between the two subspace bases.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Signal states `|a_i>` emitted with probabilities `p_i`.
///
/// States are kept in canonical order (probabilities non-increasing, stable
/// with respect to the order given at construction). `original_index` maps a
/// canonical position back to the caller's index.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalEnsemble {
    states: Vec<PureState>,
    probs: Vec<f64>,
    order: Vec<usize>,
}

impl SignalEnsemble {
    pub fn new(states: Vec<PureState>, probs: Vec<f64>) -> Result<Self> {
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
        check_probabilities(&probs)?;
        if states.len() > dim {
            return Err(Error::SingularGram(0.0));
        }
        let gram = hermitian_eigensystem(&gram_matrix(&states))?;
        let min = gram.eigenvalues().last().copied().unwrap_or(0.0);
        if !(min > INDEPENDENCE_TOL) {
            return Err(Error::SingularGram(min));
        }

        let mut order: Vec<usize> = (0..states.len()).collect();
        order.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]));
        let sorted_states = order.iter().map(|&i| states[i].clone()).collect();
        let sorted_probs = order.iter().map(|&i| probs[i]).collect();
        Ok(Self {
            states: sorted_states,
            probs: sorted_probs,
            order,
        })
    }

    /// Single state emitted with certainty.
    pub fn pure(state: PureState) -> Self {
        Self {
            states: vec![state],
            probs: vec![1.0],
            order: vec![0],
        }
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Caller-supplied index of the state at canonical position `i`.
    pub fn original_index(&self, i: usize) -> usize {
        self.order[i]
    }

    /// States and probabilities in the order originally supplied.
    pub fn in_original_order(&self) -> (Vec<PureState>, Vec<f64>) {
        let mut states = vec![None; self.len()];
        let mut probs = vec![0.0; self.len()];
        for (canon, &orig) in self.order.iter().enumerate() {
            states[orig] = Some(self.states[canon].clone());
            probs[orig] = self.probs[canon];
        }
        (states.into_iter().map(|s| s.expect("permutation")).collect(), probs)
    }

    /// `ρ = Σ p_i |a_i><a_i|`.
    pub fn density(&self) -> DensityOperator {
        density_from_ensemble(&self.states, &self.probs).expect("validated ensemble")
    }

    /// Orthonormal basis of the span, `e_1 = a_1` (the most probable state).
    pub fn span_basis(&self) -> Vec<PureState> {
        gram_schmidt(&self.states).expect("validated ensemble is independent")
    }
}

/// Which orthogonal subspace a signal came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subspace {
    H1,
    H2,
}

impl Subspace {
    pub fn number(self) -> u8 {
        match self {
            Subspace::H1 => 1,
            Subspace::H2 => 2,
        }
    }
}

/// Source `ρ = P1 ρ1 + P2 ρ2` with `ρ1`, `ρ2` supported on orthogonal subspaces.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposableSource {
    p1: f64,
    sub1: SignalEnsemble,
    sub2: SignalEnsemble,
    basis1: Vec<PureState>,
    basis2: Vec<PureState>,
}

/// Builds a decomposable source, checking that the spans of the two
/// sub-ensembles are orthogonal.
pub fn compose_source(p1: f64, sub1: SignalEnsemble, sub2: SignalEnsemble) -> Result<DecomposableSource> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::ProbabilityOutOfRange(p1));
    }
    if sub1.ambient_dim() != sub2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: sub1.ambient_dim(),
            found: sub2.ambient_dim(),
        });
    }
    let basis1 = sub1.span_basis();
    let basis2 = sub2.span_basis();
    let (i, j, overlap) = max_cross_overlap(&basis1, &basis2);
    if !(overlap < ORTHOGONALITY_TOL) {
        return Err(Error::NotOrthogonal { i, j, overlap });
    }
    Ok(DecomposableSource {
        p1,
        sub1,
        sub2,
        basis1,
        basis2,
    })
}

/// Largest `|<u_i|v_j>|` with its indices.
pub fn max_cross_overlap(us: &[PureState], vs: &[PureState]) -> (usize, usize, f64) {
    let mut best = (0, 0, 0.0);
    for (i, u) in us.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            let o = u.inner(v).norm();
            if o > best.2 {
                best = (i, j, o);
            }
        }
    }
    best
}

impl DecomposableSource {
    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        1.0 - self.p1
    }

    pub fn weight(&self, k: Subspace) -> f64 {
        match k {
            Subspace::H1 => self.p1(),
            Subspace::H2 => self.p2(),
        }
    }

    pub fn sub(&self, k: Subspace) -> &SignalEnsemble {
        match k {
            Subspace::H1 => &self.sub1,
            Subspace::H2 => &self.sub2,
        }
    }

    pub fn sub1(&self) -> &SignalEnsemble {
        &self.sub1
    }

    pub fn sub2(&self) -> &SignalEnsemble {
        &self.sub2
    }

    pub fn basis(&self, k: Subspace) -> &[PureState] {
        match k {
            Subspace::H1 => &self.basis1,
            Subspace::H2 => &self.basis2,
        }
    }

    pub fn basis1(&self) -> &[PureState] {
        &self.basis1
    }

    pub fn basis2(&self) -> &[PureState] {
        &self.basis2
    }

    pub fn d1(&self) -> usize {
        self.basis1.len()
    }

    pub fn d2(&self) -> usize {
        self.basis2.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.sub1.ambient_dim()
    }

    pub fn rho1(&self) -> DensityOperator {
        self.sub1.density()
    }

    pub fn rho2(&self) -> DensityOperator {
        self.sub2.density()
    }

    /// `ρ = P1 ρ1 + P2 ρ2`.
    pub fn total_density(&self) -> DensityOperator {
        self.rho1().mix(self.p1, &self.rho2()).expect("validated source")
    }
}

/// Free-function form of [`DecomposableSource::total_density`].
pub fn total_density(source: &DecomposableSource) -> DensityOperator {
    source.total_density()
}

/// Bell states `Ψ-, Ψ+, φ+, φ-` over the product basis `↑↑, ↑↓, ↓↑, ↓↓`.
pub fn bell_basis() -> [PureState; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mk = |a: [f64; 4]| PureState::from_real(&a).expect("Bell states are normalized");
    [
        mk([0.0, h, -h, 0.0]),
        mk([0.0, h, h, 0.0]),
        mk([h, 0.0, 0.0, h]),
        mk([h, 0.0, 0.0, -h]),
    ]
}

/// Singlet in `H1`, the triplet emitted uniformly in `H2`.
pub fn bell_source(p1: f64) -> Result<DecomposableSource> {
    let [singlet, psi_plus, phi_plus, phi_minus] = bell_basis();
    let third = 1.0 / 3.0;
    let sub1 = SignalEnsemble::new(vec![singlet], vec![1.0])?;
    let sub2 = SignalEnsemble::new(vec![psi_plus, phi_plus, phi_minus], vec![third; 3])?;
    compose_source(p1, sub1, sub2)
}

/// Random decomposable source: complex Gaussian vectors orthonormalized into
/// two disjoint subspaces of dimensions `d1`, `d2`, with `d1` (resp. `d2`)
/// random states spanning each.
pub fn random_source<R: Rng + ?Sized>(
    rng: &mut R,
    ambient_dim: usize,
    d1: usize,
    d2: usize,
) -> Result<DecomposableSource> {
    if d1 == 0 || d2 == 0 || d1 + d2 > ambient_dim {
        return Err(Error::invalid(format!(
            "subspace dimensions {d1} + {d2} must be positive and fit in {ambient_dim}"
        )));
    }
    let basis = random::random_orthonormal(rng, ambient_dim, d1 + d2);
    let (b1, b2) = basis.split_at(d1);
    let sub1 = random_ensemble_in(rng, b1)?;
    let sub2 = random_ensemble_in(rng, b2)?;
    let p1 = rng.random_range(0.0..=1.0);
    compose_source(p1, sub1, sub2)
}

fn random_ensemble_in<R: Rng + ?Sized>(rng: &mut R, basis: &[PureState]) -> Result<SignalEnsemble> {
    let dim = basis[0].dim();
    loop {
        let states: Vec<PureState> = (0..basis.len())
            .map(|_| {
                let coeffs = random::gaussian_vector(rng, basis.len());
                let mut amps = vec![crate::quantum::Complex64::new(0.0, 0.0); dim];
                for (c, e) in coeffs.iter().zip(basis) {
                    for (a, x) in amps.iter_mut().zip(e.amplitudes()) {
                        *a += c * x;
                    }
                }
                PureState::normalized(amps).expect("nonzero combination")
            })
            .collect();
        let probs = random::random_probabilities(rng, basis.len());
        match SignalEnsemble::new(states, probs) {
            Ok(e) => return Ok(e),
            Err(Error::SingularGram(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// One emitted signal: its subspace and canonical state index within that
/// subspace's ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signal {
    pub subspace: Subspace,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalSequence {
    entries: Vec<Signal>,
}

impl SignalSequence {
    pub fn new(entries: Vec<Signal>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[Signal] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of signals drawn from subspace `k`.
    pub fn count(&self, k: Subspace) -> usize {
        self.entries.iter().filter(|s| s.subspace == k).count()
    }

    /// State indices of the subsequence emitted from subspace `k`, in order.
    pub fn subsequence(&self, k: Subspace) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|s| s.subspace == k)
            .map(|s| s.index)
            .collect()
    }
}

/// Draws `n` i.i.d. signals.
///
/// The generator is ChaCha8 seeded with `seed` via `seed_from_u64`. Each
/// signal consumes one uniform `f64` for the subspace (`H1` iff `u < P1`)
/// followed by one weighted-index draw over that subspace's canonical
/// probabilities.
pub fn sample_sequence(source: &DecomposableSource, n: usize, seed: u64) -> Result<SignalSequence> {
    if n == 0 {
        return Err(Error::invalid("sequence length must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick1 = WeightedIndex::new(source.sub1.probs()).map_err(|e| Error::invalid(e.to_string()))?;
    let pick2 = WeightedIndex::new(source.sub2.probs()).map_err(|e| Error::invalid(e.to_string()))?;
    let entries = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            if u < source.p1 {
                Signal {
                    subspace: Subspace::H1,
                    index: pick1.sample(&mut rng),
                }
            } else {
                Signal {
                    subspace: Subspace::H2,
                    index: pick2.sample(&mut rng),
                }
            }
        })
        .collect();
    Ok(SignalSequence { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{Complex64, Tensor};

    #[test]
    fn bell_states_are_orthonormal_with_expected_amplitudes() {
        let b = bell_basis();
        crate::quantum::check_orthonormal(&b).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re = |s: &PureState| s.amplitudes().iter().map(|z| z.re).collect::<Vec<_>>();
        assert_eq!(re(&b[0]), vec![0.0, h, -h, 0.0]);
        assert_eq!(re(&b[2]), vec![h, 0.0, 0.0, h]);
    }

    #[test]
    fn singlet_is_antisymmetric_product_combination() {
        // Ψ- = (|↑↓> - |↓↑>)/√2 built from single-spin kets.
        let up = PureState::basis(2, 0);
        let down = PureState::basis(2, 1);
        let ud = up.tensor(&down);
        let du = down.tensor(&up);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect: Vec<Complex64> = ud
            .amplitudes()
            .iter()
            .zip(du.amplitudes())
            .map(|(a, b)| (a - b) * h)
            .collect();
        assert_eq!(bell_basis()[0].amplitudes(), expect.as_slice());
    }

    #[test]
    fn bell_source_dimensions() {
        let s = bell_source(0.5).unwrap();
        assert_eq!((s.d1(), s.d2()), (1, 3));
        assert_eq!(s.ambient_dim(), 4);
    }

    #[test]
    fn total_density_of_bell_source() {
        let s = bell_source(0.5).unwrap();
        let rho = s.total_density();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-14);
        let b = bell_basis();
        let expect = [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (v, e) in b.iter().zip(expect) {
            assert!((rho.matrix().expectation(v.amplitudes()).re - e).abs() < 1e-15);
        }
        let one = bell_source(1.0).unwrap();
        assert!(one.total_density().matrix().max_abs_diff(one.rho1().matrix()) < 1e-15);
    }

    #[test]
    fn non_orthogonal_subspaces_are_rejected_with_overlap() {
        let [singlet, psi_plus, ..] = bell_basis();
        let amps: Vec<Complex64> = singlet
            .amplitudes()
            .iter()
            .zip(psi_plus.amplitudes())
            .map(|(a, b)| a * 0.3 + b * (1.0f64 - 0.09).sqrt())
            .collect();
        let leaky = PureState::new(amps).unwrap();
        let err = compose_source(
            0.5,
            SignalEnsemble::pure(singlet),
            SignalEnsemble::new(vec![leaky], vec![1.0]).unwrap(),
        )
        .unwrap_err();
        match err {
            Error::NotOrthogonal { i: 0, j: 0, overlap } => assert!((overlap - 0.3).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ensemble_sorting_is_stable_and_recorded() {
        let e = SignalEnsemble::new(
            vec![PureState::basis(3, 0), PureState::basis(3, 1), PureState::basis(3, 2)],
            vec![0.2, 0.4, 0.4],
        )
        .unwrap();
        assert_eq!(e.probs(), &[0.4, 0.4, 0.2]);
        assert_eq!((0..3).map(|i| e.original_index(i)).collect::<Vec<_>>(), vec![1, 2, 0]);
        let (states, probs) = e.in_original_order();
        assert_eq!(probs, vec![0.2, 0.4, 0.4]);
        assert_eq!(states[0], PureState::basis(3, 0));
    }

    #[test]
    fn dependent_states_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_real(&[h, h]).unwrap();
        let minus_plus = PureState::from_real(&[-h, -h]).unwrap();
        assert!(matches!(
            SignalEnsemble::new(vec![plus, minus_plus], vec![0.5, 0.5]),
            Err(Error::SingularGram(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_respects_certain_subspace() {
        let s = bell_source(1.0).unwrap();
        let seq = sample_sequence(&s, 5, 3).unwrap();
        assert!(seq.entries().iter().all(|e| e.subspace == Subspace::H1));
        let s = bell_source(0.5).unwrap();
        assert_eq!(sample_sequence(&s, 100, 9).unwrap(), sample_sequence(&s, 100, 9).unwrap());
        assert!(sample_sequence(&s, 0, 9).is_err());
    }

    #[test]
    fn sampled_tag_frequency_converges() {
        let s = bell_source(0.5).unwrap();
        let seq = sample_sequence(&s, 100_000, 2024).unwrap();
        let frac = seq.count(Subspace::H1) as f64 / 1e5;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn random_sources_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let s = random_source(&mut rng, 6, 2, 3).unwrap();
            assert_eq!((s.d1(), s.d2()), (2, 3));
        }
        assert!(random_source(&mut rng, 4, 3, 3).is_err());
    }
}
