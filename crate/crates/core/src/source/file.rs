//! JSON source files.
//!
//! A two-subspace source:
//!
//! ```json
//! {
//!   "ambient_dim": 4,
//!   "subspaces": [
//!     { "p_subspace": 0.5, "states": [[[0.0, 0.0], [0.7071067811865476, 0.0], ...]], "probs": [1.0] },
//!     { "p_subspace": 0.5, "states": [...], "probs": [...] }
//!   ]
//! }
//! ```
//!
//! A plain ensemble replaces `subspaces` with top-level `states` and
//! `probs`. Every amplitude is a `[re, im]` pair of binary64 literals.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{compose_source, DecomposableSource, SignalEnsemble};
use crate::quantum::{Complex64, PureState, PROB_SUM_TOL};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceFile {
    ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subspaces: Option<Vec<Block>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probs: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Block {
    p_subspace: f64,
    states: Vec<Vec<[f64; 2]>>,
    probs: Vec<f64>,
}

/// Contents of a source file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedSource {
    Decomposable(DecomposableSource),
    Ensemble(SignalEnsemble),
}

impl LoadedSource {
    pub fn into_decomposable(self) -> Result<DecomposableSource> {
        match self {
            LoadedSource::Decomposable(s) => Ok(s),
            LoadedSource::Ensemble(_) => Err(Error::invalid(
                "source has no `subspaces` block; a two-subspace source is required",
            )),
        }
    }
}

/// Two validated ensembles with a subspace weight, without requiring their
/// spans to be orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsemblePair {
    pub p1: f64,
    pub ens1: SignalEnsemble,
    pub ens2: SignalEnsemble,
}

impl From<&DecomposableSource> for EnsemblePair {
    fn from(s: &DecomposableSource) -> Self {
        Self {
            p1: s.p1(),
            ens1: s.sub1().clone(),
            ens2: s.sub2().clone(),
        }
    }
}

fn field_err(origin: &str, field: &str, e: impl std::fmt::Display) -> Error {
    Error::SourceFile {
        path: origin.to_string(),
        message: format!("field `{field}`: {e}"),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_raw(text: &str, origin: &str) -> Result<SourceFile> {
    serde_json::from_str(text).map_err(|e| Error::SourceFile {
        path: origin.to_string(),
        message: format!("parse error at line {} column {}: {e}", e.line(), e.column()),
    })
}

fn build_ensemble(
    origin: &str,
    field: &str,
    ambient_dim: usize,
    states: &[Vec<[f64; 2]>],
    probs: &[f64],
) -> Result<SignalEnsemble> {
    let mut kets = Vec::with_capacity(states.len());
    for (i, amps) in states.iter().enumerate() {
        let f = format!("{field}.states[{i}]");
        if amps.len() != ambient_dim {
            return Err(field_err(
                origin,
                &f,
                format!("has {} amplitudes, ambient_dim is {ambient_dim}", amps.len()),
            ));
        }
        let v = amps.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        kets.push(PureState::new(v).map_err(|e| field_err(origin, &f, e))?);
    }
    let probs_field = format!("{field}.probs");
    if probs.len() != kets.len() {
        return Err(field_err(
            origin,
            &probs_field,
            format!("{} probabilities for {} states", probs.len(), kets.len()),
        ));
    }
    SignalEnsemble::new(kets, probs.to_vec()).map_err(|e| {
        let f = match e {
            Error::SingularGram(_) | Error::EmptyEnsemble => format!("{field}.states"),
            _ => probs_field.clone(),
        };
        field_err(origin, &f, e)
    })
}

fn block_pair(raw: &SourceFile, origin: &str) -> Result<Option<EnsemblePair>> {
    let Some(blocks) = &raw.subspaces else {
        return Ok(None);
    };
    if raw.states.is_some() || raw.probs.is_some() {
        return Err(field_err(origin, "states", "top-level states are not allowed next to `subspaces`"));
    }
    if blocks.len() != 2 {
        return Err(field_err(
            origin,
            "subspaces",
            format!("exactly 2 subspace blocks are supported, found {}", blocks.len()),
        ));
    }
    let p1 = blocks[0].p_subspace;
    for (k, b) in blocks.iter().enumerate() {
        if !(0.0..=1.0).contains(&b.p_subspace) {
            return Err(field_err(
                origin,
                &format!("subspaces[{k}].p_subspace"),
                Error::ProbabilityOutOfRange(b.p_subspace),
            ));
        }
    }
    let total = blocks[0].p_subspace + blocks[1].p_subspace;
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(field_err(
            origin,
            "subspaces[*].p_subspace",
            Error::NotNormalizedProbabilities(total),
        ));
    }
    let ens1 = build_ensemble(origin, "subspaces[0]", raw.ambient_dim, &blocks[0].states, &blocks[0].probs)?;
    let ens2 = build_ensemble(origin, "subspaces[1]", raw.ambient_dim, &blocks[1].states, &blocks[1].probs)?;
    Ok(Some(EnsemblePair { p1, ens1, ens2 }))
}

/// Parses and validates source text; `origin` labels diagnostics.
pub fn parse_source(text: &str, origin: &str) -> Result<LoadedSource> {
    let raw = parse_raw(text, origin)?;
    if raw.ambient_dim == 0 {
        return Err(field_err(origin, "ambient_dim", "must be positive"));
    }
    if let Some(pair) = block_pair(&raw, origin)? {
        let source = compose_source(pair.p1, pair.ens1, pair.ens2).map_err(|e| field_err(origin, "subspaces", e))?;
        return Ok(LoadedSource::Decomposable(source));
    }
    match (&raw.states, &raw.probs) {
        (Some(states), Some(probs)) => Ok(LoadedSource::Ensemble(build_ensemble(
            origin,
            "root",
            raw.ambient_dim,
            states,
            probs,
        )?)),
        _ => Err(field_err(origin, "subspaces", "expected `subspaces` or `states` + `probs`")),
    }
}

pub fn load_source(path: impl AsRef<Path>) -> Result<LoadedSource> {
    let path = path.as_ref();
    parse_source(&read(path)?, &path.display().to_string())
}

/// Parses a two-block file without requiring orthogonal subspaces.
pub fn parse_ensemble_pair(text: &str, origin: &str) -> Result<EnsemblePair> {
    let raw = parse_raw(text, origin)?;
    block_pair(&raw, origin)?.ok_or_else(|| field_err(origin, "subspaces", "missing"))
}

pub fn load_ensemble_pair(path: impl AsRef<Path>) -> Result<EnsemblePair> {
    let path = path.as_ref();
    parse_ensemble_pair(&read(path)?, &path.display().to_string())
}

fn encode_states(states: &[PureState]) -> Vec<Vec<[f64; 2]>> {
    states
        .iter()
        .map(|s| s.amplitudes().iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

/// Pretty JSON in the caller's original state order.
pub fn source_to_json(source: &LoadedSource) -> String {
    let raw = match source {
        LoadedSource::Decomposable(s) => {
            let block = |w: f64, e: &SignalEnsemble| {
                let (states, probs) = e.in_original_order();
                Block {
                    p_subspace: w,
                    states: encode_states(&states),
                    probs,
                }
            };
            SourceFile {
                ambient_dim: s.ambient_dim(),
                subspaces: Some(vec![block(s.p1(), s.sub1()), block(s.p2(), s.sub2())]),
                states: None,
                probs: None,
            }
        }
        LoadedSource::Ensemble(e) => {
            let (states, probs) = e.in_original_order();
            SourceFile {
                ambient_dim: e.ambient_dim(),
                subspaces: None,
                states: Some(encode_states(&states)),
                probs: Some(probs),
            }
        }
    };
    let mut s = serde_json::to_string_pretty(&raw).expect("source serializes");
    s.push('\n');
    s
}

pub fn save_source(source: &LoadedSource, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, source_to_json(source)).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
