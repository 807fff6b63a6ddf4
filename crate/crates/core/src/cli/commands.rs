use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use serde::Serialize;

use super::{EXIT_MISMATCH, EXIT_OK};
use crate::format::{fmt_real, serialize_decimal, to_field_csv, to_json, OutputFormat};
use crate::pipeline::{run_pipeline, RunConfig};
use crate::quantum::PureState;
use crate::search::{exact_solutions, rows_to_csv, rows_to_text, verify_table1 as table1, SearchRanges};
use crate::source::{load_ensemble_pair, load_source, max_cross_overlap, LoadedSource, SignalEnsemble, ORTHOGONALITY_TOL};
use crate::split::{entropy_decomposition, orthogonality_trace_check, subadditivity_gap};
use crate::typical::{
    best_equal_dim_fidelity, d_lambda, d_lambda_bruteforce, fidelity_bruteforce, fidelity_majority, site_weights,
    MAX_ENUMERATED_WORDS, MAX_SELECTED_WORDS,
};
use crate::{Error, Result};

/// Tolerance for `fidelity --oracle`.
const ORACLE_TOL: f64 = 1e-10;

/// A finished command: every rendering plus its exit status.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub json: String,
    pub csv: String,
    pub exit: i32,
    /// Lines for standard error.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn report<T: Serialize>(value: &T, text: String) -> Self {
        Self {
            text,
            json: to_json(value),
            csv: to_field_csv(value),
            exit: EXIT_OK,
            diagnostics: Vec::new(),
        }
    }

    pub fn render(&self, format: OutputFormat) -> &str {
        match format {
            OutputFormat::Text => &self.text,
            OutputFormat::Json => &self.json,
            OutputFormat::Csv => &self.csv,
        }
    }
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

pub fn entropy(path: &Path) -> Result<Outcome> {
    let source = load_source(path)?.into_decomposable()?;
    let r = entropy_decomposition(&source);
    let text = table(&[
        ("P1", fmt_real(r.p1)),
        ("P2", fmt_real(r.p2)),
        ("S(rho)", fmt_real(r.s_total)),
        ("H(X)", fmt_real(r.h_x)),
        ("S(rho1)", fmt_real(r.s1)),
        ("S(rho2)", fmt_real(r.s2)),
        ("residual", fmt_real(r.residual)),
    ]);
    Ok(Outcome::report(&r, text))
}

#[derive(Serialize)]
struct DdimReport {
    d: u32,
    #[serde(rename = "N")]
    n: u32,
    #[serde(rename = "D_Lambda", serialize_with = "serialize_decimal")]
    d_lambda: BigUint,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "optional_decimal")]
    bruteforce: Option<BigUint>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

fn optional_decimal<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn ddim(d: u32, n: u32, check: bool) -> Result<Outcome> {
    let dl = d_lambda(d, n)?;
    let brute = if check { Some(d_lambda_bruteforce(d, n)?) } else { None };
    let agrees = brute.as_ref().map(|b| *b == dl);
    let mut text = format!("{dl}\n");
    if let Some(b) = &brute {
        let verdict = if agrees == Some(true) { "match" } else { "MISMATCH" };
        let _ = writeln!(text, "bruteforce {b} {verdict}");
    }
    let report = DdimReport {
        d,
        n,
        d_lambda: dl,
        bruteforce: brute,
        agrees,
    };
    let mut outcome = Outcome::report(&report, text);
    if agrees == Some(false) {
        outcome.exit = EXIT_MISMATCH;
        outcome.diagnostics.push(format!("error: {}", Error::OracleMismatch(format!("D_Lambda({d}, {n})"))));
    }
    Ok(outcome)
}

pub fn search(ranges: &SearchRanges) -> Result<Outcome> {
    let rows = exact_solutions(ranges)?;
    Ok(Outcome {
        text: rows_to_text(&rows),
        json: to_json(&rows),
        csv: rows_to_csv(&rows),
        exit: EXIT_OK,
        diagnostics: Vec::new(),
    })
}

pub fn verify_table1() -> Outcome {
    let report = table1();
    let mut text = String::from("published rows\n");
    for c in &report.published {
        let r = &c.row;
        let status = if c.confirmed { "confirmed" } else { "MISSING" };
        let _ = writeln!(text, "  d={:<3} N={:<3} q={:<3} M={:<3} D_Lambda={:<10} {status}", r.d, r.n, r.q, r.m, r.d_lambda.to_string());
    }
    let _ = writeln!(text, "{}/{} rows confirmed", report.confirmed(), report.published.len());
    let _ = writeln!(text, "exact solutions absent from the published table: {}", report.extras.len());
    for r in &report.extras {
        let _ = writeln!(text, "  d={:<3} N={:<3} q={:<3} M={:<3} D_Lambda={}", r.d, r.n, r.q, r.m, r.d_lambda);
    }
    let mut csv = String::from("d,N,q,M,D_Lambda,status\n");
    for c in &report.published {
        let r = &c.row;
        let status = if c.confirmed { "confirmed" } else { "missing" };
        let _ = writeln!(csv, "{},{},{},{},{},{status}", r.d, r.n, r.q, r.m, r.d_lambda);
    }
    for r in &report.extras {
        let _ = writeln!(csv, "{},{},{},{},{},extra", r.d, r.n, r.q, r.m, r.d_lambda);
    }
    let mut outcome = Outcome {
        text,
        json: to_json(&report),
        csv,
        exit: EXIT_OK,
        diagnostics: Vec::new(),
    };
    if !report.all_confirmed() {
        outcome.exit = EXIT_MISMATCH;
        outcome
            .diagnostics
            .push(format!("error: {}", Error::OracleMismatch("published rows not reproduced".into())));
    }
    outcome
}

#[derive(Serialize)]
struct FidelityTarget {
    ensemble: String,
    span_dim: usize,
    retained: usize,
    #[serde(rename = "D_Lambda", serialize_with = "serialize_decimal")]
    d_lambda: BigUint,
    fidelity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce: Option<f64>,
    /// Best fidelity of any equally large set of basis product states.
    #[serde(skip_serializing_if = "Option::is_none")]
    best_equal_dim: Option<f64>,
}

#[derive(Serialize)]
struct FidelityReport {
    #[serde(rename = "N")]
    n: u32,
    targets: Vec<FidelityTarget>,
}

fn fidelity_target(label: &str, ens: &SignalEnsemble, n: u32, oracle: bool, keep: Option<usize>) -> Result<FidelityTarget> {
    let basis: Vec<PureState> = ens.span_basis();
    let span = basis.len();
    let retained = keep.unwrap_or(span);
    if retained == 0 || retained > span {
        return Err(Error::invalid(format!("--d {retained} outside 1..={span} for {label}")));
    }
    let (kept, rest) = basis.split_at(retained);
    let rho = ens.density();
    let w = site_weights(&rho, kept, rest)?;
    if retained == 1 {
        if n < 3 {
            return Err(Error::invalid(format!("block length N={n} must be at least 3")));
        }
        return Ok(FidelityTarget {
            ensemble: label.into(),
            span_dim: span,
            retained,
            d_lambda: BigUint::from(1u32),
            fidelity: w.q_s().powi(n as i32),
            bruteforce: None,
            best_equal_dim: None,
        });
    }
    let dl = d_lambda(retained as u32, n)?;
    let fidelity = fidelity_majority(&w, n)?;
    let bruteforce = if oracle { Some(fidelity_bruteforce(&rho, kept, n)?) } else { None };
    let enumerable = (span as u64).checked_pow(n).is_some_and(|s| s <= MAX_ENUMERATED_WORDS);
    let best_equal_dim = if enumerable && dl <= BigUint::from(MAX_SELECTED_WORDS) {
        Some(best_equal_dim_fidelity(&w, n, &dl)?.0)
    } else {
        None
    };
    Ok(FidelityTarget {
        ensemble: label.into(),
        span_dim: span,
        retained,
        d_lambda: dl,
        fidelity,
        bruteforce,
        best_equal_dim,
    })
}

pub fn fidelity(path: &Path, n: u32, oracle: bool, keep: Option<usize>) -> Result<Outcome> {
    let targets = match load_source(path)? {
        LoadedSource::Ensemble(e) => vec![fidelity_target("ensemble", &e, n, oracle, keep)?],
        LoadedSource::Decomposable(s) => vec![
            fidelity_target("H1", s.sub1(), n, oracle, keep.map(|d| d.min(s.d1())))?,
            fidelity_target("H2", s.sub2(), n, oracle, keep.map(|d| d.min(s.d2())))?,
        ],
    };
    let mut text = String::new();
    let mut mismatches = Vec::new();
    for t in &targets {
        let mut rows = vec![
            ("span dim", t.span_dim.to_string()),
            ("retained d", t.retained.to_string()),
            ("D_Lambda", t.d_lambda.to_string()),
            ("F_lambda", fmt_real(t.fidelity)),
        ];
        if let Some(b) = t.bruteforce {
            let ok = (b - t.fidelity).abs() <= ORACLE_TOL;
            if !ok {
                mismatches.push(t.ensemble.clone());
            }
            rows.push(("F_bruteforce", format!("{} {}", fmt_real(b), if ok { "match" } else { "MISMATCH" })));
        }
        if let Some(b) = t.best_equal_dim {
            rows.push(("F_best_equal_dim", fmt_real(b)));
        }
        let _ = writeln!(text, "[{}] N={n}", t.ensemble);
        text.push_str(&table(&rows));
    }
    let mut outcome = Outcome::report(&FidelityReport { n, targets }, text);
    if !mismatches.is_empty() {
        outcome.exit = EXIT_MISMATCH;
        outcome.diagnostics.push(format!(
            "error: {}",
            Error::OracleMismatch(format!("fidelity for {}", mismatches.join(", ")))
        ));
    }
    Ok(outcome)
}

pub fn pipeline(config: &RunConfig) -> Result<Outcome> {
    let r = run_pipeline(config)?;
    let mut text = table(&[
        ("N", r.n_total.to_string()),
        ("N1", r.n1.to_string()),
        ("N2", r.n2.to_string()),
        ("seed", r.seed.to_string()),
        ("k", r.k.to_string()),
        ("q", r.q.to_string()),
        ("H(X)", fmt_real(r.h_x_bound)),
        ("classical bits/signal", fmt_real(r.classical_bits_per_signal)),
        ("realized bits/signal", fmt_real(r.realized_bits_per_signal)),
        ("stream bytes", r.stream_bytes.to_string()),
        ("round trip", if r.round_trip_ok { "ok" } else { "FAILED" }.to_string()),
        ("S(rho)", fmt_real(r.s_rho)),
        ("S(rho1)", fmt_real(r.s1)),
        ("S(rho2)", fmt_real(r.s2)),
        ("entropy residual", fmt_real(r.entropy_residual)),
        ("quantum qubits", fmt_real(r.quantum_qubits)),
        ("expected-size qubits", fmt_real(r.quantum_qubits_expected)),
        ("total per signal", fmt_real(r.total_per_signal)),
        ("S(rho) bound", fmt_real(r.bound_per_signal)),
    ]);
    for s in &r.subspaces {
        let _ = writeln!(
            text,
            "H{}: d={} N={} (expected {}) {:?} D={} M={} (expected {}, delta {:+}) F={}",
            s.subspace,
            s.d,
            s.n_realized,
            s.n_expected,
            s.sizing,
            s.d_lambda,
            s.m,
            s.m_expected,
            s.m_delta,
            fmt_real(s.fidelity),
        );
    }
    let mut outcome = Outcome::report(&r, text);
    if !r.round_trip_ok {
        outcome.exit = EXIT_MISMATCH;
        outcome.diagnostics.push(format!("error: {}", Error::OracleMismatch("classical round trip".into())));
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct GapReport {
    p1: f64,
    gap: f64,
    support_overlap_1: f64,
    support_overlap_2: f64,
    max_cross_overlap: f64,
    orthogonal: bool,
}

pub fn gap(path: &Path) -> Result<Outcome> {
    let pair = load_ensemble_pair(path)?;
    let gap = subadditivity_gap(pair.p1, &pair.ens1, &pair.ens2)?;
    let (a, b) = orthogonality_trace_check(&pair.ens1.density(), &pair.ens2.density())?;
    let overlap = max_cross_overlap(&pair.ens1.span_basis(), &pair.ens2.span_basis()).2;
    let r = GapReport {
        p1: pair.p1,
        gap,
        support_overlap_1: a,
        support_overlap_2: b,
        max_cross_overlap: overlap,
        orthogonal: overlap < ORTHOGONALITY_TOL,
    };
    let text = table(&[
        ("P1", fmt_real(r.p1)),
        ("gap", fmt_real(r.gap)),
        ("support overlap 1", fmt_real(r.support_overlap_1)),
        ("support overlap 2", fmt_real(r.support_overlap_2)),
        ("max cross overlap", fmt_real(r.max_cross_overlap)),
        ("orthogonal", r.orthogonal.to_string()),
    ]);
    Ok(Outcome::report(&r, text))
}
