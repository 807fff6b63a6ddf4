//! Code-space sizing: waste, minimal block lengths, and the exhaustive
//! search for exact solutions of `q^M = D_Λ(d, N)`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::serialize_decimal;
use crate::typical::{d_lambda, BigCount};
use crate::{Error, Result};

/// One exact solution `q^m = D_Λ(d, n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SolutionRow {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub q: u32,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "D_Lambda", serialize_with = "serialize_decimal")]
    pub d_lambda: BigCount,
}

impl SolutionRow {
    pub fn new(d: u32, n: u32, q: u32, m: u32, d_lambda: impl Into<BigUint>) -> Self {
        Self {
            d,
            n,
            q,
            m,
            d_lambda: d_lambda.into(),
        }
    }
}

/// Inclusive search ranges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchRanges {
    pub d_min: u32,
    pub d_max: u32,
    pub n_min: u32,
    pub n_max: u32,
    pub q_min: u32,
    pub q_max: u32,
    pub m_min: u32,
    pub m_max: u32,
}

impl Default for SearchRanges {
    /// `2 ≤ d, q, M ≤ 32`, `3 ≤ N ≤ 32`.
    fn default() -> Self {
        Self {
            d_min: 2,
            d_max: 32,
            n_min: 3,
            n_max: 32,
            q_min: 2,
            q_max: 32,
            m_min: 2,
            m_max: 32,
        }
    }
}

impl SearchRanges {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("d", self.d_min, self.d_max, 2),
            ("N", self.n_min, self.n_max, 3),
            ("q", self.q_min, self.q_max, 2),
            ("M", self.m_min, self.m_max, 2),
        ];
        for (name, lo, hi, floor) in checks {
            if lo < floor {
                return Err(Error::invalid(format!("{name} range starts at {lo}, minimum is {floor}")));
            }
            if hi < lo {
                return Err(Error::invalid(format!("{name} range {lo}..={hi} is empty")));
            }
        }
        Ok(())
    }
}

/// `E = (q^m - D) / D`.
pub fn waste(d_lambda: &BigCount, q: u32, m: u32) -> Result<f64> {
    if d_lambda.is_zero() {
        return Err(Error::invalid("subspace dimension must be positive"));
    }
    let capacity = BigUint::from(q).pow(m);
    if &capacity < d_lambda {
        return Err(Error::Infeasible {
            capacity: capacity.to_string(),
            required: d_lambda.to_string(),
        });
    }
    Ok(ratio(&(capacity - d_lambda), d_lambda))
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (n, d) = ((num >> shift).to_f64(), (den >> shift).to_f64());
    match (n, d) {
        (Some(n), Some(d)) if d > 0.0 => n / d,
        _ => f64::INFINITY,
    }
}

/// Smallest `m` with `q^m ≥ D`, by exact comparison.
pub fn minimal_block_length(d_lambda: &BigCount, q: u32) -> Result<u32> {
    if q < 2 {
        return Err(Error::invalid(format!("alphabet size q={q} must be at least 2")));
    }
    // q < 2^b, so q^m0 < 2^(b m0) <= 2^(bits(D)-1) <= D: m0 never overshoots
    let b = 32 - q.leading_zeros() as u64;
    let start = d_lambda.bits().saturating_sub(1) / b;
    let mut m = u32::try_from(start).map_err(|_| Error::TooLarge(format!("dimension {d_lambda}")))?;
    let mut capacity = BigUint::from(q).pow(m);
    while &capacity < d_lambda {
        capacity *= q;
        m += 1;
    }
    Ok(m)
}

fn cell_solutions(d: u32, n: u32, r: &SearchRanges) -> Vec<SolutionRow> {
    let target = d_lambda(d, n).expect("ranges validated");
    let mut out = Vec::new();
    for q in r.q_min..=r.q_max {
        let mut power = BigUint::from(q).pow(r.m_min);
        for m in r.m_min..=r.m_max {
            if power > target {
                break;
            }
            if power == target {
                out.push(SolutionRow::new(d, n, q, m, target.clone()));
            }
            power *= q;
        }
    }
    out
}

fn cells(r: &SearchRanges) -> Vec<(u32, u32)> {
    (r.d_min..=r.d_max)
        .flat_map(|d| (r.n_min..=r.n_max).map(move |n| (d, n)))
        .collect()
}

/// Every `(d, N, q, M)` in range with `q^M = D_Λ(d, N)`, sorted ascending.
pub fn exact_solutions(ranges: &SearchRanges) -> Result<Vec<SolutionRow>> {
    ranges.validate()?;
    let mut rows: Vec<SolutionRow> = cells(ranges)
        .into_par_iter()
        .flat_map_iter(|(d, n)| cell_solutions(d, n, ranges))
        .collect();
    rows.sort();
    Ok(rows)
}

/// Single-threaded [`exact_solutions`], visiting cells in reverse order.
pub fn exact_solutions_serial(ranges: &SearchRanges) -> Result<Vec<SolutionRow>> {
    ranges.validate()?;
    let mut rows: Vec<SolutionRow> = cells(ranges)
        .into_iter()
        .rev()
        .flat_map(|(d, n)| cell_solutions(d, n, ranges))
        .collect();
    rows.sort();
    Ok(rows)
}

/// The published `(d, N, q, M, D_Λ)` table.
pub const PUBLISHED_TABLE1: [(u32, u32, u32, u32, u64); 16] = [
    (2, 3, 2, 2, 4),
    (2, 5, 2, 4, 16),
    (2, 9, 2, 8, 256),
    (2, 17, 2, 16, 65536),
    (2, 5, 4, 2, 16),
    (2, 9, 4, 4, 256),
    (2, 17, 4, 8, 65536),
    (2, 11, 32, 2, 1024),
    (2, 21, 32, 4, 1048576),
    (4, 4, 7, 2, 49),
    (6, 3, 2, 4, 16),
    (6, 3, 4, 2, 16),
    (17, 3, 7, 2, 49),
    (22, 3, 2, 6, 64),
    (22, 3, 4, 3, 64),
    (22, 3, 8, 2, 64),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PublishedCheck {
    pub row: SolutionRow,
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table1Report {
    pub published: Vec<PublishedCheck>,
    /// Exact solutions in range that the published table omits.
    pub extras: Vec<SolutionRow>,
}

impl Table1Report {
    pub fn confirmed(&self) -> usize {
        self.published.iter().filter(|c| c.confirmed).count()
    }

    pub fn all_confirmed(&self) -> bool {
        self.confirmed() == self.published.len()
    }
}

/// Searches the default ranges and compares against [`PUBLISHED_TABLE1`].
pub fn verify_table1() -> Table1Report {
    let found = exact_solutions(&SearchRanges::default()).expect("default ranges are valid");
    let published: Vec<SolutionRow> = PUBLISHED_TABLE1
        .iter()
        .map(|&(d, n, q, m, dl)| SolutionRow::new(d, n, q, m, dl))
        .collect();
    let checks = published
        .iter()
        .map(|row| PublishedCheck {
            row: row.clone(),
            confirmed: found.binary_search(row).is_ok(),
        })
        .collect();
    let extras = found.into_iter().filter(|r| !published.contains(r)).collect();
    Table1Report {
        published: checks,
        extras,
    }
}

pub const CSV_HEADER: &str = "d,N,q,M,D_Lambda";

pub fn rows_to_csv(rows: &[SolutionRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.d, r.n, r.q, r.m, r.d_lambda);
    }
    s
}

pub fn rows_to_text(rows: &[SolutionRow]) -> String {
    let width = rows.iter().map(|r| r.d_lambda.to_string().len()).max().unwrap_or(0).max(8);
    let mut s = format!("{:>3} {:>3} {:>3} {:>3} {:>width$}\n", "d", "N", "q", "M", "D_Lambda");
    for r in rows {
        let _ = writeln!(s, "{:>3} {:>3} {:>3} {:>3} {:>width$}", r.d, r.n, r.q, r.m, r.d_lambda.to_string());
    }
    s
}
