//! Batch round-trip harness over Haar-random inputs.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::haar::haar_unitary;
use crate::matrix::Tolerances;
use crate::parallel::{map_ordered, ExecMode};
use crate::verify::verify_roundtrip;
use crate::decompose;

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub n: usize,
    pub seed: u64,
    pub max_error: f64,
    pub det_phase_error: f64,
    pub passed: bool,
    /// Set when the case errored before verification.
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RoundtripSummary {
    /// Sorted by (n, seed).
    pub cases: Vec<CaseResult>,
    pub worst_error: f64,
    pub elapsed: Duration,
}

impl RoundtripSummary {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

pub fn run_case(n: usize, seed: u64, tol: &Tolerances) -> CaseResult {
    let attempt = || -> Result<CaseResult> {
        let u = haar_unitary(n, seed)?;
        let dec = decompose(&u, tol)?;
        let report = verify_roundtrip(&u, &dec, tol)?;
        Ok(CaseResult {
            n,
            seed,
            max_error: report.max_error,
            det_phase_error: report.det_phase_error,
            passed: report.passed,
            error: None,
        })
    };
    attempt().unwrap_or_else(|e| CaseResult {
        n,
        seed,
        max_error: f64::INFINITY,
        det_phase_error: f64::INFINITY,
        passed: false,
        error: Some(e.to_string()),
    })
}

/// Runs gen → decompose → verify for n = min_size..=max_size and seeds
/// 0..seeds. Cases are independent, so `mode` may fan them out; results come
/// back in (n, seed) order regardless.
pub fn run_roundtrip(
    sizes: std::ops::RangeInclusive<usize>,
    seeds: u64,
    tol: &Tolerances,
    mode: ExecMode,
) -> RoundtripSummary {
    let start = Instant::now();
    let grid: Vec<(usize, u64)> = sizes
        .flat_map(|n| (0..seeds).map(move |s| (n, s)))
        .collect();
    let cases = map_ordered(&grid, mode, |&(n, seed)| run_case(n, seed, tol));
    let worst_error = cases.iter().map(|c| c.max_error).fold(0.0, f64::max);
    RoundtripSummary {
        cases,
        worst_error,
        elapsed: start.elapsed(),
    }
}
