//! Reconstruction and round-trip checks.
//!
//! `rebuild` deliberately multiplies full embedded gate matrices with the
//! generic dense product instead of reusing the two-row updates of the
//! triangulation, so it can serve as an independent oracle for it.

use num_complex::Complex64;

use crate::error::{MeshError, Result};
use crate::givens::gate_matrix;
use crate::matrix::{embed_gate, max_entry_distance, ComplexMatrix, Tolerances};
use crate::refine::Decomposition;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub max_error: f64,
    pub unitary_deviation: f64,
    pub gate_count: usize,
    pub layer_count: usize,
    pub det_phase_error: f64,
    pub structure_ok: bool,
    pub passed: bool,
}

/// `diag(phase_factors) · Π embed(gate)` in product order.
pub fn rebuild(dec: &Decomposition) -> Result<ComplexMatrix> {
    if dec.phase_factors.len() != dec.n {
        return Err(MeshError::EntryCount {
            expected: dec.n,
            actual: dec.phase_factors.len(),
        });
    }
    let mut acc = ComplexMatrix::from_diagonal(&dec.phase_factors)?;
    for g in &dec.gates {
        let e = embed_gate(&gate_matrix(g.angles), g.mode, dec.n)?;
        acc = acc.matmul(&e)?;
    }
    Ok(acc)
}

/// Mesh-shape checks: gate count, per-mode layer monotonicity, depth ≤ n,
/// modes in range and product orders forming 1..=count.
pub fn structure_holds(dec: &Decomposition) -> bool {
    let n = dec.n;
    let expected = n * n.saturating_sub(1) / 2;
    if dec.gates.len() != expected {
        return false;
    }
    let mut last = vec![0usize; n];
    for (k, g) in dec.gates.iter().enumerate() {
        if g.order != k + 1 || n < 2 || g.mode > n - 2 || g.layer == 0 {
            return false;
        }
        if g.layer <= last[g.mode] || g.layer <= last[g.mode + 1] {
            return false;
        }
        last[g.mode] = g.layer;
        last[g.mode + 1] = g.layer;
    }
    dec.layer_count() <= n
}

pub fn verify_roundtrip(
    u: &ComplexMatrix,
    dec: &Decomposition,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if u.dim() != dec.n {
        return Err(MeshError::ShapeMismatch {
            left: u.dim(),
            right: dec.n,
        });
    }
    let rebuilt = rebuild(dec)?;
    let max_error = max_entry_distance(u, &rebuilt)?;
    let phase_product = dec
        .phase_factors
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, z| acc * z);
    let det_phase_error = (phase_product - u.determinant()).norm();
    let structure_ok = structure_holds(dec);
    Ok(VerificationReport {
        max_error,
        unitary_deviation: rebuilt.unitarity_deviation(),
        gate_count: dec.gates.len(),
        layer_count: dec.layer_count(),
        det_phase_error,
        structure_ok,
        passed: max_error <= tol.compare_tol && structure_ok,
    })
}
