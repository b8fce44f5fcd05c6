//! Moving the phase screen to the front of the gate train, merging the two
//! rotation lists into product order, and assigning mesh layers.
//!
//! Triangulation leaves `L_k ⋯ L_1 · U · R_1† ⋯ R_p† = D`, hence
//! `U = L_1† ⋯ L_k† · D · R_p ⋯ R_1`. Each left factor is commuted through
//! the diagonal, `L† · D = D · (D† L† D)`, giving
//! `U = D · (D† L_1† D) ⋯ (D† L_k† D) · R_p ⋯ R_1`.

use num_complex::Complex64;

use crate::error::{MeshError, Result};
use crate::givens::{
    block_adjoint, block_mul, normalize_angle, Amplitudes, GateAngles, RotationParams, Side,
};
use crate::matrix::ZERO;
use crate::triangulate::RawDecomposition;

/// Tolerance on the beam-splitter form of a conjugated block.
const FORM_TOL: f64 = 1e-12;

/// One beam splitter of the final mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    /// Acts on modes (mode, mode + 1).
    pub mode: usize,
    pub angles: GateAngles,
    /// Mesh column, 1-based, counted from the leftmost factor.
    pub layer: usize,
    /// Position in the product, 1-based, leftmost factor first.
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub source: String,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub rng: Option<String>,
}

impl Default for Metadata {
    fn default() -> Self {
        Self {
            source: String::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: None,
        }
    }
}

/// `U = diag(phase_factors) · gates[0] · gates[1] ⋯`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub phase_angles: Vec<f64>,
    pub phase_factors: Vec<Complex64>,
    pub metadata: Metadata,
}

impl Decomposition {
    pub fn layer_count(&self) -> usize {
        self.gates.iter().map(|g| g.layer).max().unwrap_or(0)
    }
}

/// Conjugates the adjoint of a left rotation by the phase screen restricted
/// to its two modes, `D†·G†·D`, and re-reads the (a, b) pair.
pub fn commute_left_block(p: &RotationParams, phases: (f64, f64)) -> Result<Amplitudes> {
    if p.side != Side::Left {
        return Err(MeshError::SideMismatch {
            expected: Side::Left,
            actual: p.side,
        });
    }
    let d = [
        [Complex64::from_polar(1.0, phases.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, phases.1)],
    ];
    let g_adj = block_adjoint(&p.block());
    let block = block_mul(&block_mul(&block_adjoint(&d), &g_adj), &d);

    let a = block[0][0].re;
    let b = Complex64::new(0.0, -1.0) * block[0][1];
    let form_error = [
        block[0][0].im.abs(),
        (block[1][1] - block[0][0]).norm(),
        (block[1][0] - Complex64::new(0.0, 1.0) * b.conj()).norm(),
        (a - p.a).abs(),
    ]
    .into_iter()
    .fold(0.0, |m: f64, e| if e.is_nan() || e > m { e } else { m });
    if form_error.is_nan() || form_error > FORM_TOL {
        return Err(MeshError::Inconsistent(format!(
            "conjugated block on modes ({}, {}) is off beam-splitter form by {form_error:e}",
            p.mode,
            p.mode + 1
        )));
    }
    Ok(Amplitudes { a, b })
}

pub fn commute_left_gate(p: &RotationParams, phases: (f64, f64)) -> Result<GateAngles> {
    Ok(commute_left_block(p, phases)?.angles())
}

/// Builds the final gate train. Layers are assigned before returning.
pub fn refine(raw: &RawDecomposition) -> Result<Decomposition> {
    let phase_angles: Vec<f64> = raw.u_phi.iter().map(|z| normalize_angle(z.arg())).collect();

    let mut gates = Vec::with_capacity(raw.llist.len() + raw.rlist.len());
    for p in &raw.llist {
        let angles = commute_left_gate(p, (phase_angles[p.mode], phase_angles[p.mode + 1]))?;
        gates.push((p.mode, angles));
    }
    for p in raw.rlist.iter().rev() {
        gates.push((p.mode, p.amplitudes().angles()));
    }

    let dec = Decomposition {
        n: raw.n,
        gates: gates
            .into_iter()
            .enumerate()
            .map(|(k, (mode, angles))| Gate {
                mode,
                angles,
                layer: 0,
                order: k + 1,
            })
            .collect(),
        phase_factors: phase_angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect(),
        phase_angles,
        metadata: Metadata::default(),
    };
    Ok(assign_layers(dec))
}

/// Greedy earliest-available layering in product order: a gate lands one
/// column after the latest gate already placed on either of its modes.
pub fn assign_layers(mut dec: Decomposition) -> Decomposition {
    let mut last = vec![0usize; dec.n + 1];
    for g in dec.gates.iter_mut() {
        let layer = 1 + last[g.mode].max(last[g.mode + 1]);
        g.layer = layer;
        last[g.mode] = layer;
        last[g.mode + 1] = layer;
    }
    dec
}
