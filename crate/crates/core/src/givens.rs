//! Two-mode nullifying rotations in beam-splitter form.
//!
//! Every rotation is the block
//!
//! ```text
//! G(a, b) = | a      i·b |
//!           | i·b*   a   |      a ∈ [0, 1] real,  a² + |b|² = 1
//! ```
//!
//! equivalently `G(θ, φ)` with `a = cos(θ/2)` and `b = e^{−iφ}·sin(θ/2)`.
//! Left rotations act as `G·U` on rows (m, m+1); right rotations act as
//! `U·G†` on columns (m, m+1).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MeshError, Result};
use crate::matrix::{Block2, ComplexMatrix, ONE, ZERO};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// The (a, b) pair of a single rotation block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub a: f64,
    pub b: Complex64,
}

impl Amplitudes {
    pub const IDENTITY: Amplitudes = Amplitudes { a: 1.0, b: ZERO };

    pub fn block(&self) -> Block2 {
        let a = Complex64::new(self.a, 0.0);
        [[a, I * self.b], [I * self.b.conj(), a]]
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1.0 && self.b == ZERO
    }

    /// θ = 2·arccos(a), φ = −arg(b) in (−π, π]; φ = 0 when b vanishes.
    pub fn angles(&self) -> GateAngles {
        let theta = 2.0 * self.a.clamp(0.0, 1.0).acos();
        let phi = if self.b == ZERO {
            0.0
        } else {
            normalize_angle(-self.b.arg())
        };
        GateAngles { theta, phi }
    }
}

/// One nullifying rotation as collected during triangulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    pub a: f64,
    pub b: Complex64,
    pub side: Side,
    /// The rotation couples modes `mode` and `mode + 1`.
    pub mode: usize,
    /// The (row, column) entry this rotation nullified.
    pub target: (usize, usize),
}

impl RotationParams {
    /// A row rotation nullifying `target = (i, j)`; couples rows (i−1, i).
    pub fn left(target: (usize, usize), amps: Amplitudes) -> Result<Self> {
        let (i, _) = target;
        if i == 0 {
            return Err(MeshError::InvalidMode { mode: 0, n: 0 });
        }
        Ok(Self {
            a: amps.a,
            b: amps.b,
            side: Side::Left,
            mode: i - 1,
            target,
        })
    }

    /// A column rotation nullifying `target = (i, j)`; couples columns (j, j+1).
    pub fn right(target: (usize, usize), amps: Amplitudes) -> Self {
        Self {
            a: amps.a,
            b: amps.b,
            side: Side::Right,
            mode: target.1,
            target,
        }
    }

    pub fn amplitudes(&self) -> Amplitudes {
        Amplitudes {
            a: self.a,
            b: self.b,
        }
    }

    pub fn block(&self) -> Block2 {
        self.amplitudes().block()
    }
}

/// Beam-splitter mixing angle θ ∈ [0, π] and phase φ ∈ (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateAngles {
    pub theta: f64,
    pub phi: f64,
}

/// Maps an angle into (−π, π].
pub fn normalize_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    // rem_euclid can land exactly on 2π for tiny negative inputs
    if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// |e^{iα} − e^{iβ}|; insensitive to the ±π wrap.
pub fn phasor_distance(alpha: f64, beta: f64) -> f64 {
    (Complex64::from_polar(1.0, alpha) - Complex64::from_polar(1.0, beta)).norm()
}

/// Rotation sending (x1, x2) to (r·x1/|x1|, 0) with a real, non-negative `a`.
pub fn left_nullifier(x1: Complex64, x2: Complex64, zero_tol: f64) -> Result<Amplitudes> {
    let r = x1.norm().hypot(x2.norm());
    if r == 0.0 || !r.is_finite() {
        return Err(if r == 0.0 {
            MeshError::DegenerateInput
        } else {
            MeshError::NonFinite("in left nullifier input")
        });
    }
    if x2.norm() <= zero_tol {
        return Ok(Amplitudes::IDENTITY);
    }
    if x1.norm() <= zero_tol {
        // x1/|x1| undefined; take it as 1
        return Ok(Amplitudes {
            a: 0.0,
            b: -I * x2.conj() / r,
        });
    }
    let phase = x1 / x1.norm();
    Ok(Amplitudes {
        a: x1.norm() / r,
        b: -I * (x2.conj() / r) * phase,
    })
}

/// Rotation sending (x1, x2) to (0, r̃) with |r̃| = r. Callers pass conjugated
/// matrix entries: x1 = U[i,j]*, x2 = U[i,j+1]*.
pub fn right_nullifier(x1: Complex64, x2: Complex64, zero_tol: f64) -> Result<Amplitudes> {
    let r = x1.norm().hypot(x2.norm());
    if r == 0.0 || !r.is_finite() {
        return Err(if r == 0.0 {
            MeshError::DegenerateInput
        } else {
            MeshError::NonFinite("in right nullifier input")
        });
    }
    if x1.norm() <= zero_tol {
        return Ok(Amplitudes::IDENTITY);
    }
    if x2.norm() <= zero_tol {
        // x2*/|x2| undefined; take it as 1
        return Ok(Amplitudes { a: 0.0, b: I * x1 / r });
    }
    Ok(Amplitudes {
        a: x2.norm() / r,
        b: I * (x2.conj() * x1) / (r * x2.norm()),
    })
}

/// The beam-splitter block for the given angles.
pub fn gate_matrix(angles: GateAngles) -> Block2 {
    let c = Complex64::new((angles.theta / 2.0).cos(), 0.0);
    let s = (angles.theta / 2.0).sin();
    [
        [c, I * Complex64::from_polar(s, -angles.phi)],
        [I * Complex64::from_polar(s, angles.phi), c],
    ]
}

pub fn params_to_angles(p: &RotationParams) -> GateAngles {
    p.amplitudes().angles()
}

fn check_mode(p: &RotationParams, expected: Side, n: usize) -> Result<()> {
    if p.side != expected {
        return Err(MeshError::SideMismatch {
            expected,
            actual: p.side,
        });
    }
    if n < 2 || p.mode > n - 2 {
        return Err(MeshError::InvalidMode { mode: p.mode, n });
    }
    Ok(())
}

/// In place `U ← G·U` on rows (m, m+1).
pub fn apply_left_in_place(u: &mut ComplexMatrix, p: &RotationParams) -> Result<()> {
    check_mode(p, Side::Left, u.dim())?;
    if p.amplitudes().is_identity() {
        return Ok(());
    }
    let g = p.block();
    let m = p.mode;
    for c in 0..u.dim() {
        let top = u[(m, c)];
        let bottom = u[(m + 1, c)];
        u[(m, c)] = g[0][0] * top + g[0][1] * bottom;
        u[(m + 1, c)] = g[1][0] * top + g[1][1] * bottom;
    }
    Ok(())
}

/// In place `U ← U·G†` on columns (m, m+1).
pub fn apply_right_in_place(u: &mut ComplexMatrix, p: &RotationParams) -> Result<()> {
    check_mode(p, Side::Right, u.dim())?;
    if p.amplitudes().is_identity() {
        return Ok(());
    }
    let g = p.block();
    let m = p.mode;
    for r in 0..u.dim() {
        let first = u[(r, m)];
        let second = u[(r, m + 1)];
        u[(r, m)] = first * g[0][0].conj() + second * g[0][1].conj();
        u[(r, m + 1)] = first * g[1][0].conj() + second * g[1][1].conj();
    }
    Ok(())
}

pub fn apply_left(u: &ComplexMatrix, p: &RotationParams) -> Result<ComplexMatrix> {
    let mut out = u.clone();
    apply_left_in_place(&mut out, p)?;
    Ok(out)
}

pub fn apply_right(u: &ComplexMatrix, p: &RotationParams) -> Result<ComplexMatrix> {
    let mut out = u.clone();
    apply_right_in_place(&mut out, p)?;
    Ok(out)
}

/// Product of two 2×2 blocks.
pub fn block_mul(x: &Block2, y: &Block2) -> Block2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = x[r][0] * y[0][c] + x[r][1] * y[1][c];
        }
    }
    out
}

pub fn block_adjoint(x: &Block2) -> Block2 {
    [[x[0][0].conj(), x[1][0].conj()], [x[0][1].conj(), x[1][1].conj()]]
}

pub fn block_identity() -> Block2 {
    [[ONE, ZERO], [ZERO, ONE]]
}
