//! Text file formats for matrices and gate lists.
//!
//! Both are JSON documents. Complex numbers are `[re, im]` pairs and angles
//! are radians. Floats are written in shortest round-trip form and parsed
//! with full precision, so every value survives serialize → parse exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::MeshError;
use crate::givens::{GateAngles, RotationParams, Side};
use crate::matrix::ComplexMatrix;
use crate::refine::{Decomposition, Gate, Metadata};
use crate::triangulate::{RawDecomposition, TraceStep};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent document: {0}")]
    Shape(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

type Pair = [f64; 2];

fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

fn complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    m.rows().map(|r| r.iter().copied().map(pair).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

/// `{"size": n, "rows": [[[re, im], ...], ...]}` with optional generator info.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub size: usize,
    pub rows: Vec<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MatrixMeta>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, meta: Option<MatrixMeta>) -> Self {
        Self {
            size: m.dim(),
            rows: matrix_rows(m),
            meta,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, FormatError> {
        if self.rows.len() != self.size {
            return Err(FormatError::Shape(format!(
                "size is {} but {} rows given",
                self.size,
                self.rows.len()
            )));
        }
        let mut data = Vec::with_capacity(self.size * self.size);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.size {
                return Err(FormatError::Shape(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.size
                )));
            }
            data.extend(row.iter().copied().map(complex));
        }
        Ok(ComplexMatrix::from_row_major(self.size, data)?)
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("matrix file serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub order: usize,
    pub layer: usize,
    pub modes: [usize; 2],
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateMeta {
    pub source: String,
    #[serde(default)]
    pub seed: Option<u64>,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationRecord {
    pub side: Side,
    pub mode: usize,
    pub target: [usize; 2],
    pub a: f64,
    pub b: Pair,
}

impl From<&RotationParams> for RotationRecord {
    fn from(p: &RotationParams) -> Self {
        Self {
            side: p.side,
            mode: p.mode,
            target: [p.target.0, p.target.1],
            a: p.a,
            b: pair(p.b),
        }
    }
}

/// Collection-order rotation lists and the unreduced phase screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub llist: Vec<RotationRecord>,
    pub rlist: Vec<RotationRecord>,
    pub u_phi: Vec<Pair>,
}

impl From<&RawDecomposition> for RawRecord {
    fn from(raw: &RawDecomposition) -> Self {
        Self {
            llist: raw.llist.iter().map(Into::into).collect(),
            rlist: raw.rlist.iter().map(Into::into).collect(),
            u_phi: raw.u_phi.iter().copied().map(pair).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    pub target: [usize; 2],
    pub side: Side,
    pub rotation: RotationRecord,
    pub matrix: Vec<Vec<Pair>>,
}

impl TraceRecord {
    pub fn from_step(index: usize, t: &TraceStep) -> Self {
        Self {
            step: index + 1,
            target: [t.step.target.0, t.step.target.1],
            side: t.step.side,
            rotation: (&t.params).into(),
            matrix: matrix_rows(&t.matrix),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, FormatError> {
        MatrixFile {
            size: self.matrix.len(),
            rows: self.matrix.clone(),
            meta: None,
        }
        .to_matrix()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub size: usize,
    pub gates: Vec<GateRecord>,
    pub phases: Vec<f64>,
    pub phase_factors: Vec<Pair>,
    pub meta: GateMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
}

impl GateFile {
    pub fn from_decomposition(dec: &Decomposition) -> Self {
        Self {
            size: dec.n,
            gates: dec
                .gates
                .iter()
                .map(|g| GateRecord {
                    order: g.order,
                    layer: g.layer,
                    modes: [g.mode, g.mode + 1],
                    theta: g.angles.theta,
                    phi: g.angles.phi,
                })
                .collect(),
            phases: dec.phase_angles.clone(),
            phase_factors: dec.phase_factors.iter().copied().map(pair).collect(),
            meta: GateMeta {
                source: dec.metadata.source.clone(),
                seed: dec.metadata.seed,
                tool_version: dec.metadata.tool_version.clone(),
                rng: dec.metadata.rng.clone(),
            },
            raw: None,
            trace: None,
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition, FormatError> {
        let n = self.size;
        if n == 0 {
            return Err(FormatError::Mesh(MeshError::InvalidDimension));
        }
        if self.phases.len() != n || self.phase_factors.len() != n {
            return Err(FormatError::Shape(format!(
                "size is {n} but {} phases and {} phase factors given",
                self.phases.len(),
                self.phase_factors.len()
            )));
        }
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let [m, m1] = g.modes;
            if m1 != m + 1 || m1 >= n {
                return Err(FormatError::Shape(format!(
                    "gate {} has modes [{m}, {m1}], expected an adjacent pair below {n}",
                    g.order
                )));
            }
            gates.push(Gate {
                mode: m,
                angles: GateAngles {
                    theta: g.theta,
                    phi: g.phi,
                },
                layer: g.layer,
                order: g.order,
            });
        }
        Ok(Decomposition {
            n,
            gates,
            phase_angles: self.phases.clone(),
            phase_factors: self.phase_factors.iter().copied().map(complex).collect(),
            metadata: Metadata {
                source: self.meta.source.clone(),
                seed: self.meta.seed,
                tool_version: self.meta.tool_version.clone(),
                rng: self.meta.rng.clone(),
            },
        })
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("gate file serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{dft_matrix, Tolerances};
    use crate::{decompose, triangulate::triangulate_traced};

    #[test]
    fn skeleton_document_parses() {
        let f = MatrixFile::parse(r#"{"size": 2, "rows": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert_eq!(f.to_matrix().unwrap(), ComplexMatrix::identity(2).unwrap());
    }

    #[test]
    fn matrix_shape_errors() {
        let bad = MatrixFile::parse(r#"{"size": 2, "rows": [[[1,0],[0,0]]]}"#).unwrap();
        assert!(matches!(bad.to_matrix(), Err(FormatError::Shape(_))));
        let ragged = MatrixFile::parse(r#"{"size": 2, "rows": [[[1,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert!(matches!(ragged.to_matrix(), Err(FormatError::Shape(_))));
        let empty = MatrixFile::parse(r#"{"size": 0, "rows": []}"#).unwrap();
        assert!(matches!(empty.to_matrix(), Err(FormatError::Mesh(MeshError::InvalidDimension))));
        assert!(matches!(MatrixFile::parse("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn quatter_file_entry() {
        let u = dft_matrix(4).unwrap();
        let f = MatrixFile::from_matrix(&u, None);
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        let e = &v["rows"][1][1];
        assert_eq!(e[0].as_f64().unwrap(), u[(1, 1)].re);
        assert!(e[0].as_f64().unwrap().abs() < 1e-16);
        assert_eq!(e[1].as_f64().unwrap(), -0.5);
    }

    #[test]
    fn gate_file_roundtrip_with_extras() {
        let u = dft_matrix(4).unwrap();
        let dec = decompose(&u, &Tolerances::default()).unwrap();
        let (raw, trace) = triangulate_traced(&u, &Tolerances::default()).unwrap();
        let mut f = GateFile::from_decomposition(&dec);
        f.raw = Some((&raw).into());
        f.trace = Some(trace.iter().enumerate().map(|(k, t)| TraceRecord::from_step(k, t)).collect());
        let back = GateFile::parse(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_decomposition().unwrap(), dec);
        assert_eq!(back.trace.unwrap()[0].to_matrix().unwrap(), trace[0].matrix);
    }

    #[test]
    fn gate_file_rejects_bad_modes() {
        let dec = decompose(&dft_matrix(3).unwrap(), &Tolerances::default()).unwrap();
        let mut f = GateFile::from_decomposition(&dec);
        f.gates[0].modes = [0, 2];
        assert!(matches!(f.to_decomposition(), Err(FormatError::Shape(_))));
        let mut f = GateFile::from_decomposition(&dec);
        f.phases.pop();
        assert!(matches!(f.to_decomposition(), Err(FormatError::Shape(_))));
    }
}
