//! Dense square complex matrices and the comparison metrics used throughout.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{MeshError, Result};
use crate::parallel::{self, ExecMode};

/// A 2×2 complex block, row-major.
pub type Block2 = [[Complex64; 2]; 2];

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this dimension a product is never worth splitting across threads.
const PARALLEL_MIN_DIM: usize = 48;

/// Dense n×n complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(MeshError::InvalidDimension);
        }
        Ok(Self {
            n,
            data: vec![ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    /// Builds a matrix from a row-major entry vector of length n².
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(MeshError::InvalidDimension);
        }
        if data.len() != n * n {
            return Err(MeshError::EntryCount {
                expected: n * n,
                actual: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MeshError::NonFinite("in matrix entries"));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MeshError::EntryCount {
                    expected: n,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { n, data: out }
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        let mode = if self.n >= PARALLEL_MIN_DIM {
            ExecMode::default()
        } else {
            ExecMode::Sequential
        };
        self.matmul_with(rhs, mode)
    }

    /// Plain triple-loop product; rows of the result are independent, so the
    /// parallel mode splits over output rows and stays bit-identical.
    pub fn matmul_with(&self, rhs: &Self, mode: ExecMode) -> Result<Self> {
        if self.n != rhs.n {
            return Err(MeshError::ShapeMismatch {
                left: self.n,
                right: rhs.n,
            });
        }
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        parallel::for_each_row(&mut out, n, mode, |i, row| {
            let lhs_row = &self.data[i * n..(i + 1) * n];
            for (k, &l) in lhs_row.iter().enumerate() {
                if l == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &r) in row.iter_mut().zip(rhs_row) {
                    *o += l * r;
                }
            }
        });
        Ok(Self { n, data: out })
    }

    /// Max-entry deviation of M·M† from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            let ri = self.row(i);
            for j in 0..n {
                let rj = self.row(j);
                let mut acc = ZERO;
                for (a, b) in ri.iter().zip(rj) {
                    acc += a * b.conj();
                }
                if i == j {
                    acc -= ONE;
                }
                let d = acc.norm();
                if d.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest modulus among the entries off the main diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p == ZERO {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == ZERO {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= factor * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.8}{:+.8}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Numerical tolerances, all absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entries at or below this modulus count as already nullified.
    pub zero_tol: f64,
    /// Max deviation of U·U† from I accepted as unitary.
    pub unitary_tol: f64,
    /// Entrywise threshold for round-trip comparisons.
    pub compare_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero_tol: 1e-12,
            unitary_tol: 1e-10,
            compare_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new(zero_tol: f64, unitary_tol: f64, compare_tol: f64) -> Result<Self> {
        let t = Self {
            zero_tol,
            unitary_tol,
            compare_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.zero_tol, self.unitary_tol, self.compare_tol];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(MeshError::InvalidTolerances(
                "tolerances must be finite and strictly positive",
            ));
        }
        if self.zero_tol > self.compare_tol {
            return Err(MeshError::InvalidTolerances(
                "zero_tol must not exceed compare_tol",
            ));
        }
        Ok(())
    }

    /// Replaces compare_tol, keeping zero_tol ≤ compare_tol and widening
    /// unitary_tol when the comparison is looser than it.
    pub fn with_compare_tol(self, compare_tol: f64) -> Result<Self> {
        Self::new(
            self.zero_tol.min(compare_tol),
            self.unitary_tol.max(compare_tol),
            compare_tol,
        )
    }
}

/// Sign of the exponent in the Fourier kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierSign {
    /// exp(−2πi·jk/n)/√n, the forward transform.
    Negative,
    /// exp(+2πi·jk/n)/√n, the inverse transform.
    Positive,
}

/// Normalized discrete Fourier transform with the chosen kernel sign.
pub fn fourier_matrix(n: usize, sign: FourierSign) -> Result<ComplexMatrix> {
    let mut m = ComplexMatrix::zeros(n)?;
    let scale = 1.0 / (n as f64).sqrt();
    let s = match sign {
        FourierSign::Negative => -1.0,
        FourierSign::Positive => 1.0,
    };
    for j in 0..n {
        for k in 0..n {
            // reduce jk mod n first so large products keep full angle precision
            let idx = (j * k) % n;
            m[(j, k)] = Complex64::from_polar(scale, s * 2.0 * PI * idx as f64 / n as f64);
        }
    }
    Ok(m)
}

/// The symmetric multiport used as the standard fixture: entry (1,1) of the
/// 3-mode case is −0.2887−0.5i and of the 4-mode case −0.5i.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    fourier_matrix(n, FourierSign::Negative)
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.unitarity_deviation() <= tol
}

/// Embeds a 2×2 block on modes (m, m+1) of an n×n identity.
pub fn embed_gate(block: &Block2, m: usize, n: usize) -> Result<ComplexMatrix> {
    if n < 2 || m > n - 2 {
        return Err(MeshError::InvalidMode { mode: m, n });
    }
    let mut out = ComplexMatrix::identity(n)?;
    for r in 0..2 {
        for c in 0..2 {
            out[(m + r, m + c)] = block[r][c];
        }
    }
    Ok(out)
}

pub fn max_entry_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(MeshError::ShapeMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}
