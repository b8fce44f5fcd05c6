//! Seeded Haar-random unitaries for test corpora.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::matrix::{ComplexMatrix, ONE, ZERO};

/// Name of the generator recorded in file metadata.
pub const RNG_NAME: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

/// Draws an n×n unitary from the Haar measure.
///
/// Entries are standard complex Gaussians (variance 1/2 per component, drawn
/// row-major, real part first). Columns are orthonormalized by Householder QR
/// and each Q column is multiplied by the phase of the matching R diagonal
/// entry, which makes the factorization unique and the result Haar-distributed.
pub fn haar_unitary(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        entries.push(Complex64::new(re * scale, im * scale));
    }
    let mut a = ComplexMatrix::from_row_major(n, entries)?;
    let (mut q, r_diag) = householder_qr(&mut a)?;
    for (k, r) in r_diag.iter().enumerate() {
        let phase = if *r == ZERO { ONE } else { r / r.norm() };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

/// Reduces `a` to upper-triangular form in place; returns Q and R's diagonal.
fn householder_qr(a: &mut ComplexMatrix) -> Result<(ComplexMatrix, Vec<Complex64>)> {
    let n = a.dim();
    let mut q = ComplexMatrix::identity(n)?;
    let mut r_diag = Vec::with_capacity(n);
    for k in 0..n {
        let norm = (k..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            r_diag.push(ZERO);
            continue;
        }
        let x0 = a[(k, k)];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            r_diag.push(x0);
            continue;
        }
        // A[k.., k..] -= 2 v (v^H A) / |v|²
        for j in k..n {
            let mut dot = ZERO;
            for (off, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(k + off, j)];
            }
            let s = dot * (2.0 / vnorm2);
            for (off, vi) in v.iter().enumerate() {
                a[(k + off, j)] -= vi * s;
            }
        }
        // Q[:, k..] -= 2 (Q[:, k..] v) v^H / |v|²
        for i in 0..n {
            let mut dot = ZERO;
            for (off, vi) in v.iter().enumerate() {
                dot += q[(i, k + off)] * vi;
            }
            let s = dot * (2.0 / vnorm2);
            for (off, vi) in v.iter().enumerate() {
                q[(i, k + off)] -= s * vi.conj();
            }
        }
        r_diag.push(alpha);
    }
    Ok((q, r_diag))
}
