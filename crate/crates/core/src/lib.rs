//! Decomposition of N×N unitaries into a Clements rectangular mesh of
//! two-mode beam splitters followed by a diagonal phase screen.
//!
//! The pipeline is [`triangulate`] (boustrophedon Givens elimination, giving
//! the raw left/right rotation lists and the residual phases), then
//! [`refine`] (phase commutation, product ordering and layer assignment).
//! [`verify::rebuild`] multiplies the result back out as an independent check.
//!
//! ```
//! use mesh_compiler::{decompose, dft_matrix, Tolerances};
//! use mesh_compiler::verify::verify_roundtrip;
//!
//! let u = dft_matrix(4).unwrap();
//! let tol = Tolerances::default();
//! let dec = decompose(&u, &tol).unwrap();
//! assert_eq!(dec.gates.len(), 6);
//! assert!(verify_roundtrip(&u, &dec, &tol).unwrap().passed);
//! ```

pub mod error;
pub mod givens;
pub mod haar;
pub mod harness;
pub mod io;
pub mod matrix;
pub mod parallel;
pub mod refine;
pub mod render;
pub mod triangulate;
pub mod verify;

pub use error::{MeshError, Result};
pub use givens::{GateAngles, RotationParams, Side};
pub use haar::haar_unitary;
pub use matrix::{dft_matrix, fourier_matrix, ComplexMatrix, FourierSign, Tolerances};
pub use parallel::ExecMode;
pub use refine::{assign_layers, refine, Decomposition, Gate, Metadata};
pub use triangulate::{pivot_schedule, triangulate, PivotStep, RawDecomposition};

/// Triangulates `u` and refines the result into the final gate train.
pub fn decompose(u: &ComplexMatrix, tol: &Tolerances) -> Result<Decomposition> {
    refine(&triangulate(u, tol)?)
}
