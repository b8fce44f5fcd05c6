//! Boustrophedon elimination schedule and the triangulation that follows it.

use num_complex::Complex64;

use crate::error::{MeshError, Result};
use crate::givens::{
    apply_left_in_place, apply_right_in_place, left_nullifier, right_nullifier, Amplitudes,
    RotationParams, Side,
};
use crate::matrix::{ComplexMatrix, Tolerances};

/// One entry of the elimination schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PivotStep {
    /// Subdiagonal index, 1 = the bottom-left corner.
    pub diagonal: usize,
    /// Position within the subdiagonal, counted from its top entry.
    pub position: usize,
    pub target: (usize, usize),
    pub side: Side,
}

/// Elimination order for an n×n matrix.
///
/// Subdiagonal d holds (n−d+m, m) for m = 0..d. Odd subdiagonals are cleared
/// from the right, bottom entry first; even ones from the left, top entry
/// first.
pub fn pivot_schedule(n: usize) -> Vec<PivotStep> {
    let mut steps = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for d in 1..n {
        let odd = d % 2 == 1;
        let side = if odd { Side::Right } else { Side::Left };
        let positions: Box<dyn Iterator<Item = usize>> = if odd {
            Box::new((0..d).rev())
        } else {
            Box::new(0..d)
        };
        for m in positions {
            steps.push(PivotStep {
                diagonal: d,
                position: m,
                target: (n - d + m, m),
                side,
            });
        }
    }
    steps
}

/// Collected rotations plus the residual phase screen.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDecomposition {
    pub n: usize,
    /// Left rotations in collection order.
    pub llist: Vec<RotationParams>,
    /// Right rotations in collection order.
    pub rlist: Vec<RotationParams>,
    /// Diagonal of the fully reduced matrix.
    pub u_phi: Vec<Complex64>,
}

/// A working-matrix snapshot taken right after a step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: PivotStep,
    pub params: RotationParams,
    pub matrix: ComplexMatrix,
}

pub fn triangulate(u: &ComplexMatrix, tol: &Tolerances) -> Result<RawDecomposition> {
    run(u, tol, None)
}

/// Like [`triangulate`] but also records the working matrix after every step.
pub fn triangulate_traced(
    u: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(RawDecomposition, Vec<TraceStep>)> {
    let mut trace = Vec::new();
    let raw = run(u, tol, Some(&mut trace))?;
    Ok((raw, trace))
}

fn run(
    u: &ComplexMatrix,
    tol: &Tolerances,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<RawDecomposition> {
    tol.validate()?;
    if !u.is_finite() {
        return Err(MeshError::NonFinite("in input matrix"));
    }
    let deviation = u.unitarity_deviation();
    if deviation.is_nan() || deviation > tol.unitary_tol {
        return Err(MeshError::NotUnitary {
            deviation,
            tol: tol.unitary_tol,
        });
    }

    let n = u.dim();
    let mut w = u.clone();
    let mut llist = Vec::new();
    let mut rlist = Vec::new();

    for step in pivot_schedule(n) {
        let (i, j) = step.target;
        let params = match step.side {
            Side::Left => {
                let amps = if w[(i, j)].norm() <= tol.zero_tol {
                    Amplitudes::IDENTITY
                } else {
                    left_nullifier(w[(i - 1, j)], w[(i, j)], tol.zero_tol)?
                };
                let p = RotationParams::left(step.target, amps)?;
                apply_left_in_place(&mut w, &p)?;
                llist.push(p);
                p
            }
            Side::Right => {
                let amps = if w[(i, j)].norm() <= tol.zero_tol {
                    Amplitudes::IDENTITY
                } else {
                    right_nullifier(w[(i, j)].conj(), w[(i, j + 1)].conj(), tol.zero_tol)?
                };
                let p = RotationParams::right(step.target, amps);
                apply_right_in_place(&mut w, &p)?;
                rlist.push(p);
                p
            }
        };
        if !w.is_finite() {
            return Err(MeshError::NonFinite("during triangulation"));
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceStep {
                step,
                params,
                matrix: w.clone(),
            });
        }
    }

    let residual = w.max_off_diagonal();
    if residual > 4.0 * tol.unitary_tol {
        return Err(MeshError::Inconsistent(format!(
            "off-diagonal residue {residual:e} after triangulation"
        )));
    }
    Ok(RawDecomposition {
        n,
        llist,
        rlist,
        u_phi: w.diagonal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{dft_matrix, fourier_matrix, FourierSign};
    use crate::givens::phasor_distance;
    use std::f64::consts::PI;

    #[test]
    fn schedule_two_modes() {
        assert_eq!(
            pivot_schedule(2),
            vec![PivotStep {
                diagonal: 1,
                position: 0,
                target: (1, 0),
                side: Side::Right
            }]
        );
        assert!(pivot_schedule(1).is_empty());
    }

    #[test]
    fn schedule_four_modes_follows_walkthrough() {
        let got: Vec<_> = pivot_schedule(4).iter().map(|s| (s.target, s.side)).collect();
        use Side::*;
        assert_eq!(
            got,
            vec![
                ((3, 0), Right),
                ((2, 0), Left),
                ((3, 1), Left),
                ((3, 2), Right),
                ((2, 1), Right),
                ((1, 0), Right),
            ]
        );
    }

    #[test]
    fn schedule_seven_modes_covers_lower_triangle() {
        // Enumerate independently: every (i, j) with i > j, grouped by i − j.
        let s = pivot_schedule(7);
        assert_eq!(s.len(), 21);
        let mut seen = std::collections::BTreeSet::new();
        for step in &s {
            assert!(seen.insert(step.target));
            let (i, j) = step.target;
            assert!(i > j);
            assert_eq!(7 - step.diagonal, i - j);
            assert_eq!(step.side == Side::Right, step.diagonal % 2 == 1);
        }
        assert_eq!(s[0].target, (6, 0));
        assert_eq!(s[0].side, Side::Right);
        assert_eq!(s[20].target, (6, 5));
        assert_eq!(s[20].side, Side::Left);
        let sizes: Vec<_> = (1..7).map(|d| s.iter().filter(|x| x.diagonal == d).count()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn identity_input_gives_identity_params() {
        let u = ComplexMatrix::identity(4).unwrap();
        let raw = triangulate(&u, &Tolerances::default()).unwrap();
        assert_eq!(raw.llist.len() + raw.rlist.len(), 6);
        assert!(raw
            .llist
            .iter()
            .chain(&raw.rlist)
            .all(|p| p.amplitudes().is_identity()));
        assert!(raw.u_phi.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn quatter_phase_screen() {
        let raw = triangulate(&dft_matrix(4).unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(raw.llist.len(), 2);
        assert_eq!(raw.rlist.len(), 4);
        let expected = [PI / 4.0, PI, -PI / 2.0, -PI / 4.0];
        for (z, e) in raw.u_phi.iter().zip(expected) {
            assert!(phasor_distance(z.arg(), e) < 1e-12);
        }
    }

    #[test]
    fn seven_mode_phase_screen() {
        let raw = triangulate(
            &fourier_matrix(7, FourierSign::Positive).unwrap(),
            &Tolerances::default(),
        )
        .unwrap();
        let expected = [
            (-0.99002554, 0.14088804),
            (-0.40609043, 0.9138329),
            (0.4804896, 0.87700042),
            (0.97053839, -0.24094653),
            (0.70056012, -0.71359339),
            (0.13161199, -0.99130131),
            (-0.42633443, -0.90456562),
        ];
        for (z, (re, im)) in raw.u_phi.iter().zip(expected) {
            assert!((z - Complex64::new(re, im)).norm() < 1e-7, "{z}");
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let mut u = dft_matrix(4).unwrap();
        u[(0, 0)] = Complex64::new(0.6, 0.0);
        match triangulate(&u, &Tolerances::default()) {
            Err(MeshError::NotUnitary { deviation, .. }) => assert!(deviation > 0.05),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_nan() {
        let mut u = dft_matrix(3).unwrap();
        u[(1, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            triangulate(&u, &Tolerances::default()),
            Err(MeshError::NonFinite(_))
        ));
    }

    #[test]
    fn trace_has_one_snapshot_per_step() {
        let (raw, trace) = triangulate_traced(&dft_matrix(5).unwrap(), &Tolerances::default()).unwrap();
        assert_eq!(trace.len(), 10);
        assert_eq!(trace.last().unwrap().matrix.diagonal(), raw.u_phi);
    }

    #[test]
    fn single_mode_is_pure_phase() {
        let u = ComplexMatrix::from_row_major(1, vec![Complex64::from_polar(1.0, 0.3)]).unwrap();
        let raw = triangulate(&u, &Tolerances::default()).unwrap();
        assert!(raw.llist.is_empty() && raw.rlist.is_empty());
        assert_eq!(raw.u_phi, vec![u[(0, 0)]]);
    }

    #[test]
    fn permutation_input_uses_swaps() {
        // anti-diagonal permutation: every target starts non-zero or gets
        // filled, partners are often exactly zero
        let n = 4;
        let mut u = ComplexMatrix::zeros(n).unwrap();
        for i in 0..n {
            u[(i, n - 1 - i)] = Complex64::new(1.0, 0.0);
        }
        let raw = triangulate(&u, &Tolerances::default()).unwrap();
        assert_eq!(raw.llist.len() + raw.rlist.len(), 6);
        assert!(raw.u_phi.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }
}
