//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Criterion 2 is known to fail: the right-gate φ values printed in the
//! reference table are the negatives of what φ = −arg(b) produces for three
//! of the four gates. It is evaluated literally and reported as FAIL; the
//! process exits non-zero only if a criterion outside `KNOWN_RED` fails or a
//! known-red criterion stops failing in the documented way.

#![allow(clippy::approx_constant)] // reference values are printed to eight digits

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use mesh_compiler::givens::{
    apply_left, block_adjoint, block_mul, gate_matrix, left_nullifier, phasor_distance,
};
use mesh_compiler::harness::run_roundtrip;
use mesh_compiler::io::{GateFile, MatrixFile};
use mesh_compiler::triangulate::triangulate_traced;
use mesh_compiler::verify::{structure_holds, verify_roundtrip};
use mesh_compiler::{
    decompose, dft_matrix, fourier_matrix, haar_unitary, ComplexMatrix, Decomposition, ExecMode,
    FourierSign, RotationParams, Tolerances,
};

const KNOWN_RED: &[u8] = &[2];

struct Outcome {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn max_abs_diff(xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter().zip(ys).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn modes(dec: &Decomposition) -> Vec<usize> {
    dec.gates.iter().map(|g| g.mode).collect()
}

fn ac1() -> Outcome {
    let u = dft_matrix(4).unwrap();
    let (dec, elapsed) = timed(|| decompose(&u, &tol()).unwrap());
    let theta: Vec<f64> = dec.gates.iter().map(|g| g.angles.theta).collect();
    let theta_ref = [1.23095942, 2.0943951, 2.0943951, 1.91063324, 1.57079633, 1.57079633];
    let theta_err = max_abs_diff(&theta, &theta_ref);
    let modes_ok = modes(&dec) == [1, 2, 0, 1, 2, 0];
    let phase_ref = [FRAC_PI_4, PI, -FRAC_PI_2, -FRAC_PI_4];
    let phase_err = dec
        .phase_angles
        .iter()
        .zip(phase_ref)
        .map(|(&a, b)| phasor_distance(a, b))
        .fold(0.0, f64::max);
    let fast = elapsed < Duration::from_millis(10);
    Outcome {
        id: 1,
        name: "DFT-4 regression",
        passed: theta_err <= 1e-7 && modes_ok && phase_err <= 1e-7 && fast,
        detail: format!(
            "theta err {theta_err:.1e}, modes {}, phase err {phase_err:.1e}, {elapsed:.2?}",
            if modes_ok { "match" } else { "differ" }
        ),
    }
}

fn ac2() -> Outcome {
    let u = dft_matrix(4).unwrap();
    let dec = decompose(&u, &tol()).unwrap();
    let phi: Vec<f64> = dec.gates[2..].iter().map(|g| g.angles.phi).collect();
    let phi_ref = [-1.57079633, -2.35619449, -1.57079633, -3.14159265];
    let dists: Vec<f64> = phi.iter().zip(phi_ref).map(|(&a, b)| phasor_distance(a, b)).collect();
    let right_ok = dists.iter().all(|&d| d <= 1e-7);

    // left gates: D†·G†·D must equal the emitted gate block
    let (raw, _) = triangulate_traced(&u, &tol()).unwrap();
    let mut commute_err = 0.0f64;
    for (p, g) in raw.llist.iter().zip(&dec.gates) {
        let (z1, z2) = (raw.u_phi[p.mode], raw.u_phi[p.mode + 1]);
        let d = [[z1, c(0.0, 0.0)], [c(0.0, 0.0), z2]];
        let lhs = block_mul(&block_mul(&block_adjoint(&d), &block_adjoint(&p.block())), &d);
        let rhs = gate_matrix(g.angles);
        for i in 0..2 {
            for j in 0..2 {
                commute_err = commute_err.max((lhs[i][j] - rhs[i][j]).norm());
            }
        }
    }
    let left_ok = commute_err <= 1e-12;
    Outcome {
        id: 2,
        name: "DFT-4 right-gate phi",
        passed: right_ok && left_ok,
        detail: format!(
            "right phi {:?} vs table {phi_ref:?} (phasor dist {:?}); left commutation err {commute_err:.1e}",
            phi.iter().map(|x| format!("{x:.8}")).collect::<Vec<_>>(),
            dists.iter().map(|x| format!("{x:.1e}")).collect::<Vec<_>>(),
        ),
    }
}

/// The documented failure: every right-gate φ equals the negated table value.
fn ac2_fails_as_documented() -> bool {
    let dec = decompose(&dft_matrix(4).unwrap(), &tol()).unwrap();
    let phi_ref = [-1.57079633, -2.35619449, -1.57079633, -3.14159265];
    dec.gates[2..]
        .iter()
        .zip(phi_ref)
        .all(|(g, r)| phasor_distance(g.angles.phi, -r) <= 1e-7)
}

fn ac3() -> Outcome {
    // The table's complex phase column belongs to the e^{+2πi jk/n} variant.
    let u = fourier_matrix(7, FourierSign::Positive).unwrap();
    let (dec, elapsed) = timed(|| decompose(&u, &tol()).unwrap());
    let modes_ref = [4, 5, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 0, 1, 2, 0];
    let layers_ref = [1, 2, 1, 2, 3, 4, 1, 2, 3, 4, 5, 6, 3, 4, 5, 6, 7, 5, 6, 7, 7];
    let theta_ref = [
        1.01328373, 2.23804657, 0.8374462, 1.79352577, 2.33427509, 1.74637704, 1.57079633,
        2.18559956, 2.12564842, 1.96812101, 2.33427509, 2.23804657, 1.84252123, 2.14816964,
        2.12564842, 1.79352577, 1.01328373, 1.84252123, 2.18559956, 0.8374462, 1.57079633,
    ];
    let phase_ref = [
        c(-0.99002554, 0.14088804),
        c(-0.40609043, 0.9138329),
        c(0.4804896, 0.87700042),
        c(0.97053839, -0.24094653),
        c(0.70056012, -0.71359339),
        c(0.13161199, -0.99130131),
        c(-0.42633443, -0.90456562),
    ];
    let layers: Vec<usize> = dec.gates.iter().map(|g| g.layer).collect();
    let theta: Vec<f64> = dec.gates.iter().map(|g| g.angles.theta).collect();
    let count_ok = dec.gates.len() == 21;
    let modes_ok = modes(&dec) == modes_ref;
    let layers_ok = layers == layers_ref;
    let theta_err = if count_ok { max_abs_diff(&theta, &theta_ref) } else { f64::INFINITY };
    let phase_err = dec
        .phase_factors
        .iter()
        .zip(phase_ref)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let fast = elapsed < Duration::from_millis(50);
    Outcome {
        id: 3,
        name: "DFT-7 regression",
        passed: count_ok && modes_ok && layers_ok && theta_err <= 1e-7 && phase_err <= 1e-7 && fast,
        detail: format!(
            "{} gates, modes {}, layers {}, theta err {theta_err:.1e}, phase err {phase_err:.1e}, {elapsed:.2?}",
            dec.gates.len(),
            if modes_ok { "match" } else { "differ" },
            if layers_ok { "match" } else { "differ" },
        ),
    }
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_mesh-compiler"))
        .args(args)
        .env_remove("MESH_COMPILER_TOL")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn ac4(dir: &Path) -> Outcome {
    let m = dir.join("dft4.json");
    let g = dir.join("dft4.gates.json");
    let gen = cli(&["gen", "--kind", "dft", "--size", "4", "--out", path_str(&m)]);
    let dec = cli(&["decompose", "--in", path_str(&m), "--out", path_str(&g), "--trace"]);
    let step1 = if gen.status.success() && dec.status.success() {
        GateFile::parse(&std::fs::read_to_string(&g).unwrap())
            .ok()
            .and_then(|f| f.trace)
            .and_then(|t| t.first().and_then(|s| s.to_matrix().ok()))
    } else {
        None
    };
    let (e30, e10, e00) = match &step1 {
        Some(w) => (
            w[(3, 0)].norm(),
            (w[(1, 0)] - c(0.70710678, 0.0)).norm(),
            (w[(0, 0)] - c(0.35355339, 0.35355339)).norm(),
        ),
        None => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
    };

    let tritter = dft_matrix(3).unwrap();
    let amps = left_nullifier(tritter[(1, 0)], tritter[(2, 0)], tol().zero_tol).unwrap();
    let p = RotationParams::left((2, 0), amps).unwrap();
    let out = apply_left(&tritter, &p).unwrap();
    let row_ref = [c(0.0, 0.0), c(0.0, 0.70710678), c(0.0, -0.70710678)];
    let row_err = out
        .row(2)
        .iter()
        .zip(row_ref)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    Outcome {
        id: 4,
        name: "Intermediate fixtures",
        passed: e30 <= 1e-12 && e10 <= 1e-7 && e00 <= 1e-7 && row_err <= 1e-7,
        detail: format!(
            "step 1: |(3,0)| {e30:.1e}, (1,0) err {e10:.1e}, (0,0) err {e00:.1e}; tritter row err {row_err:.1e}"
        ),
    }
}

fn ac5() -> Outcome {
    let t = Tolerances::default().with_compare_tol(1e-10).unwrap();
    let summary = run_roundtrip(2..=16, 20, &t, ExecMode::default());
    let fast = summary.elapsed < Duration::from_secs(5);
    let failed: Vec<_> = summary.failures().map(|c| (c.n, c.seed)).collect();
    Outcome {
        id: 5,
        name: "Round-trip property",
        passed: failed.is_empty() && summary.cases.len() == 300 && fast,
        detail: format!(
            "{} cases, worst error {:.1e}, failures {:?}, {:.2?}",
            summary.cases.len(),
            summary.worst_error,
            failed,
            summary.elapsed
        ),
    }
}

fn permutation(n: usize, shift: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n).unwrap();
    for i in 0..n {
        m[(i, (i * 3 + shift) % n)] = c(1.0, 0.0);
    }
    m
}

/// DFTs of both signs, Haar samples, identities, permutations and diagonal
/// phase screens for n = 1..=16.
fn corpus() -> Vec<(String, ComplexMatrix)> {
    let mut out = Vec::new();
    for n in 1..=16 {
        out.push((format!("dft{n}"), dft_matrix(n).unwrap()));
        out.push((format!("idft{n}"), fourier_matrix(n, FourierSign::Positive).unwrap()));
        out.push((format!("identity{n}"), ComplexMatrix::identity(n).unwrap()));
        let diag: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64)).collect();
        out.push((format!("phases{n}"), ComplexMatrix::from_diagonal(&diag).unwrap()));
        if n % 3 != 0 {
            out.push((format!("perm{n}"), permutation(n, 1)));
        }
        for seed in 0..5 {
            out.push((format!("haar{n}/{seed}"), haar_unitary(n, seed).unwrap()));
        }
    }
    out
}

fn ac6(corpus: &[(String, ComplexMatrix)]) -> Outcome {
    let mut worst_off = 0.0f64;
    let mut worst_modulus = 0.0f64;
    let mut worst_zero = 0.0f64;
    let mut bad = Vec::new();
    for (name, u) in corpus {
        let Ok((raw, trace)) = triangulate_traced(u, &tol()) else {
            bad.push(name.clone());
            continue;
        };
        let last = trace.last().map(|s| s.matrix.clone()).unwrap_or_else(|| u.clone());
        worst_off = worst_off.max(last.max_off_diagonal());
        for z in &raw.u_phi {
            worst_modulus = worst_modulus.max((z.norm() - 1.0).abs());
        }
        for (k, s) in trace.iter().enumerate() {
            for earlier in &trace[..=k] {
                worst_zero = worst_zero.max(s.matrix[earlier.step.target].norm());
            }
        }
    }
    Outcome {
        id: 6,
        name: "Lemma-1 property",
        passed: bad.is_empty() && worst_off <= 1e-10 && worst_modulus <= 1e-12 && worst_zero <= 1e-12,
        detail: format!(
            "{} inputs, off-diagonal {worst_off:.1e}, |diag|-1 {worst_modulus:.1e}, cleared entries {worst_zero:.1e}, errors {bad:?}",
            corpus.len()
        ),
    }
}

fn ac7(corpus: &[(String, ComplexMatrix)]) -> Outcome {
    let mut worst_det = 0.0f64;
    let mut bad = Vec::new();
    for (name, u) in corpus {
        let n = u.dim();
        let ok = decompose(u, &tol()).ok().and_then(|dec| {
            let report = verify_roundtrip(u, &dec, &tol()).ok()?;
            worst_det = worst_det.max(report.det_phase_error);
            let holds = dec.gates.len() == n * (n - 1) / 2
                && dec.layer_count() <= n
                && structure_holds(&dec)
                && report.det_phase_error <= 1e-10;
            Some(holds)
        });
        if ok != Some(true) {
            bad.push(name.clone());
        }
    }
    Outcome {
        id: 7,
        name: "Structural",
        passed: bad.is_empty(),
        detail: format!(
            "{} inputs, worst det phase error {worst_det:.1e}, violations {bad:?}",
            corpus.len()
        ),
    }
}

fn ac8(dir: &Path) -> Outcome {
    let mut mismatched = Vec::new();
    let inputs = [
        ("dft7", vec!["--kind", "dft", "--size", "7"]),
        ("haar9", vec!["--kind", "haar", "--size", "9", "--seed", "42"]),
    ];
    for (name, gen_args) in inputs {
        let m = dir.join(format!("{name}.json"));
        let mut args = vec!["gen"];
        args.extend(gen_args);
        args.extend(["--out", path_str(&m)]);
        if !cli(&args).status.success() {
            mismatched.push(format!("{name}: gen failed"));
            continue;
        }
        for extra in [&[][..], &["--emit-raw", "--trace"][..]] {
            let runs: Vec<_> = (0..3)
                .map(|_| {
                    let mut a = vec!["decompose", "--in", path_str(&m)];
                    a.extend(extra);
                    cli(&a)
                })
                .collect();
            let same = runs.iter().all(|r| r.status.success() && r.stdout == runs[0].stdout);
            if !same || runs[0].stdout.is_empty() {
                mismatched.push(format!("{name} {extra:?}"));
            }
        }
        let u = MatrixFile::parse(&std::fs::read_to_string(&m).unwrap())
            .unwrap()
            .to_matrix()
            .unwrap();
        let a = decompose(&u, &tol()).unwrap();
        let b = decompose(&u, &tol()).unwrap();
        if a != b {
            mismatched.push(format!("{name}: library"));
        }
    }
    Outcome {
        id: 8,
        name: "Determinism",
        passed: mismatched.is_empty(),
        detail: format!("mismatches {mismatched:?}"),
    }
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let corpus = corpus();
    // warm up allocator and thread pool so timing criteria measure the work
    let _ = decompose(&dft_matrix(4).unwrap(), &tol());
    let outcomes = [
        ac1(),
        ac2(),
        ac3(),
        ac4(dir.path()),
        ac5(),
        ac6(&corpus),
        ac7(&corpus),
        ac8(dir.path()),
    ];

    let mut unexpected = false;
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {}: {}", o.id, o.name, o.detail);
        let known = KNOWN_RED.contains(&o.id);
        if !o.passed && !known {
            unexpected = true;
        }
        if known && (o.passed || !ac2_fails_as_documented()) {
            println!("criterion {} no longer fails in the documented way", o.id);
            unexpected = true;
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!(
        "acceptance: {passed}/{} passed, known failing: {KNOWN_RED:?}",
        outcomes.len()
    );
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
