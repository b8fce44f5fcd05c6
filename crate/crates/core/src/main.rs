use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mesh_compiler::haar::RNG_NAME;
use mesh_compiler::harness::run_roundtrip;
use mesh_compiler::io::{GateFile, MatrixFile, MatrixMeta, TraceRecord};
use mesh_compiler::render::{render_ascii, render_svg};
use mesh_compiler::triangulate::{triangulate, triangulate_traced};
use mesh_compiler::verify::verify_roundtrip;
use mesh_compiler::{
    fourier_matrix, haar_unitary, refine, ExecMode, FourierSign, MeshError, Tolerances,
};

const TOL_ENV: &str = "MESH_COMPILER_TOL";

#[derive(Parser)]
#[command(name = "mesh-compiler", version, about = "Clements-mesh decomposition of unitary matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a test unitary to a matrix file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        size: usize,
        /// Required for --kind haar.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a matrix file into a gate file.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comparison tolerance for the post-decomposition self-check.
        #[arg(long)]
        tol: Option<f64>,
        /// Also store the collection-order rotation lists and raw phases.
        #[arg(long)]
        emit_raw: bool,
        /// Also store the working matrix after every elimination step.
        #[arg(long)]
        trace: bool,
    },
    /// Rebuild a gate file and compare it with a matrix file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        gates: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Draw the mesh described by a gate file.
    Render {
        #[arg(long)]
        gates: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose and verify Haar-random unitaries for n = 2..=size.
    Roundtrip {
        /// Largest matrix dimension.
        #[arg(long)]
        size: usize,
        /// Number of seeds per dimension.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long)]
        tol: Option<f64>,
        /// Run cases on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Normalized DFT, exp(-2πi·jk/n)/√n.
    Dft,
    /// Inverse normalized DFT, exp(+2πi·jk/n)/√n.
    Idft,
    Haar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

enum Failure {
    Verification(String),
    Input(String),
    Precondition(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Input(m)
            | Failure::Precondition(m)
            | Failure::Internal(m) => m,
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            kind,
            size,
            seed,
            out,
        } => cmd_gen(kind, size, seed, out.as_deref()),
        Command::Decompose {
            input,
            out,
            tol,
            emit_raw,
            trace,
        } => cmd_decompose(&input, out.as_deref(), tol, emit_raw, trace),
        Command::Verify { input, gates, tol } => cmd_verify(&input, &gates, tol),
        Command::Render { gates, format, out } => cmd_render(&gates, format, out.as_deref()),
        Command::Roundtrip {
            size,
            seeds,
            tol,
            sequential,
        } => cmd_roundtrip(size, seeds, tol, sequential),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn tolerances(flag: Option<f64>) -> std::result::Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    if let Ok(raw) = std::env::var(TOL_ENV) {
        let v: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("{TOL_ENV}={raw:?} is not a number")))?;
        tol = tol
            .with_compare_tol(v)
            .map_err(|e| Failure::Input(format!("{TOL_ENV}: {e}")))?;
    }
    if let Some(v) = flag {
        tol = tol
            .with_compare_tol(v)
            .map_err(|e| Failure::Input(format!("--tol: {e}")))?;
    }
    Ok(tol)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, payload: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, payload)
            .map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(payload.as_bytes())
            .map_err(|e| Failure::Internal(format!("stdout: {e}"))),
    }
}

fn load_matrix(path: &Path) -> std::result::Result<(MatrixFile, mesh_compiler::ComplexMatrix), Failure> {
    let file = MatrixFile::parse(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let m = file
        .to_matrix()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((file, m))
}

fn load_gates(path: &Path) -> std::result::Result<mesh_compiler::Decomposition, Failure> {
    GateFile::parse(&read(path)?)
        .and_then(|f| f.to_decomposition())
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_gen(kind: Kind, size: usize, seed: Option<u64>, out: Option<&Path>) -> CmdResult {
    if size == 0 {
        return Err(Failure::Input("--size must be at least 1".into()));
    }
    let internal = |e: MeshError| Failure::Internal(e.to_string());
    let (m, meta) = match kind {
        Kind::Dft | Kind::Idft => {
            let (sign, name) = match kind {
                Kind::Dft => (FourierSign::Negative, "dft"),
                _ => (FourierSign::Positive, "idft"),
            };
            let meta = MatrixMeta {
                kind: name.into(),
                seed: None,
                rng: None,
            };
            (fourier_matrix(size, sign).map_err(internal)?, meta)
        }
        Kind::Haar => {
            let seed =
                seed.ok_or_else(|| Failure::Input("--kind haar requires --seed".into()))?;
            let meta = MatrixMeta {
                kind: "haar".into(),
                seed: Some(seed),
                rng: Some(RNG_NAME.into()),
            };
            (haar_unitary(size, seed).map_err(internal)?, meta)
        }
    };
    emit(out, &MatrixFile::from_matrix(&m, Some(meta)).to_json())
}

fn cmd_decompose(
    input: &Path,
    out: Option<&Path>,
    tol: Option<f64>,
    emit_raw: bool,
    trace: bool,
) -> CmdResult {
    let tol = tolerances(tol)?;
    let (file, u) = load_matrix(input)?;
    let classify = |e: MeshError| match e {
        MeshError::NotUnitary { .. } => Failure::Precondition(e.to_string()),
        MeshError::NonFinite(_) | MeshError::InvalidDimension => Failure::Input(e.to_string()),
        other => Failure::Internal(other.to_string()),
    };

    let (raw, steps) = if trace {
        let (raw, steps) = triangulate_traced(&u, &tol).map_err(classify)?;
        (raw, Some(steps))
    } else {
        (triangulate(&u, &tol).map_err(classify)?, None)
    };
    let mut dec = refine(&raw).map_err(|e| Failure::Internal(e.to_string()))?;
    if let Some(meta) = &file.meta {
        dec.metadata.source = format!("{}({})", meta.kind, u.dim());
        dec.metadata.seed = meta.seed;
        dec.metadata.rng = meta.rng.clone();
    } else {
        dec.metadata.source = input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
    }

    let report = verify_roundtrip(&u, &dec, &tol).map_err(|e| Failure::Internal(e.to_string()))?;
    if !report.passed {
        return Err(Failure::Internal(format!(
            "self-check failed: rebuild differs from input by {:e} (tolerance {:e})",
            report.max_error, tol.compare_tol
        )));
    }

    let mut gate_file = GateFile::from_decomposition(&dec);
    if emit_raw {
        gate_file.raw = Some((&raw).into());
    }
    if let Some(steps) = steps {
        gate_file.trace = Some(
            steps
                .iter()
                .enumerate()
                .map(|(k, s)| TraceRecord::from_step(k, s))
                .collect(),
        );
    }
    emit(out, &gate_file.to_json())
}

fn cmd_verify(input: &Path, gates: &Path, tol: Option<f64>) -> CmdResult {
    let tol = tolerances(tol)?;
    let (_, u) = load_matrix(input)?;
    let dec = load_gates(gates)?;
    if dec.n != u.dim() {
        return Err(Failure::Input(format!(
            "matrix is {0}x{0} but gate file has size {1}",
            u.dim(),
            dec.n
        )));
    }
    let r = verify_roundtrip(&u, &dec, &tol).map_err(|e| Failure::Input(e.to_string()))?;
    let status = if r.passed { "PASS" } else { "FAIL" };
    let text = format!(
        "{status}: max_error={:.3e} (tol {:.1e}) det_phase_error={:.3e} unitary_deviation={:.3e} gates={} layers={} structure={}\n{}\n",
        r.max_error,
        tol.compare_tol,
        r.det_phase_error,
        r.unitary_deviation,
        r.gate_count,
        r.layer_count,
        if r.structure_ok { "ok" } else { "broken" },
        serde_json::json!({
            "passed": r.passed,
            "max_error": r.max_error,
            "det_phase_error": r.det_phase_error,
            "unitary_deviation": r.unitary_deviation,
            "gate_count": r.gate_count,
            "layer_count": r.layer_count,
            "structure_ok": r.structure_ok,
        })
    );
    emit(None, &text)?;
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "rebuilt mesh differs from {} by {:e}",
            input.display(),
            r.max_error
        )))
    }
}

fn cmd_render(gates: &Path, format: Format, out: Option<&Path>) -> CmdResult {
    let dec = load_gates(gates)?;
    let text = match format {
        Format::Ascii => render_ascii(&dec),
        Format::Svg => render_svg(&dec),
    }
    .map_err(|e| Failure::Input(format!("{}: {e}", gates.display())))?;
    emit(out, &text)
}

fn cmd_roundtrip(max_size: usize, seeds: u64, tol: Option<f64>, sequential: bool) -> CmdResult {
    if max_size < 2 {
        return Err(Failure::Input("--size must be at least 2".into()));
    }
    if seeds == 0 {
        return Err(Failure::Input("--seeds must be at least 1".into()));
    }
    let tol = tolerances(tol)?;
    let mode = if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::default()
    };
    let summary = run_roundtrip(2..=max_size, seeds, &tol, mode);
    emit(
        None,
        &format!(
            "cases={} worst_error={:.3e} tol={:.1e} elapsed_ms={:.1}\n",
            summary.cases.len(),
            summary.worst_error,
            tol.compare_tol,
            summary.elapsed.as_secs_f64() * 1e3
        ),
    )?;
    let failures: Vec<_> = summary.failures().collect();
    if failures.is_empty() {
        return Ok(());
    }
    for c in &failures {
        match &c.error {
            Some(e) => eprintln!("n={} seed={}: {e}", c.n, c.seed),
            None => eprintln!("n={} seed={}: max_error={:e}", c.n, c.seed, c.max_error),
        }
    }
    let first = failures[0];
    Err(Failure::Verification(format!(
        "{} of {} cases failed, first at n={} seed={}",
        failures.len(),
        summary.cases.len(),
        first.n,
        first.seed
    )))
}
