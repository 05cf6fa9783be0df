//! `sepball` — separability analysis for bipartite quantum states.
//!
//! Subcommands: `analyze`, `bounds`, `witness`, `decompose`,
//! `sweep-pseudopure`, `random`. Exit codes: 0 success, 2 input error,
//! 3 not-a-state (fails the PSD gate), 4 verification failure.

mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::Serialize;

use sepball_core::bipartite::maximally_entangled;
use sepball_core::criteria::{analyze, ppt_test_with_tol, CriterionReport};
use sepball_core::error::Error as CoreError;
use sepball_core::extremal::{
    ball_radius, npt_witness, pseudopure_bounds, pseudopure_refined_threshold,
    swap_witness_ppt_threshold, BallRadius, PerturbationProfile,
};
use sepball_core::linalg::{ComplexMatrix, HermitianOperator, PNorm};
use sepball_core::stategen::{random_density, random_projector, random_pure};
use sepball_core::toeplitz::{
    assemble, separable_decomposition, verify_decomposition, BlockToeplitz,
};
use sepball_core::{BipartiteShape, PureState, Seed, Verdict};

use io::{sig9, DecompositionFile, MatrixFile, ReportFile, SCHEMA_VERSION};

#[derive(Parser)]
#[command(
    name = "sepball",
    version,
    about = "Separability criteria, witnesses and decompositions for bipartite states"
)]
struct Cli {
    /// Relative tolerance applied to every pass/fail margin
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Emit JSON instead of text tables
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the deterministic generator
    #[arg(long, global = true, env = "SEPBALL_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every separability criterion on a matrix file
    Analyze {
        /// Matrix file (JSON)
        input: PathBuf,
        /// Bipartite split as MxN; overrides the shape embedded in the file
        #[arg(long)]
        dims: Option<String>,
    },
    /// Exact ball radii and thresholds for an N⊗N system
    Bounds {
        #[arg(long)]
        n: usize,
        /// p-norm exponents (number or "inf")
        #[arg(long, value_delimiter = ',', default_values_t = ["1".to_string(), "2".to_string(), "3".to_string(), "inf".to_string()])]
        p: Vec<String>,
        /// Also solve the purity quadratic for a mixed-in state of this purity
        #[arg(long)]
        refined_purity: Option<f64>,
    },
    /// Write I + Δ with ‖Δ‖_p = a along the extremal swap direction
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Separable decomposition of a PSD block Toeplitz matrix
    Decompose {
        /// First block row R_0 … R_{M−1} as an N x (M·N) matrix file,
        /// or the full matrix with --full
        input: PathBuf,
        /// Number of block rows M
        #[arg(long)]
        blocks: usize,
        /// Block dimension N
        #[arg(long = "block-size")]
        block_size: usize,
        #[arg(long)]
        out: PathBuf,
        /// Input is the full MN x MN matrix, asserted block Toeplitz
        #[arg(long)]
        full: bool,
    },
    /// Criterion sweep over pseudopure mixtures (1−ε) I/d + ε ρ
    SweepPseudopure {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        state: SweepState,
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Write a reproducible random state or projector as a matrix file
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        /// Bipartite split as MxN (total dimension d = M·N)
        #[arg(long)]
        dims: String,
        /// Rank for kind=mixed (default d)
        #[arg(long)]
        rank: Option<usize>,
        /// Rank for kind=projector (default d)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepState {
    /// Bell pair on a 2-dimensional local subspace
    Bell,
    /// Maximally entangled state of the full N⊗N system
    Maxent,
    /// Haar-random pure state (uses --seed)
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Pure,
    Mixed,
    Projector,
}

#[derive(Debug)]
pub enum CliError {
    /// exit 2
    Input(String),
    /// exit 3, carries the offending minimum eigenvalue
    NotAState(f64),
    /// exit 4
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotAState(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::NotAState(min_eig) => {
                write!(f, "input is not a state: min eigenvalue {min_eig:e}")
            }
            CliError::Verification(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotPsd { min_eig } => CliError::NotAState(min_eig),
            CoreError::Numeric(msg) => CliError::Verification(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // die quietly on a closed pipe (`sepball ... | head`) instead of
    // panicking in println!
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Command::Analyze { input, dims } => cmd_analyze(&cli, input, dims.as_deref()),
        Command::Bounds {
            n,
            p,
            refined_purity,
        } => cmd_bounds(&cli, *n, p, *refined_purity),
        Command::Witness { n, p, a, out } => cmd_witness(&cli, *n, p, *a, out),
        Command::Decompose {
            input,
            blocks,
            block_size,
            out,
            full,
        } => cmd_decompose(&cli, input, *blocks, *block_size, out, *full),
        Command::SweepPseudopure { n, state, steps } => cmd_sweep(&cli, *n, *state, *steps),
        Command::Random {
            kind,
            dims,
            rank,
            m,
            out,
        } => cmd_random(&cli, *kind, dims, *rank, *m, out),
    }
}

fn parse_dims(s: &str) -> Result<BipartiteShape, CliError> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return Err(CliError::Input(format!(
            "cannot parse dimensions '{s}', expected MxN"
        )));
    }
    let m: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("cannot parse dimensions '{s}'")))?;
    let n: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("cannot parse dimensions '{s}'")))?;
    BipartiteShape::new(m, n).map_err(CliError::from)
}

fn parse_pnorm(s: &str) -> Result<PNorm, CliError> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" || t.eq_ignore_ascii_case("infinity") {
        return Ok(PNorm::Infinity);
    }
    let p: f64 = t
        .parse()
        .map_err(|_| CliError::Input(format!("cannot parse p-norm exponent '{s}'")))?;
    PNorm::new(p).map_err(CliError::from)
}

// ── analyze ─────────────────────────────────────────────────────────

fn cmd_analyze(cli: &Cli, input: &Path, dims: Option<&str>) -> Result<(), CliError> {
    let (file, digest) = MatrixFile::load(input)?;
    let matrix = file.to_matrix()?;
    if matrix.rows() != matrix.cols() {
        return Err(CliError::Input(format!(
            "state matrix must be square, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let shape = match dims {
        Some(s) => parse_dims(s)?,
        None => file.embedded_shape()?.ok_or_else(|| {
            CliError::Input("no --dims flag and no shape embedded in the file".into())
        })?,
    };
    if shape.total() != matrix.rows() {
        return Err(CliError::Input(format!(
            "shape {shape} does not match matrix dimension {}",
            matrix.rows()
        )));
    }
    let h = HermitianOperator::from_matrix(&matrix)?;
    let report = analyze(&h, shape, cli.tol)?;
    if cli.json {
        let envelope = ReportFile {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest: &digest,
            tol: cli.tol,
            report: &report,
        };
        println!("{}", to_json(&envelope)?);
    } else {
        print_report_text(&report);
    }
    Ok(())
}

fn print_report_text(report: &CriterionReport) {
    println!("{:<22} {}", "shape", report.shape);
    println!("{:<22} {}", "trace", sig9(report.trace));
    println!("{:<22} {}", "scaling_score", sig9(report.scaling_score));
    println!("{:<22} {}", "purity", sig9(report.purity));
    println!(
        "{:<22} {}",
        "frobenius_distance",
        sig9(report.frobenius_distance)
    );
    for margin in &report.pball_margins {
        println!(
            "{:<22} deviation {:<16} radius {:<16} {}",
            format!("pball p={}", margin.p),
            sig9(margin.deviation),
            sig9(margin.radius),
            if margin.passes { "pass" } else { "fail" }
        );
    }
    println!("{:<22} {}", "ppt_min_eig", sig9(report.ppt_min_eig));
    println!("{:<22} {}", "verdict", report.verdict);
    println!("{:<22} {}", "triggered_by", report.triggered_by.join(", "));
}

// ── bounds ──────────────────────────────────────────────────────────

#[derive(Serialize)]
struct BoundsOut {
    schema_version: u32,
    ball_radii: Vec<BallRadius>,
    thresholds: PerturbationProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined_pseudopure_lower: Option<f64>,
}

fn cmd_bounds(
    cli: &Cli,
    n: usize,
    p_list: &[String],
    refined: Option<f64>,
) -> Result<(), CliError> {
    let radii: Vec<BallRadius> = p_list
        .iter()
        .map(|s| parse_pnorm(s).and_then(|p| ball_radius(n, p).map_err(CliError::from)))
        .collect::<Result<_, _>>()?;
    let thresholds = pseudopure_bounds(n)?;
    let refined_value = match refined {
        Some(purity) => Some(pseudopure_refined_threshold(n, purity)?),
        None => None,
    };
    if cli.json {
        let out = BoundsOut {
            schema_version: SCHEMA_VERSION,
            ball_radii: radii,
            thresholds,
            refined_pseudopure_lower: refined_value,
        };
        println!("{}", to_json(&out)?);
    } else {
        println!("{:<28} {}", "N", n);
        for b in &radii {
            println!(
                "{:<28} {}",
                format!("ball radius p={}", b.p),
                sig9(b.radius)
            );
        }
        println!(
            "{:<28} {}",
            "pure_scaling_threshold",
            sig9(thresholds.pure_scaling_threshold)
        );
        println!(
            "{:<28} {}",
            "pure_ppt_threshold_bell",
            sig9(thresholds.pure_ppt_threshold_bell)
        );
        println!(
            "{:<28} {}",
            "pseudopure_lower",
            sig9(thresholds.pseudopure_lower)
        );
        println!(
            "{:<28} {}",
            "pseudopure_upper",
            sig9(thresholds.pseudopure_upper)
        );
        println!(
            "{:<28} {}",
            "projector_negativity_max",
            sig9(thresholds.projector_negativity_max)
        );
        if let Some(r) = refined_value {
            println!("{:<28} {}", "refined_pseudopure_lower", sig9(r));
        }
    }
    Ok(())
}

// ── witness ─────────────────────────────────────────────────────────

#[derive(Serialize)]
struct WitnessOut<'a> {
    schema_version: u32,
    n: usize,
    p: PNorm,
    a: f64,
    radius: f64,
    ppt_crossing: f64,
    regime: &'a str,
    ppt_min_eig: f64,
    out: String,
}

fn cmd_witness(cli: &Cli, n: usize, p: &str, a: f64, out: &Path) -> Result<(), CliError> {
    let p = parse_pnorm(p)?;
    let delta = npt_witness(n, p, a)?;
    let matrix = delta.shifted(1.0);
    let radius = ball_radius(n, p)?.radius;
    // where this direction actually loses PPT; equals the radius for p ≥ 2
    let crossing = swap_witness_ppt_threshold(n, p)?;
    let shape = BipartiteShape::square(n).map_err(CliError::from)?;

    let ppt = ppt_test_with_tol(&matrix, shape, cli.tol)?;
    let boundary = (a - radius).abs() <= cli.tol * radius.max(1.0);
    let regime = if boundary {
        "boundary"
    } else if a < radius {
        "separable-ball"
    } else if a <= crossing + cli.tol {
        // only reachable for p < 2, where the ball is saturated at the
        // positive-cone boundary rather than by this direction
        "outside-ball-ppt"
    } else {
        "npt"
    };
    // verify the claimed side before writing
    match regime {
        "separable-ball" | "outside-ball-ppt" if !ppt.passes => {
            return Err(CliError::Verification(format!(
                "expected a PPT matrix but the partial transpose failed (min eigenvalue {:e})",
                ppt.value
            )))
        }
        "npt" if ppt.passes => {
            return Err(CliError::Verification(format!(
                "expected an NPT matrix but the partial transpose stayed PSD (min eigenvalue {:e})",
                ppt.value
            )))
        }
        _ => {}
    }

    let label = format!(
        "witness I + Delta, N={n} p={p} a={}, regime {regime}",
        fmt_plain(a)
    );
    let file = MatrixFile::from_matrix(&matrix.to_matrix(), Some(shape), Some(label));
    file.save(out)?;

    if cli.json {
        let payload = WitnessOut {
            schema_version: SCHEMA_VERSION,
            n,
            p,
            a,
            radius,
            ppt_crossing: crossing,
            regime,
            ppt_min_eig: ppt.value,
            out: out.display().to_string(),
        };
        println!("{}", to_json(&payload)?);
    } else {
        let comparison = if boundary {
            "a = B".to_string()
        } else if a < radius {
            format!("a < B = {} (inside the separable ball)", sig9(radius))
        } else if regime == "outside-ball-ppt" {
            format!(
                "a > B = {} but this direction stays PPT until a = {}",
                sig9(radius),
                sig9(crossing)
            )
        } else {
            format!("a > B = {} (NPT)", sig9(radius))
        };
        println!(
            "witness N={n} p={p} a={}: {comparison}, min PT eigenvalue {}",
            sig9(a),
            sig9(ppt.value)
        );
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn fmt_plain(x: f64) -> String {
    format!("{x}")
}

// ── decompose ───────────────────────────────────────────────────────

fn cmd_decompose(
    cli: &Cli,
    input: &Path,
    blocks: usize,
    block_size: usize,
    out: &Path,
    full: bool,
) -> Result<(), CliError> {
    if blocks == 0 || block_size == 0 {
        return Err(CliError::Input(
            "--blocks and --block-size must be positive".into(),
        ));
    }
    let (file, _) = MatrixFile::load(input)?;
    let matrix = file.to_matrix()?;
    let (m, n) = (blocks, block_size);

    let first_row: Vec<ComplexMatrix> = if full {
        let d = m * n;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(CliError::Input(format!(
                "--full expects a {d}x{d} matrix for M={m}, N={n}; got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        (0..m)
            .map(|bj| ComplexMatrix::from_fn(n, n, |k, l| matrix.get(k, bj * n + l)))
            .collect()
    } else {
        if matrix.rows() != n || matrix.cols() != m * n {
            return Err(CliError::Input(format!(
                "expected the first block row as a {n}x{} matrix for M={m}, N={n}; got {}x{}",
                m * n,
                matrix.rows(),
                matrix.cols()
            )));
        }
        (0..m)
            .map(|bj| ComplexMatrix::from_fn(n, n, |k, l| matrix.get(k, bj * n + l)))
            .collect()
    };

    let toeplitz = BlockToeplitz::new(first_row)?;
    let assembled = assemble(&toeplitz);

    if full {
        // the flag asserts the matrix is block Toeplitz; verify that
        let diff = assembled
            .to_matrix()
            .sub(&matrix)
            .map_err(CliError::from)?
            .frobenius_norm();
        if diff > 1e-8 * f64::max(1.0, matrix.frobenius_norm()) {
            return Err(CliError::Input(format!(
                "matrix is not block Toeplitz for M={m}, N={n} (mismatch {diff:e})"
            )));
        }
    }

    let dec = separable_decomposition(&toeplitz, cli.tol)?;
    let shape = BipartiteShape::new(m, n).map_err(CliError::from)?;
    let residual = verify_decomposition(&assembled, &dec, shape)?;

    let out_file = DecompositionFile::new(&dec, residual, file.label.as_deref());
    let text = to_json(&out_file)?;
    std::fs::write(out, text + "\n")
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", out.display())))?;

    println!("terms {}", dec.terms.len());
    println!("residual {}", sig9(residual));
    println!("wrote {}", out.display());

    let scale = f64::max(1.0, assembled.frobenius_norm());
    if residual > cli.tol * scale {
        return Err(CliError::Verification(format!(
            "reconstruction residual {residual:e} exceeds tolerance {:e}",
            cli.tol * scale
        )));
    }
    Ok(())
}

// ── sweep-pseudopure ────────────────────────────────────────────────

#[derive(Serialize)]
struct SweepRow {
    eps: f64,
    scaling: bool,
    purity: bool,
    frobenius_ball: bool,
    ppt: bool,
    verdict: Verdict,
}

#[derive(Serialize)]
struct SweepOut {
    schema_version: u32,
    n: usize,
    state: String,
    steps: usize,
    transitions: Transitions,
    grid: Vec<SweepRow>,
}

#[derive(Serialize)]
struct Transitions {
    scaling: Option<f64>,
    purity: Option<f64>,
    frobenius_ball: Option<f64>,
    ppt: Option<f64>,
}

fn cmd_sweep(cli: &Cli, n: usize, state: SweepState, steps: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Input("sweep needs N >= 2".into()));
    }
    if steps == 0 {
        return Err(CliError::Input("--steps must be at least 1".into()));
    }
    let shape = BipartiteShape::square(n).map_err(CliError::from)?;
    let d = shape.total();
    let (state_name, rho) = match state {
        SweepState::Bell => ("bell".to_string(), embedded_bell(n)?.density()),
        SweepState::Maxent => ("maxent".to_string(), maximally_entangled(n).density()),
        SweepState::Random => (
            format!("random(seed {})", cli.seed),
            random_pure(shape, Seed(cli.seed)).density(),
        ),
    };
    let center = HermitianOperator::identity(d).scaled(1.0 / d as f64);

    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let eps = if steps == 1 {
            0.0
        } else {
            i as f64 / (steps - 1) as f64
        };
        let sigma = center.scaled(1.0 - eps).plus(&rho.scaled(eps))?;
        let report = analyze(&sigma, shape, cli.tol)?;
        rows.push(SweepRow {
            eps,
            scaling: report.scaling_score <= 1.0 + cli.tol,
            purity: report.purity <= 1.0 / (d as f64 - 1.0) + cli.tol,
            frobenius_ball: report.frobenius_distance
                <= 1.0 / ((d * (d - 1)) as f64).sqrt() + cli.tol,
            ppt: report.ppt_min_eig >= -cli.tol,
            verdict: report.verdict,
        });
    }

    let transitions = Transitions {
        scaling: transition_point(&rows, |r| r.scaling),
        purity: transition_point(&rows, |r| r.purity),
        frobenius_ball: transition_point(&rows, |r| r.frobenius_ball),
        ppt: transition_point(&rows, |r| r.ppt),
    };

    if cli.json {
        let out = SweepOut {
            schema_version: SCHEMA_VERSION,
            n,
            state: state_name,
            steps,
            transitions,
            grid: rows,
        };
        println!("{}", to_json(&out)?);
    } else {
        println!("pseudopure sweep: N={n} state={state_name} steps={steps}");
        println!(
            "{:<14} {:<8} {:<8} {:<10} {:<6} verdict",
            "eps", "scaling", "purity", "frobenius", "ppt"
        );
        for r in &rows {
            println!(
                "{:<14} {:<8} {:<8} {:<10} {:<6} {}",
                sig9(r.eps),
                pf(r.scaling),
                pf(r.purity),
                pf(r.frobenius_ball),
                pf(r.ppt),
                r.verdict
            );
        }
        print_transition("scaling", transitions.scaling);
        print_transition("purity", transitions.purity);
        print_transition("frobenius_ball", transitions.frobenius_ball);
        print_transition("ppt", transitions.ppt);
    }
    Ok(())
}

fn pf(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn print_transition(name: &str, t: Option<f64>) {
    match t {
        Some(eps) => println!("transition {:<16} {}", name, sig9(eps)),
        None => println!("transition {:<16} none", name),
    }
}

// Midpoint between the last passing and first failing grid points of a
// monotone pass/fail column; None when the column never flips.
fn transition_point(rows: &[SweepRow], f: impl Fn(&SweepRow) -> bool) -> Option<f64> {
    if rows.is_empty() || !f(&rows[0]) {
        return None;
    }
    for i in 1..rows.len() {
        if !f(&rows[i]) {
            return Some(0.5 * (rows[i - 1].eps + rows[i].eps));
        }
    }
    None
}

fn embedded_bell(n: usize) -> Result<PureState, CliError> {
    let s = 0.5_f64.sqrt();
    let coeff = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j && i < 2 {
            C64::new(s, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    PureState::new(coeff).map_err(CliError::from)
}

// ── random ──────────────────────────────────────────────────────────

fn cmd_random(
    cli: &Cli,
    kind: RandomKind,
    dims: &str,
    rank: Option<usize>,
    m_rank: Option<usize>,
    out: &Path,
) -> Result<(), CliError> {
    let shape = parse_dims(dims)?;
    let d = shape.total();
    let seed = Seed(cli.seed);
    let (matrix, label) = match kind {
        RandomKind::Pure => {
            let psi = random_pure(shape, seed);
            (
                psi.density(),
                format!("random pure state {shape} seed {}", cli.seed),
            )
        }
        RandomKind::Mixed => {
            let r = rank.unwrap_or(d);
            let rho = random_density(d, r, seed)?;
            (
                rho,
                format!("random density d={d} rank {r} seed {}", cli.seed),
            )
        }
        RandomKind::Projector => {
            let r = m_rank.unwrap_or(d);
            let p = random_projector(d, r, seed)?;
            (
                p,
                format!("random projector d={d} rank {r} seed {}", cli.seed),
            )
        }
    };
    let file = MatrixFile::from_matrix(&matrix.to_matrix(), Some(shape), Some(label));
    file.save(out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failure: {e}")))
}
