//! `matball`: sample, evaluate, combine, and verify matrix-valued rational
//! inner functions from the command line.
//!
//! Values travel as one-line JSON documents (see the library crate for the
//! exact shapes).  Reports are written as JSON lines; the process exits with
//! status 0 only when every requested verification passed, which makes the
//! tool usable as a CI gate.  The default seed comes from the `COLLIG_SEED`
//! environment variable when set, so whole scripts can be re-seeded at once.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use matball::calculus::{
    compose, compose_with_probe, direct_sum, odot_product, restrict_to_component, split_off,
    tensor_product, SplitSpec,
};
use matball::colligation::{theta_eval, Colligation};
use matball::repn::{build_irrep_default, rep_apply, rep_compose_colligation, Signature};
use matball::sample::{haar_unitary_rng, rng_from_seed, sample_ball_point_rng};
use matball::ToleranceConfig;

use matball_cli::verify::{run_verify, TheoremId, ALL_THEOREMS};
use matball_cli::{
    parse_colligation, parse_matrix, parse_report, render_colligation, render_matrix,
    render_report,
};

#[derive(Parser)]
#[command(
    name = "matball",
    about = "Rational inner functions of a matrix argument: sampling, calculus, verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample colligations, unitary matrices, or ball points as JSON lines.
    Gen(GenArgs),
    /// Evaluate the characteristic function of a colligation at a ball point.
    Eval(EvalArgs),
    /// Combine colligations: sum, prod, tensor, compose, split, restrict.
    #[command(subcommand)]
    Op(OpCmd),
    /// Build and apply polynomial representations of the general linear group.
    #[command(subcommand)]
    Repn(RepnCmd),
    /// Run verification suites and emit JSON-line reports.
    Verify(VerifyArgs),
    /// Aggregate report files and fail if any report failed.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    /// What to sample: colligation | unitary | ball-point.
    #[arg(long)]
    kind: String,
    /// Target size of a colligation.
    #[arg(long)]
    alpha: Option<usize>,
    /// Source ball size (colligations and ball points).
    #[arg(long)]
    m: Option<usize>,
    /// Internal multiplicity of a colligation.
    #[arg(long)]
    j: Option<usize>,
    /// Size of a unitary sample.
    #[arg(long)]
    n: Option<usize>,
    /// Radius for ball points.
    #[arg(long, default_value_t = 0.8)]
    radius: f64,
    /// Number of documents to emit.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// File holding one colligation document.
    #[arg(long)]
    colligation: PathBuf,
    /// File holding one matrix document (the ball point).
    #[arg(long)]
    point: PathBuf,
    /// Numerical tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BinaryOpArgs {
    /// File holding the left operand (outer factor for compose).
    #[arg(long)]
    lhs: PathBuf,
    /// File holding the right operand (inner factor for compose).
    #[arg(long)]
    rhs: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OpCmd {
    /// Direct sum: block-diagonal characteristic function.
    Sum(BinaryOpArgs),
    /// Pointwise product of characteristic functions.
    Prod(BinaryOpArgs),
    /// Tensor product of characteristic functions.
    Tensor(BinaryOpArgs),
    /// Composition: lhs evaluated after rhs.
    Compose {
        #[command(flatten)]
        args: BinaryOpArgs,
        /// Optional matrix document: recentre the composition at this interior
        /// point when the plain resolvent pivot is rejected.
        #[arg(long)]
        probe: Option<PathBuf>,
    },
    /// Split a block-diagonal characteristic function into its two summands.
    Split {
        /// File holding the colligation to split.
        #[arg(long)]
        input: PathBuf,
        /// Size of the first diagonal block.
        #[arg(long)]
        alpha1: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restrict to a boundary component of the source ball.
    Restrict {
        /// File holding the colligation to restrict.
        #[arg(long)]
        input: PathBuf,
        /// Number of frozen directions of the component.
        #[arg(long)]
        defect: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RepnCmd {
    /// Build an irreducible representation and print its dimensions.
    Build {
        /// Size of the underlying general linear group.
        #[arg(long)]
        n: usize,
        /// Weakly decreasing signature, e.g. "2,1,0".
        #[arg(long)]
        signature: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a representation to a matrix document.
    Apply {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        signature: String,
        /// File holding the matrix to push through the representation.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Push a colligation through a representation.
    Compose {
        #[arg(long)]
        signature: String,
        /// File holding the colligation; its target size fixes n.
        #[arg(long)]
        colligation: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id (repeatable): T1a T1b T2 T3 T4 T5 T6a T6b L23 P21 INNER.
    #[arg(long = "theorem")]
    theorems: Vec<String>,
    /// Run the full battery (default when no --theorem is given).
    #[arg(long)]
    all: bool,
    /// Trials per suite; defaults to each suite's standard scale.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pass threshold on max_error.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Also append the report lines to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock runtime in each report (breaks byte determinism).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Report files (JSON lines) to aggregate.
    inputs: Vec<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Seed precedence: explicit flag, then the COLLIG_SEED environment variable,
/// then zero.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("COLLIG_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| anyhow!("COLLIG_SEED must be an unsigned integer, got {text:?}")),
        Err(_) => Ok(0),
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<ToleranceConfig> {
    match flag {
        Some(atol) => ToleranceConfig::new(atol, 1e12).map_err(|e| anyhow!(e.to_string())),
        None => Ok(ToleranceConfig::default()),
    }
}

/// Writes the given lines to stdout and, when requested, to a file.
fn emit(lines: &[String], out: &Option<PathBuf>) -> Result<()> {
    // Write the file first so a consumer closing stdout early (e.g. `| head`)
    // never loses the --out artifact.
    if let Some(path) = out {
        let mut f = fs::File::create(path)
            .with_context(|| format!("cannot create {}", path.display()))?;
        for line in lines {
            writeln!(f, "{line}")?;
        }
    }
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    for line in lines {
        if let Err(e) = writeln!(handle, "{line}") {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                // The reader went away; everything written so far was accepted.
                std::process::exit(0);
            }
            return Err(e).context("cannot write to stdout");
        }
    }
    Ok(())
}

fn read_doc(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let trimmed = text.trim();
    if trimmed.lines().count() > 1 {
        bail!("{} holds more than one document; pass a single-line file", path.display());
    }
    Ok(trimmed.to_string())
}

fn load_colligation(path: &Path, tol: &ToleranceConfig) -> Result<Colligation> {
    let text = read_doc(path)?;
    parse_colligation(&text, tol).with_context(|| format!("loading {}", path.display()))
}

fn load_matrix(path: &Path) -> Result<matball::ComplexMatrix> {
    let text = read_doc(path)?;
    parse_matrix(&text).with_context(|| format!("loading {}", path.display()))
}

fn parse_signature_arg(text: &str) -> Result<Signature> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad signature part {p:?}")))
        .collect::<Result<Vec<_>>>()?;
    Signature::new(parts).map_err(|e| anyhow!(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Op(op) => cmd_op(op),
        Cmd::Repn(rc) => cmd_repn(rc),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Report(args) => cmd_report(args),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let mut rng = rng_from_seed(seed);
    let mut lines = Vec::with_capacity(args.count);
    for _ in 0..args.count {
        let line = match args.kind.as_str() {
            "colligation" => {
                let (alpha, m) = match (args.alpha, args.m) {
                    (Some(a), Some(m)) => (a, m),
                    _ => bail!("gen --kind colligation needs --alpha and --m"),
                };
                let j = args.j.unwrap_or(1);
                render_colligation(&Colligation::random(alpha, m, j, &mut rng))
            }
            "unitary" => {
                let n = args.n.ok_or_else(|| anyhow!("gen --kind unitary needs --n"))?;
                render_matrix(&haar_unitary_rng(n, &mut rng))
            }
            "ball-point" => {
                let m = args.m.ok_or_else(|| anyhow!("gen --kind ball-point needs --m"))?;
                if !(args.radius > 0.0 && args.radius < 1.0) {
                    bail!("--radius must lie strictly between 0 and 1");
                }
                render_matrix(&sample_ball_point_rng(m, args.radius, &mut rng))
            }
            other => bail!("unknown gen kind {other:?} (colligation | unitary | ball-point)"),
        };
        lines.push(line);
    }
    emit(&lines, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let tol = resolve_tol(args.tol)?;
    let g = load_colligation(&args.colligation, &tol)?;
    let s = load_matrix(&args.point)?;
    let value = theta_eval(&g, &s, &tol).map_err(|e| anyhow!(e.to_string()))?;
    emit(&[render_matrix(&value)], &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_op(op: OpCmd) -> Result<ExitCode> {
    match op {
        OpCmd::Sum(a) => binary_op(a, |g, h, tol| direct_sum(g, h, tol)),
        OpCmd::Prod(a) => binary_op(a, |g, h, tol| odot_product(g, h, tol)),
        OpCmd::Tensor(a) => binary_op(a, |g, h, tol| tensor_product(g, h, tol)),
        OpCmd::Compose { args, probe } => {
            let tol = resolve_tol(args.tol)?;
            let g = load_colligation(&args.lhs, &tol)?;
            let f = load_colligation(&args.rhs, &tol)?;
            let result = match probe {
                Some(path) => {
                    let s0 = load_matrix(&path)?;
                    compose_with_probe(&g, &f, &s0, &tol)
                }
                None => compose(&g, &f, &tol),
            }
            .map_err(|e| anyhow!(e.to_string()))?;
            emit(&[render_colligation(&result)], &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
        OpCmd::Split { input, alpha1, tol, out } => {
            let tol = resolve_tol(tol)?;
            let f = load_colligation(&input, &tol)?;
            if alpha1 > f.alpha {
                bail!("--alpha1 {} exceeds the target size {}", alpha1, f.alpha);
            }
            let spec = SplitSpec::new(alpha1, f.alpha - alpha1);
            let (p1, p2) = split_off(&f, &spec, &tol).map_err(|e| anyhow!(e.to_string()))?;
            emit(&[render_colligation(&p1), render_colligation(&p2)], &out)?;
            Ok(ExitCode::SUCCESS)
        }
        OpCmd::Restrict { input, defect, tol, out } => {
            let tol = resolve_tol(tol)?;
            let f = load_colligation(&input, &tol)?;
            let restricted = restrict_to_component(&f, defect, None, &tol)
                .map_err(|e| anyhow!(e.to_string()))?;
            emit(&[render_colligation(&restricted)], &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn binary_op(
    args: BinaryOpArgs,
    op: fn(&Colligation, &Colligation, &ToleranceConfig) -> matball::Result<Colligation>,
) -> Result<ExitCode> {
    let tol = resolve_tol(args.tol)?;
    let g = load_colligation(&args.lhs, &tol)?;
    let h = load_colligation(&args.rhs, &tol)?;
    let result = op(&g, &h, &tol).map_err(|e| anyhow!(e.to_string()))?;
    emit(&[render_colligation(&result)], &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_repn(rc: RepnCmd) -> Result<ExitCode> {
    let tol = ToleranceConfig::default();
    match rc {
        RepnCmd::Build { n, signature, seed, out } => {
            let sig = parse_signature_arg(&signature)?;
            let seed = resolve_seed(seed)?;
            let rep = build_irrep_default(n, &sig, seed, &tol).map_err(|e| anyhow!(e.to_string()))?;
            let line = format!(
                "{{\"n\":{},\"signature\":{},\"dim\":{},\"ambient_dim\":{},\"factors\":{}}}",
                rep.n,
                serde_json::to_string(sig.parts())?,
                rep.dim,
                rep.ambient_dim,
                serde_json::to_string(&rep.factors)?,
            );
            emit(&[line], &out)?;
            Ok(ExitCode::SUCCESS)
        }
        RepnCmd::Apply { n, signature, matrix, seed, out } => {
            let sig = parse_signature_arg(&signature)?;
            let seed = resolve_seed(seed)?;
            let g = load_matrix(&matrix)?;
            let rep = build_irrep_default(n, &sig, seed, &tol).map_err(|e| anyhow!(e.to_string()))?;
            let value = rep_apply(&rep, &g).map_err(|e| anyhow!(e.to_string()))?;
            emit(&[render_matrix(&value)], &out)?;
            Ok(ExitCode::SUCCESS)
        }
        RepnCmd::Compose { signature, colligation, seed, tol: tol_flag, out } => {
            let tol = resolve_tol(tol_flag)?;
            let sig = parse_signature_arg(&signature)?;
            let seed = resolve_seed(seed)?;
            let f = load_colligation(&colligation, &tol)?;
            let rep =
                build_irrep_default(f.alpha, &sig, seed, &tol).map_err(|e| anyhow!(e.to_string()))?;
            let lifted = rep_compose_colligation(&rep, &f, &tol).map_err(|e| anyhow!(e.to_string()))?;
            emit(&[render_colligation(&lifted)], &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let seed = resolve_seed(args.seed)?;
    let ids: Vec<TheoremId> = if args.theorems.is_empty() || args.all {
        ALL_THEOREMS.to_vec()
    } else {
        args.theorems
            .iter()
            .map(|t| TheoremId::from_str(t).map_err(|e| anyhow!(e.to_string())))
            .collect::<Result<Vec<_>>>()?
    };
    let mut lines = Vec::with_capacity(ids.len());
    let mut all_pass = true;
    for id in ids {
        let trials = args.trials.unwrap_or_else(|| id.default_trials());
        let report = run_verify(id, trials, seed, args.tol, args.timing);
        all_pass &= report.pass;
        lines.push(render_report(&report));
    }
    emit(&lines, &args.out)?;
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_report(args: ReportArgs) -> Result<ExitCode> {
    if args.inputs.is_empty() {
        bail!("report needs at least one input file");
    }
    let mut total = 0usize;
    let mut passed = 0usize;
    let mut failed: Vec<String> = Vec::new();
    for path in &args.inputs {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let report = parse_report(line).with_context(|| format!("in {}", path.display()))?;
            total += 1;
            if report.pass {
                passed += 1;
            } else {
                failed.push(report.theorem_id);
            }
        }
    }
    let summary = format!(
        "{{\"reports\":{},\"passed\":{},\"failed\":{}}}",
        total,
        passed,
        serde_json::to_string(&failed)?,
    );
    emit(&[summary], &None)?;
    Ok(if failed.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
