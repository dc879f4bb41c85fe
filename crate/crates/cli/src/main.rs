use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use wsuper::algebra::{build_algebra, AlgebraError, Family, LieSuperalgebra};
use wsuper::frame::Frame;
use wsuper::io::{self, AlgebraArtifact, IoError, NilpotentArtifact, WPresentationArtifact};
use wsuper::modp::{self, check_restriction, graded_p_map_check, reduce_mod_p, ModpError, ModpRow};
use wsuper::nilpotent::{analyze_element, nilpotent_preset, NilpotentData, NilpotentError};
use wsuper::scalar::Rationals;
use wsuper::w::{solve_all, WPresentation};
use wsuper::wchar0::{centralizer_degrees, Char0Error, Char0Run};

const RESTRICTEDNESS_TRIALS: usize = 100;
const RESTRICTEDNESS_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(name = "wsuper", version, about = "Finite W-superalgebras: exact char 0 and mod p computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structure constants, invariant form and matrix realization.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// sl2-triple, grading, co-basis and structural checks for a nilpotent.
    Nilpotent {
        #[command(subcommand)]
        op: NilpotentOp,
    },
    /// Generators of the W-superalgebra over the rationals.
    W {
        #[command(subcommand)]
        op: WOp,
    },
    /// Reduced modules and dimension checks over prime fields.
    Modp {
        #[command(subcommand)]
        op: ModpOp,
    },
    /// Every stage, writing all four artifacts.
    Verify {
        #[command(subcommand)]
        op: VerifyOp,
    },
}

#[derive(Subcommand)]
enum AlgebraOp {
    Build(Opts),
}

#[derive(Subcommand)]
enum NilpotentOp {
    Analyze(Opts),
}

#[derive(Subcommand)]
enum WOp {
    /// Solve for the generators only.
    Solve(Opts),
    /// Generators, commutator table and graded comparison.
    Relations(Opts),
}

#[derive(Subcommand)]
enum ModpOp {
    Suite(Opts),
}

#[derive(Subcommand)]
enum VerifyOp {
    All(Opts),
}

#[derive(Args, Clone, Debug)]
struct Opts {
    /// gl, sl or osp.
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// `regular`, `zero`, a sum of basis labels or matrix units (`E12+E34`), or `[c1,...]`.
    #[arg(long, default_value = "regular")]
    nilpotent: String,
    /// Largest Kazhdan degree for the graded comparison.
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    primes: Vec<u64>,
    /// Also run every prime with `eta != chi`.
    #[arg(long)]
    eta_sweep: bool,
    /// Central-element and representation checks on each reduced module (slow for large modules).
    #[arg(long)]
    full_checks: bool,
    #[arg(long, env = "WSUPER_OUT", default_value = "wsuper-out")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Algebra,
    Nilpotent,
    Solve,
    Relations,
    Modp,
    All,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("output error: {0}")]
    Output(#[from] IoError),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Output(_) => 3,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::InvalidParameters(_) => CliError::Config(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<NilpotentError> for CliError {
    fn from(e: NilpotentError) -> Self {
        match e {
            NilpotentError::BadInput(_) | NilpotentError::NotEven | NilpotentError::NotNilpotent => {
                CliError::Config(e.to_string())
            }
            NilpotentError::Algebra(a) => a.into(),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<Char0Error> for CliError {
    fn from(e: Char0Error) -> Self {
        match e {
            Char0Error::DegreeTooSmall { .. } => CliError::Config(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<ModpError> for CliError {
    fn from(e: ModpError) -> Self {
        match e {
            ModpError::Restriction { .. } => CliError::Config(format!("{e} (admissible primes: odd p; for sl(m|n) also p not dividing m - n)")),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Summary {
    status: &'static str,
    written: Vec<String>,
    failures: Vec<String>,
}

struct Outcome {
    written: Vec<String>,
    failures: Vec<String>,
}

fn write_json<T: Serialize>(dir: &Path, name: &str, x: &T, out: &mut Outcome) -> Result<(), CliError> {
    io::write_atomic(&dir.join(name), io::to_json(x)?.as_bytes())?;
    out.written.push(name.to_string());
    Ok(())
}

fn write_csv(dir: &Path, rows: &[ModpRow], out: &mut Outcome) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Solver(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Solver(e.to_string()))?;
    io::write_atomic(&dir.join("modp_report.csv"), &bytes)?;
    out.written.push("modp_report.csv".into());
    Ok(())
}

/// Rejects configurations before any file is written.
fn validate(opts: &Opts, stage: Stage, alg: &LieSuperalgebra<Rationals>) -> Result<(), CliError> {
    if matches!(stage, Stage::Modp | Stage::All) {
        if opts.primes.is_empty() {
            return Err(CliError::Config("empty prime list".into()));
        }
        for &p in &opts.primes {
            check_restriction(alg.kind.family, alg.kind.m, alg.kind.n, p)?;
        }
    }
    Ok(())
}

fn analyze(alg: &LieSuperalgebra<Rationals>, opts: &Opts) -> Result<NilpotentData, CliError> {
    let e = nilpotent_preset(alg, &opts.nilpotent)?;
    Ok(analyze_element(alg, &e, &opts.nilpotent)?)
}

fn run(opts: &Opts, stage: Stage) -> Result<Outcome, CliError> {
    let alg = build_algebra(opts.family, opts.m, opts.n)?;
    validate(opts, stage, &alg)?;
    let mut out = Outcome { written: Vec::new(), failures: Vec::new() };
    let dir = opts.out.as_path();

    if let Err(e) = alg.check_axioms() {
        out.failures.push(format!("algebra: {e}"));
    }
    if matches!(stage, Stage::Algebra | Stage::All) {
        write_json(dir, "algebra.json", &AlgebraArtifact::from_algebra(&alg), &mut out)?;
    }
    if stage == Stage::Algebra {
        return Ok(out);
    }

    let nd = analyze(&alg, opts)?;
    let max_degree = match (stage, opts.max_degree) {
        (Stage::Relations | Stage::All, d) => Some(d.unwrap_or(10)),
        _ => None,
    };
    if let Some(d) = max_degree {
        let (even, odd) = centralizer_degrees(&nd);
        let need = even.iter().chain(&odd).max().map_or(0, |m| m + 2);
        if (d as i32) < need {
            return Err(CliError::Config(format!(
                "max degree {d} is below the largest generator degree plus two ({need})"
            )));
        }
    }
    let run0 = Char0Run::new(&alg, &nd).map_err(CliError::from)?;
    if !nd.checks.all_ok() {
        out.failures.push(format!("nilpotent: structural checks {:?}", nd.checks));
    }
    if matches!(stage, Stage::Nilpotent | Stage::All) {
        write_json(dir, "nilpotent.json", &NilpotentArtifact::new(&nd, &run0.frame), &mut out)?;
    }

    match stage {
        Stage::Solve => {
            let eng = run0.engine();
            let gens = solve_all(&eng).map_err(|e| CliError::Solver(e.to_string()))?;
            let pres = WPresentation { generators: gens, relations: Default::default(), report: Default::default() };
            let art = WPresentationArtifact::new(&nd, &run0.frame, &pres, None);
            write_json(dir, "wpresentation.json", &art, &mut out)?;
        }
        Stage::Relations | Stage::All => {
            let (pres, graded) = run0.presentation(&nd, max_degree)?;
            if !pres.report.all_ok() {
                out.failures.push(format!("w: commutator table {:?}", pres.report));
            }
            if let Some(g) = &graded {
                if !g.all_ok() {
                    out.failures.push(format!(
                        "w: graded comparison pbw {:?} expected {:?} invariants {:?}",
                        g.pbw_counts, g.expected_counts, g.invariant_dims
                    ));
                }
            }
            let art = WPresentationArtifact::new(&nd, &run0.frame, &pres, graded);
            write_json(dir, "wpresentation.json", &art, &mut out)?;
        }
        _ => {}
    }

    if matches!(stage, Stage::Modp | Stage::All) {
        for &p in &opts.primes {
            let ma = reduce_mod_p(&alg, p)?;
            let rep = ma.restrictedness_trials(RESTRICTEDNESS_TRIALS, RESTRICTEDNESS_SEED ^ p);
            if !rep.all_ok() {
                out.failures.push(format!("modp p={p}: restrictedness {rep:?}"));
            }
            let fr: Frame<_> = run0.frame.modular(&alg, p).map_err(|e| CliError::Solver(e.to_string()))?;
            if !graded_p_map_check(&fr) {
                out.failures.push(format!("modp p={p}: p-map does not respect the grading"));
            }
        }
        let runs = modp::sweep(&alg, &run0.frame, &opts.primes, opts.eta_sweep, opts.full_checks)?;
        for r in &runs {
            if !r.all_ok() {
                out.failures.push(format!("modp p={} eta={}: {:?}", r.p, r.eta_label, r.row(&nd)));
            }
        }
        let rows: Vec<ModpRow> = runs.iter().map(|r| r.row(&nd)).collect();
        write_csv(dir, &rows, &mut out)?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (opts, stage) = match cli.cmd {
        Cmd::Algebra { op: AlgebraOp::Build(o) } => (o, Stage::Algebra),
        Cmd::Nilpotent { op: NilpotentOp::Analyze(o) } => (o, Stage::Nilpotent),
        Cmd::W { op: WOp::Solve(o) } => (o, Stage::Solve),
        Cmd::W { op: WOp::Relations(o) } => (o, Stage::Relations),
        Cmd::Modp { op: ModpOp::Suite(o) } => (o, Stage::Modp),
        Cmd::Verify { op: VerifyOp::All(o) } => (o, Stage::All),
    };
    match run(&opts, stage) {
        Ok(out) => {
            let ok = out.failures.is_empty();
            let summary =
                Summary { status: if ok { "ok" } else { "fail" }, written: out.written, failures: out.failures };
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let summary = Summary { status: "error", written: Vec::new(), failures: vec![e.to_string()] };
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            eprintln!("wsuper: {e}");
            ExitCode::from(e.code())
        }
    }
}
