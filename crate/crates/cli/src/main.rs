//! `baric`: weight homomorphisms and semi-natural bases of algebras given by
//! structure constants.
//!
//! Exit codes for `solve` and `certify`: 0 unique, 2 multiple, 3 none, 1 error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use baric_core::io::{self, AlgebraDoc};
use baric_core::seminat::{self, Limits, SemiNaturalBasis};
use baric_core::solver::{self, DEFAULT_MAX_SCAN};
use baric_core::{selftest, Algebra, BasisChange, FieldSpec, Matrix, UniquenessCertificate, Verdict};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Upper bound accepted by `--max-scan` and `--max-cells`.
const HARD_CEILING: u64 = 1_000_000_000;
const DEFAULT_MAX_CELLS: u64 = baric_core::linalg::DEFAULT_MAX_CELLS;

const EXIT_ERROR: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "baric", version, about = "Exact analysis of baric algebras given by structure constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every nonzero weight homomorphism (exit 0 unique, 2 multiple, 3 none)
    Solve(SolveArgs),
    /// Uniqueness verdict with method and structural reason (same exit codes as solve)
    Certify(SolveArgs),
    /// Test whether the basis given by a transition matrix is semi-natural (exit 0 yes, 2 no)
    SeminatCheck(MatrixArgs),
    /// Build a semi-natural basis from a weight homomorphism given with --alpha
    SeminatMake(MakeArgs),
    /// Rewrite the structure constants in a new basis; prints an algebra file
    ChangeBasis(MatrixArgs),
    /// Count semi-natural bases and their row-stochastic coset classes over GF(p)
    Census(SolveArgs),
    /// Run the built-in self-test suite (exit 0 iff every check passes)
    VerifyPaper(VerifyArgs),
    /// Print a seeded random algebra file
    Random(RandomArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Field override: `Q` or a prime p. Rational constants are reduced mod p.
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Machine-readable JSON output; scalars are strings
    #[arg(long)]
    json: bool,
    /// Cap on vectors visited by exhaustive search (hard ceiling 10^9)
    #[arg(long, default_value_t = DEFAULT_MAX_SCAN, value_parser = parse_cap)]
    max_scan: u64,
    /// Cap on matrices visited when scanning GL_n(p) (hard ceiling 10^9)
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS, value_parser = parse_cap)]
    max_cells: u64,
}

impl Common {
    fn limits(&self) -> Limits {
        Limits {
            max_scan: self.max_scan,
            max_cells: self.max_cells,
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Algebra file (JSON), or `-` for stdin
    file: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    /// Algebra file (JSON), or `-` for stdin
    file: PathBuf,
    /// Matrix file: one row per line, or a JSON array of string rows
    matrix: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct MakeArgs {
    /// Algebra file (JSON), or `-` for stdin
    file: PathBuf,
    /// Weight homomorphism values, e.g. `-1,1,-1`
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long)]
    dim: usize,
    /// `Q` or a prime p
    #[arg(long, value_parser = parse_field)]
    field: FieldSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Make the standard basis semi-natural, so the algebra is baric
    #[arg(long)]
    baric: bool,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "Q" || s == "q" {
        return Ok(FieldSpec::Rationals);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| format!("expected Q or a prime, got {s:?}"))?;
    FieldSpec::prime(p).map_err(|e| e.to_string())
}

fn parse_cap(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > HARD_CEILING {
        return Err(format!("{v} exceeds the hard ceiling {HARD_CEILING}"));
    }
    Ok(v)
}

/// A finished command: what to print and how to exit.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

type CliResult<T> = Result<T, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_input(path: &Path) -> CliResult<String> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("stdin: {e}"))
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_algebra(path: &Path, field: Option<FieldSpec>) -> CliResult<Algebra> {
    let text = read_input(path)?;
    io::parse_algebra(&text, field).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_matrix(path: &Path, field: FieldSpec) -> CliResult<Matrix> {
    let text = read_input(path)?;
    io::parse_matrix(&text, field).map_err(|e| format!("{}: {e}", path.display()))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Unique => 0,
        Verdict::Multiple => 2,
        Verdict::NotBaric => 3,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Unique => "unique",
        Verdict::Multiple => "multiple",
        Verdict::NotBaric => "not-baric",
    }
}

fn certificate_json(a: &Algebra, cert: &UniquenessCertificate) -> Value {
    json!({
        "field": io::FieldDoc::from_spec(a.field()),
        "dim": a.dim(),
        "verdict": cert.verdict,
        "solutions": cert.solutions.solutions().iter().map(io::vector_to_strings).collect::<Vec<_>>(),
        "method": cert.method,
        "fast_path": cert.fast_path,
    })
}

fn solutions_text(a: &Algebra, cert: &UniquenessCertificate) -> String {
    let mut out = String::new();
    let sols = cert.solutions.solutions();
    let _ = writeln!(out, "field: {}", a.field());
    let _ = writeln!(out, "dimension: {}", a.dim());
    let _ = writeln!(out, "weight homomorphisms: {}", sols.len());
    for s in sols {
        let _ = writeln!(out, "  {s}");
    }
    out
}

fn cmd_solve(args: &SolveArgs, detailed: bool) -> CliResult<Outcome> {
    let a = load_algebra(&args.file, args.common.field)?;
    let cert = solver::certify_unique_with(&a, args.common.max_scan).map_err(fail)?;
    let mut text = solutions_text(&a, &cert);
    if detailed {
        let method = match cert.method {
            solver::SolverMethod::Exhaustive => "exhaustive",
            solver::SolverMethod::Eigen => "eigen",
        };
        let _ = writeln!(text, "method: {method}");
        let reason = match cert.fast_path {
            Some(solver::FastPath::ConstantJColumns) => "products e_i·e_j do not depend on j",
            Some(solver::FastPath::ZeroSquareKernel) => "a weight homomorphism has a kernel with zero square",
            None => "none",
        };
        let _ = writeln!(text, "structural reason: {reason}");
    }
    let _ = writeln!(text, "verdict: {}", verdict_name(cert.verdict));
    Ok(Outcome {
        json: certificate_json(&a, &cert),
        text,
        code: verdict_code(cert.verdict),
    })
}

fn cmd_seminat_check(args: &MatrixArgs) -> CliResult<Outcome> {
    let a = load_algebra(&args.file, args.common.field)?;
    let m = load_matrix(&args.matrix, a.field())?;
    if m.rows() != a.dim() || m.cols() != a.dim() {
        return Err(format!(
            "matrix is {}x{}, algebra has dimension {}",
            m.rows(),
            m.cols(),
            a.dim()
        ));
    }
    if !m.is_nonsingular() {
        return Err("transition matrix is singular".into());
    }
    let row_sums = m.row_sums();
    let sums_solve = a.etherington_violation(&row_sums).is_none() && !row_sums.is_zero();
    let (semi_natural, violation) = match SemiNaturalBasis::new(&a, m.clone()) {
        Ok(_) => (true, None),
        Err(seminat::SeminatError::NotSemiNatural { i, j }) => (false, Some((i, j))),
        Err(e) => return Err(e.to_string()),
    };
    if semi_natural != sums_solve {
        return Err("internal inconsistency: row-sum test disagrees with the definition".into());
    }
    let mut text = String::new();
    let _ = writeln!(text, "row sums: {row_sums}");
    let _ = writeln!(
        text,
        "row sums solve the Etherington system: {}",
        if sums_solve { "yes" } else { "no" }
    );
    match violation {
        None => {
            let _ = writeln!(text, "semi-natural: yes");
        }
        Some((i, j)) => {
            let _ = writeln!(text, "semi-natural: no (coefficients of e{i}·e{j} do not sum to 1)");
        }
    }
    Ok(Outcome {
        json: json!({
            "semi_natural": semi_natural,
            "row_sums": io::vector_to_strings(&row_sums),
            "row_sums_solve": sums_solve,
            "violation": violation.map(|(i, j)| [i, j]),
        }),
        text,
        code: if semi_natural { 0 } else { 2 },
    })
}

fn matrix_text(m: &Matrix) -> String {
    let rows = io::matrix_to_strings(m);
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:>width$}")).collect();
            format!("  {}\n", cells.join(" "))
        })
        .collect()
}

fn products_text(a: &Algebra) -> String {
    let n = a.dim();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            let terms: Vec<String> = (0..n)
                .filter(|&k| !a.gamma(i, j, k).is_zero())
                .map(|k| {
                    let g = a.gamma(i, j, k);
                    if g.is_one() {
                        format!("e{}", k + 1)
                    } else {
                        format!("({g})·e{}", k + 1)
                    }
                })
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let _ = writeln!(out, "  e{}·e{} = {rhs}", i + 1, j + 1);
        }
    }
    out
}

fn cmd_seminat_make(args: &MakeArgs) -> CliResult<Outcome> {
    let a = load_algebra(&args.file, args.common.field)?;
    let alpha = io::parse_vector(&args.alpha, a.field()).map_err(|e| format!("--alpha: {e}"))?;
    if alpha.len() != a.dim() {
        return Err(format!(
            "--alpha has {} entries, algebra has dimension {}",
            alpha.len(),
            a.dim()
        ));
    }
    let basis = seminat::seminat_from_solution(&a, &alpha).map_err(fail)?;
    let frame = basis.structure_constants().map_err(fail)?;
    if !frame.is_semi_natural() {
        return Err("internal error: constructed basis is not semi-natural".into());
    }
    let m = basis.transition();
    let inv = basis.vectors();
    let mut text = String::new();
    let _ = writeln!(text, "transition matrix M (f_i = Σ M_ik e_k):");
    text.push_str(&matrix_text(m));
    let _ = writeln!(text, "inverse M⁻¹ (rows are the e_i in f-coordinates):");
    text.push_str(&matrix_text(inv));
    let _ = writeln!(text, "structure constants in the semi-natural basis:");
    text.push_str(&products_text(&frame));
    Ok(Outcome {
        json: json!({
            "alpha": io::vector_to_strings(&alpha),
            "transition": io::matrix_to_strings(m),
            "inverse": io::matrix_to_strings(inv),
            "structure_constants": AlgebraDoc::from_algebra(&frame),
        }),
        text,
        code: 0,
    })
}

fn cmd_change_basis(args: &MatrixArgs) -> CliResult<Outcome> {
    let a = load_algebra(&args.file, args.common.field)?;
    let p = load_matrix(&args.matrix, a.field())?;
    if p.rows() != a.dim() || p.cols() != a.dim() {
        return Err(format!(
            "matrix is {}x{}, algebra has dimension {}",
            p.rows(),
            p.cols(),
            a.dim()
        ));
    }
    let change = BasisChange::new(p).map_err(fail)?;
    let b = a.change_basis(&change).map_err(fail)?;
    let doc = AlgebraDoc::from_algebra(&b);
    let mut text = io::algebra_to_json(&b);
    text.push('\n');
    Ok(Outcome {
        json: serde_json::to_value(doc).map_err(fail)?,
        text,
        code: 0,
    })
}

fn cmd_census(args: &SolveArgs) -> CliResult<Outcome> {
    let a = load_algebra(&args.file, args.common.field)?;
    if !a.field().is_finite() {
        return Err("census requires a finite field (use --field p)".into());
    }
    let report = seminat::census(&a, args.common.limits()).map_err(fail)?;
    let sizes: Vec<String> = report.class_sizes.iter().map(ToString::to_string).collect();
    let mut text = String::new();
    let rows = [
        ("dimension", report.dim.to_string()),
        ("field", a.field().to_string()),
        ("weight homomorphisms", report.num_weight_homs.to_string()),
        ("semi-natural bases", report.num_seminat_bases.to_string()),
        ("row-stochastic group order", report.rs_group_order.to_string()),
        ("coset classes", report.num_classes.to_string()),
        ("class sizes", if sizes.is_empty() { "-".into() } else { sizes.join(", ") }),
    ];
    for (k, v) in rows {
        let _ = writeln!(text, "{k:<28}{v}");
    }
    Ok(Outcome {
        json: serde_json::to_value(&report).map_err(fail)?,
        text,
        code: 0,
    })
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let results = selftest::run_all(args.seed);
    let all = results.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(text, "{passed}/{} checks passed (seed {})", results.len(), args.seed);
    let checks: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "elapsed_secs": r.elapsed.as_secs_f64(),
                "budget_secs": r.budget.as_secs_f64(),
            })
        })
        .collect();
    Outcome {
        json: json!({ "seed": args.seed, "passed": all, "checks": checks }),
        text,
        code: if all { 0 } else { EXIT_ERROR },
    }
}

fn cmd_random(args: &RandomArgs) -> CliResult<Outcome> {
    if args.dim == 0 {
        return Err("--dim must be at least 1".into());
    }
    let a = Algebra::random(args.dim, args.field, args.seed, args.baric);
    let doc = AlgebraDoc::from_algebra(&a);
    let mut text = io::algebra_to_json(&a);
    text.push('\n');
    Ok(Outcome {
        json: serde_json::to_value(doc).map_err(fail)?,
        text,
        code: 0,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap would exit with 2, which means "multiple" here.
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let (result, json_mode) = match &cli.command {
        Command::Solve(a) => (cmd_solve(a, false), a.common.json),
        Command::Certify(a) => (cmd_solve(a, true), a.common.json),
        Command::SeminatCheck(a) => (cmd_seminat_check(a), a.common.json),
        Command::SeminatMake(a) => (cmd_seminat_make(a), a.common.json),
        Command::ChangeBasis(a) => (cmd_change_basis(a), a.common.json),
        Command::Census(a) => (cmd_census(a), a.common.json),
        Command::VerifyPaper(a) => (Ok(cmd_verify(a)), a.json),
        // The algebra file is already JSON.
        Command::Random(a) => (cmd_random(a), false),
    };
    match result {
        Ok(out) => {
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
