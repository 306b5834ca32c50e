//! Command-line front end.
//!
//! Exit codes: 0 success or member evidence, 1 violated or non-member
//! evidence, 2 an exact identity failed, 3 inconclusive, 64 usage error,
//! 65 unreadable or inconsistent input.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use fibspace::bandops::{self, BandMatrixSpec, SeqPrefix, TruncatedMatrix};
use fibspace::classify::{
    self, eval_condition, ConditionId, ConditionVerdict, DualReport, DualSet, Overall,
};
use fibspace::fibcore::{self, GoldenRatio};
use fibspace::io::{self, Format};
use fibspace::rational::{self, Rational};
use fibspace::spaces::{self, MembershipVerdict, NamedSequence, SpaceTag, Verdict};
use fibspace::Error;

const EXIT_VIOLATED: u8 = 1;
const EXIT_IDENTITY: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(
    name = "fibspace",
    version,
    about = "Exact computations with the Fibonacci difference matrix and its sequence spaces"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Prefix length (each command has its own default).
    #[arg(long, visible_alias = "length", global = true)]
    len: Option<usize>,
    /// Matrix corner as ROWSxCOLS (or ROWS,COLS).
    #[arg(long, global = true, value_parser = parse_corner)]
    corner: Option<(usize, usize)>,
    /// Tail tolerance; 1e-8 unless the command says otherwise.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Tail window length.
    #[arg(long, global = true, default_value_t = spaces::DEFAULT_WINDOW)]
    window: usize,
    /// Output format: json or csv.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add rounded decimals with this many digits (approximate).
    #[arg(long, global = true)]
    decimal: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Fibonacci values, ratios and identity checks.
    Fib(FibArgs),
    /// Apply a band matrix or the inverse to a prefix.
    Transform(TransformArgs),
    /// Evidence for a matrix class (source, target).
    Classify(ClassifyArgs),
    /// Dual-set membership of a sequence.
    Dual(DualArgs),
    /// Basis prefixes and partial reconstructions.
    Basis(BasisArgs),
    /// Almost-convergence averages and the f-limit verdict.
    Almost(AlmostArgs),
    /// Membership evidence of a prefix in a sequence space.
    Membership(MembershipArgs),
    /// Reproduce a named worked example end to end.
    Witness(WitnessArgs),
}

#[derive(Args)]
struct Source {
    /// Named sequence (fib_squares, ratio_sum, nonsolid_u, nonsolid_v,
    /// nonsolid_uv, ones, zero, unitN, alternating, staircase, basisN,
    /// basis_minus1).
    #[arg(long, conflicts_with = "file")]
    seq: Option<String>,
    /// Sequence file, JSON or .csv.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct FibArgs {
    /// Index `n` or inclusive range `a..b`.
    n: Option<String>,
    /// Print `f_{n+1}/f_n` instead of `f_n`.
    #[arg(long)]
    ratio: bool,
    /// Check `f_{n-1} f_{n+1} - f_n^2 = (-1)^{n+1}` over a range.
    #[arg(long, value_name = "RANGE")]
    check_cassini: Option<String>,
    /// Check `f_{n-1}^2 + f_n f_{n-1} - f_n^2 = (-1)^{n+1}` over a range.
    #[arg(long, value_name = "RANGE")]
    check_variant: Option<String>,
    /// Check `sum_{k<=n} f_k = f_{n+2} - 1` over a range.
    #[arg(long, value_name = "RANGE")]
    check_prefix_sum: Option<String>,
    /// All three identity checks over a range.
    #[arg(long, value_name = "RANGE")]
    check_all: Option<String>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    source: Source,
    /// fhat, fhat_inverse, delta, delta_forward, brs(r,s), brst(r,s,t).
    #[arg(long, default_value = "fhat")]
    matrix: String,
    /// Report whether the inverse recovers the input exactly.
    #[arg(long)]
    roundtrip: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Named matrix: fhat, fhat_inverse, delta, delta_forward, identity,
    /// zero, brs(r,s), brst(r,s,t).
    #[arg(long, conflicts_with = "file")]
    matrix: Option<String>,
    /// Matrix corner file, JSON or .csv.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_parser = parse_space, required_unless_present = "condition")]
    from: Option<SpaceTag>,
    #[arg(long, value_parser = parse_space, required_unless_present = "condition")]
    to: Option<SpaceTag>,
    /// Evaluate a single condition (C1..C13, CDelta, CF1, CF2) instead of
    /// the class.
    #[arg(long, value_parser = parse_condition)]
    condition: Option<ConditionId>,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    source: Source,
    /// d1, d2, d3, d4 or all.
    #[arg(long, default_value = "all")]
    set: String,
}

#[derive(Args)]
struct BasisArgs {
    /// Basis index; -1 selects `c^(-1)`.
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
    /// Reconstruct a sequence from its first coefficients.
    #[arg(long)]
    reconstruct: bool,
    #[command(flatten)]
    source: Source,
    /// Last coefficient index kept.
    #[arg(long)]
    m: Option<usize>,
    /// c0_fhat or c_fhat.
    #[arg(long, value_parser = parse_space, default_value = "c0_fhat")]
    target: SpaceTag,
    /// Generalized limit for c_fhat, as p/q; estimated when omitted.
    #[arg(long, value_parser = parse_rational, allow_negative_numbers = true)]
    limit: Option<Rational>,
}

#[derive(Args)]
struct AlmostArgs {
    #[command(flatten)]
    source: Source,
    /// Also emit the exact grid `t_mn` for `m <= M`, `n <= N`.
    #[arg(long, value_name = "M,N", value_parser = parse_corner)]
    grid: Option<(usize, usize)>,
}

#[derive(Args)]
struct MembershipArgs {
    #[command(flatten)]
    source: Source,
    /// Space tag, or `all`.
    #[arg(long)]
    space: String,
}

#[derive(Args)]
struct WitnessArgs {
    /// unbounded-member, strict-inclusion, row-facts, non-solid or basis.
    name: String,
}

/// Outcome of a command: text to emit and the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::LengthMismatch { .. }
            | Error::EmptyPrefix
            | Error::UnknownSequence(_) => Failure::Data(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => match emit(&cli.global, &out.text) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_DATA)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `fibspace --help` for usage");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn emit(g: &Global, text: &str) -> std::io::Result<()> {
    match &g.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    if let Some(tol) = g.tol {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    if g.window < 2 {
        return Err(Failure::Usage("--window must be at least 2".into()));
    }
    if g.len == Some(0) {
        return Err(Failure::Usage("--len must be at least 1".into()));
    }
    match &cli.command {
        Command::Fib(a) => cmd_fib(g, a),
        Command::Transform(a) => cmd_transform(g, a),
        Command::Classify(a) => cmd_classify(g, a),
        Command::Dual(a) => cmd_dual(g, a),
        Command::Basis(a) => cmd_basis(g, a),
        Command::Almost(a) => cmd_almost(g, a),
        Command::Membership(a) => cmd_membership(g, a),
        Command::Witness(a) => cmd_witness(g, a),
    }
}

// ---------------------------------------------------------------- parsing

fn parse_corner(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X', ','])
        .ok_or_else(|| format!("expected ROWSxCOLS, got `{s}`"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad dimension `{v}`"))
    };
    Ok((parse(r)?, parse(c)?))
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_space(s: &str) -> Result<SpaceTag, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_condition(s: &str) -> Result<ConditionId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// `a..b` or `a..=b`, both inclusive.
fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("expected an inclusive range a..b, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Parses `name`, `name(p,q,...)` or `name:p,q,...`.
fn split_call(s: &str) -> (String, Vec<String>) {
    let s = s.trim();
    let (name, args) = match s.find(['(', ':']) {
        Some(i) => (&s[..i], s[i + 1..].trim_end_matches(')')),
        None => (s, ""),
    };
    let args = args
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(String::from)
        .collect();
    (name.to_ascii_lowercase(), args)
}

fn band_spec(s: &str) -> Result<BandMatrixSpec, Failure> {
    let (name, args) = split_call(s);
    let nums = args
        .iter()
        .map(|a| rational::parse(a))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = match (name.as_str(), nums.as_slice()) {
        ("fhat", []) => BandMatrixSpec::Fhat,
        ("fhat_inverse" | "fhat_inv", []) => BandMatrixSpec::FhatInverse,
        ("delta", []) => BandMatrixSpec::Delta,
        ("delta_forward", []) => BandMatrixSpec::DeltaForward,
        ("brs", [r, s]) => BandMatrixSpec::brs(r.clone(), s.clone())?,
        ("brst", [r, s, t]) => BandMatrixSpec::brst(r.clone(), s.clone(), t.clone())?,
        _ => return Err(Failure::Usage(format!("unknown matrix `{s}`"))),
    };
    Ok(spec)
}

fn named_matrix(s: &str, rows: usize, cols: usize) -> Result<TruncatedMatrix, Failure> {
    let (name, args) = split_call(s);
    match (name.as_str(), args.len()) {
        ("identity", 0) => Ok(TruncatedMatrix::identity(rows, cols).with_provenance("identity")),
        ("zero" | "zeros", 0) => Ok(TruncatedMatrix::zeros(rows, cols).with_provenance("zero")),
        _ => Ok(TruncatedMatrix::from_spec(&band_spec(s)?, rows, cols)),
    }
}

fn load_sequence(
    src: &Source,
    len: Option<usize>,
    default_len: usize,
) -> Result<SeqPrefix, Failure> {
    match (&src.seq, &src.file) {
        (Some(name), None) => Ok(spaces::counterexample(name, len.unwrap_or(default_len))?),
        (None, Some(path)) => {
            let x = io::read_sequence(path)?;
            if x.is_empty() {
                return Err(Error::EmptyPrefix.into());
            }
            match len {
                Some(expected) if expected != x.len() => Err(Error::LengthMismatch {
                    expected,
                    got: x.len(),
                }
                .into()),
                _ => Ok(x),
            }
        }
        _ => Err(Failure::Usage("give exactly one of --seq or --file".into())),
    }
}

fn seq_label(x: &SeqPrefix) -> String {
    x.name().unwrap_or("input").to_string()
}

// ---------------------------------------------------------------- output

fn json_text<T: Serialize>(v: &T) -> String {
    io::to_json_string(v)
}

fn sequence_out(g: &Global, x: &SeqPrefix) -> String {
    match g.format.unwrap_or_default() {
        Format::Json => json_text(&io::sequence_to_json(x, g.decimal)),
        Format::Csv => io::sequence_to_csv(x, g.decimal),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::MemberEvidence => 0,
        Verdict::NonMemberEvidence => EXIT_VIOLATED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn overall_code(v: Overall) -> u8 {
    match v {
        Overall::MemberEvidence => 0,
        Overall::Violated => EXIT_VIOLATED,
        Overall::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn condition_code(v: ConditionVerdict) -> u8 {
    match v {
        ConditionVerdict::SatisfiedEvidence => 0,
        ConditionVerdict::Violated => EXIT_VIOLATED,
        ConditionVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn tol(g: &Global) -> f64 {
    g.tol.unwrap_or(spaces::DEFAULT_TOL)
}

// ---------------------------------------------------------------- fib

fn cmd_fib(g: &Global, a: &FibArgs) -> CmdResult {
    let checks = [
        ("cassini", &a.check_cassini),
        ("variant", &a.check_variant),
        ("prefix_sum", &a.check_prefix_sum),
        ("all", &a.check_all),
    ];
    if let Some((kind, range)) = checks.iter().find_map(|(k, r)| r.as_ref().map(|r| (*k, r))) {
        return fib_check(g, kind, range);
    }
    let spec = a
        .n
        .as_deref()
        .ok_or_else(|| Failure::Usage("fib needs an index, a range or a --check flag".into()))?;
    let (lo, hi) = match spec.contains("..") {
        true => parse_range(spec)?,
        false => {
            let n = spec
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("bad index `{spec}`")))?;
            (n, n)
        }
    };
    let digits = g.decimal.unwrap_or(20);
    let rows: Vec<(usize, String, Option<String>)> = (lo..=hi)
        .map(|n| {
            if a.ratio {
                let r = fibcore::fib_ratio(n);
                (n, rational::format(&r), Some(rational::decimal(&r, digits)))
            } else {
                (n, fibcore::fib(n).to_string(), None)
            }
        })
        .collect();
    let text = match g.format {
        Some(Format::Json) => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(n, v, d)| match d {
                    Some(d) => json!({"n": n, "ratio": v, "decimal_approx": d}),
                    None => json!({"n": n, "value": v}),
                })
                .collect();
            if items.len() == 1 {
                json_text(&items[0])
            } else {
                json_text(&items)
            }
        }
        Some(Format::Csv) => {
            let mut out = String::from(if a.ratio {
                "n,ratio,decimal_approx\n"
            } else {
                "n,value\n"
            });
            for (n, v, d) in &rows {
                match d {
                    Some(d) => out.push_str(&format!("{n},{v},{d}\n")),
                    None => out.push_str(&format!("{n},{v}\n")),
                }
            }
            out
        }
        None => {
            let single = rows.len() == 1;
            rows.iter()
                .map(|(n, v, d)| {
                    let value = d.as_ref().unwrap_or(v);
                    if single {
                        format!("{value}\n")
                    } else {
                        format!("{n} {value}\n")
                    }
                })
                .collect()
        }
    };
    Ok(Output::ok(text))
}

fn fib_check(g: &Global, kind: &str, range: &str) -> CmdResult {
    let (lo, hi) = parse_range(range)?;
    let needs_positive = kind != "prefix_sum";
    if needs_positive && lo == 0 {
        return Err(Failure::Usage("Cassini identities start at n = 1".into()));
    }
    let cassini = |n| fibcore::cassini(n) == fibcore::alternating_sign(n);
    let variant = |n| fibcore::cassini_variant(n) == fibcore::alternating_sign(n);
    let prefix = |n| fibcore::fib_prefix_sum(n) == fibcore::fib(n + 2) - 1;
    let tests: Vec<(&str, &dyn Fn(usize) -> bool)> = match kind {
        "cassini" => vec![("cassini", &cassini)],
        "variant" => vec![("variant", &variant)],
        "prefix_sum" => vec![("prefix_sum", &prefix)],
        _ => vec![
            ("cassini", &cassini),
            ("variant", &variant),
            ("prefix_sum", &prefix),
        ],
    };
    let mut passed = 0usize;
    let mut total = 0usize;
    let mut failures = Vec::new();
    for (name, test) in &tests {
        for n in lo..=hi {
            total += 1;
            if test(n) {
                passed += 1;
            } else {
                failures.push(json!({"identity": name, "n": n}));
            }
        }
    }
    let status = if passed == total { "OK" } else { "FAIL" };
    let text = match g.format {
        Some(Format::Json) => json_text(&json!({
            "status": status, "passed": passed, "total": total, "failures": failures,
        })),
        Some(Format::Csv) => format!("status,passed,total\n{status},{passed},{total}\n"),
        None => format!("{status} {passed}/{total}\n"),
    };
    let code = if passed == total { 0 } else { EXIT_IDENTITY };
    Ok(Output { text, code })
}

// ---------------------------------------------------------------- transform

fn cmd_transform(g: &Global, a: &TransformArgs) -> CmdResult {
    let spec = band_spec(&a.matrix)?;
    let x = load_sequence(&a.source, g.len, 64)?;
    if a.roundtrip {
        let exact = match spec {
            BandMatrixSpec::Fhat => bandops::roundtrip_check(&x),
            BandMatrixSpec::FhatInverse => {
                let back =
                    bandops::apply(&BandMatrixSpec::Fhat, &bandops::apply_fhat_inverse(&x)?)?;
                back.terms() == x.terms()
            }
            _ => {
                return Err(Failure::Usage(
                    "--roundtrip needs --matrix fhat or fhat_inverse".into(),
                ))
            }
        };
        let word = if exact { "exact" } else { "mismatch" };
        let text = match g.format {
            Some(Format::Json) => json_text(&json!({
                "sequence": seq_label(&x), "length": x.len(), "matrix": spec.name(), "roundtrip": word,
            })),
            Some(Format::Csv) => format!("roundtrip\n{word}\n"),
            None => format!("roundtrip: {word}\n"),
        };
        return Ok(Output {
            text,
            code: if exact { 0 } else { EXIT_IDENTITY },
        });
    }
    let y = bandops::apply(&spec, &x)?.with_name(format!("{}({})", spec.name(), seq_label(&x)));
    Ok(Output::ok(sequence_out(g, &y)))
}

// ---------------------------------------------------------------- classify

fn cmd_classify(g: &Global, a: &ClassifyArgs) -> CmdResult {
    let m = match (&a.matrix, &a.file) {
        (Some(name), None) => {
            let (rows, cols) = g.corner.unwrap_or((64, 64));
            named_matrix(name, rows, cols)?
        }
        (None, Some(path)) => {
            let m = io::read_matrix(path)?;
            match g.corner {
                Some((r, c)) if r > m.rows() || c > m.cols() => {
                    return Err(Error::LengthMismatch {
                        expected: r.max(c),
                        got: m.rows().min(m.cols()),
                    }
                    .into())
                }
                Some((r, c)) => m.corner(r, c),
                None => m,
            }
        }
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --matrix or --file".into(),
            ))
        }
    };
    let tol = tol(g);
    if let Some(id) = a.condition {
        let report = eval_condition(&m, id, tol, g.window)?;
        let text = match g.format.unwrap_or_default() {
            Format::Json => json_text(&report),
            Format::Csv => format!(
                "id,subject,zero_limit,verdict,witness_row,witness_column,witness_ladder,witness_value\n{}\n",
                io::condition_csv_fields(&report)
            ),
        };
        return Ok(Output {
            text,
            code: condition_code(report.verdict),
        });
    }
    let (Some(from), Some(to)) = (a.from, a.to) else {
        return Err(Failure::Usage("classify needs --from and --to".into()));
    };
    let verdict = classify::classify(&m, from, to, tol, g.window)?;
    let text = match g.format.unwrap_or_default() {
        Format::Json => json_text(&verdict),
        Format::Csv => io::report_to_csv(&verdict),
    };
    Ok(Output {
        text,
        code: overall_code(verdict.overall),
    })
}

// ---------------------------------------------------------------- dual

fn cmd_dual(g: &Global, a: &DualArgs) -> CmdResult {
    let x = load_sequence(&a.source, g.len, 64)?;
    let tol = tol(g);
    let reports: Vec<DualReport> = if a.set.eq_ignore_ascii_case("all") {
        classify::dual_all(&x, tol, g.window)?
    } else {
        let set: DualSet = a
            .set
            .parse()
            .map_err(|e: Error| Failure::Usage(e.to_string()))?;
        vec![classify::dual_membership(&x, set, tol, g.window)?]
    };
    let text = match g.format.unwrap_or_default() {
        Format::Json if reports.len() == 1 => json_text(&reports[0]),
        Format::Json => json_text(&reports),
        Format::Csv => {
            let mut out = String::from(
                "set,id,subject,zero_limit,verdict,witness_row,witness_column,witness_ladder,witness_value\n",
            );
            for r in &reports {
                out.push_str(&format!(
                    "{},{}\n",
                    r.set_id,
                    io::condition_csv_fields(&r.report)
                ));
            }
            out
        }
    };
    let code = if reports.iter().any(|r| r.report.is_violated()) {
        EXIT_VIOLATED
    } else if reports.iter().all(|r| r.report.is_satisfied()) {
        0
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Output { text, code })
}

// ---------------------------------------------------------------- basis

fn cmd_basis(g: &Global, a: &BasisArgs) -> CmdResult {
    if a.reconstruct {
        return basis_reconstruct(g, a);
    }
    let n =
        a.n.ok_or_else(|| Failure::Usage("basis needs --n or --reconstruct".into()))?;
    let len = g.len.unwrap_or(16);
    let x = match n {
        -1 => spaces::basis_c_minus1(len),
        n if n >= 0 => spaces::basis_sequence(n as usize, len)?,
        _ => {
            return Err(Failure::Usage(
                "basis index must be -1 or nonnegative".into(),
            ))
        }
    };
    Ok(Output::ok(sequence_out(g, &x)))
}

fn basis_reconstruct(g: &Global, a: &BasisArgs) -> CmdResult {
    let x = load_sequence(&a.source, g.len, 64)?;
    let m =
        a.m.ok_or_else(|| Failure::Usage("--reconstruct needs --m".into()))?;
    let r = spaces::reconstruct(&x, a.target, m, a.limit.clone(), g.window)?;
    let dropped = r
        .coefficients
        .coeffs
        .iter()
        .skip(m + 1)
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero);
    let matches = dropped == r.residual_norm;
    let text = match g.format.unwrap_or_default() {
        Format::Json => json_text(&json!({
            "sequence": seq_label(&x),
            "length": x.len(),
            "reconstruction": r,
            "dropped_coefficient_sup": rational::format(&dropped),
            "residual_equals_dropped_sup": matches,
        })),
        Format::Csv => {
            let mut out = String::from("index,coefficient,partial\n");
            for (k, (c, p)) in r.coefficients.coeffs.iter().zip(&r.partial).enumerate() {
                out.push_str(&format!(
                    "{k},{},{}\n",
                    rational::format(c),
                    rational::format(p)
                ));
            }
            out.push_str(&format!(
                "# residual_norm,{}\n",
                rational::format(&r.residual_norm)
            ));
            out.push_str(&format!(
                "# dropped_coefficient_sup,{}\n",
                rational::format(&dropped)
            ));
            out
        }
    };
    Ok(Output {
        text,
        code: if matches { 0 } else { EXIT_IDENTITY },
    })
}

// ---------------------------------------------------------------- almost

fn cmd_almost(g: &Global, a: &AlmostArgs) -> CmdResult {
    let x = load_sequence(&a.source, g.len, 256)?;
    let tol = g.tol.unwrap_or(5e-2);
    let v = spaces::f_lim_estimate(&x, tol)?;
    let scan = spaces::almost_scan(&x)?;
    let grid = match a.grid {
        Some((m, n)) => Some(spaces::t_matrix(&x, m, n)?),
        None => None,
    };
    let text = match g.format.unwrap_or_default() {
        Format::Json => {
            let mut out = json!({
                "sequence": seq_label(&x),
                "length": x.len(),
                "tol": tol,
                "verdict": v.verdict,
                "limit": rational::format(&scan.limit),
                "limit_estimate": v.limit_estimate,
                "tail_oscillation": v.tail_oscillation,
                "scan": {
                    "m": scan.m,
                    "n_count": scan.n_count,
                    "step": rational::format(&scan.step),
                    "spread": rational::format(&scan.spread),
                    "half_spread": rational::format(&scan.half_spread),
                },
            });
            if let Some(grid) = &grid {
                out["t_mn"] = grid
                    .iter()
                    .map(|row| row.iter().map(rational::format).collect::<Vec<_>>())
                    .collect();
            }
            json_text(&out)
        }
        Format::Csv => {
            let mut out = String::from("verdict,limit,limit_estimate,tail_oscillation\n");
            out.push_str(&format!(
                "{},{},{},{}\n",
                io::enum_name(&v.verdict),
                rational::format(&scan.limit),
                v.limit_estimate.map(|l| l.to_string()).unwrap_or_default(),
                v.tail_oscillation
            ));
            if let Some(grid) = &grid {
                out.push_str("m,n,t_mn\n");
                for (m, row) in grid.iter().enumerate() {
                    for (n, t) in row.iter().enumerate() {
                        out.push_str(&format!("{m},{n},{}\n", rational::format(t)));
                    }
                }
            }
            out
        }
    };
    Ok(Output {
        text,
        code: verdict_code(v.verdict),
    })
}

// ---------------------------------------------------------------- membership

#[derive(Serialize)]
struct MembershipLine<'a> {
    sequence: String,
    length: usize,
    space: SpaceTag,
    #[serde(flatten)]
    verdict: &'a MembershipVerdict,
}

fn cmd_membership(g: &Global, a: &MembershipArgs) -> CmdResult {
    let x = load_sequence(&a.source, g.len, 64)?;
    let tags: Vec<SpaceTag> = if a.space.eq_ignore_ascii_case("all") {
        SpaceTag::ALL.to_vec()
    } else {
        vec![a
            .space
            .parse()
            .map_err(|e: Error| Failure::Usage(e.to_string()))?]
    };
    let tol = tol(g);
    let verdicts = tags
        .iter()
        .map(|&t| spaces::membership_estimate(&x, t, tol, g.window))
        .collect::<Result<Vec<_>, _>>()?;
    let lines: Vec<MembershipLine> = tags
        .iter()
        .zip(&verdicts)
        .map(|(&space, verdict)| MembershipLine {
            sequence: seq_label(&x),
            length: x.len(),
            space,
            verdict,
        })
        .collect();
    let text = match g.format.unwrap_or_default() {
        Format::Json if lines.len() == 1 => json_text(&lines[0]),
        Format::Json => json_text(&lines),
        Format::Csv => {
            let mut out =
                String::from("space,verdict,limit_estimate,tail_oscillation,exact_witness\n");
            for l in &lines {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    l.space,
                    io::enum_name(&l.verdict.verdict),
                    l.verdict
                        .limit_estimate
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                    l.verdict.tail_oscillation,
                    l.verdict.exact_witness.as_deref().unwrap_or("")
                ));
            }
            out
        }
    };
    let code = match verdicts.as_slice() {
        [single] => verdict_code(single.verdict),
        _ => 0,
    };
    Ok(Output { text, code })
}

// ---------------------------------------------------------------- witness

/// Whether a failed check is an exact identity or tail evidence.
#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum CheckKind {
    Exact,
    Evidence,
}

#[derive(Serialize)]
struct Check {
    check: String,
    kind: CheckKind,
    holds: bool,
    value: Value,
}

#[derive(Serialize)]
struct WitnessReport {
    witness: String,
    parameters: Value,
    holds: bool,
    checks: Vec<Check>,
}

fn exact(check: impl Into<String>, holds: bool, value: Value) -> Check {
    Check {
        check: check.into(),
        kind: CheckKind::Exact,
        holds,
        value,
    }
}

fn evidence(check: impl Into<String>, expected: Verdict, v: &MembershipVerdict) -> Check {
    Check {
        check: check.into(),
        kind: CheckKind::Evidence,
        holds: v.verdict == expected,
        value: serde_json::to_value(v).expect("verdicts serialize"),
    }
}

fn q(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

fn cmd_witness(g: &Global, a: &WitnessArgs) -> CmdResult {
    let (parameters, checks) = match a.name.to_ascii_lowercase().replace('_', "-").as_str() {
        "unbounded-member" => witness_unbounded(g)?,
        "strict-inclusion" => witness_strict(g)?,
        "row-facts" => witness_rows(g)?,
        "non-solid" | "nonsolid" => witness_nonsolid(g)?,
        "basis" => witness_basis(g)?,
        other => return Err(Failure::Usage(format!("unknown witness `{other}`"))),
    };
    let report = WitnessReport {
        witness: a.name.clone(),
        parameters,
        holds: checks.iter().all(|c| c.holds),
        checks,
    };
    let code = if report
        .checks
        .iter()
        .any(|c| !c.holds && c.kind == CheckKind::Exact)
    {
        EXIT_IDENTITY
    } else if !report.holds {
        EXIT_VIOLATED
    } else {
        0
    };
    let text = match g.format.unwrap_or_default() {
        Format::Json => json_text(&report),
        Format::Csv => {
            let mut out = String::from("check,kind,holds\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "\"{}\",{},{}\n",
                    c.check,
                    io::enum_name(&c.kind),
                    c.holds
                ));
            }
            out
        }
    };
    Ok(Output { text, code })
}

type Witness = Result<(Value, Vec<Check>), Failure>;

fn witness_unbounded(g: &Global) -> Witness {
    let len = g.len.unwrap_or(200);
    let x = NamedSequence::FibSquares.generate(len);
    let y = bandops::apply(&BandMatrixSpec::Fhat, &x)?;
    let nonzero: Vec<usize> = (0..y.len()).filter(|&k| !y[k].is_zero()).collect();
    let tol = tol(g);
    let checks = vec![
        exact(
            "fhat(fib_squares) equals e0",
            y.terms() == SeqPrefix::unit(0, len).terms(),
            json!({"first_term": q(&y[0]), "nonzero_indices": nonzero}),
        ),
        exact(
            "fib_squares last term",
            x[len - 1] > Rational::from_integer(1.into()),
            q(&x[len - 1]),
        ),
        evidence(
            "fib_squares not in ell_inf",
            Verdict::NonMemberEvidence,
            &spaces::membership_estimate(&x, SpaceTag::EllInf, tol, g.window)?,
        ),
        evidence(
            "fib_squares in c0_fhat",
            Verdict::MemberEvidence,
            &spaces::membership_estimate(&x, SpaceTag::C0Fhat, tol, g.window)?,
        ),
    ];
    Ok((json!({"sequence": "fib_squares", "length": len}), checks))
}

fn witness_strict(g: &Global) -> Witness {
    let len = g.len.unwrap_or(101);
    let x = NamedSequence::RatioSum.generate(len);
    let y = bandops::apply(&BandMatrixSpec::Fhat, &x)?;
    let mismatch = (0..y.len()).find(|&k| y[k] != fibcore::fib_ratio(k));
    let mut checks = vec![exact(
        format!("fhat(ratio_sum)_k equals f_(k+1)/f_k for k <= {}", len - 1),
        mismatch.is_none(),
        json!({"first_mismatch": mismatch}),
    )];
    if len > 40 {
        let value = rational::to_f64(&y[40]);
        let gap = rational::to_f64(&(&y[40] - GoldenRatio::to_rational(256)).abs());
        checks.push(exact(
            "|value(40) - phi| < 1e-15",
            gap < 1e-15,
            json!({"value_40": value, "exact_40": q(&y[40]), "gap": gap}),
        ));
    }
    let tol = tol(g);
    checks.push(evidence(
        "ratio_sum in c_fhat",
        Verdict::MemberEvidence,
        &spaces::membership_estimate(&x, SpaceTag::CFhat, tol, g.window)?,
    ));
    checks.push(evidence(
        "ratio_sum not in c0_fhat",
        Verdict::NonMemberEvidence,
        &spaces::membership_estimate(&x, SpaceTag::C0Fhat, tol, g.window)?,
    ));
    checks.push(evidence(
        "ratio_sum not in c",
        Verdict::NonMemberEvidence,
        &spaces::membership_estimate(&x, SpaceTag::C, tol, g.window)?,
    ));
    Ok((json!({"sequence": "ratio_sum", "length": len}), checks))
}

fn witness_rows(g: &Global) -> Witness {
    let (rows, cols) = g.corner.unwrap_or((200, 200));
    let a = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, rows, cols);
    let abs = a.row_abs_sums();
    let max = abs.iter().max().cloned().unwrap_or_else(Rational::zero);
    let argmax = abs.iter().position(|v| *v == max);
    let five_halves = rational::ratio(5, 2);
    let sums = a.row_sums();
    let gap = sums
        .iter()
        .skip(50)
        .map(|s| rational::to_f64(&(s + Rational::from_integer(1.into())).abs()))
        .fold(0.0f64, f64::max);
    let mut checks = vec![
        exact(
            "running max of row abs sums is 5/2, first at n = 1",
            max == five_halves && argmax == Some(1),
            json!({"max": q(&max), "argmax": argmax}),
        ),
        exact(
            "|row sum + 1| < 1e-10 for n >= 50",
            rows > 50 && gap < 1e-10,
            json!({"max_gap": gap}),
        ),
    ];
    let tol = tol(g);
    for (source, target, expect) in [
        (SpaceTag::C0, SpaceTag::C0, Overall::MemberEvidence),
        (SpaceTag::C, SpaceTag::C, Overall::MemberEvidence),
        (SpaceTag::C, SpaceTag::C0, Overall::Violated),
    ] {
        let v = classify::classify_pair(&a, source, target, tol, g.window)?;
        let first = v.first_violation();
        let holds = v.overall == expect
            && (expect != Overall::Violated || first.is_some_and(|r| r.id == ConditionId::C4));
        checks.push(Check {
            check: format!("fhat in ({source}, {target}) is {}", io::enum_name(&expect)),
            kind: CheckKind::Evidence,
            holds,
            value: json!({
                "overall": v.overall,
                "conditions": v.conditions.iter().map(|r| json!({"id": r.id, "verdict": r.verdict})).collect::<Vec<_>>(),
                "first_violation": first.map(|r| json!({"id": r.id, "witness": r.witness})),
            }),
        });
    }
    Ok((
        json!({"matrix": "fhat", "rows": rows, "cols": cols}),
        checks,
    ))
}

fn witness_nonsolid(g: &Global) -> Witness {
    let len = g.len.unwrap_or(101);
    let u = NamedSequence::NonsolidU.generate(len);
    let v = NamedSequence::NonsolidV.generate(len);
    let uv = NamedSequence::NonsolidUv.generate(len);
    let product: Vec<Rational> = u.iter().zip(v.iter()).map(|(a, b)| a * b).collect();
    let y = bandops::apply(&BandMatrixSpec::Fhat, &uv)?;
    let expected = |k: usize| {
        let sign = if k % 2 == 1 { 2 } else { -2 };
        Rational::from_integer(fibcore::fib(k) * fibcore::fib(k + 1) * sign)
    };
    let mismatch = (1..y.len()).find(|&k| y[k] != expected(k));
    let tol = tol(g);
    let checks = vec![
        exact(
            "nonsolid_uv is the termwise product",
            product.as_slice() == uv.terms(),
            Value::Null,
        ),
        exact(
            format!(
                "fhat_k(uv) = 2(-1)^(k+1) f_k f_(k+1) for 1 <= k <= {}",
                len - 1
            ),
            mismatch.is_none(),
            json!({"first_mismatch": mismatch}),
        ),
        exact("fhat_0(uv) = -1", y[0] == rational::int(-1), q(&y[0])),
        exact(
            "|v_k| <= 1",
            v.iter()
                .all(|t| t.abs() <= Rational::from_integer(1.into())),
            Value::Null,
        ),
        evidence(
            "u in c0_fhat",
            Verdict::MemberEvidence,
            &spaces::membership_estimate(&u, SpaceTag::C0Fhat, tol, g.window)?,
        ),
        evidence(
            "uv not in c_fhat",
            Verdict::NonMemberEvidence,
            &spaces::membership_estimate(&uv, SpaceTag::CFhat, tol, g.window)?,
        ),
    ];
    Ok((
        json!({"u": "nonsolid_u", "v": "nonsolid_v", "length": len}),
        checks,
    ))
}

fn witness_basis(g: &Global) -> Witness {
    let len = g.len.unwrap_or(64);
    let top = 32.min(len - 1);
    let bad_n = (0..=top).find(|&n| {
        spaces::basis_sequence(n, len)
            .and_then(|c| bandops::apply(&BandMatrixSpec::Fhat, &c))
            .map(|y| y.terms() != SeqPrefix::unit(n, len).terms())
            .unwrap_or(true)
    });
    let e = bandops::apply(&BandMatrixSpec::Fhat, &spaces::basis_c_minus1(len))?;
    let x = NamedSequence::FibSquares.generate(len);
    let r = spaces::reconstruct(&x, SpaceTag::C0Fhat, top, None, g.window)?;
    let checks = vec![
        exact(
            format!("fhat(c^(n)) = e^(n) for n <= {top}"),
            bad_n.is_none(),
            json!({"first_mismatch": bad_n}),
        ),
        exact(
            "fhat(c^(-1)) = e",
            e.iter().all(|t| *t == Rational::from_integer(1.into())),
            Value::Null,
        ),
        exact(
            format!("fib_squares rebuilt from {} coefficients", top + 1),
            r.residual_norm.is_zero(),
            q(&r.residual_norm),
        ),
    ];
    Ok((json!({"length": len, "max_index": top}), checks))
}
