//! `mdshash`: construct hash families from MDS codes, measure their ε, and
//! compare lower bounds on family size.
//!
//! Exit codes: 0 success, 1 verification failed, 2 precondition violation,
//! 3 resource cap, 4 parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdshash_core::bounds::{
    check_family_size, compare, eps_floor, sweep, sweep_csv, thresholds, BoundCheck, BoundReport,
    BoundValue, Regime,
};
use mdshash_core::code::{
    parity_code, parity_mds_with_allones, rs_code, smallest_n_subcode_size, subcode_select,
};
use mdshash_core::family::{
    code_to_delta_family, code_to_family, family_to_code, linear_code_to_family, measure,
    EpsilonReport, HashFamily, MeasureOptions, DEFAULT_BUDGET,
};
use mdshash_core::io::{read_code, read_family, write_family, write_generic_code};
use mdshash_core::rational::{format_ratio, parse_ratio};
use mdshash_core::{BigRational, Error, Kind};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "mdshash",
    version,
    about = "Universal hash families from MDS codes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate both lower bounds on N for (kind, n, m, eps).
    Bound(Query),
    /// Print the crossover thresholds eps1..eps4 for (n, m).
    Thresholds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        json: bool,
    },
    /// Like `bound`, but requires the kind's crossover threshold to apply.
    Compare(Query),
    /// Build a family and write it as a family file.
    Construct {
        #[command(subcommand)]
        what: Construction,
        #[command(flatten)]
        common: ConstructArgs,
    },
    /// Convert between code files and family files.
    Convert {
        input: PathBuf,
        /// Target format: `family` (from a code file) or `code` (from a family file).
        #[arg(long)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure a family's exact ε and check it against every applicable bound.
    Verify {
        kind: Kind,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Bound comparison over a grid, as CSV.
    Sweep {
        kind: Kind,
        /// Domain sizes: `a..b` (inclusive) or a comma list.
        #[arg(long)]
        n: String,
        /// Range sizes: `a..b` (inclusive) or a comma list.
        #[arg(long)]
        m: String,
        /// Comma-separated fractions; empty for a header-only CSV.
        #[arg(long, default_value = "")]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Query {
    kind: Kind,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    /// Exact fraction `p/q`.
    #[arg(long)]
    eps: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    /// Family file to write; without it the file goes to stdout and the
    /// report to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Construction {
    /// U family from the Reed–Solomon [n, k] code over GF(q).
    Rs {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// U family from the [n, n−1, 2] parity-check code containing all-ones.
    Parity {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// Smallest-N U family from a subcode of the sum-zero code of length q^(i+1).
    Subfamily {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        i: u32,
    },
    /// ΔU family from the cosets of all-ones in the parity-check code.
    Delta {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Target {
    Family,
    Code,
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::TooLarge { .. } => 3,
            Error::Parse { .. } => 4,
            _ => 2,
        };
        let msg = match &e {
            Error::TooLarge { .. } => format!("{e} (raise --budget or shrink the input)"),
            _ => e.to_string(),
        };
        Failure { code, msg }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Bound(q) => cmd_bound(&q, false),
        Cmd::Compare(q) => cmd_bound(&q, true),
        Cmd::Thresholds { n, m, json } => cmd_thresholds(n, m, json),
        Cmd::Construct { what, common } => cmd_construct(&what, &common),
        Cmd::Convert { input, to, out } => cmd_convert(&input, to, out.as_deref()),
        Cmd::Verify {
            kind,
            file,
            budget,
            json,
        } => cmd_verify(kind, &file, budget, json),
        Cmd::Sweep {
            kind,
            n,
            m,
            eps,
            out,
        } => cmd_sweep(kind, &n, &m, &eps, out.as_deref()),
    }
}

fn parse_eps(s: &str) -> Result<BigRational, Failure> {
    parse_ratio(s).map_err(|e| fail(2, format!("--eps: {e}")))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Integers print bare, other rationals as p/q, inexact values as floats.
fn show_value(b: &BoundValue) -> String {
    match &b.exact {
        Some(r) if r.is_integer() => r.to_integer().to_string(),
        Some(r) => format!("{} ({})", format_ratio(r), b.value),
        None => b.value.to_string(),
    }
}

fn show<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

fn print_report(r: &BoundReport) {
    println!(
        "kind={} n={} m={} eps={}",
        r.kind,
        r.n,
        r.m,
        format_ratio(&r.eps)
    );
    println!("old_raw={}", show(r.old_raw.as_ref().map(show_value)));
    println!("new_raw={}", show(r.new_raw.as_ref().map(show_value)));
    println!("old_N={}", show(r.old_n));
    println!("new_N={}", show(r.new_n));
    println!("threshold={}", show(r.threshold));
    println!("floor={}", format_ratio(&r.floor));
    println!("dominant={}", r.dominant.as_str());
    let regime = r.regime.map(|g| match g {
        Regime::New => "new",
        Regime::Old => "old",
    });
    println!("regime={}", show(regime));
    if r.boundary {
        println!("boundary=true");
    }
}

fn cmd_bound(q: &Query, need_threshold: bool) -> Outcome {
    let eps = parse_eps(&q.eps)?;
    let report = compare(q.kind, q.n, q.m, &eps)?;
    if need_threshold && report.threshold.is_none() {
        let hyp = match q.kind {
            Kind::U => "n > m^2",
            Kind::DeltaU => "n > m",
            Kind::SU => "n > 2^m",
        };
        return Err(fail(
            2,
            format!(
                "no {} crossover threshold for n = {}, m = {} (needs {hyp})",
                q.kind, q.n, q.m
            ),
        ));
    }
    if q.json {
        println!("{}", to_json(&report));
    } else {
        print_report(&report);
    }
    Ok(0)
}

fn cmd_thresholds(n: u64, m: u64, json: bool) -> Outcome {
    let t = thresholds(n, m)?;
    if json {
        println!("{}", to_json(&t));
        return Ok(0);
    }
    println!("n={n} m={m}");
    for (name, th) in [
        ("eps1", t.eps1),
        ("eps2", t.eps2),
        ("eps3", t.eps3),
        ("eps4", t.eps4),
    ] {
        let tag = if th.applicable { "" } else { " (inapplicable)" };
        println!("{name}={}{tag}", show(th.value));
    }
    let (a, b, c) = t.quad_coeffs;
    println!(
        "quadratic a={a} b={b} c={c} discriminant={}",
        t.discriminant
    );
    Ok(0)
}

/// Measurement plus bound checks for one family.
struct Verdict {
    report: EpsilonReport,
    floor: Option<BigRational>,
    checks: Vec<BoundCheck>,
    problems: Vec<String>,
}

fn assess(fam: &HashFamily, kind: Kind, budget: u128) -> Result<Verdict, Failure> {
    let opts = MeasureOptions {
        budget,
        ..Default::default()
    };
    let report = measure(fam, kind, &opts)?;
    let (funcs, n, m) = (fam.funcs() as u64, fam.domain() as u64, fam.range() as u64);
    let mut problems = Vec::new();
    let floor = if n > m {
        eps_floor(kind, n, m).ok()
    } else {
        None
    };
    if let Some(f) = &floor {
        if report.epsilon < *f {
            problems.push(format!(
                "eps {} below floor {}",
                format_ratio(&report.epsilon),
                format_ratio(f)
            ));
        }
    }
    let mut checks = Vec::new();
    if report.balanced == Some(false) {
        problems.push("family is not balanced, so it is not strongly universal".into());
    } else if n > m {
        checks = check_family_size(kind, funcs, n, m, &report.epsilon);
        for c in checks.iter().filter(|c| !c.satisfied) {
            problems.push(format!(
                "N = {funcs} violates the {} bound (raw {})",
                c.bound, c.raw
            ));
        }
    }
    Ok(Verdict {
        report,
        floor,
        checks,
        problems,
    })
}

fn verdict_json(v: &Verdict) -> Value {
    let mut j = to_json(&v.report);
    j["floor"] = json!(v.floor.as_ref().map(format_ratio));
    j["checks"] = to_json(&v.checks);
    j["problems"] = json!(v.problems);
    j["pass"] = json!(v.problems.is_empty());
    j
}

fn print_verdict(v: &Verdict) {
    let r = &v.report;
    println!("family N={} n={} m={}", r.funcs, r.domain, r.range);
    println!(
        "kind={} eps={} count={}",
        r.kind,
        format_ratio(&r.epsilon),
        r.count
    );
    let w = &r.witness;
    let mut wit = format!("witness a1={} a2={}", w.a1, w.a2);
    if let Some(b) = w.b {
        wit.push_str(&format!(" b={b}"));
    }
    if let Some((b1, b2)) = w.b_pair {
        wit.push_str(&format!(" b1={b1} b2={b2}"));
    }
    println!("{wit}");
    if let Some(g) = r.group {
        println!("group={}", g.as_str());
    }
    if let Some(b) = r.balanced {
        println!("balanced={b}");
    }
    match &v.floor {
        Some(f) => println!(
            "floor={} {}",
            format_ratio(f),
            if r.epsilon >= *f { "ok" } else { "VIOLATED" }
        ),
        None => println!("floor=vacuous (n <= m)"),
    }
    for c in &v.checks {
        println!(
            "{}_bound raw={} {}",
            c.bound,
            c.raw,
            if c.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    for p in &v.problems {
        println!("problem: {p}");
    }
    println!(
        "{}",
        if v.problems.is_empty() {
            "PASS"
        } else {
            "FAIL"
        }
    );
}

fn cmd_construct(what: &Construction, common: &ConstructArgs) -> Outcome {
    let (fam, kind, label) = match *what {
        Construction::Rs { q, k, n } => (
            linear_code_to_family(&rs_code(q, k, n)?)?,
            Kind::U,
            format!("rs q={q} k={k} n={n}"),
        ),
        Construction::Parity { q, n } => {
            let (code, v) = parity_mds_with_allones(q, n)?;
            let v: Vec<String> = v.iter().map(u32::to_string).collect();
            (
                linear_code_to_family(&code)?,
                Kind::U,
                format!("parity q={q} n={n} v=({})", v.join(",")),
            )
        }
        Construction::Subfamily { q, i } => {
            let len = q
                .checked_pow(i + 1)
                .filter(|&l| l <= 64)
                .ok_or_else(|| fail(2, format!("q^(i+1) too large for q = {q}, i = {i}")))?;
            let size = smallest_n_subcode_size(q, i).ok_or_else(|| {
                Failure::from(Error::TooLarge {
                    needed: u128::MAX,
                    budget: common.budget,
                })
            })?;
            let sub = subcode_select(&parity_code(q, len as usize)?, size)?;
            (
                code_to_family(&sub)?,
                Kind::U,
                format!("subfamily q={q} i={i}"),
            )
        }
        Construction::Delta { q, n } => {
            let (code, _) = parity_mds_with_allones(q, n)?;
            (
                code_to_delta_family(&code)?,
                Kind::DeltaU,
                format!("delta q={q} n={n}"),
            )
        }
    };
    let verdict = assess(&fam, kind, common.budget)?;
    let text = write_family(&fam);
    let (n, m) = (fam.domain() as u64, fam.range() as u64);
    let minimum = compare(kind, n, m, &verdict.report.epsilon).ok();
    let body = if common.json {
        let mut j = verdict_json(&verdict);
        j["construction"] = json!(label);
        j["min_N"] = json!(minimum
            .as_ref()
            .map(|r| json!({"old": r.old_n, "new": r.new_n})));
        j.to_string()
    } else {
        let mut s = format!("construction {label}\n");
        if let Some(r) = &minimum {
            s.push_str(&format!(
                "bound minimum old_N={} new_N={}\n",
                show(r.old_n),
                show(r.new_n)
            ));
        }
        s
    };
    match &common.out {
        Some(path) => {
            write_text(path, &text)?;
            print!("{body}");
            if common.json {
                println!();
            } else {
                print_verdict(&verdict);
            }
        }
        None => {
            print!("{text}");
            eprint!("{body}");
            if common.json {
                eprintln!();
            } else {
                for p in &verdict.problems {
                    eprintln!("problem: {p}");
                }
                eprintln!(
                    "{} eps={} N={} n={} m={} {}",
                    kind,
                    format_ratio(&verdict.report.epsilon),
                    fam.funcs(),
                    n,
                    m,
                    if verdict.problems.is_empty() {
                        "PASS"
                    } else {
                        "FAIL"
                    }
                );
            }
        }
    }
    Ok(if verdict.problems.is_empty() { 0 } else { 1 })
}

fn cmd_convert(input: &Path, to: Target, out: Option<&Path>) -> Outcome {
    let text = read_text(input)?;
    let result = match to {
        Target::Family => write_family(&code_to_family(&read_code(&text)?.to_generic()?)?),
        Target::Code => {
            let fc = family_to_code(&read_family(&text)?)?;
            if fc.has_duplicates() {
                eprintln!("note: dropped duplicate columns {:?}", fc.duplicates);
            }
            write_generic_code(&fc.code)
        }
    };
    match out {
        Some(p) => write_text(p, &result)?,
        None => print!("{result}"),
    }
    Ok(0)
}

fn cmd_verify(kind: Kind, file: &Path, budget: u128, json: bool) -> Outcome {
    let fam = read_family(&read_text(file)?)?;
    let v = assess(&fam, kind, budget)?;
    if json {
        println!("{}", verdict_json(&v));
    } else {
        print_verdict(&v);
    }
    Ok(if v.problems.is_empty() { 0 } else { 1 })
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<u64>, Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| fail(2, format!("--{flag}: `{t}` is not an integer")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(fail(2, format!("--{flag}: empty range {s}")));
        }
        if b - a >= 1_000_000 {
            return Err(Error::TooLarge {
                needed: (b - a + 1) as u128,
                budget: 1_000_000,
            }
            .into());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn cmd_sweep(kind: Kind, n: &str, m: &str, eps: &str, out: Option<&Path>) -> Outcome {
    let ns = parse_list("n", n)?;
    let ms = parse_list("m", m)?;
    let grid = eps
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_eps)
        .collect::<Result<Vec<_>, _>>()?;
    let csv = sweep_csv(&sweep(kind, &ns, &ms, &grid)?);
    match out {
        Some(p) => write_text(p, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}
