//! The `psibar` command line: argument parsing, dispatch and output.
//!
//! Every number printed here comes straight from a library call. Output
//! goes to a [`CommandResult`] rather than the terminal so that the whole
//! front end can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{big_d, lambda_additive, ArithFn};
use crate::atlas::{build_sieve, class_members, g_u128, largest_odd_b, section_of, SieveTable};
use crate::density::{t_witness, DensityContext, DensityRow, TWitness, MAX_DENSITY_LIMIT};
use crate::error::{Error, Result};
use crate::mersenne::{bound_report, MersennePair};
use crate::rational::Rational;
use crate::report::VerificationReport;
use crate::suites::{classes_suite, density_suite, mersenne_suite, pow2, white_suite};
use crate::{sieve_file, Natural};

/// Largest number of values `eval` accepts in one range.
pub const MAX_EVAL_RANGE: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

/// What a command produced: the exit code plus its stdout and stderr text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        Self { exit_code: EXIT_OK, stdout, stderr: String::new() }
    }
}

/// Exit code for a library error.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Format(_) | Error::Io(_) => EXIT_USAGE,
        Error::Capacity(_) | Error::InsufficientSieve { .. } | Error::TrajectoryCap { .. } => {
            EXIT_CAPACITY
        }
        Error::Inconsistent(_) | Error::Exhausted(_) => EXIT_VERIFICATION,
    }
}

#[derive(Parser, Debug)]
#[command(name = "psibar", version, about = "Iterates of the modified Dedekind psi function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvalFn {
    Psibar,
    Psi,
    Phi,
    Lambda,
    Bigd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Classes,
    Density,
    Mersenne,
    White,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate psibar, psi, phi, lambda or D at one n or an inclusive range a..b.
    Eval {
        #[arg(long = "fn", value_enum)]
        function: EvalFn,
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Tabulate D over 1..=limit and optionally save it.
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List the members of class k.
    Classes {
        #[arg(long)]
        k: u64,
        /// Sieve file; without one, a table reaching 2^(k+1) is built.
        #[arg(long)]
        sieve: Option<PathBuf>,
        #[arg(long)]
        sections: bool,
        #[arg(long)]
        extremes: bool,
        #[arg(long)]
        largest_odd: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        kmax: u64,
        /// Table size; defaults to 2^(kmax+1) for classes and mersenne and
        /// to 10^6 for density.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Density rows b_c(x) / pi(x) and the T(c) witness.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Comma-separated ascending list of x values.
        #[arg(long)]
        xs: Option<String>,
        #[arg(long)]
        witness: bool,
        /// Upper bound on the witness search.
        #[arg(long, default_value = "1000000000000000000")]
        cap: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Mersenne witness and lower bound for B(k).
    Bound {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        sieve: Option<PathBuf>,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandResult::ok(text)
            } else {
                CommandResult { exit_code: code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(result) => result,
        Err(e) => CommandResult {
            exit_code: exit_code_for(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(command: Command) -> Result<CommandResult> {
    match command {
        Command::Eval { function, n, format } => cmd_eval(function, &n, format),
        Command::Sieve { limit, out, format } => cmd_sieve(limit, out, format),
        Command::Classes { k, sieve, sections, extremes, largest_odd, format } => {
            cmd_classes(k, sieve, sections, extremes, largest_odd, format)
        }
        Command::Verify { suite, kmax, limit, c, format } => {
            cmd_verify(suite, kmax, limit, &c, format)
        }
        Command::Density { c, xs, witness, cap, format } => {
            cmd_density(&c, xs.as_deref(), witness, &cap, format)
        }
        Command::Bound { p, q, k, sieve } => cmd_bound(p, q, k, sieve),
    }
}

fn parse_natural(s: &str) -> Result<Natural> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Domain(format!("not a positive integer: {s:?}")));
    }
    let n = Natural::from_str(s).map_err(|e| Error::Domain(format!("{s:?}: {e}")))?;
    if n == Natural::default() {
        return Err(Error::Domain("n must be positive".into()));
    }
    Ok(n)
}

/// `n` or the inclusive range `a..b`.
fn parse_range(s: &str) -> Result<Vec<Natural>> {
    let Some((a, b)) = s.split_once("..") else {
        return Ok(vec![parse_natural(s)?]);
    };
    let (a, b) = (parse_natural(a)?, parse_natural(b)?);
    if a > b {
        return Err(Error::Domain(format!("empty range {s:?}")));
    }
    let len = (&b - &a).to_u64().filter(|&l| l < MAX_EVAL_RANGE);
    if len.is_none() {
        return Err(Error::Capacity(format!("ranges are limited to {MAX_EVAL_RANGE} values")));
    }
    let mut out = Vec::new();
    let mut n = a;
    while n <= b {
        out.push(n.clone());
        n += 1u32;
    }
    Ok(out)
}

#[derive(Serialize)]
struct EvalRow {
    #[serde(serialize_with = "decimal")]
    n: Natural,
    #[serde(serialize_with = "decimal")]
    value: Natural,
    class: Option<u64>,
    section: Option<String>,
}

fn decimal<S: serde::Serializer>(n: &Natural, s: S) -> std::result::Result<S::Ok, S::Error> {
    // u64 values stay JSON numbers; wider ones become strings
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.collect_str(n),
    }
}

fn eval_one(function: EvalFn, n: &Natural) -> Result<EvalRow> {
    let (value, class, section) = match function {
        EvalFn::Psibar => (ArithFn::PsiBar.apply(n)?, None, None),
        EvalFn::Psi => (ArithFn::Psi.apply(n)?, None, None),
        EvalFn::Phi => (ArithFn::Phi.apply(n)?, None, None),
        EvalFn::Bigd => (BigUint::from(big_d(n)?), None, None),
        EvalFn::Lambda => {
            let lam = lambda_additive(n)?;
            let section = section_of(n, lam)?;
            (BigUint::from(lam), Some(lam), Some(section.to_string()))
        }
    };
    Ok(EvalRow { n: n.clone(), value, class, section })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_eval(function: EvalFn, n: &str, format: Format) -> Result<CommandResult> {
    let ns = parse_range(n)?;
    let rows: Vec<EvalRow> = ns.iter().map(|n| eval_one(function, n)).collect::<Result<_>>()?;
    let out = match format {
        Format::Json if rows.len() == 1 => to_json(&rows[0]),
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows)?,
        Format::Plain => {
            let mut s = String::new();
            for r in &rows {
                match (&r.class, &r.section) {
                    (Some(c), Some(sec)) => writeln!(s, "{} {} class {c} section {sec}", r.n, r.value),
                    _ => writeln!(s, "{} {}", r.n, r.value),
                }
                .unwrap();
            }
            s
        }
    };
    Ok(CommandResult::ok(out))
}

fn cmd_sieve(limit: u64, out: Option<PathBuf>, format: Format) -> Result<CommandResult> {
    let table = build_sieve(limit)?;
    if let Some(path) = &out {
        sieve_file::save(&table, path)?;
    }
    let summary = json!({
        "limit": table.limit(),
        "checksum": table.checksum(),
        "path": out.as_ref().map(|p| p.display().to_string()),
    });
    let text = match format {
        Format::Json => to_json(&summary),
        Format::Csv => format!("limit,checksum\n{},{}\n", table.limit(), table.checksum()),
        Format::Plain => format!("limit {} checksum {}\n", table.limit(), table.checksum()),
    };
    Ok(CommandResult::ok(text))
}

fn table_reaching(sieve: Option<PathBuf>, e: u64) -> Result<SieveTable> {
    match sieve {
        Some(path) => sieve_file::load(&path),
        None => build_sieve(pow2(e)?),
    }
}

#[derive(Serialize)]
struct ClassExtremes {
    g: Option<u128>,
    two_g: Option<u128>,
    min_odd: Option<u64>,
    min_even: Option<u64>,
    max_odd: Option<u64>,
    max_even: Option<u64>,
    largest_odd: Option<u64>,
    two_pow_k_plus_1: Value,
}

fn cmd_classes(
    k: u64,
    sieve: Option<PathBuf>,
    sections: bool,
    extremes: bool,
    largest_odd: bool,
    format: Format,
) -> Result<CommandResult> {
    if largest_odd && k == 1 {
        return Err(Error::Domain("class 1 contains no odd numbers".into()));
    }
    let table = table_reaching(sieve, k + 1)?;
    let result = class_members(&table, k)?;
    let b = if largest_odd || (extremes && k != 1 && table.covers_pow2(k.min(63) as u32)) {
        Some(largest_odd_b(&table, k)?)
    } else {
        None
    };
    let ext = (extremes || largest_odd).then(|| {
        let gk = (k >= 2).then(|| g_u128(k)).flatten();
        ClassExtremes {
            g: gk,
            two_g: gk.and_then(|g| g.checked_mul(2)),
            min_odd: result.extremes.min_odd,
            min_even: result.extremes.min_even,
            max_odd: result.extremes.max_odd,
            max_even: result.extremes.max_even,
            largest_odd: b,
            two_pow_k_plus_1: match 1u128.checked_shl(k as u32 + 1).filter(|_| k < 127) {
                Some(v) => json!(v),
                None => json!((BigUint::from(1u32) << (k as usize + 1)).to_string()),
            },
        }
    });
    let members: Vec<Value> = result
        .members
        .iter()
        .map(|m| {
            if sections {
                json!({ "n": m.n, "section": m.section.to_string() })
            } else {
                json!(m.n)
            }
        })
        .collect();
    let text = match format {
        Format::Json => to_json(&json!({
            "k": k,
            "members": members,
            "extremes": ext,
            "complete": result.complete,
        })),
        Format::Csv => {
            let mut s = String::from(if sections { "n,section\n" } else { "n\n" });
            for m in &result.members {
                if sections {
                    writeln!(s, "{},{}", m.n, m.section).unwrap();
                } else {
                    writeln!(s, "{}", m.n).unwrap();
                }
            }
            s
        }
        Format::Plain => {
            let items: Vec<String> = result
                .members
                .iter()
                .map(|m| if sections { format!("{}:{}", m.n, m.section) } else { m.n.to_string() })
                .collect();
            let mut s = format!("class {k}: {}\n", items.join(" "));
            if let Some(e) = &ext {
                writeln!(s, "extremes: {}", serde_json::to_string(e).unwrap()).unwrap();
            }
            if !result.complete {
                s.push_str("incomplete: the sieve stops below 2^(k+1)\n");
            }
            s
        }
    };
    Ok(CommandResult::ok(text))
}

fn run_suite(suite: Suite, kmax: u64, limit: Option<u64>, c: Rational) -> Result<Vec<(&'static str, VerificationReport)>> {
    let class_table = |limit: Option<u64>| -> Result<SieveTable> {
        build_sieve(match limit {
            Some(l) => l,
            None => pow2(kmax + 1)?,
        })
    };
    Ok(match suite {
        Suite::Classes => vec![("classes", classes_suite(&class_table(limit)?, kmax)?)],
        Suite::Mersenne => vec![("mersenne", mersenne_suite(&class_table(limit)?, kmax)?)],
        Suite::Density => vec![("density", density_suite(c, limit.unwrap_or(1_000_000))?)],
        Suite::White => vec![("white", white_suite(1000, 6)?)],
        Suite::All => {
            let table = class_table(limit)?;
            vec![
                ("classes", classes_suite(&table, kmax)?),
                ("density", density_suite(c, limit.unwrap_or(1_000_000))?),
                ("mersenne", mersenne_suite(&table, kmax)?),
                ("white", white_suite(1000, 6)?),
            ]
        }
    })
}

fn cmd_verify(
    suite: Suite,
    kmax: u64,
    limit: Option<u64>,
    c: &str,
    format: Format,
) -> Result<CommandResult> {
    let c: Rational = c.parse()?;
    let reports = run_suite(suite, kmax, limit, c)?;
    let passed = reports.iter().all(|(_, r)| r.all_passed());
    let text = match format {
        Format::Json => {
            let suites: Vec<Value> = reports
                .iter()
                .map(|(name, r)| {
                    let mut v = serde_json::to_value(r).unwrap();
                    v["suite"] = json!(name);
                    v["passed"] = json!(r.all_passed());
                    v
                })
                .collect();
            to_json(&json!({ "passed": passed, "suites": suites }))
        }
        Format::Csv => {
            let mut s = String::from("suite,claim,passed,checked,counterexample,note\n");
            let mut w = csv::Writer::from_writer(Vec::new());
            for (name, r) in &reports {
                for cl in &r.claims {
                    w.write_record([
                        name.to_string(),
                        cl.name.clone(),
                        cl.passed.to_string(),
                        cl.checked.to_string(),
                        cl.counterexample.clone().unwrap_or_default(),
                        cl.note.clone().unwrap_or_default(),
                    ])
                    .map_err(|e| Error::Format(e.to_string()))?;
                }
            }
            let body = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
            s.push_str(&String::from_utf8(body).unwrap());
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for (name, r) in &reports {
                for cl in &r.claims {
                    let mark = if cl.passed { "PASS" } else { "FAIL" };
                    writeln!(s, "{mark} [{name}] {} ({} checked)", cl.name, cl.checked).unwrap();
                    if let Some(x) = &cl.counterexample {
                        writeln!(s, "    counterexample: {x}").unwrap();
                    }
                    if let Some(x) = &cl.note {
                        writeln!(s, "    {x}").unwrap();
                    }
                }
                for b in &r.largest_odd {
                    writeln!(s, "    B({}) = {}{}", b.k, b.b, if b.prime { " (prime)" } else { "" })
                        .unwrap();
                }
            }
            s
        }
    };
    Ok(CommandResult {
        exit_code: if passed { EXIT_OK } else { EXIT_VERIFICATION },
        stdout: text,
        stderr: String::new(),
    })
}

#[derive(Serialize)]
struct RowOut {
    x: u64,
    b_c: u64,
    pi: u64,
    ratio: String,
    ratio_decimal: String,
}

impl From<&DensityRow> for RowOut {
    fn from(r: &DensityRow) -> Self {
        Self {
            x: r.x,
            b_c: r.b_c,
            pi: r.pi_x,
            ratio: r.ratio(),
            ratio_decimal: format!("{:.6}", r.ratio_f64()),
        }
    }
}

#[derive(Serialize)]
struct WitnessOut {
    c: String,
    k: u64,
    ell: u64,
    omega: String,
}

impl WitnessOut {
    fn new(c: Rational, w: &TWitness) -> Self {
        Self { c: c.to_string(), k: w.k, ell: w.ell, omega: w.omega.to_string() }
    }
}

fn parse_xs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            let x = x.trim();
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Domain(format!("bad x value {x:?}")));
            }
            x.parse::<u64>()
                .map_err(|_| Error::Capacity(format!("x = {x} exceeds {MAX_DENSITY_LIMIT}")))
        })
        .collect()
}

fn cmd_density(
    c: &str,
    xs: Option<&str>,
    witness: bool,
    cap: &str,
    format: Format,
) -> Result<CommandResult> {
    let c: Rational = c.parse()?;
    if xs.is_none() && !witness {
        return Err(Error::Domain("nothing to do: give --xs, --witness or both".into()));
    }
    let rows: Vec<RowOut> = match xs {
        Some(s) => {
            let xs = parse_xs(s)?;
            let top = xs.iter().copied().max().unwrap_or(2);
            let ctx = DensityContext::new(top)?;
            ctx.density_table(c, &xs)?.iter().map(RowOut::from).collect()
        }
        None => Vec::new(),
    };
    let found = if witness {
        let cap = parse_natural(cap)?;
        Some(WitnessOut::new(c, &t_witness(c, &cap)?))
    } else {
        None
    };
    let text = match format {
        Format::Json => to_json(&json!({ "c": c.to_string(), "rows": rows, "witness": found })),
        Format::Csv => {
            let mut s = String::new();
            if xs.is_some() {
                s.push_str(&to_csv(&rows)?);
            }
            if let Some(w) = &found {
                if !s.is_empty() {
                    s.push('\n');
                }
                s.push_str(&to_csv(std::slice::from_ref(w))?);
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for r in &rows {
                writeln!(s, "x {} b_c {} pi {} ratio {} ({})", r.x, r.b_c, r.pi, r.ratio, r.ratio_decimal)
                    .unwrap();
            }
            if let Some(w) = &found {
                writeln!(s, "witness {} (k {}, l {})", w.omega, w.k, w.ell).unwrap();
            }
            s
        }
    };
    Ok(CommandResult::ok(text))
}

fn cmd_bound(p: u32, q: u32, k: u64, sieve: Option<PathBuf>) -> Result<CommandResult> {
    let pair = MersennePair::new(p, q)?;
    let table = sieve.map(|path| sieve_file::load(&path)).transpose()?;
    let report = bound_report(k, pair, table.as_ref())?;
    Ok(CommandResult {
        exit_code: if report.verified() { EXIT_OK } else { EXIT_VERIFICATION },
        stdout: to_json(&report),
        stderr: String::new(),
    })
}
