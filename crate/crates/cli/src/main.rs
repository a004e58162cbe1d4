mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use klingen_core::chartab::SigmaFamily;
use klingen_core::cosets::enumerate_supp;
use klingen_core::dims::{dim_klingen, DimRequest, Mode, Origin};
use klingen_core::parse::{encode_report, parse_n_list, parse_q_list, parse_suite, SigmaArg};
use klingen_core::verify::{verify, VerifyConfig};
use klingen_core::Error;
use render::{Format, Grid};

const SEED_VAR: &str = "KLINGEN_SEED";

#[derive(Parser)]
#[command(name = "klingen", version, about = "Klingen-invariant dimensions for depth-zero supercuspidals of GSp(4)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// RNG seed for sampling oracles. Defaults to $KLINGEN_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OriginArg {
    K,
    Paramodular,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sum,
    Formula,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sum => Mode::Sum,
            ModeArg::Formula => Mode::Formula,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of the Klingen-fixed space at one level.
    Dim {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// chi5, chi4, x4, x5, nongeneric, typeI or typeII.
        #[arg(long)]
        sigma: String,
        #[arg(long, value_enum, default_value_t = OriginArg::K)]
        origin: OriginArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Support families with counts and per-coset dimensions.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Run oracle suites: counts, rg, chartab, theorem or all.
    Verify {
        suite: String,
        /// Comma-separated field sizes.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        n_max: Option<i64>,
        /// Samples per representative for the rg suite.
        #[arg(long, default_value_t = 500)]
        budget: usize,
    },
    /// Grid of dimensions, one row per level and one column per q.
    Table {
        /// Comma-separated field sizes.
        #[arg(long)]
        q: String,
        /// Levels, e.g. `4`, `1..8` (inclusive) or `1,3,5..7`.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
}

/// 1 usage, 2 mathematical disagreement, 3 resource bound.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Disagreement { .. }
        | Error::MismatchReport(_)
        | Error::NonIntegralResult(_)
        | Error::NonIntegralDimension(_)
        | Error::ValueNotPinned(_)
        | Error::NotPolynomial { .. }
        | Error::NoIrreducible { .. } => 2,
        Error::FieldTooLarge { .. }
        | Error::ClosureTooLarge { .. }
        | Error::GroupTooLarge { .. }
        | Error::TooLarge(_)
        | Error::NonConvergence { .. }
        | Error::PrecisionExhausted
        | Error::PrecisionTooLow { .. }
        | Error::PrecisionInsufficient => 3,
        _ => 1,
    }
}

fn seed(cli: &Cli) -> Result<u64, Error> {
    if let Some(s) = cli.seed {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Usage(format!("{SEED_VAR}=`{v}` is not a seed"))),
        Err(_) => Ok(0),
    }
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.cmd {
        Cmd::Dim {
            q,
            n,
            sigma,
            origin,
            mode,
        } => cmd_dim(cli.format, *q, *n, sigma, *origin, *mode),
        Cmd::Enumerate { q, n } => cmd_enumerate(cli.format, *q, *n),
        Cmd::Verify {
            suite,
            q,
            n_max,
            budget,
        } => {
            let cfg = VerifyConfig {
                qs: q.as_deref().map(parse_q_list).transpose()?,
                n_max: *n_max,
                budget: *budget,
                seed: seed(cli)?,
            };
            cmd_verify(cli.format, suite, &cfg)
        }
        Cmd::Table { q, n, sigma, mode } => cmd_table(cli.format, q, n, sigma, *mode),
    }
}

fn cmd_dim(format: Format, q: u64, n: i64, sigma: &str, origin: OriginArg, mode: ModeArg) -> Result<Outcome, Error> {
    let sigma = sigma.parse::<SigmaArg>()?.resolve(q)?;
    let req = DimRequest {
        q,
        n,
        sigma,
        origin: match origin {
            OriginArg::K => Origin::FromK,
            OriginArg::Paramodular => Origin::FromParamodular,
        },
    };
    let r = dim_klingen(&req, mode.into())?;
    if format == Format::Json {
        return Ok(Outcome::ok(encode_report("dim", &r)? + "\n"));
    }
    let mut g = Grid::new(["family", "count", "per_coset_dim", "subtotal"]);
    for t in &r.by_family {
        g.push([t.family.to_string(), t.count.to_string(), t.per_coset_dim.to_string(), t.subtotal.to_string()]);
    }
    if format == Format::Csv {
        g.push(["total".to_string(), String::new(), String::new(), r.total.to_string()]);
        return Ok(Outcome::ok(g.csv()));
    }
    g.notes.push(format!("q={} n={} sigma={}", r.q, r.n, r.sigma));
    g.notes.push(format!("total: {}", r.total));
    if let Some(f) = r.formula_value {
        g.notes.push(format!("formula: {f}"));
    }
    if let Some(a) = r.agree {
        g.notes.push(format!("agree: {a}"));
    }
    let text = if r.by_family.is_empty() {
        g.notes.join("\n") + "\n"
    } else {
        g.render(format)
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct EnumRow {
    family: String,
    count: i128,
    #[serde(rename = "dim_typeI")]
    dim_type_i: i128,
    #[serde(rename = "dim_typeII")]
    dim_type_ii: i128,
    #[serde(rename = "subtotal_typeI")]
    subtotal_type_i: i128,
    #[serde(rename = "subtotal_typeII")]
    subtotal_type_ii: i128,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct EnumReport {
    q: u64,
    n: i64,
    rows: Vec<EnumRow>,
    note: Option<String>,
}

fn cmd_enumerate(format: Format, q: u64, n: i64) -> Result<Outcome, Error> {
    if klingen_core::ffield::prime_power(q).is_none() {
        return Err(Error::Usage(format!("q = {q} is not a prime power")));
    }
    if n < 0 {
        return Err(Error::Usage("n must be nonnegative".into()));
    }
    let mut rows = Vec::new();
    let mut note = None;
    if n == 0 {
        note = Some("no support at level 0: dimension 0".to_string());
    } else {
        for fc in enumerate_supp(q, n)? {
            let (d1, d2) = (fc.per_coset_dim.eval(q as i128, false), fc.per_coset_dim.eval(q as i128, true));
            rows.push(EnumRow {
                family: fc.family.to_string(),
                count: fc.count,
                dim_type_i: d1,
                dim_type_ii: d2,
                subtotal_type_i: fc.count * d1,
                subtotal_type_ii: fc.count * d2,
            });
        }
    }
    let report = EnumReport { q, n, rows, note };
    if format == Format::Json {
        return Ok(Outcome::ok(encode_report("enumerate", &report)? + "\n"));
    }
    let mut g = Grid::new(["family", "count", "dim_typeI", "dim_typeII", "subtotal_typeI", "subtotal_typeII"]);
    for r in &report.rows {
        g.push([
            r.family.clone(),
            r.count.to_string(),
            r.dim_type_i.to_string(),
            r.dim_type_ii.to_string(),
            r.subtotal_type_i.to_string(),
            r.subtotal_type_ii.to_string(),
        ]);
    }
    g.notes.extend(report.note);
    Ok(Outcome::ok(g.render(format)))
}

fn cmd_verify(format: Format, suite: &str, cfg: &VerifyConfig) -> Result<Outcome, Error> {
    let suites = parse_suite(suite)?;
    let report = verify(&suites, cfg)?;
    let code = if report.passed() { 0 } else { 2 };
    let text = if format == Format::Json {
        encode_report("verify", &report)? + "\n"
    } else {
        let mut g = Grid::new(["suite", "result", "checks", "failures"]);
        for s in &report.suites {
            let result = if s.passed() { "pass" } else { "fail" };
            g.push([s.suite.to_string(), result.into(), s.checks.to_string(), s.failures.len().to_string()]);
        }
        if format != Format::Csv {
            for s in &report.suites {
                g.notes.extend(s.failures.iter().map(|f| format!("{} FAIL: {f}", s.suite)));
                g.notes.extend(s.notes.iter().map(|n| format!("{} note: {n}", s.suite)));
            }
            g.notes.push(if code == 0 { "pass".into() } else { "fail".into() });
        }
        g.render(format)
    };
    Ok(Outcome { text, code })
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TableReport {
    sigma: String,
    qs: Vec<u64>,
    ns: Vec<i64>,
    /// `values[i][j]` is the dimension at `ns[i]`, `qs[j]`.
    values: Vec<Vec<i128>>,
}

/// The piecewise closed form for `(q, σ)`, if there is one.
fn special_case_note(q: u64, sigma: &SigmaFamily) -> Option<String> {
    match (q, sigma) {
        (2, SigmaFamily::Chi5(_)) => Some(
            "q=2: dim = -(n+9)(n+12) + 2^floor((n-2)/4) * {219, 260, 155, 184} for n = 0, 1, 2, 3 mod 4".into(),
        ),
        (3, SigmaFamily::X4(_)) => {
            Some("q=3: dim = -(n+6)^2 + 3^floor((n-2)/4) * {112, 147, 65, 85} for n = 0, 1, 2, 3 mod 4".into())
        }
        _ => None,
    }
}

fn cmd_table(format: Format, q: &str, n: &str, sigma: &str, mode: ModeArg) -> Result<Outcome, Error> {
    let qs = parse_q_list(q)?;
    let ns = parse_n_list(n)?;
    let arg: SigmaArg = sigma.parse()?;
    let sigmas = qs.iter().map(|&q| arg.resolve(q)).collect::<Result<Vec<_>, _>>()?;
    let mut values = Vec::with_capacity(ns.len());
    for &n in &ns {
        let row = qs
            .iter()
            .zip(&sigmas)
            .map(|(&q, s)| dim_klingen(&DimRequest::new(q, n, s.clone()), mode.into()).map(|r| r.total))
            .collect::<Result<Vec<_>, _>>()?;
        values.push(row);
    }
    let report = TableReport {
        sigma: sigma.to_string(),
        qs: qs.clone(),
        ns: ns.clone(),
        values,
    };
    if format == Format::Json {
        return Ok(Outcome::ok(encode_report("table", &report)? + "\n"));
    }
    let mut g = Grid::new(std::iter::once("n".to_string()).chain(qs.iter().map(|q| format!("q={q}"))));
    for (n, row) in ns.iter().zip(&report.values) {
        g.push(std::iter::once(n.to_string()).chain(row.iter().map(|v| v.to_string())));
    }
    if format != Format::Csv {
        g.notes.extend(qs.iter().zip(&sigmas).filter_map(|(&q, s)| special_case_note(q, s)));
    }
    Ok(Outcome::ok(g.render(format)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use klingen_core::parse::decode_report;

    fn json(out: Outcome) -> String {
        assert_eq!(out.code, 0);
        out.text
    }

    #[test]
    fn enumerate_report_round_trips() {
        let text = json(cmd_enumerate(Format::Json, 3, 9).unwrap());
        let r: EnumReport = decode_report("enumerate", &text).unwrap();
        assert_eq!(r.rows.len(), 11);
        assert_eq!(encode_report("enumerate", &r).unwrap() + "\n", text);
    }

    #[test]
    fn table_report_round_trips() {
        let text = json(cmd_table(Format::Json, "2,4", "1..12", "typeII", ModeArg::Both).unwrap());
        let r: TableReport = decode_report("table", &text).unwrap();
        assert_eq!(r.values.len(), 12);
        assert_eq!(encode_report("table", &r).unwrap() + "\n", text);
    }
}
