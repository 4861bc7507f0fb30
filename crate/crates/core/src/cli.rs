//! Command-line front end.
//!
//! Exit codes: 0 success, 1 oracle and closed form disagree (or a self-check
//! failed), 2 bad input, 3 materialization cap exceeded, 4 closed form
//! inapplicable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::closedform::{compute_stats, ApplicabilityReport, ClosedFormRegistry};
use crate::corpus;
use crate::error::Error;
use crate::morphism::{Morphism, DEFAULT_CAP};
use crate::oracle::CounterRegistry;
use crate::pattern::GeneralizedPattern;
use crate::verify;
use crate::Count;

pub const EXIT_DISAGREE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_INAPPLICABLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "morphpat", version, about = "Count generalized patterns in words generated by a morphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print phi^n(1).
    Iterate(IterateArgs),
    /// Count a pattern in phi^n(1) with the oracle, the closed form, or both.
    Count(CountArgs),
    /// Print l, d and the internal/external statistics of the images.
    Stats(PatternArgs),
    /// Check that a dashless pattern never straddles two images.
    CheckExternal(PatternArgs),
    /// One row per n: length, oracle, closed form, status.
    Table(TableArgs),
    /// Recompute the built-in examples and invariants.
    VerifyPaper,
}

#[derive(Debug, Args)]
struct MorphismArg {
    /// Morphism file, or `builtin:<name>` for an embedded one.
    #[arg(long, value_name = "FILE")]
    morphism: String,
}

#[derive(Debug, Args)]
struct IterateArgs {
    #[command(flatten)]
    morphism: MorphismArg,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    cap: usize,
}

#[derive(Debug, Args)]
struct PatternArgs {
    #[command(flatten)]
    morphism: MorphismArg,
    #[arg(long, value_name = "PAT")]
    pattern: String,
}

#[derive(Debug, Args)]
struct Strategies {
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    cap: usize,
    /// Oracle counter by name (`auto` picks the fastest that fits).
    #[arg(long, default_value = "auto")]
    counter: String,
    /// Closed form by name (`auto` picks by pattern shape).
    #[arg(long, default_value = "auto")]
    formula: String,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    target: PatternArgs,
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    strategies: Strategies,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    target: PatternArgs,
    #[arg(long, conflicts_with_all = ["from", "to"])]
    n: Option<u32>,
    #[arg(long, requires = "to")]
    from: Option<u32>,
    #[arg(long, requires = "from")]
    to: Option<u32>,
    #[command(flatten)]
    strategies: Strategies,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Closed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Tsv,
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("cap must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Everything a `count` or `table` run needs, resolved and validated.
pub struct RunConfig {
    pub morphism: Morphism,
    pub pattern: GeneralizedPattern,
    pub from: u32,
    pub to: u32,
    pub method: Method,
    pub cap: usize,
    pub format: Format,
    pub counter: String,
    pub formula: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::NotUniform(_) => EXIT_INAPPLICABLE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Output is written only once the command has fully succeeded, or
/// produced a complete result with a nonzero status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };

    let mut buf = String::new();
    let code = match dispatch(cli.command, &mut buf) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let _ = out.write_all(buf.as_bytes());
    code
}

fn dispatch(command: Command, out: &mut String) -> Result<u8, Failure> {
    match command {
        Command::Iterate(a) => cmd_iterate(&load_morphism(&a.morphism.morphism)?, a.n, a.cap, out),
        Command::Count(a) => {
            let config = RunConfig::build(a.target, a.n, a.n, a.strategies, a.format)?;
            cmd_count(&config, out)
        }
        Command::Stats(a) => cmd_stats(&load_morphism(&a.morphism.morphism)?, &parse_pattern(&a.pattern)?, out),
        Command::CheckExternal(a) => {
            cmd_check_external(&load_morphism(&a.morphism.morphism)?, &parse_pattern(&a.pattern)?, out)
        }
        Command::Table(a) => {
            let (from, to) = match (a.n, a.from, a.to) {
                (Some(n), _, _) => (n, n),
                (None, Some(from), Some(to)) => (from, to),
                _ => return Err(Failure::input("table needs --n N or --from A --to B")),
            };
            let config = RunConfig::build(a.target, from, to, a.strategies, a.format)?;
            cmd_table(&config, out)
        }
        Command::VerifyPaper => Ok(cmd_verify_paper(out)),
    }
}

fn load_morphism(source: &str) -> Result<Morphism, Failure> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return corpus::get(name).map(|e| e.morphism).ok_or_else(|| {
            let known: Vec<_> = corpus::names().collect();
            Failure::input(format!("unknown built-in morphism {name:?} (known: {})", known.join(", ")))
        });
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::input(format!("{source}: {e}")))?;
    Morphism::parse(&text).map_err(|e| Failure::input(format!("{source}: {e}")))
}

fn parse_pattern(text: &str) -> Result<GeneralizedPattern, Failure> {
    GeneralizedPattern::parse(text).map_err(Failure::from)
}

impl RunConfig {
    fn build(target: PatternArgs, from: u32, to: u32, s: Strategies, format: Format) -> Result<Self, Failure> {
        if from < 1 || from > to {
            return Err(Failure::input(format!("need 1 <= from <= to, got {from}..{to}")));
        }
        let config = RunConfig {
            morphism: load_morphism(&target.morphism.morphism)?,
            pattern: parse_pattern(&target.pattern)?,
            from,
            to,
            method: s.method,
            cap: s.cap,
            format,
            counter: s.counter,
            formula: s.formula,
        };
        if config.method != Method::Closed && config.counter != "auto" {
            let reg = CounterRegistry::standard();
            let counter = reg.get(&config.counter)?;
            if !counter.supports(&config.pattern) {
                return Err(Failure::input(format!(
                    "counter {} does not handle pattern {}",
                    config.counter, config.pattern
                )));
            }
        }
        if config.method != Method::Oracle && config.formula != "auto" {
            ClosedFormRegistry::standard().get(&config.formula)?;
        }
        Ok(config)
    }

    fn evaluate(&self, n: u32) -> Row {
        let length = match self.morphism.predicted_length(n) {
            Ok(len) => len,
            Err(_) => BigUint::from(self.morphism.length_of(n)),
        };
        let oracle = (self.method != Method::Closed).then(|| {
            let w = self.morphism.iterate(n, self.cap)?;
            let reg = CounterRegistry::standard();
            let counter = if self.counter == "auto" {
                reg.select(&self.pattern).expect("exhaustive handles everything")
            } else {
                reg.get(&self.counter)?
            };
            Ok((counter.name(), counter.count(&self.pattern, &w)))
        });
        let closed = (self.method != Method::Oracle).then(|| {
            let reg = ClosedFormRegistry::standard();
            if self.formula == "auto" {
                reg.count(&self.morphism, &self.pattern, n)
            } else {
                let form = reg.get(&self.formula).expect("checked in build");
                form.evaluate(&self.morphism, &self.pattern, n).map(|c| (form.name(), c))
            }
        });
        Row { n, length, oracle, closed }
    }
}

struct Row {
    n: u32,
    length: Count,
    oracle: Option<Result<(&'static str, Count), Error>>,
    closed: Option<Result<(&'static str, Count), ApplicabilityReport>>,
}

impl Row {
    fn oracle_value(&self) -> Option<&Count> {
        match &self.oracle {
            Some(Ok((_, c))) => Some(c),
            _ => None,
        }
    }

    fn closed_value(&self) -> Option<&Count> {
        match &self.closed {
            Some(Ok((_, c))) => Some(c),
            _ => None,
        }
    }

    fn status(&self) -> &'static str {
        match (self.oracle_value(), self.closed_value()) {
            (Some(a), Some(b)) if a == b => "AGREE",
            (Some(_), Some(_)) => "DISAGREE",
            (Some(_), None) => "ORACLE-ONLY",
            (None, Some(_)) => "CLOSED-ONLY",
            (None, None) => "NONE",
        }
    }

    fn cells(&self) -> [String; 5] {
        let show = |v: Option<&Count>| v.map_or_else(|| "-".to_string(), |c| c.to_string());
        [
            self.n.to_string(),
            self.length.to_string(),
            show(self.oracle_value()),
            show(self.closed_value()),
            self.status().to_string(),
        ]
    }
}

const HEADER: [&str; 5] = ["n", "length", "oracle", "closed", "status"];

fn render_table(rows: &[[String; 5]], format: Format, out: &mut String) {
    match format {
        Format::Tsv => {
            let _ = writeln!(out, "{}", HEADER.join("\t"));
            for r in rows {
                let _ = writeln!(out, "{}", r.join("\t"));
            }
        }
        Format::Plain => {
            let mut widths = HEADER.map(str::len);
            for r in rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> =
                    cells.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
                padded.join("  ")
            };
            let _ = writeln!(out, "{}", line(HEADER.to_vec()));
            for r in rows {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
    }
}

fn cmd_iterate(phi: &Morphism, n: u32, cap: usize, out: &mut String) -> Result<u8, Failure> {
    let word = phi.iterate(n, cap)?;
    let _ = writeln!(out, "{word}");
    Ok(0)
}

fn cmd_count(config: &RunConfig, out: &mut String) -> Result<u8, Failure> {
    let row = config.evaluate(config.from);

    if let Some(Err(e)) = &row.oracle {
        if row.closed_value().is_none() {
            return Err(Failure::from(e.clone()));
        }
    }
    let inapplicable = matches!(row.closed, Some(Err(_)));
    if inapplicable && config.method == Method::Closed {
        let Some(Err(report)) = &row.closed else { unreachable!() };
        let _ = writeln!(out, "closed: inapplicable");
        for r in &report.reasons {
            let _ = writeln!(out, "  {r}");
        }
        return Ok(EXIT_INAPPLICABLE);
    }

    match config.format {
        Format::Tsv => render_table(&[row.cells()], Format::Tsv, out),
        Format::Plain => {
            let _ = writeln!(out, "pattern {}, n = {}, length {}", config.pattern, row.n, row.length);
            match &row.oracle {
                Some(Ok((name, c))) => {
                    let _ = writeln!(out, "oracle: {c} [{name}]");
                }
                Some(Err(e)) => {
                    let _ = writeln!(out, "oracle: - ({e})");
                }
                None => {}
            }
            match &row.closed {
                Some(Ok((name, c))) => {
                    let _ = writeln!(out, "closed: {c} [{name}]");
                }
                Some(Err(report)) => {
                    let _ = writeln!(out, "closed: inapplicable");
                    for r in &report.reasons {
                        let _ = writeln!(out, "  {r}");
                    }
                }
                None => {}
            }
            if config.method == Method::Both {
                let _ = writeln!(out, "{}", row.status());
            }
        }
    }
    Ok(if row.status() == "DISAGREE" { EXIT_DISAGREE } else { 0 })
}

fn cmd_table(config: &RunConfig, out: &mut String) -> Result<u8, Failure> {
    let rows: Vec<Row> = (config.from..=config.to).map(|n| config.evaluate(n)).collect();
    if config.method == Method::Closed {
        if let Some(Row { n, closed: Some(Err(report)), .. }) = rows.iter().find(|r| matches!(r.closed, Some(Err(_)))) {
            return Err(Failure {
                code: EXIT_INAPPLICABLE,
                message: format!("closed form inapplicable at n = {n}:\n{report}"),
            });
        }
    }
    let cells: Vec<[String; 5]> = rows.iter().map(Row::cells).collect();
    render_table(&cells, config.format, out);
    let disagree = rows.iter().any(|r| r.status() == "DISAGREE");
    Ok(if disagree { EXIT_DISAGREE } else { 0 })
}

fn join(values: &[Count]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_stats(phi: &Morphism, pattern: &GeneralizedPattern, out: &mut String) -> Result<u8, Failure> {
    let profile = phi.validate();
    let _ = writeln!(out, "k: {}", phi.k());
    let _ = writeln!(out, "l: {}", profile.ell);
    let _ = writeln!(out, "d: {}", profile.d);
    let _ = writeln!(out, "uniform: {}", if profile.is_valid() { "yes" } else { "no" });
    for v in &profile.violations {
        let _ = writeln!(out, "  {v}");
    }
    if !profile.is_valid() {
        return Ok(EXIT_INAPPLICABLE);
    }
    if !pattern.is_dashed_pair() {
        let s: Vec<Count> = phi.images().iter().map(|x| crate::oracle::count_internal(pattern, x)).collect();
        let _ = writeln!(out, "s: {}", join(&s));
        return Ok(0);
    }
    let stats = compute_stats(phi, pattern)?;
    let _ = writeln!(out, "s: {}", join(&stats.s));
    let _ = writeln!(out, "e: {}", join(&stats.e));
    let _ = writeln!(out, "e_ij:");
    for i in 1..=stats.k() {
        let row: Vec<String> = (1..=stats.k())
            .map(|j| if i == j { "-".to_string() } else { stats.pair(i, j).to_string() })
            .collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let asym = stats.asymmetric_pairs();
    if asym.is_empty() {
        let _ = writeln!(out, "symmetric: yes");
    } else {
        let pairs: Vec<String> = asym.iter().map(|(i, j)| format!("({i},{j})")).collect();
        let _ = writeln!(out, "symmetric: no {}", pairs.join(" "));
    }
    Ok(0)
}

fn cmd_check_external(phi: &Morphism, pattern: &GeneralizedPattern, out: &mut String) -> Result<u8, Failure> {
    let report = crate::closedform::check_no_external(phi, pattern);
    let _ = writeln!(out, "{report}");
    Ok(if report.is_applicable() { 0 } else { EXIT_INAPPLICABLE })
}

fn cmd_verify_paper(out: &mut String) -> u8 {
    let checks = verify::run_all();
    for c in &checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{mark} {}: {}", c.name, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        0
    } else {
        EXIT_DISAGREE
    }
}
