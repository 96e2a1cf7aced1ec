//! Command-line front end: compute, verify and inspect torus-fixed cell
//! decompositions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sheafpave::cellcalc::{poincare, CellList};
use sheafpave::exactpoly::Poly;
use sheafpave::planegeom::hilb_fixed;
use sheafpave::strata::verify::{verify, Check, ExpectedTable, VerifyReport, BETTI_NOTE};
use sheafpave::torusweights::{monomial_weight, monomials_of_degree};
use sheafpave::{compute_space, compute_stratum, ModuliReport, ModuliSpec, StrataError, StratumReport, Witness};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON schema of every document printed with `--format json`.
pub const SCHEMA_JSON: &str = include_str!("../data/output.schema.json");

/// Largest length accepted by `inspect hilb`.
pub const MAX_HILB_LENGTH: u32 = 10;

/// Largest degree accepted by `inspect weights`.
pub const MAX_WEIGHT_DEGREE: u32 = 30;

#[derive(Debug, Parser)]
#[command(name = "sheafpave", version, about = "Torus-fixed loci and their cell decompositions for M(d,r), d <= 5")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Moduli space, written M(d,r).
    #[arg(long, global = true)]
    pub space: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write one JSON line per witness to this file.
    #[arg(long, global = true)]
    pub witnesses: Option<PathBuf>,
    /// Worker threads; the output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Let the advisory comparisons decide the verdict.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cells of the fixed locus of one space, stratum by stratum.
    Compute {
        /// Moduli space, written M(d,r); may also be given with --space.
        target: Option<String>,
    },
    /// Compare computed cells with the reference table.
    Verify {
        /// `all` or a space written M(d,r).
        target: Option<String>,
        /// Expected table to compare against instead of the shipped one.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Listings of fixed subschemes, monomial weights or stratum witnesses.
    Inspect {
        #[command(subcommand)]
        what: Inspect,
    },
}

#[derive(Debug, Subcommand)]
pub enum Inspect {
    /// Fixed subschemes of length n.
    Hilb { n: u32 },
    /// Monomials of degree d with their weights.
    Weights { d: u32 },
    /// Fixed configurations of one stratum of --space.
    Stratum { id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Unsupported(String),
    VerificationFailed,
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<StrataError> for CliError {
    fn from(e: StrataError) -> Self {
        match e {
            e if e.is_unsupported_input() => CliError::Unsupported(e.to_string()),
            StrataError::Parse(_) | StrataError::UnknownStratum { .. } => CliError::Usage(e.to_string()),
            e => CliError::Invariant(e.to_string()),
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Usage(format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Serialize)]
pub struct StratumDoc {
    pub id: String,
    pub description: String,
    pub cells: CellList,
    pub euler: u64,
    pub poincare: String,
    pub details: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceDoc {
    pub space: String,
    pub d: u32,
    pub r: u32,
    pub given_r: i64,
    pub strata: Vec<StratumDoc>,
    pub total: CellList,
    pub euler: u64,
    pub poincare: String,
}

impl SpaceDoc {
    fn new(report: &ModuliReport) -> Self {
        let spec = &report.spec;
        SpaceDoc {
            space: spec.label(),
            d: spec.d,
            r: spec.r,
            given_r: spec.given_r,
            strata: report.strata.iter().map(stratum_doc).collect(),
            total: report.total.clone(),
            euler: report.euler(),
            poincare: report.poincare().to_string(),
        }
    }
}

fn stratum_doc(s: &StratumReport) -> StratumDoc {
    StratumDoc {
        id: s.id.clone(),
        description: s.description.clone(),
        cells: s.cells.clone(),
        euler: s.euler(),
        poincare: poincare(&s.cells).to_string(),
        details: s.details.clone(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationDoc {
    pub passed: bool,
    pub strict: bool,
    pub checks: Vec<Check>,
    pub advisory: Vec<Check>,
    pub note: String,
}

/// Everything one invocation prints.
#[derive(Debug, Clone, Serialize)]
pub struct OutputDocument {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<SpaceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub listing: Option<Vec<Value>>,
    pub witness_file: Option<String>,
}

impl OutputDocument {
    fn new(command: impl Into<String>) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            spaces: Vec::new(),
            verification: None,
            listing: None,
            witness_file: None,
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::VerificationFailed => eprintln!("verification failed"),
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Unsupported(m) => eprintln!("unsupported: {m}"),
                CliError::Invariant(m) => eprintln!("internal invariant violated: {m}"),
            }
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Invariant(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let (text, verdict) = match &cli.command {
        Command::Compute { target } => {
            let space = pick_space(target.as_deref(), cli.space.as_deref())?
                .ok_or_else(|| CliError::Usage("compute needs a space, e.g. M(5,1)".into()))?;
            let spec: ModuliSpec = space.parse()?;
            let report = compute_space(&spec)?;
            let mut doc = OutputDocument::new("compute");
            doc.witness_file = write_witnesses(cli, report.witnesses())?;
            doc.spaces.push(SpaceDoc::new(&report));
            let text = render_compute(&doc, cli.format)?;
            (text, Ok(()))
        }
        Command::Verify { target, expected } => {
            let specs = match pick_space(target.as_deref(), cli.space.as_deref())? {
                None | Some("all") => ModuliSpec::all(),
                Some(s) => vec![s.parse()?],
            };
            let table = match expected {
                None => ExpectedTable::shipped(),
                Some(p) => {
                    let raw = fs::read_to_string(p).map_err(io_error(p))?;
                    ExpectedTable::parse(&raw).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
                }
            };
            let reports = specs.iter().map(compute_space).collect::<Result<Vec<_>, _>>()?;
            let v = verify(&reports, &table);
            let passed = if cli.strict { v.passed_strict() } else { v.passed() };
            let mut doc = OutputDocument::new("verify");
            doc.witness_file = write_witnesses(cli, reports.iter().flat_map(|r| r.witnesses()))?;
            doc.spaces = reports.iter().map(SpaceDoc::new).collect();
            doc.verification = Some(VerificationDoc {
                passed,
                strict: cli.strict,
                checks: v.checks.clone(),
                advisory: v.advisory.clone(),
                note: v.note.clone(),
            });
            let text = render_verify(&doc, &v, cli.format)?;
            (text, if passed { Ok(()) } else { Err(CliError::VerificationFailed) })
        }
        Command::Inspect { what } => {
            let (name, rows) = inspect(what, cli)?;
            let mut doc = OutputDocument::new(name);
            doc.listing = Some(rows);
            let text = render_listing(&doc, cli.format)?;
            (text, Ok(()))
        }
    };
    emit(cli, &text)?;
    verdict
}

fn pick_space<'a>(positional: Option<&'a str>, flag: Option<&'a str>) -> Result<Option<&'a str>, CliError> {
    match (positional, flag) {
        (Some(a), Some(b)) if a != b => Err(CliError::Usage(format!("conflicting spaces {a} and {b}"))),
        (a, b) => Ok(a.or(b)),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(io_error(p)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn write_witnesses<'a>(cli: &Cli, ws: impl Iterator<Item = &'a Witness>) -> Result<Option<String>, CliError> {
    let Some(path) = &cli.witnesses else { return Ok(None) };
    let mut buf = String::new();
    for w in ws {
        buf.push_str(&serde_json::to_string(w).map_err(|e| CliError::Invariant(e.to_string()))?);
        buf.push('\n');
    }
    fs::write(path, buf).map_err(io_error(path))?;
    Ok(Some(path.display().to_string()))
}

fn inspect(what: &Inspect, cli: &Cli) -> Result<(String, Vec<Value>), CliError> {
    match what {
        Inspect::Hilb { n } => {
            if *n > MAX_HILB_LENGTH {
                return Err(CliError::Usage(format!("length {n} exceeds {MAX_HILB_LENGTH}")));
            }
            let rows = hilb_fixed(*n).into_iter().map(|z| json!(z)).collect();
            Ok((format!("inspect hilb {n}"), rows))
        }
        Inspect::Weights { d } => {
            if *d > MAX_WEIGHT_DEGREE {
                return Err(CliError::Usage(format!("degree {d} exceeds {MAX_WEIGHT_DEGREE}")));
            }
            let rows = monomials_of_degree(*d)
                .into_iter()
                .map(|e| {
                    let w = monomial_weight(&e).map_err(|e| CliError::Invariant(e.to_string()))?;
                    Ok(json!({ "monomial": Poly::monomial(e).to_string(), "weight": [w.a, w.b] }))
                })
                .collect::<Result<_, CliError>>()?;
            Ok((format!("inspect weights {d}"), rows))
        }
        Inspect::Stratum { id } => {
            let space = cli.space.as_deref().ok_or_else(|| CliError::Usage("inspect stratum needs --space".into()))?;
            let spec: ModuliSpec = space.parse()?;
            let report = compute_stratum(&spec, id)?;
            Ok((format!("inspect stratum {id} of {}", spec.label()), configurations(&report)))
        }
    }
}

/// Witnesses grouped by fixed configuration, dropping the per-weight
/// fields, in order of first appearance.
fn configurations(report: &StratumReport) -> Vec<Value> {
    let mut groups: Vec<(Value, CellList, usize)> = Vec::new();
    for w in &report.witnesses {
        let mut key = w.data.clone();
        if let Value::Object(m) = &mut key {
            m.remove("weight");
            m.remove("sections");
        }
        match groups.iter_mut().find(|(k, _, _)| *k == key) {
            Some((_, cells, n)) => {
                *cells += &w.cells;
                *n += 1;
            }
            None => groups.push((key, w.cells.clone(), 1)),
        }
    }
    groups
        .into_iter()
        .map(|(config, cells, n)| {
            json!({ "configuration": config, "cells": cells, "poincare": poincare(&cells).to_string(), "witnesses": n })
        })
        .collect()
}

fn to_json(doc: &OutputDocument) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| CliError::Invariant(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Invariant(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invariant(e.to_string()))
}

const CELL_COLUMNS: [&str; 3] = ["points", "A^1", "A^2"];

fn cell_columns(c: &CellList) -> Vec<String> {
    (0..CELL_COLUMNS.len() as u32).map(|d| c.count(d).to_string()).collect()
}

fn render_compute(doc: &OutputDocument, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut rows = vec![["space", "stratum", "description", "points", "lines", "planes", "euler", "poincare"]
                .map(String::from)
                .to_vec()];
            for s in &doc.spaces {
                rows.extend(space_csv_rows(s));
            }
            csv_string(rows)
        }
        Format::Markdown => {
            let mut out = String::new();
            for s in &doc.spaces {
                out.push_str(&space_markdown(s));
            }
            Ok(out)
        }
    }
}

fn space_csv_rows(s: &SpaceDoc) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let row = |id: &str, desc: &str, cells: &CellList, euler: u64, p: &str| {
        let mut r = vec![s.space.clone(), id.to_string(), desc.to_string()];
        r.extend(cell_columns(cells));
        r.push(euler.to_string());
        r.push(p.to_string());
        r
    };
    for st in &s.strata {
        rows.push(row(&st.id, &st.description, &st.cells, st.euler, &st.poincare));
    }
    rows.push(row("total", "", &s.total, s.euler, &s.poincare));
    rows
}

fn space_markdown(s: &SpaceDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## {}\n", s.space);
    if s.given_r != i64::from(s.r) {
        let _ = writeln!(out, "Requested as M({},{}).\n", s.d, s.given_r);
    }
    let _ = writeln!(out, "| Stratum | Description | {} | Euler |", CELL_COLUMNS.join(" | "));
    let _ = writeln!(out, "|---|---|{}---|", "---:|".repeat(CELL_COLUMNS.len()));
    for st in &s.strata {
        let _ = writeln!(out, "| {} | {} | {} | {} |", st.id, st.description, cell_columns(&st.cells).join(" | "), st.euler);
    }
    let _ = writeln!(out, "| total | | {} | {} |\n", cell_columns(&s.total).join(" | "), s.euler);
    let _ = writeln!(out, "Fixed locus: {}", s.poincare);
    let _ = writeln!(out, "Euler number: {}\n", s.euler);
    out
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_verify(doc: &OutputDocument, v: &VerifyReport, format: Format) -> Result<String, CliError> {
    let passed = doc.verification.as_ref().is_some_and(|x| x.passed);
    let strict = doc.verification.as_ref().is_some_and(|x| x.strict);
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut rows = vec![["space", "item", "expected", "computed", "verdict", "advisory"].map(String::from).to_vec()];
            for (c, advisory) in v.checks.iter().map(|c| (c, false)).chain(v.advisory.iter().map(|c| (c, true))) {
                rows.push(vec![
                    c.space.clone(),
                    c.item.clone(),
                    c.expected.clone(),
                    c.computed.clone(),
                    verdict(c.pass).into(),
                    advisory.to_string(),
                ]);
            }
            csv_string(rows)
        }
        Format::Markdown => {
            let mut out = String::from("# Verification\n\n");
            let _ = writeln!(out, "| Space | {} | Euler | Verdict |", CELL_COLUMNS.join(" | "));
            let _ = writeln!(out, "|---|{}---:|---|", "---:|".repeat(CELL_COLUMNS.len()));
            for s in &doc.spaces {
                let ok = v.checks.iter().filter(|c| c.space == s.space).all(|c| c.pass);
                let _ = writeln!(out, "| {} | {} | {} | {} |", s.space, cell_columns(&s.total).join(" | "), s.euler, verdict(ok));
            }
            out.push_str("\n## Checks\n\n");
            for c in &v.checks {
                let _ = writeln!(out, "- {c}");
            }
            if !v.advisory.is_empty() {
                let role = if strict { "counted in this strict run" } else { "counted only with --strict" };
                let _ = writeln!(out, "\n## Advisory ({role})\n");
                for c in &v.advisory {
                    let _ = writeln!(out, "- {c}");
                }
            }
            let _ = writeln!(out, "\n{BETTI_NOTE}\n\nResult: {}", verdict(passed));
            Ok(out)
        }
    }
}

fn render_listing(doc: &OutputDocument, format: Format) -> Result<String, CliError> {
    let rows = doc.listing.as_deref().unwrap_or_default();
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut out = vec![vec!["index".to_string(), "row".to_string()]];
            for (i, r) in rows.iter().enumerate() {
                out.push(vec![(i + 1).to_string(), r.to_string()]);
            }
            csv_string(out)
        }
        Format::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "# {}\n\n{} rows\n\n| # | Row |\n|---:|---|", doc.command, rows.len());
            for (i, r) in rows.iter().enumerate() {
                let _ = writeln!(out, "| {} | `{}` |", i + 1, r);
            }
            Ok(out)
        }
    }
}
