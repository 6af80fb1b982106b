//! Command-line driver: build or ingest generating functions, run the
//! identity catalog, reconstruct `F₂`, and export tables and reports.
//!
//! Exit codes: 0 all checks pass, 1 a check or comparison fails, 2 a solver
//! precondition fails, 3 input or configuration error.

pub mod report;
pub mod table;

use std::path::{Path, PathBuf};

use bigphase_core::catalog::{self, Samples};
use bigphase_core::check::CheckOutcome;
use bigphase_core::genfun::{build_point_genfun, point_records, unshift_point_series};
use bigphase_core::model::{point_model, validate_model};
use bigphase_core::oracle::dvv_oracle;
use bigphase_core::solver::reconstruct_f2;
use bigphase_core::{Context, Error, GenusDegrees, Series, VarWindow, Q};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use report::{
    Comparison, DiagnosticJson, DiffJson, ExportReport, InvariantJson, RunInfo, SeriesJson, SolveReport, VerifyReport,
};
use table::{fmt_pq, parse_q, GwTable};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

/// An error carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularC | Error::DegenerateBase(_) | Error::Compatibility(_) | Error::Indeterminate(_) => {
                EXIT_SOLVER
            }
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "bigphase", version, about = "Exact verifier and genus-2 solver for descendant generating functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the identity catalog on the selected data.
    Verify(Common),
    /// Reconstruct F2 from F0 and F1 and compare it with a reference.
    SolveF2 {
        #[command(flatten)]
        common: Common,
        /// GW table whose genus-2 records serve as the reference F2.
        #[arg(long, value_name = "PATH")]
        compare: Option<PathBuf>,
    },
    /// Write the GW table and a verification report to --out.
    Export(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinModel {
    Point,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in model.
    #[arg(long, value_enum, conflicts_with = "gw_table")]
    pub model: Option<BuiltinModel>,
    /// GW table to ingest instead of a built-in model.
    #[arg(long, value_name = "PATH")]
    pub gw_table: Option<PathBuf>,
    /// Genus-2 target weighted degree.
    #[arg(long, default_value_t = 6)]
    pub degree: u32,
    /// Highest descendant level; raised automatically if the degree needs more.
    #[arg(long)]
    pub max_level: Option<u32>,
    /// Base point value of t_{0,1}, as an exact fraction.
    #[arg(long, default_value = "1")]
    pub shift: String,
    /// Catalog ids, suite names, `c<N>` tags or `all`; repeatable or comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Directory for report.json and report.txt.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

/// Where the data came from.
enum Source {
    Point,
    Table(Box<GwTable>),
}

/// A resolved configuration with its built context.
struct Prepared {
    source: Source,
    ctx: Context,
    shift: Q,
    degrees: GenusDegrees,
    run: RunInfo,
    notes: Vec<String>,
}

/// Output of one command.
pub struct Outcome {
    pub code: u8,
    pub text: String,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Verify(c) => cmd_verify(&c),
        Command::SolveF2 { common, compare } => cmd_solve_f2(&common, compare.as_deref()),
        Command::Export(c) => cmd_export(&c),
    }
}

fn window(
    degrees: GenusDegrees,
    requested: Option<u32>,
    n: usize,
    notes: &mut Vec<String>,
) -> Result<VarWindow, CliError> {
    let need = degrees.required_max_level();
    let level = match requested {
        Some(l) if l < need => {
            notes.push(format!(
                "max_level raised from {l} to {need}, the lowest level that holds F0 at degree {}",
                degrees.g0
            ));
            need
        }
        Some(l) => l,
        None => need,
    };
    Ok(VarWindow::new(level, n as u32)?)
}

fn prepare(c: &Common, with_f2: bool) -> Result<Prepared, CliError> {
    let shift = parse_q(&c.shift)?;
    let degrees = GenusDegrees::for_target(c.degree);
    let mut notes = Vec::new();
    let (source, model, label) = match &c.gw_table {
        Some(p) => {
            let t = GwTable::read(p)?;
            t.check_degree(c.degree)?;
            let m = t.model.clone();
            (Source::Table(Box::new(t)), m, format!("gw-table {}", p.display()))
        }
        None => (Source::Point, point_model(), String::from("point")),
    };
    let violations = validate_model(&model);
    if !violations.is_empty() {
        return Err(CliError::input(format!("model validation failed: {}", violations.join("; "))));
    }
    let w = window(degrees, c.max_level, model.num_classes, &mut notes)?;
    let gen = match &source {
        Source::Point => build_point_genfun(w, degrees, &shift, with_f2)?,
        Source::Table(t) => {
            let (g, warnings) = t.genfun(w, degrees, &shift)?;
            notes.extend(warnings);
            if with_f2 {
                g
            } else {
                g.without_f2()
            }
        }
    };
    let ctx = Context::new(model, gen)?;
    let run = RunInfo {
        model: label,
        degree: c.degree,
        max_level: w.max_level,
        shift: fmt_pq(&shift),
        suites: if c.suite.is_empty() { vec![String::from("all")] } else { c.suite.clone() },
    };
    Ok(Prepared { source, ctx, shift, degrees, run, notes })
}

fn run_checks(p: &Prepared, filter: &[String], jobs: usize) -> Result<Vec<CheckOutcome>, CliError> {
    let entries = catalog::select(filter)?;
    let samples = Samples::new(&p.ctx)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::input(format!("cannot start worker pool: {e}")))?;
    // Indexed collection keeps catalog order whatever the scheduling.
    Ok(pool.install(|| entries.par_iter().map(|e| e.run(&p.ctx, &samples)).collect()))
}

fn write_out(dir: &Path, json: &impl serde::Serialize, text: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let body = serde_json::to_string_pretty(json).expect("report serializes") + "\n";
    for (name, content) in [("report.json", body.as_str()), ("report.txt", text)] {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify_report(c: &Common, command: &'static str) -> Result<(Prepared, Vec<CheckOutcome>, VerifyReport), CliError> {
    let p = prepare(c, true)?;
    let outcomes = run_checks(&p, &c.suite, c.jobs)?;
    let rep = VerifyReport::new(command, p.run.clone(), p.notes.clone(), &outcomes);
    Ok((p, outcomes, rep))
}

pub fn cmd_verify(c: &Common) -> Result<Outcome, CliError> {
    let (_, outcomes, rep) = verify_report(c, "verify")?;
    let text = rep.text(&outcomes);
    if let Some(dir) = &c.out {
        write_out(dir, &rep, &text)?;
    }
    Ok(Outcome { code: if rep.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED }, text })
}

fn compare(rec: &Series, reference: &Series, label: String, w: &VarWindow) -> Result<Comparison, CliError> {
    let d = rec - reference;
    let mut diff = Vec::new();
    for (m, _) in d.terms() {
        diff.push(DiffJson {
            monomial: m.display(w),
            reconstructed: fmt_pq(&rec.coeff(m)?),
            reference: fmt_pq(&reference.coeff(m)?),
        });
    }
    Ok(Comparison { reference: label, validity: d.valid().to_string(), diff })
}

pub fn cmd_solve_f2(c: &Common, reference: Option<&Path>) -> Result<Outcome, CliError> {
    let mut p = prepare(c, false)?;
    p.run.suites.clear();
    let w = p.ctx.window();
    let rep = reconstruct_f2(&p.ctx)?;
    let comparison = match (reference, &p.source) {
        (Some(path), _) => {
            let t = GwTable::read(path)?;
            if t.model != p.ctx.model {
                return Err(CliError::input(format!("{} describes a different model", path.display())));
            }
            let (g, _) = t.genfun(w, p.degrees, &p.shift)?;
            let f2 = g.f(2).map_err(|_| CliError::input(format!("{} has no genus-2 records", path.display())))?;
            Some(compare(&rep.f2, f2, path.display().to_string(), &w)?)
        }
        (None, Source::Point) => {
            let g = build_point_genfun(w, p.degrees, &p.shift, true)?;
            Some(compare(&rep.f2, g.f(2)?, String::from("point oracle"), &w)?)
        }
        (None, Source::Table(_)) => None,
    };
    let invariants = match p.source {
        Source::Point => Some(
            unshift_point_series(&rep.f2, 2, &p.shift)?
                .into_iter()
                .map(|(levels, v)| InvariantJson { value: fmt_pq(&v), oracle: fmt_pq(&dvv_oracle(&levels, 2)), levels })
                .collect(),
        ),
        Source::Table(_) => None,
    };
    let report = SolveReport {
        command: "solve-f2",
        run: p.run.clone(),
        notes: p.notes.clone(),
        n: rep.relation.n,
        f2: SeriesJson::new(&rep.f2, &w),
        psi: rep.psi.iter().map(|s| SeriesJson::new(s, &w)).collect(),
        diagnostics: rep
            .diagnostics
            .iter()
            .map(|(name, ok, v)| DiagnosticJson { name: name.clone(), ok: *ok, validity: v.to_string() })
            .collect(),
        comparison,
        invariants,
    };
    let text = report.text();
    if let Some(dir) = &c.out {
        write_out(dir, &report, &text)?;
    }
    Ok(Outcome { code: if report.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED }, text })
}

pub fn cmd_export(c: &Common) -> Result<Outcome, CliError> {
    let dir = c.out.as_ref().ok_or_else(|| CliError::input("export needs --out DIR"))?;
    let (p, outcomes, verification) = verify_report(c, "export")?;
    let table = match &p.source {
        Source::Point => GwTable {
            degree: Some(c.degree),
            model: p.ctx.model.clone(),
            records: point_records(p.ctx.window(), p.degrees, true),
        },
        Source::Table(t) => GwTable { degree: Some(c.degree), ..(**t).clone() },
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join("gw_table.json");
    table.write(&path)?;
    let mut by_genus = [0usize; 3];
    for r in &table.records {
        if let Some(n) = by_genus.get_mut(r.genus as usize) {
            *n += 1;
        }
    }
    let rep = ExportReport {
        command: "export",
        run: p.run.clone(),
        table: String::from("gw_table.json"),
        records_by_genus: by_genus,
        verification,
    };
    let text = rep.text(&outcomes);
    write_out(dir, &rep, &text)?;
    Ok(Outcome { code: if rep.verification.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED }, text })
}
