//! Structured reports. Field order and entry order are fixed so that a
//! report depends only on the configuration.

use bigphase_core::check::{CheckOutcome, Status};
use bigphase_core::{Series, VarWindow};
use serde::Serialize;

use crate::table::fmt_pq;

#[derive(Clone, Debug, Serialize)]
pub struct RunInfo {
    pub model: String,
    pub degree: u32,
    pub max_level: u32,
    pub shift: String,
    pub suites: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OffendingJson {
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component: Option<[u32; 2]>,
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub id: String,
    pub suite: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub validity: String,
    pub instances: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_offending: Option<OffendingJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&CheckOutcome> for CheckJson {
    fn from(o: &CheckOutcome) -> Self {
        let (status, reason) = match &o.status {
            Status::Pass => ("pass", None),
            Status::Fail => ("fail", None),
            Status::Skip(r) => ("skip", Some(r.clone())),
        };
        CheckJson {
            id: o.id.clone(),
            suite: o.suite.clone(),
            status,
            reason,
            validity: o.validity.to_string(),
            instances: o.instances,
            first_offending: o.offending.as_ref().map(|f| OffendingJson {
                instance: f.instance.clone(),
                component: f.component.map(|(l, c)| [l, c]),
                monomial: f.monomial.clone(),
                coefficient: fmt_pq(&f.coefficient),
            }),
            error: o.error.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub run: RunInfo,
    pub notes: Vec<String>,
    pub checks: Vec<CheckJson>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn new(command: &'static str, run: RunInfo, notes: Vec<String>, outcomes: &[CheckOutcome]) -> Self {
        let mut summary = Summary::default();
        for o in outcomes {
            match o.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip(_) => summary.skip += 1,
            }
        }
        VerifyReport { command, run, notes, checks: outcomes.iter().map(CheckJson::from).collect(), summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn text(&self, outcomes: &[CheckOutcome]) -> String {
        let mut s = header(self.command, &self.run, &self.notes);
        for o in outcomes {
            s.push_str(&o.line());
            s.push('\n');
        }
        s.push_str(&format!(
            "summary: {} pass, {} fail, {} skip\n",
            self.summary.pass, self.summary.fail, self.summary.skip
        ));
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesJson {
    pub validity: String,
    pub terms: Vec<TermJson>,
}

impl SeriesJson {
    pub fn new(s: &Series, w: &VarWindow) -> Self {
        SeriesJson {
            validity: s.valid().to_string(),
            terms: s.terms().map(|(m, c)| TermJson { monomial: m.display(w), coefficient: fmt_pq(c) }).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticJson {
    pub name: String,
    pub ok: bool,
    pub validity: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffJson {
    pub monomial: String,
    pub reconstructed: String,
    pub reference: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub reference: String,
    pub validity: String,
    pub diff: Vec<DiffJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantJson {
    /// Descendant levels of the insertions, descending.
    pub levels: Vec<u32>,
    pub value: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub command: &'static str,
    pub run: RunInfo,
    pub notes: Vec<String>,
    /// Length of the Euler relation.
    pub n: usize,
    pub f2: SeriesJson,
    pub psi: Vec<SeriesJson>,
    pub diagnostics: Vec<DiagnosticJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<InvariantJson>>,
}

impl SolveReport {
    pub fn passed(&self) -> bool {
        self.diagnostics.iter().all(|d| d.ok)
            && self.comparison.as_ref().map_or(true, |c| c.diff.is_empty())
            && self.invariants.as_ref().map_or(true, |v| v.iter().all(|i| i.value == i.oracle))
    }

    pub fn text(&self) -> String {
        let mut s = header(self.command, &self.run, &self.notes);
        s.push_str(&format!("euler relation length n = {}\n", self.n));
        s.push_str(&format!("F2 validity {}, {} terms\n", self.f2.validity, self.f2.terms.len()));
        for t in &self.f2.terms {
            s.push_str(&format!("  {} * {}\n", t.coefficient, t.monomial));
        }
        for (i, p) in self.psi.iter().enumerate() {
            let c0 = p.terms.iter().find(|t| t.monomial == "1").map_or("0/1", |t| t.coefficient.as_str());
            s.push_str(&format!("psi_{} constant term {} (validity {})\n", i + 1, c0, p.validity));
        }
        for d in &self.diagnostics {
            s.push_str(&format!(
                "diagnostic {} {} validity={}\n",
                if d.ok { "ok" } else { "FAILED" },
                d.name,
                d.validity
            ));
        }
        if let Some(c) = &self.comparison {
            s.push_str(&format!(
                "comparison with {} through validity {}: {} differences\n",
                c.reference,
                c.validity,
                c.diff.len()
            ));
            for d in &c.diff {
                s.push_str(&format!("  {}: reconstructed {} reference {}\n", d.monomial, d.reconstructed, d.reference));
            }
        }
        if let Some(inv) = &self.invariants {
            s.push_str("recovered genus-2 invariants at the origin:\n");
            for i in inv {
                let mark = if i.value == i.oracle { "" } else { " MISMATCH" };
                s.push_str(&format!("  <{}>_2 = {} (oracle {}){mark}\n", tau_list(&i.levels), i.value, i.oracle));
            }
        }
        s.push_str(if self.passed() { "result: pass\n" } else { "result: fail\n" });
        s
    }
}

fn tau_list(levels: &[u32]) -> String {
    levels.iter().map(|l| format!("tau_{l}")).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct ExportReport {
    pub command: &'static str,
    pub run: RunInfo,
    pub table: String,
    pub records_by_genus: [usize; 3],
    pub verification: VerifyReport,
}

impl ExportReport {
    pub fn text(&self, outcomes: &[CheckOutcome]) -> String {
        let mut s = format!(
            "exported {} with {} genus-0, {} genus-1, {} genus-2 records\n",
            self.table, self.records_by_genus[0], self.records_by_genus[1], self.records_by_genus[2]
        );
        s.push_str(&self.verification.text(outcomes));
        s
    }
}

fn header(command: &str, run: &RunInfo, notes: &[String]) -> String {
    let mut s = format!(
        "{command}: model {} degree {} max_level {} shift {}\n",
        run.model, run.degree, run.max_level, run.shift
    );
    if !run.suites.is_empty() {
        s.push_str(&format!("suites: {}\n", run.suites.join(", ")));
    }
    for n in notes {
        s.push_str(&format!("note: {n}\n"));
    }
    s
}
