//! Runs a selection of checks on a model and renders the outcome as text or
//! as a versioned JSON document.
//!
//! The JSON document has two top-level sections: `comparable`, which is a
//! pure function of the model, the selection and the engine version, and
//! `timing`, which is not.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::brst::{self, Model, ModelError, Status, Verdict};
use crate::graded::GradedPoly;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_FORMAT_VERSION: u32 = 1;

/// The individual check groups that can be selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    EulerLagrange,
    Noether,
    Stages,
    KtNilpotency,
    Gauge,
    Extended,
    Brst,
    Proper,
    Master,
    Suite,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::EulerLagrange,
        CheckKind::Noether,
        CheckKind::Stages,
        CheckKind::KtNilpotency,
        CheckKind::Gauge,
        CheckKind::Extended,
        CheckKind::Brst,
        CheckKind::Proper,
        CheckKind::Master,
        CheckKind::Suite,
    ];

    /// Everything except the Euler–Lagrange dump.
    pub fn default_selection() -> Vec<CheckKind> {
        CheckKind::ALL.into_iter().filter(|k| *k != CheckKind::EulerLagrange).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::EulerLagrange => "euler-lagrange",
            CheckKind::Noether => "noether",
            CheckKind::Stages => "stages",
            CheckKind::KtNilpotency => "kt",
            CheckKind::Gauge => "gauge",
            CheckKind::Extended => "extended",
            CheckKind::Brst => "brst",
            CheckKind::Proper => "proper",
            CheckKind::Master => "master",
            CheckKind::Suite => "suite",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            CheckKind::EulerLagrange => "Euler–Lagrange components of L",
            CheckKind::Noether => "Noether identities of the stage-0 generators",
            CheckKind::Stages => "higher-stage Noether identities",
            CheckKind::KtNilpotency => "nilpotency of the Koszul–Tate operator",
            CheckKind::Gauge => "gauge-symmetry conditions of the gauge operator",
            CheckKind::Extended => "assembly of L_e",
            CheckKind::Brst => "nilpotency of the BRST operator u_E",
            CheckKind::Proper => "assembly and gradings of the proper solution L_E",
            CheckKind::Master => "master equation for L_E",
            CheckKind::Suite => "the four equivalent master-equation conditions on L_E",
        }
    }
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown check `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

/// Parses a comma-separated list of check names.
pub fn parse_selection(s: &str) -> Result<Vec<CheckKind>, String> {
    let mut out: Vec<CheckKind> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(CheckKind::from_str)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenderedPoly {
    pub label: String,
    pub value: String,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<RenderedPoly>,
    /// Informational output such as Euler–Lagrange components.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<RenderedPoly>,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSummary {
    pub name: String,
    pub description: String,
    pub base_dim: usize,
    pub fields: usize,
    pub ghosts: usize,
    pub antifields: usize,
    pub reducibility: Option<u32>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub model: ModelSummary,
    pub selection: Vec<CheckKind>,
    pub records: Vec<CheckRecord>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub not_evaluated: usize,
}

impl CheckReport {
    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.records {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::NotEvaluated => t.not_evaluated += 1,
            }
        }
        t
    }

    /// No selected check failed.
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

fn render(m: &Model, label: impl Into<String>, p: &GradedPoly) -> RenderedPoly {
    RenderedPoly {
        label: label.into(),
        value: m.render_poly(p),
        terms: p.len(),
    }
}

fn record(m: &Model, id: impl Into<String>, v: Verdict) -> CheckRecord {
    CheckRecord {
        id: id.into(),
        status: v.status,
        note: v.note,
        witnesses: v.witnesses.iter().map(|w| render(m, w.label.clone(), &w.value)).collect(),
        details: Vec::new(),
        elapsed_ms: 0.0,
    }
}

fn error_record(id: impl Into<String>, e: &ModelError) -> CheckRecord {
    CheckRecord {
        id: id.into(),
        status: Status::Fail,
        note: Some(format!("configuration error: {e}")),
        witnesses: Vec::new(),
        details: Vec::new(),
        elapsed_ms: 0.0,
    }
}

/// Identities hold vacuously when the Lagrangian is zero but generators are
/// present; such checks are reported as not evaluated.
fn placeholder_lagrangian(m: &Model) -> bool {
    m.lagrangian.is_zero() && m.generators().any(|(_, g)| !g.density.is_zero())
}

fn run_kind(m: &Model, kind: CheckKind) -> Vec<CheckRecord> {
    let id = kind.name();
    let result: Result<Vec<CheckRecord>, ModelError> = (|| {
        Ok(match kind {
            CheckKind::EulerLagrange => {
                let el = brst::model_euler_lagrange(m);
                let mut r = record(m, id, Verdict::pass());
                r.details = el.components.iter().map(|(f, p)| render(m, format!("E[{}]", f.name), p)).collect();
                vec![r]
            }
            CheckKind::Noether => {
                let placeholder = placeholder_lagrangian(m);
                brst::check_noether_identities(m)?
                    .into_iter()
                    .map(|(g, v)| {
                        let v = if placeholder {
                            Verdict::not_evaluated("the Lagrangian is zero; the identity holds vacuously")
                        } else {
                            v
                        };
                        record(m, format!("noether/{g}"), v)
                    })
                    .collect()
            }
            CheckKind::Stages => {
                let mut out = Vec::new();
                for k in 1..m.stages.len() as u32 {
                    for (a, v) in brst::check_stage_identity(m, k)? {
                        out.push(record(m, format!("stages/{k}/{a}"), v));
                    }
                }
                out
            }
            CheckKind::KtNilpotency => {
                let kt = brst::build_kt_operator(m)?;
                vec![record(m, id, brst::nilpotency_verdict(&kt))]
            }
            CheckKind::Gauge => {
                let u = brst::build_gauge_operator(m)?;
                let placeholder = placeholder_lagrangian(m);
                let mut out: Vec<CheckRecord> = brst::check_gauge_symmetry_conditions(m, &u)?
                    .into_iter()
                    .map(|(s, v)| {
                        let v = if placeholder && s == "stage-0" {
                            Verdict::not_evaluated("the Lagrangian is zero; invariance holds vacuously")
                        } else {
                            v
                        };
                        record(m, format!("gauge/{s}"), v)
                    })
                    .collect();
                let mut r = record(m, "gauge/operator", Verdict::pass());
                r.details = u.total.components().iter().map(|(f, p)| render(m, format!("u[{}]", f.name), p)).collect();
                out.push(r);
                out
            }
            CheckKind::Extended => {
                let le = brst::build_extended_lagrangian(m);
                let mut r = record(m, "extended/consistency", brst::check_lagrangian_consistency(m, false)?);
                r.details = vec![render(m, "L_e", &le)];
                vec![r]
            }
            CheckKind::Brst => {
                let ue = brst::build_brst_operator(m)?;
                vec![record(m, id, brst::nilpotency_verdict(&ue))]
            }
            CheckKind::Proper => {
                let l_e = brst::build_proper_solution(m)?;
                let graded = matches!(
                    l_e.total_ghost_number(),
                    crate::graded::Homogeneity::Zero | crate::graded::Homogeneity::Pure(0)
                ) && matches!(
                    l_e.parity(),
                    crate::graded::Homogeneity::Zero | crate::graded::Homogeneity::Pure(crate::graded::Parity::Even)
                );
                let grading = if graded {
                    Verdict::pass()
                } else {
                    Verdict::fail("L_E is not even with total ghost number zero")
                };
                let mut r = record(m, "proper/gradings", grading);
                r.details = vec![render(m, "L_E", &l_e)];
                vec![r, record(m, "proper/consistency", brst::check_lagrangian_consistency(m, true)?)]
            }
            CheckKind::Master => {
                let l_e = brst::build_proper_solution(m)?;
                vec![record(m, id, brst::check_master_equation(m, &l_e)?)]
            }
            CheckKind::Suite => {
                let l_e = brst::build_proper_solution(m)?;
                brst::equivalence_suite(m, &l_e)?
                    .into_iter()
                    .map(|(s, v)| record(m, format!("suite/{s}"), v))
                    .collect()
            }
        })
    })();
    result.unwrap_or_else(|e| vec![error_record(id, &e)])
}

/// Runs the selected checks, in parallel on up to `jobs` threads. Records
/// are sorted by identifier, so the result does not depend on scheduling.
pub fn run_checks(m: &Model, selection: &[CheckKind], jobs: usize) -> CheckReport {
    let start = Instant::now();
    let timed = |k: &CheckKind| {
        let t = Instant::now();
        let mut recs = run_kind(m, *k);
        let ms = t.elapsed().as_secs_f64() * 1e3;
        let share = ms / recs.len().max(1) as f64;
        for r in &mut recs {
            r.elapsed_ms = share;
        }
        recs
    };
    let mut records: Vec<CheckRecord> = if jobs <= 1 {
        selection.iter().flat_map(timed).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| selection.par_iter().flat_map_iter(timed).collect()),
            Err(_) => selection.iter().flat_map(timed).collect(),
        }
    };
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let (fields, ghosts, antifields) = m.counts();
    CheckReport {
        model: ModelSummary {
            name: m.name.clone(),
            description: m.description.clone(),
            base_dim: m.base_dim,
            fields,
            ghosts,
            antifields,
            reducibility: m.reducibility(),
            notes: m.notes.clone(),
        },
        selection: selection.to_vec(),
        records,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "structured" | "json" => Ok(Format::Structured),
            _ => Err(format!("unknown format `{s}` (expected text or structured)")),
        }
    }
}

#[derive(Serialize)]
struct Comparable<'a> {
    engine: &'static str,
    engine_version: &'static str,
    model: &'a ModelSummary,
    selection: Vec<&'static str>,
    summary: Tally,
    passed: bool,
    records: &'a [CheckRecord],
}

#[derive(Serialize)]
struct TimingEntry<'a> {
    id: &'a str,
    ms: f64,
}

#[derive(Serialize)]
struct Timing<'a> {
    total_ms: f64,
    records: Vec<TimingEntry<'a>>,
}

#[derive(Serialize)]
struct Document<'a> {
    format: &'static str,
    format_version: u32,
    comparable: Comparable<'a>,
    timing: Timing<'a>,
}

fn comparable(r: &CheckReport) -> Comparable<'_> {
    Comparable {
        engine: "ktbrst",
        engine_version: ENGINE_VERSION,
        model: &r.model,
        selection: r.selection.iter().map(|k| k.name()).collect(),
        summary: r.tally(),
        passed: r.all_passed(),
        records: &r.records,
    }
}

/// The comparable section alone, as pretty-printed JSON.
pub fn comparable_json(r: &CheckReport) -> String {
    serde_json::to_string_pretty(&comparable(r)).expect("report serializes")
}

const TEXT_WIDTH: usize = 400;

fn clip(s: &str, terms: usize) -> String {
    if s.chars().count() <= TEXT_WIDTH {
        s.to_string()
    } else {
        let head: String = s.chars().take(TEXT_WIDTH).collect();
        format!("{head} … ({terms} terms)")
    }
}

pub fn emit_report(r: &CheckReport, format: Format) -> String {
    match format {
        Format::Structured => {
            let doc = Document {
                format: "ktbrst-report",
                format_version: REPORT_FORMAT_VERSION,
                comparable: comparable(r),
                timing: Timing {
                    total_ms: r.elapsed_ms,
                    records: r.records.iter().map(|x| TimingEntry { id: &x.id, ms: x.elapsed_ms }).collect(),
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            let m = &r.model;
            let _ = writeln!(out, "model {}: {}", m.name, m.description);
            let _ = writeln!(
                out,
                "  n = {}, {} fields, {} ghosts, {} antifields, reducibility {}",
                m.base_dim,
                m.fields,
                m.ghosts,
                m.antifields,
                m.reducibility.map_or("none".to_string(), |k| k.to_string())
            );
            for note in &m.notes {
                let _ = writeln!(out, "  note: {note}");
            }
            for rec in &r.records {
                let tag = match rec.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::NotEvaluated => "SKIP",
                };
                let _ = write!(out, "{tag}  {}", rec.id);
                if let Some(note) = &rec.note {
                    let _ = write!(out, "  ({note})");
                }
                out.push('\n');
                // Only the Euler–Lagrange dump prints its details in text form.
                let details: &[RenderedPoly] = if rec.id == "euler-lagrange" { &rec.details } else { &[] };
                for w in rec.witnesses.iter().chain(details) {
                    let _ = writeln!(out, "      {} = {}", w.label, clip(&w.value, w.terms));
                }
            }
            let t = r.tally();
            let _ = writeln!(
                out,
                "summary: {} pass, {} fail, {} not evaluated",
                t.pass, t.fail, t.not_evaluated
            );
            out
        }
    }
}
