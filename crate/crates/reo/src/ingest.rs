//! On-disk formats: rollout logs, curve and frontier documents, schedules,
//! per-question budget tables, suites, training configs and reports.
//!
//! Every reader has a `parse_*` twin that works on text and takes the path
//! only for error context; writers have `*_to_string` twins. Floats are
//! written in their shortest round-trip form, so `parse(write(x)) == x`
//! holds bit for bit. All text output uses `\n` line endings.
//!
//! The grammar of each format is documented in `FORMATS.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use reo_core::reorl::{TrainConfig, TrainingReport};
use reo_core::schedules::QuestionBudget;
use reo_core::sim::TaskSuite;
use reo_core::{
    BudgetAccuracyCurve, BudgetGrid, BudgetSchedule, FrontierCurve, QuestionBudgetTable, RegReport,
    RolloutRecord, RolloutSet, ScheduleMethod,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{RejectKind, ReoError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ReoError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| ReoError::io(path, e))
}

fn json_error(path: &Path, e: serde_json::Error) -> ReoError {
    let kind = match e.classify() {
        serde_json::error::Category::Data => RejectKind::Schema,
        _ => RejectKind::MalformedJson,
    };
    ReoError::parse(path, e.line(), kind, e.to_string())
}

fn invalid(path: &Path, line: usize, e: reo_core::Error) -> ReoError {
    ReoError::parse(path, line, RejectKind::Invalid, e.to_string())
}

fn from_json<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| json_error(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// rollouts

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RolloutHeader {
    budgets: Vec<u64>,
    l_max: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RolloutLine {
    model_id: String,
    question_id: String,
    rollout_id: String,
    total_length: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    correct: Option<Vec<bool>>,
    // `null` is meaningful (never correct), so presence is tracked separately.
    #[serde(default, deserialize_with = "present", skip_serializing)]
    first_correct: Option<Option<u64>>,
}

fn present<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Option<u64>>, D::Error> {
    Option::<u64>::deserialize(d).map(Some)
}

/// Parses a JSON Lines rollout log. Line 1 is the grid header; every later
/// non-blank line is one record carrying either `correct` (one flag per grid
/// budget) or the compact `first_correct` (an integer or `null`).
pub fn parse_rollouts(text: &str, path: &Path) -> Result<RolloutSet> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let header_text = match lines.next() {
        Some((_, l)) if !l.trim().is_empty() => l,
        _ => {
            return Err(ReoError::parse(
                path,
                1,
                RejectKind::MissingHeader,
                "first line must be the grid header {\"budgets\": [...], \"l_max\": N}",
            ))
        }
    };
    let header: RolloutHeader = serde_json::from_str(header_text).map_err(|e| {
        let kind = if e.is_data() {
            RejectKind::MissingHeader
        } else {
            RejectKind::MalformedJson
        };
        ReoError::parse(path, 1, kind, format!("header: {e}"))
    })?;
    let grid = BudgetGrid::new(header.budgets, header.l_max).map_err(|e| invalid(path, 1, e))?;

    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RolloutLine = serde_json::from_str(line).map_err(|e| {
            let kind = if e.is_data() {
                RejectKind::Schema
            } else {
                RejectKind::MalformedJson
            };
            ReoError::parse(path, no, kind, e.to_string())
        })?;
        if raw.model_id.is_empty() || raw.question_id.is_empty() || raw.rollout_id.is_empty() {
            return Err(ReoError::parse(
                path,
                no,
                RejectKind::Schema,
                "model_id, question_id and rollout_id must be non-empty",
            ));
        }
        let record = match (raw.correct, raw.first_correct) {
            (Some(correct), None) => {
                if correct.len() != grid.len() {
                    return Err(ReoError::parse(
                        path,
                        no,
                        RejectKind::Arity,
                        format!(
                            "correct has {} entries but the grid has {} budgets",
                            correct.len(),
                            grid.len()
                        ),
                    ));
                }
                RolloutRecord {
                    model_id: raw.model_id,
                    question_id: raw.question_id,
                    rollout_id: raw.rollout_id,
                    total_length: raw.total_length,
                    correct,
                }
            }
            (None, Some(first)) => RolloutRecord::from_first_correct(
                &grid,
                raw.model_id,
                raw.question_id,
                raw.rollout_id,
                raw.total_length,
                first,
            ),
            _ => {
                return Err(ReoError::parse(
                    path,
                    no,
                    RejectKind::Schema,
                    "exactly one of `correct` and `first_correct` is required",
                ))
            }
        };
        let key = (
            record.model_id.clone(),
            record.question_id.clone(),
            record.rollout_id.clone(),
        );
        if !seen.insert(key) {
            return Err(ReoError::parse(
                path,
                no,
                RejectKind::Duplicate,
                format!(
                    "duplicate rollout ({}, {}, {})",
                    record.model_id, record.question_id, record.rollout_id
                ),
            ));
        }
        records.push(record);
    }
    RolloutSet::new(grid, records).map_err(|e| invalid(path, 0, e))
}

pub fn read_rollouts(path: &Path) -> Result<RolloutSet> {
    parse_rollouts(&read_text(path)?, path)
}

/// Header plus one line per record, always in the expanded `correct` form.
pub fn rollouts_to_string(set: &RolloutSet) -> String {
    let header = RolloutHeader {
        budgets: set.grid().budgets().to_vec(),
        l_max: set.grid().l_max(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for r in set.records() {
        let line = RolloutLine {
            model_id: r.model_id.clone(),
            question_id: r.question_id.clone(),
            rollout_id: r.rollout_id.clone(),
            total_length: r.total_length,
            correct: Some(r.correct.clone()),
            first_correct: None,
        };
        out.push_str(&serde_json::to_string(&line).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn write_rollouts(set: &RolloutSet, path: &Path) -> Result<()> {
    write_text(path, &rollouts_to_string(set))
}

// ---------------------------------------------------------------------------
// curves and frontiers

/// Wire form shared by curves and frontiers. A frontier carries one
/// provenance label per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub label: String,
    /// Defaults to the last budget when absent.
    #[serde(default)]
    pub l_max: Option<u64>,
    pub budgets: Vec<u64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<String>>,
}

impl CurveDoc {
    pub fn from_curve(curve: &BudgetAccuracyCurve) -> Self {
        Self {
            label: curve.label().to_string(),
            l_max: Some(curve.grid().l_max()),
            budgets: curve.grid().budgets().to_vec(),
            values: curve.values().to_vec(),
            provenance: None,
        }
    }

    pub fn from_frontier(frontier: &FrontierCurve) -> Self {
        Self {
            provenance: Some(frontier.provenance().to_vec()),
            ..Self::from_curve(frontier.curve())
        }
    }

    pub fn to_curve(&self) -> reo_core::Result<BudgetAccuracyCurve> {
        let grid = match self.l_max {
            Some(l_max) => BudgetGrid::new(self.budgets.clone(), l_max)?,
            None => BudgetGrid::from_budgets(self.budgets.clone())?,
        };
        BudgetAccuracyCurve::new(grid, self.values.clone(), self.label.clone())
    }

    /// A document without provenance becomes a single-curve frontier.
    pub fn to_frontier(&self) -> reo_core::Result<FrontierCurve> {
        let curve = self.to_curve()?;
        match &self.provenance {
            Some(p) => FrontierCurve::new(curve, p.clone()),
            None => Ok(FrontierCurve::from_curve(curve)),
        }
    }
}

pub fn parse_curve(text: &str, path: &Path) -> Result<BudgetAccuracyCurve> {
    let doc: CurveDoc = from_json(text, path)?;
    doc.to_curve().map_err(|e| invalid(path, 0, e))
}

pub fn parse_frontier(text: &str, path: &Path) -> Result<FrontierCurve> {
    let doc: CurveDoc = from_json(text, path)?;
    doc.to_frontier().map_err(|e| invalid(path, 0, e))
}

pub fn read_curve(path: &Path) -> Result<BudgetAccuracyCurve> {
    parse_curve(&read_text(path)?, path)
}

pub fn read_frontier(path: &Path) -> Result<FrontierCurve> {
    parse_frontier(&read_text(path)?, path)
}

pub fn curve_to_string(curve: &BudgetAccuracyCurve) -> String {
    to_json(&CurveDoc::from_curve(curve))
}

pub fn frontier_to_string(frontier: &FrontierCurve) -> String {
    to_json(&CurveDoc::from_frontier(frontier))
}

pub fn write_curve(curve: &BudgetAccuracyCurve, path: &Path) -> Result<()> {
    write_text(path, &curve_to_string(curve))
}

pub fn write_frontier(frontier: &FrontierCurve, path: &Path) -> Result<()> {
    write_text(path, &frontier_to_string(frontier))
}

/// Frontier documents for every bundled family, in family order.
pub const BUNDLED_FRONTIERS_JSON: &str = include_str!("../data/bundled_frontiers.json");

pub fn parse_frontier_list(text: &str, path: &Path) -> Result<Vec<FrontierCurve>> {
    let docs: Vec<CurveDoc> = from_json(text, path)?;
    docs.iter()
        .map(|d| d.to_frontier().map_err(|e| invalid(path, 0, e)))
        .collect()
}

pub fn frontier_list_to_string(frontiers: &[FrontierCurve]) -> String {
    let docs: Vec<CurveDoc> = frontiers.iter().map(CurveDoc::from_frontier).collect();
    to_json(&docs)
}

// ---------------------------------------------------------------------------
// schedules

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleDoc {
    method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l_min: Option<u64>,
    l_max: u64,
    /// Requested size; larger than `budgets.len()` when rounding merged nodes.
    n: usize,
    budgets: Vec<u64>,
}

pub fn parse_schedule(text: &str, path: &Path) -> Result<BudgetSchedule> {
    let doc: ScheduleDoc = from_json(text, path)?;
    let method: ScheduleMethod = doc.method.parse().map_err(|e| invalid(path, 0, e))?;
    let schedule =
        BudgetSchedule::new(doc.budgets, doc.l_max, method).map_err(|e| invalid(path, 0, e))?;
    Ok(schedule.with_metadata(doc.l_min, doc.n))
}

pub fn read_schedule(path: &Path) -> Result<BudgetSchedule> {
    parse_schedule(&read_text(path)?, path)
}

pub fn schedule_to_string(schedule: &BudgetSchedule) -> String {
    to_json(&ScheduleDoc {
        method: schedule.method().as_str().to_string(),
        l_min: schedule.l_min(),
        l_max: schedule.l_max(),
        n: schedule.requested(),
        budgets: schedule.budgets().to_vec(),
    })
}

pub fn write_schedule(schedule: &BudgetSchedule, path: &Path) -> Result<()> {
    write_text(path, &schedule_to_string(schedule))
}

// ---------------------------------------------------------------------------
// CSV

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory csv never fails");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn row<I, S>(w: &mut csv::Writer<Vec<u8>>, fields: I)
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(fields).expect("in-memory csv never fails");
}

/// Shortest round-trip decimal form.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// `question_id,l_x,unsolved`, one row per question in id order.
pub fn question_budgets_to_csv(table: &QuestionBudgetTable) -> String {
    let mut w = csv_writer();
    row(&mut w, ["question_id", "l_x", "unsolved"]);
    for (q, b) in &table.entries {
        row(
            &mut w,
            [q.as_str(), &b.l_x.to_string(), if b.unsolved { "true" } else { "false" }],
        );
    }
    csv_finish(w)
}

/// Reads a table written by [`question_budgets_to_csv`]. The `unsolved`
/// column is optional; `l_max` is not stored in the file.
pub fn parse_question_budgets(text: &str, path: &Path, l_max: u64) -> Result<QuestionBudgetTable> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| ReoError::parse(path, 1, RejectKind::Schema, e.to_string()))?
        .clone();
    let expected: &[&str] = if headers.len() == 3 {
        &["question_id", "l_x", "unsolved"]
    } else {
        &["question_id", "l_x"]
    };
    if headers.iter().ne(expected.iter().copied()) {
        return Err(ReoError::parse(
            path,
            1,
            RejectKind::Schema,
            format!("expected header `{}`", expected.join(",")),
        ));
    }
    let mut entries = BTreeMap::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            ReoError::parse(path, line, RejectKind::Arity, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |what: &str| ReoError::parse(path, line, RejectKind::Schema, what.to_string());
        let q = rec[0].to_string();
        if q.is_empty() {
            return Err(bad("empty question_id"));
        }
        let l_x: u64 = rec[1].parse().map_err(|_| bad("l_x must be a non-negative integer"))?;
        if l_x == 0 || l_x > l_max {
            return Err(ReoError::parse(
                path,
                line,
                RejectKind::Invalid,
                format!("l_x {l_x} outside (0, {l_max}]"),
            ));
        }
        let unsolved = match rec.get(2) {
            None | Some("false") => false,
            Some("true") => true,
            Some(_) => return Err(bad("unsolved must be `true` or `false`")),
        };
        if entries.insert(q.clone(), QuestionBudget { l_x, unsolved }).is_some() {
            return Err(ReoError::parse(
                path,
                line,
                RejectKind::Duplicate,
                format!("question '{q}' listed twice"),
            ));
        }
    }
    Ok(QuestionBudgetTable { l_max, entries })
}

/// `budget,value`, plus `provenance` for frontiers.
pub fn curve_to_csv(curve: &BudgetAccuracyCurve, provenance: Option<&[String]>) -> String {
    let mut w = csv_writer();
    match provenance {
        Some(p) => {
            row(&mut w, ["budget", "value", "provenance"]);
            for ((b, v), p) in curve.grid().budgets().iter().zip(curve.values()).zip(p) {
                row(&mut w, [b.to_string(), fmt_f64(*v), p.clone()]);
            }
        }
        None => {
            row(&mut w, ["budget", "value"]);
            for (b, v) in curve.grid().budgets().iter().zip(curve.values()) {
                row(&mut w, [b.to_string(), fmt_f64(*v)]);
            }
        }
    }
    csv_finish(w)
}

pub fn frontier_to_csv(frontier: &FrontierCurve) -> String {
    curve_to_csv(frontier.curve(), Some(frontier.provenance()))
}

/// CSV of a curve document, with the provenance column when it has one.
pub fn curve_doc_to_csv(text: &str, path: &Path) -> Result<String> {
    let doc: CurveDoc = from_json(text, path)?;
    Ok(match doc.provenance {
        Some(_) => frontier_to_csv(&doc.to_frontier().map_err(|e| invalid(path, 0, e))?),
        None => curve_to_csv(&doc.to_curve().map_err(|e| invalid(path, 0, e))?, None),
    })
}

/// `reg,frontier_area,curve_area,l_max` with a single data row.
pub fn reg_to_csv(report: &RegReport) -> String {
    let mut w = csv_writer();
    row(&mut w, ["reg", "frontier_area", "curve_area", "l_max"]);
    row(
        &mut w,
        [
            fmt_f64(report.reg),
            fmt_f64(report.frontier_area),
            fmt_f64(report.curve_area),
            report.l_max.to_string(),
        ],
    );
    csv_finish(w)
}

/// `step,expected_objective,sampled_objective` with steps numbered from 1.
pub fn training_to_csv(report: &TrainingReport) -> String {
    let mut w = csv_writer();
    row(&mut w, ["step", "expected_objective", "sampled_objective"]);
    for (i, (e, s)) in report
        .expected_objective
        .iter()
        .zip(&report.sampled_objective)
        .enumerate()
    {
        row(&mut w, [(i + 1).to_string(), fmt_f64(*e), fmt_f64(*s)]);
    }
    csv_finish(w)
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegDoc {
    reg: f64,
    frontier_area: f64,
    curve_area: f64,
    relative: f64,
    l_max: u64,
    grid: Vec<u64>,
}

pub fn reg_to_string(report: &RegReport) -> String {
    to_json(&RegDoc {
        reg: report.reg,
        frontier_area: report.frontier_area,
        curve_area: report.curve_area,
        relative: report.relative(),
        l_max: report.l_max,
        grid: report.grid_used.budgets().to_vec(),
    })
}

pub fn parse_reg(text: &str, path: &Path) -> Result<RegReport> {
    let doc: RegDoc = from_json(text, path)?;
    let grid_used = BudgetGrid::new(doc.grid, doc.l_max).map_err(|e| invalid(path, 0, e))?;
    Ok(RegReport {
        reg: doc.reg,
        frontier_area: doc.frontier_area,
        curve_area: doc.curve_area,
        grid_used,
        l_max: doc.l_max,
    })
}

pub fn training_to_string(report: &TrainingReport) -> String {
    to_json(report)
}

pub fn parse_training(text: &str, path: &Path) -> Result<TrainingReport> {
    from_json(text, path)
}

// ---------------------------------------------------------------------------
// suites and configs

pub fn suite_to_string(suite: &TaskSuite) -> String {
    to_json(suite)
}

pub fn parse_suite(text: &str, path: &Path) -> Result<TaskSuite> {
    let suite: TaskSuite = from_json(text, path)?;
    suite.validate().map_err(|e| invalid(path, 0, e))?;
    Ok(suite)
}

pub fn read_suite(path: &Path) -> Result<TaskSuite> {
    parse_suite(&read_text(path)?, path)
}

pub fn config_to_string(config: &TrainConfig) -> String {
    to_json(config)
}

/// Missing keys take their defaults; unknown keys are rejected.
pub fn parse_config(text: &str, path: &Path) -> Result<TrainConfig> {
    let config: TrainConfig = from_json(text, path)?;
    config.validate().map_err(|e| invalid(path, 0, e))?;
    Ok(config)
}

pub fn read_config(path: &Path) -> Result<TrainConfig> {
    parse_config(&read_text(path)?, path)
}

// ---------------------------------------------------------------------------

/// What a JSON document on disk holds, judged by its keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocKind {
    Curve,
    Reg,
    Training,
}

pub fn sniff(text: &str, path: &Path) -> Result<DocKind> {
    let v: serde_json::Value = from_json(text, path)?;
    let has = |k: &str| v.get(k).is_some();
    if has("values") && has("budgets") {
        Ok(DocKind::Curve)
    } else if has("reg") {
        Ok(DocKind::Reg)
    } else if has("expected_objective") {
        Ok(DocKind::Training)
    } else {
        Err(ReoError::parse(
            path,
            0,
            RejectKind::Schema,
            "not a curve, frontier, reg report or training report",
        ))
    }
}
