//! Sparse token-budget schedules and their approximation error.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::curves::{check_ascending, integral_approx, BudgetGrid};
use crate::error::{Error, Result};
use crate::frontier::FrontierCurve;
use crate::rollouts::RolloutSet;

/// Lower end of exponential schedules when none is given.
pub const DEFAULT_L_MIN: u64 = 512;
/// Number of scheduled budgets when none is given.
pub const DEFAULT_N: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleMethod {
    Exponential,
    Linear,
    Greedy,
    Explicit,
    QuestionSpecific,
}

impl ScheduleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleMethod::Exponential => "exponential",
            ScheduleMethod::Linear => "linear",
            ScheduleMethod::Greedy => "greedy",
            ScheduleMethod::Explicit => "explicit",
            ScheduleMethod::QuestionSpecific => "question-specific",
        }
    }
}

impl fmt::Display for ScheduleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScheduleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" | "exp" => Ok(ScheduleMethod::Exponential),
            "linear" => Ok(ScheduleMethod::Linear),
            "greedy" | "oracle" => Ok(ScheduleMethod::Greedy),
            "explicit" => Ok(ScheduleMethod::Explicit),
            "question-specific" | "qspec" => Ok(ScheduleMethod::QuestionSpecific),
            other => Err(Error::validation(format!("unknown schedule method '{other}'"))),
        }
    }
}

/// `N` strictly ascending budgets in `(0, l_max]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetSchedule {
    budgets: Vec<u64>,
    l_max: u64,
    method: ScheduleMethod,
    l_min: Option<u64>,
    requested: usize,
    collapsed: bool,
}

impl BudgetSchedule {
    pub fn new(budgets: Vec<u64>, l_max: u64, method: ScheduleMethod) -> Result<Self> {
        if budgets.is_empty() {
            return Err(Error::validation("a schedule needs at least one budget"));
        }
        check_ascending(&budgets)?;
        if budgets[0] == 0 {
            return Err(Error::validation("scheduled budgets must be positive"));
        }
        let last = budgets[budgets.len() - 1];
        if last > l_max {
            return Err(Error::validation(format!(
                "scheduled budget {last} exceeds l_max {l_max}"
            )));
        }
        let requested = budgets.len();
        Ok(Self {
            budgets,
            l_max,
            method,
            l_min: None,
            requested,
            collapsed: false,
        })
    }

    pub fn explicit(budgets: Vec<u64>, l_max: u64) -> Result<Self> {
        Self::new(budgets, l_max, ScheduleMethod::Explicit)
    }

    pub fn budgets(&self) -> &[u64] {
        &self.budgets
    }

    pub fn l_max(&self) -> u64 {
        self.l_max
    }

    pub fn method(&self) -> ScheduleMethod {
        self.method
    }

    pub fn l_min(&self) -> Option<u64> {
        self.l_min
    }

    /// Number of budgets asked for; may exceed `len()` when rounding collapsed
    /// neighbouring budgets.
    pub fn requested(&self) -> usize {
        self.requested
    }

    /// True when rounding to integers merged duplicate budgets.
    pub fn collapsed(&self) -> bool {
        self.collapsed
    }

    pub fn len(&self) -> usize {
        self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.budgets.is_empty()
    }

    /// Restores generator metadata when re-reading a serialized schedule.
    pub fn with_metadata(mut self, l_min: Option<u64>, requested: usize) -> Self {
        self.l_min = l_min;
        self.requested = requested.max(self.budgets.len());
        self.collapsed = self.requested > self.budgets.len();
        self
    }

    fn from_rounded(
        mut budgets: Vec<u64>,
        l_max: u64,
        method: ScheduleMethod,
        l_min: Option<u64>,
    ) -> Result<Self> {
        let requested = budgets.len();
        budgets.dedup();
        let mut s = Self::new(budgets, l_max, method)?;
        s.l_min = l_min;
        s.requested = requested;
        s.collapsed = s.budgets.len() < requested;
        Ok(s)
    }
}

/// `L_i = round(l_min · (l_max / l_min)^((i − 1) / n))` for `i = 1..=n`.
///
/// The exponent never reaches 1, so the last budget stays below `l_max`.
/// Budgets that coincide after rounding are merged and the schedule is marked
/// [`collapsed`](BudgetSchedule::collapsed).
pub fn exponential_schedule(l_min: u64, l_max: u64, n: usize) -> Result<BudgetSchedule> {
    if l_min == 0 || l_min >= l_max {
        return Err(Error::validation(format!(
            "exponential schedule needs 0 < l_min < l_max, got l_min={l_min}, l_max={l_max}"
        )));
    }
    if n < 1 {
        return Err(Error::validation("exponential schedule needs n >= 1"));
    }
    let ratio = l_max as f64 / l_min as f64;
    let budgets = (0..n)
        .map(|k| libm::round(l_min as f64 * libm::pow(ratio, k as f64 / n as f64)) as u64)
        .collect();
    BudgetSchedule::from_rounded(budgets, l_max, ScheduleMethod::Exponential, Some(l_min))
}

/// `L_i = round(i · l_max / (n + 1))` for `i = 1..=n`, halves rounded up.
pub fn linear_schedule(l_max: u64, n: usize) -> Result<BudgetSchedule> {
    if n < 1 {
        return Err(Error::validation("linear schedule needs n >= 1"));
    }
    if l_max < n as u64 {
        return Err(Error::validation(format!(
            "linear schedule needs l_max >= n, got l_max={l_max}, n={n}"
        )));
    }
    let denom = 2 * (n as u64 + 1);
    let budgets = (1..=n as u64)
        .map(|i| (2 * i * l_max + n as u64 + 1) / denom)
        .collect();
    BudgetSchedule::from_rounded(budgets, l_max, ScheduleMethod::Linear, None)
}

/// Frontier area on `[0, l_max]` using every frontier grid node as a
/// quadrature node. This is the reference the sparse schedules are judged
/// against.
pub fn full_grid_integral(frontier: &FrontierCurve, l_max: u64) -> Result<f64> {
    let full = frontier.curve().grid().to_schedule(l_max)?;
    integral_approx(frontier.curve(), &full)
}

/// Unsigned, unnormalized gap between the schedule's quadrature of the
/// frontier and the full-grid reference.
pub fn approx_error_abs(frontier: &FrontierCurve, schedule: &BudgetSchedule) -> Result<f64> {
    let reference = full_grid_integral(frontier, schedule.l_max())?;
    let approx = integral_approx(frontier.curve(), schedule)?;
    Ok(libm::fabs(approx - reference))
}

/// Relative approximation error `|f(schedule) − I_full| / I_full`.
pub fn approx_error(frontier: &FrontierCurve, schedule: &BudgetSchedule) -> Result<f64> {
    let reference = full_grid_integral(frontier, schedule.l_max())?;
    if reference == 0.0 {
        return Err(Error::Degenerate(String::from(
            "frontier area is zero; relative error undefined",
        )));
    }
    let approx = integral_approx(frontier.curve(), schedule)?;
    Ok(libm::fabs(approx - reference) / reference)
}

/// Greedy node selection against a known frontier.
///
/// Each round adds the candidate that minimizes the absolute approximation
/// error of the schedule chosen so far; ties go to the smaller budget.
/// Candidates at zero are dropped since zero is always a quadrature node.
/// `l_max` is the candidate grid's.
pub fn greedy_oracle_schedule(
    frontier: &FrontierCurve,
    n: usize,
    candidates: &BudgetGrid,
) -> Result<BudgetSchedule> {
    let l_max = candidates.l_max();
    let pool: Vec<u64> = candidates.budgets().iter().copied().filter(|&b| b > 0).collect();
    if n < 1 {
        return Err(Error::validation("greedy schedule needs n >= 1"));
    }
    if n > pool.len() {
        return Err(Error::validation(format!(
            "cannot pick {n} budgets from {} positive candidates",
            pool.len()
        )));
    }
    let reference = full_grid_integral(frontier, l_max)?;
    let mut chosen: Vec<u64> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(f64, u64)> = None;
        for &c in &pool {
            if chosen.contains(&c) {
                continue;
            }
            let mut trial = chosen.clone();
            let pos = trial.partition_point(|&b| b < c);
            trial.insert(pos, c);
            let trial = BudgetSchedule::explicit(trial, l_max)?;
            let err = libm::fabs(integral_approx(frontier.curve(), &trial)? - reference);
            // pool is ascending, so strict improvement keeps the smallest tie
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, c));
            }
        }
        let (_, pick) = best.expect("pool has unchosen candidates");
        let pos = chosen.partition_point(|&b| b < pick);
        chosen.insert(pos, pick);
    }
    BudgetSchedule::new(chosen, l_max, ScheduleMethod::Greedy)
}

/// Minimum budget for one question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuestionBudget {
    pub l_x: u64,
    /// No model ever answered the question correctly.
    pub unsolved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionBudgetTable {
    pub l_max: u64,
    pub entries: BTreeMap<String, QuestionBudget>,
}

impl QuestionBudgetTable {
    pub fn get(&self, question: &str) -> Option<QuestionBudget> {
        self.entries.get(question).copied()
    }

    /// Per-question schedule `(L^x)`, to be rewarded at `L^x` and `l_max`.
    pub fn schedule_for(&self, question: &str) -> Result<BudgetSchedule> {
        let entry = self
            .get(question)
            .ok_or_else(|| Error::NotFound(format!("question '{question}'")))?;
        BudgetSchedule::new(
            alloc::vec![entry.l_x],
            self.l_max,
            ScheduleMethod::QuestionSpecific,
        )
    }
}

/// Smallest positive grid budget at which the best model's mean correctness
/// reaches the best model's mean correctness at the largest grid budget.
///
/// Models are compared through their own per-question means, not pooled.
/// Zero budgets on the grid are skipped. Questions nobody solves map to the
/// smallest positive budget and are flagged `unsolved`.
pub fn question_min_budget(rollouts: &RolloutSet) -> Result<QuestionBudgetTable> {
    if rollouts.is_empty() {
        return Err(Error::validation("rollout set is empty"));
    }
    let grid = rollouts.grid();
    let first_positive = grid
        .budgets()
        .iter()
        .position(|&b| b > 0)
        .ok_or_else(|| Error::validation("grid has no positive budget"))?;
    let last = grid.len() - 1;

    // best[question][node] = max over models of that model's mean correctness
    let mut best: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for ((_, question), records) in rollouts.by_model_question() {
        let m = records.len() as f64;
        let row = best
            .entry(question)
            .or_insert_with(|| alloc::vec![0.0; grid.len()]);
        for (node, slot) in row.iter_mut().enumerate() {
            let hits = records.iter().filter(|r| r.correct[node]).count();
            let mean = hits as f64 / m;
            if mean > *slot {
                *slot = mean;
            }
        }
    }

    let entries = best
        .into_iter()
        .map(|(question, row)| {
            let target = row[last];
            let node = (first_positive..=last)
                .find(|&i| row[i] >= target)
                .unwrap_or(last);
            let entry = QuestionBudget {
                l_x: grid.budgets()[node],
                unsolved: row.iter().all(|&v| v == 0.0),
            };
            (String::from(question), entry)
        })
        .collect();
    Ok(QuestionBudgetTable {
        l_max: grid.l_max(),
        entries,
    })
}
