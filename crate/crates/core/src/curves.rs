//! Budget grids, budget–accuracy curves and trapezoidal quadrature over token
//! budgets.
//!
//! A curve is known only at the nodes of its grid. Between nodes it is treated
//! as piecewise linear, which is the same assumption the trapezoidal rule
//! makes, so evaluating a curve and integrating it stay consistent: when every
//! knot of a curve is a quadrature node the approximate integral is the exact
//! integral of the interpolant.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rollouts::RolloutSet;
use crate::schedules::BudgetSchedule;

/// Ascending token budgets at which a curve is observed, plus the maximum
/// budget the curve is defined up to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetGrid {
    budgets: Vec<u64>,
    l_max: u64,
}

impl BudgetGrid {
    pub fn new(budgets: Vec<u64>, l_max: u64) -> Result<Self> {
        if budgets.is_empty() {
            return Err(Error::validation("budget grid is empty"));
        }
        if l_max == 0 {
            return Err(Error::validation("l_max must be positive"));
        }
        check_ascending(&budgets)?;
        let last = budgets[budgets.len() - 1];
        if last > l_max {
            return Err(Error::validation(format!(
                "grid budget {last} exceeds l_max {l_max}"
            )));
        }
        Ok(Self { budgets, l_max })
    }

    /// Grid whose `l_max` is its last budget.
    pub fn from_budgets(budgets: Vec<u64>) -> Result<Self> {
        let l_max = budgets.last().copied().unwrap_or(0);
        Self::new(budgets, l_max)
    }

    pub fn budgets(&self) -> &[u64] {
        &self.budgets
    }

    pub fn l_max(&self) -> u64 {
        self.l_max
    }

    pub fn len(&self) -> usize {
        self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.budgets.is_empty()
    }

    pub fn index_of(&self, budget: u64) -> Option<usize> {
        self.budgets.binary_search(&budget).ok()
    }

    /// The nodes of this grid lying in `(0, l_max]`, as an explicit schedule.
    pub fn to_schedule(&self, l_max: u64) -> Result<BudgetSchedule> {
        let budgets: Vec<u64> = self
            .budgets
            .iter()
            .copied()
            .filter(|&b| b > 0 && b <= l_max)
            .collect();
        BudgetSchedule::explicit(budgets, l_max)
    }
}

pub(crate) fn check_ascending(budgets: &[u64]) -> Result<()> {
    for pair in budgets.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::validation(format!(
                "budgets must be strictly ascending, found {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Accuracy as a function of token budget for one model (or a frontier).
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetAccuracyCurve {
    grid: BudgetGrid,
    values: Vec<f64>,
    label: String,
}

impl BudgetAccuracyCurve {
    pub fn new(grid: BudgetGrid, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::validation("curve label must not be empty"));
        }
        if values.len() != grid.len() {
            return Err(Error::validation(format!(
                "curve '{label}' has {} values for {} grid budgets",
                values.len(),
                grid.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::validation(format!(
                "curve '{label}' value {v} at budget {} is outside [0, 1]",
                grid.budgets[i]
            )));
        }
        Ok(Self {
            grid,
            values,
            label,
        })
    }

    pub fn grid(&self) -> &BudgetGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty() {
            return Err(Error::validation("curve label must not be empty"));
        }
        self.label = label;
        Ok(self)
    }

    /// Accuracy at budget `l`.
    ///
    /// Exact at grid nodes, linear between neighbouring nodes, constant above
    /// the last node and constant below the first one when the grid does not
    /// start at zero.
    pub fn value_at(&self, l: u64) -> Result<f64> {
        if l > self.grid.l_max {
            return Err(Error::OutOfRange {
                budget: l,
                l_max: self.grid.l_max,
            });
        }
        let budgets = &self.grid.budgets;
        match budgets.binary_search(&l) {
            Ok(i) => Ok(self.values[i]),
            Err(0) => Ok(self.values[0]),
            Err(i) if i == budgets.len() => Ok(self.values[i - 1]),
            Err(i) => {
                let (x0, x1) = (budgets[i - 1], budgets[i]);
                let (y0, y1) = (self.values[i - 1], self.values[i]);
                let t = (l - x0) as f64 / (x1 - x0) as f64;
                Ok(y0 + (y1 - y0) * t)
            }
        }
    }
}

/// Trapezoidal weights over the node list `{0} ∪ schedule ∪ {l_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub nodes: Vec<u64>,
    pub weights: Vec<f64>,
}

impl WeightVector {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Quadrature nodes for a schedule: zero, the scheduled budgets, then `l_max`,
/// with a final budget equal to `l_max` merged into the endpoint.
pub fn quadrature_nodes(schedule: &BudgetSchedule) -> Vec<u64> {
    let mut nodes = Vec::with_capacity(schedule.len() + 2);
    nodes.push(0);
    nodes.extend_from_slice(schedule.budgets());
    if nodes.last() != Some(&schedule.l_max()) {
        nodes.push(schedule.l_max());
    }
    nodes
}

/// Trapezoidal weights for a schedule.
///
/// With nodes `0 = x_0 < x_1 < … < x_m = l_max` the weight of `x_k` is
/// `(x_{k+1} − x_{k−1}) / 2`, halved at both ends. Weights sum to `l_max`.
pub fn trapezoid_weights(schedule: &BudgetSchedule) -> WeightVector {
    let nodes = quadrature_nodes(schedule);
    let last = nodes.len() - 1;
    let weights = (0..nodes.len())
        .map(|k| {
            let lo = nodes[k.saturating_sub(1)];
            let hi = nodes[if k == last { k } else { k + 1 }];
            (hi - lo) as f64 / 2.0
        })
        .collect();
    WeightVector { nodes, weights }
}

/// Trapezoidal approximation of the area under `curve` on `[0, l_max]` using
/// the schedule's budgets as interior nodes. Units are accuracy × tokens.
pub fn integral_approx(curve: &BudgetAccuracyCurve, schedule: &BudgetSchedule) -> Result<f64> {
    let weights = trapezoid_weights(schedule);
    let mut total = 0.0;
    for (node, w) in weights.iter() {
        total += w * curve.value_at(node)?;
    }
    Ok(total)
}

/// Question-balanced budget–accuracy curve of `model`: the mean over
/// questions of the per-question mean correctness at each grid budget.
pub fn build_curve(rollouts: &RolloutSet, model: &str) -> Result<BudgetAccuracyCurve> {
    let grid = rollouts.grid();
    let mut per_question: BTreeMap<&str, (Vec<u64>, u64)> = BTreeMap::new();
    for record in rollouts.records().iter().filter(|r| r.model_id == model) {
        let (hits, count) = per_question
            .entry(record.question_id.as_str())
            .or_insert_with(|| (alloc::vec![0; grid.len()], 0));
        for (hit, &ok) in hits.iter_mut().zip(&record.correct) {
            *hit += u64::from(ok);
        }
        *count += 1;
    }
    if per_question.is_empty() {
        return Err(Error::NotFound(format!("model '{model}'")));
    }
    let mut values = alloc::vec![0.0; grid.len()];
    for (question, (hits, count)) in &per_question {
        if *count == 0 {
            return Err(Error::validation(format!(
                "question '{question}' has no rollouts for model '{model}'"
            )));
        }
        for (v, &h) in values.iter_mut().zip(hits) {
            *v += h as f64 / *count as f64;
        }
    }
    let n = per_question.len() as f64;
    for v in &mut values {
        *v /= n;
    }
    BudgetAccuracyCurve::new(grid.clone(), values, model)
}
