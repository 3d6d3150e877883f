//! Rollout correctness records over a shared budget grid.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curves::BudgetGrid;
use crate::error::{Error, Result};

/// One sampled response: whether forcing an answer at each grid budget gave
/// a correct answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RolloutRecord {
    pub model_id: String,
    pub question_id: String,
    pub rollout_id: String,
    pub total_length: u64,
    pub correct: Vec<bool>,
}

impl RolloutRecord {
    /// Expands a monotone record: correct exactly at budgets `>= first_correct`.
    pub fn from_first_correct(
        grid: &BudgetGrid,
        model_id: impl Into<String>,
        question_id: impl Into<String>,
        rollout_id: impl Into<String>,
        total_length: u64,
        first_correct: Option<u64>,
    ) -> Self {
        let correct = grid
            .budgets()
            .iter()
            .map(|&b| first_correct.is_some_and(|f| b >= f))
            .collect();
        Self {
            model_id: model_id.into(),
            question_id: question_id.into(),
            rollout_id: rollout_id.into(),
            total_length,
            correct,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RolloutSet {
    grid: BudgetGrid,
    records: Vec<RolloutRecord>,
}

impl RolloutSet {
    pub fn new(grid: BudgetGrid, records: Vec<RolloutRecord>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, r) in records.iter().enumerate() {
            check_record(&grid, r).map_err(|e| match e {
                Error::Validation(msg) => Error::Validation(format!("record {i}: {msg}")),
                other => other,
            })?;
            if !seen.insert((&r.model_id, &r.question_id, &r.rollout_id)) {
                return Err(Error::validation(format!(
                    "record {i}: duplicate (model, question, rollout) = ({}, {}, {})",
                    r.model_id, r.question_id, r.rollout_id
                )));
            }
        }
        Ok(Self { grid, records })
    }

    pub fn grid(&self) -> &BudgetGrid {
        &self.grid
    }

    pub fn records(&self) -> &[RolloutRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn models(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.model_id.as_str()).collect()
    }

    pub fn questions(&self) -> BTreeSet<&str> {
        self.records.iter().map(|r| r.question_id.as_str()).collect()
    }

    /// Records grouped by `(model_id, question_id)`.
    pub fn by_model_question(&self) -> BTreeMap<(&str, &str), Vec<&RolloutRecord>> {
        let mut index: BTreeMap<(&str, &str), Vec<&RolloutRecord>> = BTreeMap::new();
        for r in &self.records {
            index
                .entry((r.model_id.as_str(), r.question_id.as_str()))
                .or_default()
                .push(r);
        }
        index
    }
}

pub(crate) fn check_record(grid: &BudgetGrid, r: &RolloutRecord) -> Result<()> {
    if r.model_id.is_empty() || r.question_id.is_empty() || r.rollout_id.is_empty() {
        return Err(Error::validation("model_id, question_id and rollout_id are required"));
    }
    if r.correct.len() != grid.len() {
        return Err(Error::validation(format!(
            "correct has {} entries but the grid has {} budgets",
            r.correct.len(),
            grid.len()
        )));
    }
    Ok(())
}
