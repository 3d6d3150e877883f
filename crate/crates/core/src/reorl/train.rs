//! Score-function training loop on the synthetic suite.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    advantage_at, coefficients, group_normalize, indexing_name, qspec_coefficients,
    reinforce_step, segment_returns, token_segment_advantages, CreditIndexing, PolicySample,
    RewardPlan,
};
use crate::error::{Error, Result};
use crate::exec::PromptExecutor;
use crate::schedules::{
    exponential_schedule, greedy_oracle_schedule, linear_schedule, question_min_budget,
    BudgetSchedule, ScheduleMethod,
};
use crate::sim::{
    bin_history, enumerate_oracle_with, exact_objective_with, make_task_suite, rewards_at,
    sample_rollout, toy_frontier, uniform_grid, TaskSuite, ToyPolicy,
};

/// Rollouts per bin per question when estimating minimum budgets.
const HISTORY_ROLLOUTS: usize = 16;
/// Stream id reserved for the minimum-budget history.
const HISTORY_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainMethod {
    Exp,
    Oracle,
    Linear,
    Qspec,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub method: TrainMethod,
    pub n: usize,
    pub l_min: u64,
    pub l_max: u64,
    /// Only for `explicit`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<u64>>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            method: TrainMethod::Exp,
            n: crate::schedules::DEFAULT_N,
            l_min: crate::schedules::DEFAULT_L_MIN,
            l_max: 16384,
            budgets: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub n_questions: usize,
    pub bins: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_questions: 20,
            bins: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub schedule: ScheduleConfig,
    pub suite: SuiteConfig,
    pub steps: usize,
    pub batch_prompts: usize,
    pub rollouts_per_prompt: usize,
    pub learning_rate: f64,
    pub epsilon: f64,
    /// Credit segment `i` to tokens after `L_i` instead of up to `L_i`.
    pub compat_paper_indexing: bool,
    /// Sampling seed; the suite seed when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            schedule: ScheduleConfig::default(),
            suite: SuiteConfig::default(),
            steps: 2000,
            batch_prompts: 20,
            rollouts_per_prompt: 8,
            learning_rate: 5.0,
            epsilon: super::DEFAULT_EPSILON,
            compat_paper_indexing: false,
            seed: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.schedule;
        if s.l_max == 0 {
            return Err(Error::validation("schedule.l_max must be positive"));
        }
        match s.method {
            TrainMethod::Exp | TrainMethod::Oracle | TrainMethod::Linear if s.n < 1 => {
                return Err(Error::validation("schedule.n must be at least 1"));
            }
            TrainMethod::Explicit if s.budgets.is_none() => {
                return Err(Error::validation("explicit schedules need schedule.budgets"));
            }
            _ => {}
        }
        if s.budgets.is_some() && s.method != TrainMethod::Explicit {
            return Err(Error::validation(
                "schedule.budgets is only allowed with method 'explicit'",
            ));
        }
        if self.suite.n_questions < 1 || self.suite.bins < 2 {
            return Err(Error::validation(
                "suite needs at least one question and two bins",
            ));
        }
        if self.batch_prompts < 1 || self.rollouts_per_prompt < 1 {
            return Err(Error::validation(
                "batch_prompts and rollouts_per_prompt must be at least 1",
            ));
        }
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::validation("learning_rate must be finite and non-negative"));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::validation("epsilon must be positive"));
        }
        Ok(())
    }

    pub fn run_seed(&self) -> u64 {
        self.seed.unwrap_or(self.suite.seed)
    }

    pub fn indexing(&self) -> CreditIndexing {
        if self.compat_paper_indexing {
            CreditIndexing::Literal
        } else {
            CreditIndexing::Causal
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub config: TrainConfig,
    pub seed: u64,
    pub threads: usize,
    pub suite_checksum: u64,
    /// `causal` or `literal`.
    pub credit_indexing: String,
    /// False when some token may be credited with a reward from a budget
    /// shorter than its position.
    pub causal_credit: bool,
    pub schedule_method: String,
    /// Shared reward budgets `L_1..L_N`; empty for per-question schedules.
    pub schedule_budgets: Vec<u64>,
    /// Per-question minimum budgets; empty unless the method is `qspec`.
    pub question_budgets: Vec<u64>,
    pub initial_objective: f64,
    /// Exact objective after each step.
    pub expected_objective: Vec<f64>,
    /// Mean weighted reward of each step's sampled rollouts.
    pub sampled_objective: Vec<f64>,
    pub optimum: f64,
    pub final_objective: f64,
    /// `(optimum − final) / optimum`.
    pub optimality_gap: f64,
    /// Fraction of questions whose most likely bin is optimal.
    pub argmax_agreement: f64,
}

struct Plan {
    rewards: RewardPlan,
    schedules: Vec<BudgetSchedule>,
    shared: Option<BudgetSchedule>,
    question_budgets: Vec<u64>,
}

impl Plan {
    fn schedule(&self, question: usize) -> &BudgetSchedule {
        self.shared.as_ref().unwrap_or_else(|| &self.schedules[question])
    }
}

fn build_plan(config: &TrainConfig, suite: &TaskSuite, seed: u64) -> Result<Plan> {
    let s = &config.schedule;
    let shared = match s.method {
        TrainMethod::Exp => Some(exponential_schedule(s.l_min, s.l_max, s.n)?),
        TrainMethod::Linear => Some(linear_schedule(s.l_max, s.n)?),
        TrainMethod::Explicit => Some(BudgetSchedule::explicit(
            s.budgets.clone().unwrap_or_default(),
            s.l_max,
        )?),
        TrainMethod::Oracle => {
            let grid = uniform_grid(s.l_max)?;
            let frontier = toy_frontier(suite, &grid)?;
            Some(greedy_oracle_schedule(&frontier, s.n, &grid)?)
        }
        TrainMethod::Qspec => None,
    };
    if let Some(schedule) = shared {
        return Ok(Plan {
            rewards: RewardPlan::Shared(coefficients(&schedule)),
            schedules: Vec::new(),
            shared: Some(schedule),
            question_budgets: Vec::new(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(HISTORY_STREAM);
    let grid = uniform_grid(s.l_max)?;
    let history = bin_history(suite, &grid, HISTORY_ROLLOUTS, &mut rng)?;
    let table = question_min_budget(&history)?;
    let schedules = suite
        .tasks
        .iter()
        .map(|t| table.schedule_for(&t.question_id))
        .collect::<Result<Vec<_>>>()?;
    let coefs = schedules
        .iter()
        .map(qspec_coefficients)
        .collect::<Result<Vec<_>>>()?;
    Ok(Plan {
        rewards: RewardPlan::PerQuestion(coefs),
        question_budgets: schedules.iter().map(|s| s.budgets()[0]).collect(),
        schedules,
        shared: None,
    })
}

/// Per-question schedules `(L^x)` the `qspec` method would train with.
pub fn qspec_schedules(config: &TrainConfig, suite: &TaskSuite) -> Result<Vec<BudgetSchedule>> {
    let mut config = config.clone();
    config.schedule.method = TrainMethod::Qspec;
    let plan = build_plan(&config, suite, config.run_seed())?;
    Ok(plan.schedules)
}

/// Builds the configured suite and trains a uniform policy on it.
pub fn train<E: PromptExecutor>(config: &TrainConfig, exec: &E) -> Result<TrainingReport> {
    config.validate()?;
    let (suite, policy) = make_task_suite(
        config.suite.seed,
        config.suite.n_questions,
        config.schedule.l_max,
        config.suite.bins,
    )?;
    train_on(config, &suite, policy, exec).map(|(report, _)| report)
}

/// Trains `policy` on `suite`, returning the report and the final policy.
///
/// Each step visits `batch_prompts` questions in round-robin order, samples
/// `rollouts_per_prompt` responses per question from a stream keyed by
/// `(seed, step, slot)`, normalizes segment returns per question, credits the
/// length decision (made at token 1) with the advantage of the segment holding
/// that token, and takes one ascent step.
pub fn train_on<E: PromptExecutor>(
    config: &TrainConfig,
    suite: &TaskSuite,
    mut policy: ToyPolicy,
    exec: &E,
) -> Result<(TrainingReport, ToyPolicy)> {
    config.validate()?;
    suite.validate()?;
    if suite.l_max != config.schedule.l_max {
        return Err(Error::validation(format!(
            "suite l_max {} differs from schedule l_max {}",
            suite.l_max, config.schedule.l_max
        )));
    }
    let seed = config.run_seed();
    let plan = build_plan(config, suite, seed)?;
    let oracle = enumerate_oracle_with(suite, &plan.rewards)?;
    let indexing = config.indexing();
    let n_questions = suite.tasks.len();
    let batch_prompts = config.batch_prompts;
    let group = config.rollouts_per_prompt;

    let initial_objective = exact_objective_with(&policy, suite, &plan.rewards)?;
    let mut expected_objective = Vec::with_capacity(config.steps);
    let mut sampled_objective = Vec::with_capacity(config.steps);

    for step in 0..config.steps {
        let current = &policy;
        let slots = exec.map_slots(batch_prompts, |slot| -> Result<(Vec<PolicySample>, f64)> {
            let question = (step * batch_prompts + slot) % n_questions;
            let task = &suite.tasks[question];
            let coefs = plan.rewards.for_question(question);
            let schedule = plan.schedule(question);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((step as u64) << 32) | slot as u64);

            let trajs: Vec<_> = (0..group)
                .map(|_| sample_rollout(current, question, task, &mut rng))
                .collect();
            let returns = trajs
                .iter()
                .map(|t| segment_returns(&rewards_at(t, &coefs.budgets), coefs))
                .collect::<Result<Vec<_>>>()?;
            let total: f64 = returns.iter().map(|r| r.total()).sum();
            let adv = group_normalize(&returns, config.epsilon)?;
            let samples = trajs
                .iter()
                .zip(&adv.advantages)
                .map(|(t, a)| {
                    let spans = token_segment_advantages(a, schedule, t.length, indexing)?;
                    let advantage = advantage_at(&spans, 1).unwrap_or(0.0);
                    Ok(PolicySample {
                        question,
                        bin: t.bin,
                        advantage,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((samples, total))
        });

        let mut batch = Vec::with_capacity(batch_prompts * group);
        let mut total = 0.0;
        for slot in slots {
            let (samples, t) = slot?;
            batch.extend(samples);
            total += t;
        }
        reinforce_step(&mut policy, &batch, config.learning_rate)
            .map_err(|e| match e {
                Error::Numeric(msg) => Error::Numeric(format!("step {}: {msg}", step + 1)),
                other => other,
            })?;
        sampled_objective.push(total / batch.len() as f64);
        expected_objective.push(exact_objective_with(&policy, suite, &plan.rewards)?);
    }

    let final_objective = expected_objective.last().copied().unwrap_or(initial_objective);
    let optimality_gap = if oracle.objective > 0.0 {
        (oracle.objective - final_objective) / oracle.objective
    } else {
        0.0
    };
    let agree = (0..n_questions)
        .filter(|&q| {
            let best = oracle.best_value(q);
            let chosen = oracle.values[q][policy.argmax(q)];
            chosen >= best - 1e-9 * best.abs().max(1.0)
        })
        .count();

    let report = TrainingReport {
        config: config.clone(),
        seed,
        threads: exec.degree(),
        suite_checksum: suite.checksum(),
        credit_indexing: indexing_name(indexing),
        causal_credit: indexing == CreditIndexing::Causal,
        schedule_method: String::from(match config.schedule.method {
            TrainMethod::Qspec => ScheduleMethod::QuestionSpecific.as_str(),
            _ => plan.schedule(0).method().as_str(),
        }),
        schedule_budgets: plan
            .shared
            .as_ref()
            .map(|s| s.budgets().to_vec())
            .unwrap_or_default(),
        question_budgets: plan.question_budgets.clone(),
        initial_objective,
        expected_objective,
        sampled_objective,
        optimum: oracle.objective,
        final_objective,
        optimality_gap,
        argmax_agreement: agree as f64 / n_questions as f64,
    };
    Ok((report, policy))
}
