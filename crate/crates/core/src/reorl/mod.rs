//! Dense budget rewards for policy-gradient training.
//!
//! A response is scored at every scheduled budget `L_1..L_N` and at `l_max`.
//! The score at budget `i` is weighted by its trapezoidal coefficient `c_i`,
//! so the expected weighted sum approximates the area under the model's
//! budget–accuracy curve. Training credits each token with the normalized
//! suffix return over the budgets that still include it.

mod train;

pub use train::{
    qspec_schedules, train, train_on, ScheduleConfig, SuiteConfig, TrainConfig, TrainMethod, TrainingReport,
};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedules::{BudgetSchedule, ScheduleMethod};
use crate::sim::{rewards_at, sample_rollout, TaskSuite, ToyPolicy};

/// Reward budgets `L_1..L_N, l_max` and their coefficients `c_1..c_{N+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefVector {
    pub budgets: Vec<u64>,
    pub coefs: Vec<f64>,
    pub l_max: u64,
}

impl CoefVector {
    pub fn len(&self) -> usize {
        self.coefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.budgets.iter().copied().zip(self.coefs.iter().copied())
    }
}

/// `c_i = (L_{i+1} − L_{i−1}) / 2` for `i ≤ N` with `L_0 = 0`,
/// `L_{N+1} = l_max`, and `c_{N+1} = (l_max − L_N) / 2`.
///
/// The coefficients sum to `l_max − L_1 / 2`; the missing `L_1 / 2` is the
/// weight of the zero-budget node, whose reward does not depend on the policy.
pub fn coefficients(schedule: &BudgetSchedule) -> CoefVector {
    let l = schedule.budgets();
    let l_max = schedule.l_max();
    let n = l.len();
    let at = |i: usize| -> u64 {
        match i {
            0 => 0,
            i if i > n => l_max,
            i => l[i - 1],
        }
    };
    let mut coefs: Vec<f64> = (1..=n).map(|i| (at(i + 1) - at(i - 1)) as f64 / 2.0).collect();
    coefs.push((l_max - l[n - 1]) as f64 / 2.0);
    let mut budgets = l.to_vec();
    budgets.push(l_max);
    CoefVector {
        budgets,
        coefs,
        l_max,
    }
}

/// Per-question two-budget coefficients `c_1 = L^x / 2`,
/// `c_2 = (l_max − L^x) / 2` for a schedule holding the single budget `L^x`.
pub fn qspec_coefficients(schedule: &BudgetSchedule) -> Result<CoefVector> {
    if schedule.len() != 1 {
        return Err(Error::validation(format!(
            "question-specific schedules hold one budget, got {}",
            schedule.len()
        )));
    }
    let l_x = schedule.budgets()[0];
    let l_max = schedule.l_max();
    Ok(CoefVector {
        budgets: alloc::vec![l_x, l_max],
        coefs: alloc::vec![l_x as f64 / 2.0, (l_max - l_x) as f64 / 2.0],
        l_max,
    })
}

/// Coefficients for a schedule, using the two-budget rule for
/// question-specific schedules and the trapezoidal rule otherwise.
pub fn coefficients_for(schedule: &BudgetSchedule) -> Result<CoefVector> {
    match schedule.method() {
        ScheduleMethod::QuestionSpecific => qspec_coefficients(schedule),
        _ => Ok(coefficients(schedule)),
    }
}

/// Coefficients shared by every question, or one set per question.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardPlan {
    Shared(CoefVector),
    PerQuestion(Vec<CoefVector>),
}

impl RewardPlan {
    pub fn for_question(&self, question: usize) -> &CoefVector {
        match self {
            RewardPlan::Shared(c) => c,
            RewardPlan::PerQuestion(cs) => &cs[question],
        }
    }

    pub(crate) fn check_questions(&self, n: usize) -> Result<()> {
        match self {
            RewardPlan::PerQuestion(cs) if cs.len() != n => Err(Error::validation(format!(
                "reward plan covers {} questions, suite has {n}",
                cs.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// Binary correctness at each reward budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardVector(pub Vec<bool>);

/// `Return_i = Σ_{j ≥ i} c_j · r_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentReturnVector(pub Vec<f64>);

impl SegmentReturnVector {
    /// Weighted reward of the whole response, `Return_1`.
    pub fn total(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }
}

pub fn segment_returns(rewards: &RewardVector, coefs: &CoefVector) -> Result<SegmentReturnVector> {
    if rewards.0.len() != coefs.len() {
        return Err(Error::validation(format!(
            "{} rewards for {} coefficients",
            rewards.0.len(),
            coefs.len()
        )));
    }
    let mut out = alloc::vec![0.0; coefs.len()];
    let mut acc = 0.0;
    for i in (0..coefs.len()).rev() {
        if rewards.0[i] {
            acc += coefs.coefs[i];
        }
        out[i] = acc;
    }
    Ok(SegmentReturnVector(out))
}

/// Default floor on the group standard deviation.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Normalized advantages of one prompt's rollout group, `M × (N + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAdvantages {
    pub advantages: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Population standard deviation per segment.
    pub std: Vec<f64>,
}

/// Standardizes each segment column across the group. Columns whose
/// population standard deviation is at most `epsilon` get zero advantages.
pub fn group_normalize(returns: &[SegmentReturnVector], epsilon: f64) -> Result<GroupAdvantages> {
    if returns.is_empty() {
        return Err(Error::validation("group has no rollouts"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::validation("epsilon must be positive"));
    }
    let width = returns[0].0.len();
    if returns.iter().any(|r| r.0.len() != width) {
        return Err(Error::validation("rollouts in a group have different segment counts"));
    }
    let m = returns.len() as f64;
    let mut mean = alloc::vec![0.0; width];
    let mut std = alloc::vec![0.0; width];
    for i in 0..width {
        let mu = returns.iter().map(|r| r.0[i]).sum::<f64>() / m;
        let var = returns.iter().map(|r| (r.0[i] - mu) * (r.0[i] - mu)).sum::<f64>() / m;
        mean[i] = mu;
        std[i] = libm::sqrt(var);
    }
    let advantages = returns
        .iter()
        .map(|r| {
            (0..width)
                .map(|i| {
                    if std[i] <= epsilon {
                        0.0
                    } else {
                        (r.0[i] - mean[i]) / std[i]
                    }
                })
                .collect()
        })
        .collect();
    Ok(GroupAdvantages {
        advantages,
        mean,
        std,
    })
}

/// Which tokens a segment's advantage is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CreditIndexing {
    /// Segment `i` covers positions `(L_{i−1}, L_i]`; positions past `L_N` get
    /// segment `N + 1`. No token is credited with a reward from a budget that
    /// truncates it away.
    #[default]
    Causal,
    /// Segment `i` covers `(L_i, L_{i+1}]` for `i = 1..N`, with the leading
    /// tokens `(0, L_1]` folded into segment 1. Segment `N + 1` is unused.
    Literal,
}

/// Positions `first..=last` (1-based) credited with `advantage`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TokenSpan {
    pub first: u64,
    pub last: u64,
    /// 1-based segment index.
    pub segment: usize,
    pub advantage: f64,
}

/// Maps one rollout's segment advantages onto token positions `1..=length`.
pub fn token_segment_advantages(
    advantages: &[f64],
    schedule: &BudgetSchedule,
    rollout_length: u64,
    indexing: CreditIndexing,
) -> Result<Vec<TokenSpan>> {
    let l_max = schedule.l_max();
    if rollout_length > l_max {
        return Err(Error::validation(format!(
            "rollout length {rollout_length} exceeds l_max {l_max}"
        )));
    }
    let n = schedule.len();
    if advantages.len() != n + 1 {
        return Err(Error::validation(format!(
            "{} advantages for {} segments",
            advantages.len(),
            n + 1
        )));
    }
    let l = schedule.budgets();
    // bounds[i] = L_i with L_0 = 0 and L_{N+1} = l_max
    let bound = |i: usize| -> u64 {
        match i {
            0 => 0,
            i if i > n => l_max,
            i => l[i - 1],
        }
    };
    let ranges: Vec<(usize, u64, u64)> = match indexing {
        CreditIndexing::Causal => (1..=n + 1).map(|i| (i, bound(i - 1), bound(i))).collect(),
        CreditIndexing::Literal => (1..=n)
            .map(|i| (i, if i == 1 { 0 } else { bound(i) }, bound(i + 1)))
            .collect(),
    };
    Ok(ranges
        .into_iter()
        .filter_map(|(segment, lo, hi)| {
            let first = lo + 1;
            let last = hi.min(rollout_length);
            (first <= last).then(|| TokenSpan {
                first,
                last,
                segment,
                advantage: advantages[segment - 1],
            })
        })
        .collect())
}

/// Advantage credited to token `position`, if any span covers it.
pub fn advantage_at(spans: &[TokenSpan], position: u64) -> Option<f64> {
    spans
        .iter()
        .find(|s| s.first <= position && position <= s.last)
        .map(|s| s.advantage)
}

/// One sampled length choice and the advantage credited to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicySample {
    pub question: usize,
    pub bin: usize,
    pub advantage: f64,
}

/// Ascent step `z += lr · mean_b[ A_b · ∇ log π(bin_b) ]`, where
/// `∇_{z_k} log π(bin) = [k = bin] − π_k` for the sample's question.
///
/// The policy is left untouched when the gradient is not finite.
pub fn reinforce_step(policy: &mut ToyPolicy, batch: &[PolicySample], learning_rate: f64) -> Result<()> {
    if !(learning_rate >= 0.0) || !learning_rate.is_finite() {
        return Err(Error::validation(format!(
            "learning rate must be finite and non-negative, got {learning_rate}"
        )));
    }
    if batch.is_empty() {
        return Err(Error::validation("empty batch"));
    }
    let k = policy.bins();
    let mut grad = alloc::vec![alloc::vec![0.0; k]; policy.questions()];
    let scale = 1.0 / batch.len() as f64;
    for (i, s) in batch.iter().enumerate() {
        if s.question >= policy.questions() || s.bin >= k {
            return Err(Error::validation(format!(
                "sample {i} refers to question {} bin {} outside the policy",
                s.question, s.bin
            )));
        }
        if !s.advantage.is_finite() {
            return Err(Error::Numeric(format!(
                "sample {i} (question {}, bin {}) has advantage {}",
                s.question, s.bin, s.advantage
            )));
        }
        let probs = policy.probs(s.question);
        for (j, p) in probs.iter().enumerate() {
            let indicator = if j == s.bin { 1.0 } else { 0.0 };
            grad[s.question][j] += scale * s.advantage * (indicator - p);
        }
    }
    if let Some((q, row)) = grad
        .iter()
        .enumerate()
        .find(|(_, row)| row.iter().any(|g| !g.is_finite()))
    {
        return Err(Error::Numeric(format!(
            "non-finite gradient for question {q}: {row:?}"
        )));
    }
    for (logits, g) in policy.logits.iter_mut().zip(&grad) {
        for (z, d) in logits.iter_mut().zip(g) {
            *z += learning_rate * d;
        }
    }
    Ok(())
}

/// Monte-Carlo gradient with its per-coordinate standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    pub mean: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub samples_per_question: usize,
}

/// Plain score-function estimate of the exact objective's gradient:
/// `E[R · ∇ log π(bin)] / Q` with `R` the weighted reward sum of a rollout,
/// `per_question` rollouts for each question.
pub fn score_function_gradient<R: Rng + ?Sized>(
    policy: &ToyPolicy,
    suite: &TaskSuite,
    plan: &RewardPlan,
    per_question: usize,
    rng: &mut R,
) -> Result<GradientEstimate> {
    if per_question < 2 {
        return Err(Error::validation("need at least two rollouts per question"));
    }
    plan.check_questions(suite.tasks.len())?;
    let k = policy.bins();
    let nq = suite.tasks.len() as f64;
    let mut mean = Vec::with_capacity(suite.tasks.len());
    let mut stderr = Vec::with_capacity(suite.tasks.len());
    for (q, task) in suite.tasks.iter().enumerate() {
        let coefs = plan.for_question(q);
        let probs = policy.probs(q);
        let mut sum = alloc::vec![0.0; k];
        let mut sum_sq = alloc::vec![0.0; k];
        for _ in 0..per_question {
            let traj = sample_rollout(policy, q, task, rng);
            let ret = segment_returns(&rewards_at(&traj, &coefs.budgets), coefs)?.total();
            for j in 0..k {
                let indicator = if j == traj.bin { 1.0 } else { 0.0 };
                let term = ret * (indicator - probs[j]) / nq;
                sum[j] += term;
                sum_sq[j] += term * term;
            }
        }
        let m = per_question as f64;
        let mu: Vec<f64> = sum.iter().map(|s| s / m).collect();
        let se = sum_sq
            .iter()
            .zip(&mu)
            .map(|(sq, mu)| {
                let var = (sq / m - mu * mu).max(0.0) * m / (m - 1.0);
                libm::sqrt(var / m)
            })
            .collect();
        mean.push(mu);
        stderr.push(se);
    }
    Ok(GradientEstimate {
        mean,
        stderr,
        samples_per_question: per_question,
    })
}

pub(crate) fn indexing_name(indexing: CreditIndexing) -> String {
    String::from(match indexing {
        CreditIndexing::Causal => "causal",
        CreditIndexing::Literal => "literal",
    })
}
