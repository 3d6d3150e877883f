//! Synthetic reasoning tasks and toy length-choice policies.
//!
//! A task has a solve length `s`: a trace of at least `s` tokens makes the
//! answer derivable, and forcing an answer at any budget `L >= s` is correct.
//! A shorter trace is unsolved, except that with probability `g` a forced
//! answer is luckily correct from a position drawn uniformly in `[1, ℓ]`.
//! Responses are abstracted to `(ℓ, f)`: the committed length and the first
//! budget at which forcing yields a correct answer. Reward at budget `L` is
//! `[L >= f]`, monotone in `L` for every rollout.
//!
//! A toy policy holds, per question, logits over `K` length bins. Because the
//! reward of a bin depends only on `(s, g, ℓ)`, the expected objective and its
//! gradient have closed forms, which serve as oracles for the sampled
//! estimators in [`crate::reorl`].

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{BudgetAccuracyCurve, BudgetGrid};
use crate::error::{Error, Result};
use crate::frontier::FrontierCurve;
use crate::reorl::{coefficients, CoefVector, RewardPlan, RewardVector};
use crate::rollouts::{RolloutRecord, RolloutSet};
use crate::schedules::BudgetSchedule;

/// Shortest committed length and shortest solve length.
pub const MIN_LENGTH: u64 = 64;
/// Upper end of the lucky-guess probability.
pub const MAX_GUESS_PROB: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticTask {
    pub question_id: String,
    pub solve_length: u64,
    pub guess_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSuite {
    pub seed: u64,
    pub l_max: u64,
    /// Committed reasoning length of each bin, ascending.
    pub bin_lengths: Vec<u64>,
    pub tasks: Vec<SyntheticTask>,
}

impl TaskSuite {
    pub fn validate(&self) -> Result<()> {
        if self.tasks.is_empty() {
            return Err(Error::validation("suite has no tasks"));
        }
        check_bins(&self.bin_lengths, self.l_max)?;
        for t in &self.tasks {
            if t.solve_length < 1 || t.solve_length > self.l_max {
                return Err(Error::validation(format!(
                    "task '{}' solve length {} outside [1, {}]",
                    t.question_id, t.solve_length, self.l_max
                )));
            }
            if !(0.0..1.0).contains(&t.guess_prob) {
                return Err(Error::validation(format!(
                    "task '{}' guess probability {} outside [0, 1)",
                    t.question_id, t.guess_prob
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Uniform policy over this suite's bins.
    pub fn uniform_policy(&self) -> ToyPolicy {
        ToyPolicy {
            bin_lengths: self.bin_lengths.clone(),
            logits: alloc::vec![alloc::vec![0.0; self.bin_lengths.len()]; self.tasks.len()],
        }
    }

    /// FNV-1a over the suite's fields in a fixed order.
    pub fn checksum(&self) -> u64 {
        let mut h = Fnv::new();
        h.write(&self.seed.to_le_bytes());
        h.write(&self.l_max.to_le_bytes());
        for &b in &self.bin_lengths {
            h.write(&b.to_le_bytes());
        }
        for t in &self.tasks {
            h.write(t.question_id.as_bytes());
            h.write(&t.solve_length.to_le_bytes());
            h.write(&t.guess_prob.to_bits().to_le_bytes());
        }
        h.finish()
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

fn check_bins(bins: &[u64], l_max: u64) -> Result<()> {
    if bins.len() < 2 {
        return Err(Error::validation("a toy policy needs at least two bins"));
    }
    if bins[0] == 0 {
        return Err(Error::validation("bin lengths must be positive"));
    }
    crate::curves::check_ascending(bins)?;
    if bins[bins.len() - 1] > l_max {
        return Err(Error::validation(format!(
            "longest bin {} exceeds l_max {l_max}",
            bins[bins.len() - 1]
        )));
    }
    Ok(())
}

/// Per-question softmax policy over length bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyPolicy {
    pub bin_lengths: Vec<u64>,
    pub logits: Vec<Vec<f64>>,
}

impl ToyPolicy {
    pub fn bins(&self) -> usize {
        self.bin_lengths.len()
    }

    pub fn questions(&self) -> usize {
        self.logits.len()
    }

    pub fn probs(&self, question: usize) -> Vec<f64> {
        softmax(&self.logits[question])
    }

    /// Index of the largest logit; the smallest bin wins ties.
    pub fn argmax(&self, question: usize) -> usize {
        let row = &self.logits[question];
        let mut best = 0;
        for (k, &v) in row.iter().enumerate() {
            if v > row[best] {
                best = k;
            }
        }
        best
    }

    fn check_against(&self, suite: &TaskSuite) -> Result<()> {
        if self.bin_lengths != suite.bin_lengths {
            return Err(Error::validation("policy bins differ from the suite's"));
        }
        if self.logits.len() != suite.tasks.len() {
            return Err(Error::validation(format!(
                "policy has {} questions, suite has {}",
                self.logits.len(),
                suite.tasks.len()
            )));
        }
        if self.logits.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(String::from("policy has non-finite logits")));
        }
        Ok(())
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| libm::exp(z - max)).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Bin lengths spaced geometrically from [`MIN_LENGTH`] to `l_max`.
pub fn log_spaced_bins(l_max: u64, bins: usize) -> Result<Vec<u64>> {
    if bins < 2 {
        return Err(Error::validation("a toy policy needs at least two bins"));
    }
    if l_max <= MIN_LENGTH {
        return Err(Error::validation(format!("l_max must exceed {MIN_LENGTH}")));
    }
    let ratio = l_max as f64 / MIN_LENGTH as f64;
    let lengths: Vec<u64> = (0..bins)
        .map(|k| {
            let t = k as f64 / (bins - 1) as f64;
            libm::round(MIN_LENGTH as f64 * libm::pow(ratio, t)) as u64
        })
        .collect();
    if lengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation(format!(
            "{bins} bins do not fit between {MIN_LENGTH} and {l_max} tokens"
        )));
    }
    Ok(lengths)
}

/// Deterministic suite: for each question in order, one uniform draw for a
/// log-uniform solve length in `[64, l_max / 2]`, then one for the guess
/// probability in `[0, 0.2)`. The policy starts uniform.
pub fn make_task_suite(
    seed: u64,
    n_questions: usize,
    l_max: u64,
    bins: usize,
) -> Result<(TaskSuite, ToyPolicy)> {
    if n_questions < 1 {
        return Err(Error::validation("suite needs at least one question"));
    }
    if l_max < 2 * MIN_LENGTH {
        return Err(Error::validation(format!(
            "l_max must be at least {}",
            2 * MIN_LENGTH
        )));
    }
    let bin_lengths = log_spaced_bins(l_max, bins)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (libm::log(MIN_LENGTH as f64), libm::log((l_max / 2) as f64));
    let tasks = (0..n_questions)
        .map(|i| {
            let u: f64 = rng.random();
            let s = libm::round(libm::exp(lo + u * (hi - lo))) as u64;
            let g: f64 = rng.random::<f64>() * MAX_GUESS_PROB;
            SyntheticTask {
                question_id: format!("q{i:03}"),
                solve_length: s.clamp(MIN_LENGTH, l_max / 2),
                guess_prob: g,
            }
        })
        .collect();
    let suite = TaskSuite {
        seed,
        l_max,
        bin_lengths,
        tasks,
    };
    let policy = suite.uniform_policy();
    Ok((suite, policy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub question: usize,
    pub bin: usize,
    pub length: u64,
    /// Smallest budget at which a forced answer is correct; `None` if never.
    pub first_correct: Option<u64>,
    pub log_prob: f64,
}

impl Trajectory {
    pub fn correct_at(&self, budget: u64) -> bool {
        self.first_correct.is_some_and(|f| budget >= f)
    }
}

/// Draws a bin from the policy, then the first-correct position.
///
/// Draw order: one uniform for the bin; if the bin is shorter than the solve
/// length, one uniform for the guess and, on success, one integer in `[1, ℓ]`.
pub fn sample_rollout<R: Rng + ?Sized>(
    policy: &ToyPolicy,
    question: usize,
    task: &SyntheticTask,
    rng: &mut R,
) -> Trajectory {
    let probs = policy.probs(question);
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut bin = probs.len() - 1;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            bin = k;
            break;
        }
    }
    let length = policy.bin_lengths[bin];
    let first_correct = if length >= task.solve_length {
        Some(task.solve_length)
    } else if rng.random::<f64>() < task.guess_prob {
        Some(rng.random_range(1..=length))
    } else {
        None
    };
    Trajectory {
        question,
        bin,
        length,
        first_correct,
        log_prob: libm::log(probs[bin]),
    }
}

/// `[L >= f]` at each budget.
pub fn rewards_at(traj: &Trajectory, budgets: &[u64]) -> RewardVector {
    RewardVector(budgets.iter().map(|&b| traj.correct_at(b)).collect())
}

/// Rewards at `L_1..L_N` and at `l_max`.
pub fn reward_at_budgets(traj: &Trajectory, schedule: &BudgetSchedule) -> RewardVector {
    let mut budgets = schedule.budgets().to_vec();
    budgets.push(schedule.l_max());
    rewards_at(traj, &budgets)
}

/// Probability that forcing at `budget` is correct, given the committed length.
pub fn correct_prob(task: &SyntheticTask, length: u64, budget: u64) -> f64 {
    if length >= task.solve_length {
        if budget >= task.solve_length {
            1.0
        } else {
            0.0
        }
    } else {
        task.guess_prob * budget.min(length) as f64 / length as f64
    }
}

/// `E[Σ c_i · r_i | bin]` in closed form.
pub fn conditional_value(task: &SyntheticTask, length: u64, coefs: &CoefVector) -> f64 {
    coefs
        .iter()
        .map(|(budget, c)| c * correct_prob(task, length, budget))
        .sum()
}

/// Conditional value of every `(question, bin)` pair.
pub fn value_table(suite: &TaskSuite, plan: &RewardPlan) -> Result<Vec<Vec<f64>>> {
    plan.check_questions(suite.tasks.len())?;
    Ok(suite
        .tasks
        .iter()
        .enumerate()
        .map(|(q, task)| {
            let coefs = plan.for_question(q);
            suite
                .bin_lengths
                .iter()
                .map(|&len| conditional_value(task, len, coefs))
                .collect()
        })
        .collect())
}

/// Exact expected objective averaged over questions.
pub fn exact_objective_with(policy: &ToyPolicy, suite: &TaskSuite, plan: &RewardPlan) -> Result<f64> {
    policy.check_against(suite)?;
    let values = value_table(suite, plan)?;
    let total: f64 = values
        .iter()
        .enumerate()
        .map(|(q, row)| {
            policy
                .probs(q)
                .iter()
                .zip(row)
                .map(|(p, v)| p * v)
                .sum::<f64>()
        })
        .sum();
    Ok(total / suite.tasks.len() as f64)
}

pub fn exact_objective(policy: &ToyPolicy, suite: &TaskSuite, schedule: &BudgetSchedule) -> Result<f64> {
    exact_objective_with(policy, suite, &RewardPlan::Shared(coefficients(schedule)))
}

/// Gradient of [`exact_objective_with`] with respect to every logit:
/// `∂/∂z_{q,k} = π_{q,k} (v_{q,k} − Σ_j π_{q,j} v_{q,j}) / Q`.
pub fn exact_gradient_with(
    policy: &ToyPolicy,
    suite: &TaskSuite,
    plan: &RewardPlan,
) -> Result<Vec<Vec<f64>>> {
    policy.check_against(suite)?;
    let values = value_table(suite, plan)?;
    let n = suite.tasks.len() as f64;
    Ok(values
        .iter()
        .enumerate()
        .map(|(q, row)| {
            let probs = policy.probs(q);
            let mean: f64 = probs.iter().zip(row).map(|(p, v)| p * v).sum();
            probs
                .iter()
                .zip(row)
                .map(|(p, v)| p * (v - mean) / n)
                .collect()
        })
        .collect())
}

pub fn exact_gradient(
    policy: &ToyPolicy,
    suite: &TaskSuite,
    schedule: &BudgetSchedule,
) -> Result<Vec<Vec<f64>>> {
    exact_gradient_with(policy, suite, &RewardPlan::Shared(coefficients(schedule)))
}

/// Best deterministic policy in the toy class.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    /// Optimal bin per question; smallest bin on ties.
    pub bins: Vec<usize>,
    pub values: Vec<Vec<f64>>,
    pub objective: f64,
}

impl OracleSolution {
    pub fn best_value(&self, question: usize) -> f64 {
        self.values[question][self.bins[question]]
    }
}

pub fn enumerate_oracle_with(suite: &TaskSuite, plan: &RewardPlan) -> Result<OracleSolution> {
    suite.validate()?;
    let values = value_table(suite, plan)?;
    let bins: Vec<usize> = values
        .iter()
        .map(|row| {
            let mut best = 0;
            for (k, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect();
    let objective =
        bins.iter().zip(&values).map(|(&k, row)| row[k]).sum::<f64>() / suite.tasks.len() as f64;
    Ok(OracleSolution {
        bins,
        values,
        objective,
    })
}

pub fn enumerate_oracle(suite: &TaskSuite, schedule: &BudgetSchedule) -> Result<OracleSolution> {
    enumerate_oracle_with(suite, &RewardPlan::Shared(coefficients(schedule)))
}

/// Logit gap that drives every other bin's probability to exactly zero.
const DETERMINISTIC_MARGIN: f64 = 1.0e6;

/// Deterministic policy that always picks `bins[q]`.
pub fn deterministic_policy(suite: &TaskSuite, bins: &[usize]) -> ToyPolicy {
    let k = suite.bin_lengths.len();
    let logits = bins
        .iter()
        .map(|&b| {
            (0..k)
                .map(|j| if j == b { 0.0 } else { -DETERMINISTIC_MARGIN })
                .collect()
        })
        .collect();
    ToyPolicy {
        bin_lengths: suite.bin_lengths.clone(),
        logits,
    }
}

/// Best achievable accuracy at each grid budget when every question may pick
/// its own bin: `mean_q max_k P(correct at L | bin k)`.
pub fn toy_frontier(suite: &TaskSuite, grid: &BudgetGrid) -> Result<FrontierCurve> {
    suite.validate()?;
    let values = grid
        .budgets()
        .iter()
        .map(|&budget| {
            suite
                .tasks
                .iter()
                .map(|task| {
                    suite
                        .bin_lengths
                        .iter()
                        .map(|&len| correct_prob(task, len, budget))
                        .fold(0.0, f64::max)
                })
                .sum::<f64>()
                / suite.tasks.len() as f64
        })
        .collect();
    let curve = BudgetAccuracyCurve::new(grid.clone(), values, "toy-frontier")?;
    Ok(FrontierCurve::from_curve(curve))
}

/// `{0} ∪ {round(k · l_max / 64) | 1 ≤ k ≤ 64}`.
pub fn uniform_grid(l_max: u64) -> Result<BudgetGrid> {
    let mut budgets: Vec<u64> = (0..=64u64).map(|k| (2 * k * l_max + 64) / 128).collect();
    budgets.dedup();
    BudgetGrid::new(budgets, l_max)
}

/// Rollout records for `trajectories`, correctness expanded over `grid`.
pub fn trajectories_to_records(
    suite: &TaskSuite,
    grid: &BudgetGrid,
    model_id: &str,
    trajectories: &[Trajectory],
) -> Vec<RolloutRecord> {
    let mut counters = alloc::vec![0usize; suite.tasks.len()];
    trajectories
        .iter()
        .map(|t| {
            let idx = counters[t.question];
            counters[t.question] += 1;
            RolloutRecord::from_first_correct(
                grid,
                model_id,
                suite.tasks[t.question].question_id.as_str(),
                format!("{idx}"),
                t.length,
                t.first_correct,
            )
        })
        .collect()
}

/// Rollouts of `policy`, `per_question` per task, from one seeded stream.
pub fn sample_policy_rollouts(
    policy: &ToyPolicy,
    suite: &TaskSuite,
    per_question: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Trajectory> {
    let mut out = Vec::with_capacity(per_question * suite.tasks.len());
    for (q, task) in suite.tasks.iter().enumerate() {
        for _ in 0..per_question {
            out.push(sample_rollout(policy, q, task, rng));
        }
    }
    out
}

/// Rollout history in which every bin acts as a separate model `bin-<k>`
/// that always commits to its own length.
pub fn bin_history(
    suite: &TaskSuite,
    grid: &BudgetGrid,
    per_question: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RolloutSet> {
    suite.validate()?;
    let mut records = Vec::new();
    for k in 0..suite.bin_lengths.len() {
        let policy = deterministic_policy(suite, &alloc::vec![k; suite.tasks.len()]);
        let trajs = sample_policy_rollouts(&policy, suite, per_question, rng);
        records.extend(trajectories_to_records(suite, grid, &format!("bin-{k}"), &trajs));
    }
    RolloutSet::new(grid.clone(), records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedules::exponential_schedule;
    use alloc::vec;

    fn task(s: u64, g: f64) -> SyntheticTask {
        SyntheticTask {
            question_id: String::from("t"),
            solve_length: s,
            guess_prob: g,
        }
    }

    fn suite_of(tasks: Vec<SyntheticTask>, bins: Vec<u64>, l_max: u64) -> TaskSuite {
        TaskSuite {
            seed: 0,
            l_max,
            bin_lengths: bins,
            tasks,
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let a = make_task_suite(7, 10, 16384, 8).unwrap();
        let b = make_task_suite(7, 10, 16384, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, make_task_suite(8, 10, 16384, 8).unwrap().0);
        for t in &a.0.tasks {
            assert!((64..=8192).contains(&t.solve_length));
            assert!((0.0..0.2).contains(&t.guess_prob));
        }
        a.0.validate().unwrap();
    }

    #[test]
    fn minimal_suite() {
        let (suite, policy) = make_task_suite(1, 1, 16384, 2).unwrap();
        assert_eq!(suite.tasks.len(), 1);
        assert_eq!(suite.bin_lengths, vec![64, 16384]);
        assert_eq!(policy.probs(0), vec![0.5, 0.5]);
        assert!(make_task_suite(1, 0, 16384, 2).is_err());
        assert!(make_task_suite(1, 1, 16384, 1).is_err());
    }

    #[test]
    fn unsolved_without_guess() {
        let suite = suite_of(vec![task(1000, 0.0)], vec![100, 200], 2000);
        let policy = suite.uniform_policy();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let t = sample_rollout(&policy, 0, &suite.tasks[0], &mut rng);
            assert_eq!(t.first_correct, None);
            let sched = BudgetSchedule::explicit(vec![100, 1000], 2000).unwrap();
            assert_eq!(reward_at_budgets(&t, &sched).0, vec![false; 3]);
        }
    }

    #[test]
    fn solved_rollouts_are_correct_from_solve_length() {
        let suite = suite_of(vec![task(150, 0.1)], vec![200, 400], 2000);
        let policy = suite.uniform_policy();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = sample_rollout(&policy, 0, &suite.tasks[0], &mut rng);
        assert_eq!(t.first_correct, Some(150));
        assert!(t.correct_at(2000) && t.correct_at(150) && !t.correct_at(149));
    }

    #[test]
    fn reward_threshold_examples() {
        let sched = exponential_schedule(512, 16384, 5).unwrap();
        let mut t = Trajectory {
            question: 0,
            bin: 0,
            length: 5000,
            first_correct: Some(3000),
            log_prob: 0.0,
        };
        assert_eq!(reward_at_budgets(&t, &sched).0, vec![false, false, false, true, true, true]);
        t.first_correct = None;
        assert_eq!(reward_at_budgets(&t, &sched).0, vec![false; 6]);
        t.first_correct = Some(1024);
        assert!(reward_at_budgets(&t, &sched).0[1]);
    }

    #[test]
    fn objective_certainty_cases() {
        let sched = exponential_schedule(512, 16384, 5).unwrap();
        let c = coefficients(&sched);
        let total: f64 = c.coefs.iter().sum();
        let solved = suite_of(vec![task(100, 0.0), task(300, 0.0)], vec![400, 800], 16384);
        let v = exact_objective(&solved.uniform_policy(), &solved, &sched).unwrap();
        assert_eq!(v, total);
        let unsolved = suite_of(vec![task(1000, 0.0)], vec![400, 800], 16384);
        assert_eq!(exact_objective(&unsolved.uniform_policy(), &unsolved, &sched).unwrap(), 0.0);
    }

    #[test]
    fn gradient_structure() {
        let sched = exponential_schedule(512, 16384, 5).unwrap();
        // every bin solves: rewards identical across bins
        let flat = suite_of(vec![task(100, 0.0)], vec![400, 800], 16384);
        let g = exact_gradient(&flat.uniform_policy(), &flat, &sched).unwrap();
        assert!(g[0].iter().all(|&x| x == 0.0));
        // only the second bin solves
        let two = suite_of(vec![task(600, 0.0)], vec![400, 800], 16384);
        let g = exact_gradient(&two.uniform_policy(), &two, &sched).unwrap();
        assert!(g[0][1] > 0.0 && g[0][0] < 0.0);
        assert!((g[0][0] + g[0][1]).abs() < 1e-9);
    }

    #[test]
    fn oracle_picks_shortest_solving_bin() {
        let sched = exponential_schedule(512, 16384, 5).unwrap();
        let suite = suite_of(
            vec![task(300, 0.0), task(700, 0.0), task(100, 0.0)],
            vec![200, 400, 800, 1600],
            16384,
        );
        let o = enumerate_oracle(&suite, &sched).unwrap();
        assert_eq!(o.bins, vec![1, 2, 0]);
        // all bins equivalent: smallest wins
        let same = suite_of(vec![task(10, 0.0)], vec![200, 400], 16384);
        assert_eq!(enumerate_oracle(&same, &sched).unwrap().bins, vec![0]);
    }

    #[test]
    fn shift_invariance() {
        let (suite, mut policy) = make_task_suite(2, 4, 16384, 5).unwrap();
        for (q, row) in policy.logits.iter_mut().enumerate() {
            for (k, z) in row.iter_mut().enumerate() {
                *z = (q as f64) * 0.3 - (k as f64) * 0.7;
            }
        }
        let sched = exponential_schedule(512, 16384, 5).unwrap();
        let base = exact_objective(&policy, &suite, &sched).unwrap();
        for row in policy.logits.iter_mut() {
            for z in row.iter_mut() {
                *z += 12.5;
            }
        }
        let shifted = exact_objective(&policy, &suite, &sched).unwrap();
        assert!((base - shifted).abs() <= 1e-12 * base.abs());
    }

    #[test]
    fn uniform_grid_shape() {
        let g = uniform_grid(16384).unwrap();
        assert_eq!(g.len(), 65);
        assert_eq!(g.budgets()[1], 256);
        assert_eq!(g.budgets()[64], 16384);
    }
}
