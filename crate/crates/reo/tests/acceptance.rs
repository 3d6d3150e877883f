//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reo::ingest;
use reo_core::curves::{integral_approx, trapezoid_weights};
use reo_core::frontier::{bundled_families, bundled_frontier, build_frontier, default_reg_grid, reg};
use reo_core::reorl::{
    advantage_at, coefficients, score_function_gradient, token_segment_advantages, CreditIndexing,
    RewardPlan, TrainingReport,
};
use reo_core::schedules::{approx_error, exponential_schedule, greedy_oracle_schedule, question_min_budget};
use reo_core::sim::{
    bin_history, exact_gradient, exact_objective, log_spaced_bins, make_task_suite, uniform_grid,
    SyntheticTask, TaskSuite,
};
use reo_core::{BudgetAccuracyCurve, BudgetGrid, BudgetSchedule};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn reo(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_reo"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("reo binary runs")
}

fn native_grid(f: &reo_core::FrontierCurve) -> BudgetGrid {
    f.curve().grid().clone()
}

fn c1_greedy() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for family in bundled_families() {
        let f = bundled_frontier(family).unwrap();
        let t = Instant::now();
        let s = greedy_oracle_schedule(&f, 5, &native_grid(&f)).unwrap();
        let err = approx_error(&f, &s).unwrap();
        let dt = t.elapsed();
        pass &= err < 0.01 && dt < Duration::from_secs(1);
        parts.push(format!("{family} {:.3}% in {:.0?}", 100.0 * err, dt));
    }
    outcome(pass, parts.join(", "))
}

fn c2_exponential() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for family in bundled_families() {
        let f = bundled_frontier(family).unwrap();
        for l_max in [32768, 16384] {
            let grid = BudgetGrid::new(
                f.curve().grid().budgets().iter().copied().filter(|&b| b <= l_max).collect(),
                l_max,
            )
            .unwrap();
            let g = approx_error(&f, &greedy_oracle_schedule(&f, 5, &grid).unwrap()).unwrap();
            let e = approx_error(&f, &exponential_schedule(512, l_max, 5).unwrap()).unwrap();
            pass &= e < 0.05 && g <= e;
            if l_max == 32768 {
                parts.push(format!("{family} exp {:.3}% ≥ greedy {:.3}%", 100.0 * e, 100.0 * g));
            }
        }
    }
    outcome(pass, parts.join(", "))
}

fn c3_golden(dir: &Path) -> Outcome {
    let mut pass = true;
    let mut n = 0;
    for family in bundled_families() {
        let f = bundled_frontier(family).unwrap();
        let path = dir.join(format!("{family}.json"));
        ingest::write_frontier(&f, &path).unwrap();
        let back = ingest::read_frontier(&path).unwrap();
        for (a, b) in back.curve().values().iter().zip(f.curve().values()) {
            pass &= a.to_bits() == b.to_bits();
            n += 1;
        }
    }
    let spot1 = bundled_frontier("deepseek-1.5b").unwrap().curve().value_at(0).unwrap();
    let spot2 = bundled_frontier("qwen3-8b").unwrap().curve().value_at(1024).unwrap();
    pass &= n == 4 * 48 && spot1 == 0.06101600796568627 && spot2 == 0.29307789522058825;
    outcome(pass, format!("{n} values bit-exact; deepseek-1.5b(0)={spot1}, qwen3-8b(1024)={spot2}"))
}

fn c4_reg() -> Outcome {
    let t = Instant::now();
    let grid = default_reg_grid();
    let mut pass = true;
    for family in bundled_families() {
        let f = bundled_frontier(family).unwrap();
        pass &= reg(f.curve(), &f, &grid).unwrap().reg == 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let curves: Vec<BudgetAccuracyCurve> = (0..10)
        .map(|i| {
            let values = (0..grid.len()).map(|_| rng.random::<f64>()).collect();
            BudgetAccuracyCurve::new(grid.clone(), values, format!("m{i}")).unwrap()
        })
        .collect();
    let f = build_frontier(&curves).unwrap();
    let min_reg = curves
        .iter()
        .map(|c| reg(c, &f, &grid).unwrap().reg)
        .fold(f64::INFINITY, f64::min);
    pass &= min_reg >= -1e-9;
    let wsum = trapezoid_weights(&grid.to_schedule(16384).unwrap()).sum();
    pass &= (wsum - 16384.0).abs() <= 1e-9;
    let dt = t.elapsed();
    pass &= dt < Duration::from_secs(1);
    outcome(pass, format!("min member REG {min_reg:.3}, weight sum {wsum}, {dt:.0?}"))
}

fn c5_quadrature() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let l_max = rng.random_range(2u64..=32768);
        let n = rng.random_range(1usize..=10);
        let mut knots: Vec<u64> = (0..n).map(|_| rng.random_range(1..=l_max)).collect();
        knots.sort_unstable();
        knots.dedup();
        let schedule = BudgetSchedule::explicit(knots.clone(), l_max).unwrap();
        let mut xs = vec![0];
        xs.extend(knots.iter().copied().filter(|&k| k < l_max));
        xs.push(l_max);
        let ys: Vec<f64> = xs.iter().map(|_| rng.random::<f64>()).collect();
        let curve =
            BudgetAccuracyCurve::new(BudgetGrid::new(xs.clone(), l_max).unwrap(), ys.clone(), "pl").unwrap();
        // closed form: area under each linear piece
        let exact: f64 = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (x[1] - x[0]) as f64 * 0.5 * (y[0] + y[1]))
            .sum();
        let got = integral_approx(&curve, &schedule).unwrap();
        worst = worst.max((got - exact).abs() / exact);
    }
    outcome(worst <= 1e-9, format!("worst relative error {worst:.2e} over 100 curves"))
}

fn c6_gradient() -> Outcome {
    let t = Instant::now();
    // same fixture as the core gradient tests
    let (suite, mut policy) = make_task_suite(7, 3, 16384, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for z in policy.logits.iter_mut().flatten() {
        *z = rng.random_range(-1.0..1.0);
    }
    let s = exponential_schedule(512, 16384, 5).unwrap();
    let g = exact_gradient(&policy, &suite, &s).unwrap();
    let h = 1e-5;
    let mut fd_err: f64 = 0.0;
    for q in 0..3 {
        for k in 0..8 {
            let (mut a, mut b) = (policy.clone(), policy.clone());
            a.logits[q][k] += h;
            b.logits[q][k] -= h;
            let fd = (exact_objective(&a, &suite, &s).unwrap() - exact_objective(&b, &suite, &s).unwrap())
                / (2.0 * h);
            fd_err = fd_err.max((fd - g[q][k]).abs() / fd.abs().max(g[q][k].abs()));
        }
    }
    let plan = RewardPlan::Shared(coefficients(&s));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let est = score_function_gradient(&policy, &suite, &plan, 33_334, &mut rng).unwrap();
    let mut worst_z: f64 = 0.0;
    for q in 0..3 {
        for k in 0..8 {
            worst_z = worst_z.max((est.mean[q][k] - g[q][k]).abs() / est.stderr[q][k]);
        }
    }
    let dt = t.elapsed();
    let pass = fd_err < 1e-6 && worst_z <= 3.0 && dt < Duration::from_secs(30);
    outcome(
        pass,
        format!("FD max rel {fd_err:.2e}; sampled worst |z| {worst_z:.2} over {} rollouts; {dt:.1?}", 3 * 33_334),
    )
}

fn c7_training(dir: &Path) -> Outcome {
    std::fs::write(
        dir.join("cfg.json"),
        r#"{"schedule": {"method": "exp", "n": 5, "l_min": 512, "l_max": 16384},
            "suite": {"seed": 1, "n_questions": 20, "bins": 8}, "steps": 2000}"#,
    )
    .unwrap();
    let t = Instant::now();
    let o = reo(&["sim", "train", "--config", "cfg.json", "--seed", "1", "--out-dir", "c7"], dir);
    let dt = t.elapsed();
    if !o.status.success() {
        return outcome(false, String::from_utf8_lossy(&o.stderr).into_owned());
    }
    let text = std::fs::read_to_string(dir.join("c7/report.json")).unwrap();
    let r: TrainingReport = ingest::parse_training(&text, Path::new("report.json")).unwrap();
    let pass = r.expected_objective.len() <= 2000
        && r.optimality_gap < 0.02
        && r.argmax_agreement >= 0.95
        && dt < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "gap {:.3}% after {} steps, argmax agreement {:.0}%, {dt:.1?}",
            100.0 * r.optimality_gap,
            r.expected_objective.len(),
            100.0 * r.argmax_agreement
        ),
    )
}

fn c8_causality(dir: &Path) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut violations = 0usize;
    let mut checked = 0usize;
    for _ in 0..50 {
        let l_max = rng.random_range(16u64..=16384);
        let n = rng.random_range(1usize..=8);
        let mut b: Vec<u64> = (0..n).map(|_| rng.random_range(1..=l_max)).collect();
        b.sort_unstable();
        b.dedup();
        let s = BudgetSchedule::explicit(b, l_max).unwrap();
        let adv: Vec<f64> = (1..=s.len() + 1).map(|i| i as f64).collect();
        let spans = token_segment_advantages(&adv, &s, l_max, CreditIndexing::Causal).unwrap();
        for p in 1..=l_max {
            let seg = advantage_at(&spans, p).map_or(0, |a| a as usize);
            let smallest = s.budgets().get(seg.wrapping_sub(1)).copied().unwrap_or(l_max);
            if seg == 0 || smallest < p {
                violations += 1;
            }
            checked += 1;
        }
    }
    // literal assignment: (0, L_2] → Adv_1, (L_i, L_{i+1}] → Adv_i, Adv_{N+1} unused
    let s = BudgetSchedule::explicit(vec![512, 1024, 2048, 4096, 8192], 16384).unwrap();
    let adv = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let lit = token_segment_advantages(&adv, &s, 16384, CreditIndexing::Literal).unwrap();
    let expect = [(1, 1.0), (1024, 1.0), (1025, 2.0), (2048, 2.0), (2049, 3.0), (4097, 4.0), (8193, 5.0), (16384, 5.0)];
    let literal_ok = expect.iter().all(|&(p, a)| advantage_at(&lit, p) == Some(a))
        && lit.iter().all(|sp| sp.advantage != 6.0);

    std::fs::write(dir.join("lit.json"), r#"{"steps": 3, "compat_paper_indexing": true}"#).unwrap();
    let o = reo(&["sim", "train", "--config", "lit.json", "--out-dir", "c8"], dir);
    let flagged = o.status.success() && {
        let r: TrainingReport = ingest::parse_training(
            &std::fs::read_to_string(dir.join("c8/report.json")).unwrap(),
            Path::new("report.json"),
        )
        .unwrap();
        r.credit_indexing == "literal" && !r.causal_credit
    };
    outcome(
        violations == 0 && literal_ok && flagged,
        format!("{checked} positions, {violations} violations; literal mode reproduced: {literal_ok}, flagged: {flagged}"),
    )
}

fn c9_qspec() -> Outcome {
    let l_max = 16384;
    let grid = uniform_grid(l_max).unwrap();
    let (base, _) = make_task_suite(9, 30, l_max, 8).unwrap();
    let mut tasks: Vec<SyntheticTask> = base.tasks.clone();
    for (i, t) in tasks.iter_mut().enumerate() {
        t.guess_prob = 0.0;
        if i % 5 == 0 {
            // put some solve lengths exactly on the grid
            t.solve_length = grid.budgets()[1 + i % (grid.len() / 2)];
        }
    }
    let suite = TaskSuite { tasks, bin_lengths: log_spaced_bins(l_max, 8).unwrap(), ..base };
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let history = bin_history(&suite, &grid, 4, &mut rng).unwrap();
    let table = question_min_budget(&history).unwrap();
    let mut wrong = 0;
    let mut on_grid = 0;
    for t in &suite.tasks {
        let expected = grid.budgets().iter().copied().find(|&b| b >= t.solve_length).unwrap();
        on_grid += usize::from(expected == t.solve_length);
        wrong += usize::from(table.get(&t.question_id).map(|b| b.l_x) != Some(expected));
    }
    outcome(
        wrong == 0,
        format!("{} questions ({on_grid} with s on the grid), {wrong} mismatches", suite.tasks.len()),
    )
}

fn c10_determinism(dir: &Path) -> Outcome {
    let runs: Vec<Vec<&str>> = vec![
        vec!["--threads", "2", "sim", "train", "--config", "cfg.json", "--seed", "1", "--out-dir", "OUT"],
        vec!["sim", "make-suite", "--seed", "1", "-o", "OUT/suite.json"],
        vec!["sim", "rollouts", "--suite", "suite.json", "--seed", "3", "-o", "OUT/r.jsonl"],
        vec!["frontier", "bundled", "qwen3-4b", "-o", "OUT/f.json"],
        vec!["frontier", "build", "--rollouts", "r.jsonl", "-o", "OUT/fb.json"],
        vec!["budgets", "qspec", "--rollouts", "r.jsonl", "-o", "OUT/q.csv"],
        vec!["budgets", "select", "--method", "greedy", "--frontier", "bundled:qwen3-4b", "-o", "OUT/s.json"],
        vec!["reg", "--curve", "f.json", "--frontier", "bundled:deepseek-7b", "-o", "OUT/reg.json", "--csv", "OUT/reg.csv"],
        vec!["export", "csv", "f.json", "-o", "OUT/f.csv"],
        vec!["export", "csv", "report.json", "-o", "OUT/report2.csv"],
        vec!["export", "svg", "--curve", "f.json", "--frontier", "bundled:qwen3-8b", "-o", "OUT/p.svg"],
    ];
    let files = [
        "report.json", "report.csv", "suite.json", "r.jsonl", "f.json", "fb.json", "q.csv", "s.json",
        "reg.json", "reg.csv", "f.csv", "report2.csv", "p.svg",
    ];
    for out in ["a", "b"] {
        let od = dir.join(out);
        std::fs::create_dir_all(&od).unwrap();
        std::fs::copy(dir.join("cfg.json"), od.join("cfg.json")).unwrap();
        for args in &runs {
            let args: Vec<String> = args.iter().map(|a| a.replace("OUT/", "").replace("OUT", ".")).collect();
            let args: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
            // later commands read earlier outputs from the same run
            let o = reo(&args, &od);
            if !o.status.success() {
                return outcome(false, format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)));
            }
        }
    }
    let differing: Vec<&str> = files
        .iter()
        .copied()
        .filter(|f| std::fs::read(dir.join("a").join(f)).ok() != std::fs::read(dir.join("b").join(f)).ok())
        .collect();
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} outputs byte-identical across two runs", files.len())
        } else {
            format!("differ: {differing:?}")
        },
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("greedy N=5 approximation error < 1% on bundled frontiers, < 1 s each", Box::new(c1_greedy)),
        ("exponential N=5 error < 5% and greedy ≤ exponential", Box::new(c2_exponential)),
        ("bundled frontier values round-trip bit-exactly", Box::new(|| c3_golden(d))),
        ("REG(f, f) = 0, member REG ≥ 0, default weights sum to 16384", Box::new(c4_reg)),
        ("trapezoid exact on piecewise-linear curves (1e-9)", Box::new(c5_quadrature)),
        ("exact gradient vs finite differences and sampled estimator", Box::new(c6_gradient)),
        ("sim train reaches within 2% of the oracle optimum", Box::new(|| c7_training(d))),
        ("credit causality and literal indexing switch", Box::new(|| c8_causality(d))),
        ("Q-Spec minimum budgets recover solve lengths", Box::new(c9_qspec)),
        ("determinism of sim train and exports", Box::new(|| c10_determinism(d))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("{} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
