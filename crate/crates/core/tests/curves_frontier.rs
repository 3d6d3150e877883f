use std::collections::BTreeMap;

use proptest::prelude::*;
use reo_core::curves::{build_curve, integral_approx, quadrature_nodes, trapezoid_weights};
use reo_core::frontier::{build_frontier, default_reg_grid, reg, FrontierCurve};
use reo_core::{BudgetAccuracyCurve, BudgetGrid, BudgetSchedule, RolloutRecord, RolloutSet};

fn schedule_strategy() -> impl Strategy<Value = BudgetSchedule> {
    (1u64..=40_000, prop::collection::btree_set(1u64..=40_000, 1..12)).prop_filter_map(
        "budgets above l_max",
        |(l_max, set)| {
            let budgets: Vec<u64> = set.into_iter().filter(|&b| b <= l_max).collect();
            BudgetSchedule::explicit(budgets, l_max).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn weights_sum_to_l_max(s in schedule_strategy()) {
        let w = trapezoid_weights(&s);
        prop_assert_eq!(w.sum(), s.l_max() as f64);
        prop_assert!(w.weights.iter().all(|&x| x >= 0.0));
        let nodes = quadrature_nodes(&s);
        prop_assert_eq!(nodes[0], 0);
        prop_assert_eq!(*nodes.last().unwrap(), s.l_max());
        prop_assert!(nodes.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn constant_curves_integrate_exactly(s in schedule_strategy(), c in 0.0f64..=1.0) {
        let grid = BudgetGrid::new(vec![0, s.l_max()], s.l_max()).unwrap();
        let curve = BudgetAccuracyCurve::new(grid, vec![c, c], "c").unwrap();
        let got = integral_approx(&curve, &s).unwrap();
        prop_assert!((got - c * s.l_max() as f64).abs() <= 1e-9 * s.l_max() as f64);
    }

    #[test]
    fn build_curve_matches_brute_force(
        rows in prop::collection::vec(
            (0usize..2, 0usize..4, prop::collection::vec(any::<bool>(), 4)),
            1..60,
        )
    ) {
        let grid = BudgetGrid::new(vec![0, 100, 1000, 4000], 4000).unwrap();
        let records: Vec<RolloutRecord> = rows
            .iter()
            .enumerate()
            .map(|(i, (m, q, c))| RolloutRecord {
                model_id: format!("m{m}"),
                question_id: format!("q{q}"),
                rollout_id: i.to_string(),
                total_length: 10,
                correct: c.clone(),
            })
            .collect();
        let set = RolloutSet::new(grid.clone(), records).unwrap();
        for m in ["m0", "m1"] {
            // per question: (count, sums per node)
            let mut per_q: BTreeMap<usize, (f64, [f64; 4])> = BTreeMap::new();
            for (mm, q, c) in &rows {
                if format!("m{mm}") != m {
                    continue;
                }
                let e = per_q.entry(*q).or_insert((0.0, [0.0; 4]));
                e.0 += 1.0;
                for k in 0..4 {
                    e.1[k] += c[k] as u8 as f64;
                }
            }
            let built = build_curve(&set, m);
            if per_q.is_empty() {
                prop_assert!(built.is_err());
                continue;
            }
            let curve = built.unwrap();
            for k in 0..4 {
                let expected = per_q.values().map(|(n, s)| s[k] / n).sum::<f64>() / per_q.len() as f64;
                prop_assert!((curve.values()[k] - expected).abs() < 1e-12);
            }
            prop_assert_eq!(curve.label(), m);
        }
    }
}

/// Piecewise-linear curves with knots on the schedule, sampled on a finer
/// grid; the approximate integral must equal the exact area.
#[test]
fn quadrature_is_exact_for_piecewise_linear_curves() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for case in 0..100 {
        let l_max = 64 * rng.random_range(8u64..=512);
        let n = rng.random_range(1usize..=8);
        let mut knots: Vec<u64> = (0..n).map(|_| 64 * rng.random_range(1..=l_max / 64)).collect();
        knots.sort_unstable();
        knots.dedup();
        let schedule = BudgetSchedule::explicit(knots.clone(), l_max).unwrap();

        // knot values at {0} ∪ knots ∪ {l_max}
        let mut xs = vec![0u64];
        xs.extend(knots.iter().copied().filter(|&k| k < l_max));
        xs.push(l_max);
        let ys: Vec<f64> = xs.iter().map(|_| rng.random::<f64>()).collect();

        let exact: f64 = xs
            .windows(2)
            .zip(ys.windows(2))
            .map(|(x, y)| (x[1] - x[0]) as f64 * (y[0] + y[1]) / 2.0)
            .sum();

        let fine: Vec<u64> = (0..=l_max / 64).map(|i| 64 * i).collect();
        let values: Vec<f64> = fine
            .iter()
            .map(|&b| {
                let j = xs.partition_point(|&x| x <= b).min(xs.len() - 1).max(1);
                let (x0, x1) = (xs[j - 1], xs[j]);
                let t = (b - x0) as f64 / (x1 - x0) as f64;
                (ys[j - 1] + t * (ys[j] - ys[j - 1])).clamp(0.0, 1.0)
            })
            .collect();
        let curve =
            BudgetAccuracyCurve::new(BudgetGrid::new(fine, l_max).unwrap(), values, "pl").unwrap();
        let got = integral_approx(&curve, &schedule).unwrap();
        assert!(
            (got - exact).abs() <= 1e-9 * exact.abs().max(1e-300),
            "case {case}: {got} vs {exact}"
        );
    }
}

fn random_curves(seed: u64, n: usize) -> Vec<BudgetAccuracyCurve> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grid = default_reg_grid();
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            let values: Vec<f64> = (0..grid.len())
                .map(|_| {
                    acc = (acc + 0.1 * rng.random::<f64>()).min(1.0);
                    acc
                })
                .collect();
            BudgetAccuracyCurve::new(grid.clone(), values, format!("c{i}")).unwrap()
        })
        .collect()
}

#[test]
fn frontier_is_pointwise_max_with_provenance() {
    let curves = random_curves(5, 10);
    let f = build_frontier(&curves).unwrap();
    for k in 0..f.curve().grid().len() {
        let max = curves.iter().map(|c| c.values()[k]).fold(f64::MIN, f64::max);
        assert_eq!(f.curve().values()[k], max);
        let owner = curves.iter().find(|c| c.label() == f.provenance()[k]).unwrap();
        assert_eq!(owner.values()[k], max);
    }
}

#[test]
fn reg_is_non_negative_for_members() {
    let grid = default_reg_grid();
    for seed in 0..20 {
        let curves = random_curves(seed, 10);
        let f = build_frontier(&curves).unwrap();
        assert_eq!(reg(f.curve(), &f, &grid).unwrap().reg, 0.0);
        for c in &curves {
            assert!(reg(c, &f, &grid).unwrap().reg >= -1e-9);
        }
    }
    let s = grid.to_schedule(grid.l_max()).unwrap();
    assert_eq!(trapezoid_weights(&s).sum(), 16384.0);
}

#[test]
fn reg_hand_example() {
    // frontier 0.75 flat, curve ramps 0 → 0.75 over [0, 16384]
    let grid = BudgetGrid::new(vec![0, 16384], 16384).unwrap();
    let f = FrontierCurve::from_curve(
        BudgetAccuracyCurve::new(grid.clone(), vec![0.75, 0.75], "f").unwrap(),
    );
    let c = BudgetAccuracyCurve::new(grid, vec![0.0, 0.75], "c").unwrap();
    let r = reg(&c, &f, &default_reg_grid()).unwrap();
    assert_eq!(r.frontier_area, 12288.0);
    assert_eq!(r.curve_area, 6144.0);
    assert_eq!(r.reg, 6144.0);
}
