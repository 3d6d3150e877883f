//! Efficiency frontiers and the efficiency gap metric.
//!
//! A frontier is the pointwise maximum of a set of budget–accuracy curves on
//! a shared grid. The gap of a model is the area between the frontier and the
//! model's curve on `[0, l_max]`, both integrated with the same trapezoidal
//! nodes.

pub mod bundled;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::curves::{integral_approx, BudgetAccuracyCurve, BudgetGrid};
use crate::error::{Error, Result};

/// Provenance tag carried by every node of a bundled frontier.
pub const BUNDLED_PROVENANCE: &str = "published-frontier";

/// `l_max` of the default evaluation grid.
pub const DEFAULT_REG_L_MAX: u64 = 16384;

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierCurve {
    curve: BudgetAccuracyCurve,
    provenance: Vec<String>,
}

impl FrontierCurve {
    pub fn new(curve: BudgetAccuracyCurve, provenance: Vec<String>) -> Result<Self> {
        if provenance.len() != curve.grid().len() {
            return Err(Error::validation(format!(
                "frontier has {} provenance entries for {} nodes",
                provenance.len(),
                curve.grid().len()
            )));
        }
        Ok(Self { curve, provenance })
    }

    /// A frontier made of a single curve; every node is attributed to it.
    pub fn from_curve(curve: BudgetAccuracyCurve) -> Self {
        let provenance = alloc::vec![curve.label().to_string(); curve.grid().len()];
        Self { curve, provenance }
    }

    pub fn curve(&self) -> &BudgetAccuracyCurve {
        &self.curve
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn into_curve(self) -> BudgetAccuracyCurve {
        self.curve
    }

    /// Running maximum along the grid. Never applied implicitly.
    pub fn monotone_envelope(&self) -> Self {
        let mut values = Vec::with_capacity(self.provenance.len());
        let mut provenance = Vec::with_capacity(self.provenance.len());
        let mut best: Option<(f64, &String)> = None;
        for (&v, p) in self.curve.values().iter().zip(&self.provenance) {
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, p));
            }
            let (b, bp) = best.unwrap();
            values.push(b);
            provenance.push(bp.clone());
        }
        let curve = BudgetAccuracyCurve::new(
            self.curve.grid().clone(),
            values,
            self.curve.label(),
        )
        .expect("running max of valid values is valid");
        Self { curve, provenance }
    }
}

/// Pointwise maximum over curves sharing one grid. Ties at a node are
/// attributed to the lexicographically smallest label.
pub fn build_frontier(curves: &[BudgetAccuracyCurve]) -> Result<FrontierCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::validation("cannot build a frontier from zero curves"))?;
    let grid = first.grid();
    if let Some(c) = curves.iter().find(|c| c.grid() != grid) {
        return Err(Error::validation(format!(
            "curve '{}' does not share the grid of curve '{}'",
            c.label(),
            first.label()
        )));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut provenance = Vec::with_capacity(grid.len());
    for node in 0..grid.len() {
        let mut best = first;
        for c in &curves[1..] {
            let (v, b) = (c.values()[node], best.values()[node]);
            if v > b || (v == b && c.label() < best.label()) {
                best = c;
            }
        }
        values.push(best.values()[node]);
        provenance.push(best.label().to_string());
    }
    let curve = BudgetAccuracyCurve::new(grid.clone(), values, "frontier")?;
    Ok(FrontierCurve { curve, provenance })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegReport {
    /// `frontier_area − curve_area`, in accuracy × tokens. Negative when the
    /// curve beats the frontier.
    pub reg: f64,
    pub frontier_area: f64,
    pub curve_area: f64,
    pub grid_used: BudgetGrid,
    pub l_max: u64,
}

impl RegReport {
    /// Gap as a fraction of the frontier area.
    pub fn relative(&self) -> f64 {
        self.reg / self.frontier_area
    }
}

/// Efficiency gap of `curve` against `frontier`, both integrated on the
/// positive nodes of `eval_grid` with endpoints `0` and `eval_grid.l_max()`.
pub fn reg(
    curve: &BudgetAccuracyCurve,
    frontier: &FrontierCurve,
    eval_grid: &BudgetGrid,
) -> Result<RegReport> {
    let l_max = eval_grid.l_max();
    let schedule = eval_grid.to_schedule(l_max)?;
    let frontier_area = integral_approx(frontier.curve(), &schedule)?;
    let curve_area = integral_approx(curve, &schedule)?;
    Ok(RegReport {
        reg: frontier_area - curve_area,
        frontier_area,
        curve_area,
        grid_used: eval_grid.clone(),
        l_max,
    })
}

/// `{64 i | 0 ≤ i < 16} ∪ {1024 i | 1 ≤ i ≤ 16}` with `l_max = 16384`.
pub fn default_reg_grid() -> BudgetGrid {
    let budgets = (0..16u64)
        .map(|i| 64 * i)
        .chain((1..=16u64).map(|i| 1024 * i))
        .collect();
    BudgetGrid::new(budgets, DEFAULT_REG_L_MAX).expect("static grid is valid")
}

/// Names accepted by [`bundled_frontier`].
pub fn bundled_families() -> impl Iterator<Item = &'static str> {
    bundled::FAMILIES.iter().map(|(name, _)| *name)
}

/// One of the four bundled frontiers: `deepseek-1.5b`, `deepseek-7b`,
/// `qwen3-4b` or `qwen3-8b`.
pub fn bundled_frontier(family: &str) -> Result<FrontierCurve> {
    let (_, values) = bundled::FAMILIES
        .iter()
        .find(|(name, _)| *name == family)
        .ok_or_else(|| Error::NotFound(format!("bundled frontier '{family}'")))?;
    let grid = BudgetGrid::from_budgets(bundled::BUDGETS.to_vec())?;
    let curve = BudgetAccuracyCurve::new(grid, values.to_vec(), family)?;
    let provenance = alloc::vec![String::from(BUNDLED_PROVENANCE); curve.grid().len()];
    FrontierCurve::new(curve, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(budgets: &[u64], values: &[f64], label: &str) -> BudgetAccuracyCurve {
        let grid = BudgetGrid::from_budgets(budgets.to_vec()).unwrap();
        BudgetAccuracyCurve::new(grid, values.to_vec(), label).unwrap()
    }

    #[test]
    fn single_curve_frontier() {
        let c = curve(&[0, 1024], &[0.1, 0.5], "A");
        let f = build_frontier(&[c.clone()]).unwrap();
        assert_eq!(f.curve().values(), c.values());
        assert_eq!(f.provenance(), &["A", "A"]);
    }

    #[test]
    fn pointwise_max_with_provenance() {
        let a = curve(&[0, 1024], &[0.1, 0.5], "A");
        let b = curve(&[0, 1024], &[0.2, 0.4], "B");
        let f = build_frontier(&[a, b]).unwrap();
        assert_eq!(f.curve().values(), &[0.2, 0.5]);
        assert_eq!(f.provenance(), &["B", "A"]);
    }

    #[test]
    fn ties_go_to_smallest_label() {
        let z = curve(&[0, 1024], &[0.3, 0.3], "zeta");
        let a = curve(&[0, 1024], &[0.3, 0.1], "alpha");
        let f = build_frontier(&[z, a]).unwrap();
        assert_eq!(f.provenance(), &["alpha", "zeta"]);
    }

    #[test]
    fn frontier_errors() {
        assert!(build_frontier(&[]).is_err());
        let a = curve(&[0, 1024], &[0.1, 0.5], "A");
        let b = curve(&[0, 2048], &[0.1, 0.5], "B");
        assert!(build_frontier(&[a, b]).is_err());
    }

    #[test]
    fn monotone_envelope_is_running_max() {
        let f = bundled_frontier("qwen3-4b").unwrap();
        let vals = f.curve().values();
        // the published list dips at its last node
        assert!(vals[47] < vals[45]);
        let env = f.monotone_envelope();
        assert_eq!(env.curve().values()[47], vals[45]);
        assert!(env.curve().values().windows(2).all(|w| w[0] <= w[1]));
        // not applied implicitly
        assert_eq!(bundled_frontier("qwen3-4b").unwrap().curve().values()[47], vals[47]);
    }

    #[test]
    fn reg_identities() {
        let grid = default_reg_grid();
        let f = bundled_frontier("deepseek-7b").unwrap();
        let r = reg(f.curve(), &f, &grid).unwrap();
        assert_eq!(r.reg, 0.0);
        assert_eq!(r.l_max, 16384);

        let zero = curve(&[0, 16384], &[0.0, 0.0], "zero");
        let one = FrontierCurve::from_curve(curve(&[0, 16384], &[1.0, 1.0], "one"));
        assert_eq!(reg(&zero, &one, &grid).unwrap().reg, 16384.0);
        // a curve above the frontier yields a negative gap
        assert_eq!(reg(one.curve(), &FrontierCurve::from_curve(zero), &grid).unwrap().reg, -16384.0);
    }

    #[test]
    fn default_grid_shape() {
        let g = default_reg_grid();
        assert_eq!(g.len(), 32);
        assert_eq!(&g.budgets()[..3], &[0, 64, 128]);
        assert_eq!(g.budgets()[31], 16384);
        assert_eq!(g.l_max(), 16384);
    }

    #[test]
    fn bundled_lookup() {
        assert_eq!(bundled_frontier("deepseek-1.5b").unwrap().curve().values()[0], 0.06101600796568627);
        assert_eq!(
            bundled_frontier("qwen3-8b").unwrap().curve().value_at(1024).unwrap(),
            0.29307789522058825
        );
        assert_eq!(
            bundled_frontier("deepseek-7b").unwrap().curve().value_at(32768).unwrap(),
            0.6532877604166667
        );
        assert_eq!(
            bundled_frontier("deepseek-1.5b").unwrap().curve().value_at(1024).unwrap(),
            0.29287109375
        );
        assert!(matches!(bundled_frontier("gpt"), Err(Error::NotFound(_))));
        for family in bundled_families() {
            let f = bundled_frontier(family).unwrap();
            assert_eq!(f.curve().grid().len(), 48);
            assert!(f.provenance().iter().all(|p| p == BUNDLED_PROVENANCE));
        }
    }
}
