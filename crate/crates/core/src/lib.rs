//! Reasoning-efficiency math over token budgets.
//!
//! This crate is `no_std` (it needs `alloc`) and holds the pure parts of the
//! toolkit:
//!
//! - [`curves`]: budget grids, budget–accuracy curves, trapezoidal weights and
//!   approximate integrals over token budgets.
//! - [`frontier`]: pointwise-max efficiency frontiers, the efficiency gap
//!   metric and the bundled published frontiers.
//! - [`schedules`]: exponential, linear and frontier-greedy budget schedules,
//!   approximation error, per-question minimum budgets.
//! - [`reorl`]: dense budget rewards, segment returns, group-normalized
//!   advantages, token credit and a score-function trainer.
//! - [`sim`]: a synthetic task suite with toy length-choice policies and exact
//!   oracles for the objective and its gradient.
//!
//! File formats, CSV/SVG export and the command line live in the `reo` crate.

#![no_std]

extern crate alloc;

pub mod curves;
pub mod error;
pub mod exec;
pub mod frontier;
pub mod reorl;
pub mod rollouts;
pub mod schedules;
pub mod sim;

pub use curves::{BudgetAccuracyCurve, BudgetGrid, WeightVector};
pub use error::{Error, Result};
pub use frontier::{FrontierCurve, RegReport};
pub use rollouts::{RolloutRecord, RolloutSet};
pub use schedules::{BudgetSchedule, QuestionBudgetTable, ScheduleMethod};
