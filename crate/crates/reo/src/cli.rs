//! The `reo` command line.
//!
//! Machine output goes to `-o FILE` or standard output; diagnostics go to
//! standard error. Exit status: 0 on success, 1 on usage or validation
//! errors, 2 on I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reo_core::curves::build_curve;
use reo_core::frontier::{self, build_frontier, default_reg_grid, reg};
use reo_core::reorl::{train, TrainConfig};
use reo_core::schedules::{
    self, approx_error, approx_error_abs, exponential_schedule, full_grid_integral,
    greedy_oracle_schedule, linear_schedule, question_min_budget,
};
use reo_core::sim::{make_task_suite, sample_policy_rollouts, trajectories_to_records, uniform_grid};
use reo_core::{BudgetAccuracyCurve, BudgetGrid, BudgetSchedule, FrontierCurve, RolloutSet};

use crate::error::{ReoError, Result};
use crate::exec::RayonExecutor;
use crate::ingest::{self, DocKind};
use crate::svg;

#[derive(Debug, Parser)]
#[command(
    name = "reo",
    version,
    about = "Budget–accuracy curves, efficiency frontiers, budget schedules and dense-reward training on a synthetic suite",
    after_help = "Frontier arguments accept a file path or `bundled:<family>` \
                  (deepseek-1.5b, deepseek-7b, qwen3-4b, qwen3-8b)."
)]
pub struct Cli {
    /// Upper bound on worker threads.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    pub threads: usize,

    /// Print progress to standard error; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or fetch efficiency frontiers.
    #[command(subcommand)]
    Frontier(FrontierCmd),
    /// Build a model's budget–accuracy curve from a rollout log.
    Curve(CurveArgs),
    /// Efficiency gap between a curve and a frontier.
    Reg(RegArgs),
    /// Select budget schedules.
    #[command(subcommand)]
    Budgets(BudgetsCmd),
    /// Relative and absolute quadrature error of a schedule on a frontier.
    ApproxError(ApproxArgs),
    /// Synthetic task suite, rollouts and training.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Convert documents to CSV or plot them as SVG.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Debug, Subcommand)]
pub enum FrontierCmd {
    /// Pointwise maximum over curve documents or over every model in a rollout log.
    Build {
        /// Curve documents sharing one grid.
        #[arg(long = "curve", value_name = "FILE")]
        curves: Vec<PathBuf>,
        /// Rollout log; one curve per model.
        #[arg(long, conflicts_with = "curves")]
        rollouts: Option<PathBuf>,
        /// Replace the frontier by its running maximum.
        #[arg(long)]
        envelope: bool,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Write a bundled frontier; list the families when none is given.
    Bundled {
        family: Option<String>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub rollouts: PathBuf,
    #[arg(long)]
    pub model: String,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegArgs {
    #[arg(long)]
    pub curve: PathBuf,
    /// File path or `bundled:<family>`.
    #[arg(long)]
    pub frontier: String,
    /// Comma-separated evaluation budgets (default: 0,64,…,960,1024,…,16384).
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<u64>>,
    /// Upper integration limit. Truncates the default grid, or overrides the
    /// last budget of `--grid`.
    #[arg(long)]
    pub l_max: Option<u64>,
    /// Report as JSON; standard output when absent.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also write the report as CSV.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exp,
    Linear,
    Greedy,
    Explicit,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, value_enum, default_value = "exp")]
    pub method: Method,
    #[arg(long, default_value_t = schedules::DEFAULT_N)]
    pub n: usize,
    #[arg(long, default_value_t = schedules::DEFAULT_L_MIN)]
    pub l_min: u64,
    #[arg(long, default_value_t = frontier::DEFAULT_REG_L_MAX)]
    pub l_max: u64,
    /// Comma-separated budgets for `--method explicit`.
    #[arg(long, value_delimiter = ',')]
    pub budgets: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
pub enum BudgetsCmd {
    /// Print a schedule as space-separated budgets.
    Select {
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Frontier for `--method greedy`: file path or `bundled:<family>`.
        #[arg(long)]
        frontier: Option<String>,
        /// Also write the schedule as JSON.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Per-question minimum budgets from a rollout history, as CSV.
    Qspec {
        #[arg(long)]
        rollouts: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// File path or `bundled:<family>`.
    #[arg(long)]
    pub frontier: String,
    /// Schedule document; otherwise built from the schedule flags.
    #[arg(long, conflicts_with_all = ["method", "budgets"])]
    pub schedule: Option<PathBuf>,
    #[command(flatten)]
    pub params: ScheduleArgs,
}

#[derive(Debug, Subcommand)]
pub enum SimCmd {
    /// Generate a task suite.
    MakeSuite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        n_questions: usize,
        #[arg(long, default_value_t = 8)]
        bins: usize,
        #[arg(long, default_value_t = frontier::DEFAULT_REG_L_MAX)]
        l_max: u64,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Sample uniform-policy rollouts from a suite as a rollout log.
    Rollouts {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long, default_value_t = 8)]
        per_question: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "uniform")]
        model: String,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Train a toy policy; writes report.json and report.csv.
    Train {
        /// Training config; defaults apply when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExportCmd {
    /// Curve, frontier, reg report or training report as CSV.
    Csv {
        input: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Budget–accuracy plot of curves and an optional frontier.
    Svg {
        #[arg(long = "curve", value_name = "FILE")]
        curves: Vec<PathBuf>,
        /// File path or `bundled:<family>`.
        #[arg(long)]
        frontier: Option<String>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => ingest::write_text(path, text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| ReoError::io("<stdout>", e)),
    }
}

/// `bundled:<family>` or a curve/frontier document.
pub fn resolve_frontier(arg: &str) -> Result<FrontierCurve> {
    match arg.strip_prefix("bundled:") {
        Some(family) => frontier::bundled_frontier(family).map_err(|_| {
            let known: Vec<&str> = frontier::bundled_families().collect();
            ReoError::Usage(format!(
                "unknown bundled frontier '{family}' (known: {})",
                known.join(", ")
            ))
        }),
        None => ingest::read_frontier(Path::new(arg)),
    }
}

fn eval_grid(grid: Option<&[u64]>, l_max: Option<u64>) -> Result<BudgetGrid> {
    let g = match (grid, l_max) {
        (Some(b), Some(l)) => BudgetGrid::new(b.to_vec(), l)?,
        (Some(b), None) => BudgetGrid::from_budgets(b.to_vec())?,
        (None, None) => default_reg_grid(),
        (None, Some(l)) => {
            let mut b: Vec<u64> = default_reg_grid()
                .budgets()
                .iter()
                .copied()
                .filter(|&x| x < l)
                .collect();
            b.push(l);
            BudgetGrid::new(b, l)?
        }
    };
    Ok(g)
}

fn build_schedule(p: &ScheduleArgs, frontier: Option<&FrontierCurve>) -> Result<BudgetSchedule> {
    let s = match p.method {
        Method::Exp => exponential_schedule(p.l_min, p.l_max, p.n)?,
        Method::Linear => linear_schedule(p.l_max, p.n)?,
        Method::Explicit => {
            let budgets = p
                .budgets
                .clone()
                .ok_or_else(|| ReoError::Usage("--method explicit needs --budgets".into()))?;
            BudgetSchedule::explicit(budgets, p.l_max)?
        }
        Method::Greedy => {
            let f = frontier
                .ok_or_else(|| ReoError::Usage("--method greedy needs --frontier".into()))?;
            let candidates: Vec<u64> = f
                .curve()
                .grid()
                .budgets()
                .iter()
                .copied()
                .filter(|&b| b <= p.l_max)
                .collect();
            let grid = BudgetGrid::new(candidates, p.l_max)?;
            greedy_oracle_schedule(f, p.n, &grid)?
        }
    };
    Ok(s)
}

fn warn_collapse(s: &BudgetSchedule) {
    if s.collapsed() {
        eprintln!(
            "warning: {} of {} requested budgets coincide after rounding and were merged",
            s.requested() - s.len(),
            s.requested()
        );
    }
}

fn curves_from_rollouts(set: &RolloutSet) -> Result<Vec<BudgetAccuracyCurve>> {
    set.models()
        .into_iter()
        .map(|m| build_curve(set, m).map_err(ReoError::from))
        .collect()
}

fn dispatch(cli: &Cli) -> Result<()> {
    let verbose = cli.verbose > 0;
    match &cli.command {
        Command::Frontier(FrontierCmd::Build {
            curves,
            rollouts,
            envelope,
            output,
        }) => {
            let curves = match rollouts {
                Some(path) => curves_from_rollouts(&ingest::read_rollouts(path)?)?,
                None => curves
                    .iter()
                    .map(|p| ingest::read_curve(p))
                    .collect::<Result<Vec<_>>>()?,
            };
            if curves.is_empty() {
                return Err(ReoError::Usage("pass --curve FILE at least once, or --rollouts".into()));
            }
            let mut f = build_frontier(&curves)?;
            if *envelope {
                f = f.monotone_envelope();
            }
            emit(output.as_deref(), &ingest::frontier_to_string(&f))
        }
        Command::Frontier(FrontierCmd::Bundled { family, output }) => match family {
            Some(family) => {
                let f = resolve_frontier(&format!("bundled:{family}"))?;
                emit(output.as_deref(), &ingest::frontier_to_string(&f))
            }
            None => {
                let mut list = String::new();
                for name in frontier::bundled_families() {
                    list.push_str(name);
                    list.push('\n');
                }
                emit(output.as_deref(), &list)
            }
        },
        Command::Curve(a) => {
            let set = ingest::read_rollouts(&a.rollouts)?;
            let curve = build_curve(&set, &a.model)?;
            emit(a.output.as_deref(), &ingest::curve_to_string(&curve))
        }
        Command::Reg(a) => {
            let curve = ingest::read_curve(&a.curve)?;
            let f = resolve_frontier(&a.frontier)?;
            let grid = eval_grid(a.grid.as_deref(), a.l_max)?;
            let report = reg(&curve, &f, &grid)?;
            if verbose {
                eprintln!(
                    "reg {} over {} nodes up to {} ({:.4}% of the frontier area)",
                    report.reg,
                    grid.len(),
                    report.l_max,
                    100.0 * report.relative()
                );
            }
            if let Some(path) = &a.csv {
                ingest::write_text(path, &ingest::reg_to_csv(&report))?;
            }
            emit(a.output.as_deref(), &ingest::reg_to_string(&report))
        }
        Command::Budgets(BudgetsCmd::Select {
            schedule,
            frontier,
            output,
        }) => {
            let f = frontier.as_deref().map(resolve_frontier).transpose()?;
            let s = build_schedule(schedule, f.as_ref())?;
            warn_collapse(&s);
            if let Some(path) = output {
                ingest::write_schedule(&s, path)?;
            }
            let line: Vec<String> = s.budgets().iter().map(u64::to_string).collect();
            emit(None, &format!("{}\n", line.join(" ")))
        }
        Command::Budgets(BudgetsCmd::Qspec { rollouts, output }) => {
            let set = ingest::read_rollouts(rollouts)?;
            let table = question_min_budget(&set)?;
            if verbose {
                let unsolved = table.entries.values().filter(|b| b.unsolved).count();
                eprintln!("{} questions, {unsolved} never solved", table.entries.len());
            }
            emit(output.as_deref(), &ingest::question_budgets_to_csv(&table))
        }
        Command::ApproxError(a) => {
            let f = resolve_frontier(&a.frontier)?;
            let s = match &a.schedule {
                Some(path) => ingest::read_schedule(path)?,
                None => build_schedule(&a.params, Some(&f))?,
            };
            warn_collapse(&s);
            let doc = serde_json::json!({
                "method": s.method().as_str(),
                "budgets": s.budgets(),
                "l_max": s.l_max(),
                "reference": full_grid_integral(&f, s.l_max())?,
                "absolute": approx_error_abs(&f, &s)?,
                "relative": approx_error(&f, &s)?,
            });
            let mut text = serde_json::to_string_pretty(&doc).expect("json value serializes");
            text.push('\n');
            emit(None, &text)
        }
        Command::Sim(SimCmd::MakeSuite {
            seed,
            n_questions,
            bins,
            l_max,
            output,
        }) => {
            let (suite, _) = make_task_suite(*seed, *n_questions, *l_max, *bins)?;
            emit(output.as_deref(), &ingest::suite_to_string(&suite))
        }
        Command::Sim(SimCmd::Rollouts {
            suite,
            per_question,
            seed,
            model,
            output,
        }) => {
            let suite = ingest::read_suite(suite)?;
            let grid = uniform_grid(suite.l_max)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let trajs = sample_policy_rollouts(&suite.uniform_policy(), &suite, *per_question, &mut rng);
            let records = trajectories_to_records(&suite, &grid, model, &trajs);
            let set = RolloutSet::new(grid, records)?;
            emit(output.as_deref(), &ingest::rollouts_to_string(&set))
        }
        Command::Sim(SimCmd::Train {
            config,
            seed,
            out_dir,
        }) => {
            let mut cfg = match config {
                Some(path) => ingest::read_config(path)?,
                None => TrainConfig::default(),
            };
            if seed.is_some() {
                cfg.seed = *seed;
            }
            cfg.validate()?;
            let exec = RayonExecutor::new(cli.threads)?;
            let report = train(&cfg, &exec)?;
            std::fs::create_dir_all(out_dir).map_err(|e| ReoError::io(out_dir, e))?;
            ingest::write_text(&out_dir.join("report.json"), &ingest::training_to_string(&report))?;
            ingest::write_text(&out_dir.join("report.csv"), &ingest::training_to_csv(&report))?;
            if verbose {
                eprintln!(
                    "objective {:.4} of optimum {:.4} (gap {:.3}%), argmax agreement {:.0}%",
                    report.final_objective,
                    report.optimum,
                    100.0 * report.optimality_gap,
                    100.0 * report.argmax_agreement
                );
            }
            Ok(())
        }
        Command::Export(ExportCmd::Csv { input, output }) => {
            let text = ingest::read_text(input)?;
            let csv = match ingest::sniff(&text, input)? {
                DocKind::Curve => ingest::curve_doc_to_csv(&text, input)?,
                DocKind::Reg => ingest::reg_to_csv(&ingest::parse_reg(&text, input)?),
                DocKind::Training => ingest::training_to_csv(&ingest::parse_training(&text, input)?),
            };
            emit(output.as_deref(), &csv)
        }
        Command::Export(ExportCmd::Svg {
            curves,
            frontier,
            output,
        }) => {
            let curves = curves
                .iter()
                .map(|p| ingest::read_curve(p))
                .collect::<Result<Vec<_>>>()?;
            let f = frontier.as_deref().map(resolve_frontier).transpose()?;
            emit(output.as_deref(), &svg::render(&curves, f.as_ref())?)
        }
    }
}
