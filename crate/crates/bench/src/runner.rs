//! Multi-repetition experiment runner.

use ltc_core::metrics::{hindsight_static_solution, violation_metrics};
use ltc_core::{
    BasicOptions, BasicState, DecisionPoint, ExpertPool, FeasibleSet, HistoryMode, RoundRecord, ViolationMetrics,
};
use rayon::prelude::*;

use crate::config::{AlgorithmSpec, ExperimentConfig};
use crate::env::play;
use crate::instance::{generate, Instance};
use crate::BenchError;

/// Metrics of one run at one checkpoint `T_k`, over rounds `1..=T_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointStats {
    pub t: usize,
    pub cum_loss: f64,
    pub ccv: f64,
    pub plain: f64,
    /// Cumulative loss minus the best fixed feasible point's, both over `1..=T_k`.
    pub regret_static: f64,
    pub violation: ViolationMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmRun {
    pub name: String,
    pub checkpoints: Vec<CheckpointStats>,
    /// Largest `|Σ_i w_i ℓ_i|` over rounds, for expert pools.
    pub max_self_loss: Option<f64>,
    /// Constraint count, for the violation sandwich.
    pub m: usize,
    pub records: Option<Vec<RoundRecord>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionResult {
    pub repetition: usize,
    /// Best static objective at each checkpoint.
    pub hindsight: Vec<f64>,
    pub runs: Vec<AlgorithmRun>,
}

/// One CSV row: an algorithm at a checkpoint, aggregated over repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub t: usize,
    pub cum_loss_mean: f64,
    pub cum_loss_sd: f64,
    pub ccv_mean: f64,
    pub ccv_sd: f64,
    pub plain_violation_mean: f64,
    pub regret_static_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub repetitions: Vec<RepetitionResult>,
}

impl ResultTable {
    pub fn row(&self, algorithm: &str, t: usize) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm && r.t == t)
    }

    pub fn algorithms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.algorithm.as_str()) {
                out.push(&r.algorithm);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Keep every round's record in the per-repetition results.
    pub keep_records: bool,
}

/// The learners play on `[−1,1]^p` from the origin.
pub fn feasible_set(p: usize) -> FeasibleSet {
    FeasibleSet::cube(p, -1.0, 1.0).expect("p validated")
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ResultTable, BenchError> {
    run_experiment_with(config, RunOptions::default())
}

pub fn run_experiment_with(config: &ExperimentConfig, options: RunOptions) -> Result<ResultTable, BenchError> {
    config.validate()?;
    let specs = config.algorithm_specs()?;
    if specs.is_empty() {
        return Ok(ResultTable::default());
    }
    // indexed collect keeps repetition order regardless of scheduling
    let repetitions = (0..config.repetitions)
        .into_par_iter()
        .map(|rep| run_repetition(config, &specs, rep, options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResultTable { rows: aggregate(&specs, &config.checkpoints, &repetitions), repetitions })
}

pub fn run_repetition(
    config: &ExperimentConfig,
    specs: &[AlgorithmSpec],
    rep: usize,
    options: RunOptions,
) -> Result<RepetitionResult, BenchError> {
    let inst = generate(config.problem_kind(), config.p, config.m, config.horizon, config.seed, rep as u64);
    let set = feasible_set(config.p);
    let loss = inst.loss();
    let g = inst.constraints();
    let hindsight = config
        .checkpoints
        .iter()
        .map(|&t| {
            hindsight_static_solution(&loss, t, &g, &set).map(|s| s.objective).map_err(|source| BenchError::Run {
                context: format!("repetition {rep}: hindsight comparator at T = {t}"),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let runs = specs
        .iter()
        .map(|spec| {
            run_algorithm(spec, &inst, &set, &config.checkpoints, &hindsight, options).map_err(|source| {
                BenchError::Run { context: format!("repetition {rep}, algorithm {:?}", spec.name()), source }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RepetitionResult { repetition: rep, hindsight, runs })
}

pub fn run_algorithm(
    spec: &AlgorithmSpec,
    inst: &Instance,
    set: &FeasibleSet,
    checkpoints: &[usize],
    hindsight: &[f64],
    options: RunOptions,
) -> ltc_core::Result<AlgorithmRun> {
    let loss = inst.loss();
    let g = inst.constraints();
    let x1 = DecisionPoint::zeros(set.dim());
    let rounds = inst.rounds();
    let (records, max_self_loss) = match spec {
        AlgorithmSpec::Basic { schedule, penalty, .. } => {
            let opts = BasicOptions { history: HistoryMode::Off, penalty: *penalty, ..BasicOptions::default() };
            let mut learner = BasicState::new(x1, *schedule, g.clone(), set.clone(), opts)?;
            (play(&mut learner, &loss, &g, rounds)?, None)
        }
        AlgorithmSpec::Expert { params, .. } => {
            // a one-round window keeps the pool's trace without storing expert histories
            let opts = BasicOptions { history: HistoryMode::Window(1), ..BasicOptions::default() };
            let mut pool = ExpertPool::new(params, x1, g.clone(), set.clone(), opts)?;
            let records = play(&mut pool, &loss, &g, rounds)?;
            let worst = pool.trace().iter().map(|r| r.mixture_loss.abs()).fold(0.0, f64::max);
            (records, Some(worst))
        }
    };
    let mut stats = Vec::with_capacity(checkpoints.len());
    let mut cum_loss = 0.0;
    let mut done = 0;
    for (&t, &best) in checkpoints.iter().zip(hindsight) {
        cum_loss += records[done..t].iter().map(|r| r.loss).sum::<f64>();
        done = t;
        let violation = violation_metrics(&records[..t]);
        stats.push(CheckpointStats {
            t,
            cum_loss,
            ccv: violation.ccv,
            plain: violation.plain,
            regret_static: cum_loss - best,
            violation,
        });
    }
    Ok(AlgorithmRun {
        name: spec.name().to_string(),
        checkpoints: stats,
        max_self_loss,
        m: g.count(),
        records: options.keep_records.then_some(records),
    })
}

/// Mean and sample standard deviation (zero for a single value), summed in order.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn aggregate(specs: &[AlgorithmSpec], checkpoints: &[usize], reps: &[RepetitionResult]) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for (a, spec) in specs.iter().enumerate() {
        for (k, &t) in checkpoints.iter().enumerate() {
            let col = |f: &dyn Fn(&CheckpointStats) -> f64| -> Vec<f64> {
                reps.iter().map(|r| f(&r.runs[a].checkpoints[k])).collect()
            };
            let (cum_loss_mean, cum_loss_sd) = mean_sd(&col(&|s| s.cum_loss));
            let (ccv_mean, ccv_sd) = mean_sd(&col(&|s| s.ccv));
            rows.push(ResultRow {
                algorithm: spec.name().to_string(),
                t,
                cum_loss_mean,
                cum_loss_sd,
                ccv_mean,
                ccv_sd,
                plain_violation_mean: mean_sd(&col(&|s| s.plain)).0,
                regret_static_mean: mean_sd(&col(&|s| s.regret_static)).0,
            });
        }
    }
    rows
}
