//! The demo's operations as plain Rust, so they run and test without a browser.

use ltc_bench::config::AlgorithmType;
use ltc_bench::instance::{generate, ProblemKind};
use ltc_bench::presets;
use ltc_bench::runner::{feasible_set, run_algorithm, RunOptions};
use ltc_core::metrics::{hindsight_static_solution, violation_metrics};
use ltc_core::prox::{solve_prox_detailed, ProxProblem, ProxSolverParams};
use serde::Serialize;

pub const MAX_ROUNDS: usize = 20_000;
/// Points per curve; enough for a smooth polyline.
pub const CURVE_POINTS: usize = 60;
const P: usize = 2;
const M: usize = 3;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Series {
    pub algorithm: String,
    pub cum_loss: Vec<f64>,
    pub ccv: Vec<f64>,
    pub plain: Vec<f64>,
    pub final_regret: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Curves {
    pub t: Vec<usize>,
    pub hindsight: f64,
    pub series: Vec<Series>,
}

/// One online LP run with the clipped learner, the expert pool and the
/// unconstrained baseline, sampled at `CURVE_POINTS` rounds.
pub fn curves(seed: u64, repetition: u64, rounds: usize, c: f64, kappa: f64) -> Result<Curves, String> {
    if !(1..=MAX_ROUNDS).contains(&rounds) {
        return Err(format!("rounds must be in 1..={MAX_ROUNDS}, got {rounds}"));
    }
    let mut config = presets::online_lp();
    config.horizon = rounds;
    config.repetitions = 1;
    config.seed = seed;
    config.checkpoints = vec![rounds];
    for alg in &mut config.algorithms {
        alg.c = Some(c);
        if alg.kind == AlgorithmType::Expert {
            alg.kappa = Some(kappa);
        }
    }
    config.validate().map_err(|e| e.to_string())?;
    let specs = config.algorithm_specs().map_err(|e| e.to_string())?;

    let inst = generate(ProblemKind::OnlineLp, P, M, rounds, seed, repetition);
    let set = feasible_set(P);
    let best = hindsight_static_solution(&inst.loss(), rounds, &inst.constraints(), &set)
        .map_err(|e| e.to_string())?
        .objective;
    let t = sample_rounds(rounds);
    let mut series = Vec::with_capacity(specs.len());
    for spec in &specs {
        let run = run_algorithm(spec, &inst, &set, &[rounds], &[best], RunOptions { keep_records: true })
            .map_err(|e| format!("{}: {e}", spec.name()))?;
        let records = run.records.expect("records kept");
        let mut out = Series {
            algorithm: run.name,
            cum_loss: Vec::with_capacity(t.len()),
            ccv: Vec::with_capacity(t.len()),
            plain: Vec::with_capacity(t.len()),
            final_regret: run.checkpoints[0].regret_static,
        };
        let mut loss = 0.0;
        let mut done = 0;
        for &upto in &t {
            loss += records[done..upto].iter().map(|r| r.loss).sum::<f64>();
            done = upto;
            let v = violation_metrics(&records[..upto]);
            out.cum_loss.push(loss);
            out.ccv.push(v.ccv);
            out.plain.push(v.plain);
        }
        series.push(out);
    }
    Ok(Curves { t, hindsight: best, series })
}

/// Strictly increasing rounds ending at `rounds`.
pub fn sample_rounds(rounds: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (1..=CURVE_POINTS).map(|k| (k * rounds).div_ceil(CURVE_POINTS)).collect();
    t.dedup();
    t
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Constraint {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ProxView {
    pub constraints: Vec<Constraint>,
    /// Projection of the gradient step with no penalty.
    pub projected: Vec<f64>,
    pub point: Vec<f64>,
    pub objective: f64,
    pub multipliers: Vec<f64>,
    pub g_values: Vec<f64>,
}

/// `argmin_{y ∈ [−1,1]²} a⟨d, y⟩ + Σ c [g_j(y)]₊ + ‖y − z‖²` on the
/// constraints of the seeded LP instance.
pub fn prox_view(seed: u64, anchor: [f64; 2], direction: [f64; 2], step: f64, penalty: f64) -> Result<ProxView, String> {
    if !(penalty >= 0.0 && penalty.is_finite()) {
        return Err(format!("penalty must be finite and nonnegative, got {penalty}"));
    }
    let inst = generate(ProblemKind::OnlineLp, P, M, 1, seed, 0);
    let g = inst.constraints();
    let set = feasible_set(P);
    let weights = vec![penalty; M];
    let problem =
        ProxProblem { anchor: &anchor, direction: &direction, step, penalty: &weights, constraints: &g, set: &set };
    let sol = solve_prox_detailed(&problem, &ProxSolverParams::default()).map_err(|e| e.to_string())?;
    let zero = [0.0; M];
    let free = ProxProblem { penalty: &zero, ..problem };
    let projected = solve_prox_detailed(&free, &ProxSolverParams::default()).map_err(|e| e.to_string())?;
    let g_values = g.values(sol.point.coords()).map_err(|e| e.to_string())?;
    Ok(ProxView {
        constraints: (0..M).map(|j| Constraint { a: inst.a.row(j).to_vec(), b: inst.b[j] }).collect(),
        projected: projected.point.into_inner(),
        point: sol.point.into_inner(),
        objective: sol.objective,
        multipliers: sol.multipliers,
        g_values,
    })
}

/// Prox solutions as the penalty weight sweeps `0..=max_penalty` in `steps` steps.
pub fn penalty_path(
    seed: u64,
    anchor: [f64; 2],
    direction: [f64; 2],
    step: f64,
    max_penalty: f64,
    steps: usize,
) -> Result<Vec<[f64; 2]>, String> {
    if steps == 0 || steps > 1000 {
        return Err(format!("steps must be in 1..=1000, got {steps}"));
    }
    (0..=steps)
        .map(|k| {
            let view = prox_view(seed, anchor, direction, step, max_penalty * k as f64 / steps as f64)?;
            Ok([view.point[0], view.point[1]])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_rounds_are_increasing_and_end_at_horizon() {
        for rounds in [1, 7, 60, 61, 5000] {
            let t = sample_rounds(rounds);
            assert!(t.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(*t.last().unwrap(), rounds);
            assert!(t[0] >= 1);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(curves(1, 0, 0, 0.5, 0.5).is_err());
        assert!(curves(1, 0, MAX_ROUNDS + 1, 0.5, 0.5).is_err());
        assert!(curves(1, 0, 100, 1.5, 0.5).is_err());
        assert!(prox_view(1, [0.0, 0.0], [1.0, 1.0], 0.5, -1.0).is_err());
        assert!(penalty_path(1, [0.0, 0.0], [1.0, 1.0], 0.5, 1.0, 0).is_err());
    }
}
