//! Property suites run by `certify` and by the acceptance tests.
//!
//! Each check returns a [`Check`] rather than panicking, so a caller can
//! report every outcome before deciding how to fail.

use std::fmt;
use std::time::Instant;

use ltc_core::linalg::{dist_sq, dot, norm};
use ltc_core::metrics::{growth_exponent, hindsight_static_solution};
use ltc_core::prox::{brute_force_prox, solve_prox_detailed};
use ltc_core::{
    BasicOptions, BasicState, ComparatorSequence, ConstraintOracle, DecisionPoint, ExpertPool, HedgeWeights,
    Matrix, MetaParams, ProxProblem, ProxSolverParams, Schedule, StepFamily,
};
use rand::Rng;

use crate::config::ExperimentConfig;
use crate::emit::to_csv;
use crate::env::play;
use crate::instance::{generate, ProblemKind};
use crate::rng::stream;
use crate::runner::{feasible_set, run_experiment, ResultTable};
use crate::BenchError;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(id: &'static str, name: &'static str, passed: bool, detail: String) -> Self {
        Check { id, name, passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {:<3} {}: {}", self.id, self.name, self.detail)
    }
}

fn core_err(context: &str) -> impl Fn(ltc_core::Error) -> BenchError + '_ {
    move |source| BenchError::Run { context: context.to_string(), source }
}

/// A random prox instance on `[−1,1]²` with up to three affine constraints.
struct ProxCase {
    g: ConstraintOracle,
    z: Vec<f64>,
    d: Vec<f64>,
    a: f64,
    c: Vec<f64>,
}

impl ProxCase {
    fn draw(rng: &mut impl Rng) -> Self {
        let m = rng.gen_range(1..=3);
        let rows: Vec<Vec<f64>> = (0..m).map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)]).collect();
        let b = (0..m).map(|_| rng.gen_range(0.0..1.5)).collect();
        ProxCase {
            g: ConstraintOracle::affine(Matrix::from_rows(&rows).expect("finite"), b).expect("shapes agree"),
            z: vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
            d: vec![rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)],
            a: rng.gen_range(0.01..1.0),
            c: (0..m).map(|_| rng.gen_range(0.0..5.0)).collect(),
        }
    }
}

/// Solver objective within `1e−3` of the brute-force grid on random 2-D
/// instances, in under a minute.
pub fn prox_oracle(seed: u64, instances: usize) -> Result<Check, BenchError> {
    let set = feasible_set(2);
    let params = ProxSolverParams::default();
    let mut rng = stream(seed, 0, "certify-prox-oracle");
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..instances {
        let case = ProxCase::draw(&mut rng);
        let pb = ProxProblem {
            anchor: &case.z,
            direction: &case.d,
            step: case.a,
            penalty: &case.c,
            constraints: &case.g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &params).map_err(core_err("prox solve"))?;
        let (_, oracle) = brute_force_prox(&pb, 1e-3).map_err(core_err("grid oracle"))?;
        worst = worst.max(sol.objective - oracle);
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Check::new(
        "1",
        "prox oracle equivalence",
        worst <= 1e-3 && secs < 60.0,
        format!("{instances} instances, max(solver - oracle) = {worst:.3e} (limit 1e-3), {secs:.1} s (limit 60 s)"),
    ))
}

/// `⟨y − x, ∂h(y)⟩ ≤ ‖x − z‖² − ‖x − y‖² − ‖y − z‖² + 10·tol` for sampled `x`.
pub fn prox_variational_inequality(seed: u64, instances: usize, samples: usize) -> Result<Check, BenchError> {
    let set = feasible_set(2);
    let params = ProxSolverParams::default();
    let slack = 10.0 * params.tol;
    let mut rng = stream(seed, 0, "certify-prox-vi");
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..instances {
        let case = ProxCase::draw(&mut rng);
        let pb = ProxProblem {
            anchor: &case.z,
            direction: &case.d,
            step: case.a,
            penalty: &case.c,
            constraints: &case.g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &params).map_err(core_err("prox solve"))?;
        let y = sol.point.coords();
        let pen = sol.penalty_subgradient(&case.g).map_err(core_err("penalty subgradient"))?;
        let sub: Vec<f64> = case.d.iter().zip(&pen).map(|(d, p)| case.a * d + p).collect();
        for _ in 0..samples {
            let x = [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
            let lhs = dot(&sub, &[y[0] - x[0], y[1] - x[1]]);
            let rhs = dist_sq(&x, &case.z) - dist_sq(&x, y) - dist_sq(y, &case.z);
            worst = worst.max(lhs - rhs);
        }
    }
    Ok(Check::new(
        "2",
        "prox variational inequality",
        worst <= slack,
        format!("{instances} instances x {samples} points, max excess = {worst:.3e} (slack {slack:.0e})"),
    ))
}

fn lp_learner(seed: u64, rep: u64, rounds: usize) -> Result<(BasicState, crate::instance::Instance), BenchError> {
    let inst = generate(ProblemKind::OnlineLp, 2, 3, rounds, seed, rep);
    let schedule = Schedule::fixed_horizon(2.0, 0.5, rounds, 2f64.sqrt()).map_err(core_err("schedule"))?;
    let state = BasicState::new(
        DecisionPoint::zeros(2),
        schedule,
        inst.constraints(),
        feasible_set(2),
        BasicOptions::default(),
    )
    .map_err(core_err("learner"))?;
    Ok((state, inst))
}

/// First repetition whose run clips a positive violation, so the dual checks
/// are not vacuous. Falls back to repetition 0.
fn violating_rep(seed: u64, rounds: usize) -> Result<u64, BenchError> {
    for rep in 0..MAX_REP_SCAN {
        let (mut state, inst) = lp_learner(seed, rep, rounds)?;
        play(&mut state, &inst.loss(), &inst.constraints(), rounds).map_err(core_err("run"))?;
        let (clipped, _) = state.l1_telescoping().map_err(core_err("telescoping"))?;
        if clipped > 0.0 {
            return Ok(rep);
        }
    }
    Ok(0)
}

const MAX_REP_SCAN: u64 = 256;

/// `q ≥ 0`, `q` nondecreasing every round, and the ℓ1 telescoping identity.
pub fn dual_invariants(seed: u64, rounds: usize) -> Result<Check, BenchError> {
    let rep = violating_rep(seed, rounds)?;
    let (mut state, inst) = lp_learner(seed, rep, rounds)?;
    let loss = inst.loss();
    let mut prev = state.dual().q.clone();
    let mut monotone = true;
    for t in 1..=rounds {
        let grad = loss.subgradient(t, state.current()).map_err(core_err("loss"))?;
        state.step(&grad).map_err(core_err("learner step"))?;
        let q = &state.dual().q;
        monotone &= q.iter().zip(&prev).all(|(now, before)| *now >= *before && *now >= 0.0);
        monotone &= state.dual().q_hat.iter().all(|v| *v >= 0.0);
        prev.clone_from(q);
    }
    let (lhs, rhs) = state.l1_telescoping().map_err(core_err("telescoping"))?;
    let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(Check::new(
        "3",
        "dual-state invariants",
        monotone && rel <= 1e-9 && lhs > 0.0,
        format!("rep {rep}, T = {rounds}, q monotone and nonnegative: {monotone}, telescoping {lhs:.6} vs {rhs:.6}, rel err {rel:.2e} (limit 1e-9)"),
    ))
}

/// Weights on the simplex, equal to the closed form, and within the Hedge bound.
pub fn hedge_invariants(seed: u64, runs: usize, rounds: usize) -> Result<Check, BenchError> {
    let set = feasible_set(2);
    let mut worst_simplex: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut largest_pool = 0;
    for run in 0..runs {
        let inst = generate(ProblemKind::OnlineLp, 2, 3, rounds, seed, 1000 + run as u64);
        let c = 0.9;
        let kappa = c * (run % 8) as f64 / 7.0;
        let params = MetaParams::tuned(rounds, kappa, c, 2.0, 3.0, 2f64.sqrt(), StepFamily::PerRound)
            .map_err(core_err("meta params"))?;
        largest_pool = largest_pool.max(params.experts);
        let mut pool = ExpertPool::new(
            &params,
            DecisionPoint::zeros(2),
            inst.constraints(),
            set.clone(),
            BasicOptions { history: ltc_core::HistoryMode::Window(1), ..BasicOptions::default() },
        )
        .map_err(core_err("pool"))?;
        let loss = inst.loss();
        let mut grad_bound: f64 = 0.0;
        for t in 1..=rounds {
            let grad = loss.subgradient(t, pool.current()).map_err(core_err("loss"))?;
            grad_bound = grad_bound.max(norm(&grad));
            pool.step(&grad).map_err(core_err("pool step"))?;
        }
        let prior = HedgeWeights::prior(params.experts).map_err(core_err("prior"))?;
        let mut totals = vec![0.0; params.experts];
        for rec in pool.trace() {
            let sum: f64 = rec.weights.iter().sum();
            worst_simplex = worst_simplex.max((sum - 1.0).abs());
            if rec.weights.iter().any(|w| *w < 0.0) {
                worst_simplex = f64::INFINITY;
            }
            for (acc, l) in totals.iter_mut().zip(&rec.surrogate_losses) {
                *acc += l;
            }
            let logits: Vec<f64> =
                prior.weights().iter().zip(&totals).map(|(w, l)| w.ln() - pool.beta() * l).collect();
            let shift = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let raw: Vec<f64> = logits.iter().map(|z| (z - shift).exp()).collect();
            let z: f64 = raw.iter().sum();
            for (w, r) in rec.weights.iter().zip(&raw) {
                let want = r / z;
                if want > 0.0 {
                    worst_closed = worst_closed.max((w - want).abs() / want);
                }
            }
        }
        // Σ⟨g, x_t⟩ − Σ⟨g, x_{i,t}⟩ = −Σ l_{i,t}
        let best = totals
            .iter()
            .zip(prior.weights())
            .map(|(l, w)| l + (1.0 / w).ln() / pool.beta())
            .fold(f64::INFINITY, f64::min);
        let fh = grad_bound * set.diameter();
        let bound = pool.beta() * fh * fh * rounds as f64 / 2.0;
        worst_margin = worst_margin.max(-best - bound);
    }
    Ok(Check::new(
        "4",
        "hedge invariants",
        worst_simplex <= 1e-12 && worst_closed <= 1e-9 && worst_margin <= 0.0,
        format!(
            "{runs} runs, T = {rounds}, N <= {largest_pool}: simplex err {worst_simplex:.1e} (1e-12), closed-form rel err {worst_closed:.1e} (1e-9), max(regret - bound) = {worst_margin:.3e}"
        ),
    ))
}

/// `Σ f_t(x_t) − Σ f_t(y) ≤ Σ Δ_t(y) + Σ G²α_t/2 + T·slack` against the best
/// fixed feasible point.
pub fn aggregate_regret(seed: u64, rounds: usize) -> Result<Check, BenchError> {
    let rep = violating_rep(seed, rounds)?;
    let (mut state, inst) = lp_learner(seed, rep, rounds)?;
    let loss = inst.loss();
    let g = inst.constraints();
    play(&mut state, &loss, &g, rounds).map_err(core_err("run"))?;
    let best = hindsight_static_solution(&loss, rounds, &g, state.set()).map_err(core_err("hindsight"))?;
    let grad_bound = inst.theta.iter().map(|th| norm(th)).fold(0.0, f64::max);
    let certified = best.certified;
    let cert = state
        .regret_certificate(&ComparatorSequence::Static(best.point), &loss, grad_bound)
        .map_err(core_err("certificate"))?;
    let slack = 10.0 * ProxSolverParams::default().tol;
    Ok(Check::new(
        "5",
        "aggregate regret inequality",
        certified && cert.holds(slack),
        format!(
            "rep {rep}, T = {rounds}, certified comparator: {certified}, lhs = {:.4}, rhs + T*slack = {:.4}",
            cert.lhs,
            cert.rhs + rounds as f64 * slack
        ),
    ))
}

/// Fitted exponent of a column over the table's checkpoints.
pub fn exponent_of(table: &ResultTable, algorithm: &str, value: fn(&crate::ResultRow) -> f64) -> Result<f64, BenchError> {
    let points: Vec<(f64, f64)> =
        table.rows.iter().filter(|r| r.algorithm == algorithm).map(|r| (r.t as f64, value(r))).collect();
    let fit = growth_exponent(&points).map_err(core_err("growth fit"))?;
    Ok(fit.exponent)
}

fn last_row<'a>(table: &'a ResultTable, algorithm: &str) -> Result<&'a crate::ResultRow, BenchError> {
    table
        .rows
        .iter()
        .filter(|r| r.algorithm == algorithm)
        .max_by_key(|r| r.t)
        .ok_or_else(|| BenchError::Table(format!("no rows for {algorithm:?}")))
}

/// Orderings and growth rates on the online LP setup.
pub fn lp_reproduction(table: &ResultTable) -> Result<Vec<Check>, BenchError> {
    let a1 = last_row(table, "algorithm1")?;
    let a2 = last_row(table, "algorithm2")?;
    let first = table
        .rows
        .iter()
        .filter(|r| r.algorithm == "algorithm1")
        .min_by_key(|r| r.t)
        .expect("algorithm1 has rows");
    let e = exponent_of(table, "algorithm1", |r| r.ccv_mean)?;
    let (early, late) = (first.regret_static_mean / first.t as f64, a1.regret_static_mean / a1.t as f64);
    Ok(vec![
        Check::new(
            "6a",
            "expert tracking loses less",
            a2.cum_loss_mean <= a1.cum_loss_mean,
            format!("T = {}: algorithm2 {:.4} vs algorithm1 {:.4}", a1.t, a2.cum_loss_mean, a1.cum_loss_mean),
        ),
        Check::new(
            "6b",
            "LP violation growth",
            e <= 0.6,
            format!("algorithm1 ccv exponent {e:.4} (limit 0.6)"),
        ),
        Check::new(
            "6c",
            "LP static regret sublinear",
            late < early,
            format!("regret/T: {late:.5} at T = {} vs {early:.5} at T = {}", a1.t, first.t),
        ),
    ])
}

pub fn qp_reproduction(table: &ResultTable) -> Result<Check, BenchError> {
    let e = exponent_of(table, "algorithm1", |r| r.ccv_mean)?;
    Ok(Check::new("7", "QP violation growth", e <= 0.35, format!("algorithm1 ccv exponent {e:.4} (limit 0.35)")))
}

/// `plain ≤ ccv_l1_form ≤ ccv ≤ √m·ccv_l1_form` at every checkpoint of every run.
pub fn sandwich(tables: &[&ResultTable]) -> Check {
    let mut checked = 0;
    let mut broken = 0;
    for table in tables {
        for rep in &table.repetitions {
            for run in &rep.runs {
                for cp in &run.checkpoints {
                    checked += 1;
                    if !cp.violation.sandwich_holds(run.m, 1e-12) {
                        broken += 1;
                    }
                }
            }
        }
    }
    Check::new(
        "8",
        "violation metric sandwich",
        checked > 0 && broken == 0,
        format!("{checked} run prefixes checked, {broken} violations"),
    )
}

pub fn determinism(config: &ExperimentConfig, first: &ResultTable) -> Result<Check, BenchError> {
    let again = run_experiment(config)?;
    let (a, b) = (to_csv(first), to_csv(&again));
    Ok(Check::new(
        "9",
        "byte-identical rerun",
        a == b,
        format!("{} bytes, identical: {}", a.len(), a == b),
    ))
}

/// `Σ_i w_i ℓ_i(x_{i,t}) = ℓ_t(x_t) = 0` at every round of every expert run.
pub fn surrogate_self_loss(tables: &[&ResultTable]) -> Check {
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    for table in tables {
        for rep in &table.repetitions {
            for run in &rep.runs {
                if let Some(v) = run.max_self_loss {
                    runs += 1;
                    worst = worst.max(v);
                }
            }
        }
    }
    Check::new(
        "10",
        "surrogate self-loss",
        runs > 0 && worst <= 1e-12,
        format!("{runs} expert runs, max |self-loss| = {worst:.2e} (limit 1e-12)"),
    )
}

/// Scale for the `certify` command and the acceptance tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scale {
    pub seed: u64,
    pub repetitions: usize,
}

impl Default for Scale {
    fn default() -> Self {
        Scale { seed: 42, repetitions: 50 }
    }
}

/// Every check, in order.
pub fn all(scale: Scale) -> Result<Vec<Check>, BenchError> {
    let mut out = vec![
        prox_oracle(scale.seed, 200)?,
        prox_variational_inequality(scale.seed, 50, 100)?,
        dual_invariants(scale.seed, 2000)?,
        hedge_invariants(scale.seed, 50, 200)?,
        aggregate_regret(scale.seed, 500)?,
    ];
    let lp_cfg = ExperimentConfig { seed: scale.seed, repetitions: scale.repetitions, ..crate::presets::online_lp() };
    let qp_cfg = ExperimentConfig { seed: scale.seed, repetitions: scale.repetitions, ..crate::presets::online_qp() };
    let lp = run_experiment(&lp_cfg)?;
    out.extend(lp_reproduction(&lp)?);
    let qp = run_experiment(&qp_cfg)?;
    out.push(qp_reproduction(&qp)?);
    out.push(sandwich(&[&lp, &qp]));
    out.push(determinism(&lp_cfg, &lp)?);
    out.push(surrogate_self_loss(&[&lp]));
    Ok(out)
}
