//! The clipped primal–dual learner.
//!
//! Each round the learner folds the clipped violation of its previous
//! decision into a virtual queue `q`, forms `q̂ = q + γ[g(x)]₊`, and takes a
//! prox step that penalises `⟨q̂, [g(x)]₊⟩`:
//!
//! ```text
//! q_{t−1} = q_{t−2} + γ_{t−1}[g(x_{t−1})]₊
//! q̂_{t−1} = q_{t−1} + γ_{t−1}[g(x_{t−1})]₊
//! x_t     = argmin_{x∈X} α_{t−1}⟨∂f_{t−1}(x_{t−1}), x⟩ + α_{t−1}γ_t⟨q̂_{t−1}, [g(x)]₊⟩ + ‖x − x_{t−1}‖²
//! ```
//!
//! The caller hands in the observed subgradient; the learner never sees the
//! loss oracle, so it cannot peek at `f_t` before committing `x_t`.

use std::collections::VecDeque;

use crate::error::{check_dim, invalid, Result};
use crate::linalg::{dist_sq, norm, norm_l1};
use crate::metrics::ComparatorSequence;
use crate::problem::{ConstraintOracle, DecisionPoint, FeasibleSet, LossOracle, ProblemBounds};
use crate::prox::{solve_prox, ProxProblem, ProxSolverParams};

/// Step-size schedule `α_t` with `γ_t = γ₀ / √α_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `α_t = α₀ / T^c` for a known horizon `T`.
    FixedHorizon { alpha0: f64, c: f64, horizon: usize, gamma0: f64 },
    /// `α_t = 1 / (tμ)` for `μ`-strongly convex losses.
    StronglyConvex { mu: f64, gamma0: f64 },
    /// `α_t = α₀ / t^c`, no horizon needed.
    AnytimeDynamic { alpha0: f64, c: f64, gamma0: f64 },
    /// `AnytimeDynamic` with `α₀ = (1 + P_T)^c` for a known path length `P_T`.
    PathInformed { c: f64, path_length: f64, gamma0: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return invalid(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

fn check_exponent(c: f64) -> Result<()> {
    if !(c > 0.0 && c < 1.0) {
        return invalid(format!("exponent c must lie in (0, 1), got {c}"));
    }
    Ok(())
}

impl Schedule {
    pub fn fixed_horizon(alpha0: f64, c: f64, horizon: usize, gamma0: f64) -> Result<Self> {
        check_positive("alpha0", alpha0)?;
        check_exponent(c)?;
        check_positive("gamma0", gamma0)?;
        if horizon == 0 {
            return invalid("horizon must be at least 1");
        }
        Ok(Schedule::FixedHorizon { alpha0, c, horizon, gamma0 })
    }

    pub fn strongly_convex(mu: f64, gamma0: f64) -> Result<Self> {
        check_positive("mu", mu)?;
        check_positive("gamma0", gamma0)?;
        Ok(Schedule::StronglyConvex { mu, gamma0 })
    }

    pub fn anytime_dynamic(alpha0: f64, c: f64, gamma0: f64) -> Result<Self> {
        check_positive("alpha0", alpha0)?;
        check_exponent(c)?;
        check_positive("gamma0", gamma0)?;
        Ok(Schedule::AnytimeDynamic { alpha0, c, gamma0 })
    }

    pub fn path_informed(c: f64, path_length: f64, gamma0: f64) -> Result<Self> {
        check_exponent(c)?;
        if !(path_length >= 0.0 && path_length.is_finite()) {
            return invalid(format!("path length must be nonnegative, got {path_length}"));
        }
        check_positive("gamma0", gamma0)?;
        Ok(Schedule::PathInformed { c, path_length, gamma0 })
    }

    /// `γ₀ = 1/(√2 G)`, the largest value the regret analysis allows.
    pub fn theoretical_gamma0(bounds: &ProblemBounds) -> f64 {
        1.0 / (std::f64::consts::SQRT_2 * bounds.g)
    }

    pub fn gamma0(&self) -> f64 {
        match *self {
            Schedule::FixedHorizon { gamma0, .. }
            | Schedule::StronglyConvex { gamma0, .. }
            | Schedule::AnytimeDynamic { gamma0, .. }
            | Schedule::PathInformed { gamma0, .. } => gamma0,
        }
    }

    /// `α_t` for round `t ≥ 1`.
    pub fn alpha(&self, t: usize) -> f64 {
        let t = t.max(1) as f64;
        match *self {
            Schedule::FixedHorizon { alpha0, c, horizon, .. } => alpha0 / (horizon as f64).powf(c),
            Schedule::StronglyConvex { mu, .. } => 1.0 / (t * mu),
            Schedule::AnytimeDynamic { alpha0, c, .. } => alpha0 / t.powf(c),
            Schedule::PathInformed { c, path_length, .. } => (1.0 + path_length).powf(c) / t.powf(c),
        }
    }

    /// `γ_t = γ₀ / √α_t`
    pub fn gamma(&self, t: usize) -> f64 {
        self.gamma0() / self.alpha(t).sqrt()
    }

    /// A warning when `γ₀` exceeds `1/(√2 G)`; reproduction configs do this on purpose.
    pub fn theory_warning(&self, bounds: &ProblemBounds) -> Option<String> {
        let limit = Self::theoretical_gamma0(bounds);
        (self.gamma0() > limit).then(|| {
            format!("gamma0 = {} exceeds 1/(sqrt(2) G) = {limit} for G = {}", self.gamma0(), bounds.g)
        })
    }

    /// The same schedule with `α₀` multiplied by `factor` (`μ` divided by it).
    pub fn with_alpha_scaled(&self, factor: f64) -> Result<Self> {
        check_positive("alpha scale", factor)?;
        Ok(match *self {
            Schedule::FixedHorizon { alpha0, c, horizon, gamma0 } => {
                Schedule::FixedHorizon { alpha0: alpha0 * factor, c, horizon, gamma0 }
            }
            Schedule::StronglyConvex { mu, gamma0 } => Schedule::StronglyConvex { mu: mu / factor, gamma0 },
            Schedule::AnytimeDynamic { alpha0, c, gamma0 } => {
                Schedule::AnytimeDynamic { alpha0: alpha0 * factor, c, gamma0 }
            }
            Schedule::PathInformed { c, path_length, gamma0 } => Schedule::AnytimeDynamic {
                alpha0: (1.0 + path_length).powf(c) * factor,
                c,
                gamma0,
            },
        })
    }
}

/// Virtual queue `q` and its look-ahead `q̂`; both stay nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    pub q: Vec<f64>,
    pub q_hat: Vec<f64>,
}

impl DualState {
    pub fn new(m: usize) -> Self {
        DualState { q: vec![0.0; m], q_hat: vec![0.0; m] }
    }

    /// `q ← q + γ·clipped`, `q̂ ← q + γ·clipped`.
    pub fn absorb(&mut self, gamma: f64, clipped: &[f64]) {
        for ((q, qh), v) in self.q.iter_mut().zip(self.q_hat.iter_mut()).zip(clipped) {
            *q += gamma * v;
            *qh = *q + gamma * v;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistoryMode {
    Full,
    /// Keep only the most recent `n` rounds.
    Window(usize),
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicOptions {
    pub history: HistoryMode,
    pub solver: ProxSolverParams,
    /// `false` zeroes the penalty weights: plain online gradient descent over
    /// the set, used as an ablation. The queue is still tracked.
    pub penalty: bool,
}

impl Default for BasicOptions {
    fn default() -> Self {
        BasicOptions { history: HistoryMode::Full, solver: ProxSolverParams::default(), penalty: true }
    }
}

/// What the learner knew about round `t` once it absorbed `x_t`'s violation.
#[derive(Debug, Clone, PartialEq)]
pub struct DualRecord {
    pub t: usize,
    pub x: DecisionPoint,
    pub g_values: Vec<f64>,
    pub clipped: Vec<f64>,
    pub alpha: f64,
    pub gamma: f64,
    /// `q_t`, after absorbing round `t`.
    pub q: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BasicState {
    t: usize,
    x_prev: DecisionPoint,
    dual: DualState,
    schedule: Schedule,
    constraints: ConstraintOracle,
    set: FeasibleSet,
    options: BasicOptions,
    history: VecDeque<DualRecord>,
}

impl BasicState {
    /// Start at `x1 ∈ X` with `q₀ = 0`.
    pub fn new(
        x1: DecisionPoint,
        schedule: Schedule,
        constraints: ConstraintOracle,
        set: FeasibleSet,
        options: BasicOptions,
    ) -> Result<Self> {
        check_dim("initial decision", set.dim(), x1.dim())?;
        check_dim("constraint oracle", set.dim(), constraints.dim())?;
        if !set.contains(&x1, 0.0) {
            return invalid("initial decision lies outside the feasible set");
        }
        options.solver.validate()?;
        if let HistoryMode::Window(0) = options.history {
            return invalid("history window must be positive");
        }
        let m = constraints.count();
        Ok(BasicState {
            t: 1,
            x_prev: x1,
            dual: DualState::new(m),
            schedule,
            constraints,
            set,
            options,
            history: VecDeque::new(),
        })
    }

    /// Index of the current (last committed) decision.
    pub fn round(&self) -> usize {
        self.t
    }

    pub fn current(&self) -> &DecisionPoint {
        &self.x_prev
    }

    pub fn dual(&self) -> &DualState {
        &self.dual
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn constraints(&self) -> &ConstraintOracle {
        &self.constraints
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn options(&self) -> &BasicOptions {
        &self.options
    }

    pub fn history(&self) -> impl ExactSizeIterator<Item = &DualRecord> + '_ {
        self.history.iter()
    }

    /// Absorb the violation of the current decision, then take the prox step
    /// with the observed subgradient `∂f_t(x_t)`. Returns `x_{t+1}`.
    pub fn step(&mut self, observed_subgrad: &[f64]) -> Result<DecisionPoint> {
        check_dim("observed subgradient", self.set.dim(), observed_subgrad.len())?;
        let s = self.t;
        let eval = self.constraints.eval_constraints(&self.x_prev)?;
        let alpha = self.schedule.alpha(s);
        let gamma = self.schedule.gamma(s);
        let gamma_next = self.schedule.gamma(s + 1);

        let mut dual = self.dual.clone();
        dual.absorb(gamma, &eval.clipped);
        let penalty: Vec<f64> = if self.options.penalty {
            dual.q_hat.iter().map(|qh| alpha * gamma_next * qh).collect()
        } else {
            vec![0.0; dual.q_hat.len()]
        };
        let problem = ProxProblem {
            anchor: &self.x_prev,
            direction: observed_subgrad,
            step: alpha,
            penalty: &penalty,
            constraints: &self.constraints,
            set: &self.set,
        };
        let next = solve_prox(&problem, &self.options.solver)?;

        self.dual = dual;
        match self.options.history {
            HistoryMode::Off => {}
            mode => {
                if let HistoryMode::Window(n) = mode {
                    while self.history.len() >= n {
                        self.history.pop_front();
                    }
                }
                self.history.push_back(DualRecord {
                    t: s,
                    x: self.x_prev.clone(),
                    g_values: eval.values,
                    clipped: eval.clipped,
                    alpha,
                    gamma,
                    q: self.dual.q.clone(),
                });
            }
        }
        self.t += 1;
        self.x_prev = next.clone();
        Ok(next)
    }

    fn full_history(&self) -> Result<&VecDeque<DualRecord>> {
        match self.history.front() {
            Some(r) if r.t == 1 && self.options.history == HistoryMode::Full => Ok(&self.history),
            _ => invalid("certificate needs the full history of at least one step"),
        }
    }

    /// Both sides of `Reg ≤ Σ Δ_t(y_t) + Σ G²α_t/2` over the recorded rounds,
    /// with `Δ_t(y) = (‖y − x_t‖² − ‖y − x_{t+1}‖²)/α_t`.
    pub fn regret_certificate(
        &self,
        comparator: &ComparatorSequence,
        loss: &LossOracle,
        grad_bound: f64,
    ) -> Result<RegretCertificate> {
        let hist = self.full_history()?;
        let rounds = hist.len();
        comparator.validate(rounds, &self.constraints, &self.set)?;
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for (i, rec) in hist.iter().enumerate() {
            let y = comparator.at(i);
            let next = hist.get(i + 1).map_or(&self.x_prev, |r| &r.x);
            lhs += loss.value(rec.t, &rec.x)? - loss.value(rec.t, y)?;
            rhs += (dist_sq(y, &rec.x) - dist_sq(y, next)) / rec.alpha;
            rhs += grad_bound * grad_bound * rec.alpha / 2.0;
        }
        Ok(RegretCertificate { lhs, rhs, rounds })
    }

    /// Both sides of the ℓ1 telescoping identity
    /// `Σ ‖[g(x_t)]₊‖₁ = ‖q_T‖₁/γ_T + Σ_{t<T} (1/γ_t − 1/γ_{t+1}) ‖q_t‖₁`.
    pub fn l1_telescoping(&self) -> Result<(f64, f64)> {
        let hist = self.full_history()?;
        let lhs = hist.iter().map(|r| norm_l1(&r.clipped)).sum();
        let last = hist.back().expect("nonempty");
        let mut rhs = norm_l1(&last.q) / last.gamma;
        for w in hist.iter().collect::<Vec<_>>().windows(2) {
            rhs += (1.0 / w[0].gamma - 1.0 / w[1].gamma) * norm_l1(&w[0].q);
        }
        Ok((lhs, rhs))
    }

    /// `√m (‖q_T‖/γ_T + Σ_{t<T} (1/γ_t − 1/γ_{t+1}) ‖q_t‖)`, an upper bound on
    /// the cumulative violation of the recorded rounds.
    pub fn violation_bound(&self) -> Result<f64> {
        let hist = self.full_history()?;
        let m = self.constraints.count() as f64;
        let last = hist.back().expect("nonempty");
        let mut b = norm(&last.q) / last.gamma;
        for w in hist.iter().collect::<Vec<_>>().windows(2) {
            b += (1.0 / w[0].gamma - 1.0 / w[1].gamma) * norm(&w[0].q);
        }
        Ok(m.sqrt() * b)
    }
}

/// Regret against a comparator and the bound it must stay under.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegretCertificate {
    pub lhs: f64,
    pub rhs: f64,
    pub rounds: usize,
}

impl RegretCertificate {
    /// `lhs ≤ rhs + rounds·slack`
    pub fn holds(&self, slack_per_round: f64) -> bool {
        self.lhs <= self.rhs + self.rounds as f64 * slack_per_round
    }
}
