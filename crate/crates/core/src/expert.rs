//! Expert tracking over clipped primal–dual learners.
//!
//! `N` learners run side by side with step sizes `α₀·2^{i−1}/t^c` (or
//! `/T^c`), each fed the subgradient observed at the combined decision. That
//! subgradient is exactly the gradient of the surrogate loss
//! `ℓ_t(x) = ⟨∂f_t(x_t), x − x_t⟩`, so no learner ever touches the loss
//! oracle. Hedge weights over the surrogate losses mix the learners' points.

use crate::basic::{BasicOptions, BasicState, HistoryMode, Schedule};
use crate::error::{check_dim, invalid, Result};
use crate::linalg::{dot, sub};
use crate::problem::{ConstraintOracle, DecisionPoint, FeasibleSet};

/// Whether expert step sizes decay with the round index or use the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepFamily {
    /// `α_{i,t} = α₀·2^{i−1}/t^c`
    #[default]
    PerRound,
    /// `α_{i,t} = α₀·2^{i−1}/T^c`
    FixedHorizon,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaParams {
    pub experts: usize,
    pub beta: f64,
    pub kappa: f64,
    pub c: f64,
    pub alpha0: f64,
    pub beta0: f64,
    pub gamma0: f64,
    pub horizon: usize,
    pub family: StepFamily,
}

impl MetaParams {
    /// `N = ⌈κ log₂(1 + T)⌉ + 1`, `β = β₀/T^c`.
    pub fn tuned(
        horizon: usize,
        kappa: f64,
        c: f64,
        alpha0: f64,
        beta0: f64,
        gamma0: f64,
        family: StepFamily,
    ) -> Result<Self> {
        if horizon == 0 {
            return invalid("horizon must be at least 1");
        }
        if !(c > 0.0 && c < 1.0) {
            return invalid(format!("c must lie in (0, 1), got {c}"));
        }
        if !(kappa >= 0.0 && kappa <= c) {
            return invalid(format!("kappa must lie in [0, c] = [0, {c}], got {kappa}"));
        }
        for (name, v) in [("alpha0", alpha0), ("beta0", beta0), ("gamma0", gamma0)] {
            if !(v > 0.0 && v.is_finite()) {
                return invalid(format!("{name} must be positive and finite, got {v}"));
            }
        }
        let t = horizon as f64;
        let experts = (kappa * (1.0 + t).log2()).ceil() as usize + 1;
        Ok(MetaParams {
            experts,
            beta: beta0 / t.powf(c),
            kappa,
            c,
            alpha0,
            beta0,
            gamma0,
            horizon,
            family,
        })
    }

    /// Schedule of expert `i` (1-based).
    pub fn expert_schedule(&self, i: usize) -> Result<Schedule> {
        if i == 0 || i > self.experts {
            return invalid(format!("expert index {i} outside 1..={}", self.experts));
        }
        let alpha0 = self.alpha0 * 2f64.powi(i as i32 - 1);
        match self.family {
            StepFamily::PerRound => Schedule::anytime_dynamic(alpha0, self.c, self.gamma0),
            StepFamily::FixedHorizon => Schedule::fixed_horizon(alpha0, self.c, self.horizon, self.gamma0),
        }
    }
}

/// Hedge weights on the probability simplex, updated in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgeWeights {
    weights: Vec<f64>,
}

impl HedgeWeights {
    /// The prior `w_{i,1} = (N+1)/(i(i+1)N)`, which sums to one.
    pub fn prior(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("need at least one expert");
        }
        let nf = n as f64;
        let weights = (1..=n).map(|i| (nf + 1.0) / ((i * (i + 1)) as f64 * nf)).collect();
        Ok(HedgeWeights { weights })
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return invalid("weights must be positive and sum to one");
        }
        Ok(HedgeWeights { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `w_i ← w_i e^{−β l_i} / Σ_k w_k e^{−β l_k}`
    pub fn update(&mut self, beta: f64, losses: &[f64]) -> Result<()> {
        check_dim("hedge losses", self.weights.len(), losses.len())?;
        let logits: Vec<f64> = self.weights.iter().zip(losses).map(|(w, l)| w.ln() - beta * l).collect();
        let shift = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !shift.is_finite() {
            return invalid("hedge update produced non-finite weights");
        }
        let mut total = 0.0;
        for (w, z) in self.weights.iter_mut().zip(&logits) {
            *w = (z - shift).exp();
            total += *w;
        }
        for w in &mut self.weights {
            *w /= total;
        }
        Ok(())
    }

    /// `Σ_i w_i x_i`, summed in index order.
    pub fn combine<'a>(&self, points: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for (w, x) in self.weights.iter().zip(points) {
            if out.is_empty() {
                out = vec![0.0; x.len()];
            }
            for (o, xi) in out.iter_mut().zip(x) {
                *o += w * xi;
            }
        }
        out
    }
}

/// One round of the mixture, logged after the weights moved.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolRecord {
    /// Round whose losses were observed.
    pub t: usize,
    /// `l_i = ⟨∂f_t(x_t), x_{i,t} − x_t⟩`
    pub surrogate_losses: Vec<f64>,
    /// `Σ_i w_{i,t} l_i`, the surrogate loss of the combined decision.
    pub mixture_loss: f64,
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExpertPool {
    experts: Vec<BasicState>,
    hedge: HedgeWeights,
    beta: f64,
    combined: DecisionPoint,
    t: usize,
    trace: Vec<PoolRecord>,
    keep_trace: bool,
}

impl ExpertPool {
    /// All experts start at `x1`, so the combined decision is `x1` as well.
    pub fn new(
        params: &MetaParams,
        x1: DecisionPoint,
        constraints: ConstraintOracle,
        set: FeasibleSet,
        options: BasicOptions,
    ) -> Result<Self> {
        if !(params.beta > 0.0 && params.beta.is_finite()) {
            return invalid("beta must be positive and finite");
        }
        let experts = (1..=params.experts)
            .map(|i| {
                BasicState::new(x1.clone(), params.expert_schedule(i)?, constraints.clone(), set.clone(), options)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpertPool {
            experts,
            hedge: HedgeWeights::prior(params.experts)?,
            beta: params.beta,
            combined: x1,
            t: 1,
            trace: Vec::new(),
            keep_trace: options.history != HistoryMode::Off,
        })
    }

    pub fn round(&self) -> usize {
        self.t
    }

    pub fn current(&self) -> &DecisionPoint {
        &self.combined
    }

    pub fn weights(&self) -> &[f64] {
        self.hedge.weights()
    }

    pub fn experts(&self) -> &[BasicState] {
        &self.experts
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn trace(&self) -> &[PoolRecord] {
        &self.trace
    }

    /// Feed `∂f_t(x_t)` observed at the combined decision; returns `x_{t+1}`.
    pub fn step(&mut self, observed_subgrad: &[f64]) -> Result<DecisionPoint> {
        check_dim("observed subgradient", self.combined.dim(), observed_subgrad.len())?;
        let losses: Vec<f64> = self
            .experts
            .iter()
            .map(|e| dot(observed_subgrad, &sub(e.current(), &self.combined)))
            .collect();
        let mixture_loss = dot(self.hedge.weights(), &losses);

        // Experts are independent within a round; the weight update below is
        // the only coupling.
        for e in &mut self.experts {
            e.step(observed_subgrad)?;
        }
        self.hedge.update(self.beta, &losses)?;
        let next = self.hedge.combine(self.experts.iter().map(|e| e.current().coords()));
        self.combined = DecisionPoint::new(next)?;

        if self.keep_trace {
            self.trace.push(PoolRecord {
                t: self.t,
                surrogate_losses: losses,
                mixture_loss,
                weights: self.hedge.weights().to_vec(),
            });
        }
        self.t += 1;
        Ok(self.combined.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn expert_count_from_recipe() {
        let p = MetaParams::tuned(5000, 0.5, 0.5, 2.0, 3.0, 1.0, StepFamily::PerRound).unwrap();
        assert_eq!(p.experts, 8);
        assert!((p.beta - 3.0 / 5000f64.sqrt()).abs() < 1e-15);
        let one = MetaParams::tuned(5000, 0.0, 0.5, 2.0, 3.0, 1.0, StepFamily::PerRound).unwrap();
        assert_eq!(one.experts, 1);
        assert!(MetaParams::tuned(5000, 0.6, 0.5, 2.0, 3.0, 1.0, StepFamily::PerRound).is_err());
    }

    #[test]
    fn expert_schedules_double() {
        let p = MetaParams::tuned(100, 0.5, 0.5, 2.0, 3.0, 1.0, StepFamily::FixedHorizon).unwrap();
        let s3 = p.expert_schedule(3).unwrap();
        assert!((s3.alpha(7) - 8.0 / 10.0).abs() < 1e-15);
        assert!(p.expert_schedule(0).is_err());
    }

    #[test]
    fn prior_weights() {
        let w = HedgeWeights::prior(3).unwrap();
        let want = [2.0 / 3.0, 2.0 / 9.0, 1.0 / 9.0];
        for (a, b) in w.weights().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(HedgeWeights::prior(1).unwrap().weights(), &[1.0]);
    }

    #[test]
    fn hedge_update_examples() {
        let mut w = HedgeWeights::from_weights(vec![0.5, 0.5]).unwrap();
        w.update(0.7, &[0.0, 0.0]).unwrap();
        assert_eq!(w.weights(), &[0.5, 0.5]);
        w.update(1.0, &[0.0, std::f64::consts::LN_2]).unwrap();
        assert!((w.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((w.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hedge_survives_huge_losses() {
        let mut w = HedgeWeights::prior(4).unwrap();
        w.update(1.0, &[1e4, 2e4, 1e4 + 1.0, 5e3]).unwrap();
        let s: f64 = w.weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-12 && w.weights().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn pool_starts_at_x1_and_stays_put_when_experts_agree() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let g = ConstraintOracle::affine(a, vec![1.0]).unwrap();
        let set = FeasibleSet::cube(2, -1.0, 1.0).unwrap();
        let params = MetaParams::tuned(100, 0.5, 0.5, 0.1, 1.0, 0.3, StepFamily::PerRound).unwrap();
        let x1 = DecisionPoint::new(vec![0.2, -0.1]).unwrap();
        let mut pool = ExpertPool::new(&params, x1.clone(), g, set, BasicOptions::default()).unwrap();
        assert_eq!(pool.current(), &x1);
        let before = pool.weights().to_vec();
        pool.step(&[1.0, -0.5]).unwrap();
        // all experts sat at the combined point, so every surrogate loss is zero
        assert!(pool.trace()[0].surrogate_losses.iter().all(|&l| l == 0.0));
        for (a, b) in pool.weights().iter().zip(&before) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
