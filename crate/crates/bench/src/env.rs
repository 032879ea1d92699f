//! The online protocol: commit a decision, then see the round's loss.

use ltc_core::{BasicState, ConstraintOracle, DecisionPoint, ExpertPool, LossOracle, RoundRecord};

/// A learner exposes its committed decision and learns only from the
/// subgradient revealed at that decision.
pub trait Learner {
    fn decision(&self) -> &DecisionPoint;
    fn observe(&mut self, subgrad: &[f64]) -> ltc_core::Result<()>;
}

impl Learner for BasicState {
    fn decision(&self) -> &DecisionPoint {
        self.current()
    }

    fn observe(&mut self, subgrad: &[f64]) -> ltc_core::Result<()> {
        self.step(subgrad).map(|_| ())
    }
}

impl Learner for ExpertPool {
    fn decision(&self) -> &DecisionPoint {
        self.current()
    }

    fn observe(&mut self, subgrad: &[f64]) -> ltc_core::Result<()> {
        self.step(subgrad).map(|_| ())
    }
}

/// Play rounds `1..=rounds`. Round `t`'s loss is evaluated only at the
/// decision already committed for round `t`.
pub fn play(
    learner: &mut impl Learner,
    loss: &LossOracle,
    g: &ConstraintOracle,
    rounds: usize,
) -> ltc_core::Result<Vec<RoundRecord>> {
    let mut records = Vec::with_capacity(rounds);
    for t in 1..=rounds {
        let x = learner.decision().clone();
        let (value, subgrad) = loss.evaluate(t, &x)?;
        let g_values = g.values(&x)?;
        records.push(RoundRecord::new(t, x, value, g_values));
        learner.observe(&subgrad)?;
    }
    Ok(records)
}
