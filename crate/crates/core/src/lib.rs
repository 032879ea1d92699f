//! Online convex optimization with long-term constraints.
//!
//! The learner picks `x_t` from a simple convex set, then sees a subgradient
//! of the round's loss. A fixed constraint `g(x) ≤ 0` only has to hold in
//! the long run: the cumulative clipped violation `Σ ‖[g(x_t)]₊‖` should grow
//! sublinearly while regret stays sublinear too.
//!
//! * [`problem`]: sets, oracles, bounds.
//! * [`prox`]: the penalised projection each round solves.
//! * [`basic`]: the clipped primal–dual learner and its step-size schedules.
//! * [`expert`]: parallel learners with different step sizes mixed by Hedge.
//! * [`metrics`]: regret, violation metrics, comparators, growth fits.

pub mod basic;
pub mod error;
pub mod expert;
pub mod linalg;
pub mod metrics;
pub mod problem;
pub mod prox;

pub use basic::{BasicOptions, BasicState, DualState, HistoryMode, Schedule};
pub use error::{Error, Result};
pub use expert::{ExpertPool, HedgeWeights, MetaParams, StepFamily};
pub use linalg::Matrix;
pub use metrics::{ComparatorSequence, RoundRecord, ViolationMetrics};
pub use problem::{ConstraintOracle, DecisionPoint, FeasibleSet, LossOracle, ProblemBounds};
pub use prox::{ProxProblem, ProxSolverParams};
