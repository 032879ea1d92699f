#![allow(dead_code)]

use ltc_core::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn square() -> FeasibleSet {
    FeasibleSet::cube(2, -1.0, 1.0).unwrap()
}

/// `A ∈ [0,2]^{m×2}`, `b ∈ [0, b_max]^m`; the corner (−1,−1) is always feasible.
pub fn random_affine(rng: &mut impl Rng, m: usize, b_max: f64) -> ConstraintOracle {
    let rows: Vec<Vec<f64>> = (0..m).map(|_| vec![rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0)]).collect();
    let b = (0..m).map(|_| rng.gen_range(0.0..b_max)).collect();
    ConstraintOracle::affine(Matrix::from_rows(&rows).unwrap(), b).unwrap()
}

/// Drifting linear costs with a random sign flip each round.
pub fn random_thetas(rng: &mut impl Rng, rounds: usize) -> Vec<Vec<f64>> {
    (1..=rounds)
        .map(|t| {
            let drift = if (t / 50) % 2 == 0 { -1.0 } else { 0.5 };
            let flip = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (0..2).map(|_| rng.gen_range(-1.0..1.0) + drift + flip).collect()
        })
        .collect()
}

pub fn point(rng: &mut impl Rng, set: &FeasibleSet) -> DecisionPoint {
    let raw: Vec<f64> = (0..set.dim()).map(|_| rng.gen_range(-1.5..1.5)).collect();
    set.project(&raw).unwrap()
}

/// Play `loss` for its full horizon, feeding each revealed subgradient back.
pub fn run_basic(state: &mut BasicState, loss: &LossOracle) -> Vec<RoundRecord> {
    let mut out = Vec::new();
    for t in 1..=loss.rounds() {
        let x = state.current().clone();
        let rec = RoundRecord::observe(t, x.clone(), loss, state.constraints()).unwrap();
        let grad = loss.subgradient(t, &x).unwrap();
        out.push(rec);
        state.step(&grad).unwrap();
    }
    out
}

pub fn run_pool(pool: &mut ExpertPool, loss: &LossOracle, g: &ConstraintOracle) -> Vec<RoundRecord> {
    let mut out = Vec::new();
    for t in 1..=loss.rounds() {
        let x = pool.current().clone();
        out.push(RoundRecord::observe(t, x.clone(), loss, g).unwrap());
        let grad = loss.subgradient(t, &x).unwrap();
        pool.step(&grad).unwrap();
    }
    out
}
