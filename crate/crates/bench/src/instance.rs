//! Random online LP and QP instances.

use ltc_core::{ConstraintOracle, LossOracle, Matrix};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::rng::stream;

/// Coefficient of the linear term in the QP loss `‖x − θ‖² + 20⟨θ, x⟩`.
pub const QP_SCALE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    OnlineLp,
    OnlineQp,
}

/// One repetition's data: `g(x) = Ax − b` and the cost sequence `θ_1..θ_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub kind: ProblemKind,
    pub a: Matrix,
    pub b: Vec<f64>,
    pub theta: Vec<Vec<f64>>,
    pub parts: ThetaParts,
}

/// The three summands of every `θ_t`, kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaParts {
    pub noise: Vec<Vec<f64>>,
    pub drift: Vec<Vec<f64>>,
    /// `(−1)^{μ(t)}`, shared by all coordinates.
    pub sign: Vec<f64>,
}

impl Instance {
    pub fn constraints(&self) -> ConstraintOracle {
        ConstraintOracle::affine(self.a.clone(), self.b.clone()).expect("generated data is valid")
    }

    pub fn loss(&self) -> LossOracle {
        let theta = self.theta.clone();
        match self.kind {
            ProblemKind::OnlineLp => LossOracle::linear(theta),
            ProblemKind::OnlineQp => LossOracle::quadratic(theta, QP_SCALE),
        }
        .expect("generated data is valid")
    }

    pub fn rounds(&self) -> usize {
        self.theta.len()
    }
}

/// `θ_{2,t}` is drawn from `[−1, 0]` on these closed round ranges, `[0, 1]` elsewhere.
pub const NEGATIVE_DRIFT: [(usize, usize); 3] = [(1, 1500), (2000, 3500), (4000, 5000)];

pub fn drift_is_negative(t: usize) -> bool {
    NEGATIVE_DRIFT.iter().any(|&(lo, hi)| (lo..=hi).contains(&t))
}

/// `A ∈ [0,2]^{m×p}`, `b ∈ [0,5]^m`, `θ_t = θ_{1,t} + θ_{2,t} + θ_{3,t}` where
/// `θ_1` is uniform on `±t^{1/10}`, `θ_2` is the regime drift, and `θ_3` is the
/// all-equal sign vector `(−1)^{μ(t)}` for a uniform permutation `μ` of `1..T`.
pub fn generate(kind: ProblemKind, p: usize, m: usize, rounds: usize, seed: u64, repetition: u64) -> Instance {
    let mut rng = stream(seed, repetition, "constraints");
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..p).map(|_| rng.gen_range(0.0..=2.0)).collect()).collect();
    let b: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..=5.0)).collect();
    let a = Matrix::from_rows(&rows).expect("rectangular and finite");

    let mut noise = stream(seed, repetition, "theta-noise");
    let mut drift = stream(seed, repetition, "theta-drift");
    let mut perm: Vec<usize> = (1..=rounds).collect();
    perm.shuffle(&mut stream(seed, repetition, "theta-sign"));

    let mut parts = ThetaParts { noise: Vec::new(), drift: Vec::new(), sign: Vec::new() };
    for t in 1..=rounds {
        let reach = (t as f64).powf(0.1);
        let (lo, hi) = if drift_is_negative(t) { (-1.0, 0.0) } else { (0.0, 1.0) };
        parts.noise.push((0..p).map(|_| noise.gen_range(-reach..=reach)).collect());
        parts.drift.push((0..p).map(|_| drift.gen_range(lo..=hi)).collect());
        parts.sign.push(if perm[t - 1] % 2 == 0 { 1.0 } else { -1.0 });
    }
    let theta = (0..rounds)
        .map(|i| (0..p).map(|k| parts.noise[i][k] + parts.drift[i][k] + parts.sign[i]).collect())
        .collect();
    Instance { kind, a, b, theta, parts }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drift_boundaries_are_closed() {
        assert!(drift_is_negative(1) && drift_is_negative(1500));
        assert!(!drift_is_negative(1501) && !drift_is_negative(1999));
        assert!(drift_is_negative(2000) && drift_is_negative(3500));
        assert!(!drift_is_negative(3501) && drift_is_negative(4000) && drift_is_negative(5000));
        assert!(!drift_is_negative(5001));
    }

    #[test]
    fn same_seed_same_instance() {
        let a = generate(ProblemKind::OnlineLp, 2, 3, 50, 7, 3);
        let b = generate(ProblemKind::OnlineLp, 2, 3, 50, 7, 3);
        assert_eq!(a, b);
        assert_ne!(a, generate(ProblemKind::OnlineLp, 2, 3, 50, 7, 4));
    }
}
