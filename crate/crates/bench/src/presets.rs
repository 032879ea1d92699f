//! Published experiment setups at desk scale.

use crate::config::{AlgorithmConfig, AlgorithmType, ExperimentConfig, FamilyName, KindName, ScheduleName};

pub const CHECKPOINTS: [usize; 4] = [625, 1250, 2500, 5000];

fn blank(name: &str, kind: AlgorithmType) -> AlgorithmConfig {
    AlgorithmConfig {
        name: name.into(),
        kind,
        schedule: None,
        alpha0: None,
        c: None,
        gamma0: None,
        mu: None,
        path_length: None,
        kappa: None,
        beta0: None,
        family: None,
    }
}

/// Online LP: `α_t = 2/T^c`, `γ_t = T^{c/2}`, `β = 3/T^c`, `c = κ = 0.5`.
pub fn online_lp() -> ExperimentConfig {
    let basic = AlgorithmConfig {
        schedule: Some(ScheduleName::FixedHorizon),
        alpha0: Some(2.0),
        c: Some(0.5),
        gamma0: Some(2f64.sqrt()),
        ..blank("algorithm1", AlgorithmType::Basic)
    };
    let expert = AlgorithmConfig {
        alpha0: Some(2.0),
        c: Some(0.5),
        kappa: Some(0.5),
        beta0: Some(3.0),
        gamma0: Some(2f64.sqrt()),
        family: Some(FamilyName::FixedHorizon),
        ..blank("algorithm2", AlgorithmType::Expert)
    };
    let ogd = AlgorithmConfig {
        schedule: Some(ScheduleName::FixedHorizon),
        alpha0: Some(2.0),
        c: Some(0.5),
        gamma0: Some(2f64.sqrt()),
        ..blank("unconstrained", AlgorithmType::Unconstrained)
    };
    ExperimentConfig {
        kind: KindName::OnlineLp,
        p: 2,
        m: 3,
        horizon: 5000,
        repetitions: 50,
        seed: 42,
        checkpoints: CHECKPOINTS.to_vec(),
        output_dir: "results/online_lp".into(),
        algorithms: vec![basic, expert, ogd],
    }
}

/// Online QP: `α_t = 6/t`, `γ_t = √t`.
pub fn online_qp() -> ExperimentConfig {
    let sc = |name: &str, kind| AlgorithmConfig {
        schedule: Some(ScheduleName::StronglyConvex),
        mu: Some(1.0 / 6.0),
        gamma0: Some(6f64.sqrt()),
        ..blank(name, kind)
    };
    ExperimentConfig {
        kind: KindName::OnlineQp,
        output_dir: "results/online_qp".into(),
        algorithms: vec![sc("algorithm1", AlgorithmType::Basic), sc("unconstrained", AlgorithmType::Unconstrained)],
        ..online_lp()
    }
}
