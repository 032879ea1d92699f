//! Experiment configuration files.
//!
//! A config is a TOML document whose keys are exactly the field names of
//! [`ExperimentConfig`]; each algorithm is one `[[algorithms]]` table. Unknown
//! keys, and keys that do not apply to the chosen algorithm type, are errors.

use std::path::Path;

use ltc_core::{MetaParams, ProblemBounds, Schedule, StepFamily};
use serde::{Deserialize, Serialize};

use crate::instance::{ProblemKind, QP_SCALE};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KindName {
    OnlineLp,
    OnlineQp,
}

impl From<KindName> for ProblemKind {
    fn from(k: KindName) -> Self {
        match k {
            KindName::OnlineLp => ProblemKind::OnlineLp,
            KindName::OnlineQp => ProblemKind::OnlineQp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmType {
    /// Clipped primal–dual learner.
    Basic,
    /// Expert tracking over basic learners.
    Expert,
    /// The basic learner with its penalty forced to zero (projected gradient descent).
    Unconstrained,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleName {
    FixedHorizon,
    StronglyConvex,
    AnytimeDynamic,
    PathInformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyName {
    #[serde(rename = "per_round_t")]
    PerRound,
    #[serde(rename = "fixed_horizon_T")]
    FixedHorizon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: AlgorithmType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Omitted means the theoretical `1/(√2 G)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: KindName,
    pub p: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub checkpoints: Vec<usize>,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub algorithms: Vec<AlgorithmConfig>,
}

fn default_output_dir() -> String {
    "results".into()
}

/// A fully resolved learner: every parameter fixed, ready to instantiate.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Basic { name: String, schedule: Schedule, penalty: bool },
    Expert { name: String, params: MetaParams },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &str {
        match self {
            AlgorithmSpec::Basic { name, .. } | AlgorithmSpec::Expert { name, .. } => name,
        }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, BenchError> {
    Err(BenchError::Config(msg.into()))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            BenchError::Config(msg) => BenchError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn problem_kind(&self) -> ProblemKind {
        self.kind.into()
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.p == 0 || self.m == 0 {
            return invalid("p and m must be positive");
        }
        if self.horizon == 0 {
            return invalid("T must be positive");
        }
        if self.repetitions == 0 {
            return invalid("repetitions must be at least 1");
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) || self.checkpoints.first() == Some(&0) {
            return invalid("checkpoints must be positive and strictly increasing");
        }
        if let Some(&last) = self.checkpoints.last() {
            if last > self.horizon {
                return invalid(format!("checkpoint {last} exceeds T = {}", self.horizon));
            }
        }
        self.algorithm_specs().map(|_| ())
    }

    /// Conservative uniform bounds over `[−1,1]^p` for every instance this
    /// config can generate: `|θ_{t,i}| ≤ T^{1/10} + 2`, `A ∈ [0,2]`, `b ∈ [0,5]`.
    pub fn bounds(&self) -> ProblemBounds {
        let p = self.p as f64;
        let theta = p.sqrt() * ((self.horizon as f64).powf(0.1) + 2.0);
        let loss_grad = match self.problem_kind() {
            ProblemKind::OnlineLp => theta,
            ProblemKind::OnlineQp => 2.0 * p.sqrt() + (QP_SCALE - 2.0) * theta,
        };
        let g = loss_grad.max(2.0 * p.sqrt());
        let diameter = 2.0 * p.sqrt();
        let f = (g * diameter).max((self.m as f64).sqrt() * (2.0 * p + 5.0));
        ProblemBounds::new(f, g, diameter).expect("positive by construction")
    }

    pub fn algorithm_specs(&self) -> Result<Vec<AlgorithmSpec>, BenchError> {
        let bounds = self.bounds();
        self.algorithms.iter().map(|a| a.resolve(self.horizon, &bounds)).collect()
    }
}

impl AlgorithmConfig {
    fn resolve(&self, horizon: usize, bounds: &ProblemBounds) -> Result<AlgorithmSpec, BenchError> {
        let ctx = |e: ltc_core::Error| BenchError::Config(format!("algorithm {:?}: {e}", self.name));
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| BenchError::Config(format!("algorithm {:?} needs `{key}`", self.name)))
        };
        let gamma0 = self.gamma0.unwrap_or_else(|| Schedule::theoretical_gamma0(bounds));
        let present: Vec<&str> = [
            ("schedule", self.schedule.is_some()),
            ("alpha0", self.alpha0.is_some()),
            ("c", self.c.is_some()),
            ("mu", self.mu.is_some()),
            ("path_length", self.path_length.is_some()),
            ("kappa", self.kappa.is_some()),
            ("beta0", self.beta0.is_some()),
            ("family", self.family.is_some()),
        ]
        .into_iter()
        .filter_map(|(k, on)| on.then_some(k))
        .collect();
        let only = |allowed: &[&str]| -> Result<(), BenchError> {
            match present.iter().find(|k| !allowed.contains(k)) {
                Some(k) => invalid(format!("algorithm {:?} does not use `{k}`", self.name)),
                None => Ok(()),
            }
        };

        match self.kind {
            AlgorithmType::Basic | AlgorithmType::Unconstrained => {
                let Some(which) = self.schedule else {
                    return invalid(format!("algorithm {:?} needs `schedule`", self.name));
                };
                let schedule = match which {
                    ScheduleName::FixedHorizon => {
                        only(&["schedule", "alpha0", "c"])?;
                        Schedule::fixed_horizon(need(self.alpha0, "alpha0")?, need(self.c, "c")?, horizon, gamma0)
                    }
                    ScheduleName::StronglyConvex => {
                        only(&["schedule", "mu"])?;
                        Schedule::strongly_convex(need(self.mu, "mu")?, gamma0)
                    }
                    ScheduleName::AnytimeDynamic => {
                        only(&["schedule", "alpha0", "c"])?;
                        Schedule::anytime_dynamic(need(self.alpha0, "alpha0")?, need(self.c, "c")?, gamma0)
                    }
                    ScheduleName::PathInformed => {
                        only(&["schedule", "c", "path_length"])?;
                        Schedule::path_informed(need(self.c, "c")?, need(self.path_length, "path_length")?, gamma0)
                    }
                }
                .map_err(ctx)?;
                Ok(AlgorithmSpec::Basic {
                    name: self.name.clone(),
                    schedule,
                    penalty: self.kind == AlgorithmType::Basic,
                })
            }
            AlgorithmType::Expert => {
                only(&["alpha0", "c", "kappa", "beta0", "family"])?;
                let family = match self.family.unwrap_or(FamilyName::PerRound) {
                    FamilyName::PerRound => StepFamily::PerRound,
                    FamilyName::FixedHorizon => StepFamily::FixedHorizon,
                };
                let params = MetaParams::tuned(
                    horizon,
                    need(self.kappa, "kappa")?,
                    need(self.c, "c")?,
                    need(self.alpha0, "alpha0")?,
                    need(self.beta0, "beta0")?,
                    gamma0,
                    family,
                )
                .map_err(ctx)?;
                Ok(AlgorithmSpec::Expert { name: self.name.clone(), params })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
kind = "online_lp"
p = 2
m = 3
T = 100
repetitions = 2
seed = 1
checkpoints = [25, 50, 100]

[[algorithms]]
name = "a1"
type = "basic"
schedule = "fixed_horizon"
alpha0 = 2.0
c = 0.5
gamma0 = 1.0
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.horizon, 100);
        assert_eq!(cfg.output_dir, "results");
        let specs = cfg.algorithm_specs().unwrap();
        assert_eq!(specs[0].name(), "a1");
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let top = format!("horizon = 3\n{MINIMAL}");
        assert!(matches!(ExperimentConfig::from_toml(&top), Err(BenchError::Config(_))));
        let inner = format!("{MINIMAL}stepsize = 0.1\n");
        assert!(ExperimentConfig::from_toml(&inner).is_err());
        let misplaced = format!("{MINIMAL}kappa = 0.5\n");
        let err = ExperimentConfig::from_toml(&misplaced).unwrap_err().to_string();
        assert!(err.contains("kappa"), "{err}");
    }

    #[test]
    fn checkpoint_beyond_horizon_is_rejected() {
        let bad = MINIMAL.replace("[25, 50, 100]", "[25, 50, 200]");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
        let unordered = MINIMAL.replace("[25, 50, 100]", "[50, 25]");
        assert!(ExperimentConfig::from_toml(&unordered).is_err());
        let zero_reps = MINIMAL.replace("repetitions = 2", "repetitions = 0");
        assert!(ExperimentConfig::from_toml(&zero_reps).is_err());
    }

    #[test]
    fn omitted_gamma0_uses_theory() {
        let cfg = ExperimentConfig::from_toml(&MINIMAL.replace("gamma0 = 1.0\n", "")).unwrap();
        let want = Schedule::theoretical_gamma0(&cfg.bounds());
        match &cfg.algorithm_specs().unwrap()[0] {
            AlgorithmSpec::Basic { schedule, .. } => assert_eq!(schedule.gamma0(), want),
            other => panic!("{other:?}"),
        }
    }
}
