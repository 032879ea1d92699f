//! Problem description shared by the learners and the harness: decision
//! points, feasible sets with Euclidean projection, constraint and loss
//! oracles, and the uniform bounds the step-size theory is phrased in.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{all_finite, clip_positive, dist, dot, norm, norm_sq, Matrix};

/// A learner's per-round choice. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPoint(Vec<f64>);

impl DecisionPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !all_finite(&coords) {
            return invalid("decision point has non-finite entries");
        }
        Ok(DecisionPoint(coords))
    }

    pub fn zeros(p: usize) -> Self {
        DecisionPoint(vec![0.0; p])
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(all_finite(&coords));
        DecisionPoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DecisionPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for DecisionPoint {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        DecisionPoint::new(v)
    }
}

/// Closed convex set the decisions live in.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl FeasibleSet {
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim("box bounds", lower.len(), upper.len())?;
        if lower.is_empty() {
            return invalid("box must have dimension at least 1");
        }
        if !all_finite(&lower) || !all_finite(&upper) {
            return invalid("box bounds must be finite");
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u) {
            return invalid("box requires lower <= upper componentwise");
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// The cube `[lo, hi]^p`.
    pub fn cube(p: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(vec![lo; p], vec![hi; p])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return invalid("ball must have dimension at least 1");
        }
        if !all_finite(&center) || !radius.is_finite() || radius <= 0.0 {
            return invalid("ball needs a finite center and a finite radius > 0");
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
        }
    }

    /// Euclidean nearest point of the set.
    pub fn project(&self, x: &[f64]) -> Result<DecisionPoint> {
        check_dim("projection", self.dim(), x.len())?;
        if !all_finite(x) {
            return invalid("cannot project a non-finite point");
        }
        Ok(DecisionPoint::from_vec_unchecked(self.project_raw(x)))
    }

    /// Projection without validation, for hot loops whose inputs are already checked.
    pub(crate) fn project_raw(&self, x: &[f64]) -> Vec<f64> {
        match self {
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(&v, (&l, &u))| v.clamp(l, u))
                .collect(),
            FeasibleSet::Ball { center, radius } => {
                let r = dist(x, center);
                if r <= *radius {
                    x.to_vec()
                } else {
                    let s = radius / r;
                    x.iter().zip(center).map(|(v, c)| c + s * (v - c)).collect()
                }
            }
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() || !all_finite(x) {
            return false;
        }
        match self {
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(&v, (&l, &u))| v >= l - tol && v <= u + tol),
            FeasibleSet::Ball { center, radius } => dist(x, center) <= radius + tol,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleSet::Box { lower, upper } => {
                upper.iter().zip(lower).map(|(u, l)| (u - l) * (u - l)).sum::<f64>().sqrt()
            }
            FeasibleSet::Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Largest Euclidean norm of any point in the set.
    pub fn max_norm(&self) -> f64 {
        match self {
            FeasibleSet::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| l.abs().max(u.abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            FeasibleSet::Ball { center, radius } => norm(center) + radius,
        }
    }
}

/// Constraint values `g(x)` together with their clipped form `[g(x)]₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintEval {
    pub values: Vec<f64>,
    pub clipped: Vec<f64>,
}

type ConstraintFn = dyn Fn(&[f64]) -> (Vec<f64>, Matrix) + Send + Sync;

/// A convex constraint given by a value-and-subgradient callback.
#[derive(Clone)]
pub struct GeneralConstraint {
    dim: usize,
    count: usize,
    eval: Arc<ConstraintFn>,
}

impl GeneralConstraint {
    /// `eval(x)` must return `g(x)` (length `count`) and a subgradient matrix
    /// (`count × dim`). The callback must be free of side effects.
    pub fn new<F>(dim: usize, count: usize, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> (Vec<f64>, Matrix) + Send + Sync + 'static,
    {
        if dim == 0 || count == 0 {
            return invalid("general constraint needs p >= 1 and m >= 1");
        }
        Ok(GeneralConstraint { dim, count, eval: Arc::new(eval) })
    }

    fn call(&self, x: &[f64]) -> Result<(Vec<f64>, Matrix)> {
        let (v, j) = (self.eval)(x);
        if v.len() != self.count || j.rows() != self.count || j.cols() != self.dim {
            return invalid(format!(
                "constraint callback returned shapes ({}, {}x{}), declared ({}, {}x{})",
                v.len(),
                j.rows(),
                j.cols(),
                self.count,
                self.count,
                self.dim
            ));
        }
        if !all_finite(&v) {
            return invalid("constraint callback returned non-finite values");
        }
        Ok((v, j))
    }
}

impl fmt::Debug for GeneralConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralConstraint")
            .field("dim", &self.dim)
            .field("count", &self.count)
            .finish_non_exhaustive()
    }
}

/// The fixed long-term constraint function `g: R^p -> R^m`.
#[derive(Debug, Clone)]
pub enum ConstraintOracle {
    /// `g(x) = A x - b`
    Affine { a: Matrix, b: Vec<f64> },
    General(GeneralConstraint),
}

impl ConstraintOracle {
    pub fn affine(a: Matrix, b: Vec<f64>) -> Result<Self> {
        check_dim("affine constraint offset", a.rows(), b.len())?;
        if a.rows() == 0 || a.cols() == 0 {
            return invalid("affine constraint needs p >= 1 and m >= 1");
        }
        if !all_finite(&b) {
            return invalid("affine constraint offset must be finite");
        }
        Ok(ConstraintOracle::Affine { a, b })
    }

    pub fn general(g: GeneralConstraint) -> Self {
        ConstraintOracle::General(g)
    }

    /// Number of constraints `m`.
    pub fn count(&self) -> usize {
        match self {
            ConstraintOracle::Affine { b, .. } => b.len(),
            ConstraintOracle::General(g) => g.count,
        }
    }

    /// Decision dimension `p`.
    pub fn dim(&self) -> usize {
        match self {
            ConstraintOracle::Affine { a, .. } => a.cols(),
            ConstraintOracle::General(g) => g.dim,
        }
    }

    pub fn values(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("constraint evaluation", self.dim(), x.len())?;
        match self {
            ConstraintOracle::Affine { a, b } => {
                let mut v = a.mul_vec(x)?;
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= bi;
                }
                Ok(v)
            }
            ConstraintOracle::General(g) => Ok(g.call(x)?.0),
        }
    }

    pub fn eval_constraints(&self, x: &[f64]) -> Result<ConstraintEval> {
        let values = self.values(x)?;
        let clipped = clip_positive(&values);
        Ok(ConstraintEval { values, clipped })
    }

    /// Subgradient matrix `∂g(x)` (one row per constraint).
    pub fn subgradient(&self, x: &[f64]) -> Result<Matrix> {
        check_dim("constraint subgradient", self.dim(), x.len())?;
        match self {
            ConstraintOracle::Affine { a, .. } => Ok(a.clone()),
            ConstraintOracle::General(g) => Ok(g.call(x)?.1),
        }
    }

    /// Subgradient of `[g(x)]₊`: row `j` is zero when `g_j(x) < 0` and equals
    /// row `j` of `∂g(x)` otherwise (including `g_j(x) = 0`).
    pub fn clipped_subgradient(&self, x: &[f64]) -> Result<Matrix> {
        check_dim("clipped subgradient", self.dim(), x.len())?;
        let (values, mut jac) = match self {
            ConstraintOracle::Affine { a, .. } => (self.values(x)?, a.clone()),
            ConstraintOracle::General(g) => g.call(x)?,
        };
        for (j, v) in values.iter().enumerate() {
            if *v < 0.0 {
                jac.row_mut(j).fill(0.0);
            }
        }
        Ok(jac)
    }

    /// Upper bound on `‖∂g_j(x)‖` over all rows, exact for affine oracles and
    /// sampled at `x` for general ones.
    pub fn row_norm_bound(&self, x: &[f64]) -> Result<f64> {
        Ok(self.subgradient(x)?.max_row_norm())
    }

    /// `g(x) <= tol` componentwise.
    pub fn is_satisfied(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.values(x)?.iter().all(|&v| v <= tol))
    }
}

type LossFn = dyn Fn(usize, &[f64]) -> (f64, Vec<f64>) + Send + Sync;

/// A per-round loss given by a value-and-subgradient callback `(t, x) -> (f_t(x), ∂f_t(x))`.
#[derive(Clone)]
pub struct GeneralLoss {
    dim: usize,
    rounds: usize,
    eval: Arc<LossFn>,
}

impl GeneralLoss {
    pub fn new<F>(dim: usize, rounds: usize, eval: F) -> Result<Self>
    where
        F: Fn(usize, &[f64]) -> (f64, Vec<f64>) + Send + Sync + 'static,
    {
        if dim == 0 {
            return invalid("general loss needs p >= 1");
        }
        Ok(GeneralLoss { dim, rounds, eval: Arc::new(eval) })
    }
}

impl fmt::Debug for GeneralLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralLoss")
            .field("dim", &self.dim)
            .field("rounds", &self.rounds)
            .finish_non_exhaustive()
    }
}

/// The loss sequence `f_1, f_2, …`. Rounds are 1-based.
#[derive(Debug, Clone)]
pub enum LossOracle {
    /// `f_t(x) = ⟨θ_t, x⟩`
    Linear { theta: Arc<[Vec<f64>]> },
    /// `f_t(x) = ‖x − θ_t‖² + scale·⟨θ_t, x⟩`; strongly convex with modulus 1
    /// in the `f(x) ≥ f(y) + ⟨x−y, ∂f(y)⟩ + μ‖x−y‖²` sense.
    Quadratic { theta: Arc<[Vec<f64>]>, scale: f64 },
    General(GeneralLoss),
}

impl LossOracle {
    pub fn linear(theta: Vec<Vec<f64>>) -> Result<Self> {
        Ok(LossOracle::Linear { theta: validate_theta(theta)? })
    }

    pub fn quadratic(theta: Vec<Vec<f64>>, scale: f64) -> Result<Self> {
        if !scale.is_finite() {
            return invalid("quadratic loss scale must be finite");
        }
        Ok(LossOracle::Quadratic { theta: validate_theta(theta)?, scale })
    }

    pub fn general(loss: GeneralLoss) -> Self {
        LossOracle::General(loss)
    }

    pub fn rounds(&self) -> usize {
        match self {
            LossOracle::Linear { theta } | LossOracle::Quadratic { theta, .. } => theta.len(),
            LossOracle::General(g) => g.rounds,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LossOracle::Linear { theta } | LossOracle::Quadratic { theta, .. } => {
                theta.first().map_or(0, Vec::len)
            }
            LossOracle::General(g) => g.dim,
        }
    }

    /// Declared strong-convexity modulus, if any.
    pub fn strong_convexity(&self) -> Option<f64> {
        match self {
            LossOracle::Quadratic { .. } => Some(1.0),
            _ => None,
        }
    }

    fn theta(&self, t: usize) -> Result<&[f64]> {
        match self {
            LossOracle::Linear { theta } | LossOracle::Quadratic { theta, .. } => {
                if t == 0 || t > theta.len() {
                    return invalid(format!("round {t} outside 1..={}", theta.len()));
                }
                Ok(&theta[t - 1])
            }
            LossOracle::General(_) => unreachable!("general losses carry no θ"),
        }
    }

    /// `(f_t(x), ∂f_t(x))`
    pub fn evaluate(&self, t: usize, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_dim("loss evaluation", self.dim(), x.len())?;
        match self {
            LossOracle::Linear { .. } => {
                let th = self.theta(t)?;
                Ok((dot(th, x), th.to_vec()))
            }
            LossOracle::Quadratic { scale, .. } => {
                let th = self.theta(t)?;
                let mut value = scale * dot(th, x);
                let mut grad = Vec::with_capacity(x.len());
                for (xi, ti) in x.iter().zip(th) {
                    value += (xi - ti) * (xi - ti);
                    grad.push(2.0 * (xi - ti) + scale * ti);
                }
                Ok((value, grad))
            }
            LossOracle::General(g) => {
                if t == 0 || t > g.rounds {
                    return invalid(format!("round {t} outside 1..={}", g.rounds));
                }
                let (v, d) = (g.eval)(t, x);
                check_dim("loss callback subgradient", g.dim, d.len())?;
                if !v.is_finite() || !all_finite(&d) {
                    return invalid("loss callback returned non-finite output");
                }
                Ok((v, d))
            }
        }
    }

    pub fn value(&self, t: usize, x: &[f64]) -> Result<f64> {
        Ok(self.evaluate(t, x)?.0)
    }

    pub fn subgradient(&self, t: usize, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.evaluate(t, x)?.1)
    }

    /// The summed loss `Σ_{t=1}^{upto} f_t`, for offline comparators.
    pub fn cumulative(&self, upto: usize) -> Result<CumulativeLoss> {
        if upto == 0 || upto > self.rounds() {
            return invalid(format!("cumulative horizon {upto} outside 1..={}", self.rounds()));
        }
        let p = self.dim();
        match self {
            LossOracle::Linear { theta } => {
                let mut lin = vec![0.0; p];
                for th in &theta[..upto] {
                    add_assign(&mut lin, th, 1.0);
                }
                Ok(CumulativeLoss::Quadratic { curvature: 0.0, linear: lin, constant: 0.0 })
            }
            LossOracle::Quadratic { theta, scale } => {
                // ‖x−θ‖² + s⟨θ,x⟩ = ‖x‖² + (s−2)⟨θ,x⟩ + ‖θ‖²
                let mut lin = vec![0.0; p];
                let mut constant = 0.0;
                for th in &theta[..upto] {
                    add_assign(&mut lin, th, scale - 2.0);
                    constant += norm_sq(th);
                }
                Ok(CumulativeLoss::Quadratic { curvature: upto as f64, linear: lin, constant })
            }
            LossOracle::General(_) => Ok(CumulativeLoss::Sum { oracle: self.clone(), upto }),
        }
    }
}

fn validate_theta(theta: Vec<Vec<f64>>) -> Result<Arc<[Vec<f64>]>> {
    let p = theta.first().map_or(0, Vec::len);
    if p == 0 {
        return invalid("loss sequence must be nonempty with p >= 1");
    }
    for (t, th) in theta.iter().enumerate() {
        check_dim(&format!("θ at round {}", t + 1), p, th.len())?;
        if !all_finite(th) {
            return invalid(format!("θ at round {} is not finite", t + 1));
        }
    }
    Ok(theta.into())
}

fn add_assign(acc: &mut [f64], v: &[f64], s: f64) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += s * b;
    }
}

/// Sum of the first `upto` losses, in a form cheap enough to evaluate many
/// times during an offline search.
#[derive(Debug, Clone)]
pub enum CumulativeLoss {
    /// `curvature·‖x‖² + ⟨linear, x⟩ + constant`
    Quadratic { curvature: f64, linear: Vec<f64>, constant: f64 },
    Sum { oracle: LossOracle, upto: usize },
}

impl CumulativeLoss {
    pub fn evaluate(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        match self {
            CumulativeLoss::Quadratic { curvature, linear, constant } => {
                check_dim("cumulative loss", linear.len(), x.len())?;
                let v = curvature * norm_sq(x) + dot(linear, x) + constant;
                let g = x.iter().zip(linear).map(|(xi, li)| 2.0 * curvature * xi + li).collect();
                Ok((v, g))
            }
            CumulativeLoss::Sum { oracle, upto } => {
                let mut total = 0.0;
                let mut grad = vec![0.0; x.len()];
                for t in 1..=*upto {
                    let (v, g) = oracle.evaluate(t, x)?;
                    total += v;
                    add_assign(&mut grad, &g, 1.0);
                }
                Ok((total, grad))
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.evaluate(x)?.0)
    }
}

/// Uniform bounds: `F` bounds loss ranges and `‖g(x)‖`, `G` bounds
/// subgradient norms, and `diameter` bounds distances within the set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemBounds {
    pub f: f64,
    pub g: f64,
    pub diameter: f64,
}

impl ProblemBounds {
    pub fn new(f: f64, g: f64, diameter: f64) -> Result<Self> {
        for (name, v) in [("F", f), ("G", g), ("diameter", diameter)] {
            if !v.is_finite() || v <= 0.0 {
                return invalid(format!("bound {name} must be positive and finite, got {v}"));
            }
        }
        Ok(ProblemBounds { f, g, diameter })
    }
}
