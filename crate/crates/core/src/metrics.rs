//! Regret, constraint-violation metrics, comparators, and growth fits.

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{clip_positive, dist, dot, norm, norm_sq};
use crate::problem::{ConstraintOracle, CumulativeLoss, DecisionPoint, FeasibleSet, LossOracle};

/// Comparator points must satisfy `g(y) ≤ TOL_FEAS`.
pub const TOL_FEAS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: usize,
    pub x: DecisionPoint,
    pub loss: f64,
    pub g_values: Vec<f64>,
    /// `‖[g(x_t)]₊‖`
    pub clipped_norm: f64,
}

impl RoundRecord {
    pub fn new(t: usize, x: DecisionPoint, loss: f64, g_values: Vec<f64>) -> Self {
        let clipped_norm = norm(&clip_positive(&g_values));
        RoundRecord { t, x, loss, g_values, clipped_norm }
    }

    /// Evaluate loss and constraints at `x` for round `t`.
    pub fn observe(t: usize, x: DecisionPoint, loss: &LossOracle, g: &ConstraintOracle) -> Result<Self> {
        let value = loss.value(t, &x)?;
        let g_values = g.values(&x)?;
        Ok(Self::new(t, x, value, g_values))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComparatorSequence {
    Static(DecisionPoint),
    Dynamic(Vec<DecisionPoint>),
}

impl ComparatorSequence {
    /// Point used at 0-based position `i`; a static comparator is broadcast.
    pub fn at(&self, i: usize) -> &DecisionPoint {
        match self {
            ComparatorSequence::Static(y) => y,
            ComparatorSequence::Dynamic(ys) => &ys[i],
        }
    }

    fn check_len(&self, rounds: usize) -> Result<()> {
        if let ComparatorSequence::Dynamic(ys) = self {
            if ys.len() != rounds {
                return invalid(format!("comparator has {} points for {rounds} rounds", ys.len()));
            }
        }
        Ok(())
    }

    /// Every point lies in the set and satisfies `g(y) ≤ TOL_FEAS`.
    pub fn validate(&self, rounds: usize, g: &ConstraintOracle, set: &FeasibleSet) -> Result<()> {
        self.check_len(rounds)?;
        let points: &[DecisionPoint] = match self {
            ComparatorSequence::Static(y) => std::slice::from_ref(y),
            ComparatorSequence::Dynamic(ys) => ys,
        };
        for (i, y) in points.iter().enumerate() {
            if !set.contains(y, 1e-12) {
                return invalid(format!("comparator point {i} lies outside the set"));
            }
            if !g.is_satisfied(y, TOL_FEAS)? {
                return invalid(format!("comparator point {i} violates the constraints"));
            }
        }
        Ok(())
    }
}

/// `Σ f_t(x_t) − Σ f_t(y_t)`
pub fn regret(records: &[RoundRecord], comparator: &ComparatorSequence, loss: &LossOracle) -> Result<f64> {
    comparator.check_len(records.len())?;
    let mut learner = 0.0;
    let mut reference = 0.0;
    for (i, r) in records.iter().enumerate() {
        learner += r.loss;
        reference += loss.value(r.t, comparator.at(i))?;
    }
    Ok(learner - reference)
}

/// The four ways of aggregating constraint violation over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ViolationMetrics {
    /// `Σ ‖[g(x_t)]₊‖`
    pub ccv: f64,
    /// `‖Σ [g(x_t)]₊‖`
    pub ccv_l1_form: f64,
    /// `Σ ‖[g(x_t)]₊‖²`
    pub squared: f64,
    /// `‖[Σ g(x_t)]₊‖`
    pub plain: f64,
}

impl ViolationMetrics {
    /// `plain ≤ ccv_l1_form ≤ ccv ≤ √m·ccv_l1_form`, up to a relative `tol`.
    pub fn sandwich_holds(&self, m: usize, tol: f64) -> bool {
        let slack = |v: f64| tol * (1.0 + v.abs());
        self.plain <= self.ccv_l1_form + slack(self.ccv_l1_form)
            && self.ccv_l1_form <= self.ccv + slack(self.ccv)
            && self.ccv <= (m as f64).sqrt() * self.ccv_l1_form + slack(self.ccv)
    }
}

pub fn violation_metrics(records: &[RoundRecord]) -> ViolationMetrics {
    let Some(first) = records.first() else {
        return ViolationMetrics::default();
    };
    let m = first.g_values.len();
    let mut clipped_sum = vec![0.0; m];
    let mut raw_sum = vec![0.0; m];
    let mut out = ViolationMetrics::default();
    for r in records {
        let clipped = clip_positive(&r.g_values);
        let n2 = norm_sq(&clipped);
        out.ccv += n2.sqrt();
        out.squared += n2;
        for j in 0..m {
            clipped_sum[j] += clipped[j];
            raw_sum[j] += r.g_values[j];
        }
    }
    out.ccv_l1_form = norm(&clipped_sum);
    out.plain = norm(&clip_positive(&raw_sum));
    out
}

/// `Σ ‖y_{t+1} − y_t‖`; zero for a static comparator.
pub fn path_length(comparator: &ComparatorSequence) -> f64 {
    match comparator {
        ComparatorSequence::Static(_) => 0.0,
        ComparatorSequence::Dynamic(ys) => ys.windows(2).map(|w| dist(&w[0], &w[1])).sum(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HindsightSolution {
    pub point: DecisionPoint,
    pub objective: f64,
    /// True when the search covers the whole set (`p ≤ 2`), by enumeration or grid.
    pub certified: bool,
}

/// `argmin_{x ∈ X, g(x) ≤ 0} Σ_{t=1}^{T} f_t(x)`.
pub fn hindsight_static_optimum(
    loss: &LossOracle,
    horizon: usize,
    g: &ConstraintOracle,
    set: &FeasibleSet,
) -> Result<DecisionPoint> {
    Ok(hindsight_static_solution(loss, horizon, g, set)?.point)
}

pub fn hindsight_static_solution(
    loss: &LossOracle,
    horizon: usize,
    g: &ConstraintOracle,
    set: &FeasibleSet,
) -> Result<HindsightSolution> {
    check_dim("hindsight loss", set.dim(), loss.dim())?;
    check_dim("hindsight constraints", set.dim(), g.dim())?;
    let agg = loss.cumulative(horizon)?;
    if set.dim() <= 2 {
        if let Some(exact) = polygon_optimum(&agg, g, set)? {
            return Ok(exact);
        }
        zoom_grid(&agg, g, set)
    } else {
        penalty_descent(&agg, g, set)
    }
}

/// Bounding box of the set, per axis.
fn bounding_box(set: &FeasibleSet) -> Vec<(f64, f64)> {
    match set {
        FeasibleSet::Box { lower, upper } => lower.iter().copied().zip(upper.iter().copied()).collect(),
        FeasibleSet::Ball { center, radius } => center.iter().map(|c| (c - radius, c + radius)).collect(),
    }
}

fn feasible(x: &[f64], g: &ConstraintOracle, set: &FeasibleSet) -> Result<bool> {
    Ok(set.contains(x, 0.0) && g.is_satisfied(x, TOL_FEAS)?)
}

/// Exact minimiser of `κ‖x‖² + ⟨l, x⟩` over a box cut by affine constraints
/// in one or two dimensions. The optimum is the unconstrained minimiser, its
/// projection onto one boundary line, or a vertex where two lines meet; all
/// are enumerated. `None` when the problem is not of this shape.
fn polygon_optimum(
    agg: &CumulativeLoss,
    g: &ConstraintOracle,
    set: &FeasibleSet,
) -> Result<Option<HindsightSolution>> {
    let (
        CumulativeLoss::Quadratic { curvature, linear, .. },
        ConstraintOracle::Affine { a, b },
        FeasibleSet::Box { lower, upper },
    ) = (agg, g, set)
    else {
        return Ok(None);
    };
    let p = set.dim();
    let mut lines: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..p {
        let mut e = vec![0.0; p];
        e[i] = 1.0;
        lines.push((e.clone(), lower[i]));
        lines.push((e, upper[i]));
    }
    for j in 0..a.rows() {
        if norm(a.row(j)) > 0.0 {
            lines.push((a.row(j).to_vec(), b[j]));
        }
    }

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let free = (*curvature > 0.0).then(|| linear.iter().map(|l| -l / (2.0 * curvature)).collect::<Vec<f64>>());
    if let Some(u) = &free {
        candidates.push(u.clone());
        for (n, beta) in &lines {
            let shift = (dot(n, u) - beta) / norm_sq(n);
            candidates.push(u.iter().zip(n).map(|(ui, ni)| ui - shift * ni).collect());
        }
    }
    if p == 1 {
        candidates.extend(lines.iter().map(|(n, beta)| vec![beta / n[0]]));
    } else {
        for (i, (n1, b1)) in lines.iter().enumerate() {
            for (n2, b2) in &lines[i + 1..] {
                let det = n1[0] * n2[1] - n1[1] * n2[0];
                if det.abs() <= 1e-14 * norm(n1) * norm(n2) {
                    continue;
                }
                candidates.push(vec![(b1 * n2[1] - b2 * n1[1]) / det, (n1[0] * b2 - n2[0] * b1) / det]);
            }
        }
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    for cand in candidates {
        if !set.contains(&cand, 1e-12) {
            continue;
        }
        let x = set.project_raw(&cand);
        if !g.is_satisfied(&x, TOL_FEAS)? {
            continue;
        }
        let f = agg.value(&x)?;
        if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
            best = Some((x, f));
        }
    }
    let (x, objective) = best.ok_or_else(|| Error::Infeasible("feasible region is empty".into()))?;
    Ok(Some(HindsightSolution { point: DecisionPoint::new(x)?, objective, certified: true }))
}

/// Exhaustive search on a 201-point-per-axis grid, then repeated tenfold
/// zooms around the incumbent. Only feasible grid points are ever accepted.
fn zoom_grid(agg: &CumulativeLoss, g: &ConstraintOracle, set: &FeasibleSet) -> Result<HindsightSolution> {
    const COARSE: usize = 200;
    const LOCAL: usize = 40;
    const LEVELS: usize = 10;

    let bbox = bounding_box(set);
    let mut windows: Vec<(f64, f64)> = bbox.clone();
    let mut per_axis = COARSE;
    let mut best: Option<(Vec<f64>, f64)> = None;

    for level in 0..=LEVELS {
        let axes: Vec<Vec<f64>> = windows
            .iter()
            .map(|&(lo, hi)| (0..=per_axis).map(|i| lo + (hi - lo) * i as f64 / per_axis as f64).collect())
            .collect();
        let mut visit = |x: Vec<f64>| -> Result<()> {
            if !feasible(&x, g, set)? {
                return Ok(());
            }
            let f = agg.value(&x)?;
            if best.as_ref().is_none_or(|(_, bf)| f < *bf) {
                best = Some((x, f));
            }
            Ok(())
        };
        match axes.as_slice() {
            [xs] => {
                for &a in xs {
                    visit(vec![a])?;
                }
            }
            [xs, ys] => {
                for &a in xs {
                    for &b in ys {
                        visit(vec![a, b])?;
                    }
                }
            }
            _ => unreachable!("zoom grid only runs for p <= 2"),
        }
        let Some((center, _)) = &best else {
            return Err(Error::Infeasible("no feasible grid point in the set".into()));
        };
        if level == LEVELS {
            break;
        }
        // next window: ±2 current spacings around the incumbent, clipped to the set's box
        windows = windows
            .iter()
            .zip(center)
            .zip(&bbox)
            .map(|((&(lo, hi), &c), &(blo, bhi))| {
                let h = (hi - lo) / per_axis as f64;
                ((c - 2.0 * h).max(blo), (c + 2.0 * h).min(bhi))
            })
            .collect();
        per_axis = LOCAL;
    }
    let (x, objective) = best.expect("set above");
    Ok(HindsightSolution { point: DecisionPoint::new(x)?, objective, certified: true })
}

/// Projected subgradient on `Σf + C·Σ[g]₊`, then a pure-violation descent
/// until the point is feasible. No global certificate.
fn penalty_descent(agg: &CumulativeLoss, g: &ConstraintOracle, set: &FeasibleSet) -> Result<HindsightSolution> {
    const ITERS: usize = 20_000;
    let radius = set.diameter();
    let mut x = set.project_raw(&vec![0.0; set.dim()]);
    let (_, g0) = agg.evaluate(&x)?;
    let weight = 10.0 * (1.0 + norm(&g0)) / (1.0 + g.row_norm_bound(&x)?);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for k in 1..=ITERS {
        let (f, mut s) = agg.evaluate(&x)?;
        let jac = g.clipped_subgradient(&x)?;
        let viol: f64 = g.values(&x)?.iter().map(|v| v.max(0.0)).sum();
        let ones = vec![weight; g.count()];
        for (si, ji) in s.iter_mut().zip(jac.tr_mul_vec(&ones)?) {
            *si += ji;
        }
        let merit = f + weight * viol;
        if viol <= TOL_FEAS && best.as_ref().is_none_or(|(_, bf)| merit < *bf) {
            best = Some((x.clone(), f));
        }
        let sn = norm(&s);
        if sn == 0.0 {
            break;
        }
        let eta = radius / (sn * (k as f64).sqrt());
        x = set.project_raw(&x.iter().zip(&s).map(|(xi, si)| xi - eta * si).collect::<Vec<_>>());
    }
    if best.is_none() {
        // polish: descend on the violation alone
        for k in 1..=ITERS {
            let vals = g.values(&x)?;
            if vals.iter().all(|&v| v <= TOL_FEAS) {
                best = Some((x.clone(), agg.value(&x)?));
                break;
            }
            let s = g.clipped_subgradient(&x)?.tr_mul_vec(&vec![1.0; g.count()])?;
            let eta = radius / ((1.0 + norm(&s)) * (k as f64).sqrt());
            x = set.project_raw(&x.iter().zip(&s).map(|(xi, si)| xi - eta * si).collect::<Vec<_>>());
        }
    }
    let (x, objective) =
        best.ok_or_else(|| Error::Infeasible("could not reach a feasible point".into()))?;
    Ok(HindsightSolution { point: DecisionPoint::new(x)?, objective, certified: false })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    /// Least-squares slope of `log value` against `log T`.
    pub exponent: f64,
    /// Number of zero values floored at machine epsilon.
    pub floored: usize,
}

impl GrowthFit {
    /// Fits with floored zeros are not acceptance grade.
    pub fn is_clean(&self) -> bool {
        self.floored == 0
    }
}

pub fn growth_exponent(checkpoints: &[(f64, f64)]) -> Result<GrowthFit> {
    if checkpoints.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return invalid("checkpoint horizons must be strictly increasing");
    }
    if checkpoints.iter().any(|&(t, v)| !(t > 0.0) || !(v >= 0.0) || !v.is_finite()) {
        return invalid("checkpoints need T > 0 and finite values >= 0");
    }
    let positive = checkpoints.iter().filter(|&&(_, v)| v > 0.0).count();
    if positive < 3 {
        return Err(Error::InsufficientData(format!("{positive} positive checkpoints, need at least 3")));
    }
    let floored = checkpoints.len() - positive;
    let pts: Vec<(f64, f64)> =
        checkpoints.iter().map(|&(t, v)| (t.ln(), v.max(f64::EPSILON).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(GrowthFit { exponent: sxy / sxx, floored })
}
