//! The per-round composite step
//!
//! ```text
//! argmin_{x ∈ X}  a·⟨d, x⟩ + ⟨c, [g(x)]₊⟩ + ‖x − z‖²
//! ```
//!
//! With `v = z − (a/2)·d` the objective is `‖x − v‖² + Σ c_j [g_j(x)]₊` up to
//! a constant. Three paths:
//!
//! * `c = 0`: the closed form `P_X(v)`.
//! * affine `g`: writing `c_j [s]₊ = max_{0 ≤ λ_j ≤ c_j} λ_j s`, the inner
//!   minimisation over `x` is `x(λ) = P_X(v − Aᵀλ/2)` and the dual
//!   `φ(λ) = min_x ‖x − v‖² + λᵀ(Ax − b)` is concave and smooth on the box
//!   `[0, c]`. It is maximised by accelerated projected gradient ascent with
//!   function-value restarts; the returned point is `x(λ)` for the best-gap
//!   multiplier, so `a·d + Aᵀλ` is the subgradient certifying optimality.
//! * general `g`: projected subgradient on the full objective with
//!   `η_k = step_scale · R / (L √k)`, keeping the best iterate.

use crate::error::{check_dim, invalid, Error, Result};
use crate::linalg::{all_finite, dist_sq, dot, norm, solve_small, Matrix};
use crate::problem::{ConstraintOracle, DecisionPoint, FeasibleSet};

/// Iterations without a `tol` improvement before the subgradient path stops.
const STALL_WINDOW: usize = 25;
/// Relative duality gap at which the dual path stops.
const DUAL_GAP_TOL: f64 = 1e-13;
/// Iterations between attempts to jump straight to the optimal face.
const POLISH_EVERY: usize = 8;
/// Constraint values this close to zero count as sitting on the kink.
const KINK_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct ProxProblem<'a> {
    /// Anchor `z`, the previous decision.
    pub anchor: &'a [f64],
    /// Observed loss subgradient `d`.
    pub direction: &'a [f64],
    /// Step size `a > 0`.
    pub step: f64,
    /// Nonnegative penalty weights `c` on the clipped constraints.
    pub penalty: &'a [f64],
    pub constraints: &'a ConstraintOracle,
    pub set: &'a FeasibleSet,
}

impl ProxProblem<'_> {
    pub fn validate(&self) -> Result<()> {
        let p = self.set.dim();
        check_dim("prox anchor", p, self.anchor.len())?;
        check_dim("prox direction", p, self.direction.len())?;
        check_dim("prox constraints", p, self.constraints.dim())?;
        check_dim("prox penalty", self.constraints.count(), self.penalty.len())?;
        if !all_finite(self.anchor) || !all_finite(self.direction) || !all_finite(self.penalty) {
            return invalid("prox inputs must be finite");
        }
        if !self.step.is_finite() || self.step <= 0.0 {
            return invalid(format!("prox step must be positive and finite, got {}", self.step));
        }
        if self.penalty.iter().any(|&c| c < 0.0) {
            return invalid("prox penalty weights must be nonnegative");
        }
        Ok(())
    }

    /// `a·⟨d, x⟩ + ⟨c, [g(x)]₊⟩ + ‖x − z‖²`
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        let g = self.constraints.values(x)?;
        Ok(self.objective_with(x, &g))
    }

    fn objective_with(&self, x: &[f64], g: &[f64]) -> f64 {
        let penalty: f64 = self.penalty.iter().zip(g).map(|(c, v)| c * v.max(0.0)).sum();
        self.step * dot(self.direction, x) + penalty + dist_sq(x, self.anchor)
    }

    /// `v = z − (a/2)·d`, the unpenalised minimiser before projection.
    fn shifted_anchor(&self) -> Vec<f64> {
        self.anchor
            .iter()
            .zip(self.direction)
            .map(|(z, d)| z - 0.5 * self.step * d)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxSolverParams {
    /// Iteration cap for the projected-subgradient path.
    pub max_iters: usize,
    pub step_scale: f64,
    /// Objective-improvement stopping tolerance.
    pub tol: f64,
    /// Iteration cap for the dual path used with affine constraints.
    pub dual_max_iters: usize,
}

impl Default for ProxSolverParams {
    fn default() -> Self {
        ProxSolverParams { max_iters: 300, step_scale: 1.0, tol: 1e-8, dual_max_iters: 20_000 }
    }
}

impl ProxSolverParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 || self.dual_max_iters == 0 {
            return invalid("solver iteration caps must be positive");
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) || !(self.tol > 0.0) {
            return invalid("solver step_scale and tol must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProxMethod {
    ClosedForm,
    Dual,
    Subgradient,
}

#[derive(Debug, Clone)]
pub struct ProxSolution {
    pub point: DecisionPoint,
    pub objective: f64,
    /// Effective weights `λ_j ∈ [0, c_j]` on each constraint's subgradient at
    /// the returned point.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    pub method: ProxMethod,
}

impl ProxSolution {
    /// `Σ_j λ_j ∂g_j(y)`: the penalty subgradient the solution is optimal for.
    pub fn penalty_subgradient(&self, constraints: &ConstraintOracle) -> Result<Vec<f64>> {
        constraints.subgradient(&self.point)?.tr_mul_vec(&self.multipliers)
    }
}

pub fn solve_prox(problem: &ProxProblem<'_>, params: &ProxSolverParams) -> Result<DecisionPoint> {
    Ok(solve_prox_detailed(problem, params)?.point)
}

pub fn solve_prox_detailed(
    problem: &ProxProblem<'_>,
    params: &ProxSolverParams,
) -> Result<ProxSolution> {
    problem.validate()?;
    params.validate()?;
    let m = problem.penalty.len();
    if problem.penalty.iter().all(|&c| c == 0.0) {
        let x = problem.set.project_raw(&problem.shifted_anchor());
        let objective = problem.objective(&x)?;
        return Ok(ProxSolution {
            point: DecisionPoint::new(x)?,
            objective,
            multipliers: vec![0.0; m],
            iterations: 0,
            method: ProxMethod::ClosedForm,
        });
    }
    match problem.constraints {
        ConstraintOracle::Affine { a, b } => Ok(solve_dual(problem, a, b, params)),
        ConstraintOracle::General(_) => solve_subgradient(problem, params),
    }
}

fn solve_dual(
    problem: &ProxProblem<'_>,
    a: &Matrix,
    b: &[f64],
    params: &ProxSolverParams,
) -> ProxSolution {
    let c = problem.penalty;
    let v = problem.shifted_anchor();
    let lip = {
        let l = 0.5 * a.frobenius_norm().powi(2);
        if l > 0.0 {
            l
        } else {
            1.0
        }
    };

    // Everything needed at one multiplier: x(λ), g(x(λ)), primal and dual values.
    let eval = |lam: &[f64]| {
        let shift = a.tr_mul_vec(lam).expect("dimensions validated");
        let w: Vec<f64> = v.iter().zip(&shift).map(|(vi, si)| vi - 0.5 * si).collect();
        let x = problem.set.project_raw(&w);
        let mut g = a.mul_vec(&x).expect("dimensions validated");
        for (gi, bi) in g.iter_mut().zip(b) {
            *gi -= bi;
        }
        let base = dist_sq(&x, &v);
        let primal = base + c.iter().zip(&g).map(|(cj, gj)| cj * gj.max(0.0)).sum::<f64>();
        let dual = base + dot(lam, &g);
        (x, g, primal, dual)
    };

    // Start from the multiplier suggested by the anchor's own violation pattern.
    let mut lam: Vec<f64> = {
        let x0 = problem.set.project_raw(&v);
        let g0 = a.mul_vec(&x0).expect("dimensions validated");
        g0.iter().zip(b).zip(c).map(|((gi, bi), cj)| if gi - bi > 0.0 { *cj } else { 0.0 }).collect()
    };
    let (x0, g0, primal, mut dual) = eval(&lam);
    let mut best = (x0, lam.clone(), (primal - dual).max(0.0));
    let gap_tol = DUAL_GAP_TOL * (1.0 + primal.abs());
    let mut y = lam.clone();
    let mut momentum = 1.0_f64;
    let mut iterations = 0;
    let mut g_cur = g0;

    while iterations < params.dual_max_iters && best.2 > gap_tol {
        if iterations % POLISH_EVERY == 0 {
            for guess in face_guesses(&lam, &g_cur, c) {
                if let Some(cand) = polish_face(problem.set, a, b, &v, c, &lam, &guess) {
                    let (px, _, pp, pd) = eval(&cand);
                    let gap = (pp - pd).max(0.0);
                    if gap < best.2 {
                        best = (px, cand, gap);
                    }
                }
            }
            if best.2 <= gap_tol {
                break;
            }
        }
        iterations += 1;
        let (_, gy, _, _) = eval(&y);
        let next: Vec<f64> =
            y.iter().zip(&gy).zip(c).map(|((yi, gi), cj)| (yi + gi / lip).clamp(0.0, *cj)).collect();
        let (nx, ng, np, nd) = eval(&next);
        if nd < dual {
            // ascent stalled: drop momentum and restart from the last iterate
            momentum = 1.0;
            y.clone_from(&lam);
            continue;
        }
        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let beta = (momentum - 1.0) / next_momentum;
        y = next
            .iter()
            .zip(&lam)
            .zip(c)
            .map(|((n, l), cj)| (n + beta * (n - l)).clamp(0.0, *cj))
            .collect();
        momentum = next_momentum;
        lam = next;
        dual = nd;
        g_cur = ng;
        let gap = (np - nd).max(0.0);
        if gap < best.2 {
            best = (nx, lam.clone(), gap);
        }
    }
    let (x, lam, _) = best;
    let objective = problem.objective(&x).expect("dimensions validated");
    ProxSolution {
        point: DecisionPoint::from_vec_unchecked(x),
        objective,
        multipliers: lam,
        iterations,
        method: ProxMethod::Dual,
    }
}

fn solve_subgradient(problem: &ProxProblem<'_>, params: &ProxSolverParams) -> Result<ProxSolution> {
    let set = problem.set;
    let radius = set.diameter().max(f64::MIN_POSITIVE);
    let g_bound = problem.constraints.row_norm_bound(problem.anchor)?;
    let lip = problem.step * norm(problem.direction) + norm(problem.penalty) * g_bound + 2.0 * radius;

    let mut x = set.project_raw(&problem.shifted_anchor());
    let mut best_x = x.clone();
    let mut best = problem.objective(&x)?;
    let z = set.project_raw(problem.anchor);
    let fz = problem.objective(&z)?;
    if fz < best {
        best = fz;
        best_x = z;
        x = best_x.clone();
    }

    let mut stall = 0;
    let mut iterations = 0;
    for k in 1..=params.max_iters {
        iterations = k;
        let jac = problem.constraints.clipped_subgradient(&x)?;
        let mut s = jac.tr_mul_vec(problem.penalty)?;
        for ((si, di), (xi, zi)) in s.iter_mut().zip(problem.direction).zip(x.iter().zip(problem.anchor)) {
            *si += problem.step * di + 2.0 * (xi - zi);
        }
        let eta = params.step_scale * radius / (lip * (k as f64).sqrt());
        let trial: Vec<f64> = x.iter().zip(&s).map(|(xi, si)| xi - eta * si).collect();
        x = set.project_raw(&trial);
        let f = problem.objective(&x)?;
        if f < best - params.tol {
            stall = 0;
        } else {
            stall += 1;
        }
        if f < best {
            best = f;
            best_x.clone_from(&x);
        }
        if stall >= STALL_WINDOW {
            break;
        }
    }
    let g = problem.constraints.values(&best_x)?;
    let multipliers = g
        .iter()
        .zip(problem.penalty)
        .map(|(gj, cj)| if *gj < 0.0 { 0.0 } else { *cj })
        .collect();
    Ok(ProxSolution {
        point: DecisionPoint::new(best_x)?,
        objective: best,
        multipliers,
        iterations,
        method: ProxMethod::Subgradient,
    })
}

/// Candidate splits of the constraints into `λ_j = 0`, `λ_j = c_j`, and
/// "on the kink" (`g_j = 0`, `λ_j` free), read off the current iterate.
/// `None` marks a free multiplier.
fn face_guesses(lam: &[f64], g: &[f64], c: &[f64]) -> Vec<Vec<Option<f64>>> {
    let from_bounds = lam
        .iter()
        .zip(c)
        .map(|(&l, &cj)| if l <= 0.0 { Some(0.0) } else if l >= cj { Some(cj) } else { None })
        .collect();
    let from_signs = g
        .iter()
        .zip(c)
        .map(|(&gj, &cj)| {
            if gj > KINK_BAND {
                Some(cj)
            } else if gj < -KINK_BAND {
                Some(0.0)
            } else {
                None
            }
        })
        .collect();
    vec![from_bounds, from_signs]
}

/// Solve for the free multipliers so their constraints hold with equality,
/// keeping the box-clipping pattern seen at `lam`. Box sets only; the caller
/// accepts the result only if it closes the duality gap.
fn polish_face(
    set: &FeasibleSet,
    a: &Matrix,
    b: &[f64],
    v: &[f64],
    c: &[f64],
    lam: &[f64],
    guess: &[Option<f64>],
) -> Option<Vec<f64>> {
    let FeasibleSet::Box { lower, upper } = set else {
        return None;
    };
    let fixed: Vec<f64> = guess.iter().map(|g| g.unwrap_or(0.0)).collect();
    let free_rows: Vec<usize> = (0..guess.len()).filter(|&j| guess[j].is_none()).collect();
    if free_rows.is_empty() {
        return Some(fixed);
    }
    let unclipped = |mult: &[f64]| -> Option<Vec<f64>> {
        let shift = a.tr_mul_vec(mult).ok()?;
        Some(v.iter().zip(&shift).map(|(vi, si)| vi - 0.5 * si).collect())
    };
    let w_cur = unclipped(lam)?;
    let w_fixed = unclipped(&fixed)?;
    let is_free = |i: usize| w_cur[i] > lower[i] && w_cur[i] < upper[i];
    let free_cols: Vec<usize> = (0..v.len()).filter(|&i| is_free(i)).collect();
    // free coordinates move linearly with the multipliers; clipped ones stay put
    let x: Vec<f64> = (0..v.len())
        .map(|i| if is_free(i) { w_fixed[i] } else { w_cur[i].clamp(lower[i], upper[i]) })
        .collect();
    let k = free_rows.len();
    let mut mat = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for (r, &j) in free_rows.iter().enumerate() {
        for (s, &l) in free_rows.iter().enumerate() {
            mat[r][s] = 0.5 * free_cols.iter().map(|&i| a.get(j, i) * a.get(l, i)).sum::<f64>();
        }
        rhs[r] = dot(a.row(j), &x) - b[j];
    }
    let sol = solve_small(mat, rhs)?;
    let mut lam = fixed;
    for (&j, s) in free_rows.iter().zip(sol) {
        lam[j] = s.clamp(0.0, c[j]);
    }
    Some(lam)
}

/// Exhaustive grid minimisation of the prox objective over a box with
/// `p ≤ 2`, followed by one refinement pass at a tenth of the step around
/// the best grid point. Intended as a test oracle.
pub fn brute_force_prox(problem: &ProxProblem<'_>, grid_step: f64) -> Result<(DecisionPoint, f64)> {
    problem.validate()?;
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return invalid("grid step must be positive");
    }
    let (lower, upper) = match problem.set {
        FeasibleSet::Box { lower, upper } if lower.len() <= 2 => (lower, upper),
        _ => {
            return Err(Error::Unsupported(
                "brute-force prox needs a box of dimension at most 2".into(),
            ))
        }
    };

    let coarse: Vec<Vec<f64>> =
        lower.iter().zip(upper).map(|(&l, &u)| axis_points(l, u, grid_step)).collect();
    let (mut best_x, mut best) = grid_min(problem, &coarse)?;

    let fine_step = grid_step / 10.0;
    let local: Vec<Vec<f64>> = best_x
        .iter()
        .zip(lower.iter().zip(upper))
        .map(|(&c, (&l, &u))| axis_points((c - grid_step).max(l), (c + grid_step).min(u), fine_step))
        .collect();
    let (rx, rf) = grid_min(problem, &local)?;
    if rf < best {
        best = rf;
        best_x = rx;
    }
    Ok((DecisionPoint::new(best_x)?, best))
}

fn axis_points(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut pts: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    if let Some(&last) = pts.last() {
        if hi - last > 1e-12 {
            pts.push(hi);
        }
    }
    pts
}

fn grid_min(problem: &ProxProblem<'_>, axes: &[Vec<f64>]) -> Result<(Vec<f64>, f64)> {
    // affine penalties are evaluated in place; this loop visits millions of points
    let eval = |x: &[f64]| -> Result<f64> {
        match problem.constraints {
            ConstraintOracle::Affine { a, b } => {
                let mut penalty = 0.0;
                for (j, (bj, cj)) in b.iter().zip(problem.penalty).enumerate() {
                    let v = dot(a.row(j), x) - bj;
                    if v > 0.0 {
                        penalty += cj * v;
                    }
                }
                Ok(problem.step * dot(problem.direction, x) + penalty + dist_sq(x, problem.anchor))
            }
            ConstraintOracle::General(_) => problem.objective(x),
        }
    };
    let mut best = (Vec::new(), f64::INFINITY);
    let mut consider = |x: &[f64]| -> Result<()> {
        let f = eval(x)?;
        if f < best.1 {
            best = (x.to_vec(), f);
        }
        Ok(())
    };
    match axes {
        [xs] => {
            for &x in xs {
                consider(&[x])?;
            }
        }
        [xs, ys] => {
            for &x in xs {
                for &y in ys {
                    consider(&[x, y])?;
                }
            }
        }
        _ => unreachable!("dimension checked by caller"),
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::GeneralConstraint;

    fn cube(p: usize) -> FeasibleSet {
        FeasibleSet::cube(p, -1.0, 1.0).unwrap()
    }

    fn affine(rows: &[Vec<f64>], b: Vec<f64>) -> ConstraintOracle {
        ConstraintOracle::affine(Matrix::from_rows(rows).unwrap(), b).unwrap()
    }

    #[test]
    fn zero_penalty_is_closed_form() {
        let set = cube(2);
        let g = affine(&[vec![1.0, 1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.0, 0.0],
            direction: &[1.0, -2.0],
            step: 0.5,
            penalty: &[0.0],
            constraints: &g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &ProxSolverParams::default()).unwrap();
        assert_eq!(sol.method, ProxMethod::ClosedForm);
        assert_eq!(sol.point.coords(), &[-0.25, 0.5]);
    }

    #[test]
    fn one_dimensional_active_branch() {
        // min 0.4·[x]₊ + (x − 0.5)² on [−1, 1]
        let set = cube(1);
        let g = affine(&[vec![1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[0.4],
            constraints: &g,
            set: &set,
        };
        let x = solve_prox(&pb, &ProxSolverParams::default()).unwrap();
        assert!((x[0] - 0.3).abs() < 1e-10, "{x:?}");
    }

    #[test]
    fn two_dimensional_symmetric_case() {
        let set = cube(2);
        let g = affine(&[vec![1.0, 1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.6, 0.6],
            direction: &[0.0, 0.0],
            step: 1.0,
            penalty: &[1.0],
            constraints: &g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &ProxSolverParams::default()).unwrap();
        assert!((sol.point[0] - 0.1).abs() < 1e-10 && (sol.point[1] - 0.1).abs() < 1e-10);
        assert!((sol.objective - 0.7).abs() < 1e-10);
    }

    #[test]
    fn kink_minimiser_gets_interior_multiplier() {
        // min 2·[x]₊ + (x − 0.5)²: optimum sits on the kink x = 0 with λ = 1
        let set = cube(1);
        let g = affine(&[vec![1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[2.0],
            constraints: &g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &ProxSolverParams::default()).unwrap();
        assert!(sol.point[0].abs() < 1e-12);
        assert!((sol.multipliers[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn general_oracle_uses_subgradient_path() {
        let set = cube(1);
        let g = ConstraintOracle::general(
            GeneralConstraint::new(1, 1, |x| (vec![x[0]], Matrix::from_rows(&[vec![1.0]]).unwrap()))
                .unwrap(),
        );
        let pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[0.4],
            constraints: &g,
            set: &set,
        };
        let sol = solve_prox_detailed(&pb, &ProxSolverParams::default()).unwrap();
        assert_eq!(sol.method, ProxMethod::Subgradient);
        assert!((sol.point[0] - 0.3).abs() < 1e-3, "{:?}", sol.point);
        assert!(sol.objective <= pb.objective(&[0.5]).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let set = cube(1);
        let g = affine(&[vec![1.0]], vec![0.0]);
        let mut pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[-0.1],
            constraints: &g,
            set: &set,
        };
        let params = ProxSolverParams::default();
        assert!(matches!(solve_prox(&pb, &params), Err(Error::InvalidArgument(_))));
        pb.penalty = &[0.1];
        pb.direction = &[f64::NAN];
        assert!(matches!(solve_prox(&pb, &params), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn brute_force_examples() {
        let set = cube(1);
        let g = affine(&[vec![1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[0.4],
            constraints: &g,
            set: &set,
        };
        let (_, f) = brute_force_prox(&pb, 1e-3).unwrap();
        let at_opt = pb.objective(&[0.3]).unwrap();
        assert!((f - at_opt).abs() < 1e-6);

        let pb0 = ProxProblem { anchor: &[0.25], penalty: &[0.0], ..pb };
        let (x, f) = brute_force_prox(&pb0, 1e-3).unwrap();
        assert!((x[0] - 0.25).abs() < 1e-4 && f.abs() < 1e-8);
    }

    #[test]
    fn brute_force_rejects_ball_and_high_dimension() {
        let ball = FeasibleSet::ball(vec![0.0], 1.0).unwrap();
        let g = affine(&[vec![1.0]], vec![0.0]);
        let pb = ProxProblem {
            anchor: &[0.5],
            direction: &[0.0],
            step: 1.0,
            penalty: &[0.4],
            constraints: &g,
            set: &ball,
        };
        assert!(matches!(brute_force_prox(&pb, 0.1), Err(Error::Unsupported(_))));
        let set3 = cube(3);
        let g3 = affine(&[vec![1.0, 0.0, 0.0]], vec![0.0]);
        let pb3 = ProxProblem {
            anchor: &[0.0; 3],
            direction: &[0.0; 3],
            step: 1.0,
            penalty: &[0.4],
            constraints: &g3,
            set: &set3,
        };
        assert!(matches!(brute_force_prox(&pb3, 0.1), Err(Error::Unsupported(_))));
    }
}
