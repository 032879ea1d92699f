mod common;

use common::*;
use ltc_core::linalg::dot;
use ltc_core::metrics::{growth_exponent, hindsight_static_solution, regret, violation_metrics, TOL_FEAS};
use ltc_core::*;
use proptest::prelude::*;

fn records() -> impl Strategy<Value = Vec<RoundRecord>> {
    (1usize..=4).prop_flat_map(|m| {
        prop::collection::vec(prop::collection::vec(-3.0..3.0f64, m), 1..40).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, g)| RoundRecord::new(i + 1, DecisionPoint::zeros(1), 0.0, g))
                .collect()
        })
    })
}

proptest! {
    #[test]
    fn violation_sandwich(recs in records()) {
        let m = recs[0].g_values.len();
        let v = violation_metrics(&recs);
        prop_assert!(v.sandwich_holds(m, 1e-12));
        // ‖g‖ ≤ F on every round gives squared ≤ F·ccv
        let f = recs.iter().map(|r| linalg::norm(&r.g_values)).fold(0.0, f64::max);
        prop_assert!(v.squared <= f * v.ccv + 1e-12);
    }

    #[test]
    fn growth_exponent_ignores_scale(
        values in prop::collection::vec(0.1..100.0f64, 4),
        scale in 1e-3..1e3f64,
    ) {
        let ts = [625.0, 1250.0, 2500.0, 5000.0];
        let pts: Vec<(f64, f64)> = ts.iter().copied().zip(values.iter().copied()).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|(t, v)| (*t, v * scale)).collect();
        let a = growth_exponent(&pts).unwrap().exponent;
        let b = growth_exponent(&scaled).unwrap().exponent;
        prop_assert!((a - b).abs() <= 1e-9);
    }
}

/// Minimum of a linear objective over `[−1,1]² ∩ {Ax ≤ b}` by vertex enumeration.
fn lp_by_vertices(c: &[f64], g: &ConstraintOracle) -> f64 {
    let ConstraintOracle::Affine { a, b } = g else { unreachable!() };
    let mut lines: Vec<([f64; 2], f64)> = vec![([1.0, 0.0], 1.0), ([1.0, 0.0], -1.0), ([0.0, 1.0], 1.0), ([0.0, 1.0], -1.0)];
    for j in 0..a.rows() {
        lines.push(([a.get(j, 0), a.get(j, 1)], b[j]));
    }
    let mut best = f64::INFINITY;
    for i in 0..lines.len() {
        for k in i + 1..lines.len() {
            let ((p, u), (q, v)) = (lines[i], lines[k]);
            let det = p[0] * q[1] - p[1] * q[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = [(u * q[1] - v * p[1]) / det, (p[0] * v - q[0] * u) / det];
            let inside = x.iter().all(|xi| xi.abs() <= 1.0 + 1e-9)
                && g.values(&x).unwrap().iter().all(|gj| *gj <= 1e-9);
            if inside {
                best = best.min(dot(c, &x));
            }
        }
    }
    best
}

#[test]
fn hindsight_matches_vertex_enumeration() {
    let mut r = rng(21);
    for _ in 0..20 {
        let g = random_affine(&mut r, 3, 5.0);
        let thetas = random_thetas(&mut r, 100);
        let sum: Vec<f64> = (0..2).map(|i| thetas.iter().map(|th| th[i]).sum()).collect();
        let loss = LossOracle::linear(thetas).unwrap();
        let sol = hindsight_static_solution(&loss, 100, &g, &square()).unwrap();
        assert!(sol.certified);
        assert!(g.is_satisfied(&sol.point, TOL_FEAS).unwrap());
        let exact = lp_by_vertices(&sum, &g);
        assert!(sol.objective - exact <= 1e-3, "{} vs {exact}", sol.objective);
        // only the feasibility tolerance lets the search undercut the exact value
        assert!(sol.objective >= exact - 1e-6);
    }
}

#[test]
fn hindsight_matches_plain_grid_for_quadratics() {
    let mut r = rng(22);
    for _ in 0..5 {
        let g = random_affine(&mut r, 3, 1.0);
        let thetas = random_thetas(&mut r, 100);
        let loss = LossOracle::quadratic(thetas, 20.0).unwrap();
        let sol = hindsight_static_solution(&loss, 100, &g, &square()).unwrap();
        let mut grid = f64::INFINITY;
        let n = 800;
        for i in 0..=n {
            for k in 0..=n {
                let x = [-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * k as f64 / n as f64];
                if g.is_satisfied(&x, TOL_FEAS).unwrap() {
                    grid = grid.min((1..=100).map(|t| loss.value(t, &x).unwrap()).sum());
                }
            }
        }
        assert!(sol.objective <= grid + 1e-9, "{} vs {grid}", sol.objective);
        // some grid point lies within h√2 of the optimum, and the loss has curvature T
        let reach = 2f64.sqrt() * 2.0 / n as f64;
        let (_, grad) = loss.cumulative(100).unwrap().evaluate(&sol.point).unwrap();
        let slack = linalg::norm(&grad) * reach + 100.0 * reach * reach;
        assert!(grid - sol.objective <= slack, "{} vs {grid}, slack {slack}", sol.objective);
    }
}

#[test]
fn three_round_regret_against_grid() {
    let thetas = vec![vec![1.0, -0.5], vec![0.25, 0.75], vec![-2.0, 0.5]];
    let loss = LossOracle::linear(thetas).unwrap();
    let g = ConstraintOracle::affine(Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(), vec![0.5]).unwrap();
    let played: Vec<RoundRecord> = [[0.0, 0.0], [0.5, -0.5], [0.2, 0.1]]
        .iter()
        .enumerate()
        .map(|(i, x)| RoundRecord::observe(i + 1, DecisionPoint::new(x.to_vec()).unwrap(), &loss, &g).unwrap())
        .collect();
    let best = hindsight_static_solution(&loss, 3, &g, &square()).unwrap();
    let reg = regret(&played, &ComparatorSequence::Static(best.point), &loss).unwrap();
    // Σθ = (−0.75, 0.75): optimum at (−1, 1) on the boundary x₁ + x₂ ≤ 0.5
    let played_loss: f64 = played.iter().map(|r| r.loss).sum();
    assert!((reg - (played_loss + 1.5)).abs() <= 1e-6, "{reg}");
}
