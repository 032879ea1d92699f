use ltc_core::linalg::{dist, dot, norm, sub};
use ltc_core::*;
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-5.0..5.0f64, 3), prop::collection::vec(-5.0..5.0f64, 3))
}

fn sets() -> Vec<FeasibleSet> {
    vec![
        FeasibleSet::boxed(vec![-1.0, 0.0, -2.0], vec![1.0, 0.5, 3.0]).unwrap(),
        FeasibleSet::ball(vec![0.5, -0.5, 1.0], 1.5).unwrap(),
    ]
}

fn affine() -> ConstraintOracle {
    let a = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 1.0, 1.0], vec![-1.0, 0.3, 2.0]]).unwrap();
    ConstraintOracle::affine(a, vec![0.2, -0.1, 0.0]).unwrap()
}

proptest! {
    #[test]
    fn projection_is_nonexpansive((x, y) in pair()) {
        for set in sets() {
            let px = set.project(&x).unwrap();
            let py = set.project(&y).unwrap();
            prop_assert!(dist(&px, &py) <= dist(&x, &y) + 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent(x in prop::collection::vec(-5.0..5.0f64, 3)) {
        for set in sets() {
            let once = set.project(&x).unwrap();
            prop_assert!(set.contains(&once, 1e-12));
            let twice = set.project(&once).unwrap();
            prop_assert!(dist(&once, &twice) <= 1e-12);
        }
    }

    #[test]
    fn projection_is_nearest((x, y) in pair()) {
        // no point of the set is closer to x than its projection
        for set in sets() {
            let px = set.project(&x).unwrap();
            let other = set.project(&y).unwrap();
            prop_assert!(dist(&x, &px) <= dist(&x, &other) + 1e-12);
        }
    }

    #[test]
    fn clipping_is_nonexpansive((x, y) in pair()) {
        let g = affine();
        let ex = g.eval_constraints(&x).unwrap();
        let ey = g.eval_constraints(&y).unwrap();
        prop_assert!(dist(&ex.clipped, &ey.clipped) <= dist(&ex.values, &ey.values) + 1e-12);
        prop_assert!(ex.clipped.iter().all(|c| *c >= 0.0));
    }

    #[test]
    fn affine_clipped_rows_follow_sign(x in prop::collection::vec(-5.0..5.0f64, 3)) {
        let g = affine();
        let full = g.subgradient(&x).unwrap();
        let clipped = g.clipped_subgradient(&x).unwrap();
        let values = g.values(&x).unwrap();
        for (j, v) in values.iter().enumerate() {
            if *v < 0.0 {
                prop_assert!(clipped.row(j).iter().all(|e| *e == 0.0));
            } else {
                prop_assert_eq!(clipped.row(j), full.row(j));
            }
        }
    }

    #[test]
    fn quadratic_loss_is_strongly_convex(
        (x, y) in (prop::collection::vec(-1.0..1.0f64, 2), prop::collection::vec(-1.0..1.0f64, 2)),
        theta in prop::collection::vec(-3.0..3.0f64, 2),
    ) {
        let loss = LossOracle::quadratic(vec![theta], 20.0).unwrap();
        let mu = loss.strong_convexity().unwrap();
        let (fy, gy) = loss.evaluate(1, &y).unwrap();
        let fx = loss.value(1, &x).unwrap();
        let d = sub(&x, &y);
        prop_assert!(fx - fy - dot(&d, &gy) >= mu * norm(&d).powi(2) - 1e-9);
    }
}
