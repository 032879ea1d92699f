use std::path::PathBuf;

use ltc_bench::instance::{drift_is_negative, generate, ProblemKind, QP_SCALE};
use ltc_core::linalg::{dot, norm_sq, sub};
use proptest::prelude::*;
use serde_json::{json, Value};

const ROUNDS: usize = 5000;

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/online_lp_seed42_rep0.json")
}

fn snapshot() -> Value {
    let inst = generate(ProblemKind::OnlineLp, 2, 3, ROUNDS, 42, 0);
    let rows: Vec<Vec<f64>> = (0..3).map(|j| inst.a.row(j).to_vec()).collect();
    json!({
        "A": rows,
        "b": inst.b,
        "theta_first": &inst.theta[..5],
        "theta_last": &inst.theta[ROUNDS - 1],
        "sign_first": &inst.parts.sign[..10],
    })
}

/// Set `LTC_BLESS=1` to rewrite the golden file after a deliberate generator change.
#[test]
fn seed_42_rep_0_matches_golden() {
    let now = snapshot();
    let path = golden_path();
    if std::env::var_os("LTC_BLESS").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
    }
    let frozen: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(now, frozen);
}

#[test]
fn every_round_respects_the_construction() {
    for rep in 0..5 {
        let inst = generate(ProblemKind::OnlineLp, 2, 3, ROUNDS, 42, rep);
        for j in 0..3 {
            assert!(inst.a.row(j).iter().all(|v| (0.0..=2.0).contains(v)));
        }
        assert!(inst.b.iter().all(|v| (0.0..=5.0).contains(v)));
        let p = &inst.parts;
        let mut plus = 0;
        for t in 1..=ROUNDS {
            let i = t - 1;
            let reach = (t as f64).powf(0.1);
            assert!(p.noise[i].iter().all(|v| v.abs() <= reach));
            let (lo, hi) = if drift_is_negative(t) { (-1.0, 0.0) } else { (0.0, 1.0) };
            assert!(p.drift[i].iter().all(|v| (lo..=hi).contains(v)), "round {t}");
            assert!(p.sign[i] == 1.0 || p.sign[i] == -1.0);
            plus += usize::from(p.sign[i] > 0.0);
            for k in 0..2 {
                assert_eq!(inst.theta[i][k], p.noise[i][k] + p.drift[i][k] + p.sign[i]);
            }
        }
        // a permutation of 1..T has exactly ⌊T/2⌋ even entries
        assert_eq!(plus, ROUNDS / 2);
    }
}

#[test]
fn qp_instance_shares_lp_data() {
    let lp = generate(ProblemKind::OnlineLp, 2, 3, 200, 9, 1);
    let qp = generate(ProblemKind::OnlineQp, 2, 3, 200, 9, 1);
    assert_eq!((&lp.a, &lp.b, &lp.theta), (&qp.a, &qp.b, &qp.theta));
    let x = [0.3, -0.4];
    let th = &qp.theta[7];
    let want = norm_sq(&sub(&x, th)) + QP_SCALE * dot(th, &x);
    assert_eq!(qp.loss().value(8, &x).unwrap(), want);
}

proptest! {
    #[test]
    fn qp_loss_is_strongly_convex(
        t in 1usize..=300,
        x in prop::collection::vec(-1.0..=1.0f64, 2),
        y in prop::collection::vec(-1.0..=1.0f64, 2),
    ) {
        let loss = generate(ProblemKind::OnlineQp, 2, 3, 300, 42, 0).loss();
        let (fy, gy) = loss.evaluate(t, &y).unwrap();
        let fx = loss.value(t, &x).unwrap();
        let d = sub(&x, &y);
        prop_assert!(fx - fy - dot(&d, &gy) >= norm_sq(&d) - 1e-9);
    }
}
