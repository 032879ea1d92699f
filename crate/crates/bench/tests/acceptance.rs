//! The ten acceptance criteria at their stated scales and tolerances.
//! Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use ltc_bench::certify::{self, Check};
use ltc_bench::{presets, run_experiment, BenchError};

const SEED: u64 = 42;

fn report(outcome: Result<Vec<Check>, BenchError>, id: &str, all: &mut Vec<Check>) {
    match outcome {
        Ok(checks) => {
            for c in checks {
                println!("{c}");
                all.push(c);
            }
        }
        Err(e) => {
            println!("[FAIL] {id:<3} error: {e}");
            all.push(Check { id: "?", name: "error", passed: false, detail: e.to_string() });
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all = Vec::new();
    println!("acceptance criteria (seed {SEED})");

    report(certify::prox_oracle(SEED, 200).map(|c| vec![c]), "1", &mut all);
    report(certify::prox_variational_inequality(SEED, 50, 100).map(|c| vec![c]), "2", &mut all);
    report(certify::dual_invariants(SEED, 2000).map(|c| vec![c]), "3", &mut all);
    report(certify::hedge_invariants(SEED, 50, 200).map(|c| vec![c]), "4", &mut all);
    report(certify::aggregate_regret(SEED, 500).map(|c| vec![c]), "5", &mut all);

    let lp_cfg = presets::online_lp();
    let qp_cfg = presets::online_qp();
    assert_eq!((lp_cfg.seed, lp_cfg.repetitions, lp_cfg.horizon), (SEED, 50, 5000));
    let lp = run_experiment(&lp_cfg);
    let qp = run_experiment(&qp_cfg);
    match (&lp, &qp) {
        (Ok(lp), Ok(qp)) => {
            report(certify::lp_reproduction(lp), "6", &mut all);
            report(certify::qp_reproduction(qp).map(|c| vec![c]), "7", &mut all);
            report(Ok(vec![certify::sandwich(&[lp, qp])]), "8", &mut all);
            report(certify::determinism(&lp_cfg, lp).map(|c| vec![c]), "9", &mut all);
            report(Ok(vec![certify::surrogate_self_loss(&[lp])]), "10", &mut all);
        }
        _ => {
            for e in [lp.err(), qp.err()].into_iter().flatten() {
                report(Err(e), "6-10", &mut all);
            }
        }
    }

    let failed = all.iter().filter(|c| !c.passed).count();
    println!(
        "{} checks, {} passed, {failed} failed in {:.1} s",
        all.len(),
        all.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
