use std::process::Command;

use ltc_bench::config::{AlgorithmConfig, ExperimentConfig};
use ltc_bench::emit::{emit, to_csv, Format};
use ltc_bench::runner::{run_experiment_with, RunOptions};
use ltc_bench::{presets, run_experiment, BenchError};
use ltc_core::metrics::violation_metrics;

fn small(algorithms: Vec<AlgorithmConfig>) -> ExperimentConfig {
    ExperimentConfig {
        horizon: 300,
        repetitions: 3,
        checkpoints: vec![75, 150, 300],
        algorithms,
        ..presets::online_lp()
    }
}

fn lp_algorithms() -> Vec<AlgorithmConfig> {
    presets::online_lp().algorithms
}

#[test]
fn empty_algorithm_list_gives_empty_table() {
    let table = run_experiment(&small(Vec::new())).unwrap();
    assert!(table.rows.is_empty());
    assert_eq!(to_csv(&table).lines().count(), 1);
}

#[test]
fn identical_entries_give_identical_columns() {
    let a = lp_algorithms()[0].clone();
    let table = run_experiment(&small(vec![a.clone(), a])).unwrap();
    assert_eq!(table.rows.len(), 6);
    let (first, second) = table.rows.split_at(3);
    assert_eq!(first, second);
}

#[test]
fn one_row_per_algorithm_and_checkpoint() {
    let table = run_experiment(&small(lp_algorithms()[..1].to_vec())).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert_eq!(table.rows.iter().map(|r| r.t).collect::<Vec<_>>(), vec![75, 150, 300]);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = small(lp_algorithms());
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| to_csv(&run_experiment(&cfg).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

#[test]
fn checkpoint_metrics_match_records() {
    let cfg = small(lp_algorithms());
    let table = run_experiment_with(&cfg, RunOptions { keep_records: true }).unwrap();
    for rep in &table.repetitions {
        for run in &rep.runs {
            let records = run.records.as_ref().unwrap();
            assert_eq!(records.len(), 300);
            for (cp, best) in run.checkpoints.iter().zip(&rep.hindsight) {
                let prefix = &records[..cp.t];
                let loss: f64 = prefix.iter().map(|r| r.loss).sum();
                assert!((cp.cum_loss - loss).abs() <= 1e-9 * (1.0 + loss.abs()));
                assert_eq!(cp.violation, violation_metrics(prefix));
                assert_eq!(cp.regret_static, cp.cum_loss - best);
                assert!(cp.violation.sandwich_holds(3, 1e-12));
            }
            if run.name == "algorithm2" {
                assert!(run.max_self_loss.unwrap() <= 1e-12);
            } else {
                assert!(run.max_self_loss.is_none());
            }
        }
    }
}

#[test]
fn emit_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let table = run_experiment(&small(lp_algorithms())).unwrap();
    let csv = emit(&table, Format::Csv, dir.path()).unwrap();
    assert_eq!(std::fs::read_to_string(&csv[0]).unwrap(), to_csv(&table));
    let svgs = emit(&table, Format::Svg, dir.path()).unwrap();
    assert_eq!(svgs.len(), 4);
    for path in svgs {
        let body = std::fs::read_to_string(path).unwrap();
        assert_eq!(body.matches("<polyline").count(), 3);
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let table = run_experiment(&small(lp_algorithms()[..1].to_vec())).unwrap();
    let err = emit(&table, Format::Csv, &blocker.join("sub")).unwrap_err();
    assert!(matches!(err, BenchError::Io { .. }), "{err}");
}

#[test]
fn shipped_configs_match_presets() {
    let root = env!("CARGO_MANIFEST_DIR");
    let lp = ExperimentConfig::load(format!("{root}/configs/online_lp.toml").as_ref()).unwrap();
    let qp = ExperimentConfig::load(format!("{root}/configs/online_qp.toml").as_ref()).unwrap();
    assert_eq!(lp, presets::online_lp());
    assert_eq!(qp, presets::online_qp());
}

#[test]
fn cli_run_and_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("small.toml");
    std::fs::write(&cfg_path, small(lp_algorithms()).to_toml()).unwrap();
    let bin = env!("CARGO_BIN_EXE_ltc-bench");
    let out = dir.path().join("out");
    let status = Command::new(bin)
        .args(["run", "--config"])
        .arg(&cfg_path)
        .args(["--seed", "7", "--reps", "2", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let written = std::fs::read_to_string(out.join("results.csv")).unwrap();
    let cfg = ExperimentConfig { seed: 7, repetitions: 2, ..small(lp_algorithms()) };
    assert_eq!(written, to_csv(&run_experiment(&cfg).unwrap()));

    let svg = Command::new(bin)
        .args(["run", "--format", "svg", "--reps", "1", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(svg.success() && out.join("ccv_mean.svg").exists());

    let fit = Command::new(bin).arg("exponent").arg(out.join("results.csv")).output().unwrap();
    assert!(fit.status.success());
    let text = String::from_utf8(fit.stdout).unwrap();
    assert!(text.starts_with("algorithm,metric,exponent,floored\n"));
    assert!(text.contains("algorithm1,ccv_mean,"), "{text}");
}

#[test]
fn cli_rejects_unknown_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.toml");
    std::fs::write(&cfg_path, format!("colour = \"red\"\n{}", small(Vec::new()).to_toml())).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ltc-bench")).args(["run", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}
