//! Process-level checks of the qcert binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcert"))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcert-cli-test-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn epsilon_subcommand_prints_radius() {
    let out = bin()
        .args([
            "epsilon",
            "--shots",
            "4096",
            "--outcomes",
            "32",
            "--delta",
            "0.003",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((value - 0.11690561).abs() < 1e-5);
}

#[test]
fn dop_subcommand_reads_povm_files() {
    use qcert::quantum::{
        computational_povm, noise_channel, noisy_povm, EffectConvention, NoiseModel,
    };
    let dir = scratch_dir("dop");
    let target = computational_povm(1);
    let gamma = 0.25f64;
    let ch = noise_channel(NoiseModel::RotationY, 2.0 * gamma).unwrap();
    let actual = noisy_povm(
        &[ch],
        std::slice::from_ref(&target),
        EffectConvention::Heisenberg,
    )
    .unwrap();
    let target_path = dir.join("target.povm");
    let actual_path = dir.join("actual.povm");
    qcert_cli::files::write_povm(&target, &target_path).unwrap();
    qcert_cli::files::write_povm(&actual, &actual_path).unwrap();

    let run_kind = |kind: &str| -> f64 {
        let out = bin()
            .args(["dop", "--target"])
            .arg(&target_path)
            .arg("--actual")
            .arg(&actual_path)
            .args(["--kind", kind])
            .output()
            .unwrap();
        assert!(out.status.success(), "dop --kind {kind} failed");
        let text = String::from_utf8(out.stdout).unwrap();
        let value_line = text.lines().find(|l| l.starts_with("value = ")).unwrap();
        value_line.trim_start_matches("value = ").parse().unwrap()
    };
    assert!((run_kind("exact") - gamma.sin()).abs() < 1e-9);
    assert!((run_kind("fidelity") - gamma.sin()).abs() < 1e-9);
    // the built-in qubit design reproduces the frobenius bound
    assert!((run_kind("two-design") - run_kind("frobenius")).abs() < 1e-9);
}

#[test]
fn certify_subcommand_solves_region_file() {
    use qcert::certifier::ConfidenceRegion;
    use qcert::quantum::{computational_povm, pauli_z};
    let dir = scratch_dir("certify");
    let povm = computational_povm(1);
    let region = ConfidenceRegion::new(povm.clone(), vec![1.0, 0.0], 0.2, 0.0, 0.003).unwrap();
    let povm_path = dir.join("z.povm");
    let region_path = dir.join("region.txt");
    let objective_path = dir.join("sz.mat");
    qcert_cli::files::write_povm(&povm, &povm_path).unwrap();
    std::fs::write(&region_path, region.to_block()).unwrap();
    let z = pauli_z();
    let mut text = String::from("2\n");
    for r in 0..2 {
        let row: Vec<String> = (0..2)
            .map(|c| format!("{},{}", z.get(r, c).re, z.get(r, c).im))
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&objective_path, text).unwrap();

    let out = bin()
        .args(["certify", "--region"])
        .arg(&region_path)
        .arg("--povm")
        .arg(&povm_path)
        .arg("--objective")
        .arg(&objective_path)
        .args(["--direction", "min"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "min");
    let dual: f64 = fields[1].parse().unwrap();
    assert!((dual - 0.8).abs() < 1e-4, "dual bound {dual}");
    assert_eq!(fields[4], "converged");
}

#[test]
fn experiment_subcommand_is_deterministic_across_processes() {
    let dir = scratch_dir("exp");
    let config_path = dir.join("witness.cfg");
    std::fs::write(
        &config_path,
        "experiment = witness\nseed = 3\nn_trials = 2\nshots_grid = 512,2048\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out_dir = dir.join(format!("run{run}"));
        let out = bin()
            .arg("experiment")
            .arg(&config_path)
            .arg("--out-dir")
            .arg(&out_dir)
            .args(["--format", "csv"])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        outputs.push(std::fs::read(out_dir.join("witness.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    assert!(text.starts_with("sweep,median,q1,q3,n_feasible,n_infeasible\n"));
    assert_eq!(text.matches("# curve").count(), 3);
}

#[test]
fn experiment_rejects_bad_config() {
    let dir = scratch_dir("bad");
    let config_path = dir.join("bad.cfg");
    std::fs::write(&config_path, "experiment = witness\nmystery_key = 1\n").unwrap();
    let out = bin().arg("experiment").arg(&config_path).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("unknown config key"), "stderr: {stderr}");
}
