use std::path::Path;
use std::process::Command;

use floquet_core::resonance::corridor_mask;
use floquet_core::single_qubit::{mu_numeric, DriveClass, SingleQubitParams};
use floquet_sweep::config::{Format, SweepConfig, Task};
use floquet_sweep::run::{read_csv, run, RunOptions, PART_FILE};
use proptest::prelude::*;

const BIN: &str = env!("CARGO_BIN_EXE_floquet-sweep");

fn two_qubit(points: usize) -> String {
    format!(
        r#"
[system]
n_qubits = 2
coupling = "exchange"
c = 0.02

[drive]
kind = "monochromatic"

[grid]
x = {{ param = "F", min = 0.0, max = 3.0, points = {points} }}
y = {{ param = "omega0", min = 0.0, max = 3.0, points = {points} }}
"#
    )
}

fn options(task: Task, dir: &Path) -> RunOptions {
    RunOptions {
        task,
        out_dir: dir.to_path_buf(),
        workers: Some(2),
        resume: false,
        format: Format::Csv,
        plot: true,
        seed: None,
    }
}

#[test]
fn sweep_grid_has_one_row_per_point_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(8)).unwrap();
    let summary = run(&config, &options(Task::Sweep, dir.path())).unwrap();
    assert_eq!((summary.n_points, summary.failed), (64, 0));
    let (header, rows) = read_csv(&summary.result_file).unwrap();
    let expected = "ix,iy,x,y,mu,n,deviation,corridor,allowed,eps_0,eps_1,eps_2,eps_3,\
                    ent_0,ent_1,ent_2,ent_3,ent_min,ent_max,degenerate,status";
    assert_eq!(header.join(","), expected);
    assert_eq!(rows.len(), 64);
    let keys: Vec<(usize, usize)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &rows {
        for v in &r[13..19] {
            let e: f64 = v.parse().unwrap();
            assert!((-1e-12..=1.0 + 1e-12).contains(&e));
        }
    }
    assert!(dir.path().join("meta.json").exists());
    assert!(dir.path().join("plot.py").exists());
    assert!(!dir.path().join(PART_FILE).exists());
}

#[test]
fn predict_matches_the_library_corridor_mask() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(6)).unwrap();
    let summary = run(&config, &options(Task::Predict, dir.path())).unwrap();
    let (header, rows) = read_csv(&summary.result_file).unwrap();
    let col = |name: &str| header.iter().position(|c| c == name).unwrap();
    let mut mus = Vec::new();
    let mut flags = Vec::new();
    for r in &rows {
        let (f, w0): (f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap());
        let mu = mu_numeric(&SingleQubitParams::new(w0, 1.0, f), DriveClass::Monochromatic).unwrap();
        assert_eq!(r[col("mu")].parse::<f64>().unwrap(), mu);
        mus.push(mu);
        flags.push(r[col("corridor")] == "true");
    }
    assert_eq!(flags, corridor_mask(&mus, 1.0, 4, 0.02));
    assert!(flags.iter().any(|&f| f) && flags.iter().any(|&f| !f));
}

#[test]
fn validate_reports_backend_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let text = two_qubit(6).replace("n_qubits = 2\ncoupling = \"exchange\"\nc = 0.02", "n_qubits = 1");
    let config = SweepConfig::from_toml(&text).unwrap();
    let summary = run(&config, &options(Task::Validate, dir.path())).unwrap();
    assert_eq!(summary.failed, 0);
    assert!(summary.max_disagreement.unwrap() < 1e-8);
}

#[test]
fn resume_recomputes_only_missing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(4)).unwrap();
    let full = run(&config, &options(Task::Sweep, dir.path())).unwrap();
    let reference = std::fs::read(&full.result_file).unwrap();

    // an interrupted run leaves the stamped partial file with some rows and a torn line
    let text = String::from_utf8(reference.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let stamp = format!("# sweep {}", config.hash());
    let mut part = format!("{stamp}\n{}\n{}\n", lines[..6].join("\n"), lines[9]);
    part.push_str(&lines[10][..12]);
    std::fs::remove_file(&full.result_file).unwrap();
    std::fs::write(dir.path().join(PART_FILE), part).unwrap();

    let mut opts = options(Task::Sweep, dir.path());
    opts.resume = true;
    let resumed = run(&config, &opts).unwrap();
    assert_eq!((resumed.resumed, resumed.computed), (6, 10));
    assert_eq!(std::fs::read(&resumed.result_file).unwrap(), reference);

    let again = run(&config, &opts).unwrap();
    assert_eq!((again.resumed, again.computed), (16, 0));
    assert_eq!(std::fs::read(&again.result_file).unwrap(), reference);
}

#[test]
fn resume_ignores_rows_of_another_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(3)).unwrap();
    run(&config, &options(Task::Predict, dir.path())).unwrap();
    let other = SweepConfig::from_toml(&two_qubit(3).replace("c = 0.02", "c = 0.03")).unwrap();
    let mut opts = options(Task::Predict, dir.path());
    opts.resume = true;
    let s = run(&other, &opts).unwrap();
    assert_eq!((s.resumed, s.computed), (0, 9));
}

#[test]
fn json_output_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(3)).unwrap();
    let csv = run(&config, &options(Task::Predict, &dir.path().join("csv"))).unwrap();
    let mut opts = options(Task::Predict, &dir.path().join("json"));
    opts.format = Format::Json;
    let json = run(&config, &opts).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(json.result_file).unwrap()).unwrap();
    let (header, rows) = read_csv(&csv.result_file).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), rows.len());
    for (row, obj) in rows.iter().zip(doc["rows"].as_array().unwrap()) {
        let mu: f64 = row[header.iter().position(|c| c == "mu").unwrap()].parse().unwrap();
        assert_eq!(obj["mu"].as_f64().unwrap(), mu);
        assert_eq!(obj["corridor"].as_bool().unwrap().to_string(), row[7]);
    }
}

#[test]
fn metadata_hash_matches_canonical_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(2)).unwrap();
    run(&config, &options(Task::Predict, dir.path())).unwrap();
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config_hash"], config.hash());
    let stored: SweepConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!(stored, config);
    assert_eq!(stored.hash(), config.hash());
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), &two_qubit(2));
    let out = dir.path().join("out");
    let status = Command::new(BIN)
        .args(["predict", "--config"])
        .arg(&good)
        .arg("--out")
        .arg(&out)
        .args(["--workers", "1", "--seed", "7"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);

    let bad = write_config(dir.path(), &two_qubit(1));
    let output = Command::new(BIN)
        .args(["sweep", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("grid.x.points"));

    let no_task = write_config(dir.path(), &two_qubit(2));
    let status = Command::new(BIN).arg("--config").arg(&no_task).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // every point exhausts the truncation budget
    let failing = two_qubit(2)
        + "\n[numerics]\ntruncation = \"adaptive\"\nmargin = 4\nm = 16\ntolerance = 1e-15\n\
                                  max_m = 9\nn_samples = 16\nbackend = \"fourier\"\nfailure_threshold = 0.05\n\
                                  validate_tolerance = 1e-8\n";
    let failing = write_config(
        dir.path(),
        &failing.replace("min = 0.0, max = 3.0", "min = 2.0, max = 3.0"),
    );
    let out = dir.path().join("fail");
    let status = Command::new(BIN)
        .args(["spectrum", "--config"])
        .arg(&failing)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let (_, rows) = read_csv(&out.join("results.csv")).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .all(|r| r[4] == "NaN" && r.last().unwrap().starts_with("error: ")));
}

fn python_with_matplotlib() -> bool {
    Command::new("python3")
        .args(["-c", "import matplotlib, numpy"])
        .status()
        .is_ok_and(|s| s.success())
}

#[test]
fn plot_script_renders_and_handles_empty_results() {
    if !python_with_matplotlib() {
        eprintln!("python3 with matplotlib not available; plot script not executed");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let config = SweepConfig::from_toml(&two_qubit(3)).unwrap();
    let summary = run(&config, &options(Task::Predict, dir.path())).unwrap();
    let png = dir.path().join("map.png");
    let status = Command::new("python3")
        .arg(dir.path().join("plot.py"))
        .arg(&png)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(png.exists());

    let (header, _) = read_csv(&summary.result_file).unwrap();
    std::fs::write(&summary.result_file, header.join(",") + "\n").unwrap();
    let output = Command::new("python3")
        .arg(dir.path().join("plot.py"))
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(String::from_utf8_lossy(&output.stdout).contains("no data rows"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trips(
        omega0 in 0.0..5.0f64,
        c in 0.0..0.5f64,
        amp in 0.0..4.0f64,
        ratio in 0.0..3.0f64,
        omega in 0.1..10.0f64,
        min in 0.0..1.0f64,
        span in 0.0..3.0f64,
        points in 2usize..40,
        tol in 1e-14..1e-6f64,
        workers in proptest::option::of(1usize..16),
    ) {
        let mut config = SweepConfig::from_toml(&two_qubit(2)).unwrap();
        config.system.omega0 = omega0;
        config.system.c = c;
        config.drive.amplitude = amp;
        config.drive.second_ratio = ratio;
        config.drive.omega = omega;
        config.grid.x.min = min;
        config.grid.x.max = min + span;
        config.grid.y.points = points;
        config.numerics.tolerance = tol;
        config.numerics.workers = workers;
        config.validate().unwrap();
        let back = SweepConfig::from_toml(&config.to_toml()).unwrap();
        prop_assert_eq!(&back, &config);
        prop_assert_eq!(back.hash(), config.hash());
    }
}
