//! End-to-end driver tests: exit-code contract, rerun determinism, seed
//! override, and plot-data extraction.

use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_uncertainty-lab")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("uncertainty-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run_cli(config: &Path, out: &Path) -> std::process::Output {
    Command::new(binary())
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

#[test]
fn passing_run_exits_zero() {
    let dir = scratch("pass");
    let config = write_config(
        &dir,
        "full.cfg",
        "experiment.kind = concentration\ngeometry.d = 1\ngeometry.L = 1\ngeometry.N = 128\nset.kind = full\nband.b = 4\n",
    );
    let out = run_cli(&config, &dir.join("out"));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("out/results.csv")).unwrap();
    assert!(csv.lines().count() == 2);
    assert!(csv.contains(",1.0,1.0,")); // λ_min = λ_max = 1
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn config_errors_exit_one_with_field_path() {
    let dir = scratch("badcfg");
    // missing geometry.N
    let config = write_config(
        &dir,
        "bad.cfg",
        "experiment.kind = concentration\ngeometry.d = 1\ngeometry.L = 1\nset.kind = full\nband.b = 4\n",
    );
    let out = run_cli(&config, &dir.join("out"));
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("geometry.N"), "stderr: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_keys_are_rejected_with_their_path() {
    let dir = scratch("typo");
    let config = write_config(
        &dir,
        "typo.cfg",
        "experiment.kind = concentration\ngeometry.d = 1\ngeometry.L = 1\ngeometry.N = 128\nset.kind = full\nband.b = 4\ngeometry.M = 9\n",
    );
    let out = run_cli(&config, &dir.join("out"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("geometry.M"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn failing_assertion_exits_two() {
    let dir = scratch("assert");
    // an intentionally unattainable spread bound
    let config = write_config(
        &dir,
        "tight.cfg",
        "experiment.kind = scale-sweep\ngeometry.d = 1\ngeometry.N = 1024\nsweep.gamma = 0.25\nsweep.a = 2pi\nsweep.L_list = 1,2\nsweep.max_ratio = 1.0000000000001\nband.b = 3\n",
    );
    let out = run_cli(&config, &dir.join("out"));
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.join("out/report.txt")).unwrap();
    assert!(report.contains("status fail"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reruns_are_byte_identical() {
    let dir = scratch("determinism");
    let config = write_config(
        &dir,
        "suite.cfg",
        "experiment.kind = lemma-suite\nsuite.lemma = remez\nsuite.count = 30\nrun.seed = 5\n",
    );
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out_dir = dir.join(format!("out{i}"));
        let out = run_cli(&config, &out_dir);
        assert_eq!(out.status.code(), Some(0));
        outputs.push((
            std::fs::read(out_dir.join("results.csv")).unwrap(),
            std::fs::read(out_dir.join("report.txt")).unwrap(),
        ));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "CSV bodies differ");
    assert_eq!(outputs[0].1, outputs[1].1, "reports differ");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn environment_seed_overrides_config() {
    let dir = scratch("seedenv");
    let config = write_config(
        &dir,
        "suite.cfg",
        "experiment.kind = lemma-suite\nsuite.lemma = turan\nsuite.count = 10\nrun.seed = 5\n",
    );
    let base = run_cli(&config, &dir.join("base"));
    assert_eq!(base.status.code(), Some(0));
    let overridden = Command::new(binary())
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.join("env"))
        .env("UNCERTAINTY_LAB_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
    let a = std::fs::read(dir.join("base/results.csv")).unwrap();
    let b = std::fs::read(dir.join("env/results.csv")).unwrap();
    assert_ne!(a, b, "seed override had no effect");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn plot_data_matches_csv_derived_values() {
    let dir = scratch("plot");
    let config = write_config(
        &dir,
        "sweep.cfg",
        "experiment.kind = gamma-sweep\ngeometry.d = 1\ngeometry.L = 4\ngeometry.N = 2048\nset.kind = ball-union\nsweep.a = 3.141592653589793\nsweep.gamma_list = 0.1,0.2,0.4\nband.b = 0.954929658551372\nrun.seed = 3\n",
    );
    let out_dir = dir.join("out");
    let run_out = run_cli(&config, &out_dir);
    assert_eq!(run_out.status.code(), Some(0));

    let plot_out = Command::new(binary())
        .args(["plot-data", "--report"])
        .arg(out_dir.join("report.txt"))
        .arg("--out")
        .arg(dir.join("figs"))
        .output()
        .unwrap();
    assert_eq!(plot_out.status.code(), Some(0));

    // recompute the expected column file from the CSV with the same
    // formatting; the emitted file must match byte for byte
    let csv = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let mut expected = String::new();
    for (i, line) in csv.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let measured: f64 = fields[1].parse().unwrap();
        let lambda: f64 = fields[2].parse().unwrap();
        expected.push_str(&format!("{:?} {:?}\n", (1.0 / measured).ln(), (1.0 / lambda).ln()));
    }
    let emitted = std::fs::read_to_string(dir.join("figs/gamma_fit.dat")).unwrap();
    assert_eq!(emitted, expected);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_fit_matches_hand_run_on_the_csv() {
    let dir = scratch("fitoracle");
    let config = write_config(
        &dir,
        "sweep.cfg",
        "experiment.kind = gamma-sweep\ngeometry.d = 1\ngeometry.L = 4\ngeometry.N = 2048\nset.kind = ball-union\nsweep.a = 3.141592653589793\nsweep.gamma_list = 0.05,0.1,0.2,0.3,0.4,0.5\nband.b = 0.954929658551372\nrun.seed = 11\n",
    );
    let out_dir = dir.join("out");
    assert_eq!(run_cli(&config, &out_dir).status.code(), Some(0));

    // hand-run the fit on the emitted CSV and compare with the report
    let csv = std::fs::read_to_string(out_dir.join("results.csv")).unwrap();
    let points: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    let fit = torus_lab::bounds::polynomial_scaling_fit(&points).unwrap();

    let report = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    let reported = |key: &str| -> f64 {
        report
            .lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap_or_else(|| panic!("report lacks `{key}`"))
            .trim()
            .parse()
            .unwrap()
    };
    assert_eq!(reported("slope "), fit.slope);
    assert_eq!(reported("intercept "), fit.intercept);
    assert_eq!(reported("max_residual "), fit.max_residual);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn plot_data_scale_sweep_rows() {
    let dir = scratch("plotscale");
    let config = write_config(
        &dir,
        "scale.cfg",
        "experiment.kind = scale-sweep\ngeometry.d = 1\ngeometry.N = 1024\nsweep.gamma = 0.25\nsweep.a = 2pi\nsweep.L_list = 1,2,4\nband.b = 3\n",
    );
    let out_dir = dir.join("out");
    assert_eq!(run_cli(&config, &out_dir).status.code(), Some(0));
    let plot_out = Command::new(binary())
        .args(["plot-data", "--report"])
        .arg(out_dir.join("report.txt"))
        .arg("--out")
        .arg(dir.join("figs"))
        .output()
        .unwrap();
    assert_eq!(plot_out.status.code(), Some(0));
    let data = std::fs::read_to_string(dir.join("figs/scale.dat")).unwrap();
    assert_eq!(data.lines().count(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_suite_yields_empty_plot_file() {
    let dir = scratch("plotempty");
    let config = write_config(
        &dir,
        "empty.cfg",
        "experiment.kind = lemma-suite\nsuite.lemma = turan\nsuite.count = 0\n",
    );
    let out_dir = dir.join("out");
    assert_eq!(run_cli(&config, &out_dir).status.code(), Some(0));
    let plot_out = Command::new(binary())
        .args(["plot-data", "--report"])
        .arg(out_dir.join("report.txt"))
        .arg("--out")
        .arg(dir.join("figs"))
        .output()
        .unwrap();
    assert_eq!(plot_out.status.code(), Some(0));
    let data = std::fs::read_to_string(dir.join("figs/lemma_slack_hist.dat")).unwrap();
    assert!(data.is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bound_experiments_report_and_verify() {
    let dir = scratch("bounds");
    // generous default constants certify the computed ratio
    let config = write_config(
        &dir,
        "single.cfg",
        "experiment.kind = bound-single\ngeometry.d = 1\ngeometry.L = 2\ngeometry.N = 1024\nset.kind = ball-union\nset.G = 3.141592653589793\nset.delta = 0.7853981633974483\nband.b = 3\nbound.a = 6.283185307179586\nrun.p = 2\n",
    );
    let out = run_cli(&config, &dir.join("single"));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("single/results.csv")).unwrap();
    assert!(csv.starts_with("theorem,d,p,gamma,a_dot_b,n,log10_K,rho,log_slack,pass\n"));
    assert!(csv.lines().nth(1).unwrap().starts_with("single,1,"));
    assert!(csv.trim_end().ends_with(",1"));

    // a deliberately tiny constant base flips the verdict and the exit code
    let failing = write_config(
        &dir,
        "tiny.cfg",
        "experiment.kind = bound-single\ngeometry.d = 1\ngeometry.L = 2\ngeometry.N = 1024\nset.kind = ball-union\nset.G = 3.141592653589793\nset.delta = 0.07853981633974483\nband.b = 3\nbound.a = 6.283185307179586\nrun.p = 2\nconsts.c = 0.05\n",
    );
    let out = run_cli(&failing, &dir.join("tiny"));
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // union form over two separated boxes
    let union = write_config(
        &dir,
        "union.cfg",
        "experiment.kind = bound-union\ngeometry.d = 1\ngeometry.L = 2\ngeometry.N = 1024\nset.kind = ball-union\nset.G = 3.141592653589793\nset.delta = 0.7853981633974483\nband.b = 2\nband.centers = -10; 10\nbound.a = 6.283185307179586\nrun.p = 2\n",
    );
    let out = run_cli(&union, &dir.join("union"));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("union/results.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("union,1,"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_report_is_an_error() {
    let dir = scratch("noreport");
    let out = Command::new(binary())
        .args(["plot-data", "--report"])
        .arg(dir.join("nope.txt"))
        .arg("--out")
        .arg(dir.join("figs"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_subcommand_is_an_error() {
    let out = Command::new(binary()).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn jobs_flag_must_be_numeric() {
    let dir = scratch("jobs");
    let config = write_config(
        &dir,
        "full.cfg",
        "experiment.kind = concentration\ngeometry.d = 1\ngeometry.L = 1\ngeometry.N = 128\nset.kind = full\nband.b = 4\n",
    );
    let out = Command::new(binary())
        .args(["run", "--config"])
        .arg(&config)
        .args(["--jobs", "many"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn stored_set_files_round_trip_through_run() {
    use torus_lab::{GridSet, TorusGeometry};
    let dir = scratch("setfile");
    let geometry = TorusGeometry::new(1, 1.0, 512).unwrap();
    let set = GridSet::from_predicate(geometry, |x| x[0] < 2.0 || x[0] > 5.0);
    let set_path = dir.join("observed.set");
    std::fs::write(&set_path, set.to_text()).unwrap();
    let config = write_config(
        &dir,
        "file.cfg",
        &format!(
            "experiment.kind = concentration\ngeometry.d = 1\ngeometry.L = 1\ngeometry.N = 512\nset.kind = file\nset.path = {}\nband.b = 4\n",
            set_path.display()
        ),
    );
    let out = run_cli(&config, &dir.join("out"));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("out/results.csv")).unwrap();
    // λ_min of a genuine sub-torus set is strictly inside (0, 1)
    let lambda: f64 = csv.lines().nth(1).unwrap().split(',').nth(5).unwrap().parse().unwrap();
    assert!(lambda > 0.0 && lambda < 1.0);
    std::fs::remove_dir_all(&dir).ok();
}
