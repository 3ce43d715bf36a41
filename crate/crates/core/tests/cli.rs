use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gatetherm(args: &[&str], dir: &Path, workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gatetherm"));
    cmd.args(args).arg("--out").arg(dir);
    match workers {
        Some(w) => cmd.env("GATETHERM_WORKERS", w),
        None => cmd.env_remove("GATETHERM_WORKERS"),
    };
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str], dir: &Path, workers: Option<&str>) {
    let out = gatetherm(args, dir, workers);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_outputs_and_summary() {
    let dir = TempDir::new().unwrap();
    ok(&["sweep"], dir.path(), None);
    let sweep = read(dir.path(), "sweep.csv");
    assert_eq!(sweep.lines().count(), 201);
    let header = sweep.lines().next().unwrap();
    assert!(header.starts_with("omega_L_t,j_00_00,"));
    for name in ["dE_m5", "ds_m5", "coherence_l1", "ift", "landauer_lhs", "ds_mean", "ratio"] {
        assert!(header.split(',').any(|h| h == name), "{name}");
    }
    for x in column(&sweep, "ift") {
        assert!((x.parse::<f64>().unwrap() - 1.0).abs() <= 1e-10);
    }
    for k in 0..16 {
        let name = format!("j_{:02b}_{:02b}", k / 4, k % 4);
        for x in column(&sweep, &name) {
            let v: f64 = x.parse().unwrap();
            assert!((0.0..=1.0).contains(&v), "{name} = {v}");
        }
    }

    let summary: serde_json::Value = serde_json::from_str(&read(dir.path(), "summary.json")).unwrap();
    let step = summary["grid_step"].as_f64().unwrap();
    let peak = summary["de_moments"][0]["omega_l_t"].as_f64().unwrap();
    assert!((peak - PI / 26f64.sqrt()).abs() <= step, "{peak}");
    assert!(summary["min_landauer_slack"].as_f64().unwrap() >= -1e-12);

    let real = read(dir.path(), "realizations.csv");
    assert_eq!(real.lines().count(), 201);
    assert!(column(&real, "ds_00_00").iter().all(|x| x.parse::<f64>().unwrap().abs() <= 1e-15));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_workers() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    ok(&["sweep"], a.path(), Some("1"));
    ok(&["sweep"], b.path(), Some("4"));
    for name in ["sweep.csv", "realizations.csv", "summary.json"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
}

#[test]
fn hist_writes_both_distributions() {
    let dir = TempDir::new().unwrap();
    ok(&["hist"], dir.path(), None);
    let de = read(dir.path(), "hist_dE.csv");
    assert_eq!(de.lines().next().unwrap(), "omega_L_t,value,probability");
    // three energy atoms at each of the two default times
    assert_eq!(de.lines().count(), 7);
    for t in ["3.10000000000e-1", "6.20000000000e-1"] {
        let total: f64 = de
            .lines()
            .skip(1)
            .filter(|l| l.starts_with(t))
            .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() <= 1e-12, "{t}: {total}");
    }
    assert!(read(dir.path(), "hist_ds.csv").lines().count() > 2);
}

#[test]
fn compare_is_seeded_and_writes_photonic_errors() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let cfg = write_config(a.path(), "n_points = 5\nphotonic.T_H = 0.985\n");
    let args = ["compare", "--config", &cfg, "--samples", "20000", "--photonic"];
    ok(&args, a.path(), Some("1"));
    ok(&args, b.path(), Some("3"));
    assert_eq!(read(a.path(), "mc_error.csv"), read(b.path(), "mc_error.csv"));
    let mc = read(a.path(), "mc_error.csv");
    assert_eq!(mc.lines().count(), 6);
    assert!(mc.lines().next().unwrap().ends_with(",tv,max_cell"));
    let ph = read(a.path(), "photonic_error.csv");
    assert!(ph.lines().next().unwrap().starts_with("omega_L_t,dc_00_00"));

    let c = TempDir::new().unwrap();
    ok(&["compare", "--config", &cfg, "--samples", "20000", "--seed", "7"], c.path(), None);
    assert_ne!(read(c.path(), "mc_error.csv"), mc);
    assert!(!c.path().join("photonic_error.csv").exists());
}

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    for body in ["bogus = 1\n", "alpha = 2\n", "n_points = 1\n", "photonic.eps = 1\n"] {
        let cfg = write_config(dir.path(), body);
        let out = gatetherm(&["sweep", "--config", &cfg], dir.path(), None);
        assert_eq!(out.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    }
    let out = gatetherm(&["sweep", "--config", "/nonexistent/run.cfg"], dir.path(), None);
    assert_eq!(out.status.code(), Some(2));
}
