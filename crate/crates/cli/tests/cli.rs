use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sohrlab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sohrlab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("SOHRLAB_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&sohrlab(&["--help"], dir.path())), 0);
    assert_eq!(code(&sohrlab(&["bogus"], dir.path())), 1);
    assert_eq!(code(&sohrlab(&["sohr", "--mode", "lbm"], dir.path())), 1);
    assert_eq!(code(&sohrlab(&["sohr", "--dt", "-1"], dir.path())), 1);
    assert_eq!(code(&sohrlab(&["coefficients"], dir.path())), 1);
}

#[test]
fn coefficients_row_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = sohrlab(&["coefficients", "--d", "0.1", "--n", "2"], dir.path());
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "c1,c2,k0,phi0,beta1,beta2,beta3,beta4,beta5,beta6");
    let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row.len(), 10);
    assert!((row[0] - 0.9486).abs() < 5e-4);
    assert!((row[1] - 0.8486).abs() < 5e-4);

    let cache = dir.path().join("coef.csv");
    let cached = sohrlab(
        &["coefficients", "--d", "0.1", "--cache", cache.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&cached), 0);
    assert_eq!(String::from_utf8(cached.stdout).unwrap(), out);
    let text = fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("d,n,grid_size,c1,c2,beta1"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn empty_config_lists_required_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.cfg");
    fs::write(&cfg, "").unwrap();
    let o = sohrlab(&["sohr", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("required keys") && err.contains("experiment.preset"), "{err}");
}

#[test]
fn preset_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("conv.cfg");
    fs::write(&cfg, "[experiment]\npreset = convergence\n").unwrap();
    let o = sohrlab(&["riemann", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 1);
}

#[test]
fn oversized_step_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = sohrlab(
        &["sohr", "--preset", "vortex", "--dt", "0.5", "--T", "5", "--out", "x"],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8(o.stderr).unwrap().contains("positivity"));
}

#[test]
fn manifest_reproduces_snapshots_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let o = sohrlab(
        &[
            "sohr", "--preset", "riemann", "--nx", "16", "--ny", "8", "--T", "0.05", "--snapshots",
            "0.02,0.05", "--out", "first",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = dir.path().join("first");
    let mut names: Vec<String> = fs::read_dir(&first)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["field_t0000.0200.csv", "field_t0000.0500.csv", "manifest.txt"]);
    let snap = fs::read_to_string(first.join("field_t0000.0500.csv")).unwrap();
    assert_eq!(snap.lines().next(), Some("x,y,rho,omega_x,omega_y"));
    assert_eq!(snap.lines().count(), 1 + 16 * 8);

    let manifest = first.join("manifest.txt");
    let o = sohrlab(
        &["sohr", "--config", manifest.to_str().unwrap(), "--out", "second"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for name in &names[..2] {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(dir.path().join("second").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn output_root_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sohrlab"))
        .args(["riemann", "--nx", "8", "--ny", "4", "--T", "0.02", "--out", "run"])
        .current_dir(dir.path())
        .env("SOHRLAB_OUT", dir.path().join("root"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("root/run/manifest.txt").exists());
    assert!(dir.path().join("root/run/field_t0000.0200.csv").exists());
}

#[test]
fn particle_ensemble_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let o = sohrlab(
        &[
            "ibm", "--preset", "riemann", "--N", "400", "--epsilon", "0.5", "--T", "0.05",
            "--realizations", "2", "--out", "ibm",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let snap = fs::read_to_string(dir.path().join("ibm/ibm_eps0.5_t0000.0500.csv")).unwrap();
    let g = (40, 4);
    assert_eq!(snap.lines().count(), 1 + g.0 * g.1);
    let dx = 0.25;
    let mass: f64 = snap
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap() * dx * dx)
        .sum();
    assert!((mass - 0.1).abs() < 1e-12, "{mass}");
    let manifest = fs::read_to_string(dir.path().join("ibm/manifest.txt")).unwrap();
    assert!(manifest.contains("seeds = 1, 2"));
}

#[test]
fn convergence_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = sohrlab(
        &[
            "convergence", "--nx", "8", "--levels", "3", "--dt", "0.01", "--T", "0.05", "--out", "conv",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("conv/error_report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "level,dx,err_rho,err_cos,order_rho,order_cos");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",,"));
}
