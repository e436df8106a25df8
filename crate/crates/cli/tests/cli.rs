use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subzurek"))
        .args(args)
        .output()
        .unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subzurek"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn coeffs_plane_wave() {
    let text = stdout(&run(&["coeffs", "--n", "4", "--alpha", "1"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0], "j,C_j,D_j,K_j");
    let c: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(c, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    assert!(text.contains("# checksum = sha256:"));
}

#[test]
fn coeffs_hand_expansion_and_footer() {
    let text = stdout(&run(&["coeffs", "--n", "2", "--alpha", "3"]));
    let c: Vec<f64> = data_rows(&text)[1..]
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(c, vec![4.0, -4.0, 1.0]);
    let text = stdout(&run(&["coeffs", "--n", "8", "--alpha", "10"]));
    let footer = text.lines().find(|l| l.starts_with("# sum_C = ")).unwrap();
    let sum: f64 = footer.trim_start_matches("# sum_C = ").parse().unwrap();
    assert!((sum - 1.0).abs() <= 1e-12);
}

#[test]
fn invalid_parameters_exit_2_with_one_line() {
    for args in [
        &["coeffs", "--n", "3", "--alpha", "2"][..],
        &["coeffs", "--n", "4", "--alpha", "0.5"][..],
        &["wigner", "--preset", "fig9"][..],
        &["wigner", "--n", "4", "--alpha", "2"][..],
        &["wigner", "--preset", "fig1", "--map", "rainbow"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(String::from_utf8_lossy(&o.stderr).trim().lines().count(), 1, "{args:?}");
    }
}

#[test]
fn coarse_grid_exits_3_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["wigner", "--preset", "fig1", "--grid", "-1:1:21,-1:1:21", "--out", "w"],
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "no partial output");
    let o = run_in(
        dir.path(),
        &[
            "wigner",
            "--preset",
            "fig1",
            "--grid",
            "-1:1:21,-1:1:21",
            "--out",
            "w",
            "--allow-undersampled",
        ],
    );
    assert!(o.status.success());
    assert!(dir.path().join("w.csv").exists());
}

#[test]
fn cat_at_origin_matches_closed_form() {
    let grid = "-0.1:0.1:3,-0.1:0.1:3";
    let text = stdout(&run(&[
        "wigner",
        "--preset",
        "cat",
        "--delta-x",
        "3",
        "--grid",
        grid,
        "--allow-undersampled",
    ]));
    let rows = data_rows(&text);
    let v: f64 = rows[3].split(',').nth(1).unwrap().parse().unwrap();
    // the two e^{−9} tails cancel against the norm 1 + e^{−9}, leaving G(0,0)
    assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-15, "{v}");
}

#[test]
fn pgm_heatmap_of_cross_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["wigner", "--preset", "fig2a", "--format", "pgm", "--map", "signed"],
    );
    stdout(&o);
    let pgm = std::fs::read(dir.path().join("fig2a.pgm")).unwrap();
    let text = String::from_utf8_lossy(&pgm);
    assert!(text.starts_with("P5\n# map=signed min="));
    assert!(text.contains("# cross = true"));
}

#[test]
fn log_cut_spans_central_panel() {
    let text = stdout(&run(&["wigner", "--preset", "fig1", "--cut", "p", "--map", "logabs"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0], "p,w,logabs");
    let p: Vec<f64> = rows[1..]
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    let width = p.last().unwrap() - p[0];
    assert!((width - 2.0 * std::f64::consts::PI / 24.0).abs() < 1e-12);
}

#[test]
fn analyze_reports_and_skips_overspill_for_cat() {
    let text = stdout(&run(&["analyze", "--preset", "fig2b"]));
    let alpha: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("alpha_est = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((alpha - 10.0).abs() < 1.5, "{alpha}");
    let o = run(&["analyze", "--preset", "cat"]);
    let text = stdout(&o);
    assert!(String::from_utf8_lossy(&o.stderr).contains("overspill check skipped"));
    assert!(text.contains("overspill_satisfied = skipped"));
}

#[test]
fn validate_passes_for_cat() {
    let text = stdout(&run(&["validate", "--preset", "cat", "--points", "5"]));
    assert!(text.contains("marginal,"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "preset = fig1\nalpha = 6\nn = 4\n").unwrap();
    let conf = conf.to_str().unwrap();
    let text = stdout(&run(&["coeffs", "--config", conf, "--n", "2"]));
    assert!(text.contains("# n = 2"));
    assert!(text.contains("# alpha = 6"));
    assert!(text.contains("# preset = fig1"));
    assert_eq!(data_rows(&text).len(), 4);
}

#[test]
fn outputs_echo_resolved_config() {
    let text = stdout(&run(&["wigner", "--preset", "fig2c", "--xi", "0.3", "--cut", "p"]));
    for line in [
        "# command = wigner",
        "# preset = fig2c",
        "# xi = 0.3",
        "# alpha = 16",
        "# cross = true",
    ] {
        assert!(text.contains(line), "{line}");
    }
}
