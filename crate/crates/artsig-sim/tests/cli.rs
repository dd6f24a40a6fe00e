//! End-to-end tests of the `artsig` binary: exit codes, output files, and
//! the one-line diagnostics contract on failure.

use std::path::Path;
use std::process::{Command, Output};

fn artsig(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artsig"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should spawn")
}

fn write_tiny_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("tiny.toml");
    std::fs::write(
        &path,
        r#"
        n_list = [8]
        phi_grid = [0.3, 0.7]
        snr_grid_db = [0.0, 6.0]
        trials = 4
        "#,
    )
    .unwrap();
    path
}

#[test]
fn sweep_phi_writes_csv_with_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out = artsig(
        &[
            "sweep-phi",
            "--config",
            config.to_str().unwrap(),
            "--trials",
            "3",
            "--seed",
            "5",
            "--out",
            "phi.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), artsig_sim::CSV_HEADER);
    // 4 schemes x 2 receivers x 1 n x 2 phi x 1 noise-free point.
    assert_eq!(lines.count(), 16);
    assert!(
        text.contains(",inf,"),
        "noise-free rows carry an infinite snr column"
    );

    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("wrote 16 rows"), "stdout: {stdout}");
}

#[test]
fn sweep_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let args = [
        "sweep-phi-ber",
        "--snr-db",
        "3",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "9",
    ];
    let run = |out_name: &str| {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out", out_name]);
        let out = artsig(&full, dir.path());
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(dir.path().join(out_name)).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);

    // The fixed SNR flag appears in every data row.
    let text = String::from_utf8(a).unwrap();
    for line in text.lines().skip(1) {
        assert!(line.contains(",3.00000000e0,"), "row {line}");
    }
}

#[test]
fn sweep_snr_respects_phi_and_scheme_subset() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_tiny_config(dir.path());
    let out = artsig(
        &[
            "sweep-snr",
            "--phi",
            "0.7",
            "--config",
            config.to_str().unwrap(),
            "--schemes",
            "conventional,as",
            "--no-eve",
            "--out",
            "snr.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("snr.csv")).unwrap();
    // 2 schemes x 1 receiver x 1 n x 1 phi x 2 snr points.
    assert_eq!(text.lines().count() - 1, 4);
    assert!(!text.contains("pas,"), "scheme subset must be honored");
    assert!(
        !text.contains(",eve,"),
        "--no-eve must drop eavesdropper rows"
    );
    for line in text.lines().skip(1) {
        assert!(
            line.contains(",7.00000000e-1,"),
            "phi column pinned to 0.7: {line}"
        );
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(
            cells[9], "NaN",
            "capacity_eve is NaN without the eavesdropper"
        );
        assert_eq!(cells[10], "NaN", "secrecy is NaN without the eavesdropper");
    }
}

#[test]
fn solve_prints_solution_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("problem.toml");
    std::fs::write(
        &problem,
        r#"
        radius = 2.0
        a = [["1", "0"], ["0", "1"]]
        target = ["3", "4j"]
        "#,
    )
    .unwrap();
    let out = artsig(&["solve", problem.to_str().unwrap()], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("xi[0]"), "stdout: {stdout}");
    assert!(stdout.contains("xi[1]"), "stdout: {stdout}");
    assert!(stdout.contains("lambda"), "stdout: {stdout}");
    assert!(
        stdout.contains("constraint_active = true"),
        "stdout: {stdout}"
    );
    // The optimum clips the target (norm 5) to the radius-2 sphere.
    assert!(stdout.contains("norm = 2.0000000"), "stdout: {stdout}");
    assert!(stdout.contains("residual = 3.0000000"), "stdout: {stdout}");
}

#[test]
fn failures_exit_nonzero_with_one_line_diagnostic() {
    let dir = tempfile::tempdir().unwrap();

    // Missing config file.
    let out = artsig(&["sweep-phi", "--config", "absent.toml"], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "stderr: {stderr}");
    assert!(stderr.starts_with("error:"), "stderr: {stderr}");

    // Invalid combination: trials = 0.
    let out = artsig(&["sweep-phi", "--trials", "0"], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "stderr: {stderr}");

    // Unknown scheme.
    let out = artsig(&["sweep-phi", "--schemes", "zf"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown scheme"));

    // Malformed problem file.
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "radius = -1.0\na = [[\"1\"]]\ntarget = [\"1\"]\n").unwrap();
    let out = artsig(&["solve", bad.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "stderr: {stderr}");

    // No CSV should have been produced by the failing sweeps.
    assert!(!dir.path().join("sweep_phi.csv").exists());
}

#[test]
fn selftest_passes_and_reports_each_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = artsig(&["selftest"], dir.path());
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        stdout.contains("ok   svd-factor-unitarity"),
        "stdout: {stdout}"
    );
    assert!(
        stdout.contains("ok   solver-kkt-on-random-instances"),
        "stdout: {stdout}"
    );
    assert!(stdout.contains("selftest passed"), "stdout: {stdout}");
    assert!(!stdout.contains("FAIL"), "stdout: {stdout}");
}
