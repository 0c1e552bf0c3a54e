//! End-to-end tests of the `exciton` binary: exit codes, CSV schemas,
//! determinism, config handling, and the verify suite's falsifiability.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn exciton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exciton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
}

#[test]
fn table1_preset_emits_six_labeled_rows() {
    let dir = TempDir::new().unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "table1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = read(dir.path(), "table1.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "stage,markov,F_re,F_im,G_re,G_im");
    assert_eq!(lines.len(), 7);
    let labels: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        labels,
        ["M1-Q1", "M1-Q2", "M1-Q3", "M2-Q1", "M2-Q2", "M2-Q3"]
    );
    // Spot-check the final stage against the pinned recursion values.
    let last: Vec<f64> = lines[6]
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(
        (last[0] - 0.913793739243865).abs() < 1e-12,
        "markov {}",
        last[0]
    );
    assert!(
        (last[1] - 0.9136537080950239).abs() < 1e-12,
        "F_re {}",
        last[1]
    );
    assert!(last[2].abs() < 1e-15, "F_im {}", last[2]);
    assert!(last[3].abs() < 1e-15, "G_re {}", last[3]);
    assert!(
        (last[4] - 2.660461055977e-3).abs() < 1e-12,
        "G_im {}",
        last[4]
    );
    assert!(!csv.contains('\r'), "LF-only line endings");
}

#[test]
fn fig_presets_share_the_documented_header_and_honor_the_grid() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    for preset in ["fig4", "fig5", "fig6"] {
        let out = exciton(&[
            "run", "--preset", preset, "--grid", "0:0.3:7", "--out", out_dir,
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{preset} stderr: {}",
            stderr(&out)
        );
        let csv = read(dir.path(), &format!("{preset}.csv"));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "eta,value_a,value_b", "{preset} header");
        assert_eq!(lines.len(), 8, "{preset}: 7 grid points");
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first[0], 0.0, "{preset} grid starts at 0");
        let last_eta: f64 = lines[7].split(',').next().unwrap().parse().unwrap();
        assert!((last_eta - 0.3).abs() < 1e-15, "{preset} grid ends at 0.3");
    }
    // At η = 0 there is no decoherence: F = s = cos⁰ = 1 and G = 0.
    let fig4 = read(dir.path(), "fig4.csv");
    assert!(fig4.lines().nth(1).unwrap().starts_with("0e0,1e0,1e0"));
    let fig5 = read(dir.path(), "fig5.csv");
    assert!(fig5.lines().nth(1).unwrap().starts_with("0e0,1e0,0e0"));
    let fig6 = read(dir.path(), "fig6.csv");
    assert!(fig6.lines().nth(1).unwrap().starts_with("0e0,1e0,1e0"));
}

#[test]
fn figs7_to_9_preset_writes_three_files() {
    let dir = TempDir::new().unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "figs7-9",
        "--grid",
        "0:1.5707963267948966:5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    for name in ["fig7_f.csv", "fig8_g.csv", "fig9_s.csv"] {
        let csv = read(dir.path(), name);
        assert!(csv.starts_with("eta,value_a,value_b\n"), "{name} header");
        assert_eq!(csv.lines().count(), 6, "{name} rows");
    }
    // F and s are real everywhere; G is purely imaginary.
    let f = read(dir.path(), "fig7_f.csv");
    for line in f.lines().skip(1) {
        let im: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(im, 0.0, "F imaginary part");
    }
    let g = read(dir.path(), "fig8_g.csv");
    for line in g.lines().skip(1) {
        let re: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(re, 0.0, "G real part");
    }
}

#[test]
fn trace_preset_reports_the_protocol_long_format() {
    let dir = TempDir::new().unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "trace",
        "--env",
        "nonmarkov",
        "--engine",
        "exact",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = read(dir.path(), "trace.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "iteration,phase,record,index,value");
    // Default N = M = 3: per iteration 3 monomer_z + 3 reservoir_z +
    // 1 conservation row, 3 iterations, plus 4 photon_p rows.
    assert_eq!(lines.len(), 1 + 3 * 7 + 4);
    assert!(lines[1].starts_with("1,decoherence+transfer,monomer_z,1,"));
    assert!(csv.contains("recombination"));
    let photon_total: f64 = lines
        .iter()
        .filter(|l| l.contains("photon_p"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!(
        (photon_total - 1.0).abs() < 1e-9,
        "photon sums to 1, got {photon_total}"
    );
    // Conservation account stays at its initial value (ΣZ = 1 for one
    // excitation on three monomers) throughout.
    for line in lines.iter().filter(|l| l.contains("conservation_total")) {
        let v: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-9, "conservation drifted: {line}");
    }
}

#[test]
fn witness_preset_separates_weak_from_full_swap() {
    let dir = TempDir::new().unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "witness",
        "--grid",
        "0:1.5707963267948966:3",
        "--env",
        "nonmarkov",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = read(dir.path(), "witness.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "eta,coherence,residual,verdict");
    assert_eq!(lines.len(), 4);
    assert!(
        lines[1].ends_with("TaskAchieved"),
        "η = 0 achieves the task: {}",
        lines[1]
    );
    assert!(
        lines[3].ends_with("TaskNotAchieved"),
        "full swap destroys coherence: {}",
        lines[3]
    );
    for line in &lines[1..] {
        let residual: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!(residual < 1e-9, "conservation holds per row: {line}");
    }
}

#[test]
fn sweep_tracks_the_closed_form_reference() {
    let dir = TempDir::new().unwrap();
    for env in ["markov", "nonmarkov"] {
        let out = exciton(&[
            "sweep",
            "--grid",
            "0:0.3:5",
            "--env",
            env,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{env} stderr: {}", stderr(&out));
        let csv = read(dir.path(), "sweep.csv");
        assert!(csv.starts_with("eta,value_a,value_b\n"));
        for line in csv.lines().skip(1) {
            let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert!(
                (cols[1] - cols[2]).abs() < 1e-9,
                "{env}: engine {} vs closed form {} at η = {}",
                cols[1],
                cols[2],
                cols[0]
            );
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir1 = TempDir::new().unwrap();
    let dir2 = TempDir::new().unwrap();
    let args = |d: &TempDir| {
        vec![
            "run".to_string(),
            "--preset".to_string(),
            "witness".to_string(),
            "--grid".to_string(),
            "0:1.5:6".to_string(),
            "--env".to_string(),
            "nonmarkov".to_string(),
            "--out".to_string(),
            d.path().to_str().unwrap().to_string(),
        ]
    };
    let run = |d: &TempDir| {
        let out = Command::new(env!("CARGO_BIN_EXE_exciton"))
            .args(args(d))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    };
    run(&dir1);
    run(&dir2);
    assert_eq!(
        read(dir1.path(), "witness.csv"),
        read(dir2.path(), "witness.csv"),
        "parallel sweep output is byte-identical"
    );
}

#[test]
fn config_file_fields_and_flag_overrides_compose() {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("config.json");
    std::fs::write(
        &config_path,
        r#"{"n_monomers": 2, "n_reservoir": 1, "eta": 0.2, "t": 0.001, "environment": "markov"}"#,
    )
    .unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "trace",
        "--config",
        config_path.to_str().unwrap(),
        "--env",
        "nonmarkov",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = read(dir.path(), "trace.csv");
    // N = 2, M = 1: per iteration 2 monomer_z + 1 reservoir_z +
    // 1 conservation row, 2 iterations, plus 3 photon_p rows.
    assert_eq!(csv.lines().count(), 1 + 2 * 4 + 3);
}

#[test]
fn missing_config_file_names_the_file_with_exit_1() {
    let out = exciton(&["run", "--config", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("missing.json"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn invalid_config_values_name_the_offending_field() {
    let dir = TempDir::new().unwrap();
    let bad_field = dir.path().join("bad_field.json");
    std::fs::write(&bad_field, r#"{"n_monomers": 1}"#).unwrap();
    let out = exciton(&["run", "--config", bad_field.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("n_monomers"),
        "stderr: {}",
        stderr(&out)
    );

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"pickles": 3}"#).unwrap();
    let out = exciton(&["run", "--config", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("pickles"), "stderr: {}", stderr(&out));

    let bad_len = dir.path().join("bad_len.json");
    std::fs::write(&bad_len, r#"{"couplings": [1.0, 2.0, 3.0]}"#).unwrap();
    let out = exciton(&["run", "--config", bad_len.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("couplings"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn resource_cap_uses_the_distinct_exit_code() {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("huge.json");
    std::fs::write(&config_path, r#"{"n_monomers": 10}"#).unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "trace",
        "--config",
        config_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("resource cap"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn grid_validation_rejects_bad_bounds_and_counts() {
    let out = exciton(&["run", "--preset", "fig4", "--grid", "0:2.0:5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("grid bounds"));

    let out = exciton(&["run", "--preset", "fig4", "--grid", "0:1:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("count"));

    let out = exciton(&["run", "--preset", "fig4", "--grid", "0:1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("start:stop:count"));

    // A decimal approximation of π/2 is accepted; the evaluated point is
    // clamped to π/2 exactly.
    let dir = TempDir::new().unwrap();
    let out = exciton(&[
        "run",
        "--preset",
        "fig4",
        "--grid",
        "0:1.5708:3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = read(dir.path(), "fig4.csv");
    let last_eta: f64 = csv
        .lines()
        .last()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(last_eta <= std::f64::consts::FRAC_PI_2);
}

#[test]
fn unknown_preset_is_a_validation_error() {
    let out = exciton(&["run", "--preset", "fig99"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("fig99"));
}

#[test]
fn verify_passes_on_a_healthy_build_with_at_least_12_checks() {
    let out = exciton(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let ok_lines = text
        .lines()
        .filter(|l| l.starts_with("check ") && l.contains(": ok"))
        .count();
    assert!(ok_lines >= 12, "want ≥ 12 checks, saw {ok_lines}");
    assert!(!text.contains("FAILED"));
}

#[test]
fn verify_only_filter_runs_a_subset() {
    let out = exciton(&["verify", "--only", "conservation"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for line in text.lines().filter(|l| l.starts_with("check ")) {
        assert!(line.contains("conservation"), "filter leaked: {line}");
    }
    assert!(text.lines().any(|l| l.starts_with("check ")));

    let out = exciton(&["verify", "--only", "zzz-no-such-check"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_inject_fault_fails_naming_the_check() {
    let out = exciton(&["verify", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("check markov-engine-damping: FAILED"),
        "stdout: {}",
        stdout(&out)
    );
    assert!(
        stderr(&out).contains("markov-engine-damping"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    let out = exciton(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(1));

    let out = exciton(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exciton"));
}
