//! End-to-end tests of the binary: flag handling, file outputs, exit codes,
//! and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pacs-wigner")
}

static DIR_SEQ: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let seq = DIR_SEQ.fetch_add(1, Ordering::SeqCst);
    let dir = std::env::temp_dir().join(format!(
        "pacs-wigner-cli-{}-{}-{}",
        std::process::id(),
        seq,
        tag
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("reading {}: {}", name, e))
}

/// Minimal field extraction for the hand-written JSON records.
fn json_f64(text: &str, key: &str) -> f64 {
    let tag = format!("\"{}\":", key);
    let start = text
        .find(&tag)
        .unwrap_or_else(|| panic!("key {} in {}", key, text))
        + tag.len();
    let rest = &text[start..];
    let end = rest.find([',', '}', '\n']).unwrap_or(rest.len());
    rest[..end]
        .parse()
        .unwrap_or_else(|e| panic!("parsing {}: {}", &rest[..end], e))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn wigner_field_has_negative_dip_and_is_deterministic() {
    let dir = scratch_dir("wigner");
    let args = [
        "wigner",
        "--alpha",
        "0.5",
        "--m",
        "1",
        "--n",
        "1",
        "--gamma-t",
        "0.1",
        "--grid",
        "-4,4,-4,4,81,81",
        "--out",
        "a.csv",
    ];
    assert_ok(&run_in(&dir, &args));
    let mut again = args;
    again[args.len() - 1] = "b.csv";
    assert_ok(&run_in(&dir, &again));
    let a = read(&dir, "a.csv");
    assert_eq!(
        a,
        read(&dir, "b.csv"),
        "repeated runs must be byte-identical"
    );

    assert_eq!(a.lines().next().unwrap(), "q,p,w");
    let min = csv_rows(&a)
        .iter()
        .map(|r| r[2])
        .fold(f64::INFINITY, f64::min);
    assert!(
        min < 0.0,
        "evolved field should still dip negative, min = {}",
        min
    );
}

#[test]
fn wigner_two_photon_ring_belt() {
    let dir = scratch_dir("ring");
    assert_ok(&run_in(
        &dir,
        &[
            "wigner",
            "--alpha",
            "0.5",
            "--m",
            "2",
            "--n",
            "1",
            "--gamma-t",
            "0.0",
            "--grid",
            "-3,3,-3,3,121,121",
            "--out",
            "ring.csv",
        ],
    ));
    let rows = csv_rows(&read(&dir, "ring.csv"));
    // center of the ring (near alpha) is positive, the belt around it negative
    let near = |a: f64, b: f64| (a - b).abs() < 1e-9;
    let at = |q: f64, p: f64| {
        rows.iter()
            .find(|r| near(r[0], q) && near(r[1], p))
            .unwrap()[2]
    };
    assert!(at(0.5, 0.0) > 0.0);
    assert!(at(0.95, 0.0) < 0.0, "belt point should be negative");
    assert!(at(3.0, 0.0).abs() < 1e-3);
}

#[test]
fn wigner_fock_one_origin_value() {
    let dir = scratch_dir("fock");
    assert_ok(&run_in(
        &dir,
        &[
            "wigner",
            "--alpha",
            "0",
            "--m",
            "1",
            "--n",
            "0",
            "--gamma-t",
            "0",
            "--grid",
            "-2,2,-2,2,41,41",
            "--out",
            "fock.csv",
        ],
    ));
    let rows = csv_rows(&read(&dir, "fock.csv"));
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!((origin[2] + 2.0 / std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn pnw_single_point_anchor() {
    let dir = scratch_dir("pnw");
    assert_ok(&run_in(
        &dir,
        &[
            "pnw",
            "--alpha",
            "0",
            "--m",
            "1",
            "--n",
            "0",
            "--t",
            "0",
            "--out",
            "anchor.csv",
        ],
    ));
    let rows = csv_rows(&read(&dir, "anchor.csv"));
    assert_eq!(rows.len(), 1);
    let expected = 2.0 * (-0.5f64).exp() - 1.0;
    assert!(
        (rows[0][1] - expected).abs() < 1e-4,
        "p_nw = {}",
        rows[0][1]
    );
    let sidecar = read(&dir, "anchor.meta.json");
    assert!((json_f64(&sidecar, "threshold_analytic") - 2.0f64.ln()).abs() < 1e-12);
}

#[test]
fn pnw_range_emits_one_ordered_file_per_n() {
    let dir = scratch_dir("pnw-multi");
    assert_ok(&run_in(
        &dir,
        &[
            "pnw",
            "--alpha",
            "1.5",
            "--m",
            "1",
            "--n",
            "0.1..0.3x3",
            "--t",
            "0..0.2x5",
            "--out",
            "curve.csv",
        ],
    ));
    let mut finals = Vec::new();
    for n in ["0.1000", "0.2000", "0.3000"] {
        let text = read(&dir, &format!("curve_n{}.csv", n));
        let rows = csv_rows(&text);
        assert_eq!(rows.len(), 5);
        // monotone in decay time
        for w in rows.windows(2) {
            assert!(w[1][1] <= w[0][1] + 1e-6);
        }
        finals.push(rows[4][1]);
    }
    // hotter channel decays faster at the common final time
    assert!(
        finals[0] > finals[1] && finals[1] > finals[2],
        "{:?}",
        finals
    );
}

#[test]
fn threshold_matches_closed_form() {
    let dir = scratch_dir("threshold");
    assert_ok(&run_in(
        &dir,
        &[
            "threshold",
            "--alpha",
            "0.5",
            "--m",
            "1",
            "--n",
            "1",
            "--out",
            "th.json",
        ],
    ));
    let text = read(&dir, "th.json");
    assert!(text.contains("\"method\":\"bisection_numeric\""));
    assert!(text.contains("\"method\":\"analytic_thermal\""));
    assert!(json_f64(&text, "abs_diff") < 1e-3);
    let analytic = (4.0f64 / 3.0).ln();
    assert!((json_f64(&text, "gamma_t_c") - analytic).abs() < 1e-3);
}

#[test]
fn threshold_rejects_coherent_state() {
    let dir = scratch_dir("threshold-m0");
    let out = run_in(
        &dir,
        &["threshold", "--alpha", "0.5", "--m", "0", "--n", "1"],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("state not nonclassical"));
}

#[test]
fn threshold_sweep_tracks_formula() {
    let dir = scratch_dir("sweep");
    assert_ok(&run_in(
        &dir,
        &[
            "threshold",
            "--alpha",
            "0.5",
            "--m",
            "1",
            "--sweep-n",
            "0:2:5",
            "--out",
            "sweep.csv",
        ],
    ));
    let rows = csv_rows(&read(&dir, "sweep.csv"));
    assert_eq!(rows.len(), 5);
    for row in rows {
        let expected = ((2.0 + 2.0 * row[0]) / (1.0 + 2.0 * row[0])).ln();
        assert!(
            (row[1] - expected).abs() < 1e-3,
            "numeric off at n = {}",
            row[0]
        );
        assert!(
            (row[2] - expected).abs() < 1e-12,
            "analytic off at n = {}",
            row[0]
        );
    }
}

#[test]
fn gate_zero_alpha_reduces_to_single_photon_rotation() {
    let dir = scratch_dir("gate0");
    assert_ok(&run_in(
        &dir,
        &["gate", "--alpha", "0", "--phi", "0.3", "--out", "g.json"],
    ));
    let text = read(&dir, "g.json");
    let pair10 = text
        .lines()
        .find(|l| l.contains("\"pair\":\"10\""))
        .unwrap();
    assert!((json_f64(pair10, "numeric_re") - 0.3f64.cos()).abs() < 1e-10);
    assert!(json_f64(pair10, "numeric_im").abs() < 1e-12);
}

#[test]
fn gate_controlled_phase_point() {
    let dir = scratch_dir("gate-cz");
    // 2 phi |alpha|^2 ~ pi
    assert_ok(&run_in(
        &dir,
        &[
            "gate",
            "--alpha",
            "7.0711",
            "--phi",
            "0.0314159",
            "--out",
            "cz.json",
        ],
    ));
    let text = read(&dir, "cz.json");
    let pair11 = text
        .lines()
        .find(|l| l.contains("\"pair\":\"11\""))
        .unwrap();
    let re = json_f64(pair11, "analytic_re");
    let im = json_f64(pair11, "analytic_im");
    let dist = ((re + 1.0).powi(2) + im * im).sqrt();
    assert!(dist < 0.2, "overlap ({}, {}) should sit near -1", re, im);
    assert!(pair11.contains("\"regime_ok\":true"));
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let dir = scratch_dir("config");
    std::fs::write(
        dir.join("run.conf"),
        "alpha = 0.5\nm = 1\nn = 1 # thermal\ngamma_t = 0.1\ngrid = -2,2,-2,2,21,21\n",
    )
    .unwrap();
    assert_ok(&run_in(
        &dir,
        &["wigner", "--config", "run.conf", "--out", "w.csv"],
    ));
    assert_eq!(csv_rows(&read(&dir, "w.csv")).len(), 21 * 21);

    std::fs::write(dir.join("bad.conf"), "bogus = 1\n").unwrap();
    let out = run_in(
        &dir,
        &["wigner", "--config", "bad.conf", "--alpha", "1", "--m", "0"],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}

#[test]
fn missing_required_flag_is_reported() {
    let dir = scratch_dir("missing");
    let out = run_in(&dir, &["wigner", "--m", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--alpha"));
}
