use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use critrefl_core::modes::det_orders;
use critrefl_core::setup::critical_wavenumber;
use critrefl_core::{Complex64, RegimeCase, RegimeParams};

const BIN: &str = env!("CARGO_BIN_EXE_critrefl");

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(BIN).arg("--config").arg(&cfg).arg("--out").arg(dir.join("out")).args(args).output().unwrap()
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn roots_three_decaying_per_eps_and_vieta() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "case = C1\nbeta = 3\n", &["roots"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(&dir.path().join("out/roots.csv"));
    let eps: Vec<String> =
        rows.iter().map(|r| r[0].clone()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    assert_eq!(eps.len(), 8);
    for e in &eps {
        let block: Vec<_> = rows.iter().filter(|r| &r[0] == e).collect();
        assert_eq!(block.len(), 6);
        assert_eq!(block.iter().filter(|r| r[10] == "true").count(), 3);
        // no λ⁵ term: the six roots sum to zero
        let sum: Complex64 = block.iter().map(|r| Complex64::new(f(&r[6]), f(&r[7]))).sum();
        let scale = block.iter().map(|r| Complex64::new(f(&r[6]), f(&r[7])).norm()).fold(0.0, f64::max);
        assert!(sum.norm() <= 1e-10 * scale, "ε={e}: |Σλ| = {:e}", sum.norm());
    }
}

#[test]
fn roots_over_k_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "case = C4\nbeta = 9\nk_nodes = 5\neps = 0.01, 0.005\n", &["roots"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&dir.path().join("out/roots.csv"));
    assert_eq!(rows.len(), 2 * 5 * 6);
    let ks: std::collections::BTreeSet<(String, String)> = rows.iter().map(|r| (r[0].clone(), r[2].clone())).collect();
    assert_eq!(ks.len(), 10);
    // the odd rule puts its middle node on k₀
    assert!(rows.iter().any(|r| f(&r[2]) == 1.0));
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = "case = C5\nbeta = 9\nk_nodes = 3\n";
    assert_eq!(run(a.path(), cfg, &["roots"]).status.code(), Some(0));
    assert_eq!(run(b.path(), cfg, &["roots", "--threads", "1"]).status.code(), Some(0));
    let read = |d: &Path| fs::read(d.join("out/roots.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

fn fitted(dir: &Path, quantity: &str) -> f64 {
    let rows = csv(&dir.join("out/solve_fit.csv"));
    f(&rows.iter().find(|r| r[0] == quantity).unwrap()[2])
}

#[test]
fn solve_fits_amplitude_exponents() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), "case = C2\nbeta = 8\n", &["solve"]).status.code(), Some(0));
    assert!((fitted(dir.path(), "a5") - 2.0).abs() < 0.15);

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), "case = C1\nbeta = 3\n", &["solve"]).status.code(), Some(0));
    for a in ["a2", "a3", "a5"] {
        assert!((fitted(dir.path(), a) + 1.0).abs() < 0.15, "{a}");
    }
}

#[test]
fn solve_det_column_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let eps = [0.01, 0.005, 0.002, 0.001];
    let o = run(dir.path(), "case = C3\nbeta = 5\n", &["solve", "--eps", "0.01,0.005,0.002,0.001"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&dir.path().join("out/solve.csv"));
    let params = RegimeParams::standard(RegimeCase::Case3, 5.0).unwrap();
    let (dets, fit) = det_orders(&params, &eps).unwrap();
    for (row, (_, d)) in rows.iter().zip(&dets) {
        assert_eq!(f(&row[3]), d.norm());
    }
    assert_eq!(fitted(dir.path(), "det M"), fit.slope);
}

#[test]
fn solve_without_a_decade_skips_fits() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "case = C1\nbeta = 3\neps = 0.01, 0.008\n", &["solve"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!dir.path().join("out/solve_fit.csv").exists());
    assert!(String::from_utf8_lossy(&o.stdout).contains("no exponent fits"));
}

const SMALL_FIELD: &str = "case = C1\nbeta = 3\nnodes = 8\nnx = 9\nny = 16\n";

#[test]
fn field_boundary_row_is_lifted() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), SMALL_FIELD, &["field", "--eps", "0.02", "--real-part"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("out");
    let row0 = |name: &str| -> Vec<Vec<f64>> {
        csv(&out.join(name)).into_iter().filter(|r| f(&r[3]) == 0.0).map(|r| r.iter().map(|s| f(s)).collect()).collect()
    };
    let inc = row0("field_00_incident.csv");
    let app = row0("field_00_app.csv");
    assert_eq!(inc.len(), 9);
    for c in [4, 5] {
        let scale = inc.iter().map(|r| r[c].abs()).fold(0.0, f64::max);
        let res = app.iter().map(|r| r[c].abs()).fold(0.0, f64::max);
        assert!(res <= 1e-8 * scale, "column {c}: {res:e} vs {scale:e}");
    }
}

#[test]
fn field_layer_profile_decays_at_the_root_rate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "case = C1\nbeta = 3\nnodes = 1\nnx = 3\nny = 40\n";
    assert_eq!(run(dir.path(), cfg, &["field", "--eps", "0.02"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), cfg, &["roots", "--eps", "0.02"]).status.code(), Some(0));
    let out = dir.path().join("out");
    let rate = f(&csv(&out.join("roots.csv")).iter().find(|r| r[5] == "bl5").unwrap()[6]);
    // x = 0 column of the single-mode layer: |u| = C e^{−Re λ₅ y}
    let prof: Vec<(f64, f64)> = csv(&out.join("field_00_bl5.csv"))
        .iter()
        .filter(|r| f(&r[2]) == 0.0 && f(&r[3]) > 0.0 && f(&r[3]) < 5.0 / rate)
        .map(|r| (f(&r[3]), Complex64::new(f(&r[4]), f(&r[5])).norm().ln()))
        .collect();
    assert!(prof.len() >= 5);
    let n = prof.len() as f64;
    let (mx, my) = (prof.iter().map(|p| p.0).sum::<f64>() / n, prof.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = prof.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / prof.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((-slope / rate - 1.0).abs() < 1e-6, "fitted e-folding rate {} vs Re λ₅ {rate}", -slope);
}

#[test]
fn field_time_shift_is_a_phase_for_one_mode() {
    let cfg0 = "case = C1\nbeta = 3\nnodes = 1\nnx = 5\nny = 4\nt = 0\n";
    let cfg1 = "case = C1\nbeta = 3\nnodes = 1\nnx = 5\nny = 4\nt = 0.7\n";
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(a.path(), cfg0, &["field", "--eps", "0.05"]).status.code(), Some(0));
    assert_eq!(run(b.path(), cfg1, &["field", "--eps", "0.05"]).status.code(), Some(0));
    let params = RegimeParams::standard(RegimeCase::Case1, 3.0).unwrap();
    let omega = critical_wavenumber(&params, 0.05).unwrap().omega;
    let phase = Complex64::new(0.0, -omega * 0.7).exp();
    let ra = csv(&a.path().join("out/field_00_incident.csv"));
    let rb = csv(&b.path().join("out/field_00_incident.csv"));
    assert_eq!(ra.len(), rb.len());
    for (x, y) in ra.iter().zip(&rb) {
        for c in 0..4 {
            let za = Complex64::new(f(&x[4 + 2 * c]), f(&x[5 + 2 * c]));
            let zb = Complex64::new(f(&y[4 + 2 * c]), f(&y[5 + 2 * c]));
            assert!((za * phase - zb).norm() <= 1e-12 * za.norm().max(1e-300));
        }
    }
}

#[test]
fn verify_reports_the_unlifted_condition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "matrix = C5:9\nnodes = 12\neps = 0.01, 0.005, 0.002, 0.001\n";
    let o = run(dir.path(), cfg, &["verify"]);
    let code = o.status.code().unwrap();
    assert!(code == 0 || code == 2, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv(&dir.path().join("out/verify.csv"));
    let unlifted = rows.iter().find(|r| r[3].contains("unlifted")).expect("unlifted row");
    assert_eq!(unlifted[10], "true");
    let all_pass = rows.iter().all(|r| r[10] == "true");
    assert_eq!(code == 0, all_pass);
    assert!(fs::read_to_string(dir.path().join("out/verify.txt")).unwrap().contains("unlifted"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), "beta = 3\nspeed = 1\n", &["roots"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run(dir.path(), "case = C2\nbeta = 3\n", &["roots"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), "", &["roots", "--eps", "0.1,0.2"]).status.code(), Some(4));
    assert_eq!(run(dir.path(), "", &["frobnicate"]).status.code(), Some(4));
    // a valid config whose sweep is too short to fit
    assert_eq!(run(dir.path(), "eps = 0.01, 0.005\n", &["report"]).status.code(), Some(3));
}
