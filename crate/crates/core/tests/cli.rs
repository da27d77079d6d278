//! Exit-code contract and output handling of the command-line tool.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degcauchy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("DEGCAUCHY_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const CONFIG: &str = "[problem]\nm = 0.5\nn = 0.5\nmu = 0.0\n\n[data]\ntau1 = { kind = \"constant\", value = 1.0 }\n\
nu1 = { kind = \"zero\" }\n\n[grid]\nx_range = [0.3, 0.45]\ny_range = [-0.1, -0.02]\nnx = 9\nny = 9\n\n\
[verify]\nrefinement = [9, 17, 33]\n";

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn fn_eval_trivial_value() {
    let o = run(&["fn-eval", "F", "0.5", "3", "3", "--sigma", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value = 1.00000000000000000e0"), "{}", stdout(&o));
}

#[test]
fn fn_eval_matches_library_bit_exactly() {
    use degcauchy::special_fn::{psi_pq, xi2, gauss_f, EvalConfig, GaussParams, PsiPQParams, Xi2Params};
    let cfg = EvalConfig::with_tol(1e-14);
    let p = PsiPQParams { a: 0.3, b: -0.4, c: 1.2, d: 0.7, e: 1.3, a_prime: 0.5, b_prime: 0.8, c_prime: 1.1, d_prime: 0.6, p: 1, q: 0 };
    let v = psi_pq(&p, 0.2, 0.3, -0.5, &cfg).unwrap().value;
    let o = run(&[
        "fn-eval", "PsiPQ", "1", "0", "0.3", "-0.4", "1.2", "0.7", "1.3", "0.5", "0.8", "1.1", "0.6", "--sigma", "0.2",
        "--theta", "0.3", "--rho", "-0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(&format!("value = {v:.17e}")), "{}", stdout(&o));

    let x = xi2(&Xi2Params { a: 0.5, b: 1.5, c: 2.0 }, 0.3, 0.0, &cfg).unwrap().value;
    let f = gauss_f(&GaussParams { a: 0.5, b: 1.5, c: 2.0 }, 0.3, &cfg).unwrap().value;
    let o = run(&["fn-eval", "xi2", "0.5", "1.5", "2", "--sigma", "0.3", "--rho", "0"]);
    assert!(stdout(&o).contains(&format!("value = {x:.17e}")));
    assert!((x - f).abs() < 1e-14);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["fn-eval", "Phi", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["fn-eval", "Gamma", "1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["identities", "--relations", "R99"]).status.code(), Some(2));
    assert_eq!(run(&["identities", "--draws", "0"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_config_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &CONFIG.replace("m = 0.5", "m = 1.5"));
    let o = run(&["solve", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("problem"));
}

#[test]
fn evaluation_failure_exits_1() {
    // pole in the lower parameter is a failed evaluation, not a usage error
    assert_eq!(run(&["fn-eval", "F", "0.5", "1", "-2", "--sigma", "0.3"]).status.code(), Some(1));
}

#[test]
fn identities_single_row_and_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let o = run(&["identities", "--relations", "R10", "--draws", "1", "--seed", "7", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ra = std::fs::read_to_string(a.join("identities_report.csv")).unwrap();
    assert_eq!(ra.lines().count(), 2);
    assert!(ra.starts_with(degcauchy::identities::REPORT_CSV_HEADER));
    assert_eq!(ra, std::fs::read_to_string(b.join("identities_report.csv")).unwrap());
}

#[test]
fn solve_constant_data_and_env_override() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CONFIG);
    let env_dir = tmp.path().join("from_env");
    let o = bin().args(["solve", "--config", &cfg]).env("DEGCAUCHY_OUT_DIR", &env_dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("points = 81"));
    let csv = std::fs::read_to_string(env_dir.join("solution.csv")).unwrap();
    assert_eq!(csv.lines().count(), 82);
    for line in csv.lines().skip(1) {
        let v: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-8);
    }
    assert!(env_dir.join("solution.json").exists());

    // --out wins over the environment
    let flag_dir = tmp.path().join("from_flag");
    let o = bin()
        .args(["solve", "--config", &cfg, "--out", flag_dir.to_str().unwrap()])
        .env("DEGCAUCHY_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.join("solution.csv").exists());
}

#[test]
fn verify_residual_constant_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CONFIG);
    let o = run(&["verify", "residual", "--config", &cfg, "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let csv = std::fs::read_to_string(tmp.path().join("verify_residual.csv")).unwrap();
    assert!(csv.starts_with(degcauchy::verification::RESIDUAL_CSV_HEADER));
}

#[test]
fn verify_oracle_fails_with_unweighted_s_factor() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "s_form = \"unweighted\"\n[problem]\nm = 0.5\nn = 0.5\nmu = -2.0\n\n[data]\ntau1 = { kind = \"sine\" }\n\
nu1 = { kind = \"zero\" }\n\n[grid]\nx_range = [0.35, 0.5]\ny_range = [-0.08, -0.02]\nnx = 3\nny = 3\n";
    let cfg = write_config(tmp.path(), text);
    let out = tmp.path().to_str().unwrap();
    assert_eq!(run(&["verify", "oracle", "--config", &cfg, "--out", out]).status.code(), Some(1));
    let ok = write_config(tmp.path(), &text.replace("s_form = \"unweighted\"", "s_form = \"corrected\""));
    assert_eq!(run(&["verify", "oracle", "--config", &ok, "--out", out]).status.code(), Some(0));
}
