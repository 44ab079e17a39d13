use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn pht(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pht"))
        .args(args)
        .env_remove("PHT_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn example(dir: &Path, name: &str) -> PathBuf {
    let out = pht(&["example", name, "--dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir.join(format!("{name}.json"))
}

fn run_json(command: &str, spec: &Path, extra: &[&str]) -> (i32, Value) {
    let out_path = spec.with_extension(format!("{command}.out.json"));
    let mut args = vec![
        command,
        spec.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let out = pht(&args);
    let report = std::fs::read_to_string(&out_path)
        .map(|t| serde_json::from_str(&t).unwrap())
        .unwrap_or(Value::Null);
    (code(&out), report)
}

fn write_spec(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const SCALAR_N1: &str = r#"{
    "interval": [0, 1], "n": 1, "N": 1,
    "P": [[[1]], [[1]]],
    "S": [[[1]], [[0]]],
    "boundary_conditions": BC
}"#;

fn scalar_with_bc(bc: &str) -> String {
    SCALAR_N1.replace("BC", bc)
}

#[test]
fn dzektser_check_passes() {
    let dir = TempDir::new().unwrap();
    let spec = example(dir.path(), "dzektser");
    let (status, report) = run_json("check", &spec, &[]);
    assert_eq!(status, 0);
    assert_eq!(report["defect_dimensions"]["plus"], 4);
    assert_eq!(report["defect_dimensions"]["minus"], 4);
    let c2 = report["coercivity"]["c_squared_min"].as_f64().unwrap();
    assert!((c2 - 1.0).abs() < 1e-12);
    assert_eq!(report["coercivity"]["certified"], true);
    assert!(report["tolerances"]["rank_rtol"].is_number());
}

#[test]
fn non_hermitian_s0_exits_2() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "bad.json",
        r#"{"interval": [0, 1], "n": 1, "N": 1, "P": [[[1]], [[1]]], "S": [[[[0, 1]]], [[0]]]}"#,
    );
    let (status, report) = run_json("check", &spec, &[]);
    assert_eq!(status, 2);
    assert_eq!(report["structural"]["maxwell_symmetry"]["pass"], false);
    assert_eq!(code(&pht(&["triplet", spec.to_str().unwrap()])), 2);
    assert_eq!(code(&pht(&["green", spec.to_str().unwrap()])), 2);
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let empty = write_spec(dir.path(), "empty.json", "");
    assert_eq!(code(&pht(&["check", empty.to_str().unwrap()])), 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&pht(&["check", missing.to_str().unwrap()])), 1);
    let wrong_size = write_spec(
        dir.path(),
        "size.json",
        r#"{"interval": [0, 1], "n": 2, "N": 0, "P": [[[1]]], "S": [[[1]]]}"#,
    );
    assert_eq!(code(&pht(&["check", wrong_size.to_str().unwrap()])), 1);
    assert_eq!(code(&pht(&["no-such-command"])), 1);
    assert_eq!(code(&pht(&["--help"])), 0);
}

#[test]
fn order_zero_pair_has_no_mixed_order() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "n0.json",
        r#"{"interval": [0, 1], "n": 1, "N": 0, "P": [[[1]]], "S": [[[1]]]}"#,
    );
    assert_eq!(code(&pht(&["triplet", spec.to_str().unwrap()])), 2);
}

#[test]
fn triplet_reports_for_fixtures() {
    let dir = TempDir::new().unwrap();
    let (status, dz) = run_json("triplet", &example(dir.path(), "dzektser"), &[]);
    assert_eq!(status, 0);
    assert_eq!(dz["range"]["mode"], "full_rank");
    assert_eq!(dz["range"]["boundary_space_dim"], 4);
    assert!(dz["skew"].is_null());

    let (status, wave) = run_json("triplet", &example(dir.path(), "wave"), &[]);
    assert_eq!(status, 0);
    assert_eq!(wave["range"]["mode"], "reduced");
    assert_eq!(wave["range"]["boundary_space_dim"], 2);
    assert_eq!(wave["skew"]["boundary_space_dim"], 2);

    let rod_spec = example(dir.path(), "rod");
    let (status, rod) = run_json("triplet", &rod_spec, &[]);
    assert_eq!(status, 0);
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(&rod_spec).unwrap()).unwrap();
    assert_eq!(rod["skew"]["Q"], spec["J"][1]);
    let check = &rod["range"]["orientation_check"];
    assert!(check["residual"].as_f64().unwrap() < 1e-9);
    assert!(check["negated_a_residual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn classify_dirichlet_dzektser() {
    let dir = TempDir::new().unwrap();
    let (status, report) = run_json("classify", &example(dir.path(), "dzektser-dirichlet"), &[]);
    assert_eq!(status, 0);
    assert_eq!(report["relation"]["self_adjoint"], true);
}

#[test]
fn classify_triplet_form() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(
        dir.path(),
        "kl.json",
        &scalar_with_bc(r#"{"form": "triplet", "K": [[1, 0], [0, 1]], "L": [[1, 0], [0, 1]]}"#),
    );
    let (status, report) = run_json("classify", &spec, &[]);
    assert_eq!(status, 0);
    assert_eq!(report["relation"]["self_adjoint"], true);
    assert_eq!(report["relation"]["maximally_dissipative"], true);

    let spec = write_spec(
        dir.path(),
        "bad_dim.json",
        &scalar_with_bc(r#"{"form": "triplet", "K": [[1]], "L": [[1]]}"#),
    );
    assert_eq!(code(&pht(&["classify", spec.to_str().unwrap()])), 1);

    let spec = write_spec(
        dir.path(),
        "fe.json",
        &scalar_with_bc(
            r#"{"form": "triplet", "K": [[1, 0], [0, 1]], "L": [[1, 0], [0, 1]], "F": [[0]], "E": [[1]]}"#,
        ),
    );
    assert_eq!(code(&pht(&["classify", spec.to_str().unwrap()])), 1);
}

#[test]
fn trace_form_needs_full_rank() {
    let dir = TempDir::new().unwrap();
    let wave = example(dir.path(), "wave");
    let mut spec: Value = serde_json::from_str(&std::fs::read_to_string(&wave).unwrap()).unwrap();
    let eye4: Vec<Vec<i32>> = (0..4)
        .map(|i| (0..4).map(|j| i32::from(i == j)).collect())
        .collect();
    spec["boundary_conditions"] = serde_json::json!({"form": "trace", "Q_b": eye4, "R_b": eye4});
    let path = write_spec(dir.path(), "wave_trace.json", &spec.to_string());
    assert_eq!(code(&pht(&["classify", path.to_str().unwrap()])), 3);
}

#[test]
fn rod_is_generalized_port_hamiltonian() {
    let dir = TempDir::new().unwrap();
    let (status, report) = run_json("classify", &example(dir.path(), "rod"), &[]);
    assert_eq!(status, 0);
    assert_eq!(report["generalized_ph"], true);
    assert_eq!(report["relation"]["self_adjoint"], true);
    assert_eq!(report["skew"]["skew_adjoint"], true);
}

#[test]
fn green_residuals() {
    let dir = TempDir::new().unwrap();
    let spec = example(dir.path(), "rod");
    let (status, report) = run_json("green", &spec, &["--samples", "100", "--seed", "7"]);
    assert_eq!(status, 0);
    assert_eq!(report["range"]["count"], 100);
    assert_eq!(report["range"]["seed"], 7);
    assert_eq!(report["range"]["pass"], true);
    assert_eq!(report["skew"]["pass"], true);

    let (status, report) = run_json("green", &spec, &["--samples", "0"]);
    assert_eq!(status, 0);
    assert_eq!(report["range"]["count"], 0);
}

#[test]
fn green_seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let spec = example(dir.path(), "dzektser");
    let out_path = dir.path().join("env.json");
    let out = Command::new(env!("CARGO_BIN_EXE_pht"))
        .args([
            "green",
            spec.to_str().unwrap(),
            "--samples",
            "3",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .env("PHT_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(report["range"]["seed"], 42);
}

#[test]
fn coercivity_command() {
    let dir = TempDir::new().unwrap();
    let (status, report) = run_json(
        "coercivity",
        &example(dir.path(), "dzektser"),
        &["--k-max", "5"],
    );
    assert_eq!(status, 0);
    assert_eq!(
        report["certificate"]["label"],
        "sufficient-condition certificate"
    );
    assert_eq!(report["modes"].as_array().unwrap().len(), 5);
}

fn close(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
        }
        (Value::Array(x), Value::Array(y)) => {
            x.len() == y.len() && x.iter().zip(y).all(|(u, v)| close(u, v, tol))
        }
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len()
                && x.iter()
                    .all(|(k, u)| y.get(k).is_some_and(|v| close(u, v, tol)))
        }
        _ => a == b,
    }
}

#[test]
fn examples_round_trip() {
    let dir = TempDir::new().unwrap();
    for name in ["dzektser", "dzektser-dirichlet", "wave", "rod"] {
        let spec = example(dir.path(), name);
        let expected: Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join(format!("{name}.expected.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(expected["fixture"], name);
        let mut commands = vec!["check", "triplet"];
        if expected.get("classify").is_some() {
            commands.push("classify");
        }
        for command in commands {
            let (status, report) = run_json(command, &spec, &[]);
            assert_eq!(status, 0, "{name} {command}");
            assert!(
                close(&report, &expected[command], 1e-9),
                "{name} {command} differs"
            );
        }
        let (_, triplet) = run_json("triplet", &spec, &[]);
        assert_eq!(triplet["range"]["B"], expected["triplet"]["range"]["B"]);
        assert_eq!(triplet["range"]["A"], expected["triplet"]["range"]["A"]);
    }
}

#[test]
fn rod_parameters_are_validated() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(
        code(&pht(&["example", "rod", "--dir", d, "--tension", "-1"])),
        1
    );
    assert_eq!(
        code(&pht(&["example", "rod", "--dir", d, "--rho-a", "0"])),
        1
    );
    let out = pht(&["example", "rod", "--dir", d, "--mu", "2", "--tension", "3"]);
    assert_eq!(code(&out), 0);
    let expected: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("rod.expected.json")).unwrap(),
    )
    .unwrap();
    assert!(expected["notes"][0]
        .as_str()
        .unwrap()
        .contains("[[0, 6], [-6, 0]]"));
}
