use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symgen"))
        .args(args)
        .env_remove("SYMGEN_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn cover_exit_codes() {
    let out = symgen(&["cover", "--n", "6", "--i", "2"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["result"]["covered"], true);
    assert_eq!(v["tool"]["name"], "symgen");
    assert_eq!(v["config"]["n"], 6);

    let out = symgen(&["cover", "--n", "6", "--i", "1", "--mode", "exhaustive"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["result"]["covered"], false);

    let out = symgen(&["cover", "--n", "7", "--i", "1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));

    assert_eq!(code(&symgen(&["cover", "--n", "6", "--i", "3"])), 1);
}

#[test]
fn sigma_upper() {
    let out = symgen(&["sigma-upper", "--n", "8", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "71");
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let out = symgen(&[
        "construct",
        "--n",
        "8",
        "--i",
        "1",
        "--seed",
        "42",
        "--strategy",
        "min-conflicts",
        "-o",
        p,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&symgen(&["verify", p])), 0);

    // the bare certificate verifies too
    let wrapped: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let bare = dir.path().join("bare.json");
    fs::write(&bare, serde_json::to_string(&wrapped["result"]).unwrap()).unwrap();
    assert_eq!(code(&symgen(&["verify", bare.to_str().unwrap()])), 0);

    // replace one element by the identity
    let mut tampered = wrapped.clone();
    tampered["result"]["assignment"][0]["g"] = Value::from("()");
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&tampered).unwrap()).unwrap();
    let out = symgen(&["verify", bad.to_str().unwrap(), "--format", "text"]);
    assert_eq!(code(&out), 2);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("checksum mismatch"));
    assert!(text.contains("not an n-cycle / not in C(Δ)"));
}

#[test]
fn malformed_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    fs::write(&path, "{\"kind\": \"CONSTRUCTION\"}").unwrap();
    let out = symgen(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("malformed certificate"));
    assert_eq!(code(&symgen(&["verify", "/nonexistent/cert.json"])), 2);
}

#[test]
fn construct_failure_exit_code() {
    let out = symgen(&["construct", "--n", "6", "--i", "1", "--max-rounds", "20"]);
    assert_eq!(code(&out), 3);
    let v = json_of(&out);
    assert_eq!(v["result"]["status"], "FAILURE");
    assert_eq!(v["result"]["report"]["rounds"], 20);

    let out = symgen(&["construct", "--n", "8", "--i", "1", "--max-pairs", "10"]);
    assert_eq!(code(&out), 3);
}

fn construct_bytes(dir: &Path, threads: &str, name: &str) -> Vec<u8> {
    let path = dir.join(name);
    let out = symgen(&[
        "construct",
        "--n",
        "8",
        "--i",
        "2",
        "--seed",
        "7",
        "--strategy",
        "min-conflicts",
        "--threads",
        threads,
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    fs::read(path).unwrap()
}

#[test]
fn output_is_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    let one = construct_bytes(dir.path(), "1", "a.json");
    let four = construct_bytes(dir.path(), "4", "b.json");
    assert_eq!(one, four);
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_symgen"))
        .args(["construct", "--n", "6", "--i", "1", "--max-rounds", "1"])
        .env("SYMGEN_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["config"]["construct"]["seed"], 123);
}

#[test]
fn lll_sweep_and_certificate() {
    let out = symgen(&["lll", "--i", "1", "--n-max", "300"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let threshold = v["result"]["lll_threshold"]
        .as_u64()
        .expect("threshold below 300");
    assert!(threshold > 6);
    assert_eq!(v["result"]["lll_monotone"], true);

    let out = symgen(&["lll", "--i", "2", "--n", "6", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("met no"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lll.json");
    let out = symgen(&[
        "lll",
        "--i",
        "1",
        "--n",
        "200",
        "--certificate",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&symgen(&["verify", path.to_str().unwrap()])), 0);

    assert_eq!(code(&symgen(&["lll", "--i", "1"])), 1);
}

#[test]
fn exact_oracles() {
    let v = json_of(&symgen(&["exact", "--n", "3", "--what", "sigma"]));
    assert_eq!(v["result"]["sigma"], 4);
    let v = json_of(&symgen(&["exact", "--n", "3", "--what", "omega"]));
    assert_eq!(v["result"]["omega"], 4);
    let v = json_of(&symgen(&["exact", "--n", "4", "--what", "generation"]));
    assert_eq!(v["result"]["mixture_identity"], true);
    assert_eq!(v["result"]["coset_identity"], true);
    let v = json_of(&symgen(&["exact", "--n", "4", "--what", "lattice"]));
    assert_eq!(v["result"]["subgroups"], 30);
    assert_eq!(
        code(&symgen(&["exact", "--n", "6", "--what", "generation"])),
        1
    );
}

#[test]
fn probgen_is_reproducible() {
    let a = symgen(&["probgen", "--n", "6", "--trials", "2000", "--seed", "5"]);
    let b = symgen(&["probgen", "--n", "6", "--trials", "2000", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(
        (json_of(&a)["result"]["asymptotic"].as_f64().unwrap() - (1.0 - 1.0 / 6.0)).abs() < 1e-12
    );
    assert_eq!(code(&symgen(&["probgen", "--n", "6", "--trials", "10"])), 1);
}
