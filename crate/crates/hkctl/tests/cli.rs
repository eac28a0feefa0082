use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hkctl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkctl")).args(args).current_dir(dir).env_remove("HKCTL_MAX_HEIGHT").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_writes_validated_model() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkctl(&["build", "--b", "5", "--m", "2", "--q", "diag:1,1,1,-1,-1", "-o", "m52.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("dims=[1, 5, 15, 5, 1]"));
    let bytes = std::fs::read(dir.path().join("m52.json")).unwrap();
    let alg = hkcore::model_forge::load_model(&bytes).unwrap();
    assert_eq!(hkcore::model_forge::save_model(&alg).as_bytes(), &bytes[..]);
}

#[test]
fn build_rejects_wrong_signature() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkctl(&["build", "--b", "4", "--m", "1", "--q", "diag:1,1,-1,-1", "-o", "x.json"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("inertia"));
    assert!(!dir.path().join("x.json").exists());
    let o = hkctl(&["build", "--b", "5", "--m", "1", "--q", "diag:1,1,1,-1", "-o", "x.json"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_suites_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hkctl(&["build", "--b", "4", "--m", "1", "-o", "m41.json"], dir.path())), 0);
    let o = hkctl(&["verify", "m41.json", "--suite", "so5", "--seed", "7", "--report", "r.json"], dir.path());
    assert_eq!(code(&o), 0);
    let r = report(&dir.path().join("r.json"));
    assert_eq!(r["records"][0]["check"], "so5");
    assert_eq!(r["records"][0]["status"], "pass");
    assert_eq!(r["records"][0]["data"]["dim"], 10);
    assert_eq!(r["records"][0]["data"]["killing"], serde_json::json!([4, 6, 0]));
    assert_eq!(r["records"][0]["model"], serde_json::json!({"b": 4, "m": 1}));
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["summary"]["failed"], 0);
    assert_eq!(r["toolkit"]["name"], "hkctl");

    let o = hkctl(&["verify", "m41.json", "--suite", "bb-independence", "--seed", "11"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("distinct_factors=1"));

    assert_eq!(code(&hkctl(&["build", "--b", "5", "--m", "2", "-o", "m52.json"], dir.path())), 0);
    let o = hkctl(&["verify", "m52.json", "--suite", "structure-algebra"], dir.path());
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(" dim=21"));
}

#[test]
fn verify_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hkctl(&["build", "--b", "4", "--m", "1", "-o", "m.json"], dir.path())), 0);
    for name in ["a.json", "b.json"] {
        assert_eq!(code(&hkctl(&["verify", "m.json", "--seed", "5", "--report", name], dir.path())), 0);
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.json")).unwrap());
    let r: Value = serde_json::from_slice(&a).unwrap();
    let checks: Vec<&str> = r["records"].as_array().unwrap().iter().map(|x| x["check"].as_str().unwrap()).collect();
    let mut sorted = checks.clone();
    sorted.sort();
    assert_eq!(checks, sorted);
    assert_eq!(checks.len(), 10);
}

#[test]
fn verify_list_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkctl(&["verify", "--list"], dir.path());
    assert_eq!(code(&o), 0);
    for s in ["so5", "structure-algebra", "bb-independence", "model-oracle", "all"] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(s)), "{s}");
    }
    assert_eq!(code(&hkctl(&["verify", "missing.json"], dir.path())), 2);
    std::fs::write(dir.path().join("junk.json"), "{\"nope\": 1}").unwrap();
    assert_eq!(code(&hkctl(&["verify", "junk.json"], dir.path())), 2);
    assert_eq!(code(&hkctl(&["build", "--b", "4", "--m", "1", "-o", "m.json"], dir.path())), 0);
    assert_eq!(code(&hkctl(&["verify", "m.json", "--suite", "nope"], dir.path())), 2);
}

#[test]
fn twistor_connect_writes_valid_path() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["twistor", "--gram", "diag:1,1,1,-1,-1", "--mode", "connect", "--seed", "3", "--count", "4"];
    let o = hkctl(&[&args[..], &["--out", "p.json", "--report", "r.json"]].concat(), dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = report(&dir.path().join("r.json"));
    for rec in r["records"].as_array().unwrap() {
        assert_eq!(rec["status"], "pass");
        assert!(rec["data"]["length"].as_u64().unwrap() <= 6);
    }
    let f: hkcore::twistor_walk::PathFile =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    let (ps, path) = hkcore::twistor_walk::path_from_json(&f, hkcore::twistor_walk::ScalarContext::Rational).unwrap();
    hkcore::twistor_walk::validate_path(&ps, &path).unwrap();
}

#[test]
fn twistor_admissible_modes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkctl(
        &["twistor", "--gram", "diag:1,1,1,-1,-1", "--mode", "admissible", "--ns", "e5", "--seed", "2", "--report", "r.json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = report(&dir.path().join("r.json"));
    let data = &r["records"][0]["data"];
    assert_eq!(data["admissible"], true);
    for ns in data["vertex_ns"].as_array().unwrap() {
        assert_eq!(ns, &serde_json::json!([[0, 0, 0, 0, 1]]));
    }
    assert_eq!(r["config"]["max_height"], 20);

    let o = hkctl(
        &["twistor", "--gram", "diag:1,1,1,-1,-1", "--mode", "admissible", "--ns", "e5", "--scalars", "rational"],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("general type"));

    let o = Command::new(env!("CARGO_BIN_EXE_hkctl"))
        .args(["twistor", "--gram", "diag:1,1,1,-1,-1", "--mode", "admissible", "--ns", "e5"])
        .env("HKCTL_MAX_HEIGHT", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("max_height=0"));
}

#[test]
fn twistor_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        vec!["twistor", "--gram", "diag:1,1,-1,-1,-1", "--mode", "connect"],
        vec!["twistor", "--gram", "diag:1,1,1,-1,-1", "--mode", "admissible", "--ns", "e9"],
        vec!["twistor", "--gram", "nothing.json", "--mode", "connect"],
    ];
    for args in bad {
        assert_eq!(code(&hkctl(&args, dir.path())), 2, "{args:?}");
    }
    std::fs::write(dir.path().join("g.json"), "{\"gram\": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,-1]]}").unwrap();
    let o = hkctl(&["twistor", "--gram", "g.json", "--mode", "connect", "--seed", "1"], dir.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
