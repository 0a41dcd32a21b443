mod common;

use std::path::Path;
use std::process::{Command, Output};

use homkit::cli::document::{complex_doc, load, parse_complex, to_json, ComplexDoc, Document};
use homkit::complexes::{disk, extend_along, sphere};
use homkit::exactalg::Ring;
use homkit::modules::FpModule;
use proptest::prelude::*;
use serde_json::{json, Value};
use tempfile::TempDir;

const Z4: Ring = Ring::IntegersMod(4);

fn homkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homkit")).args(args).env_remove("HOMKIT_CAP").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn m(f: &[i64]) -> FpModule {
    FpModule::new(Z4, f.to_vec()).unwrap()
}

fn complex_file(dir: &TempDir, name: &str, c: &homkit::complexes::Complex) -> String {
    write(dir, name, &to_json(&complex_doc(c)))
}

fn strip_timing(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("elapsed_ms");
    }
    v
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.json", &json!({ "ring": { "mod": 4 } }));
    assert_eq!(code(&homkit(&["validate", &zero])), 0);

    let idid = json!({
        "ring": { "mod": 4 },
        "modules": { "0": [4], "1": [4], "2": [4] },
        "diff": { "0": [[1]], "1": [[1]] }
    });
    let o = homkit(&["validate", &write(&dir, "idid.json", &idid)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("degree 0"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"ring\": ").unwrap();
    assert_eq!(code(&homkit(&["validate", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&homkit(&["validate", "/nonexistent/homkit.json"])), 2);

    let shape = json!({ "ring": { "mod": 4 }, "modules": { "0": [4], "1": [4] }, "diff": { "0": [[1, 1]] } });
    assert_eq!(code(&homkit(&["validate", &write(&dir, "shape.json", &shape)])), 2);
}

#[test]
fn check_exact_and_perp() {
    let dir = TempDir::new().unwrap();
    let d = complex_file(&dir, "disk.json", &disk(0, &m(&[4])));
    let o = homkit(&["check", "exact", &d]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["status"], "holds");

    let s = complex_file(&dir, "s2.json", &sphere(0, &m(&[2])));
    let o = homkit(&["check", "exact", &s]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["evidence"]["homology"], json!([2]));

    let s4 = complex_file(&dir, "s4.json", &sphere(0, &m(&[4])));
    let o = homkit(&["check", "eps1-perp", &s4]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn x_injective_counterexample_revalidates() {
    let dir = TempDir::new().unwrap();
    let s = complex_file(&dir, "s2.json", &sphere(0, &m(&[2])));
    let o = homkit(&["check", "x-injective", "--class", "all", "--bound", "8", &s]);
    assert_eq!(code(&o), 1);
    let r = stdout_json(&o);
    assert_eq!(r["status"], "fails");
    assert_eq!(r["evidence"]["kind"], "no-extension");
    assert!(r["universe"].as_str().unwrap().contains('8'));

    let mono = write(&dir, "mono.json", &r["evidence"]["mono"]);
    let map = write(&dir, "map.json", &r["evidence"]["map"]);
    assert_eq!(code(&homkit(&["validate", &mono])), 0);
    assert_eq!(code(&homkit(&["validate", &map])), 0);
    let (Document::Map(mono), Document::Map(map)) = (load(Path::new(&mono)).unwrap(), load(Path::new(&map)).unwrap())
    else {
        panic!("expected chain maps")
    };
    assert!(mono.is_degreewise_mono().unwrap());
    assert!(extend_along(&mono, &map).unwrap().is_none());
}

#[test]
fn homotopy_witness_revalidates() {
    let dir = TempDir::new().unwrap();
    let d = to_json(&complex_doc(&disk(0, &m(&[4]))));
    let id = json!({ "source": d, "target": d, "map": { "0": [[1]], "1": [[1]] } });
    let o = homkit(&["check", "homotopic-zero", &write(&dir, "id.json", &id)]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    let map = write(&dir, "witness.json", &r["evidence"]["map"]);
    assert_eq!(code(&homkit(&["validate", &map])), 0);
    assert_eq!(r["evidence"]["homotopy"]["1"], json!([[1]]));

    let s = to_json(&complex_doc(&sphere(0, &m(&[4]))));
    let id = json!({ "source": s, "target": s, "map": { "0": [[1]] } });
    assert_eq!(code(&homkit(&["check", "homotopic-zero", &write(&dir, "ids.json", &id)])), 1);
}

#[test]
fn chain_map_references_resolve_relative_to_the_file() {
    let dir = TempDir::new().unwrap();
    complex_file(&dir, "d.json", &disk(0, &m(&[4])));
    let id = json!({ "source": "d.json", "target": "d.json", "map": { "0": [[1]], "1": [[1]] } });
    assert_eq!(code(&homkit(&["validate", &write(&dir, "id.json", &id)])), 0);
    let broken = json!({ "source": "d.json", "target": "d.json", "map": { "0": [[1]] } });
    assert_eq!(code(&homkit(&["validate", &write(&dir, "broken.json", &broken)])), 1);
}

#[test]
fn build_precover_outputs() {
    let dir = TempDir::new().unwrap();
    let zero = write(&dir, "zero.json", &json!({ "ring": { "mod": 4 } }));
    let o = homkit(&["build", "precover", &zero]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["map"], json!({}));
    assert_eq!(r["source"]["modules"], json!({}));

    let s = complex_file(&dir, "s2.json", &sphere(0, &m(&[2])));
    let out = dir.path().join("cover.json");
    let o = homkit(&["build", "precover", &s, "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&homkit(&["validate", out.to_str().unwrap()])), 0);
    let Document::Map(f) = load(&out).unwrap() else { panic!("expected a chain map") };
    assert_eq!(f.source(), &disk(0, &m(&[4])));
    assert_eq!(f.target(), &sphere(0, &m(&[2])));
    assert!(f.is_degreewise_epi().unwrap());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["kind"], "precover");
    assert_eq!(doc["kernel"]["0"], json!([2]));
    assert_eq!(doc["verification"]["factorization"], true);
}

#[test]
fn build_preenvelope_and_envelope() {
    let dir = TempDir::new().unwrap();
    let s = complex_file(&dir, "s2.json", &sphere(0, &m(&[2])));
    let o = homkit(&["build", "preenvelope", &s]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = homkit(&["build", "envelope", &s]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["maximal"], true);
    assert_eq!(r["x_injective"]["status"], "holds");
    assert_eq!(r["target"]["modules"], json!({ "-1": [4], "0": [4] }));

    let s4 = complex_file(&dir, "s4.json", &sphere(0, &m(&[4])));
    let o = homkit(&["build", "envelope", "--class", "free", &s4]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout_json(&o)["status"], "hypothesis-not-established");
}

#[test]
fn caps_are_enforced() {
    let dir = TempDir::new().unwrap();
    let s = complex_file(&dir, "s2.json", &sphere(0, &m(&[2])));
    assert_eq!(code(&homkit(&["build", "envelope", "--bound", "16", &s])), 2);
    let wide = homkit(&["universe", "modules", "--ring", "4", "--window", "4"]);
    assert_eq!(code(&wide), 2);
    let o = homkit(&["universe", "modules", "--ring", "4", "--bound", "16", "--unsafe-bound"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));

    let o = Command::new(env!("CARGO_BIN_EXE_homkit"))
        .args(["universe", "modules", "--ring", "4", "--bound", "4"])
        .env("HOMKIT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn universe_listings() {
    let lines = |o: &Output| -> Vec<Value> {
        String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    };
    let o = homkit(&["universe", "modules", "--ring", "4", "--bound", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(lines(&o).len(), 4);
    let o = homkit(&["universe", "modules", "--ring", "4", "--bound", "1"]);
    assert_eq!(lines(&o), vec![json!([])]);

    let d = to_json(&complex_doc(&disk(0, &m(&[2]))));
    let all = lines(&homkit(&["universe", "eps1", "--ring", "4", "--bound", "2"]));
    assert!(all.contains(&d));
    let free = lines(&homkit(&["universe", "eps1", "--ring", "4", "--bound", "2", "--class", "free"]));
    assert!(!free.contains(&d));
    assert!(!free.is_empty());
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let c = homkit::construct::fixture_injective_components_not_injective_complex();
    let p = complex_file(&dir, "fixture.json", &c);
    let a = homkit(&["check", "x-injective", &p]);
    let b = homkit(&["check", "x-injective", &p]);
    assert_eq!(code(&a), 1);
    assert_eq!(code(&a), code(&b));
    assert_eq!(strip_timing(stdout_json(&a)), strip_timing(stdout_json(&b)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn document_round_trip_is_canonical(seed in any::<u64>(), width in 1usize..=3) {
        let mut rng = common::rng(seed);
        let pool = common::modules_upto(Z4, 8);
        let c = common::random_complex_in(&mut rng, -1, width, &pool);
        let doc = complex_doc(&c);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ComplexDoc = serde_json::from_str(&text).unwrap();
        let c2 = parse_complex(&back).unwrap();
        prop_assert_eq!(&c2, &c);
        prop_assert_eq!(complex_doc(&c2), doc);
    }
}

#[test]
fn parsing_reduces_entries() {
    let raw = json!({ "ring": { "mod": 4 }, "modules": { "0": [4], "1": [2] }, "diff": { "0": [[7]] } });
    let d: ComplexDoc = serde_json::from_value(raw).unwrap();
    let c = parse_complex(&d).unwrap();
    let canon = complex_doc(&c);
    assert_eq!(canon.diff[&0], vec![vec![1]]);
    assert_eq!(complex_doc(&parse_complex(&canon).unwrap()), canon);
}
