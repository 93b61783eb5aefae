use std::path::PathBuf;
use std::process::{Command, Output};

use pmalg::algebra::{is_isomorphic, AlgebraFile, FiniteAlgebra};
use pmalg::constructions::build_si;
use pmalg::SiDescriptor;

fn pmalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmalg"))
        .args(args)
        .env_remove("PMALG_CAP_ELEMENTS")
        .env_remove("PMALG_CAP_EVALS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("pmalg-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn si(&self, i: usize, m: usize) -> String {
        let alg = build_si(SiDescriptor::new(i, m).unwrap());
        self.write(&format!("b{i}{m}.json"), &alg.to_file().to_json())
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn parse_algebra(text: &str) -> FiniteAlgebra {
    FiniteAlgebra::from_file(&AlgebraFile::from_json(text).unwrap()).unwrap()
}

#[test]
fn classify_b22() {
    let s = Scratch::new("classify");
    let o = pmalg(&["classify", "--algebra", &s.si(2, 2)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "subdirectly irreducible, not simple; Body size 1; space Type 2");
}

#[test]
fn check_reports_witness_and_honours_expect() {
    let s = Scratch::new("check");
    let c4 = s.si(1, 2);
    let o = pmalg(&["check", "C(x)' <= C(x)", "--algebra", &c4]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("FAIL x="), "{}", stdout(&o));
    assert_eq!(pmalg(&["check", "C(x)' <= C(x)", "--algebra", &c4, "--expect", "pass"]).status.code(), Some(1));
    assert_eq!(pmalg(&["check", "C(x)' <= C(x)", "--algebra", &c4, "--expect", "fail"]).status.code(), Some(0));
    let o = pmalg(&["check", "x & x' <= y | y'", "--algebra", &c4]);
    assert_eq!(stdout(&o).trim(), "PASS");
}

#[test]
fn free_decomposition_table() {
    let o = pmalg(&["free-decomp", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("F(2) = 2^4 x 3^5 x B2^20 x B3^16 x B4^4\n"));
    let o = pmalg(&["free-decomp", "1", "--oracle-verify", "1,2", "--format", "structured-text"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["product"], "2^2 x 3^1 x B2^2");
    assert!(v["oracle"].as_array().unwrap().iter().all(|r| r["agree"] == true));
}

#[test]
fn output_is_deterministic() {
    let s = Scratch::new("determinism");
    let b23 = s.si(2, 3);
    for cmd in ["dual", "congruences", "classify", "variety"] {
        let a = pmalg(&[cmd, "--algebra", &b23]);
        let b = pmalg(&[cmd, "--algebra", &b23]);
        assert!(a.status.success(), "{cmd}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn export_round_trip_and_product() {
    let s = Scratch::new("export");
    let b21 = s.si(2, 1);
    let o = pmalg(&["export", "--algebra", &b21]);
    let back = parse_algebra(&stdout(&o));
    assert!(is_isomorphic(&back, &build_si(SiDescriptor::new(2, 1).unwrap())));
    let two = s.write("two.json", &stdout(&pmalg(&["build", "--si", "1,0"])));
    let o = pmalg(&["product", &two, &b21]);
    assert_eq!(parse_algebra(&stdout(&o)).size(), 14);
}

#[test]
fn homomorphism_counts() {
    let s = Scratch::new("homs");
    let b31 = s.si(3, 1);
    let o = pmalg(&["homs", &b31, "--auto"]);
    assert_eq!(stdout(&o).trim(), "automorphisms: 6");
    let two = s.write("two.json", &stdout(&pmalg(&["build", "--si", "1,0"])));
    let o = pmalg(&["homs", &s.si(2, 1), &two, "--surjective"]);
    assert_eq!(stdout(&o).trim(), "surjective homomorphisms: 0");
}

#[test]
fn dot_outputs() {
    let s = Scratch::new("dot");
    let c4 = s.si(1, 2);
    let o = pmalg(&["dual", "--algebra", &c4, "--format", "dot"]);
    assert!(stdout(&o).starts_with("digraph"));
    assert!(stdout(&o).contains("style=dashed"));
    let o = pmalg(&["congruences", "--algebra", &c4, "--format", "dot"]);
    assert!(stdout(&o).contains("t0 -> t1"));
}

#[test]
fn errors_have_distinct_prefixes_and_codes() {
    let s = Scratch::new("errors");
    let o = pmalg(&["classify", "--algebra", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: io error:"));

    let bad = s.write("bad.json", "{\"elements\": 2}");
    let o = pmalg(&["classify", "--algebra", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: malformed input:"), "{}", stderr(&o));

    let not_dm = s.write(
        "notdm.json",
        r#"{"elements": 3, "covers": [[0,1],[1,2]], "neg": [2,2,0]}"#,
    );
    let o = pmalg(&["classify", "--algebra", &not_dm]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: invalid algebra:"), "{}", stderr(&o));
    let o = pmalg(&["validate", "--algebra", &not_dm]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid pm-algebra"));

    let b31 = s.si(3, 1);
    let o = pmalg(&["classify", "--algebra", &b31, "--cap-elements", "10"]);
    assert!(stderr(&o).starts_with("error: cap exceeded:"), "{}", stderr(&o));
    let o = pmalg(&["check", "x & y & z ~ z", "--algebra", &b31, "--cap-evals", "100"]);
    assert!(stderr(&o).starts_with("error: cap exceeded:"));

    let o = pmalg(&["check", "x &", "--algebra", &b31]);
    assert!(stderr(&o).starts_with("error: syntax error at byte 3"));

    assert_eq!(pmalg(&["bogus"]).status.code(), Some(2));
    assert_eq!(pmalg(&["build", "--si", "0,2"]).status.code(), Some(2));
}

#[test]
fn environment_sets_default_caps() {
    let s = Scratch::new("env");
    let b31 = s.si(3, 1);
    let o = Command::new(env!("CARGO_BIN_EXE_pmalg"))
        .args(["classify", "--algebra", &b31])
        .env("PMALG_CAP_ELEMENTS", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn structured_variety_record() {
    let s = Scratch::new("variety");
    let o = pmalg(&["variety", "--algebra", &s.si(1, 3), "--format", "structured-text"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["BPK"], true);
    assert_eq!(v["BPK1"], false);
}
