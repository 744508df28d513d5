use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_arcring"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], stdin: &str) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a, stdin);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ring_matches_golden_file() {
    let out = run(&["ring", "--n", "2", "--format", "json"], "");
    assert!(out.status.success());
    let golden = include_str!("golden/ring2.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn ring_table_for_h1() {
    let v = json(&["ring", "--n", "1", "--table"], "");
    assert_eq!(v["table"].as_array().unwrap().len(), 3);
}

#[test]
fn cartan_agrees_with_product_formula() {
    let v = json(&["cartan", "--n", "4"], "");
    assert_eq!(v["schema"], "arcring/1");
    assert_eq!(v["agrees"], true);
    assert_eq!(v["determinant"], v["meander_prediction"]);
}

#[test]
fn kh_of_trefoil_in_each_format() {
    let z = json(&["kh", "-i", "-"], "s1 s1 s1");
    assert_eq!(z["torsion_summands"], 1);
    assert_eq!(z["jones"]["agree"], true);
    let pd = json(&["kh", "-i", "-"], "PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]");
    assert_eq!(pd["total_rank"], 4);
    let q = json(&["kh", "-i", "-", "--coeff", "Q"], "cup 1; cup 2; x 3; x 3; x 3; cap 2; cap 1");
    assert_eq!(q["total_rank"], 4);
    assert_eq!(q["torsion_summands"], 0);
    let f2 = json(&["kh", "-i", "-", "--coeff", "F2", "--no-simplify"], "s1 s1 s1");
    assert_eq!(f2["total_rank"], 6);
}

#[test]
fn tangle_and_closures() {
    let t = json(&["tangle", "-i", "-", "--simplify"], "bottom 2\nxbar 1\ncap 1\n");
    assert_eq!(t["euler_matches_kauffman"], true);
    assert_eq!(t["complex"]["degrees"].as_array().unwrap().len(), 1);
    let c = json(&["closures", "-i", "-"], "bottom 4; x 2");
    assert_eq!(c["closures"].as_array().unwrap().len(), 4);
}

#[test]
fn bracket_text_output() {
    let out = run(&["bracket", "-i", "-"], "bottom 2; x 1; cap 1");
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("x = 1, y = 0"), "{s}");
}

#[test]
fn verify_moves_and_random_words() {
    let v = json(&["verify", "--moves", "r2,r3", "--max-strands", "4", "--random", "5", "--seed", "9"], "");
    assert_eq!(v["all_equivalent"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
    assert_eq!(v["random"].as_array().unwrap().len(), 5);
    assert_eq!(v["seed"], 9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["kh", "-i", "-"], "bottom 2; twist 1").status.code(), Some(2));
    assert_eq!(run(&["kh", "-i", "-"], "bottom 2; orient ++; cap 1").status.code(), Some(2));
    assert_eq!(run(&["kh", "-i", "-", "--input-format", "pd"], "X[1,2,3]").status.code(), Some(2));
    assert_eq!(run(&["verify", "--moves", "r7"], "").status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(2));
    // A tangle with boundary has no single homology table.
    assert_eq!(run(&["kh", "-i", "-"], "bottom 2; x 1").status.code(), Some(1));
    assert_eq!(run(&["kh", "-i", "/nonexistent/file"], "").status.code(), Some(1));
}
