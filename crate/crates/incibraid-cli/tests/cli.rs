use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use incibraid::families::{flip_solution, generate, FamilyId, FamilyInstance};
use incibraid::poset::Poset;
use incibraid::scalars::Field;
use incibraid_cli::format::{parse_census, parse_lambda, parse_poset, write_lambda, write_poset};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incibraid")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn flip_checks_clean() {
    let d = TempDir::new().unwrap();
    let p = Poset::two_chain();
    let pf = put(&d, "p.poset", &write_poset(&p));
    let lf = put(&d, "flip.lambda", &write_lambda(&flip_solution(&p)));
    let o = run(&["check", s(&pf), s(&lf)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn support_violation_is_named() {
    let d = TempDir::new().unwrap();
    let p = Poset::two_chain();
    let pf = put(&d, "p.poset", &write_poset(&p));
    let mut text = write_lambda(&flip_solution(&p));
    text.push_str("x x x y | y y y y = 1\n");
    let lf = put(&d, "bad.lambda", &text);
    let o = run(&["check", s(&pf), s(&lf), "--check", "support"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("support: FAIL"), "{out}");
    assert!(out.contains("y|y|y|y"), "{out}");
}

#[test]
fn family_round_trips_bit_exact() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("t.lambda");
    let pout = d.path().join("t.poset");
    let o = run(&[
        "family", "T56-1", "alpha1=2", "alpha2=1/3", "alpha3=-5/7", "--out", s(&out), "--poset-out", s(&pout),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let p = parse_poset(&fs::read_to_string(&pout).unwrap()).unwrap();
    let text = fs::read_to_string(&out).unwrap();
    let t = parse_lambda(&p, &text, false).unwrap();
    let q = Field::Rational;
    let inst = FamilyInstance::new(FamilyId::T56_1, q)
        .with("alpha1", q.int(2))
        .with("alpha2", q.ratio(1, 3).unwrap())
        .with("alpha3", q.ratio(-5, 7).unwrap());
    assert_eq!(t, generate(&inst).unwrap());
    assert_eq!(write_lambda(&t), text);
    let o = run(&["check", s(&pout), s(&out)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn constraint_is_quoted() {
    let o = run(&["family", "T56-4a-ii", "beta4=2", "Gamma1=-2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Γ₁ ∈ K∖{−β₄²/2}"), "{}", stderr(&o));
    let o = run(&["family", "T56-9"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn random_tab1_over_gf5() {
    let d = TempDir::new().unwrap();
    let dir = d.path().join("out");
    let pout = d.path().join("p.poset");
    let o = run(&[
        "family", "TAB1-2a", "--random", "10", "--field", "GF(5)", "--seed", "3", "--out", s(&dir), "--poset-out",
        s(&pout),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("10/10 instances pass"));
    let files: Vec<_> = fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 10);
    let first = dir.join("TAB1-2a-001.lambda");
    let o = run(&["check", s(&pout), s(&first)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn vee_table_realization_passes() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("t.lambda");
    let pout = d.path().join("p.poset");
    let o = run(&[
        "family", "TAB1-1", "alpha1=2", "alpha4=3", "alpha6=5", "C1=7", "C2=11", "--out", s(&out), "--poset-out",
        s(&pout),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["check", s(&pout), s(&out), "--check", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("braid-residual: pass"));
}

#[test]
fn seeded_runs_repeat() {
    let a = run(&["family", "T56-4c", "--random", "3", "--seed", "9"]);
    let b = run(&["family", "T56-4c", "--random", "3", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn transposed_ingest() {
    let d = TempDir::new().unwrap();
    let q = Field::Rational;
    let t = generate(&FamilyInstance::with_ints(FamilyId::T56_3a, q, &[("beta1", 1), ("beta2", 2), ("Gamma1", 3)])).unwrap();
    let pf = put(&d, "p.poset", &write_poset(t.poset()));
    let swapped: String = write_lambda(&t)
        .lines()
        .map(|l| match l.split_once(" | ") {
            Some((i, rest)) => {
                let (o, v) = rest.split_once(" = ").unwrap();
                format!("{o} | {i} = {v}\n")
            }
            None => format!("{l}\n"),
        })
        .collect();
    let lf = put(&d, "t.lambda", &swapped);
    assert_eq!(code(&run(&["check", s(&pf), s(&lf), "--transpose-ingest"])), 0);
    assert_eq!(code(&run(&["check", s(&pf), s(&lf)])), 1);
}

#[test]
fn parse_errors_exit_two() {
    let d = TempDir::new().unwrap();
    let pf = put(&d, "p.poset", "posetfile v1\nelements: x y\ncovers: x<y\n");
    let lf = put(&d, "t.lambda", "lambdafile v1\nfield: Q\nx x x x | x x x x = one\n");
    let o = run(&["check", s(&pf), s(&lf)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3, column 21"), "{}", stderr(&o));
    let bad = put(&d, "q.poset", "posetfile v1\nelements: x y\ncovers: x<w\n");
    let o = run(&["search", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown element `w`"));
}

#[test]
fn census_over_gf3() {
    let d = TempDir::new().unwrap();
    let pf = put(&d, "p.poset", &write_poset(&Poset::two_chain()));
    let cf = d.path().join("c.census");
    let o = run(&["search", s(&pf), "--field", "GF(3)", "--out", s(&cf), "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["exit_code"], 0);
    let (p, f, blocks) = parse_census(&fs::read_to_string(&cf).unwrap()).unwrap();
    assert_eq!(p.len(), 2);
    assert_eq!(f, Field::prime(3).unwrap());
    assert_eq!(blocks.len(), 72);
    assert!(blocks.iter().all(|b| !b.matches.is_empty()));
}

#[test]
fn census_over_gf2_reports_unmatched() {
    let d = TempDir::new().unwrap();
    let pf = put(&d, "p.poset", &write_poset(&Poset::two_chain()));
    let o = run(&["search", s(&pf), "--field", "GF(2)"]);
    // two characteristic-2 solutions lie outside the families
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("12 solutions, 10 matched"), "{}", stdout(&o));
}

#[test]
fn oversized_search_is_refused() {
    let d = TempDir::new().unwrap();
    let pf = put(&d, "p.poset", &write_poset(&Poset::vee()));
    let o = run(&["search", s(&pf), "--field", "GF(5)", "--no-prune"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("5^"), "{}", stderr(&o));
    let o = run(&["search", s(&pf), "--field", "Q"]);
    assert_eq!(code(&o), 2);
}
