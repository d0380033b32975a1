use std::path::Path;
use std::process::Command;

use clap::Parser;

use addel_cli::report::{Payload, Report};
use addel_cli::{run, Cli};

const BIN: &str = env!("CARGO_BIN_EXE_addel");

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

/// Runs the command line in-process: (exit code, stdout, stderr).
fn addel(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("addel").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn binary_exit_codes() {
    let out = Command::new(BIN).args(["analyze", "--curve", &fixture("octic.curve"), "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.schema, 1);
    let Payload::Analyze(a) = r.result else { panic!() };
    assert_eq!(a.class.to_string(), "free with exponents (2, 5)");

    let dir = tempfile::tempdir().unwrap();
    let dup = write(dir.path(), "dup.curve", "line: x - y\nline: 2*x - 2*y\n");
    let out = Command::new(BIN).args(["analyze", "--curve", &dup]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scalar multiples"));
}

#[test]
fn input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.curve", "line: x\nconic: x^2 +\n");
    let (code, _, err) = addel(&["analyze", "--curve", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = addel(&["analyze", "--curve", &dir.path().join("missing").display().to_string()]);
    assert_eq!(code, 2);
    let octic = fixture("octic.curve");
    let (code, _, err) = addel(&["add", "--curve", &octic, "--conic", "x^2 + y^2 - z^2"]);
    assert_eq!(code, 2);
    assert!(err.contains("the conic is a component of the curve"), "{err}");
    let (code, _, _) = addel(&["delete", "--curve", &octic, "--conic", "x^2 + 2*y^2 - z^2"]);
    assert_eq!(code, 2);
    let (code, _, _) = addel(&["add", "--curve", &octic, "--conic", "x^2 - y^2"]);
    assert_eq!(code, 2);
    let (code, _, _) = addel(&["analyze", "--curve", &octic, "--cap", "5"]);
    assert_eq!(code, 2);
    let (code, _, _) = addel(&["analyze", "--curve", &octic, "--modular", "1000001"]);
    assert_eq!(code, 2);
    let not_free = write(dir.path(), "nf.curve", "line: x\nline: y\nline: z\nline: x + y + z\nconic: x^2 + y^2 - z^2\n");
    let (code, _, err) = addel(&["delete", "--curve", &not_free, "--conic", "x^2 + y^2 - z^2"]);
    assert_eq!(code, 2);
    assert!(err.contains("not free"), "{err}");
}

#[test]
fn small_cap_is_a_limitation() {
    let dir = tempfile::tempdir().unwrap();
    // four general lines: D_0 has generators only in degree 2
    let c = write(dir.path(), "lines.curve", "line: x\nline: y\nline: z\nline: x + y + z\n");
    let (code, out, err) = addel(&["analyze", "--curve", &c, "--cap", "4"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("plus-one generated with exponents (2, 2) and level 2"), "{out}");
    let (code, _, err) = addel(&["delete", "--curve", &fixture("octic.curve"), "--conic", "x^2 + y^2 - z^2", "--cap", "8"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn deletion_reports_the_defect() {
    let (code, out, _) = addel(&["delete", "--curve", &fixture("degree14.curve"), "--conic", "x^2 + 2*x*y + y^2 + x*z", "--json"]);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&out).unwrap();
    let Payload::Triple(t) = r.result else { panic!() };
    assert_eq!((t.intersection_count, t.epsilon.total, t.k), (10, 4, 14));
    assert_eq!(t.target.class.to_string(), "free with exponents (4, 7)");
    assert!(t.agreement);
}

#[test]
fn modular_addition_matches_rational() {
    let octic = fixture("octic.curve");
    let conic = "x^2 + 3*y^2 + 7*x*y - x*z - 2*y*z";
    let parse = |args: &[&str]| {
        let (code, out, _) = addel(args);
        assert_eq!(code, 0);
        let r: Report = serde_json::from_str(&out).unwrap();
        r
    };
    let q = parse(&["add", "--curve", &octic, "--conic", conic, "--json"]);
    let p = parse(&["add", "--curve", &octic, "--conic", conic, "--json", "--modular", "--seed", "4"]);
    assert_eq!(p.field.mode, "modular");
    assert_eq!(p.field.agreeing, 2);
    let (Payload::Triple(a), Payload::Triple(b)) = (q.result, p.result) else { panic!() };
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_eq!(a.prediction.case, "addition/odd/neither");
}

#[test]
fn human_and_json_agree() {
    let octic = fixture("octic.curve");
    let (_, human, _) = addel(&["analyze", "--curve", &octic]);
    let (_, json, _) = addel(&["analyze", "--curve", &octic, "--json"]);
    let r: Report = serde_json::from_str(&json).unwrap();
    let Payload::Analyze(a) = r.result else { panic!() };
    assert!(human.contains(&format!("graded dimensions: {:?}", a.dims)));
    assert!(human.contains(&format!("generator degrees: {:?}", a.resolution.generators)));
    assert!(human.contains(&format!("total tjurina number: {}", a.total_tjurina.unwrap())));
    for c in &a.constraints {
        assert!(human.contains(&format!("count = {}, epsilon = {}", c.count, c.epsilon)));
    }
}

#[test]
fn search_output_is_byte_identical() {
    let args = ["search", "--modular", "--trials", "60", "--seed", "7", "--json"];
    let (code, a, _) = addel(&args);
    let (_, b, _) = addel(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let last: Report = serde_json::from_str(a.lines().last().unwrap()).unwrap();
    assert!(last.elapsed_ms.is_none());
    let Payload::Search(s) = last.result else { panic!() };
    assert_eq!(a.lines().count(), s.free + s.plus_one_generated + 1);
}

#[test]
fn corrupted_fixture_is_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    // the nonic with y + z replaced by y + 2z is no longer free
    let text = std::fs::read_to_string(fixture("nonic.curve")).unwrap().replace("y + z", "y + 2*z");
    write(dir.path(), "nonic.curve", &text);
    let fixtures = dir.path().display().to_string();
    let (code, out, _) = addel(&["paper-suite", "--fixtures", &fixtures, "--modular", "1000003"]);
    assert_eq!(code, 1);
    assert!(out.contains("8 passed, 1 failed"), "{out}");
    assert!(out.contains("[FAIL] 5."), "{out}");
}
