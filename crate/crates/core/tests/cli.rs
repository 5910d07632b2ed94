use std::path::PathBuf;
use std::process::Command;

use clifford_obstruct::cli::RunReport;
use clifford_obstruct::obstructions::{CheckId, Verdict};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_clifford-obstruct")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

#[test]
fn exit_codes_follow_verdicts_not_format() {
    for format in ["human", "json"] {
        assert_eq!(run(&["connsum(prod(S2,S2),prod(S2,S2))", "--format", format]).0, 2);
        assert_eq!(run(&["--preset", "S4", "--format", format]).0, 0);
        assert_eq!(run(&["--input", &fixture("bad_poincare.json"), "--format", format]).0, 1);
    }
}

#[test]
fn human_report_wording() {
    let (_, out, _) = run(&["T4"]);
    assert!(out.contains("UQR-elliptic         no obstruction found"));
    assert!(!out.contains("is UQR-elliptic"));
    let (_, out, _) = run(&["connsum^15(prod(S2,S4))"]);
    assert!(out.contains("wedge_surjectivity   obstruction   k=2: cup rank 0, wedge rank 15"));
    assert!(!out.contains("UQR-elliptic"));
}

#[test]
fn check_subset() {
    let (code, out, _) = run(&["connsum(prod(S2,S2),prod(S2,S2))", "--checks", "b1,middle_split", "--format", "json"]);
    assert_eq!(code, 0);
    let report = RunReport::from_json(&out).unwrap();
    let ids: Vec<CheckId> = report.checks.iter().map(|c| c.id).collect();
    assert_eq!(ids, [CheckId::B1, CheckId::MiddleSplit]);
    assert_eq!(report.overall.uqr_elliptic_possible, Some(true));
}

#[test]
fn input_errors() {
    let (code, _, err) = run(&["prod(S2,S2"]);
    assert_eq!(code, 1);
    assert!(err.contains("position 10"), "{err}");
    let (code, _, err) = run(&["S4", "--checks", "nope"]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown check"));
    let (code, _, _) = run(&["S4", "--search", "everything"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["S4", "--preset", "S2"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&["--input", "/nonexistent/ring.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot read"));
    let (code, _, err) = run(&["--input", &fixture("bad_poincare.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("Poincaré duality"), "{err}");
}

#[test]
fn ring_file_search_block_and_seed_override() {
    let (code, out, _) = run(&["--input", &fixture("s2xs2_search.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let report = RunReport::from_json(&out).unwrap();
    assert_eq!(report.seed, 11);
    let search = report.search.as_ref().unwrap();
    assert!(search.is_certificate());
    assert_eq!(search.config.restarts, 10);
    assert_eq!(report.to_json(), out);

    let (_, out, _) = run(&["--input", &fixture("s2xs2_search.json"), "--format", "json", "--seed", "99"]);
    assert_eq!(RunReport::from_json(&out).unwrap().seed, 99);
}

#[test]
fn search_is_reproducible() {
    let args = ["prod(S2,S2)", "--search", "wedge+star+clifford", "--restarts", "4", "--seed", "17", "--format", "json"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(run(&args).1, first);
    let report = RunReport::from_json(&first).unwrap();
    assert!(report.search.unwrap().is_certificate());
    assert!(report.checks.iter().all(|c| c.verdict == Verdict::Pass));
}
