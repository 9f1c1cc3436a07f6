use std::path::PathBuf;
use std::process::Command;

use liecalc::algebroid::fixtures;
use liecalc::cli::{load, run_command, Outcome};

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.push("../../fixtures");
    path.push(format!("{name}.alg"));
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["liecalc"];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let out = run(&argv);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

#[test]
fn shipped_files_match_builtins() {
    for name in [
        "ab2",
        "aff1",
        "sl2",
        "sl2-broken",
        "heis",
        "tan1",
        "tan2",
        "bla",
        "bla-x",
        "ab2-line",
        "ati",
    ] {
        let def = load(fixture(name).as_ref()).unwrap();
        let p = fixtures::by_name(name).unwrap();
        assert_eq!(def.presentation, p, "{name}");
        assert_eq!(def.kernel_frame, fixtures::kernel_frame(&p), "{name}");
        assert_eq!(
            def.connection.map(|c| c.lambda),
            fixtures::connection(&p),
            "{name}"
        );
    }
}

#[test]
fn sl2_examples() {
    let out = run(&["verify", &fixture("sl2")]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("result: PASS\n"));

    let (v, code) = json(&["cohomology", &fixture("sl2"), "--k", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["witnesses"]["dim_H1"], 0);

    let out = run(&["verify", &fixture("sl2-broken")]);
    assert_eq!(out.code, 1);
    assert!(out
        .stdout
        .contains("check jacobi: FAIL\n  at (h, e, f): -2*e\n"));
}

#[test]
fn json_reports() {
    let (v, code) = json(&["verify", &fixture("sl2-broken")]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    assert_eq!(v["command"], format!("verify {}", fixture("sl2-broken")));
    let jacobi = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "jacobi")
        .unwrap();
    assert_eq!(jacobi["residuals"][0]["location"], "(h, e, f)");
    assert!(v.get("seed").is_none());

    let (v, _) = json(&["deform-check", &fixture("tan2"), "--seed", "5"]);
    assert_eq!(v["seed"], 5);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["diff-witness", &fixture("aff1"), "--diff", "ad_top"]).code,
        0
    );
    let out = run(&["diff-witness", &fixture("aff1"), "--diff", "nonexact2"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("NONE_WITHIN_BOUND"));

    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["verify"]).code, 2);
    assert_eq!(run(&["cohomology", &fixture("sl2"), "--k", "two"]).code, 2);
    assert_eq!(run(&["verify", "/nonexistent.alg"]).code, 2);
    assert_eq!(
        run(&["diff-validate", &fixture("aff1"), "--diff", "nope"]).code,
        2
    );
    assert_eq!(run(&["exceptional", &fixture("tan1"), "--k", "1"]).code, 2);
    assert_eq!(run(&["cohomology", &fixture("ati"), "--k", "1"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn syntax_errors_are_reported_with_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(
        &path,
        r#"{"base": ["x"], "frame": ["e1"], "anchor": [["x^(-1)"]], "brackets": {}}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("SYNTAX at column 3"), "{}", out.stderr);

    std::fs::write(
        &path,
        r#"{"base": ["x"], "frame": ["e1"], "anchor": [["y"]], "brackets": {}}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("y"));
}

#[test]
fn subcommands_on_named_items() {
    let out = run(&["bracket", &fixture("aff1"), "e1", "e2"]);
    assert!(out.stdout.contains("bracket: e2\n"));

    let (v, code) = json(&["charpair", &fixture("ati"), "--pair", "tampered"]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["name"], "cocycle");
    assert_eq!(v["checks"][0]["passed"], false);
    assert_eq!(
        run(&["charpair", &fixture("ati"), "--pair", "from_ad_xe3"]).code,
        0
    );

    let (v, code) = json(&[
        "transitive",
        &fixture("ati"),
        "--tensor",
        "pi1",
        "--diff",
        "ad_xe3",
        "--other",
        "ad_e2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["witnesses"]["Lambda"], "x*e1");
    assert_eq!(v["witnesses"]["tau"], "e2 - x*e3");

    let (v, code) = json(&["exceptional", &fixture("bla-x"), "--k", "top+1"]);
    assert_eq!(code, 1);
    let c = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "pi/classification")
        .unwrap();
    assert_eq!(c["residuals"][0]["location"], "x = (1)");
    assert_eq!(
        run(&["exceptional", &fixture("ab2-line"), "--k", "top+1"]).code,
        0
    );

    for (file, args) in [
        ("ati", vec!["deform-check", "--diff", "ad_xe3"]),
        ("heis", vec!["deform-check", "--tensor", "e1"]),
        ("tan1", vec!["diff-validate"]),
        ("tan2", vec!["jet"]),
        ("ati", vec!["jetgroup-test", "--points", "10", "--k", "2"]),
        ("tan1", vec!["exceptional", "--k", "0", "--bound", "3"]),
        ("ati", vec!["cohomology", "--k", "1", "--bound", "1"]),
    ] {
        let f = fixture(file);
        let mut argv = vec![args[0], f.as_str()];
        argv.extend_from_slice(&args[1..]);
        let out = run(&argv);
        assert_eq!(out.code, 0, "{argv:?}: {}{}", out.stdout, out.stderr);
    }
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["--json", "deform-check", "--seed", "11"],
        vec!["--json", "jetgroup-test", "--points", "20", "--seed", "3"],
        vec!["transitive", "--diff", "ad_xe3", "--other", "ad_e2"],
    ] {
        let f = fixture("ati");
        let mut argv = args.clone();
        argv.insert(if args[0] == "--json" { 2 } else { 1 }, &f);
        assert_eq!(run(&argv), run(&argv));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_liecalc");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let out = status(&["verify", &fixture("sl2")]);
    assert_eq!(out.status.code(), Some(0));
    let out = status(&["verify", &fixture("sl2-broken")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("(h, e, f)"));
    let out = status(&["verify", "missing.alg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}
