use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn polyglue(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polyglue"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn catalog(name: &str) -> String {
    let o = polyglue(&["catalog", name], "");
    assert_eq!(o.status.code(), Some(0));
    stdout(&o)
}

fn json(args: &[&str], stdin: &str) -> (Option<i32>, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = polyglue(&all, stdin);
    let v = serde_json::from_str(&stdout(&o)).expect("json output");
    (o.status.code(), v)
}

#[test]
fn quarter_cube_classification() {
    let (code, v) = json(&["classify", "--expect", "manifold", "--expect", "distinguished"], &catalog("cube-quarter"));
    assert_eq!(code, Some(0));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["manifold"], true);
    assert_eq!(v["distinguished"], true);
    assert_eq!(v["special"], true);
    assert_eq!(v["homology"]["torsion"], serde_json::json!([2, 2]));
    assert_eq!(v["homology"]["betti"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(v["counts"]["V_q"], 2);
    assert_eq!(v["edge_cycles"], serde_json::json!([3, 3, 3, 3]));
}

#[test]
fn negative_answers_exit_one() {
    let o = polyglue(&["classify", "--expect", "manifold"], &catalog("octahedron-singular"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected manifold"));
    let o = polyglue(&["classify", "--expect", "special"], &catalog("lens-3-1"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lens_two_minimizes_to_gamma_empty() {
    let (code, v) = json(&["minimize"], &catalog("lens-2-1"));
    assert_eq!(code, Some(0));
    assert_eq!(v["outcome"], "GammaEmpty");
    let text = stdout(&polyglue(&["minimize"], &catalog("lens-2-1")));
    assert!(text.starts_with("# outcome: GammaEmpty\n"));
}

#[test]
fn chord_enrichment_is_alike() {
    let dir = tempfile::tempdir().unwrap();
    let mut current = catalog("cube-quarter");
    for face in ["xp", "yp", "zp"] {
        let o = polyglue(&["move", "insert-chord", "--face", face, "--from", "0", "--to", "2"], &current);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        current = stdout(&o);
    }
    assert_eq!(current.matches("\nface ").count(), 12);
    let a = dir.path().join("a.pif");
    let b = dir.path().join("b.pif");
    std::fs::write(&a, catalog("cube-quarter")).unwrap();
    std::fs::write(&b, &current).unwrap();
    let o = polyglue(&["alike", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("alike"));

    std::fs::write(&b, catalog("cube-half")).unwrap();
    let o = polyglue(&["alike", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn moves_round_trip_through_the_cli() {
    let start = catalog("cube-quarter");
    let o = polyglue(&["move", "insert-dangling", "--face", "ym", "--side", "1"], &start);
    assert_eq!(o.status.code(), Some(0));
    let o = polyglue(&["move", "remove", "--label", "stub"], &stdout(&o));
    assert_eq!(o.status.code(), Some(0));
    let o = polyglue(&["normalize"], &stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.pif");
    let b = dir.path().join("b.pif");
    std::fs::write(&a, &start).unwrap();
    std::fs::write(&b, stdout(&o)).unwrap();
    let o = polyglue(&["alike", a.to_str().unwrap(), b.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));

    let o = polyglue(&["move", "remove", "--label", "e0_1"], &start);
    assert_eq!(o.status.code(), Some(2));
    let o = polyglue(&["--seed", "3", "move", "random", "--count", "2"], &start);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&polyglue(&["--seed", "3", "move", "random", "--count", "2"], &start)));
}

#[test]
fn input_errors_exit_two_with_locations() {
    let o = polyglue(&["validate"], "face N : +a +b\nface S : -b -a\npair N N offset 0\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("paired with itself"), "{err}");

    let o = polyglue(&["validate"], "face N : +a +b\nface S : -b -a\npair N S offset 7\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3, column 17"));

    let o = polyglue(&["validate", "--input", "/nonexistent/file.pif"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = polyglue(&["catalog", "lens-4-4"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_export_is_deterministic() {
    let cube = catalog("cube-quarter");
    let first = stdout(&polyglue(&["export", "dot"], &cube));
    let second = stdout(&polyglue(&["export", "dot"], &cube));
    assert_eq!(first, second);
    assert_eq!(first.matches(" -- ").count(), 12);
    assert_eq!(first.matches("order 4").count(), 8);
    let mut colors: Vec<&str> = first.split("color=\"").skip(1).map(|s| &s[..7]).collect();
    colors.sort_unstable();
    colors.dedup();
    assert_eq!(colors.len(), 4);

    let lens = stdout(&polyglue(&["export", "dot"], &catalog("lens-3-1")));
    assert_eq!(lens.matches(" -- ").count(), 3);
}

#[test]
fn json_export_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = polyglue(
        &["export", "json", "--output", out.to_str().unwrap()],
        &catalog("dodecahedral"),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["counts"]["E_q"], 10);
    assert_eq!(v["counts"]["V_q"], 5);
    assert_eq!(v["homology"]["torsion"], serde_json::json!([]));
}

#[test]
fn search_over_a_named_ball() {
    let (code, v) = json(&["search", "--ball", "lens-4"], "");
    assert_eq!(code, Some(0));
    assert_eq!(v["total"], 4);
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    let (_, sampled) = json(&["--limit", "10", "--seed", "5", "search", "--ball", "octahedron"], "");
    assert_eq!(sampled["limit_exceeded"], true);
    assert_eq!(sampled["evaluated"], 10);
    let (_, again) = json(&["--limit", "10", "--seed", "5", "search", "--ball", "octahedron"], "");
    assert_eq!(sampled, again);
}

#[test]
fn read_only_commands_run_on_every_entry() {
    for name in ["cube-none", "annulus-3", "lens-5-2", "octahedron-singular"] {
        let doc = catalog(name);
        for cmd in ["validate", "info", "normalize", "scar", "links", "homology"] {
            let o = polyglue(&[cmd], &doc);
            assert_eq!(o.status.code(), Some(0), "{cmd} on {name}");
            let (code, v) = json(&[cmd], &doc);
            assert_eq!(code, Some(0));
            assert_eq!(v["schema_version"], 1);
        }
    }
    let list = stdout(&polyglue(&["catalog"], ""));
    assert!(list.lines().any(|l| l == "dodecahedral"));
}
