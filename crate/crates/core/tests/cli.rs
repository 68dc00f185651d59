use std::fs;
use std::process::{Command, Output};

fn nvt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvt"))
        .args(args)
        .env_remove("NVT_DIM")
        .env_remove("NVT_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eq_reports_through_exit_code() {
    let same = nvt(&["eq", "A0 A0'", ""]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(stdout(&same).trim(), "equal");
    let differ = nvt(&["eq", "A0", "B0"]);
    assert_eq!(differ.status.code(), Some(1));
    assert_eq!(stdout(&differ).trim(), "not equal");
}

#[test]
fn error_codes() {
    assert_eq!(nvt(&["eval", "Z9"]).status.code(), Some(2));
    assert_eq!(nvt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nvt(&["--dim", "3", "render", "A0"]).status.code(), Some(6));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = nvt(&["experiment", "ball", "--out-dir", out, "--radius", "3", "--budget", "10"]).status.code();
    assert_eq!(code, Some(5));
}

#[test]
fn element_files_feed_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let a = a.to_str().unwrap();
    assert!(nvt(&["eval", "C0 A1 p0'", "-o", a]).status.success());
    assert!(fs::read_to_string(a).unwrap().starts_with("dim 2"));

    let inv = dir.path().join("inv.txt");
    let inv = inv.to_str().unwrap();
    assert!(nvt(&["inv", a, "-o", inv]).status.success());
    let prod = nvt(&["mul", a, inv]);
    assert!(prod.status.success());
    let id = nvt(&["eval", ""]);
    assert_eq!(stdout(&prod), stdout(&id));
    assert_eq!(nvt(&["eq", inv, "p0 A1' C0'"]).status.code(), Some(0));
    assert_eq!(nvt(&["eq", a, "C0 A1 p0'"]).status.code(), Some(0));
}

#[test]
fn decompose_output_evaluates_to_input() {
    let out = nvt(&["decompose", "C0 C0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let word = text.lines().next().unwrap();
    assert_eq!(nvt(&["eq", word, "C0 C0"]).status.code(), Some(0));
    assert!(text.contains("# verified"));

    let fin = nvt(&["decompose", "--finite", "B2.1 q3"]);
    assert!(fin.status.success());
    let word = stdout(&fin).lines().next().unwrap().to_string();
    assert!(word.split_whitespace().all(|s| s[1..].starts_with('0') || s[1..].starts_with('1')));
    assert_eq!(nvt(&["eq", &word, "B2.1 q3"]).status.code(), Some(0));
}

#[test]
fn wordlength_reports_bounds() {
    let text = stdout(&nvt(&["wordlength", "C0 C0", "--radius", "2"]));
    assert!(text.contains("upper_bound 11"));
    assert!(text.contains("exact 2"));
    let text = stdout(&nvt(&["wordlength", "C0 C0 C0", "--radius", "2"]));
    assert!(text.contains("exact > 2"));
}

#[test]
fn experiments_write_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases = [
        ("c0", "n,", vec!["--n-max", "4"]),
        ("distortion", "n,word_length,blocks,vertical_only,ratio", vec!["--n-max", "3"]),
        ("counts", "n,catalan,count,stirling,stirling_ratio,leading,genericity", vec!["--n-max", "6"]),
        ("ball", "key,length,blocks,depth,upper_bound", vec!["--radius", "2"]),
    ];
    for (name, header, extra) in cases {
        let mut args = vec!["experiment", name, "--out-dir", out];
        args.extend(extra);
        assert!(nvt(&args).status.success(), "{name}");
        let csv = fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        assert!(csv.lines().next().unwrap().starts_with(header), "{name}");
        assert!(csv.lines().count() > 2, "{name}");
        let manifest = fs::read_to_string(dir.path().join("manifest.txt")).unwrap();
        assert!(manifest.contains(&format!("experiment = {name}")));
    }
}

#[test]
fn render_matches_fixture() {
    let out = nvt(&["render", "(0 (1 L (0 L L)) (1 (1 L L) L))"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), include_str!("fixtures/mixed_tree.txt"));
}

#[test]
fn render_formats() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("d.svg");
    let args = ["render", "--format", "svg", "(0 L L) | [1, 0] | (1 L L)", "-o", svg.to_str().unwrap()];
    assert!(nvt(&args).status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("<rect").count(), 4);

    let tree = stdout(&nvt(&["render", "--tree", "(0 L (1 L L))"]));
    assert_eq!(tree, "+ 0\n| - 0\n| + 1\n| | - 1\n| | - 2\n");
}

#[test]
fn dimension_flag_and_env() {
    let one = stdout(&nvt(&["--dim", "1", "eval", "A0"]));
    assert!(one.starts_with("dim 1"));
    let env = Command::new(env!("CARGO_BIN_EXE_nvt"))
        .args(["eval", "A0"])
        .env("NVT_DIM", "3")
        .output()
        .unwrap();
    assert!(stdout(&env).starts_with("dim 3"));
}
