use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sfc_core::{alpha_equal, parse_scheme, parse_type, Ty};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.sfc"))
}

fn sfc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfc"))
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = sfc(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sfc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_prints_reparseable_schemes() {
    let (code, out, _) = run(&["check", path(&corpus("compose"))]);
    assert_eq!(code, 0);
    let expected = parse_scheme(
        "forall 'a. forall 'b. forall 'c. forall 'd1. forall 'd2. \
         ('b -'d1-> 'c) -{}-> ('a -'d2-> 'b) -{f: 'b -'d1-> 'c}-> \
         'a -{f: 'b -'d1-> 'c, g: 'a -'d2-> 'b}-> 'c",
    )
    .unwrap();
    let line = out.lines().find(|l| l.starts_with("compose : ")).unwrap();
    let printed = parse_scheme(line.trim_start_matches("compose : ")).unwrap();
    assert!(alpha_equal(&printed, &expected));
    for line in out.lines() {
        let (_, scheme) = line.split_once(" : ").unwrap();
        let reparsed = parse_scheme(scheme).unwrap();
        assert_eq!(sfc_core::print_scheme(&reparsed), scheme);
    }
}

#[test]
fn eval_prints_main() {
    let (code, out, _) = run(&["eval", path(&corpus("cond_true"))]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let (code, out, _) = run(&["eval", path(&corpus("snapshot"))]);
    assert_eq!((code, out.as_str()), (0, "7\n"));
}

#[test]
fn type_errors_exit_1_and_name_the_variable() {
    let file = corpus("tabs_violation");
    let (code, _, err) = run(&["check", path(&file)]);
    assert_eq!(code, 1);
    assert!(err.contains(":3:24: tabs-free-vars:"), "{err}");
    assert!(err.contains("`y`"), "{err}");

    let (code, _, err) = run(&["--json-diagnostics", "check", path(&file)]);
    assert_eq!(code, 1);
    let record: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(record["kind"], "tabs-free-vars");
    assert_eq!(record["line"], 3);
    assert_eq!(record["names"], serde_json::json!(["y"]));
}

#[test]
fn parse_errors_exit_2() {
    let file = temp_file("bad.sfc", "let f = \\x:");
    let (code, _, err) = run(&["check", path(&file)]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.sfc:1:12: parse-error:"), "{err}");
}

#[test]
fn runtime_errors_exit_3() {
    let (code, _, err) = run(&["--fuel", "5", "eval", path(&corpus("compose"))]);
    assert_eq!(code, 3);
    assert!(err.contains("fuel-exhausted"), "{err}");
}

#[test]
fn usage_errors_exit_4() {
    assert_eq!(run(&["frobnicate"]).0, 4);
    assert_eq!(run(&["check"]).0, 4);
    assert_eq!(run(&["check", "/nonexistent/file.sfc"]).0, 4);
    assert_eq!(run(&["--fuel", "0", "eval", path(&corpus("id"))]).0, 4);
    assert_eq!(run(&["eval", path(&corpus("church_bool"))]).0, 4);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn compile_writes_cpp() {
    let out = std::env::temp_dir().join(format!("sfc-cli-compose-{}.cpp", std::process::id()));
    let (code, stdout, _) = run(&["compile", path(&corpus("compose")), "-o", path(&out)]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("#include \"sfc_runtime.hpp\""));
    assert!(text.contains("struct closuret_0"));
    assert!(text.contains("int main()"));
    let _ = std::fs::remove_file(out);

    let (code, stdout, _) = run(&["compile", path(&corpus("compose"))]);
    assert_eq!(code, 0);
    assert_eq!(stdout, text);
}

#[test]
fn compile_rejects_type_constructors() {
    let (code, _, err) = run(&["compile", path(&corpus("map_type"))]);
    assert_eq!(code, 1);
    assert!(err.contains("unsupported"), "{err}");
}

#[test]
fn ast_prints_the_tree() {
    let (code, out, _) = run(&["ast", path(&corpus("id"))]);
    assert_eq!(code, 0);
    assert!(out.starts_with("let id @3:1\n  TAbs 'a @3:10\n"), "{out}");
}

#[test]
fn delta_prints_one_scope_per_lambda() {
    let (code, out, _) = run(&["delta", path(&corpus("compose"))]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[..3],
        [
            "4:3 {}",
            "4:20 {f: 'b -'d1-> 'c}",
            "4:37 {f: 'b -'d1-> 'c, g: 'a -'d2-> 'b}"
        ]
    );
    for line in lines {
        let (_, scope) = line.split_once(' ').unwrap();
        assert!(matches!(parse_type(scope), Ok(Ty::Scope(_))), "{line}");
    }
}

#[test]
fn purity_flag_rejects_plumbing() {
    let (code, _, err) = run(&["--purity", "check", path(&corpus("id"))]);
    assert_eq!(code, 1);
    assert!(err.contains("impure"), "{err}");
    assert_eq!(
        run(&["--purity", "check", path(&corpus("church_bool"))]).0,
        0
    );
}
