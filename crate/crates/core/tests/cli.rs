use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn breuil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_breuil")).args(args).output().unwrap()
}

fn breuil_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_breuil"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn data(name: &str) -> String {
    dir("data").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str, args: &[&str]) {
    let want = std::fs::read_to_string(dir("golden").join(format!("{}.out", name))).unwrap();
    let first = breuil(args);
    assert_eq!(first.status.code(), Some(0), "{}: {}", name, String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8(first.stdout.clone()).unwrap(), want, "{}", name);
    let second = breuil(args);
    assert_eq!(first.stdout, second.stdout, "{} is not deterministic", name);
}

#[test]
fn golden_outputs() {
    let rank2 = data("rank2.txt");
    let isogeny = data("isogeny.txt");
    let relative = data("relative.txt");
    golden("validate-isogeny", &["validate", &isogeny]);
    golden("special-fiber-relative", &["special-fiber", &relative]);
    golden("special-fiber-relative-kv", &["--format", "kv", "special-fiber", &relative]);
    golden("display-rank2", &["display", &rank2]);
    golden("display-rank2-kv", &["--format", "kv", "display", &rank2]);
    golden("solve-iso-rank2", &["solve-iso", &rank2]);
    golden("solve-iso-rank2-kv", &["--format", "kv", "solve-iso", &rank2]);
    golden("module-isogeny", &["module", &isogeny]);
    golden("module-isogeny-kv", &["--format", "kv", "module", &isogeny]);
    golden("nu-p5-a3", &["nu", "--p", "5", "--a", "3"]);
}

#[test]
fn stdin_matches_file() {
    let path = data("rank2.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let from_file = breuil(&["display", &path]);
    let from_stdin = breuil_stdin(&["display", "-"], &text);
    assert_eq!(from_file.stdout, from_stdin.stdout);
    assert_eq!(from_stdin.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let bad_frame = "[frame]\np = 3\ne = 1\na = 2\nN = 6\nE = u + 1\n";
    let out = breuil_stdin(&["validate"], bad_frame);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid = false"));

    let out = breuil_stdin(&["display"], "[frame]\np = three\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = breuil(&["solve-iso", &data("relative.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not congruent"));

    let out = breuil(&["display", "/nonexistent/input.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = breuil(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("pass")).count(), 10, "{}", text);
}
