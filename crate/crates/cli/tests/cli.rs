use std::io::Write;
use std::process::{Command, Output, Stdio};

fn agcode(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_agcode"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no {key} line in:\n{text}"))
}

#[test]
fn info_klein() {
    let out = agcode(&["info", "--curve", "klein.curve"], "");
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "generators"), "3 5 7");
    assert_eq!(field(&text, "genus"), "3");
    assert_eq!(field(&text, "gaps"), "1 2 4");
    assert_eq!(field(&text, "apery"), "0 7 5");
    assert_eq!(field(&text, "points"), "23");
}

#[test]
fn build_code_sizes() {
    for (curve, delta, dim, dag) in [("gs9", "20", "37", "20"), ("klein", "4", "18", "4"), ("hermitian16", "6", "55", "6")] {
        let out = agcode(&["build-code", "--curve", curve, "--delta", delta], "");
        assert!(out.status.success());
        let text = stdout(&out);
        assert_eq!(field(&text, "dim"), dim, "{curve}");
        assert_eq!(field(&text, "dag"), dag, "{curve}");
    }
}

#[test]
fn bounds_hermitian() {
    let out = agcode(&["bounds", "--curve", "hermitian16", "--delta", "6", "--tau", "4"], "");
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "criterion 1:"), "851981");
    assert_eq!(field(&text, "criterion 2:"), "851981");
    assert_eq!(field(&text, "criterion 3:"), "3735565");
}

#[test]
fn encode_then_decode() {
    let code = ["--curve", "klein", "--delta", "4"];
    let enc = agcode(&[&["encode"][..], &code].concat(), "0 1\n9 2\n");
    assert!(enc.status.success());
    let word = stdout(&enc);
    assert_eq!(word.split_whitespace().count(), 23);

    let dec = agcode(&[&["decode", "--tau", "0"][..], &code].concat(), &word);
    assert!(dec.status.success());
    let text = stdout(&dec);
    assert!(text.starts_with("found 1 "), "{text}");
    assert_eq!(field(&text, "distance"), "0");
    assert_eq!(field(&text, "codeword"), word.trim());
    assert!(field(&text, "message").starts_with("0 1, 3 0"));
}

#[test]
fn exit_codes() {
    assert_eq!(agcode(&["info", "--curve", "nosuch"], "").status.code(), Some(1));
    assert_eq!(agcode(&["bounds", "--curve", "klein"], "").status.code(), Some(1));
    assert_eq!(agcode(&["--help"], "").status.code(), Some(0));
    let word = "1 ".repeat(22);
    let short = agcode(&["decode", "--curve", "klein", "--delta", "4", "--tau", "1"], &word);
    assert_eq!(short.status.code(), Some(2));
    let noisy = "1 2 3 4 5 6 7 0 1 2 3 4 5 6 7 0 1 2 3 4 5 6 7";
    let capped = agcode(&["decode", "--curve", "klein", "--delta", "4", "--tau", "3", "--criterion", "1", "--max-iterations", "2"], noisy);
    assert_eq!(capped.status.code(), Some(3));
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--curve", "klein", "--delta", "10", "--tau", "4", "--trials", "5", "--seed", "9", "--format", "lines"];
    let a = agcode(&args, "");
    let b = agcode(&args, "");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 14);
        assert_eq!(f[13], "1.0000");
    }
}
