//! End-to-end tests of the `varlam` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn varlam(args: &[&str]) -> Output {
    run(args, None, &[])
}

fn run(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_varlam"));
    cmd.args(args)
        .env_remove("VARLAM_PRELUDE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn varlam");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(input) = stdin {
            pipe.write_all(input.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn temp_dir(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("varlam-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn successor_of_two_with_sugar() {
    let o = varlam(&["normalize", "-e", "Succ #2", "--sugar"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "#3\n");
}

#[test]
fn turner_self_application() {
    let o = varlam(&["bracket", "--algo", "turner", "-e", r"\x. x x"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "S I I\n");
    assert_eq!(stdout(&varlam(&["bracket", "-e", "Succ"])), "S B\n");
}

#[test]
fn variadic_bracket_binds_the_index() {
    let o = varlam(&[
        "bracket",
        "--algo",
        "variadic",
        "-e",
        r"\x[1..n]. x[1..n] (x[1..n])",
    ]);
    assert_eq!(stdout(&o), "\\n.VarS n (VarI n) (VarI n)\n");
    let o = varlam(&[
        "bracket",
        "--algo",
        "variadic",
        "--n",
        "2",
        "-e",
        r"\x[1..n]. x[1..n]",
    ]);
    // I_2 is eta-equal to I
    assert_eq!(stdout(&o), "\\x.x\n");
    let o = varlam(&[
        "bracket",
        "--algo",
        "variadic",
        "-e",
        r"\x[1..n]. x[1..n] x[1..n]",
    ]);
    assert_eq!(code(&o), 65);
}

#[test]
fn expand_church_unchurch() {
    assert_eq!(
        stdout(&varlam(&["expand", "--n", "2", "-e", r"\x[1..n]. x[1..n]"])),
        "\\x1 x2.x1 x2\n"
    );
    assert_eq!(stdout(&varlam(&["church", "2"])), "\\s z.s (s z)\n");
    assert_eq!(stdout(&varlam(&["church", "2", "--sugar"])), "#2\n");
    assert_eq!(stdout(&varlam(&["unchurch", "-e", "Plus #2 #3"])), "5\n");
    assert_eq!(code(&varlam(&["unchurch", "-e", "K"])), 65);
}

#[test]
fn eq_exit_codes() {
    let o = varlam(&["eq", "-e", "Plus #1 #1", "-e", "#2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "EQUAL\n"));
    let o = varlam(&["eq", "-e", "K", "-e", "S"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "NOT-EQUAL\n"));
    let o = run(&["eq"], Some("(\\x.x x) (\\x.x x) == I"), &[]);
    assert_eq!((code(&o), stdout(&o).as_str()), (2, "UNKNOWN\n"));
    let o = run(&["eq"], Some("-- two lines\nI\n\\y.y\n"), &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&varlam(&["eq", "-e", "I"])), 64);
}

#[test]
fn normalize_reports_fuel_and_size() {
    let o = varlam(&["normalize", "-e", r"(\x.x x) (\x.x x)", "--max-steps", "50"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FUEL"));
    let o = varlam(&[
        "normalize",
        "-e",
        r"(\x.x x x) (\x.x x x)",
        "--max-size",
        "200",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("SIZE"));
}

#[test]
fn trace_lists_every_step() {
    let o = varlam(&["normalize", "--trace", "--sugar", "-e", "K I #0"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 4, "{lines:?}");
    assert!(lines[0].trim_start().starts_with("0:"));
    // \x.x is also the numeral 1, so sugar prints it as #1
    assert_eq!(lines[3], "#1");
}

#[test]
fn input_sources() {
    let dir = temp_dir("input");
    let file = dir.join("t.lam");
    std::fs::write(&file, "-- a comment\n\\x y. x\n").unwrap();
    assert_eq!(
        stdout(&varlam(&["parse", file.to_str().unwrap()])),
        "\\x y.x\n"
    );
    assert_eq!(stdout(&run(&["parse"], Some("a (b c)"), &[])), "a (b c)\n");
    assert_eq!(code(&varlam(&["parse", "/definitely/not/here.lam"])), 66);
    assert_eq!(code(&varlam(&["parse", "-e", r"\x."])), 65);
}

#[test]
fn environments() {
    assert_eq!(code(&varlam(&["--no-prelude", "normalize", "-e", "K"])), 65);
    let dir = temp_dir("env");
    let defs = dir.join("defs.lam");
    std::fs::write(&defs, "Three := Succ #2 ;\n").unwrap();
    let o = varlam(&["unchurch", "--defs", defs.to_str().unwrap(), "-e", "Three"]);
    assert_eq!(stdout(&o), "3\n");

    let pre = dir.join("prelude");
    std::fs::create_dir_all(&pre).unwrap();
    std::fs::write(pre.join("prelude.lam"), "I := \\x.x ;\nK := \\x y.x ;\n").unwrap();
    let vars = [("VARLAM_PRELUDE", pre.to_str().unwrap())];
    assert_eq!(
        stdout(&run(&["normalize", "-e", "K I"], None, &vars)),
        "\\y x.x\n"
    );
    assert_eq!(code(&run(&["normalize", "-e", "Succ"], None, &vars)), 65);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&varlam(&["frobnicate"])), 64);
    assert_eq!(code(&varlam(&["normalize", "--algo", "nope"])), 64);
    assert_eq!(code(&varlam(&["check", "--suite", "nope"])), 64);
    assert_eq!(
        code(&varlam(&["--no-prelude", "check", "--suite", "kernel"])),
        64
    );
    assert_eq!(code(&varlam(&["bracket", "--n", "2", "-e", "I"])), 64);
    assert_eq!(code(&varlam(&["--help"])), 0);
    assert_eq!(code(&varlam(&["--version"])), 0);
}

#[test]
fn repl_session() {
    let script = ":def Two := Succ (Succ #0)\nTwo\n:eq Plus Two Two == #4\n:what\nK I\n:quit\nI\n";
    let o = run(&["repl", "--sugar"], Some(script), &[]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "defined Two\n#2\nEQUAL\n#0\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown command"));
}

#[test]
fn variadic_check_passes_with_counts() {
    let o = varlam(&["check", "--suite", "variadic", "--max-n", "3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("[variadic] VarK: 6 cases, 6 pass"), "{out}");
    assert!(out.lines().last().unwrap().starts_with("summary: PASS"));
}

#[test]
fn full_check_is_deterministic() {
    let a = varlam(&["check", "--suite", "all", "--max-n", "3"]);
    let b = varlam(&["check", "--suite", "all", "--max-n", "3"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a)
        .lines()
        .last()
        .unwrap()
        .starts_with("summary: PASS"));
}

#[test]
fn failing_check_exits_nonzero() {
    let o = varlam(&[
        "check",
        "--suite",
        "variadic",
        "--max-n",
        "2",
        "--max-steps",
        "5",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o)
        .lines()
        .last()
        .unwrap()
        .starts_with("summary: FAIL"));
}
