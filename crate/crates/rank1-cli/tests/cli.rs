//! End-to-end coverage of the `rank1` binary: exit codes, both output
//! formats, stdin specs, and the verify round trip.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rank1"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rank1-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_spec(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

const CHACON: &str = "period:\nstage r=3 s=0,1\n";
const MIRROR: &str = "period:\nstage r=3 s=1,0\n";

#[test]
fn check_iso_distinguishes_the_chacon_family() {
    let dir = workdir("iso");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let mirror = write_spec(&dir, "mirror.spec", MIRROR);
    // eventually agreeing preambles over a common tail
    let a = write_spec(
        &dir,
        "a.spec",
        "preamble:\nstage r=3 s=0,1\nstage r=3 s=1,0\nperiod:\nstage r=3 s=0,1\n",
    );
    let b = write_spec(
        &dir,
        "b.spec",
        "preamble:\nstage r=3 s=1,0\nstage r=3 s=0,1\nperiod:\nstage r=3 s=0,1\n",
    );

    let output = run(&["check-iso", &a, &b, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("answer: Yes"), "{text}");
    assert!(text.contains("rule: Cor2.3"), "{text}");
    assert!(text.contains("agree_from: 2"), "{text}");

    let output = run(&["check-iso", &chacon, &mirror, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("answer: No"), "{text}");
    assert!(text.contains("rule: Thm3.1"), "{text}");
    assert!(text.contains("certificate.0.s: 0,1,0,0,1,1,0,1"), "{text}");
    assert!(text.contains("certificate.0.t: 1,0,1,1,0,0,1,0"), "{text}");
}

#[test]
fn check_disjoint_exit_codes() {
    let dir = workdir("disjoint");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let mirror = write_spec(&dir, "mirror.spec", MIRROR);

    let output = run(&["check-disjoint", &chacon, &mirror, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).contains("rule: Cor3.5-2'"));

    // a spec is never disjoint from itself
    let output = run(&["check-disjoint", &chacon, &chacon]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn check_msj_three_worked_cases() {
    let dir = workdir("msj");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let constant = write_spec(&dir, "constant.spec", "period:\nstage r=3 s=0,0\n");
    let even = write_spec(&dir, "even.spec", "period:\nstage r=2 s=2\n");

    let output = run(&["check-msj", &chacon, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).contains("rule: Thm4.1-d'"));

    let output = run(&["check-msj", &constant, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(2));
    let text = stdout(&output);
    assert!(text.contains("not_applicable: c"), "{text}");

    let output = run(&["check-msj", &even, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("rule: Cor4.6"), "{text}");
    assert!(text.contains("ed.0.holds: false"), "{text}");
}

#[test]
fn hypothesis_failures_exit_depth_limited() {
    let dir = workdir("hypotheses");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let doubling = write_spec(&dir, "doubling.spec", "period:\nstage r=2 s=0\n");

    // not commensurate and no height alignment: the engine cannot conclude
    let output = run(&["check-disjoint", &chacon, &doubling, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(2));
    let text = stdout(&output);
    assert!(text.contains("answer: DepthLimited"), "{text}");
    assert!(text.contains("reason: "), "{text}");

    let output = run(&["check-iso", &chacon, &doubling]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn ergodic_exit_codes_and_flags() {
    let dir = workdir("ergodic");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let even = write_spec(&dir, "even.spec", "period:\nstage r=2 s=2\n");
    let limited = write_spec(&dir, "limited.spec", "preamble:\nstage r=2 s=1\n");

    assert_eq!(
        run(&["ergodic", &chacon, "--upto", "5"]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["ergodic", &even, "--d", "2"]).status.code(), Some(1));
    assert_eq!(
        run(&["ergodic", &limited, "--d", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["ergodic", &chacon]).status.code(), Some(64));
    assert_eq!(
        run(&["ergodic", &chacon, "--d", "2", "--upto", "3"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        run(&["ergodic", &chacon, "--d", "1"]).status.code(),
        Some(64)
    );
}

#[test]
fn validate_and_parse_errors() {
    let dir = workdir("validate");
    let good = write_spec(&dir, "good.spec", CHACON);
    assert_eq!(run(&["validate", &good]).status.code(), Some(0));

    let bad = write_spec(&dir, "bad.spec", "period:\nstage r=3 s=0\n");
    let output = run(&["validate", &bad]);
    assert_eq!(output.status.code(), Some(65));
    assert!(stderr(&output).contains("line 2"), "{}", stderr(&output));

    let empty = write_spec(&dir, "empty.spec", "");
    assert_eq!(run(&["validate", &empty]).status.code(), Some(65));

    let missing = dir.join("missing.spec");
    assert_eq!(
        run(&["validate", &missing.to_string_lossy()]).status.code(),
        Some(65)
    );
}

#[test]
fn generate_and_labels_output() {
    let dir = workdir("generate");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);

    let output = run(&["generate", &chacon, "--depth", "2", "--format", "machine"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("h.2: 13"), "{text}");
    assert!(text.contains("v.1: 0010"), "{text}");
    assert!(text.contains("v.2: 0010001010010"), "{text}");

    let output = run(&[
        "labels", &chacon, "--level", "2", "--offset", "6", "--format", "machine",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("lambda.1: 2"), "{text}");
    assert!(text.contains("kappa.1: 0"), "{text}");

    // the single spacer position of v_2
    let output = run(&[
        "labels", &chacon, "--level", "2", "--offset", "9", "--format", "machine",
    ]);
    assert!(stdout(&output).contains("lambda.1: inf"));

    // --spec is accepted as an alias for the positional path
    let output = run(&["labels", "--spec", &chacon, "--level", "2", "--offset", "6"]);
    assert_eq!(output.status.code(), Some(0));

    // a cap too small for the requested depth is a depth-limited outcome
    let output = run(&["generate", &chacon, "--depth", "10", "--cap", "100"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn stdin_spec_path() {
    let mut child = bin()
        .args(["generate", "-", "--depth", "1", "--format", "machine"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(CHACON.as_bytes())
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("v.1: 0010"));
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = workdir("verify");
    let chacon = write_spec(&dir, "chacon.spec", CHACON);
    let mirror = write_spec(&dir, "mirror.spec", MIRROR);

    let output = run(&["check-iso", &chacon, &mirror, "--format", "machine"]);
    let machine = stdout(&output);
    let report = dir.join("verdict.txt");
    std::fs::write(&report, &machine).unwrap();
    let output = run(&["verify", &report.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
    assert!(stdout(&output).contains("verify: ok"));

    // flip the claimed-incompatible pair into an equal pair
    let tampered = machine.replace(
        "certificate.0.t: 1,0,1,1,0,0,1,0",
        "certificate.0.t: 0,1,0,0,1,1,0,1",
    );
    assert_ne!(machine, tampered);
    let report = dir.join("tampered.txt");
    std::fs::write(&report, &tampered).unwrap();
    let output = run(&["verify", &report.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout(&output).contains("verify: FAILED"));

    // disjointness evidence re-verifies too, including the modular traces
    let even_a = write_spec(&dir, "even_a.spec", "period:\nstage r=4 s=0,2,0\n");
    let even_b = write_spec(&dir, "even_b.spec", "period:\nstage r=4 s=2,0,0\n");
    let output = run(&["check-disjoint", &even_a, &even_b, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(1)); // shared cyclic factor
    let report = dir.join("disjoint.txt");
    std::fs::write(&report, stdout(&output)).unwrap();
    let output = run(&["verify", &report.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));

    // aligned verdicts carry stage witnesses relative to the alignment
    let padded = write_spec(
        &dir,
        "padded.spec",
        "preamble:\nstage r=2 s=2\nperiod:\nstage r=3 s=0,1\n",
    );
    let output = run(&["check-iso", &chacon, &padded, "--format", "machine"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let machine = stdout(&output);
    assert!(machine.contains("alignment.n: 1"), "{machine}");
    let report = dir.join("aligned.txt");
    std::fs::write(&report, &machine).unwrap();
    let output = run(&["verify", &report.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(0), "{}", stdout(&output));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["check-iso", "only-one.spec"]).status.code(), Some(64));
    assert_eq!(
        run(&["generate", "a.spec", "--depth"]).status.code(),
        Some(64)
    );
    assert_eq!(run(&["labels", "a.spec"]).status.code(), Some(64));
    assert_eq!(run(&["help"]).status.code(), Some(0));
}
