//! End-to-end tests driving the compiled binary.

use std::process::{Command, Output};

fn somos5(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_somos5"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn prime_five_reports_orders_csv() {
    let out = somos5(&["--format", "csv", "prime", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().collect::<Vec<_>>(),
        vec!["p,method,ord_P,ord_R,divides", "5,CurveOrder,10,5,true"]
    );
}

#[test]
fn prime_seventeen_is_a_direct_scan_miss() {
    let out = somos5(&["--format", "json", "prime", "17"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["method"], "DirectScan");
    assert_eq!(v["divides"], false);
}

#[test]
fn composite_input_fails_cleanly() {
    let out = somos5(&["prime", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
}

#[test]
fn density_prefix_matches_published_table() {
    let out = somos5(&["--format", "csv", "density", "--limit", "100", "--checkpoints", "10,100"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).lines().collect::<Vec<_>>(),
        vec!["x,pi,pi_prime,ratio", "10,4,3,0.750000", "100,25,12,0.480000"]
    );
}

#[test]
fn checkpoint_beyond_limit_is_a_usage_error() {
    let out = somos5(&["density", "--limit", "50", "--checkpoints", "10,100"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn theory_prints_the_exact_density() {
    let out = somos5(&["theory"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("5087/10752"), "missing exact fraction:\n{text}");
    assert!(text.contains("0.473121"), "missing decimal expansion:\n{text}");
}

#[test]
fn bogus_suite_is_a_usage_error() {
    let out = somos5(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn somos_suite_passes() {
    let out = somos5(&["verify", "--suite", "somos"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("first twelve terms"));
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--format", "csv", "density", "--limit", "1000"];
    let first = somos5(&args);
    let second = somos5(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let args = ["--format", "json", "prime", "11"];
    let first = somos5(&args);
    let second = somos5(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn dump_f8_lists_sixty_five_coefficients() {
    let out = somos5(&["theory", "--dump-f8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65, "one coefficient per degree, 0 through 64");
    assert_eq!(*lines.last().unwrap(), "1", "monic");
    for line in &lines {
        let digits = line.strip_prefix('-').unwrap_or(line);
        assert!(!digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()), "{line}");
    }
}

#[test]
fn dump_group_emits_the_whole_table() {
    let out = somos5(&["theory", "--dump-group", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 8192);
    assert_eq!(lines[0], "a,b,c,d,e,f");
    assert_eq!(lines[1], "1,0,0,1,0,0", "the identity sorts first");
    let out = somos5(&["theory", "--dump-group", "7"]);
    assert_eq!(out.status.code(), Some(2));
}
