use std::process::Command;

fn lenscheck(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lenscheck")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_prints_witness() {
    let (code, stdout, _) = lenscheck(&["classify", "--n", "7"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "NotObstructed (witness: Figure 2 non-coherent banding)");
}

#[test]
fn d_prints_exact_value() {
    let (code, stdout, _) = lenscheck(&["d", "--p", "3", "--q", "1", "--spin", "0"]);
    assert_eq!((code, stdout.trim()), (0, "1/2"));
}

#[test]
fn theorem_gate_exits_zero() {
    let (code, stdout, _) = lenscheck(&["scan", "--from", "-200", "--to", "200", "--check-theorem"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("not obstructed: -6 -2 -1 1 2 3 4 7"));
}

#[test]
fn bad_arguments_exit_two_on_stderr() {
    let (code, stdout, stderr) = lenscheck(&["d", "--p", "6", "--q", "4"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("gcd"));
    assert_eq!(lenscheck(&["band", "--n", "4", "--coherent", "--non-coherent"]).0, 2);
}

#[test]
fn json_scan_is_stable() {
    let (code, first, _) = lenscheck(&["--json", "scan", "--from", "-10", "--to", "10"]);
    assert_eq!(code, 0);
    let (_, second, _) = lenscheck(&["scan", "--from", "-10", "--to", "10", "--json"]);
    assert_eq!(first, second);
    let value: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(value["command"], "scan");
    assert_eq!(value["result"]["summary"]["matches_theorem"], true);
}
