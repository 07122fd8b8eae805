use std::io::Write;
use std::process::{Command, Output, Stdio};

fn trades(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_trades"))
        .args(args)
        .env_remove("TRADE_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_accepts_emitted_base_trade() {
    let emitted = trades(&["catalog", "emit", "base-8-3-2"], "");
    assert!(emitted.status.success());
    let v = trades(&["verify", "--steiner", "--d", "3"], &stdout(&emitted));
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v), "valid\n");
}

#[test]
fn verify_reports_violations() {
    let emitted = stdout(&trades(&["catalog", "emit", "base-8-3-2"], ""));
    let broken = emitted.replacen("0 1 2\n", "0 1 4\n", 1);
    let v = trades(&["verify"], &broken);
    assert_eq!(v.status.code(), Some(1));
    let text = stdout(&v);
    assert!(text.starts_with("invalid\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with('[')));
}

#[test]
fn solve_cites_the_open_case() {
    let o = trades(&["solve", "--d", "5", "--v", "18"], "");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "OpenInPaper (Theorem 19)\n");
    let o = trades(&["solve", "--d", "4", "--v", "9", "--format", "json"], "");
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["status"], "Exists");
    assert_eq!(doc["citation"], "Main Theorem I(a)");
}

#[test]
fn convert_round_trips_byte_for_byte() {
    for name in ["base-8-3-2", "trade-16", "pair-k33"] {
        let text = stdout(&trades(&["catalog", "emit", name], ""));
        let json = stdout(&trades(&["convert", "--format", "json"], &text));
        assert!(json.trim_start().starts_with('{'));
        let back = trades(&["convert"], &json);
        assert_eq!(stdout(&back), text, "{name}");
    }
}

#[test]
fn construct_then_decompose() {
    let o = trades(&["construct", "--d", "3", "--v", "26"], "");
    assert!(o.status.success());
    let d = trades(&["decompose"], &stdout(&o));
    assert!(d.status.success());
    let pieces = stdout(&d).matches("trade mu=3").count();
    assert_eq!(pieces, 3);
    let declined = trades(&["construct", "--d", "3", "--v", "55"], "");
    assert_eq!(declined.status.code(), Some(1));
    assert!(declined.stdout.is_empty());
    assert!(String::from_utf8_lossy(&declined.stderr).contains("Theorem 14"));
}

#[test]
fn search_prints_status_line() {
    let o = trades(&["search", "--steiner", "--mu", "3", "--k", "2", "--t", "1", "--volume", "3"], "");
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.matches("trade mu=3").count(), 2);
    assert!(text.ends_with("exhausted=true classes=2\n"));
}

#[test]
fn budget_from_environment_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_trades"))
        .args(["latin", "--d", "5", "--m", "7"])
        .env("TRADE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inconclusive"));
}

#[test]
fn one_based_output_shifts_labels() {
    let zero = stdout(&trades(&["catalog", "emit", "base-8-3-2"], ""));
    let one = stdout(&trades(&["catalog", "emit", "base-8-3-2", "--one-based"], ""));
    assert!(zero.contains("\n0 1 2\n"));
    assert!(one.contains("\n1 2 3\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(trades(&[], "").status.code(), Some(2));
    assert_eq!(trades(&["construct", "--d", "3"], "").status.code(), Some(2));
    assert_eq!(trades(&["verify", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(trades(&["--help"], "").status.code(), Some(0));
}
