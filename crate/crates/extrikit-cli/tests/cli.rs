use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extrikit"))
        .args(args)
        .env_remove("EXTRIKIT_FIELD")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn global_dimension() {
    let o = run(&["gldim", "twoterm_a2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("gldim: 1"));
    let o = run(&["gldim", "pt", "--nmax", "6"]);
    assert!(stdout(&o).contains("≥ 6"), "{}", stdout(&o));
}

#[test]
fn findings_only_fail_under_strict() {
    let o = run(&["balance", "a4sub", "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(3[-1], [4;3], 1)"), "{}", stdout(&o));
    assert_eq!(run(&["--strict", "balance", "a4sub", "--nmax", "2"]).status.code(), Some(1));
    assert_eq!(run(&["--strict", "balance", "twoterm_a2", "--nmax", "2"]).status.code(), Some(0));
}

#[test]
fn negative_cross_check() {
    let o = run(&["ext", "pt", "--neg", "3", "--cross-check"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("agree"));
    assert!(s.contains("E_II^-3(T, T) = 1"));
}

#[test]
fn depth_limit_and_unknown_bundles() {
    assert_eq!(run(&["gldim", "pt", "--nmax", "9"]).status.code(), Some(2));
    assert_eq!(run(&["--allow-large", "gldim", "pt", "--nmax", "9"]).status.code(), Some(0));
    assert_eq!(run(&["validate", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn prime_field_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_extrikit"))
        .args(["gldim", "twoterm_a2"])
        .env("EXTRIKIT_FIELD", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("gldim: 1"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let dir = std::env::temp_dir().join(format!("extrikit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("report.json");
    let read = || {
        assert!(run(&["report", "twoterm_k", "--nmax", "2", "--json", p.to_str().unwrap()]).status.success());
        std::fs::read(&p).unwrap()
    };
    let (a, b) = (read(), read());
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], "extrikit-report/1");
    assert_eq!(v["violations"], serde_json::json!([]));
    std::fs::remove_dir_all(&dir).ok();
}
