use std::io::Write;
use std::process::{Command, Output};

fn oagrank(args: &[&str], script: Option<&str>) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    if let Some(s) = script {
        file.write_all(s.as_bytes()).unwrap();
        argv.push(file.path().display().to_string());
    }
    Command::new(env!("CARGO_BIN_EXE_oagrank"))
        .args(&argv)
        .env_remove("OAGRANK_MODULI")
        .output()
        .unwrap()
}

#[test]
fn divisible_rank_two_reports_zero_only() {
    let out = oagrank(&["run", "--json"], Some("G := lex(Q, Q)\ndrk_group(G)\n"));
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["records"][0]["result"]["summary"], "{{0}}");
    assert_eq!(v["records"][0]["status"], "ok");
}

#[test]
fn exit_codes() {
    assert_eq!(oagrank(&["run"], Some("G := lex(Q, Q")).status.code(), Some(1));
    assert_eq!(oagrank(&["run"], Some("gamma(hahn(omega; Z, Q))")).status.code(), Some(2));
    let unknown = "decide_definable(hahn(dense; Z), gap(1))";
    assert_eq!(oagrank(&["run"], Some(unknown)).status.code(), Some(0));
    assert_eq!(oagrank(&["run", "--strict"], Some(unknown)).status.code(), Some(3));
}

#[test]
fn json_output_is_byte_stable() {
    let s = "G := lex(Z, Z_(2), Q); drk_group(G); spine(G, 2); abc_n(G, [1 -> 1, 2 -> 3], 6)";
    let a = oagrank(&["run", "--json"], Some(s));
    let b = oagrank(&["run", "--json"], Some(s));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_mode_agrees_on_finite_groups() {
    let s = "G := lex(Z_(3), Z, Q); abc_n(G, [1 -> 2, 3 -> 1], 4); f_n(G, [2 -> 3], 6)";
    let out = oagrank(&["oracle"], Some(s));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_passes() {
    let out = oagrank(&["verify"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn moduli_override_is_validated() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(b"drk_group(lex(Z, Z))").unwrap();
    let run = |m: &str| {
        Command::new(env!("CARGO_BIN_EXE_oagrank"))
            .args(["run", &file.path().display().to_string()])
            .env("OAGRANK_MODULI", m)
            .output()
            .unwrap()
    };
    assert_eq!(run("2,3").status.code(), Some(0));
    assert_eq!(run("1").status.code(), Some(2));
    assert_eq!(run("x").status.code(), Some(2));
}
