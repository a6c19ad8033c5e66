use std::process::Command;

fn qrank(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qrank"))
        .args(args)
        .env_remove("QRANK_DB")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_one_row_reports_json_lines() {
    let (code, out, err) = qrank(&["verify", "--id", "N5(2,4)", "--no-timing"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["id"], "N5(2,4)");
    assert_eq!(lines[0]["status"], "verified");
    assert_eq!(lines[0]["paths_agree"], true);
    assert!(lines[0].get("millis").is_none());
    assert_eq!(lines[1]["summary"]["verified"], 1);
    assert!(err.contains("1 verified"));
}

#[test]
fn corrupted_database_row_is_refuted() {
    let dir = std::env::temp_dir().join(format!("qrank-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let db = dir.join("bad.json");
    std::fs::write(
        &db,
        r#"[{"p":5,"s":1,"k":0,"statistic":"NT","rhs_poly":{"-1":"-3/10","0":"1/10"}}]"#,
    )
    .unwrap();
    let (code, out, _) = qrank(&["verify", "--db", db.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"refuted\""));
    std::fs::write(&db, "not json").unwrap();
    assert_eq!(qrank(&["verify", "--db", db.to_str().unwrap()]).0, 2);
}

#[test]
fn usage_and_resource_exit_codes() {
    assert_eq!(qrank(&["verify", "--jobs", "x"]).0, 2);
    assert_eq!(qrank(&["verify", "--id", "Z9(9,9)"]).0, 2);
    assert_eq!(qrank(&["verify", "--id", "N7(1,0)", "--max-n", "50"]).0, 3);
    assert_eq!(qrank(&["scan", "--id", "nt-mod5", "--n-max", "2000"]).0, 3);
}

#[test]
fn named_scan_and_custom_scan() {
    let (code, out, _) = qrank(&["scan", "--id", "nt7-mod7"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"witness\":null"));
    // NT(1,5,5n+1) alone is not divisible by 5
    let (code, out, _) = qrank(&[
        "scan",
        "--modulus",
        "5",
        "--k",
        "1",
        "--weights",
        "0,1,0,0,0",
        "--divisor",
        "5",
    ]);
    assert_eq!(code, 1);
    assert!(!out.contains("\"witness\":null"));
}

#[test]
fn expand_prints_dump_format() {
    let (code, out, _) = qrank(&["expand", "t@5", "--order", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "# O(q^4)\n1\t1\n2\t-5\n3\t15\n");
}
