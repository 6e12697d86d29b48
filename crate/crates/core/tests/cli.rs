use std::process::{Command, Output};

use serde_json::Value;

fn hermgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn spectrum_json_contains_genus_one_at_13() {
    let o = hermgen(&["spectrum", "-q", "13", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q"], 13);
    let entries = v["entries"].as_array().unwrap();
    let one = entries.iter().find(|e| e["genus"] == 1).unwrap();
    let families: Vec<&str> = one["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["family"].as_str().unwrap())
        .collect();
    assert!(families.contains(&"P34") && families.contains(&"P36"));
}

#[test]
fn non_prime_power_is_a_usage_error() {
    let o = hermgen(&["spectrum", "-q", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("6 is not a prime power"));
    assert_eq!(hermgen(&["spectrum"]).status.code(), Some(2));
    assert_eq!(hermgen(&["frobnicate", "-q", "4"]).status.code(), Some(2));
}

#[test]
fn psl2f_at_32_uses_f5() {
    let o = hermgen(&[
        "spectrum", "-q", "32", "--family", "M2_PSL2F", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows
        .iter()
        .all(|r| r.contains("M2_PSL2F") && r.contains("f=5")));
}

#[test]
fn genus_command() {
    let o = hermgen(&[
        "genus",
        "-q",
        "13",
        "--family",
        "P34",
        "--params",
        "a=2,e=28,m=3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["genus"], 1);
    assert_eq!(v["group_order"], 84);

    let bad = hermgen(&[
        "genus",
        "-q",
        "13",
        "--family",
        "P34",
        "--params",
        "a=2,e=28,m=4",
    ]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stderr(&bad).contains("m=4"));
    let missing = hermgen(&["genus", "-q", "13", "--family", "P34", "--params", "a=2"]);
    assert_eq!(missing.status.code(), Some(3));
    let wrong_q = hermgen(&[
        "genus",
        "-q",
        "13",
        "--family",
        "P32",
        "--params",
        "a=1,c=7,e=7",
    ]);
    assert_eq!(wrong_q.status.code(), Some(3));
}

#[test]
fn spectrum_params_round_trip_through_genus() {
    let o = hermgen(&["spectrum", "-q", "25", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut checked = 0;
    for e in v["entries"].as_array().unwrap().iter().step_by(3) {
        let w = &e["witnesses"][0];
        let params = w["params"].to_string();
        let o = hermgen(&[
            "genus",
            "-q",
            "25",
            "--family",
            w["family"].as_str().unwrap(),
            "--params",
            &params,
            "--format",
            "json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r["genus"], e["genus"]);
        assert_eq!(r["group_order"], w["group_order"]);
        checked += 1;
    }
    assert!(checked > 3);
}

#[test]
fn verify_commands() {
    let o = hermgen(&["verify", "-q", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
    let o = hermgen(&["verify", "-q", "13", "--family", "P34", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["checked"].as_u64().unwrap() > 0);
    let o = hermgen(&["verify", "-q", "243"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("budget"));
    let o = hermgen(&["verify", "-q", "5", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("skip"));
}

#[test]
fn classify_command() {
    // g^4 has order 6 = q+1 at q = 5
    let o = hermgen(&[
        "classify",
        "-q",
        "5",
        "g^4,0,0;0,g^4,0;0,0,1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], "A");
    assert_eq!(v["contribution"], 6);
    let o = hermgen(&[
        "classify",
        "-q",
        "5",
        "g^4,0,0;0,g^8,0;0,0,1",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&o).lines().nth(1), Some("B1,0,6"));
    // an elation in the second model at q = 4
    let o = hermgen(&[
        "classify",
        "-q",
        "4",
        "--model",
        "model3",
        "1,0,0;g^5,1,0;0,0,1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().nth(1), Some("C,6,2"));

    assert_eq!(
        hermgen(&["classify", "-q", "5", "1,0;0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hermgen(&["classify", "-q", "5", "1,0,0;0,1,0;0,0,h"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        hermgen(&["classify", "-q", "5", "g,0,0;0,1,0;0,0,1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        hermgen(&["classify", "-q", "5", "1,0,0;0,1,0;0,0,1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn enumerate_command() {
    let o = hermgen(&[
        "enumerate",
        "-q",
        "4",
        "--family",
        "M2_A5",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "family,params,genus,group_order\nM2_A5,omega=1,0,60\nM2_A5,omega=5,0,300\n"
    );
    let o = hermgen(&["enumerate", "-q", "9", "--family", "P32"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0 tuples"));
}

#[test]
fn table1_command() {
    let o = hermgen(&["table1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("ABSENT"));
    let o = hermgen(&["table1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = hermgen(&["table1", "--family", "T31"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("ABSENT"));
}

#[test]
fn output_does_not_depend_on_threads() {
    let a = hermgen(&["spectrum", "-q", "27", "--format", "json", "--jobs", "1"]);
    let b = hermgen(&["spectrum", "-q", "27", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = hermgen(&["verify", "-q", "7", "--jobs", "1"]);
    let b = hermgen(&["verify", "-q", "7", "--jobs", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn help_exits_zero() {
    let o = hermgen(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("table1"));
}
