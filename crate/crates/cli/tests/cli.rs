use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_modinv");

fn modinv(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decompose_json_is_exact() {
    let o = modinv(&[
        "decompose",
        "--p",
        "7",
        "--multidegree",
        "1,1,1,2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"p\":7,\"multidegree\":[1,1,1,2],\"summands\":{\"2\":3,\"4\":3,\"6\":1}}\n"
    );
}

#[test]
fn summand_keys_follow_dimension_order() {
    let o = modinv(&[
        "decompose",
        "--p",
        "11",
        "--multidegree",
        "4,4,3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: Vec<usize> = v["summands"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.parse().unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&10) || keys.contains(&11));
}

#[test]
fn counts_table_contains_mu_value() {
    let o = modinv(&["counts", "--p", "3", "--dmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.trim_start().starts_with("4 |"))
        .unwrap();
    let mu3: u64 = row.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert_eq!(mu3, 5);
}

#[test]
fn sl2_report() {
    let o = modinv(&[
        "sl2", "--p", "3", "--m", "3", "--dmax", "9", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generators"], 28);
    assert_eq!(v["noether_number"], 8);
    let degrees: Vec<&String> = v["per_degree"].as_object().unwrap().keys().collect();
    assert_eq!(degrees, ["2", "4", "6", "8"]);
}

#[test]
fn json_round_trips() {
    for args in [
        &["counts", "--p", "2", "--dmax", "6", "--format", "json"][..],
        &["paths", "--p", "5", "--d", "4", "--format", "json"],
        &["tensor", "--p", "3", "--d", "5", "--format", "json"],
        &[
            "sagbi", "--p", "2", "--m", "2", "--dmax", "4", "--format", "json",
        ],
    ] {
        let text = stdout(&modinv(args));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn quick_selftest_passes() {
    let o = modinv(&["selftest", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn injected_transfer_fault_is_caught() {
    let o = modinv(&["selftest", "quick", "--inject-fault", "transfer-sign"]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("FAIL Tr(y1*y2) = -x1*x2"), "{text}");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(
        modinv(&["decompose", "--p", "6", "--multidegree", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        modinv(&["decompose", "--p", "5", "--multidegree", "1,x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(modinv(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        modinv(&["selftest", "--inject-fault", "nonsense"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(modinv(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_exhaustion_exits_1() {
    let o = Command::new(BIN)
        .args(["sl2", "--p", "5", "--m", "3", "--dmax", "25"])
        .env("MODINV_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn oversized_components_are_refused() {
    let o = modinv(&["decompose", "--p", "101", "--multidegree", "40,40,40"]);
    assert_eq!(o.status.code(), Some(1));
}
