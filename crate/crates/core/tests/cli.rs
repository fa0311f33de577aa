use std::process::Command;

fn curveforms(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_curveforms")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn forms_json_on_the_quintic() {
    let (code, out, _) = curveforms(&["forms", "--p", "11", "--curve", "x^5+y^5+x*y", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["genus"], 5);
    assert_eq!(v["numerators"], serde_json::json!(["x^2", "x*y", "y^2", "x", "y"]));
    let (_, again, _) = curveforms(&["forms", "--p", "11", "--curve", "x^5+y^5+x*y", "--json"]);
    assert_eq!(out, again);
}

#[test]
fn input_file_matches_flags() {
    let dir = std::env::temp_dir().join(format!("curveforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    std::fs::write(&path, r#"{"p": 2, "curve": "x^5+y^5+(x+y)^3+x*y"}"#).unwrap();
    let (code, from_file, _) = curveforms(&["invariants", "--input", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let (_, from_flags, _) = curveforms(&["invariants", "--p", "2", "--curve", "x^5+y^5+(x+y)^3+x*y", "--json"]);
    assert_eq!(from_file, from_flags);
    let v: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    assert_eq!(v["a_number"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes_by_error_class() {
    let (code, out, err) = curveforms(&["forms", "--p", "11", "--curve", "x^5+*y"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("[cli]") && err.contains("position 4"));
    assert_eq!(curveforms(&["forms", "--p", "11", "--curve", "x^2"]).0, 2);
    assert_eq!(curveforms(&["forms", "--p", "3", "--curve", "x^3+y^3"]).0, 3);
    let (code, _, err) = curveforms(&["normalize", "--p", "11", "--curve", "x^5+y^5+x*y", "--loop-cap", "1"]);
    assert_eq!(code, 4);
    assert!(err.contains("[normalize]"));
}

#[test]
fn show_transform_reports_the_shear() {
    // x^3 + y^2 has no y^3 term, so a coordinate change is needed
    let (code, out, _) = curveforms(&["forms", "--p", "11", "--curve", "x^3+y^2", "--json", "--show-transform"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["transform"].is_object());
    assert_eq!(v["genus"], 0);
}
