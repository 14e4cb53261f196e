use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use brauer_udr::cli::Report;

fn exe() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_brauer-udr"));
    c.env_remove("BRAUER_UDR_MAX_DIM");
    c
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("brauer-udr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn analyze(e: &str, p: &str) -> Report {
    let o = run(&["analyze", "--edges", e, "--prime", p, "--reproducible"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    Report::from_json(&stdout(&o)).unwrap()
}

fn row<'a>(r: &'a Report, name: &str) -> &'a brauer_udr::cli::report::Row {
    r.rows
        .iter()
        .find(|x| x.name == name)
        .unwrap_or_else(|| panic!("no row {name}"))
}

#[test]
fn syzygy_of_band_is_identified_with_witness() {
    let o = run(&[
        "syzygy", "--edges", "3", "--prime", "7", "--module", "band:1,2", "--format", "text",
    ]);
    assert_eq!(stdout(&o).trim(), "band:1,3");
    let o = run(&["syzygy", "--edges", "3", "--prime", "7", "--module", "band:1,2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identified"], "band:1,3");
    assert_eq!(v["iso_witness"].as_array().unwrap().len(), 3);
}

#[test]
fn ext1_of_s1_for_one_edge() {
    let o = run(&[
        "ext1", "--edges", "1", "--prime", "3", "--module", "S(1)", "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn shipped_lift_fixture_is_valid() {
    let f = fixture("se_t2.lift");
    let o = run(&[
        "lift-verify",
        "--edges",
        "3",
        "--prime",
        "7",
        "--lift",
        f.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Valid");
}

#[test]
fn lift_search_reports_the_obstruction_and_saves_extensions() {
    let f = fixture("se_t2.lift");
    let o = run(&[
        "lift-search",
        "--edges",
        "3",
        "--prime",
        "7",
        "--lift",
        f.to_str().unwrap(),
        "--ring",
        "k[t]/(t^3)",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"], "NoExtension");
    assert_eq!(v["obstruction"]["obstruction"], "t^2");

    let saved = scratch("w3.lift");
    let o = run(&[
        "lift-search",
        "--edges",
        "3",
        "--prime",
        "7",
        "--family",
        "W-star",
        "--level",
        "2",
        "--ring",
        "k[t]/(t^3)",
        "--save",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "lift-verify",
        "--edges",
        "3",
        "--prime",
        "7",
        "--lift",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn printed_w_family_fails_verification() {
    let o = run(&[
        "lift-verify",
        "--edges",
        "3",
        "--prime",
        "7",
        "--family",
        "W-star-printed",
        "--level",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("RelationViolated"));
}

#[test]
fn analyze_rows_for_three_edges() {
    let r = analyze("3", "7");
    let expect = [
        ("S_2", 1, 0, "k"),
        ("M(a1*a3*d~)", 1, 1, "k[[t]]"),
        ("S_3", 1, 1, "k[t]/(t^2)"),
        ("B(1,2)", 1, 1, "k[[t]]"),
    ];
    for (name, s, x, v) in expect {
        let row = row(&r, name);
        assert_eq!(row.stable_end_dim, Some(s), "{name}");
        assert_eq!(row.ext1_dim, Some(x), "{name}");
        assert_eq!(row.udr_verdict.unwrap().as_str(), v, "{name}");
    }
    assert!(r.summary.theorem_holds);
}

#[test]
fn analyze_rows_for_one_edge() {
    let r = analyze("1", "3");
    let s1 = row(&r, "S_1");
    assert_eq!((s1.stable_end_dim, s1.ext1_dim), (Some(1), Some(2)));
    assert_eq!(s1.udr_verdict.unwrap().as_str(), "k[[t1,t2]]/(t1^2-t2^2,t1t2)");
    let m = row(&r, "M(a1)");
    assert_eq!((m.stable_end_dim, m.ext1_dim), (Some(1), Some(1)));
    assert_eq!(m.udr_verdict.unwrap().as_str(), "k[[t]]");
}

#[test]
fn band_with_lambda_squared_minus_one_is_gated() {
    let r = analyze("3", "5");
    let b = row(&r, "B(1,2)");
    assert_eq!(b.stable_end_dim, Some(2));
    assert!(b.udr_verdict.is_none() && b.evidence.is_none());
}

#[test]
fn reports_are_reproducible_and_round_trip() {
    let a = run(&["analyze", "--edges", "2", "--prime", "5", "--reproducible"]);
    let b = run(&["analyze", "--edges", "2", "--prime", "5", "--reproducible"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.to_json(), text);
    assert!(report.header.generated_unix.is_none());
    let stamped = Report::from_json(&stdout(&run(&["analyze", "--edges", "2", "--prime", "5"]))).unwrap();
    assert!(stamped.header.generated_unix.is_some());
}

#[test]
fn csv_is_a_flat_projection_of_the_rows() {
    let json = Report::from_json(&stdout(&run(&[
        "analyze",
        "--edges",
        "2",
        "--prime",
        "3",
        "--reproducible",
    ])))
    .unwrap();
    let o = run(&["analyze", "--edges", "2", "--prime", "3", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "spec");
    assert!(headers.iter().any(|h| h == "udr_verdict"));
    let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), json.rows.len());
    for (rec, row) in recs.iter().zip(&json.rows) {
        assert_eq!(&rec[0], row.spec);
    }
}

#[test]
fn exit_codes() {
    let o = run(&["analyze", "--edges", "2", "--prime", "7", "--strict-claims"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["stable-end", "--edges", "3", "--prime", "7", "--module", "str:a1*b2"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["error"], "input");
    assert_eq!(err["module"], "str:a1*b2");
    assert!(err["message"].as_str().unwrap().contains("position"));
    let o = run(&["analyze", "--edges", "0", "--prime", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dimension_cap_from_environment() {
    let o = exe()
        .args(["analyze", "--edges", "2", "--prime", "3", "--reproducible"])
        .env("BRAUER_UDR_MAX_DIM", "3")
        .output()
        .unwrap();
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.header.config.max_dim, 3);
    assert!(r.summary.skipped > 0);
    assert!(r
        .rows
        .iter()
        .filter(|x| x.total_dim > 3)
        .all(|x| x.status == brauer_udr::cli::report::RowStatus::Skipped));
    let o = exe()
        .args(["module-info", "--edges", "2", "--prime", "3", "--module", "P(1)"])
        .env("BRAUER_UDR_MAX_DIM", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_rejects_tampered_certificates() {
    let path = scratch("e3.json");
    let o = run(&[
        "analyze",
        "--edges",
        "3",
        "--prime",
        "3",
        "--reproducible",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let mut r = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let row = r.rows.iter_mut().find(|x| x.name == "S_3").unwrap();
    let ob = row.evidence.as_mut().unwrap().obstructed.as_mut().unwrap();
    ob.obstruction.certificate[0].3 = 2;
    ob.obstruction.certificate.push(("a3*d = 0".into(), 0, 0, 1));
    let row = r.rows.iter_mut().find(|x| x.name == "M(a1*a3*d~)").unwrap();
    let w = row.evidence.as_mut().unwrap().witness.as_mut().unwrap();
    let d = w.arrows.iter_mut().find(|a| a.arrow == "d").unwrap();
    d.entries[0][0][1] = (d.entries[0][0][1] + 1) % 3;
    std::fs::write(&path, r.to_json()).unwrap();
    let o = run(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 2, "{v}");
}

#[test]
fn single_module_commands_emit_json() {
    let o = run(&["module-info", "--edges", "3", "--prime", "7", "--module", "P(3)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim_vector"], serde_json::json!([2, 2, 4]));
    assert_eq!(v["loewy_length"], 7);
    let o = run(&["stable-end", "--edges", "3", "--prime", "5", "--module", "band:1,2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stable_end_dim"], 2);
    let o = run(&["udr-evidence", "--edges", "3", "--prime", "7", "--module", "S(3)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "k[t]/(t^2)");
    assert_eq!(v["obstructed"]["obstruction"]["obstruction"], "t^2");
}
