use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn jacaut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacaut")).args(args).env_remove("JACAUT_PREC").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jacaut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_matrix(name: &str, rows: &[&[(&str, &str)]]) -> PathBuf {
    let g = rows.len();
    let entries: Vec<Vec<Value>> =
        rows.iter().map(|r| r.iter().map(|(re, im)| serde_json::json!({"re": re, "im": im})).collect()).collect();
    let v = serde_json::json!({"g": g, "cols": 2 * g, "precision_digits": 60, "entries": entries, "hyperelliptic": true});
    let path = scratch(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn gaussian() -> PathBuf {
    write_matrix("gauss.json", &[&[("1", "0"), ("0", "1")]])
}

#[test]
fn cover_reports_klein_data() {
    let v = json(&jacaut(&["cover", "7", "1,2,4"]));
    assert_eq!(v["genus"], 3);
    assert_eq!(v["multipliers"], serde_json::json!([1, 2, 4]));
    assert_eq!(v["base_tiles"], 56);
}

#[test]
fn invalid_branching_exits_with_two() {
    assert_eq!(jacaut(&["cover", "8", "1,2,4"]).status.code(), Some(2));
}

#[test]
fn emitted_period_matrix_has_requested_shape_and_precision() {
    let path = scratch("iwp.json");
    let out = Command::new(env!("CARGO_BIN_EXE_jacaut"))
        .args(["cover", "12", "1,4,7", "--emit-period", path.to_str().unwrap()])
        .env("JACAUT_PREC", "40")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!((v["g"].as_u64(), v["cols"].as_u64(), v["precision_digits"].as_u64()), (Some(4), Some(8), Some(40)));
    assert_eq!(v["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn endo_ranks() {
    let e = gaussian();
    let e = e.to_str().unwrap();
    assert_eq!(json(&jacaut(&["endo", e]))["rank"], 2);
    let out = jacaut(&["endo", e, "8-134", "--prec", "60"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rank"], 0);
}

#[test]
fn polarize_elliptic_and_nonalgebraic() {
    let e = gaussian();
    assert_eq!(json(&jacaut(&["polarize", e.to_str().unwrap()]))["polarizations"].as_array().unwrap().len(), 1);
    // a generic 2-dimensional torus carries no polarization at all
    let generic = write_matrix(
        "generic.json",
        &[
            &[("1", "0"), ("0", "0"), ("0.4142135623730950488016887242096980785696718753769", "1.7320508075688772935274463415058723669428052538103"), ("0.2360679774997896964091736687312762354406183596115", "0.6457513110645905905016157536392604257102591830825")],
            &[("0", "0"), ("1", "0"), ("0.3166247903553998491149327366707866020161115495502", "0.1622776601683793319988935444327185337195551393252"), ("2.6055512754639892931192212674704959462512965738452", "1.4494897427831780981972840747058913919659474806567")],
        ],
    );
    let out = jacaut(&["polarize", generic.to_str().unwrap(), "--budget", "1"]);
    let v = json(&out);
    assert!(v["polarizations"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn polarize_klein_finds_several() {
    let v = json(&jacaut(&["polarize", "klein", "--prec", "60", "--budget", "1"]));
    assert!(v["polarizations"].as_array().unwrap().len() >= 2);
}

fn orders(v: &Value) -> Vec<u64> {
    v["auto_classes"].as_array().unwrap().iter().map(|a| a["order"].as_u64().unwrap()).collect()
}

#[test]
fn aut_on_emitted_klein_file() {
    let path = scratch("klein.json");
    assert!(jacaut(&["cover", "7", "1,2,4", "--emit-period", path.to_str().unwrap()]).status.success());
    let v = json(&jacaut(&["aut", path.to_str().unwrap()]));
    assert_eq!(orders(&v), vec![48, 336]);
    let canon = v["canonical_class"].as_u64().unwrap() as usize;
    assert_eq!(v["auto_classes"][canon]["torelli"]["curve_aut_order"], 168);
}

#[test]
fn aut_fermat_and_hyperelliptic_flag() {
    assert_eq!(orders(&json(&jacaut(&["aut", "fermat"]))), vec![64, 192]);
    let v = json(&jacaut(&["aut", "12-156", "--hyperelliptic"]));
    let o = orders(&v);
    assert!(o.contains(&24) && o.contains(&32), "{o:?}");
    assert_eq!(v["hyperelliptic"], true);
}

#[test]
fn table_single_row_and_json() {
    let out = jacaut(&["table", "--only", "12-156"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("PASS"), "{text}");
    let v = json(&jacaut(&["table", "--only", "bring", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["status"], "SKIP");
}

#[test]
fn bad_inputs() {
    assert_eq!(jacaut(&["aut", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(jacaut(&["aut", "klein", "--budget", "0"]).status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(jacaut(&["endo", bad.to_str().unwrap()]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_jacaut")).args(["cover", "7", "1,2,4"]).env("JACAUT_PREC", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
