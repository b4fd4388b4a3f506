use blochkit_cli::{dispatch, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> blochkit_cli::Outcome {
    dispatch(std::iter::once("blochkit").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn result<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["results"].as_array().unwrap().iter().find(|r| r["name"] == name).unwrap()
}

#[test]
fn qf_on_the_disk_at_the_origin() {
    let v = json(&["qf", "--domain", "disk", "--symbol", "z1", "--point", "0"]);
    assert_eq!(v["command"], "qf");
    let q = result(&v, "q");
    assert_eq!(q["value"].as_f64().unwrap(), 1.0);
    assert_eq!(q["mode"], "exact");
}

#[test]
fn constants_for_the_two_ball() {
    let v = json(&["constants", "--domain", "ball:2"]);
    let c = result(&v, "c_d")["value"].as_f64().unwrap();
    assert!((c - 0.816497).abs() < 1e-6);
    assert_eq!(v["verdicts"]["in-class-d"], "yes");
}

#[test]
fn spectrum_of_z1_stays_in_the_disk() {
    let v = json(&["spectrum", "--domain", "ball:2", "--symbol", "z1", "--samples", "2000", "--lambda", "2"]);
    let m = result(&v, "max_modulus")["lower"].as_f64().unwrap();
    assert!(m < 1.0 && m > 0.9);
    let d = result(&v, "nearest_distance")["value"].as_f64().unwrap();
    assert!(d >= 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["qf", "--domain", "disk", "--symbol", "z1", "--point", "2"]).code, EXIT_NUMERICAL);
    assert_eq!(run(&["qf", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(run(&["qf", "--domain", "disk"]).code, EXIT_USAGE);
    assert_eq!(run(&["verify", "--suite", "nope"]).code, EXIT_USAGE);
    assert_eq!(run(&["probe", "--question", "omega-vs-rho", "--domain", "cartan2:2"]).code, EXIT_USAGE);
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("verify"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "colour = blue\n").unwrap();
    let out = run(&["constants", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("colour"));
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = run(&["constants", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).flexible(true).from_reader(out.stdout.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "name");
    assert_eq!(&header[5], "paper_ref");
    let names: Vec<String> = rdr.records().map(|r| r.unwrap()[0].to_string()).collect();
    assert!(names.iter().any(|n| n == "c_d[exc2]"));
}

#[test]
fn out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["rho", "--domain", "ball:2", "--point", "0.5,0", "--out", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rho = result(&v, "rho");
    assert!((rho["lower"].as_f64().unwrap() - 0.5f64.atanh()).abs() < 1e-4);
}

#[test]
fn reports_are_deterministic() {
    let args = ["sigma", "--domain", "ball:2", "--symbol", "z1*z2", "--samples", "300"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn single_suite_reports_checks() {
    let v = json(&["verify", "--suite", "constants"]);
    assert_eq!(v["verdicts"]["result"], "pass");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["criterion"] == 11 && c["pass"] == true));
}

#[test]
fn probe_emits_tables_only() {
    let v = json(&["probe", "--question", "omega-vs-omega0", "--domain", "polydisk:2", "--samples", "200"]);
    assert_eq!(v["verdicts"]["status"], "exploratory");
    assert!(v["results"].as_array().unwrap().is_empty());
    let t = &v["tables"]["omega-vs-omega0"];
    assert_eq!(t["rows"].as_array().unwrap().len(), 8);
}
