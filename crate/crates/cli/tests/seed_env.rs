//! Kept in its own test binary: the seed variable is process-wide.

use blochkit_cli::{dispatch, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> blochkit_cli::Outcome {
    dispatch(std::iter::once("blochkit").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn seed_precedence() {
    let args = ["beta", "--domain", "disk", "--symbol", "z1^2", "--samples", "50"];
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# test config\nseed = 7\nsamples = 60\n").unwrap();
    let c = conf.to_str().unwrap();

    std::env::set_var("BLOCHKIT_SEED", "11");
    let from_env = json(&args);
    let from_file = json(&[&args[..], &["--config", c]].concat());
    let from_flag = json(&[&args[..], &["--config", c, "--seed", "3"]].concat());
    std::env::set_var("BLOCHKIT_SEED", "x");
    let bad = run(&args).code;
    std::env::remove_var("BLOCHKIT_SEED");
    let default = json(&args);

    assert_eq!(from_env["seed"], 11);
    assert_eq!(from_file["seed"], 7);
    assert_eq!(from_file["samples"], 50, "flags override the file");
    assert_eq!(from_flag["seed"], 3);
    assert_eq!(bad, EXIT_USAGE);
    assert_eq!(default["seed"], 42);
}
