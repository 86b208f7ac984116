use std::path::PathBuf;
use std::process::Command;

use pdyn::dynamics::MarkedGrid;
use pdyn::puiseux::{parse_series, series_from_json};
use pdyn_cli::{run, Config};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("pdyn").chain(args.iter().copied()), &Config::default());
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

#[test]
fn classify_example() {
    let (code, v) = cli(&["classify", "--alpha", "t^(-1)", "--beta", "2*t^(-3) + t^(-1)", "--depth", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["locus"], "Eplus");
    assert_eq!(v["logR"], "1");
}

#[test]
fn ballcount_example() {
    let (code, v) = cli(&["ballcount", "--nu", "1", "--level", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 41);
}

#[test]
fn realize_rejects_the_rule_d_grid() {
    let (code, v) = cli(&["realize", "--grid", &data("bad_md.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "Violation");
    assert_eq!(v["rule"], "Md");
    let (code, v) = cli(&["grid", "--check", &data("bad_md.json")]);
    assert_eq!((code, v["rule"].as_str()), (1, Some("Md")));
}

#[test]
fn realize_period_two_grid() {
    let (code, v) = cli(&["realize", "--grid", &data("period2.json"), "--precision", "8"]);
    assert_eq!(code, 0);
    let nu = series_from_json(&v["nu"]).unwrap();
    let want = parse_series("-2 + 1/3*t^2 + 1/27*t^4 + 2/243*t^6 + O(t^8)").unwrap();
    assert!(nu.agrees_to(&want, &pdyn::coeff::qi(8)).unwrap());
}

#[test]
fn center_and_grid_reports_reparse() {
    let (code, v) = cli(&["center", "--seed", "-2", "--level", "1", "--precision", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["period"], 2);
    assert_eq!(v["log_radius"], "-2");
    let c = series_from_json(&v["center"]).unwrap();
    assert_eq!(parse_series(v["center_text"].as_str().unwrap()).unwrap(), c);
    assert!(MarkedGrid::from_json(&v["grid"]).is_ok());
    let (code, g) = cli(&["grid", "--nu", "-2 + 1/3*t^2 + 1/27*t^4 + O(t^6)", "--depth", "4"]);
    assert_eq!(code, 0);
    let g = MarkedGrid::from_json(&g).unwrap();
    assert_eq!(g.rows()[1], vec![true, false, true, false]);
}

#[test]
fn component_and_degree() {
    let (_, v) = cli(&["component", "--nu", "1"]);
    assert_eq!(v["verdict"], "PeriodicBall");
    assert_eq!(v["log_radius"], "-2");
    let (_, v) = cli(&["degree", "--nu", "1", "--depth", "3"]);
    assert_eq!(v["delta"], 1);
    assert_eq!(v["bounded"], true);
}

#[test]
fn itinerary_of_a_fixed_point_is_constant() {
    let (code, v) = cli(&["itinerary", "--alpha", "t^(-1)", "--beta", "0", "--point", "0", "--depth", "5"]);
    assert_eq!(code, 0);
    let s: Vec<u64> = v["symbols"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(s.len(), 5);
    assert!(s.iter().all(|&x| x == s[0]));
}

#[test]
fn bridge_commands() {
    let (code, v) = cli(&["bridge-eval", "--nu", "1", "--T", "1.5i"]);
    assert_eq!(code, 0);
    let e = (3.0 * std::f64::consts::PI).exp();
    assert!((v["a"][0].as_f64().unwrap() / e - 1.0).abs() < 1e-12);
    let (code, v) = cli(&["bridge-eval", "--nu", "1", "--T", "0.5+1.0i"]);
    assert_eq!((code, v["error"].as_str()), (1, Some("OutsideStrip")));
    let (code, v) = cli(&["bridge-check", "--nu", "1", "--T", "0.5+1.5i"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let out = run(["pdyn", "grid", "--nu", "1 +", "--depth", "2"], &Config::default());
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--nu"));
    let out = run(["pdyn", "grid", "--nu", "1"], &Config::default());
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--depth"));
    assert_eq!(run(["pdyn", "frobnicate"], &Config::default()).code, 2);
    assert_eq!(run(["pdyn", "bridge-eval", "--nu", "1", "--T", "x"], &Config::default()).code, 2);
}

#[test]
fn domain_errors_carry_the_error_name() {
    let (code, v) = cli(&["grid", "--nu", "t^(-1)", "--depth", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "NotALevelNPoint");
}

#[test]
fn batches_keep_input_order_under_jobs() {
    let args = ["component", "--nu", "1", "--nu", "-2", "--nu", "1 + t^3 + O(t^24)"];
    let one = run(std::iter::once("pdyn").chain(args), &Config::default());
    let four = run(std::iter::once("pdyn").chain(args).chain(["--jobs", "4"]), &Config::default());
    assert_eq!(one, four);
    let v: Value = serde_json::from_str(&one.stdout).unwrap();
    assert_eq!(v[1]["verdict"], "Singleton");
}

#[test]
fn output_is_deterministic() {
    let a = run(["pdyn", "center", "--seed", "-2", "--level", "2"], &Config::default());
    let b = run(["pdyn", "center", "--seed", "-2", "--level", "2"], &Config::default());
    assert_eq!(a, b);
    assert_eq!(a.code, 0);
}

#[test]
fn text_format() {
    let out = run(["pdyn", "--format", "text", "ballcount", "--nu", "1", "--level", "2"], &Config::default());
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("count: 5"));
}

#[test]
fn config_parsing() {
    let c = Config::parse("# defaults\nprecision = 30\ndepth_budget=6\nepsilon = 0.001\nfloat_precision = 128\n\n").unwrap();
    assert_eq!(c.precision, 30);
    assert_eq!(c.depth_budget, 6);
    assert_eq!(c.bridge.epsilon, 0.001);
    assert_eq!(c.bridge.embed_bits, 128);
    assert!(!c.bridge.big_float);
    assert!(Config::parse("big_float = true").unwrap().bridge.big_float);
    assert!(Config::parse("big_float = yes").is_err());
    assert_eq!(Config::parse("").unwrap(), Config::default());
    assert_eq!(Config::parse("colour = red").unwrap_err().line, 1);
    assert!(Config::parse("precision").is_err());
    assert!(Config::parse("epsilon = 2").is_err());
    assert!(Config::parse("precision = many").is_err());
}

#[test]
fn big_float_flag_and_key() {
    let nu = "-2 + 1/3*t^2 + 1/27*t^4 + 2/243*t^6 + O(t^8)";
    let args = ["bridge-check", "--nu", nu, "--T", "0.3+3.2i", "--depth", "3"];
    let (code, v) = cli(&args);
    assert_eq!((code, v["error"].as_str()), (1, Some("PrecisionInsufficient")));
    let (code, v) = cli(&[&args[..], &["--big-float"]].concat());
    assert_eq!((code, v["agree"].as_bool()), (0, Some(true)));
    assert_eq!(v["param"]["big_float_bits"], 96);
    let mut cfg = Config::default();
    cfg.bridge.big_float = true;
    let out = run(std::iter::once("pdyn").chain(args), &cfg);
    assert_eq!(out.code, 0);
}

#[test]
fn config_changes_the_strip() {
    let mut cfg = Config::default();
    cfg.bridge.epsilon = 0.5;
    let out = run(["pdyn", "bridge-eval", "--nu", "1", "--T", "0.5+1.0i"], &cfg);
    assert_eq!(out.code, 0);
}

#[test]
fn binary_reads_pdyn_config() {
    let dir = std::env::temp_dir().join(format!("pdyn-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pdyn.conf");
    std::fs::write(&path, "epsilon = 0.5\n").unwrap();
    let bin = env!("CARGO_BIN_EXE_pdyn");
    let ok = Command::new(bin).args(["bridge-eval", "--nu", "1", "--T", "0.5+1.0i"]).env("PDYN_CONFIG", &path).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let strict = Command::new(bin).args(["bridge-eval", "--nu", "1", "--T", "0.5+1.0i"]).env_remove("PDYN_CONFIG").output().unwrap();
    assert_eq!(strict.status.code(), Some(1));
    std::fs::write(&path, "epsilon = nope\n").unwrap();
    let bad = Command::new(bin).args(["ballcount", "--nu", "1", "--level", "1"]).env("PDYN_CONFIG", &path).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}
