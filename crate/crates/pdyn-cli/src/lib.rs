//! The `pdyn` command line: argument handling, dispatch and report output.

pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use pdyn::bridge::{complex_critical_grid, evaluate_at_T, BridgeConfig};
use pdyn::coeff::rational::fmt_rational;
use pdyn::coeff::{parse_rational, qi, Rational};
use pdyn::dynamics::{
    check_admissible, classify, component_of_critical, critical_grid, itinerary, level_structure, CubicMap, MarkedGrid,
};
use pdyn::parameter::{algebraic_degree, center_history, find_center_search, parameter_ball, realize_grid, AlgebraicDegree};
use pdyn::puiseux::{parse_series, series_to_json, PuiseuxSeries};
use pdyn::Error;

pub use config::{Config, ConfigError};

#[derive(Parser, Debug)]
#[command(name = "pdyn", version, about = "Dynamics of cubic polynomials over Puiseux series")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for batches of parameters.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Carry bridge parameters with |a| above 1e8 in big floats.
    #[arg(long, global = true)]
    pub big_float: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// A map given either as ψ_ν (`--nu`, repeatable) or as φ_{α,β} (`--beta`).
#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// ν of ψ_{α,ν}; repeat to run a batch.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Vec<String>,
    /// α; defaults to t^(-1) for the ψ form.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// β of φ_{α,β}.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Locus of the map (C3, S3, Eplus, Eminus).
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Critical marked grid of a map, or the admissibility of a grid file.
    Grid {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        depth: Option<usize>,
        /// Check a grid file against rules (Ma)-(Md) instead.
        #[arg(long, conflicts_with_all = ["nu", "beta"])]
        check: Option<PathBuf>,
    },
    /// Number of dynamical balls of a level.
    Ballcount {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        level: usize,
    },
    /// Geometry of the filled Julia set component of the marked critical point.
    Component {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Symbolic itinerary of a point in the shift locus.
    Itinerary {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        depth: usize,
    },
    /// Center of the level-n parameter ball of a seed.
    Center {
        #[arg(long, allow_hyphen_values = true)]
        seed: Vec<String>,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        precision: Option<String>,
    },
    /// A center realizing a critical grid read from a file.
    Realize {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Algebraic degree of the parameter balls around ν.
    Degree {
        #[arg(long, allow_hyphen_values = true)]
        nu: Vec<String>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        precision: Option<String>,
    },
    /// Evaluate ν at t = exp(2πiT).
    BridgeEval {
        #[arg(long, allow_hyphen_values = true)]
        nu: Vec<String>,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        trunc: Option<String>,
    },
    /// Compare the complex critical grid at T with the series grid.
    BridgeCheck {
        #[arg(long, allow_hyphen_values = true)]
        nu: Vec<String>,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        trunc: Option<String>,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Usage(String);

type Item = std::result::Result<Value, Error>;

/// Machine-readable form of a domain error.
pub fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": e.name(), "message": e.to_string()});
    match e {
        Error::Violation { rule, row, col } => {
            v["rule"] = json!(rule.to_string());
            v["row"] = json!(row);
            v["col"] = json!(col);
        }
        Error::NotALevelNPoint { level, .. } => v["level"] = json!(level),
        Error::DepthBudgetExceeded(d) => v["depth"] = json!(d),
        _ => {}
    }
    v
}

fn series_arg(flag: &str, s: &str) -> std::result::Result<PuiseuxSeries, Usage> {
    parse_series(s).map_err(|e| Usage(format!("--{flag}: {e}")))
}

fn rational_arg(flag: &str, s: &str) -> std::result::Result<Rational, Usage> {
    parse_rational(s).map_err(|e| Usage(format!("--{flag}: {e}")))
}

fn precision_arg(p: &Option<String>, cfg: &Config) -> std::result::Result<Rational, Usage> {
    match p {
        Some(s) => rational_arg("precision", s),
        None => Ok(qi(cfg.precision)),
    }
}

fn t_arg(s: &str) -> std::result::Result<Complex64, Usage> {
    s.replace(' ', "").parse::<Complex64>().map_err(|_| Usage(format!("--T: `{s}` is not a complex number such as 0.5+1.5i")))
}

fn read_grid(path: &PathBuf) -> std::result::Result<MarkedGrid, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("--grid: cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Usage(format!("--grid: {}: {e}", path.display())))?;
    MarkedGrid::from_json(&v).map_err(|e| Usage(format!("--grid: {}: {e}", path.display())))
}

fn maps(m: &MapArgs) -> std::result::Result<Vec<CubicMap>, Usage> {
    let alpha = m.alpha.as_deref().map(|a| series_arg("alpha", a)).transpose()?;
    if let Some(b) = &m.beta {
        if !m.nu.is_empty() {
            return Err(Usage("--beta cannot be combined with --nu".into()));
        }
        let alpha = alpha.ok_or_else(|| Usage("--beta needs --alpha".into()))?;
        let beta = series_arg("beta", b)?;
        return Ok(vec![CubicMap::phi(alpha, beta).map_err(|e| Usage(format!("--alpha: {e}")))?]);
    }
    if m.nu.is_empty() {
        return Err(Usage("give --nu, or --alpha with --beta".into()));
    }
    let alpha = alpha.unwrap_or_else(|| PuiseuxSeries::t_pow(qi(-1)));
    m.nu
        .iter()
        .map(|s| {
            let nu = series_arg("nu", s)?;
            CubicMap::psi(alpha.clone(), nu).map_err(|e| Usage(format!("--alpha: {e}")))
        })
        .collect()
}

fn nus(flag: &str, list: &[String]) -> std::result::Result<Vec<PuiseuxSeries>, Usage> {
    if list.is_empty() {
        return Err(Usage(format!("--{flag} is required")));
    }
    list.iter().map(|s| series_arg(flag, s)).collect()
}

fn batch<T: Sync>(jobs: usize, items: &[T], f: impl Fn(&T) -> Item + Sync + Send) -> Vec<Item> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

fn degree_json(d: &AlgebraicDegree) -> Value {
    match d {
        AlgebraicDegree::Degree(v) => json!({"delta": v, "bounded": true}),
        AlgebraicDegree::UnboundedToDepth { depth, lower_bound } => {
            json!({"delta": lower_bound, "bounded": false, "depth": depth})
        }
    }
}

fn bridge_check(nu: &PuiseuxSeries, t: Complex64, depth: usize, trunc: &Rational, cfg: &BridgeConfig) -> Item {
    let p = evaluate_at_T(nu, t, trunc, cfg)?;
    let series = critical_grid(&CubicMap::psi_standard(nu.clone())?, depth)?;
    let complex = complex_critical_grid(&p, depth, cfg)?;
    Ok(json!({
        "param": p.to_json(),
        "complex": complex.to_json(),
        "series_grid": series.to_json(),
        "agree": complex.grid.same_marks(&series),
    }))
}

fn dispatch(cli: &Cli, cfg: &Config) -> std::result::Result<Vec<Item>, Usage> {
    let jobs = cli.jobs.max(1);
    let out = match &cli.command {
        Command::Classify { map, depth } => {
            let d = depth.unwrap_or(cfg.depth_budget);
            batch(jobs, &maps(map)?, |f| Ok(classify(f, d)?.to_json()))
        }
        Command::Grid { map, depth, check } => {
            if let Some(path) = check {
                let g = read_grid(path)?;
                vec![check_admissible(&g).map(|()| json!({"admissible": true, "depth": g.depth()}))]
            } else {
                let d = depth.ok_or_else(|| Usage("--depth is required".into()))?;
                batch(jobs, &maps(map)?, |f| Ok(critical_grid(f, d)?.to_json()))
            }
        }
        Command::Ballcount { map, level } => batch(jobs, &maps(map)?, |f| {
            let ls = level_structure(f, *level)?;
            Ok(json!({"count": ls.count(*level), "level": level}))
        }),
        Command::Component { map, depth } => {
            let d = depth.unwrap_or(cfg.depth_budget);
            batch(jobs, &maps(map)?, |f| Ok(component_of_critical(f, d)?.to_json()))
        }
        Command::Itinerary { map, point, depth } => {
            let z = series_arg("point", point)?;
            batch(jobs, &maps(map)?, |f| {
                let it = itinerary(f, &z, *depth)?;
                Ok(json!({"symbols": it.symbols, "level": it.level}))
            })
        }
        Command::Center { seed, level, precision } => {
            let target = precision_arg(precision, cfg)?;
            batch(jobs, &nus("seed", seed)?, |s| {
                let search = find_center_search(s, *level, &target)?;
                let ball = parameter_ball(s, *level)?;
                let mut v = ball.to_json();
                v["center"] = series_to_json(&search.center);
                v["center_text"] = json!(search.center.to_string());
                v["iterations"] = json!(search.iterations);
                v["precision"] = json!(fmt_rational(&target));
                Ok(v)
            })
        }
        Command::Realize { grid, precision } => {
            let g = read_grid(grid)?;
            let target = precision_arg(precision, cfg)?;
            vec![realize_grid(&g, &target).map(|nu| {
                json!({"nu": series_to_json(&nu), "nu_text": nu.to_string(), "grid": g.to_json()})
            })]
        }
        Command::Degree { nu, depth, precision } => {
            let target = precision_arg(precision, cfg)?;
            batch(jobs, &nus("nu", nu)?, |s| {
                let h = center_history(s, *depth, &target)?;
                let mut v = degree_json(&algebraic_degree(&h)?);
                v["log_radii"] = json!(h.iter().map(|(_, r)| fmt_rational(r)).collect::<Vec<_>>());
                Ok(v)
            })
        }
        Command::BridgeEval { nu, t, trunc } => {
            let t = t_arg(t)?;
            let trunc = match trunc {
                Some(s) => rational_arg("trunc", s)?,
                None => qi(cfg.precision),
            };
            batch(jobs, &nus("nu", nu)?, |s| Ok(evaluate_at_T(s, t, &trunc, &cfg.bridge)?.to_json()))
        }
        Command::BridgeCheck { nu, t, depth, trunc } => {
            let t = t_arg(t)?;
            let trunc = match trunc {
                Some(s) => rational_arg("trunc", s)?,
                None => qi(cfg.precision),
            };
            batch(jobs, &nus("nu", nu)?, |s| bridge_check(s, t, *depth, &trunc, &cfg.bridge))
        }
    };
    Ok(out)
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(x, indent + 1, out);
                    }
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar_text(x).unwrap_or_default())),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{v}\n"),
        Format::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    }
}

/// Runs one command line (including the program name) under `cfg`.
pub fn run<I, T>(args: I, cfg: &Config) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut cfg = cfg.clone();
    cfg.bridge.big_float |= cli.big_float;
    let items = match dispatch(&cli, &cfg) {
        Ok(items) => items,
        Err(Usage(msg)) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    let failed = items.iter().any(|r| r.is_err());
    let values: Vec<Value> = items.into_iter().map(|r| r.unwrap_or_else(|e| error_json(&e))).collect();
    let report = if values.len() == 1 { values.into_iter().next().unwrap() } else { Value::Array(values) };
    Outcome { code: if failed { 1 } else { 0 }, stdout: render(&report, cli.format), stderr: String::new() }
}

/// Configuration from the file named by `PDYN_CONFIG`, or the defaults.
pub fn load_config() -> std::result::Result<Config, String> {
    match std::env::var_os("PDYN_CONFIG") {
        None => Ok(Config::default()),
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("PDYN_CONFIG: cannot read {}: {e}", PathBuf::from(&path).display()))?;
            Config::parse(&text).map_err(|e| format!("PDYN_CONFIG: {e}"))
        }
    }
}
