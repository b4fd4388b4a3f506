//! Command-line flags, the key=value config file and their merge.

use std::path::{Path, PathBuf};

use blochkit::search::SamplingConfig;
use clap::Args;

use crate::report::Format;
use crate::CliError;

pub const SEED_ENV: &str = "BLOCHKIT_SEED";

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Domain, e.g. disk, ball:2, polydisk:3, cartan1:3,2, product(ball:2,disk)
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// Holomorphic symbol, e.g. "z1*z2 - 0.5", "fw(1, 0.3+0.4i)", "h(2, i)"
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub symbol: Option<String>,
    /// Comma-separated complex coordinates
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Defaults to $BLOCHKIT_SEED, then 42
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated shell radii for boundedness verdicts
    #[arg(long, global = true)]
    pub shells: Option<String>,
    /// Comma-separated, strictly decreasing distances to the distinguished boundary
    #[arg(long = "eps-ladder", global = true)]
    pub eps_ladder: Option<String>,
    #[arg(long = "refine-iters", global = true)]
    pub refine_iters: Option<usize>,
    /// verify: q-oracle, omega, product-rule, growth-lemma, norm-sandwich,
    /// spectrum, compactness, isometry, constants or all
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// probe: omega-vs-rho, omega-vs-omega0, omega0-blowup or norm-sharpness
    #[arg(long, global = true)]
    pub question: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Power depth for isometry checks
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// spectrum: query point for the nearest-distance and resolvent scale
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record wall time in elapsed_ms (reports are then no longer byte-stable)
    #[arg(long, global = true)]
    pub timing: bool,
}

/// Resolved settings of one invocation.
#[derive(Debug, Clone)]
pub struct Settings {
    pub domain: Option<String>,
    pub symbol: Option<String>,
    pub point: Option<String>,
    pub sampling: SamplingConfig,
    pub suite: Option<String>,
    pub question: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub k: usize,
    pub lambda: Option<String>,
    pub timing: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_list(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("{key}: cannot parse '{s}'"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, text: &str) -> Result<T, CliError> {
    text.trim().parse().map_err(|_| usage(format!("{key}: cannot parse '{text}'")))
}

/// Reads a flat `key = value` file; blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl Settings {
    pub fn resolve(args: &CommonArgs) -> Result<Settings, CliError> {
        let mut a = args.clone();
        let mut env_seed = None;
        if let Ok(s) = std::env::var(SEED_ENV) {
            env_seed = Some(parse_num::<u64>(SEED_ENV, &s)?);
        }
        if let Some(path) = &args.config {
            for (k, v) in read_config_file(path)? {
                let set = |slot: &mut Option<String>| {
                    if slot.is_none() {
                        *slot = Some(v.clone());
                    }
                };
                match k.as_str() {
                    "domain" => set(&mut a.domain),
                    "symbol" => set(&mut a.symbol),
                    "point" => set(&mut a.point),
                    "shells" => set(&mut a.shells),
                    "eps-ladder" => set(&mut a.eps_ladder),
                    "suite" => set(&mut a.suite),
                    "question" => set(&mut a.question),
                    "lambda" => set(&mut a.lambda),
                    "samples" => a.samples = a.samples.or(Some(parse_num(&k, &v)?)),
                    "seed" => a.seed = a.seed.or(Some(parse_num(&k, &v)?)),
                    "refine-iters" => a.refine_iters = a.refine_iters.or(Some(parse_num(&k, &v)?)),
                    "k" => a.k = a.k.or(Some(parse_num(&k, &v)?)),
                    "out" => a.out = a.out.take().or(Some(PathBuf::from(&v))),
                    "format" => {
                        if a.format.is_none() {
                            a.format = Some(<Format as clap::ValueEnum>::from_str(&v, true).map_err(usage)?);
                        }
                    }
                    _ => return Err(usage(format!("config: unknown key '{k}'"))),
                }
            }
        }
        let mut sampling = SamplingConfig::default();
        if let Some(n) = a.samples {
            if n == 0 {
                return Err(usage("samples must be at least 1"));
            }
            sampling.samples = n;
        }
        sampling.seed = a.seed.or(env_seed).unwrap_or(42);
        if let Some(r) = a.refine_iters {
            sampling.refine_iters = r;
        }
        if let Some(s) = &a.shells {
            let v = parse_list("shells", s)?;
            if v.iter().any(|&r| !(0.0..1.0).contains(&r)) || v.windows(2).any(|w| w[1] <= w[0]) {
                return Err(usage("shells must increase within [0, 1)"));
            }
            sampling.shells = v;
        }
        if let Some(s) = &a.eps_ladder {
            let v = parse_list("eps-ladder", s)?;
            if v.iter().any(|&e| !(e > 0.0 && e < 1.0)) || v.windows(2).any(|w| w[1] >= w[0]) {
                return Err(usage("eps-ladder must decrease strictly within (0, 1)"));
            }
            sampling.eps_ladder = v;
        }
        Ok(Settings {
            domain: a.domain,
            symbol: a.symbol,
            point: a.point,
            sampling,
            suite: a.suite,
            question: a.question,
            out: a.out,
            format: a.format.unwrap_or_default(),
            k: a.k.unwrap_or(16),
            lambda: a.lambda,
            timing: a.timing,
        })
    }
}
