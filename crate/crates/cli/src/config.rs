//! Run configuration: file values overridden by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use skly_core::exactla::DEFAULT_PRIME;
use skly_core::ncgraded::MAX_CAP;
use skly_core::paperchecks::{Params, SuiteConfig, CHECKS};
use skly_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
    Csv,
}

/// Flags shared by all commands.
#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// Key/value config file (TOML, or JSON when the name ends in .json)
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Field characteristic, a prime ≡ 1 mod 3 below 2^32
    #[arg(long)]
    pub prime: Option<u64>,
    /// Parameter triple `a,b,c` or `random`
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest degree of S that is computed
    #[arg(long)]
    pub cap: Option<usize>,
    /// σ must have order above this bound
    #[arg(long)]
    pub order_threshold: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Record wall-clock times in reports (makes output run-dependent)
    #[arg(long)]
    pub timings: bool,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum ParamsValue {
    Triple([u64; 3]),
    Text(String),
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
enum ListValue {
    List(Vec<String>),
    Text(String),
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    prime: Option<u64>,
    params: Option<ParamsValue>,
    seed: Option<u64>,
    cap: Option<usize>,
    order_threshold: Option<u64>,
    suite: Option<ListValue>,
    format: Option<Format>,
    out: Option<PathBuf>,
    divisor: Option<String>,
    nmax: Option<usize>,
    timings: Option<bool>,
}

/// The resolved configuration; embedded in every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub prime: u64,
    pub params: Params,
    pub seed: u64,
    pub cap: usize,
    pub order_threshold: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suite: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(skip)]
    pub format: Option<Format>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|x| x == "json") {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Error::Usage(format!("bad config {}: {e}", path.display())))
}

pub fn parse_params(s: &str) -> Result<Params> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("random") {
        return Ok(Params::Random);
    }
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Usage(format!("params must be `a,b,c` or `random`, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut abc = [0u64; 3];
    for (slot, part) in abc.iter_mut().zip(parts) {
        *slot = part.parse().map_err(|_| bad())?;
    }
    Ok(Params::Fixed(abc))
}

fn parse_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

impl Config {
    /// Merges the optional config file with flags; flags win.
    pub fn resolve(
        args: &CommonArgs,
        suite: &[String],
        divisor: Option<&str>,
        nmax: Option<usize>,
    ) -> Result<Config> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let params = match (&args.params, file.params) {
            (Some(s), _) => parse_params(s)?,
            (None, Some(ParamsValue::Text(s))) => parse_params(&s)?,
            (None, Some(ParamsValue::Triple(abc))) => Params::Fixed(abc),
            (None, None) => Params::Random,
        };
        let mut suite_list: Vec<String> = suite.iter().flat_map(|s| parse_list(s)).collect();
        if suite_list.is_empty() {
            suite_list = match file.suite {
                Some(ListValue::List(v)) => v,
                Some(ListValue::Text(s)) => parse_list(&s),
                None => Vec::new(),
            };
        }
        if suite_list.iter().any(|s| s == "all") {
            suite_list.clear();
        }
        if let Some(bad) = suite_list.iter().find(|s| !CHECKS.contains(&s.as_str())) {
            return Err(Error::Usage(format!(
                "unknown check {bad:?}; known checks: {}",
                CHECKS.join(", ")
            )));
        }
        let cfg = Config {
            prime: args.prime.or(file.prime).unwrap_or(DEFAULT_PRIME),
            params,
            seed: args.seed.or(file.seed).unwrap_or(1),
            cap: args.cap.or(file.cap).unwrap_or(MAX_CAP),
            order_threshold: args.order_threshold.or(file.order_threshold).unwrap_or(200),
            suite: suite_list,
            divisor: divisor.map(String::from).or(file.divisor),
            nmax: nmax.or(file.nmax),
            format: args.format.or(file.format),
            out: args.out.clone().or(file.out),
            timings: args.timings || file.timings.unwrap_or(false),
        };
        if cfg.cap > MAX_CAP {
            return Err(Error::Usage(format!("cap {} exceeds {MAX_CAP}", cfg.cap)));
        }
        if cfg.order_threshold == 0 {
            return Err(Error::Usage("order threshold must be at least 1".into()));
        }
        if let Params::Fixed(abc) = cfg.params {
            if abc.iter().any(|&v| v == 0 || v >= cfg.prime) {
                return Err(Error::Usage(format!(
                    "parameters must lie in 1..{}, got {abc:?}",
                    cfg.prime
                )));
            }
        }
        Ok(cfg)
    }

    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            prime: self.prime,
            params: self.params,
            seed: self.seed,
            cap: self.cap,
            order_threshold: self.order_threshold,
            ..SuiteConfig::default()
        }
    }
}
