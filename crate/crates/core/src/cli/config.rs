use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{Command, Options};
use crate::error::{Error, Result};
use crate::geometry::PathKind;
use crate::priors::{LatentPrior, PriorFamily};

pub const SEED_ENV: &str = "LATENTGEOM_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl std::str::FromStr for Formats {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut f = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => {
                    return Err(Error::InvalidConfig(format!("unknown output format {other:?}")))
                }
            }
        }
        if !(f.csv || f.json || f.svg) {
            return Err(Error::InvalidConfig("at least one output format is required".into()));
        }
        Ok(f)
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub prior: LatentPrior,
    pub dims: Vec<usize>,
    pub n: usize,
    pub pairs: usize,
    pub steps: usize,
    pub grid: usize,
    pub seed: u64,
    pub scheme: PathKind,
    pub checkpoint: Option<PathBuf>,
    pub out: PathBuf,
    pub formats: Formats,
    pub equal_norm: bool,
    pub attributes: usize,
    pub per_group: usize,
    pub noise: f64,
    pub vectors: Option<PathBuf>,
    pub per_pair: bool,
    /// Whether prior family or dimension were given explicitly.
    pub prior_explicit: bool,
}

const KNOWN_KEYS: &[&str] = &[
    "prior", "dim", "dims", "sigma", "theta", "n", "pairs", "steps", "grid", "seed", "scheme",
    "checkpoint", "out", "format", "equal_norm", "attributes", "per_group", "noise", "vectors",
    "per_pair",
];

/// Parse `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!("config line {}: expected key=value", lineno + 1))
        })?;
        let key = k.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::InvalidConfig(format!(
                "config line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value {v:?} for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::InvalidConfig(format!("bad boolean {v:?} for {key}"))),
    }
}

fn parse_dims(v: &str) -> Result<Vec<usize>> {
    v.split(',')
        .map(|s| parse_value::<usize>("dims", s.trim()))
        .collect()
}

struct Layered<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layered<'_> {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.file.get(key).map(|v| parse_value(key, v)).transpose(),
        }
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.file
            .get(key)
            .map(|v| parse_bool(key, v))
            .transpose()
            .map(|b| b.unwrap_or(false))
    }
}

impl RunConfig {
    /// Resolve flags over config file over environment over defaults.
    pub fn resolve(
        command: Command,
        opts: &Options,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self> {
        let file = match &opts.config {
            Some(p) => load_config(p)?,
            None => BTreeMap::new(),
        };
        let l = Layered { file: &file };

        let (default_family, default_dim) = match command {
            Command::TrainToy => (PriorFamily::GammaRadius, 32),
            _ => (PriorFamily::Normal, 100),
        };
        let family_s: Option<String> = l.get(opts.prior.clone(), "prior")?;
        let dim_opt: Option<usize> = l.get(opts.dim, "dim")?;
        let prior_explicit = family_s.is_some() || dim_opt.is_some();
        let family = family_s
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(default_family);
        let dim = dim_opt.unwrap_or(default_dim);
        let scale = match family {
            PriorFamily::Normal => l.get(opts.sigma, "sigma")?.unwrap_or(1.0),
            PriorFamily::GammaRadius => l.get(opts.theta, "theta")?.unwrap_or(1.0),
        };
        let prior = LatentPrior::new(family, dim, scale)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;

        let dims = match l.get(opts.dims.clone(), "dims")? {
            Some(s) => parse_dims(&s)?,
            None => vec![dim],
        };
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidConfig("dimensions must be positive".into()));
        }

        let seed = match l.get(opts.seed, "seed")? {
            Some(s) => s,
            None => match env(SEED_ENV) {
                Some(v) => parse_value(SEED_ENV, v.trim())?,
                None => 0,
            },
        };
        let scheme = l
            .get(opts.scheme.clone(), "scheme")?
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(PathKind::Linear);
        let format_s: Option<String> = l.get(opts.format.clone(), "format")?;
        let formats = format_s.as_deref().unwrap_or("csv").parse()?;

        let (default_n, default_pairs) = match command {
            Command::Sample => (1000, 0),
            Command::Kl => (1_000_000, 0),
            Command::McVerify => (100_000, 100_000),
            Command::Traverse => (0, 1000),
            _ => (0, 0),
        };

        let cfg = RunConfig {
            prior,
            dims,
            n: l.get(opts.n, "n")?.unwrap_or(default_n),
            pairs: l.get(opts.pairs, "pairs")?.unwrap_or(default_pairs),
            steps: l.get(opts.steps, "steps")?.unwrap_or(5000),
            grid: l.get(opts.grid, "grid")?.unwrap_or(20),
            seed,
            scheme,
            checkpoint: l.get(opts.checkpoint.clone(), "checkpoint")?,
            out: l.get(opts.out.clone(), "out")?.unwrap_or_else(|| PathBuf::from(".")),
            formats,
            equal_norm: l.flag(opts.equal_norm, "equal_norm")?,
            attributes: l.get(opts.attributes, "attributes")?.unwrap_or(4),
            per_group: l.get(opts.per_group, "per_group")?.unwrap_or(256),
            noise: l.get(opts.noise, "noise")?.unwrap_or(0.01),
            vectors: l.get(opts.vectors.clone(), "vectors")?,
            per_pair: l.flag(opts.per_pair, "per_pair")?,
            prior_explicit,
        };
        Ok(cfg)
    }
}

fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_text(&text)
}
