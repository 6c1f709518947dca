//! Field/group specifications and the sweep configuration.
//!
//! A sweep is configured by `key = value` pairs, read from a file and/or
//! given as flags (flags win). Lists are comma separated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qacodes_core::bounds::gv_zero;
use qacodes_core::{AbelianGroup, Field, GroupAlgebra, DEFAULT_ENUMERATION_BUDGET};

use crate::error::{CliError, Result};

/// `GF(p^e)`, optionally with an explicit modulus `c_0, ..., c_e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    /// Accepts `q` (a prime power) or `p^e`.
    pub fn parse(s: &str, modulus: Option<&str>) -> Result<Self> {
        let s = s.trim();
        let (p, e) = match s.split_once('^') {
            Some((p, e)) => (parse_num::<u32>("field", p)?, parse_num::<u32>("field", e)?),
            None => prime_power(parse_num::<u32>("field", s)?)
                .ok_or_else(|| CliError::usage(format!("field size {s} is not a prime power")))?,
        };
        let modulus = modulus.map(|m| parse_list::<u32>("modulus", m)).transpose()?;
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn build(&self) -> Result<Field> {
        Ok(Field::new(self.p, self.e, self.modulus.as_deref())?)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.e)
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// `1` (trivial), `m` or `m1xm2x...`.
pub fn parse_group(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    s.split(['x', 'X']).map(|t| parse_num::<u32>("group", t)).collect()
}

pub fn build_algebra(field: &FieldSpec, group: &[u32]) -> Result<GroupAlgebra> {
    Ok(GroupAlgebra::new(field.build()?, AbelianGroup::new(group)?))
}

pub fn parse_num<T: FromStr>(what: &str, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| CliError::usage(format!("invalid {what}: {s:?}")))
}

pub fn parse_list<T: FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_num(what, t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every message is enumerated; exceeding the budget is an error.
    Exact,
    /// Messages are always sampled.
    MonteCarlo,
    /// Exact when `q^{mk}` fits the budget, sampled otherwise.
    Auto,
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Mode::Exact),
            "montecarlo" => Ok(Mode::MonteCarlo),
            "auto" => Ok(Mode::Auto),
            other => Err(CliError::usage(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::usage(format!("unknown format {other:?}"))),
        }
    }
}

/// Messages drawn per trial when enumeration is out of budget.
pub const DEFAULT_SAMPLES: u64 = 100_000;

pub const CONFIG_KEYS: [&str; 15] = [
    "field", "modulus", "group", "r", "deltas", "ns", "trials", "seed", "mode", "budget", "samples", "output",
    "format", "workers", "timing",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub field: FieldSpec,
    pub group: Vec<u32>,
    pub r: f64,
    pub deltas: Vec<f64>,
    /// Strictly increasing.
    pub ns: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Cap on `q^{mk}` for exact message enumeration.
    pub budget: u64,
    pub samples: u64,
    /// Output directory.
    pub output: PathBuf,
    pub format: Format,
    /// Worker threads; `None` lets the pool decide. Never affects results.
    pub workers: Option<usize>,
    /// Record wall-clock time per trial. Off by default so that outputs are reproducible.
    pub timing: bool,
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", no + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_pairs(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_pairs(&text)
}

impl SweepConfig {
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(bad) = pairs.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
            return Err(CliError::usage(format!("unknown config key {bad:?}")));
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let need = |k: &str| get(k).ok_or_else(|| CliError::usage(format!("missing required setting {k}")));
        let cfg = SweepConfig {
            field: FieldSpec::parse(get("field").unwrap_or("2"), get("modulus"))?,
            group: parse_group(get("group").unwrap_or("1"))?,
            r: parse_num("r", need("r")?)?,
            deltas: parse_list("deltas", need("deltas")?)?,
            ns: parse_list("ns", need("ns")?)?,
            trials: get("trials").map(|v| parse_num("trials", v)).transpose()?.unwrap_or(100),
            seed: parse_num("seed", need("seed")?)?,
            mode: get("mode").map(str::parse).transpose()?.unwrap_or(Mode::Auto),
            budget: get("budget").map(|v| parse_num("budget", v)).transpose()?.unwrap_or(DEFAULT_ENUMERATION_BUDGET),
            samples: get("samples").map(|v| parse_num("samples", v)).transpose()?.unwrap_or(DEFAULT_SAMPLES),
            output: PathBuf::from(get("output").unwrap_or("sweep-out")),
            format: get("format").map(str::parse).transpose()?.unwrap_or(Format::Csv),
            workers: get("workers").map(|v| parse_num("workers", v)).transpose()?,
            timing: get("timing").map(|v| parse_num("timing", v)).transpose()?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.field.build()?.q();
        AbelianGroup::new(&self.group)?;
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(CliError::usage(format!("r = {} outside (0, 1)", self.r)));
        }
        if self.deltas.is_empty() || self.ns.is_empty() {
            return Err(CliError::usage("deltas and ns must be nonempty"));
        }
        let top = gv_zero(q);
        if let Some(d) = self.deltas.iter().find(|&&d| !(d > 0.0 && d < top)) {
            return Err(CliError::usage(format!("delta {d} outside (0, {top})")));
        }
        if self.ns[0] == 0 || self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::usage("ns must be positive and strictly increasing"));
        }
        if self.trials == 0 || self.samples == 0 {
            return Err(CliError::usage("trials and samples must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(CliError::usage("workers must be at least 1"));
        }
        Ok(())
    }
}
