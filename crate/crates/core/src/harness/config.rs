use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Rule;

/// How excitation counts at the origin are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Simulate the automaton and count.
    Direct,
    /// Maximum tournament rank at time 1 within radius τ.
    #[default]
    Tournament,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "tournament" => Ok(Method::Tournament),
            _ => Err(Error::Parse(format!("unknown method {s:?} (expected direct or tournament)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Tournament => "tournament",
        })
    }
}

/// Parameters of one experiment; echoed verbatim into output metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub kappa: u32,
    pub rule: Rule,
    /// Time points for cluster-rate runs.
    pub times: Vec<u64>,
    /// Cycle length; 0 picks the smallest power of two `≥ 2·max(times) + 2`.
    pub length: usize,
    /// Independent runs (cluster rate) or trials (excitations).
    pub trials: u64,
    /// Radius τ for excitation experiments.
    pub tau: u64,
    pub method: Method,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            kappa: 3,
            rule: Rule::Fca,
            times: vec![100, 400, 1600],
            length: 0,
            trials: 1,
            tau: 100,
            method: Method::Tournament,
            seed: 1,
            out: None,
        }
    }
}

const KEYS: [&str; 10] = ["name", "kappa", "rule", "times", "length", "trials", "tau", "method", "seed", "out"];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: cannot parse {v:?}")))
}

impl ExperimentConfig {
    /// Parse line-oriented `key = value` text on top of the defaults.
    /// Blank lines and `#` comments are skipped; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", no + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "name" => self.name = v.to_string(),
            "kappa" => self.kappa = num(key, v)?,
            "rule" => self.rule = v.parse()?,
            "times" => {
                self.times = if v.is_empty() {
                    Vec::new()
                } else {
                    v.split(',').map(|s| num(key, s.trim())).collect::<Result<_>>()?
                }
            }
            "length" => self.length = num(key, v)?,
            "trials" => self.trials = num(key, v)?,
            "tau" => self.tau = num(key, v)?,
            "method" => self.method = v.parse()?,
            "seed" => self.seed = num(key, v)?,
            "out" => self.out = (!v.is_empty()).then(|| PathBuf::from(v)),
            _ => return Err(Error::Parse(format!("unknown key {key:?} (known: {})", KEYS.join(", ")))),
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    /// The `key = value` form read by `parse`.
    pub fn to_text(&self) -> String {
        let times: Vec<String> = self.times.iter().map(|t| t.to_string()).collect();
        let out = self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        format!(
            "name = {}\nkappa = {}\nrule = {}\ntimes = {}\nlength = {}\ntrials = {}\ntau = {}\nmethod = {}\nseed = {}\nout = {}\n",
            self.name,
            self.kappa,
            self.rule,
            times.join(","),
            self.length,
            self.trials,
            self.tau,
            self.method,
            self.seed,
            out
        )
    }

    /// Cycle length actually used for the given horizon.
    pub fn cycle_length(&self) -> Result<usize> {
        let t = self.times.iter().copied().max().unwrap_or(0) as usize;
        let need = 2 * t + 2;
        if self.length == 0 {
            return Ok(need.next_power_of_two().max(64));
        }
        if self.length < need {
            return Err(Error::WindowTooSmall(format!(
                "cycle length {} < 2t+2 = {need}; light cones would wrap",
                self.length
            )));
        }
        Ok(self.length)
    }
}
