use std::fmt;
use std::str::FromStr;

use super::config::ColorConfig;
use super::form::{edge_value, OneForm};
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Fca,
    Ghm,
    Cca,
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "fca" => Ok(Rule::Fca),
            "ghm" => Ok(Rule::Ghm),
            "cca" => Ok(Rule::Cca),
            other => Err(Error::Parse(format!("unknown rule {other:?} (expected fca, ghm or cca)"))),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Fca => "fca",
            Rule::Ghm => "ghm",
            Rule::Cca => "cca",
        })
    }
}

/// Site update for one rule. Returns the new color and whether the site was excited.
#[inline]
pub(crate) fn update(rule: Rule, kappa: u8, c: u8, left: Option<u8>, right: Option<u8>) -> (u8, bool) {
    let inc = if c + 1 == kappa { 0 } else { c + 1 };
    let has = |v: u8| left == Some(v) || right == Some(v);
    match rule {
        Rule::Fca => {
            let b = (kappa - 1) / 2;
            if c > b && has(b) {
                (c, true)
            } else {
                (inc, false)
            }
        }
        Rule::Ghm => {
            if c == 0 {
                if has(1) {
                    (1, true)
                } else {
                    (0, false)
                }
            } else {
                (inc, false)
            }
        }
        Rule::Cca => {
            if has(inc) {
                (inc, true)
            } else {
                (c, false)
            }
        }
    }
}

/// What happened during one step `t → t+1`. Sites and edges are coordinates;
/// edge `x` means `(x, x+1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepReport {
    pub time: u64,
    pub excited: Vec<i64>,
    pub blinking: Vec<i64>,
    pub flipped_edges: Vec<i64>,
}

pub fn step(config: &ColorConfig, rule: Rule) -> (ColorConfig, StepReport) {
    let (next, excited_flags) = step_flags(config, rule);
    let geom = config.geometry();
    let b = config.blink();
    let mut report = StepReport { time: config.time(), ..Default::default() };
    for (i, (&c, &ex)) in config.sites().iter().zip(&excited_flags).enumerate() {
        if ex {
            report.excited.push(geom.coordinate(i));
        }
        if c == b {
            report.blinking.push(geom.coordinate(i));
        }
    }
    report.flipped_edges = flipped_edges(config, &next);
    (next, report)
}

/// Next configuration plus per-site excitation flags, without building a report.
pub(crate) fn step_flags(config: &ColorConfig, rule: Rule) -> (ColorConfig, Vec<bool>) {
    let geom = config.geometry();
    let kappa = config.kappa_u8();
    let sites = config.sites();
    let mut next = Vec::with_capacity(sites.len());
    let mut flags = Vec::with_capacity(sites.len());
    for (i, &c) in sites.iter().enumerate() {
        let (l, r) = geom.neighbors(i);
        let (v, ex) = update(rule, kappa, c, l.map(|j| sites[j]), r.map(|j| sites[j]));
        next.push(v);
        flags.push(ex);
    }
    (ColorConfig::from_parts(kappa, next, geom, config.time() + 1), flags)
}

pub fn step_fca(config: &ColorConfig) -> (ColorConfig, StepReport) {
    step(config, Rule::Fca)
}

pub fn step_ghm(config: &ColorConfig) -> (ColorConfig, StepReport) {
    step(config, Rule::Ghm)
}

pub fn step_cca(config: &ColorConfig) -> (ColorConfig, StepReport) {
    step(config, Rule::Cca)
}

/// Edges whose 1-form value is nonzero before and after and changes sign.
pub fn flipped_edges(before: &ColorConfig, after: &ColorConfig) -> Vec<i64> {
    let geom = before.geometry();
    let kappa = before.kappa_u8();
    let (x, y) = (before.sites(), after.sites());
    (0..geom.edge_count())
        .filter(|&e| {
            let r = geom.edge_right(e);
            let d0 = edge_value(kappa, x[e], x[r]);
            let d1 = edge_value(kappa, y[e], y[r]);
            (d0 as i16) * (d1 as i16) < 0
        })
        .map(|e| geom.coordinate(e))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub final_config: ColorConfig,
    /// `ne_t(x)` for every stored site, in storage order.
    pub excitation_counts: Vec<u64>,
    /// Time `t` of the last step `t → t+1` that flipped an edge.
    pub last_flip: Option<u64>,
}

/// Run `steps` updates. The observer sees the configuration at time `t`
/// together with the report for the step `t → t+1`.
pub fn simulate<F>(config: &ColorConfig, rule: Rule, steps: u64, mut observer: F) -> Trajectory
where
    F: FnMut(&ColorConfig, &StepReport),
{
    let mut cur = config.clone();
    let mut counts = vec![0u64; cur.len()];
    let mut last_flip = None;
    for _ in 0..steps {
        let (next, report) = step(&cur, rule);
        for &x in &report.excited {
            counts[cur.geometry().index(x).expect("reported site is in the window")] += 1;
        }
        if !report.flipped_edges.is_empty() {
            last_flip = Some(report.time);
        }
        observer(&cur, &report);
        cur = next;
    }
    Trajectory { final_config: cur, excitation_counts: counts, last_flip }
}

/// The 1-form of the configuration reached after `steps` FCA updates.
pub fn evolve_form(config: &ColorConfig, steps: u64) -> OneForm {
    let mut lat = super::kernel::BulkLattice::from_config(config, Rule::Fca);
    lat.run(steps);
    OneForm::of(&lat.to_config())
}
