use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::SummaryStats;
use crate::error::{Error, Result};
use crate::lattice::{check_kappa, BulkLattice};
use crate::rng::{fill_colors, substream};
use crate::stats::{fit_inverse_sqrt, mean_stderr};

/// One row of the cluster-rate CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterRow {
    pub kappa: u32,
    pub t: u64,
    #[serde(rename = "L")]
    pub l: usize,
    pub runs: u64,
    pub edges_sampled: u64,
    pub p_hat: f64,
    /// Binomial error with `n_eff = runs·L/(2t+1)`.
    pub stderr: f64,
    pub sqrt_t_p_hat: f64,
}

pub const CLUSTER_HEADER: [&str; 8] = ["kappa", "t", "L", "runs", "edges_sampled", "p_hat", "stderr", "sqrt_t_p_hat"];

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub rows: Vec<ClusterRow>,
    /// Standard error from the spread of per-run frequencies (NaN for one run).
    pub between_run_stderr: Vec<f64>,
    pub site_updates: u64,
    pub summary: SummaryStats,
}

/// Disagreement counts of one cycle run at each (sorted) time point.
fn one_run(cfg: &ExperimentConfig, len: usize, times: &[u64], run: u64) -> Result<Vec<u64>> {
    let mut colors = vec![0u8; len];
    fill_colors(&mut substream(cfg.seed, run), cfg.kappa as u8, &mut colors);
    let mut lat = BulkLattice::cycle(cfg.kappa, cfg.rule, &colors)?;
    drop(colors);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        lat.run(t - lat.time());
        out.push(lat.disagreements());
    }
    Ok(out)
}

/// Edge-disagreement frequency on random cycles at each configured time.
///
/// Runs are independent cycles of length `L` seeded by `mix(seed, run)`;
/// every edge of every run is sampled. Edges closer than `2t+1` share light
/// cones, so the reported error treats each such block as one sample.
pub fn cluster_rate_experiment(cfg: &ExperimentConfig) -> Result<ClusterResult> {
    check_kappa(cfg.kappa)?;
    if cfg.times.is_empty() {
        return Err(Error::invalid("no time points"));
    }
    if cfg.trials == 0 {
        return Err(Error::invalid("runs must be positive"));
    }
    let len = cfg.cycle_length()?;
    let mut times = cfg.times.clone();
    times.sort_unstable();
    times.dedup();
    let per_run: Vec<Vec<u64>> =
        (0..cfg.trials).into_par_iter().map(|r| one_run(cfg, len, &times, r)).collect::<Result<_>>()?;

    let edges = cfg.trials * len as u64;
    let mut rows = Vec::with_capacity(times.len());
    let mut between = Vec::with_capacity(times.len());
    let mut summary = SummaryStats::default();
    for (k, &t) in times.iter().enumerate() {
        let hits: u64 = per_run.iter().map(|v| v[k]).sum();
        let p = hits as f64 / edges as f64;
        let n_eff = (edges as f64 / (2 * t + 1) as f64).max(1.0);
        let se = (p * (1.0 - p) / n_eff).sqrt();
        let fractions: Vec<f64> = per_run.iter().map(|v| v[k] as f64 / len as f64).collect();
        between.push(mean_stderr(&fractions).1);
        summary.push(format!("p_hat(t={t})"), p, se);
        rows.push(ClusterRow {
            kappa: cfg.kappa,
            t,
            l: len,
            runs: cfg.trials,
            edges_sampled: edges,
            p_hat: p,
            stderr: se,
            sqrt_t_p_hat: (t as f64).sqrt() * p,
        });
    }
    summary.notes.push(format!(
        "stderr uses n_eff = runs*L/(2t+1) (light-cone blocks); between-run stderr: {between:?}"
    ));
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.t > 0).map(|r| (r.t as f64, r.sqrt_t_p_hat)).collect();
    if pts.len() >= 3 {
        summary.fit = fit_inverse_sqrt(&pts).ok();
    }
    let site_updates = edges * times.last().copied().unwrap_or(0);
    Ok(ClusterResult { rows, between_run_stderr: between, site_updates, summary })
}
