use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Method};
use super::SummaryStats;
use crate::constants::GAMMA_SQUARED;
use crate::error::{Error, Result};
use crate::lattice::kernel::{origin_excitations, update_row};
use crate::lattice::{
    burn_in, check_kappa, edge_value, step_fca, tournament_step, ColorConfig, Ranking, Rule,
};
use crate::rng::{random_colors, substream};
use crate::stats::{ks_distance, two_sided_max_cdf, two_sided_max_pdf, two_sided_max_quantile};

/// Largest τ accepted by the direct method (cost grows like τ² per trial).
pub const DIRECT_TAU_MAX: u64 = 20_000;

pub const NE_HEADER: [&str; 4] = ["r", "empirical_cdf", "theory_cdf", "abs_diff"];

/// One step of `rule` on a window, dropping both end sites, so every output
/// color is exact for the infinite line.
pub fn light_cone_step(rule: Rule, kappa: u8, cur: &[u8]) -> Vec<u8> {
    let n = cur.len().saturating_sub(2);
    let mut out = vec![0u8; n];
    update_row(rule, kappa, &cur[..n], &cur[1..n + 1], &cur[2..], &mut out);
    out
}

/// `M_{t0}(r)` for `r = 0..=radius`, with `t0 = burn_in(κ)`.
///
/// `colors` is the initial window of radius `radius + t0` around the origin.
/// Ranks at time `t0` are pinned by `rk(0) = ne_{t0}(0)`.
pub fn tournament_maxima(kappa: u32, colors: &[u8], radius: usize) -> Result<Vec<i64>> {
    check_kappa(kappa)?;
    let t0 = burn_in(kappa) as usize;
    let half = radius + t0;
    if colors.len() != 2 * half + 1 {
        return Err(Error::WindowTooSmall(format!("expected {} colors, got {}", 2 * half + 1, colors.len())));
    }
    let k = kappa as u8;
    let mut cur = colors.to_vec();
    let mut ne = 0i64;
    for _ in 0..t0 {
        let next = light_cone_step(Rule::Fca, k, &cur);
        let o = cur.len() / 2;
        ne += (next[o - 1] == cur[o]) as i64;
        cur = next;
    }
    let mut table = [0i8; 256];
    for u in 0..k {
        for v in 0..k {
            table[(u as usize) * 16 + v as usize] = edge_value(k, u, v);
        }
    }
    let ev = |u: u8, v: u8| table[(u as usize) * 16 + v as usize] as i64;
    let o = radius;
    let mut out = Vec::with_capacity(radius + 1);
    out.push(ne);
    let (mut right, mut left, mut m) = (ne, ne, ne);
    for r in 1..=radius {
        right -= ev(cur[o + r - 1], cur[o + r]);
        left += ev(cur[o - r], cur[o - r + 1]);
        m = m.max(right).max(left);
        out.push(m);
    }
    Ok(out)
}

/// `M_{t0}(radius)`.
pub fn tournament_max(kappa: u32, colors: &[u8], radius: usize) -> Result<i64> {
    Ok(*tournament_maxima(kappa, colors, radius)?.last().expect("radius + 1 entries"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfRow {
    pub r: f64,
    pub empirical_cdf: f64,
    pub theory_cdf: f64,
    pub abs_diff: f64,
}

/// Empirical-vs-theory CDF table. Each distinct sample value contributes the
/// left limit and the value of the empirical CDF, so the largest `abs_diff`
/// is the KS distance.
pub fn cdf_rows(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Vec<CdfRow> {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut rows = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let mut j = i;
        while j < s.len() && s[j] == x {
            j += 1;
        }
        let f = cdf(x);
        for g in [i as f64 / n, j as f64 / n] {
            rows.push(CdfRow { r: x, empirical_cdf: g, theory_cdf: f, abs_diff: (g - f).abs() });
        }
        i = j;
    }
    rows
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationResult {
    pub method: Method,
    pub tau: u64,
    /// `M_1(τ)` (tournament) or `ne_{3τ}(0)` (direct), one per trial.
    pub raw: Vec<i64>,
    /// `raw / √(8τ/27)`.
    pub scaled: Vec<f64>,
    pub ks: f64,
    pub summary: SummaryStats,
}

fn trial_sample(method: Method, tau: u64, seed: u64, trial: u64) -> Result<i64> {
    let mut rng = substream(seed, trial);
    match method {
        Method::Tournament => {
            let colors = random_colors(&mut rng, 3, 2 * tau as usize + 3);
            tournament_max(3, &colors, tau as usize)
        }
        Method::Direct => {
            let t = 3 * tau as usize;
            let colors = random_colors(&mut rng, 3, 2 * t + 1);
            Ok(origin_excitations(3, &colors, t, t)?.iter().map(|&e| e as i64).sum())
        }
    }
}

/// Law of the excitation count at the origin for κ=3, scaled by
/// `√(8τ/27)`, with its KS distance to `F(r) = 1 − 4P(Z ≥ r)P(Z ≤ r)`.
pub fn excitation_experiment(cfg: &ExperimentConfig) -> Result<ExcitationResult> {
    if cfg.kappa != 3 {
        return Err(Error::KappaUnsupported(cfg.kappa, "the excitation law is calibrated for kappa = 3"));
    }
    if cfg.tau == 0 || cfg.trials == 0 {
        return Err(Error::invalid("tau and trials must be positive"));
    }
    if cfg.method == Method::Direct && cfg.tau > DIRECT_TAU_MAX {
        return Err(Error::invalid(format!(
            "direct method limited to tau <= {DIRECT_TAU_MAX}; use the tournament method"
        )));
    }
    let raw: Vec<i64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| trial_sample(cfg.method, cfg.tau, cfg.seed, i))
        .collect::<Result<_>>()?;
    let scale = (GAMMA_SQUARED * cfg.tau as f64).sqrt();
    let scaled: Vec<f64> = raw.iter().map(|&m| m as f64 / scale).collect();
    let ks = ks_distance(&scaled, two_sided_max_cdf);
    let mut summary = SummaryStats { ks_distance: Some(ks), ..Default::default() };
    let n = scaled.len() as f64;
    let mean = scaled.iter().sum::<f64>() / n;
    let var = scaled.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    summary.push("mean_scaled", mean, (var / n).sqrt());
    summary.push("p_nonnegative", raw.iter().filter(|&&m| m >= 0).count() as f64 / n, 0.0);
    summary.notes.push(format!("method {}, scale sqrt(8 tau/27) = {scale}", cfg.method));
    Ok(ExcitationResult { method: cfg.method, tau: cfg.tau, raw, scaled, ks, summary })
}

/// Outcome of an exact identity check over random trials.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub trials: u64,
    pub checks: u64,
    pub failures: u64,
    /// The first few failures.
    pub examples: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn merge(mut self, other: CheckReport) -> CheckReport {
        self.trials += other.trials;
        self.checks += other.checks;
        self.failures += other.failures;
        self.examples.extend(other.examples);
        self.examples.truncate(5);
        self
    }
}

pub type SandwichReport = CheckReport;

/// `M_1(τ−1) ≤ ne_{3τ+1}(0) ≤ M_1(τ)` for every `τ ≤ tau_max`, κ=3.
///
/// One initial window of radius `3·tau_max + 1` per trial serves all τ.
pub fn sandwich_check(tau_max: u64, trials: u64, seed: u64) -> Result<SandwichReport> {
    if tau_max == 0 {
        return Err(Error::invalid("tau_max must be positive"));
    }
    let tm = tau_max as usize;
    let steps = 3 * tm + 1;
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let colors = random_colors(&mut substream(seed, i), 3, 2 * steps + 1);
            let e = origin_excitations(3, &colors, steps, steps)?;
            let inner = &colors[steps - tm - 1..=steps + tm + 1];
            let m = tournament_maxima(3, inner, tm)?;
            let mut rep = CheckReport { trials: 1, ..Default::default() };
            let mut ne = 0i64;
            let mut s = 0usize;
            for tau in 1..=tm {
                while s < 3 * tau + 1 {
                    ne += e[s] as i64;
                    s += 1;
                }
                rep.checks += 1;
                if !(m[tau - 1] <= ne && ne <= m[tau]) {
                    rep.failures += 1;
                    if rep.examples.len() < 5 {
                        rep.examples.push(format!(
                            "trial {i} tau {tau}: M(tau-1)={} ne={ne} M(tau)={}",
                            m[tau - 1],
                            m[tau]
                        ));
                    }
                }
            }
            Ok(rep)
        })
        .try_reduce(CheckReport::default, |a, b| Ok(a.merge(b)))
}

/// Rank increments equal excitation indicators at every site and step, and
/// ranks rebuilt from `ne_{t+1}(origin)` and `−dX_{t+1}` equal the
/// tournament update. Segments of `len` sites, `steps` steps past burn-in.
pub fn rank_increment_check(kappas: &[u32], trials: u64, len: usize, steps: u64, seed: u64) -> Result<CheckReport> {
    let mut total = CheckReport::default();
    for &kappa in kappas {
        check_kappa(kappa)?;
        let t0 = burn_in(kappa);
        let rep = (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(seed ^ (kappa as u64) << 40, i);
                let lo = -(len as i64 / 2);
                let mut c = ColorConfig::segment(kappa, lo, random_colors(&mut rng, kappa as u8, len))?;
                for _ in 0..t0 {
                    c = step_fca(&c).0;
                }
                let mut r = Ranking::from_config(&c, 0, 0)?;
                let mut rep = CheckReport { trials: 1, ..Default::default() };
                let mut ne = 0u64;
                for _ in 0..steps {
                    let (next, report) = step_fca(&c);
                    let r2 = tournament_step(&r, &c)?;
                    let mut bad = 0u64;
                    for (j, x) in c.coordinates().enumerate() {
                        let inc = r2.ranks()[j] - r.ranks()[j];
                        bad += (inc != report.excited.contains(&x) as i64) as u64;
                    }
                    ne += report.excited.contains(&0) as u64;
                    let rebuilt = Ranking::from_config(&next, 0, ne)?;
                    bad += (rebuilt.ranks() != r2.ranks()) as u64;
                    rep.checks += len as u64 + 1;
                    if bad > 0 {
                        rep.failures += bad;
                        if rep.examples.len() < 5 {
                            rep.examples.push(format!("kappa {kappa} trial {i} t={}: {bad} mismatches", c.time()));
                        }
                    }
                    c = next;
                    r = r2;
                }
                Ok(rep)
            })
            .try_reduce(CheckReport::default, |a, b| Ok(a.merge(b)))?;
        total = total.merge(rep);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub kappa: u32,
    pub t0: u64,
    pub radius: u64,
    pub trials: u64,
    /// Fitted `σ²` per unit radius, from the sample median of `M/√r`.
    pub sigma_sq: f64,
    pub sigma_sq_stderr: f64,
    /// `sup_k [P̂(M ≤ k) − F((k + ½)/(σ̂√r))]`; small values mean `M`
    /// dominates the scaled Brownian maximum.
    pub d_plus: f64,
    /// One-sided 5% KS critical value `1.36/√N`.
    pub d_plus_critical: f64,
    pub dominates: bool,
    /// Empirical `P(M ≥ 0)`.
    pub p_nonnegative: f64,
}

/// Fit the diffusive rate of `M_{t0}(r)` and test one-sided dominance over
/// the two-sided Brownian maximum law at that rate.
pub fn general_kappa_lower_bound(cfg: &ExperimentConfig) -> Result<LowerBoundReport> {
    check_kappa(cfg.kappa)?;
    if cfg.tau == 0 || cfg.trials < 2 {
        return Err(Error::invalid("need tau > 0 and at least 2 trials"));
    }
    let t0 = burn_in(cfg.kappa);
    let r = cfg.tau as usize;
    let width = 2 * (r + t0 as usize) + 1;
    let mut raw: Vec<i64> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| tournament_max(cfg.kappa, &random_colors(&mut substream(cfg.seed, i), cfg.kappa as u8, width), r))
        .collect::<Result<_>>()?;
    raw.sort_unstable();
    let n = raw.len();
    let median = if n % 2 == 1 { raw[n / 2] as f64 } else { (raw[n / 2 - 1] + raw[n / 2]) as f64 / 2.0 };
    let m_star = two_sided_max_quantile(0.5);
    let root_r = (r as f64).sqrt();
    let sigma = median / (m_star * root_r);
    // Asymptotic variance of the sample median: 1/(4 N f(m)²).
    let dens = two_sided_max_pdf(m_star) / (sigma * root_r);
    let se_median = 1.0 / (2.0 * dens * (n as f64).sqrt());
    let se_sigma = se_median / (m_star * root_r);
    let mut d_plus = f64::NEG_INFINITY;
    let mut i = 0;
    while i < n {
        let k = raw[i];
        while i < n && raw[i] == k {
            i += 1;
        }
        let g = i as f64 / n as f64;
        d_plus = d_plus.max(g - two_sided_max_cdf((k as f64 + 0.5) / (sigma * root_r)));
    }
    let crit = 1.36 / (n as f64).sqrt();
    Ok(LowerBoundReport {
        kappa: cfg.kappa,
        t0,
        radius: cfg.tau,
        trials: cfg.trials,
        sigma_sq: sigma * sigma,
        sigma_sq_stderr: 2.0 * sigma * se_sigma,
        d_plus,
        d_plus_critical: crit,
        dominates: sigma > 0.0 && d_plus <= crit,
        p_nonnegative: raw.iter().filter(|&&m| m >= 0).count() as f64 / n as f64,
    })
}
