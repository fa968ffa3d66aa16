use std::path::PathBuf;
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;

use firefly::constants::q_minus_ratio;
use firefly::exact::{
    disagreement_from_exact, disagreement_from_float, find_q_minus, matrix_a, ExactTable, Family, FloatTable,
    MemoryTerm, EXACT_CAP,
};
use firefly::harness::{
    cdf_rows, cluster_rate_experiment, excitation_experiment, general_kappa_lower_bound, sandwich_check,
    write_constants, write_csv, ExperimentConfig, Metadata, Method, CLUSTER_HEADER, NE_HEADER,
};
use firefly::lattice::{step, ColorConfig, Rule};
use firefly::oracle::{
    oracle_covariances, oracle_flip_burn_in, oracle_particles, oracle_comparison_walk, oracle_small_t, OracleReport,
};
use firefly::rng::{random_colors, substream};
use firefly::stats::two_sided_max_cdf;
use firefly::Error;

use crate::{
    Check, ClusterArgs, DisagreeArgs, ExcitationArgs, GenfunArgs, GeometryArg, Globals, MethodArg, ModeArg, OracleArgs,
    QtableArgs, SimulateArgs,
};

pub enum Failure {
    /// Bad input; exit status 2.
    Usage(String),
    /// Completed but failed (oracle mismatch, I/O); exit status 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Failed(format!("error: {e}")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn base_config(g: &Globals) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &g.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if g.out.is_some() {
        cfg.out = g.out.clone();
    }
    Ok(cfg)
}

fn finish_csv<R: Serialize>(
    path: &Option<PathBuf>,
    header: &[&str],
    rows: &[R],
    meta: Metadata,
) -> CmdResult {
    if let Some(p) = path {
        write_csv(p, header, rows, &meta)?;
        println!("wrote {}", p.display());
    }
    Ok(())
}

pub fn simulate(g: &Globals, a: SimulateArgs) -> CmdResult {
    let rule: Rule = a.rule.parse()?;
    let seed = g.seed.unwrap_or(1);
    let pattern = match &a.init {
        Some(s) => ColorConfig::parse_colors(a.kappa, s)?,
        None => Vec::new(),
    };
    let len = a.length.unwrap_or(if pattern.is_empty() { 12 } else { pattern.len() });
    if len == 0 {
        return Err(Failure::Usage("length must be positive".into()));
    }
    let sites: Vec<u8> = if pattern.is_empty() {
        firefly::lattice::blink_color(a.kappa)?;
        random_colors(&mut substream(seed, 0), a.kappa as u8, len)
    } else {
        pattern.iter().copied().cycle().take(len).collect()
    };
    let mut cfg = match a.geometry {
        GeometryArg::Cycle => ColorConfig::cycle(a.kappa, sites)?,
        GeometryArg::Segment => ColorConfig::segment(a.kappa, 0, sites)?,
    };
    let start = Instant::now();
    let mut rows: Vec<(u64, String, usize)> = Vec::new();
    let mut excited = 0usize;
    for t in 0..=a.steps {
        println!("t={t:<4} {cfg}");
        rows.push((t, cfg.dump_line(), excited));
        if t < a.steps {
            let (next, rep) = step(&cfg, rule);
            excited = rep.excited.len();
            cfg = next;
        }
    }
    let meta = Metadata::new(&(a.kappa, rule.to_string(), len, a.steps, a.init.clone()), Some(seed), start.elapsed().as_secs_f64())?;
    finish_csv(&g.out, &["t", "colors", "excited_last_step"], &rows, meta)
}

pub fn cluster_rate(g: &Globals, a: ClusterArgs) -> CmdResult {
    let mut cfg = base_config(g)?;
    if cfg.name == "experiment" {
        cfg.name = "cluster-rate".into();
    }
    if let Some(k) = a.kappa {
        cfg.kappa = k;
    }
    if let Some(r) = &a.rule {
        cfg.rule = r.parse()?;
    }
    if let Some(t) = a.times {
        cfg.times = t;
    }
    if let Some(l) = a.length {
        cfg.length = l;
    }
    if let Some(r) = a.runs {
        cfg.trials = r;
    }
    let start = Instant::now();
    let res = cluster_rate_experiment(&cfg)?;
    println!("kappa={} rule={} L={} runs={} seed={}", cfg.kappa, cfg.rule, res.rows[0].l, cfg.trials, cfg.seed);
    println!("{:>8} {:>12} {:>12} {:>12}", "t", "p_hat", "stderr", "sqrt_t_p_hat");
    for r in &res.rows {
        println!("{:>8} {:>12.6e} {:>12.3e} {:>12.6}", r.t, r.p_hat, r.stderr, r.sqrt_t_p_hat);
    }
    if let Some((a, b)) = res.summary.fit {
        println!("fit sqrt(t) p_hat ~ {a:.6} + {b:.4}/sqrt(t)");
    }
    let meta = Metadata::new(&cfg, Some(cfg.seed), start.elapsed().as_secs_f64())?
        .with("between_run_stderr", &res.between_run_stderr)
        .with("site_updates", res.site_updates)
        .with("notes", &res.summary.notes);
    finish_csv(&cfg.out, &CLUSTER_HEADER, &res.rows, meta)
}

pub fn excitations(g: &Globals, a: ExcitationArgs) -> CmdResult {
    let mut cfg = base_config(g)?;
    if cfg.name == "experiment" {
        cfg.name = "excitations".into();
    }
    if let Some(k) = a.kappa {
        cfg.kappa = k;
    }
    if let Some(t) = a.tau {
        cfg.tau = t;
    }
    if let Some(n) = a.trials {
        cfg.trials = n;
    }
    if let Some(m) = a.method {
        cfg.method = match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Tournament => Method::Tournament,
        };
    }
    let start = Instant::now();
    if a.fit_sigma {
        let rep = general_kappa_lower_bound(&cfg)?;
        println!(
            "kappa={} t0={} radius={} trials={}: sigma^2 per site = {:.5} +- {:.5}",
            rep.kappa, rep.t0, rep.radius, rep.trials, rep.sigma_sq, rep.sigma_sq_stderr
        );
        println!("one-sided D+ = {:.4} (critical {:.4}); P(M >= 0) = {}", rep.d_plus, rep.d_plus_critical, rep.p_nonnegative);
        println!("dominance {}", if rep.dominates { "holds" } else { "rejected" });
        if let Some(p) = &cfg.out {
            let meta = Metadata::new(&cfg, Some(cfg.seed), start.elapsed().as_secs_f64())?;
            write_csv(p, &["kappa", "t0", "radius", "trials", "sigma_sq", "sigma_sq_stderr", "d_plus", "d_plus_critical", "dominates", "p_nonnegative"], &[rep], &meta)?;
            println!("wrote {}", p.display());
        }
        return Ok(());
    }
    let res = excitation_experiment(&cfg)?;
    println!(
        "kappa=3 method={} tau={} trials={} seed={}: KS distance {:.5} (noise floor ~ {:.4})",
        res.method,
        res.tau,
        res.scaled.len(),
        cfg.seed,
        res.ks,
        1.63 / (res.scaled.len() as f64).sqrt()
    );
    let mut meta = Metadata::new(&cfg, Some(cfg.seed), start.elapsed().as_secs_f64())?.with("ks_distance", res.ks);
    if a.sandwich {
        let rep = sandwich_check(cfg.tau, cfg.trials, cfg.seed)?;
        println!("sandwich M1(tau-1) <= ne(3tau+1) <= M1(tau): {} checks, {} failures", rep.checks, rep.failures);
        for e in &rep.examples {
            println!("  {e}");
        }
        let failed = !rep.passed();
        meta = meta.with("sandwich", &rep);
        if failed {
            finish_csv(&cfg.out, &NE_HEADER, &cdf_rows(&res.scaled, two_sided_max_cdf), meta)?;
            return Err(Failure::Failed("sandwich violated".into()));
        }
    }
    finish_csv(&cfg.out, &NE_HEADER, &cdf_rows(&res.scaled, two_sided_max_cdf), meta)
}

pub fn qtable(g: &Globals, a: QtableArgs) -> CmdResult {
    let memory: MemoryTerm = a.memory.parse()?;
    let start = Instant::now();
    let echo = (a.t_max, format!("{:?}", a.mode), a.x_max, a.stride, a.memory.clone());
    match a.mode {
        ModeArg::Exact => {
            if a.t_max > EXACT_CAP {
                return Err(Failure::Usage(format!("exact mode supports T <= {EXACT_CAP}; use --mode float")));
            }
            let table = ExactTable::build(a.t_max, memory)?;
            let mut rows = Vec::new();
            for f in Family::ALL {
                for t in 0..=a.t_max {
                    for x in 0..=a.x_max {
                        let (n, e) = table.reduced(f, x, t);
                        rows.push((f.label(), x, t, n.to_string(), e));
                    }
                }
            }
            println!("Q^dot0(0, {}) = {}", a.t_max, table.value(Family::Dot0, 0, a.t_max));
            let meta = Metadata::new(&echo, None, start.elapsed().as_secs_f64())?;
            finish_csv(&g.out, &["family", "x", "t", "numerator", "log3_denominator"], &rows, meta)
        }
        ModeArg::Float => {
            let table = FloatTable::build(a.t_max, memory, a.x_max);
            let stride = a.stride.max(1);
            let mut rows = Vec::new();
            for f in Family::ALL {
                for t in (0..=a.t_max).filter(|t| t % stride == 0 || *t == a.t_max) {
                    for x in 0..=a.x_max {
                        rows.push((f.label(), x, t, table.value(f, x, t)));
                    }
                }
            }
            let q = table.value(Family::Dot0, 0, a.t_max);
            println!("Q^dot0(0, {0}) = {q:.10e}; sqrt(T) Q = {1:.6}", a.t_max, (a.t_max as f64).sqrt() * q);
            let meta = Metadata::new(&echo, None, start.elapsed().as_secs_f64())?;
            finish_csv(&g.out, &["family", "x", "t", "value"], &rows, meta)
        }
    }
}

pub fn disagree_exact(g: &Globals, a: DisagreeArgs) -> CmdResult {
    let max_tau = a.tau.iter().copied().max().unwrap_or(0);
    if a.tau.iter().any(|&t| t == 0) {
        return Err(Failure::Usage("tau must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rows = Vec::new();
    match a.mode {
        ModeArg::Exact => {
            if 2 * max_tau as usize > EXACT_CAP {
                return Err(Failure::Usage(format!("exact mode supports tau <= {}; use --mode float", EXACT_CAP / 2)));
            }
            let table = ExactTable::build(2 * max_tau as usize, MemoryTerm::Extended)?;
            for &tau in &a.tau {
                let p = disagreement_from_exact(&table, tau)?;
                let v = p.to_f64().unwrap_or(f64::NAN);
                let scaled = (3.0 * tau as f64).sqrt() * v;
                if p.denom().bits() <= 64 {
                    println!("tau={tau:<5} P = {p} = {v:.12e}   sqrt(3tau) P = {scaled:.6}");
                } else {
                    println!("tau={tau:<5} P = {v:.12e}   sqrt(3tau) P = {scaled:.6}");
                }
                rows.push((tau, v, scaled, p.numer().to_string(), p.denom().to_string()));
            }
        }
        ModeArg::Float => {
            let table = FloatTable::build(2 * max_tau as usize, MemoryTerm::Extended, 0);
            for &tau in &a.tau {
                let v = disagreement_from_float(&table, tau)?;
                let scaled = (3.0 * tau as f64).sqrt() * v;
                println!("tau={tau:<8} P = {v:.12e}   sqrt(3tau) P = {scaled:.6}");
                rows.push((tau, v, scaled, String::new(), String::new()));
            }
        }
    }
    let meta = Metadata::new(&(a.tau.clone(), format!("{:?}", a.mode)), None, start.elapsed().as_secs_f64())?
        .with("offset", 0);
    finish_csv(&g.out, &["tau", "value", "sqrt_3tau_value", "numerator", "denominator"], &rows, meta)
}

pub fn genfun(g: &Globals, a: GenfunArgs) -> CmdResult {
    let us = a.u.unwrap_or_else(|| (1..=8).map(|k| 1.0 - 10f64.powi(-k)).collect());
    let start = Instant::now();
    let mut rows = Vec::new();
    println!("{:>14} {:>20} {:>14} {:>12}", "u", "q_minus", "ratio", "det_residual");
    for u in us {
        let q = find_q_minus(u)?;
        let ratio = (1.0 - q) / (1.0 - u).sqrt();
        let resid = matrix_a(q, u)?.det();
        println!("{u:>14.8} {q:>20.15} {ratio:>14.8} {resid:>12.3e}");
        rows.push((u, q, ratio, resid));
    }
    println!("reference 3 sqrt(3)/2 = {:.8}", q_minus_ratio());
    let meta = Metadata::new(&rows.iter().map(|r| r.0).collect::<Vec<_>>(), None, start.elapsed().as_secs_f64())?;
    finish_csv(&g.out, &["u", "q_minus", "ratio_to_3sqrt3_over_2", "detA_residual"], &rows, meta)?;
    // reference values for the plotting scripts, next to the CSV
    if let Some(p) = &g.out {
        let c = p.with_file_name("constants.json");
        write_constants(&c)?;
        println!("wrote {}", c.display());
    }
    Ok(())
}

fn print_report(rep: &OracleReport) {
    println!("[{}]", rep.name);
    for l in &rep.lines {
        println!("  {l}");
    }
    println!("{} {}", if rep.passed() { "PASS" } else { "FAIL" }, rep.name);
}

pub fn oracle(g: &Globals, a: OracleArgs) -> CmdResult {
    let seed = g.seed.unwrap_or(1);
    let kappas: Vec<u32> = (3..=8).collect();
    let checks: Vec<Check> = match a.check {
        Check::All => vec![
            Check::Covariances,
            Check::SmallTEquivalence,
            Check::ParticleConsistency,
            Check::FlipBurnIn,
            Check::ComparisonWalk,
        ],
        c => vec![c],
    };
    let mut failed = Vec::new();
    for c in checks {
        let rep = match c {
            Check::Covariances => oracle_covariances()?,
            Check::SmallTEquivalence => oracle_small_t(a.tau_max)?,
            Check::ParticleConsistency => oracle_particles(&kappas, a.trials.unwrap_or(1000), 64, 300, seed)?,
            Check::FlipBurnIn => oracle_flip_burn_in(&kappas, a.trials.unwrap_or(10_000), 64, seed)?,
            Check::ComparisonWalk => oracle_comparison_walk()?,
            Check::All => unreachable!(),
        };
        print_report(&rep);
        if !rep.passed() {
            failed.extend(rep.mismatches.iter().map(|m| format!("{}: {m}", rep.name)));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Failed(format!("mismatches:\n  {}", failed.join("\n  "))))
    }
}
