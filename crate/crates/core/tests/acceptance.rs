//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test -p firefly-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{ToPrimitive, Zero};

use firefly::constants::{cca_constant, disagreement_constant, q_minus_ratio, survival_constant};
use firefly::exact::{
    asymptotic_from_table, disagreement_asymptotics, disagreement_from_float, find_q_minus, proportionality_report,
    Family, FloatTable, MatrixSystem, MemoryTerm,
};
use firefly::harness::{
    cluster_rate_experiment, excitation_experiment, rank_increment_check, sandwich_check, ExperimentConfig,
};
use firefly::lattice::Rule;
use firefly::oracle::{oracle_covariances, oracle_flip_burn_in, oracle_particles, oracle_small_t};
use firefly::walk::{sa_constant, survival_probabilities, IncrementLaw, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(id: u32, name: &str, budget_s: f64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs <= budget_s;
    let pass = out.pass && in_time;
    println!(
        "{} [{id:>2}] {name}: {}; {secs:.1}s (budget {budget_s:.0}s{})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        if in_time { "" } else { ", exceeded" }
    );
    pass
}

fn burn_in_bound() -> Outcome {
    let rep = oracle_flip_burn_in(&[3, 4, 5, 6, 7, 8], 10_000, 64, 2024).unwrap();
    verdict(rep.passed(), format!("10^4 cycles of 64 per kappa in 3..=8, {} late flips", rep.mismatches.len()))
}

fn particle_equivalence() -> Outcome {
    let rep = oracle_particles(&[3, 4, 5, 6, 7, 8], 1000, 64, 300, 2024).unwrap();
    verdict(rep.passed(), format!("10^3 trials per kappa, 300 steps past burn-in, {} mismatches", rep.mismatches.len()))
}

fn tournament_identities() -> Outcome {
    let inc = rank_increment_check(&[3, 4, 5, 6, 7, 8], 200, 64, 100, 2024).unwrap();
    let sw = sandwich_check(200, 1000, 2024).unwrap();
    verdict(
        inc.passed() && sw.passed(),
        format!(
            "rank increments: {} checks, {} failures; sandwich tau<=200: {} checks, {} failures",
            inc.checks, inc.failures, sw.checks, sw.failures
        ),
    )
}

fn exact_covariances() -> Outcome {
    let rep = oracle_covariances().unwrap();
    let window: Vec<&str> = rep.lines.iter().filter(|l| l.contains("window")).map(|l| l.as_str()).collect();
    verdict(rep.passed(), format!("{} exact checks ({})", rep.lines.len(), window.join("; ").replace("ok   ", "")))
}

fn small_t_equivalence() -> Outcome {
    let rep = oracle_small_t(4).unwrap();
    verdict(rep.passed(), format!("exact at offset 0 for tau = 1..=4: {}", rep.lines.join("; ").replace("ok   ", "")))
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn disagreement_constant_check(table: &FloatTable) -> Outcome {
    let d = disagreement_asymptotics(table).unwrap();
    let q = asymptotic_from_table(table, Family::Dot0).unwrap();
    let (ed, eq) = (rel(d.limit, disagreement_constant()), rel(q.limit, survival_constant()));
    verdict(
        ed <= 0.01 && eq <= 0.01,
        format!(
            "sqrt(t) P(disagree) -> {:.5} vs {:.5} (rel err {:.3}); sqrt(t) Q_dot0(0,t) -> {:.5} vs {:.5} (rel err {:.3}); T = {}",
            d.limit,
            disagreement_constant(),
            ed,
            q.limit,
            survival_constant(),
            eq,
            table.t_max()
        ),
    )
}

fn higher_kappa_clustering() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for kappa in [4u32, 5, 6] {
        let cfg = ExperimentConfig {
            kappa,
            times: vec![400, 1600, 6400],
            length: 1 << 17,
            trials: 8,
            seed: 7 + kappa as u64,
            ..Default::default()
        };
        let r = cluster_rate_experiment(&cfg).unwrap();
        let v: Vec<f64> = r.rows.iter().map(|x| x.sqrt_t_p_hat).collect();
        let (lo, hi) = v.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        let se: Vec<f64> = r.rows.iter().map(|x| (x.t as f64).sqrt() * x.stderr).collect();
        ok &= hi <= 1.3 * lo;
        parts.push(format!(
            "kappa {kappa}: {:.3}/{:.3}/{:.3} (se {:.2}/{:.2}/{:.2}), max/min {:.3}",
            v[0], v[1], v[2], se[0], se[1], se[2], hi / lo
        ));
    }
    verdict(ok, parts.join("; "))
}

fn excitation_law() -> Outcome {
    let cfg = ExperimentConfig { tau: 100_000, trials: 10_000, seed: 2024, ..Default::default() };
    let r = excitation_experiment(&cfg).unwrap();
    verdict(r.ks <= 0.03, format!("tournament method, tau = 1e5, 1e4 trials: KS = {:.4} (threshold 0.03)", r.ks))
}

fn matrix_system(table: &FloatTable) -> Outcome {
    let one = Rational::from_integer(1.into());
    let m = MatrixSystem::new(one.clone(), one).unwrap();
    let det_zero = m.det().is_zero();
    let minors: Vec<i64> = m.minors().iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
    let minors_ok = minors == [27, -27, 9, -9, 9] && m.minors().iter().all(|x| x.is_integer());
    let u = 1.0 - 1e-6;
    let ratio = (1.0 - find_q_minus(u).unwrap()) / (1.0 - u).sqrt();
    let ratio_ok = (ratio - q_minus_ratio()).abs() <= 1e-2;
    let rows = proportionality_report(table).unwrap();
    let held = rows.iter().filter(|r| r.rel_err() <= 0.02).count();
    let listing: Vec<String> = rows
        .iter()
        .map(|r| format!("{}/{} vs Q{}({}) obs {:.4}", r.stated.0, r.stated.1, r.family, r.x, r.observed))
        .collect();
    verdict(
        det_zero && minors_ok && ratio_ok && held == rows.len(),
        format!(
            "det A(1,1) = 0: {det_zero}; minors {minors:?}; (1-q-)/sqrt(1-u) = {ratio:.5} vs {:.5}; ratios within 2%: {held}/{} [{}]",
            q_minus_ratio(),
            rows.len(),
            listing.join(", ")
        ),
    )
}

fn sparre_andersen() -> Outcome {
    let law = IncrementLaw::simple();
    let sa = sa_constant(&law, 1 << 14).unwrap();
    let t = 10_000;
    let q = survival_probabilities(&law, 0, t).unwrap()[t];
    let scaled = q * (std::f64::consts::PI * t as f64).sqrt() / std::f64::consts::SQRT_2;
    let e_ok = (sa.exp_neg_c - std::f64::consts::SQRT_2).abs() <= 1e-3;
    verdict(
        e_ok && (0.99..=1.01).contains(&scaled),
        format!(
            "e^-c = {:.6} (N = {}, tail bound {:.1e}) vs sqrt 2; Q(0,1e4) sqrt(pi t)/sqrt 2 = {scaled:.5}",
            sa.exp_neg_c, sa.n, sa.tail_bound
        ),
    )
}

fn monte_carlo_vs_exact(table: &FloatTable) -> Outcome {
    let cfg = ExperimentConfig { kappa: 3, times: vec![900], length: 1 << 19, trials: 16, seed: 11, ..Default::default() };
    let start = Instant::now();
    let r = cluster_rate_experiment(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let row = &r.rows[0];
    let exact = disagreement_from_float(table, 300).unwrap();
    let z = (row.p_hat - exact) / row.stderr;
    let zb = (row.p_hat - exact) / r.between_run_stderr[0];
    let rate = r.site_updates as f64 / secs;
    verdict(
        z.abs() <= 3.0 && zb.abs() <= 3.0 && r.site_updates >= 5_000_000_000 && rate >= 5e7,
        format!(
            "p_hat(900) = {:.6} vs DP {:.6}: z = {z:.2} (light-cone se), {zb:.2} (between-run se); {:.2e} site updates at {:.2e}/s",
            row.p_hat, exact, r.site_updates as f64, rate
        ),
    )
}

fn cca_cluster_rate() -> Outcome {
    let cfg = ExperimentConfig {
        kappa: 3,
        rule: Rule::Cca,
        times: vec![6400],
        length: 1 << 20,
        trials: 10,
        seed: 13,
        ..Default::default()
    };
    let r = cluster_rate_experiment(&cfg).unwrap();
    let v = r.rows[0].sqrt_t_p_hat;
    let e = rel(v, cca_constant());
    verdict(e <= 0.05, format!("sqrt(t) p_hat(6400) = {v:.4} vs {:.4} (rel err {e:.3})", cca_constant()))
}

fn main() -> ExitCode {
    println!("acceptance suite");
    let mut results = Vec::new();
    results.push(run(1, "burn-in bound", 60.0, burn_in_bound));
    results.push(run(2, "particle / 1-form equivalence", 120.0, particle_equivalence));
    results.push(run(3, "flux and tournament identities", 60.0, tournament_identities));
    results.push(run(4, "kappa=3 exact covariances", 1.0, exact_covariances));
    results.push(run(5, "small-t exact equivalence", 600.0, small_t_equivalence));
    let start = Instant::now();
    let table = FloatTable::build(100_000, MemoryTerm::Extended, 2);
    let build = start.elapsed().as_secs_f64();
    println!("     (float DP table, T = 1e5, built in {build:.1}s; shared by criteria 6, 9, 11)");
    results.push(run(6, "kappa=3 disagreement constant", 300.0 - build, || disagreement_constant_check(&table)));
    results.push(run(7, "clustering for kappa in 4..=6", 900.0, higher_kappa_clustering));
    results.push(run(8, "excitation law", 300.0, excitation_law));
    results.push(run(9, "generating-function matrix system", 120.0, || matrix_system(&table)));
    results.push(run(10, "Sparre Andersen sanity", 60.0, sparre_andersen));
    results.push(run(11, "Monte Carlo vs exact oracle", 120.0, || monte_carlo_vs_exact(&table)));
    results.push(run(12, "3-color CCA cluster rate", 600.0, cca_cluster_rate));
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
