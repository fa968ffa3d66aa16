use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;

use super::comparison::flip_free_center;
use super::Rational;
use crate::error::{Error, Result};
use crate::lattice::edge_value;
use crate::rng::{substream, ColorStream};

/// A finitely supported law on the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementLaw {
    support: Vec<(i64, f64)>,
}

impl IncrementLaw {
    pub fn new(mut support: Vec<(i64, f64)>) -> Result<Self> {
        support.retain(|&(_, p)| p != 0.0);
        if support.is_empty() || support.iter().any(|&(_, p)| !(0.0..=1.0).contains(&p)) {
            return Err(Error::invalid("increment law needs probabilities in [0, 1]"));
        }
        let total: f64 = support.iter().map(|s| s.1).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("probabilities sum to {total}")));
        }
        support.sort_by_key(|s| s.0);
        support.dedup_by(|a, b| {
            let same = a.0 == b.0;
            if same {
                b.1 += a.1;
            }
            same
        });
        Ok(IncrementLaw { support })
    }

    /// `±1` with probability `1/2` each.
    pub fn simple() -> Self {
        IncrementLaw { support: vec![(-1, 0.5), (1, 0.5)] }
    }

    /// Empirical law of `samples`.
    pub fn empirical(samples: &[i64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("no samples"));
        }
        let mut counts = std::collections::BTreeMap::new();
        for &s in samples {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        let n = samples.len() as f64;
        IncrementLaw::new(counts.into_iter().map(|(v, c)| (v, c as f64 / n)).collect())
    }

    pub fn support(&self) -> &[(i64, f64)] {
        &self.support
    }

    pub fn min(&self) -> i64 {
        self.support[0].0
    }

    pub fn max(&self) -> i64 {
        self.support[self.support.len() - 1].0
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().map(|&(v, p)| v as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.support.iter().map(|&(v, p)| (v as f64 - m).powi(2) * p).sum()
    }
}

/// `Q(x0, t) = P(S_1 ≥ 0, …, S_t ≥ 0 | S_0 = x0)` for `t = 0..=t_max`.
pub fn survival_probabilities(law: &IncrementLaw, x0: i64, t_max: usize) -> Result<Vec<f64>> {
    if x0 < 0 {
        return Err(Error::invalid("start below zero"));
    }
    let up = law.max().max(0) as usize;
    let mut dist = vec![0.0f64; x0 as usize + 1];
    dist[x0 as usize] = 1.0;
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(1.0);
    for _ in 0..t_max {
        let mut next = vec![0.0f64; dist.len() + up];
        for (y, &m) in dist.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(s, p) in &law.support {
                let z = y as i64 + s;
                if z >= 0 {
                    next[z as usize] += m * p;
                }
            }
        }
        dist = next;
        out.push(dist.iter().sum());
    }
    Ok(out)
}

/// Truncated `Σ_{t≤T} u^t q_t` and the bound `u^{T+1}/(1−u)` on the
/// remainder (valid for `0 ≤ q_t ≤ 1`).
pub fn generating_function(q: &[f64], u: f64) -> (f64, f64) {
    let mut acc = 0.0;
    let mut w = 1.0;
    for &v in q {
        acc += w * v;
        w *= u;
    }
    (acc, w / (1.0 - u))
}

/// Output of `sa_constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConstant {
    /// `Σ_{n≤N} (P(S_n>0) − 1/2)/n`.
    pub raw: f64,
    /// One Richardson step on the `K/√N` tail: `2 c_N − c_{N/4}`.
    pub corrected: f64,
    /// Largest `√n |P(S_n>0) − 1/2|` over `N/2 ≤ n ≤ N`.
    pub k_hat: f64,
    /// `2 K̂ / √N`.
    pub tail_bound: f64,
    /// `e^{−c}` from the corrected value.
    pub exp_neg_c: f64,
    pub n: usize,
}

/// Sparre Andersen constant `c = Σ_n (P(S_n > 0) − 1/2)/n` by exact
/// convolution of the increment law up to `n_max` steps.
pub fn sa_constant(law: &IncrementLaw, n_max: usize) -> Result<SaConstant> {
    let scale = law.support.iter().map(|s| s.0.unsigned_abs()).max().unwrap_or(0) as f64;
    if law.mean().abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::invalid(format!("increment mean {} is not zero", law.mean())));
    }
    if law.support.len() < 2 {
        return Err(Error::invalid("degenerate increment law"));
    }
    if n_max < 8 {
        return Err(Error::invalid("need at least 8 terms"));
    }
    let (lo, hi) = (law.min(), law.max());
    // dist[i] = P(S_n = n·lo + i)
    let mut dist = vec![1.0f64];
    let mut partial = vec![0.0f64; n_max + 1];
    let mut k_hat = 0.0f64;
    for n in 1..=n_max {
        let mut next = vec![0.0f64; dist.len() + (hi - lo) as usize];
        for (i, &m) in dist.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(s, p) in &law.support {
                next[i + (s - lo) as usize] += m * p;
            }
        }
        dist = next;
        let base = n as i64 * lo;
        let first_pos = (1 - base).max(0) as usize;
        let pos: f64 = dist.get(first_pos..).map_or(0.0, |t| t.iter().sum());
        let dev = pos - 0.5;
        partial[n] = partial[n - 1] + dev / n as f64;
        if n >= n_max / 2 {
            k_hat = k_hat.max((n as f64).sqrt() * dev.abs());
        }
    }
    let raw = partial[n_max];
    let corrected = 2.0 * raw - partial[n_max / 4];
    Ok(SaConstant {
        raw,
        corrected,
        k_hat,
        tail_bound: 2.0 * k_hat / (n_max as f64).sqrt(),
        exp_neg_c: (-corrected).exp(),
        n: n_max,
    })
}

/// Monte Carlo estimate of a disagreement probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalEstimate {
    pub p: f64,
    pub stderr: f64,
    pub hits: u64,
    pub trials: u64,
}

#[inline]
fn dx3(u: u8, v: u8) -> i64 {
    edge_value(3, u, v) as i64
}

/// Whether the flip-free walk with `S′_0 = −1` stays `≥ 0` for `2τ+1` steps,
/// drawing colors `X_0(−1), X_0(0), …` only as needed.
fn survives<R: rand::RngCore>(colors: &mut ColorStream<R>, steps: u64) -> bool {
    let (mut a, mut b, mut c) = (colors.next_color(), colors.next_color(), colors.next_color());
    let mut prev = flip_free_center(a, b, c);
    let mut s = -1i64;
    for _ in 0..steps {
        let d = colors.next_color();
        (a, b, c) = (b, c, d);
        let cur = flip_free_center(a, b, c);
        s += dx3(prev, cur);
        if s < 0 {
            return false;
        }
        prev = cur;
    }
    true
}

/// Estimate `P(X_{3τ}(0) ≠ X_{3τ}(1))` for κ=3 as twice the survival
/// frequency of the flip-free walk started at `−1` over `2τ+1` steps.
pub fn survival_mc(tau: u64, trials: u64, seed: u64) -> Result<SurvivalEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be positive"));
    }
    let steps = 2 * tau + 1;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|i| survives(&mut ColorStream::new(substream(seed, i), 3), steps) as u64)
        .sum();
    let f = hits as f64 / trials as f64;
    Ok(SurvivalEstimate { p: 2.0 * f, stderr: 2.0 * (f * (1.0 - f) / trials as f64).sqrt(), hits, trials })
}

/// The same probability, exactly: all `3^{2τ+4}` colorings of `[−1, 2τ+2]`
/// are counted by a transfer over (last two colors, last flip-free color, walk height).
pub fn survival_exact(tau: u64) -> Result<Rational> {
    let steps = (2 * tau + 1) as usize;
    let hmax = steps + 1; // heights −1..=steps
    let idx = |b: u8, c: u8, xp: u8, s: i64| ((((b as usize * 3) + c as usize) * 3 + xp as usize) * hmax) + (s + 1) as usize;
    let mut counts = vec![BigUint::zero(); 27 * hmax];
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                counts[idx(b, c, flip_free_center(a, b, c), -1)] += 1u32;
            }
        }
    }
    for _ in 0..steps {
        let mut next = vec![BigUint::zero(); counts.len()];
        for b in 0..3u8 {
            for c in 0..3u8 {
                for xp in 0..3u8 {
                    for s in -1..steps as i64 {
                        let n = &counts[idx(b, c, xp, s)];
                        if n.is_zero() {
                            continue;
                        }
                        for d in 0..3u8 {
                            let cur = flip_free_center(b, c, d);
                            let s2 = s + dx3(xp, cur);
                            if s2 >= 0 {
                                next[idx(c, d, cur, s2)] += n;
                            }
                        }
                    }
                }
            }
        }
        counts = next;
    }
    let total: BigUint = counts.iter().sum();
    let denom = BigUint::from(3u32).pow((steps + 3) as u32);
    Ok(Rational::new(BigInt::from(total) * 2, BigInt::from(denom)))
}
