use num_bigint::BigInt;
use rayon::prelude::*;

use super::comparison::g_triple;
use super::Rational;
use crate::error::{Error, Result};
use crate::lattice::{blink_color, edge_value, BulkLattice, Geometry, Rule};

/// Largest enumeration accepted by the exact covariance routines.
const MAX_TERMS: u64 = 3u64.pow(16);

/// Smallest half-width `d` with `d ≥ t0 / (b(κ)+2)`.
pub fn min_window(kappa: u32, t0: u64) -> Result<usize> {
    let b = blink_color(kappa)? as u64;
    Ok(t0.div_ceil(b + 2) as usize)
}

/// `dX_{t0}(0, 1)` after running the FCA `t0` steps on the path `[−d, d+1]`
/// colored by `tuple`.
pub fn g_general(kappa: u32, t0: u64, d: usize, tuple: &[u8]) -> Result<i64> {
    let need = min_window(kappa, t0)?;
    if d < need {
        return Err(Error::WindowTooSmall(format!("d = {d} < {need} for t0 = {t0}")));
    }
    if tuple.len() != 2 * d + 2 {
        return Err(Error::WindowTooSmall(format!("tuple of {} colors for d = {d}", tuple.len())));
    }
    let geom = Geometry::Segment { lo: -(d as i64), hi: d as i64 + 1 };
    let mut lat = BulkLattice::new(kappa, Rule::Fca, geom, tuple)?;
    lat.run(t0);
    let c = lat.colors();
    Ok(edge_value(kappa as u8, c[d], c[d + 1]) as i64)
}

fn digits(mut w: u64, base: u64, out: &mut [u8]) {
    for o in out.iter_mut() {
        *o = (w % base) as u8;
        w /= base;
    }
}

/// Exact `Cov[f(X⃗(0)), f(X⃗(k))]` for a functional of `width` consecutive
/// i.i.d. uniform colors, with `table[w]` the value on the word whose
/// base-κ digits (least significant first) are the colors.
fn lagged_covariance(kappa: u32, width: usize, table: &[i64], k: usize) -> Result<Rational> {
    let base = kappa as u64;
    let len = k + width;
    let terms = base.checked_pow(len as u32).filter(|&t| t <= MAX_TERMS).ok_or_else(|| {
        Error::invalid(format!("lag {k} needs {kappa}^{len} terms, above the enumeration cap"))
    })?;
    // parallel over the leading color; each worker sums exactly in i128
    let head = base.pow(len as u32 - 1);
    let (sx, sy, sxy) = (0..base)
        .into_par_iter()
        .map(|lead| {
            let mut d = vec![0u8; len];
            let (mut sx, mut sy, mut sxy) = (0i128, 0i128, 0i128);
            for rest in 0..head {
                digits(rest + lead * head, base, &mut d);
                let idx = |s: &[u8]| s.iter().rev().fold(0usize, |a, &c| a * kappa as usize + c as usize);
                let x = table[idx(&d[..width])] as i128;
                let y = table[idx(&d[k..k + width])] as i128;
                sx += x;
                sy += y;
                sxy += x * y;
            }
            (sx, sy, sxy)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = BigInt::from(terms);
    let exy = Rational::new(BigInt::from(sxy), n.clone());
    let ex = Rational::new(BigInt::from(sx), n.clone());
    let ey = Rational::new(BigInt::from(sy), n);
    Ok(exy - ex * ey)
}

fn general_table(kappa: u32, t0: u64, d: usize) -> Result<Vec<i64>> {
    let width = 2 * d + 2;
    let size = (kappa as u64).checked_pow(width as u32).filter(|&t| t <= MAX_TERMS).ok_or_else(|| {
        Error::invalid(format!("window of {width} sites is too wide to tabulate"))
    })?;
    let mut tuple = vec![0u8; width];
    (0..size)
        .map(|w| {
            digits(w, kappa as u64, &mut tuple);
            g_general(kappa, t0, d, &tuple)
        })
        .collect()
}

/// Exact covariance at lag `k` of the windowed functional `g_general`.
pub fn covariance_exact(kappa: u32, t0: u64, d: usize, k: usize) -> Result<Rational> {
    let table = general_table(kappa, t0, d)?;
    lagged_covariance(kappa, 2 * d + 2, &table, k)
}

/// Exact covariance at lag `k` of the κ=3 triple functional `g_triple`.
pub fn covariance_triple(k: usize) -> Result<Rational> {
    let table: Vec<i64> = (0..27u8).map(|w| g_triple(w % 3, (w / 3) % 3, w / 9)).collect();
    lagged_covariance(3, 3, &table, k)
}

/// `γ² = Var + 2 Σ_{k≥1} Cov_k`; the series stops once the windows are disjoint.
pub fn gamma_squared(kappa: u32, t0: u64, d: usize) -> Result<Rational> {
    let table = general_table(kappa, t0, d)?;
    let width = 2 * d + 2;
    let mut g = lagged_covariance(kappa, width, &table, 0)?;
    for k in 1..width {
        g += lagged_covariance(kappa, width, &table, k)? * BigInt::from(2);
    }
    Ok(g)
}

pub fn gamma_squared_triple() -> Result<Rational> {
    let mut g = covariance_triple(0)?;
    for k in 1..3 {
        g += covariance_triple(k)? * BigInt::from(2);
    }
    Ok(g)
}
