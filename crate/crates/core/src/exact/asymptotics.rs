use num_bigint::BigInt;

use super::qtable::{ExactTable, Family, FloatTable, MemoryTerm};
use crate::error::{Error, Result};
use crate::stats::fit_inverse_sqrt;
use crate::walk::Rational;

fn horizon(tau: u64) -> Result<usize> {
    if tau < 1 {
        return Err(Error::invalid("tau must be at least 1"));
    }
    Ok(2 * tau as usize + 1)
}

/// `P(X_{3τ}(0) ≠ X_{3τ}(1))` for κ=3 from an exact table covering `2τ`:
/// `2[Q^{●1}(0,h−1)/9 + 2Q^{●0}(0,h−1)/27 + Q^{22}(0,h−2)/27 + Q^{●1}(0,h−2)/27]`, `h = 2τ+1`.
pub fn disagreement_from_exact(table: &ExactTable, tau: u64) -> Result<Rational> {
    let h = horizon(tau)?;
    if table.t_max() < h - 1 {
        return Err(Error::invalid(format!("table horizon {} below {}", table.t_max(), h - 1)));
    }
    let f = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
    let s = f(1, 9) * table.value(Family::Dot1, 0, h - 1)
        + f(2, 27) * table.value(Family::Dot0, 0, h - 1)
        + f(1, 27) * table.value(Family::F22, 0, h - 2)
        + f(1, 27) * table.value(Family::Dot1, 0, h - 2);
    Ok(s * f(2, 1))
}

pub fn disagreement_exact(tau: u64) -> Result<Rational> {
    let table = ExactTable::build(2 * tau as usize, MemoryTerm::Extended)?;
    disagreement_from_exact(&table, tau)
}

pub fn disagreement_from_float(table: &FloatTable, tau: u64) -> Result<f64> {
    let h = horizon(tau)?;
    if table.t_max() < h - 1 {
        return Err(Error::invalid(format!("table horizon {} below {}", table.t_max(), h - 1)));
    }
    Ok(2.0
        * (table.value(Family::Dot1, 0, h - 1) / 9.0
            + 2.0 * table.value(Family::Dot0, 0, h - 1) / 27.0
            + table.value(Family::F22, 0, h - 2) / 27.0
            + table.value(Family::Dot1, 0, h - 2) / 27.0))
}

/// `√t·y(t)` at checkpoints and its `a + b/√t` extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub checkpoints: Vec<(f64, f64)>,
    pub limit: f64,
    pub slope: f64,
}

/// Geometric ladder `T, T/4, T/16, …` down to 100.
pub fn ladder(t_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = t_max;
    while t >= 100 {
        out.push(t);
        t /= 4;
    }
    out.reverse();
    out
}

fn report(points: Vec<(f64, f64)>) -> Result<AsymptoticReport> {
    let (limit, slope) = fit_inverse_sqrt(&points)?;
    Ok(AsymptoticReport { checkpoints: points, limit, slope })
}

/// `√t·Q^{f}(0, t)` from a prebuilt table.
pub fn asymptotic_from_table(table: &FloatTable, family: Family) -> Result<AsymptoticReport> {
    let pts = ladder(table.t_max())
        .into_iter()
        .map(|t| (t as f64, (t as f64).sqrt() * table.value(family, 0, t)))
        .collect();
    report(pts)
}

pub fn asymptotic_constant(family: Family, t_max: usize) -> Result<AsymptoticReport> {
    if t_max < 1000 {
        return Err(Error::invalid("asymptotic extrapolation needs T ≥ 1000"));
    }
    asymptotic_from_table(&FloatTable::build(t_max, MemoryTerm::Extended, 0), family)
}

/// `√(3τ)·P(X_{3τ}(0) ≠ X_{3τ}(1))` along a ladder of `τ` with `2τ ≤ T`.
pub fn disagreement_asymptotics(table: &FloatTable) -> Result<AsymptoticReport> {
    let pts = ladder(table.t_max() / 2)
        .into_iter()
        .map(|tau| {
            let p = disagreement_from_float(table, tau as u64)?;
            Ok((3.0 * tau as f64, (3.0 * tau as f64).sqrt() * p))
        })
        .collect::<Result<Vec<_>>>()?;
    report(pts)
}

/// Ratio of `Q^{12}(0, t)` to another column against a stated coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub family: Family,
    pub x: usize,
    pub stated: (i64, i64),
    /// `Q^{12}(0, T) / Q^{family}(x, T)`.
    pub observed: f64,
    /// The same ratio at `T/4`.
    pub observed_quarter: f64,
}

impl RatioRow {
    pub fn stated_f64(&self) -> f64 {
        self.stated.0 as f64 / self.stated.1 as f64
    }

    pub fn rel_err(&self) -> f64 {
        (self.observed / self.stated_f64() - 1.0).abs()
    }
}

/// Stated proportionality coefficients: `Q^{12}_0 ∼ c · Q^{f}_x`.
pub const STATED_RATIOS: [(Family, usize, (i64, i64)); 7] = [
    (Family::F02, 0, (4, 21)),
    (Family::F22, 0, (1, 3)),
    (Family::Dot1, 2, (4, 27)),
    (Family::Dot0, 0, (1, 2)),
    (Family::Dot1, 0, (1, 1)),
    (Family::Dot1, 1, (2, 3)),
    (Family::F22, 1, (3, 8)),
];

/// Proportionality table from direct `t`-ratios at the table horizon.
pub fn proportionality_report(table: &FloatTable) -> Result<Vec<RatioRow>> {
    if table.x_keep() < 2 {
        return Err(Error::invalid("proportionality report needs columns x = 0, 1, 2"));
    }
    let t = table.t_max();
    if t < 8 {
        return Err(Error::invalid("horizon too short"));
    }
    let ratio = |f: Family, x: usize, s: usize| table.value(Family::F12, 0, s) / table.value(f, x, s);
    Ok(STATED_RATIOS
        .iter()
        .map(|&(family, x, stated)| RatioRow {
            family,
            x,
            stated,
            observed: ratio(family, x, t),
            observed_quarter: ratio(family, x, t / 4),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::survival_exact;

    #[test]
    fn small_tau_values() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(disagreement_exact(1).unwrap(), r(220, 729));
        assert_eq!(disagreement_exact(2).unwrap(), r(460, 2187));
        assert!(disagreement_exact(0).is_err());
    }

    #[test]
    fn matches_walk_enumeration_and_decreases() {
        let table = ExactTable::build(60, MemoryTerm::Extended).unwrap();
        let mut prev = Rational::from_integer(1.into());
        for tau in 1..=30 {
            let p = disagreement_from_exact(&table, tau).unwrap();
            assert_eq!(p, survival_exact(tau).unwrap(), "tau {tau}");
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn gated_variant_is_not_exact() {
        let table = ExactTable::build(8, MemoryTerm::Gated).unwrap();
        let hits = (1..=4).filter(|&t| disagreement_from_exact(&table, t).unwrap() == survival_exact(t).unwrap()).count();
        assert_eq!(hits, 0);
    }

    #[test]
    fn float_disagreement_matches_exact() {
        let e = ExactTable::build(200, MemoryTerm::Extended).unwrap();
        let f = FloatTable::build(200, MemoryTerm::Extended, 2);
        use num_traits::ToPrimitive;
        for tau in [1u64, 10, 50, 100] {
            let a = disagreement_from_exact(&e, tau).unwrap().to_f64().unwrap();
            let b = disagreement_from_float(&f, tau).unwrap();
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn constant_bookkeeping_is_consistent() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        // 2·(1/9·1/2 + 2/27 + 1/27·3/2 + 1/27·1/2) with the stated family ratios
        let weight = r(2, 1) * (r(1, 9) * r(1, 2) + r(2, 27) + r(1, 27) * r(3, 2) + r(1, 27) * r(1, 2));
        assert_eq!(weight, r(11, 27));
        assert_eq!(weight * r(432, 467), r(176, 467));
    }

    #[test]
    fn ladder_and_reports() {
        assert_eq!(ladder(6400), vec![100, 400, 1600, 6400]);
        assert!(asymptotic_constant(Family::Dot0, 10).is_err());
        let t = FloatTable::build(4000, MemoryTerm::Extended, 2);
        let rep = asymptotic_from_table(&t, Family::Dot0).unwrap();
        assert_eq!(rep.checkpoints.len(), 3);
        let rows = proportionality_report(&t).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(proportionality_report(&FloatTable::build(100, MemoryTerm::Extended, 1)).is_err());
    }
}
