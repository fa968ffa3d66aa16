//! Small statistics helpers shared by the solver and the experiment harness.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Least squares fit `y ≈ a + b/√t`; `a` is the extrapolated limit.
pub fn fit_inverse_sqrt(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::invalid("need at least 3 points"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.0.sqrt()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * mx * mx * n {
        return Err(Error::invalid("degenerate design: all t equal"));
    }
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    Ok((my - b * mx, b))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("unit normal").cdf(x)
}

/// `F(r) = 1 − 4 P(Z ≥ r) P(Z ≤ r)` for `r ≥ 0`, and 0 below.
pub fn two_sided_max_cdf(r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    let p = normal_cdf(r);
    1.0 - 4.0 * (1.0 - p) * p
}

/// Inverse of `two_sided_max_cdf` on `(0, 1)`.
pub fn two_sided_max_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("unit normal").inverse_cdf((1.0 + p.sqrt()) / 2.0)
}

/// Density of `two_sided_max_cdf`.
pub fn two_sided_max_pdf(r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    let phi = (-r * r / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    4.0 * phi * (2.0 * normal_cdf(r) - 1.0)
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and
/// a continuous CDF.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_model() {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4].iter().map(|&t: &f64| (t, 0.3 + 1.0 / t.sqrt())).collect();
        let (a, b) = fit_inverse_sqrt(&pts).unwrap();
        assert!((a - 0.3).abs() < 1e-12 && (b - 1.0).abs() < 1e-10);
        let (a, b) = fit_inverse_sqrt(&[(4.0, 2.0), (9.0, 2.0), (16.0, 2.0)]).unwrap();
        assert!((a - 2.0).abs() < 1e-12 && b.abs() < 1e-12);
        assert!(fit_inverse_sqrt(&[(4.0, 1.0), (4.0, 2.0), (4.0, 3.0)]).is_err());
        assert!(fit_inverse_sqrt(&[(4.0, 1.0), (5.0, 2.0)]).is_err());
    }

    #[test]
    fn max_law_endpoints() {
        assert_eq!(two_sided_max_cdf(0.0), 0.0);
        assert!(two_sided_max_cdf(8.0) > 1.0 - 1e-12);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-9);
    }

    #[test]
    fn max_law_quantile_and_density() {
        for p in [0.01, 0.25, 0.5, 0.9, 0.999] {
            assert!((two_sided_max_cdf(two_sided_max_quantile(p)) - p).abs() < 1e-9);
        }
        // central difference of the CDF
        for r in [0.1, 0.7, 1.5, 3.0] {
            let h = 1e-5;
            let num = (two_sided_max_cdf(r + h) - two_sided_max_cdf(r - h)) / (2.0 * h);
            assert!((num - two_sided_max_pdf(r)).abs() < 1e-6);
        }
    }

    #[test]
    fn ks_of_uniform_grid() {
        let s: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_distance(&s, |x| x.clamp(0.0, 1.0)) - 0.005).abs() < 1e-12);
        assert_eq!(ks_two_sample(&s, &s), 0.0);
        assert!((ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stderr_shrinks_like_inverse_root() {
        use rand::Rng;
        let mut rng = crate::rng::substream(1, 1);
        let mut prev = f64::INFINITY;
        for n in [1_000usize, 16_000, 256_000] {
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_bool(0.3) as u8 as f64).collect();
            let (m, se) = mean_stderr(&xs);
            let theory = (0.21 / n as f64).sqrt();
            assert!((se / theory - 1.0).abs() < 0.05);
            assert!((m - 0.3).abs() < 5.0 * theory);
            assert!(se < prev / 3.0);
            prev = se;
        }
    }
}
