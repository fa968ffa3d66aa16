use super::path::WalkPath;
use crate::error::{Error, Result};
use crate::lattice::{edge_value, ColorConfig};

const FLIP_DOWN: (u8, u8, u8) = (1, 2, 0);
const FLIP_UP: (u8, u8, u8) = (0, 2, 1);

#[inline]
fn dx3(u: u8, v: u8) -> i64 {
    edge_value(3, u, v) as i64
}

#[inline]
fn is_flipping(t: (u8, u8, u8)) -> bool {
    t == FLIP_DOWN || t == FLIP_UP
}

/// Center color after removing flipping triples.
#[inline]
pub(crate) fn flip_free_center(l: u8, c: u8, r: u8) -> u8 {
    if is_flipping((l, c, r)) {
        1
    } else {
        c
    }
}

/// Increment functional on a triple of κ=3 colors: `−2` on `120`, `+2` on
/// `021`, otherwise `dX(j, k)`.
pub fn g_triple(i: u8, j: u8, k: u8) -> i64 {
    match (i, j, k) {
        FLIP_DOWN => -2,
        FLIP_UP => 2,
        _ => dx3(j, k),
    }
}

/// Recolor to 1 every site whose centered triple is `120` or `021`.
/// Endpoints of a segment have no triple and are kept.
pub fn flip_free_env(x0: &ColorConfig) -> Result<ColorConfig> {
    if x0.kappa() != 3 {
        return Err(Error::KappaUnsupported(x0.kappa(), "flipping triples are defined for three colors"));
    }
    let s = x0.sites();
    let n = s.len();
    let mut out = s.to_vec();
    if x0.geometry().is_cycle() {
        for i in 0..n {
            out[i] = flip_free_center(s[(i + n - 1) % n], s[i], s[(i + 1) % n]);
        }
    } else {
        for i in 1..n.saturating_sub(1) {
            out[i] = flip_free_center(s[i - 1], s[i], s[i + 1]);
        }
    }
    x0.with_sites(out)
}

/// The three walks compared for κ=3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonWalk {
    /// `𝒮_0, …, 𝒮_n`.
    pub script: WalkPath,
    /// `𝒮′_m = 𝒮_m + 1{𝒮_m = −1, X⃗(m) = 021}`.
    pub script_prime: Vec<i64>,
    /// `S′` from the flip-free coloring.
    pub prime: WalkPath,
}

/// Build the comparison walks from `window = X_0(−1), …, X_0(n+1)`.
///
/// `S′_0 = s0`; `𝒮_0 = S′_0 + 1{X⃗(0) = 120} − 2·1{X⃗(0) = 021}` and
/// `𝒮_m = 𝒮_0 + Σ_{i<m} g(X⃗(i))`.
pub fn comparison_walk(window: &[u8], n: usize, s0: i64) -> Result<ComparisonWalk> {
    if window.len() < n + 3 {
        return Err(Error::WindowTooSmall(format!("{} colors cover less than [-1, {}]", window.len(), n + 1)));
    }
    if let Some(&c) = window.iter().find(|&&c| c >= 3) {
        return Err(Error::ColorOutOfRange { color: c as u32, kappa: 3 });
    }
    // site x lives at window[x + 1]
    let tri = |x: usize| (window[x], window[x + 1], window[x + 2]);
    let xp: Vec<u8> = (0..=n).map(|x| flip_free_center(window[x], window[x + 1], window[x + 2])).collect();
    let prime = WalkPath::new(s0, xp.windows(2).map(|w| dx3(w[0], w[1])).collect());
    let t0 = tri(0);
    let script0 = s0 + (t0 == FLIP_DOWN) as i64 - 2 * (t0 == FLIP_UP) as i64;
    let script = WalkPath::new(script0, (0..n).map(|i| {
        let (a, b, c) = tri(i);
        g_triple(a, b, c)
    }).collect());
    let script_prime = script
        .positions()
        .into_iter()
        .enumerate()
        .map(|(m, s)| s + (s == -1 && tri(m) == FLIP_UP) as i64)
        .collect();
    Ok(ComparisonWalk { script, script_prime, prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::step_fca;
    use crate::rng::{random_colors, substream};
    use proptest::prelude::*;

    fn words(len: usize) -> impl Iterator<Item = Vec<u8>> {
        (0..3usize.pow(len as u32)).map(move |mut w| {
            (0..len)
                .map(|_| {
                    let d = (w % 3) as u8;
                    w /= 3;
                    d
                })
                .collect()
        })
    }

    #[test]
    fn g_triple_values() {
        assert_eq!(g_triple(1, 2, 0), -2);
        assert_eq!(g_triple(0, 2, 1), 2);
        for i in 0..3 {
            assert_eq!(g_triple(i, 1, 0), -1);
        }
        assert_eq!(g_triple(2, 2, 0), 1);
        assert_eq!(g_triple(0, 0, 0), 0);
    }

    #[test]
    fn flip_free_examples() {
        let c = ColorConfig::segment(3, 0, vec![0, 1, 2, 0, 1]).unwrap();
        assert_eq!(flip_free_env(&c).unwrap().sites(), &[0, 1, 1, 0, 1]);
        let d = ColorConfig::segment(3, 0, vec![0, 0, 1, 1, 2, 2]).unwrap();
        assert_eq!(flip_free_env(&d).unwrap(), d);
        assert!(flip_free_env(&ColorConfig::segment(4, 0, vec![0, 1]).unwrap()).is_err());
    }

    #[test]
    fn flip_free_env_has_same_successor() {
        let mut rng = substream(21, 0);
        for len in [5usize, 17, 64] {
            for _ in 0..200 {
                let c = ColorConfig::cycle(3, random_colors(&mut rng, 3, len)).unwrap();
                let p = flip_free_env(&c).unwrap();
                assert_eq!(step_fca(&c).0, step_fca(&p).0);
            }
        }
    }

    #[test]
    fn no_flipping_triples_means_equal_walks() {
        let w = [0u8, 0, 1, 1, 2, 2, 2, 0, 0];
        let r = comparison_walk(&w, 6, 3).unwrap();
        assert_eq!(r.script, r.prime);
        assert_eq!(r.script.positions(), r.script_prime);
    }

    /// Exhaustive over all 3^7 windows on [−1, 5].
    #[test]
    fn shadowing_identities_exhaustive() {
        for w in words(7) {
            let r = comparison_walk(&w, 4, 0).unwrap();
            let (s, sp) = (r.script.positions(), r.prime.positions());
            for m in 0..=4 {
                let t = (w[m], w[m + 1], w[m + 2]);
                let corr = (t == FLIP_DOWN) as i64 - 2 * (t == FLIP_UP) as i64;
                assert_eq!(s[m], sp[m] + corr, "{w:?} n={m}");
                let diff = w[m + 1] as i64 - w[1] as i64 - (s[m] - s[0]);
                assert_eq!(diff.rem_euclid(3), 0, "{w:?} n={m}");
            }
        }
    }

    /// Survival of `S′` from `x′ ≥ 0` forces survival of `𝒮′`.
    #[test]
    fn script_prime_survives_with_prime_exhaustive() {
        for w in words(8) {
            for x in 0..3 {
                let r = comparison_walk(&w, 5, x).unwrap();
                let sp = r.prime.positions();
                for t in 1..=5 {
                    if sp[1..=t].iter().all(|&v| v >= 0) {
                        assert!(r.script_prime[1..=t].iter().all(|&v| v >= 0), "{w:?} x={x} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_short_window() {
        assert!(comparison_walk(&[0, 1, 2], 1, 0).is_err());
        assert!(comparison_walk(&[0, 1, 3, 0], 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn shadowing_random_long(w in proptest::collection::vec(0u8..3, 203)) {
            let r = comparison_walk(&w, 200, 0).unwrap();
            let (s, sp) = (r.script.positions(), r.prime.positions());
            for m in 0..=200 {
                let t = (w[m], w[m + 1], w[m + 2]);
                let corr = (t == FLIP_DOWN) as i64 - 2 * (t == FLIP_UP) as i64;
                prop_assert_eq!(s[m], sp[m] + corr);
                prop_assert_eq!((w[m + 1] as i64 - w[1] as i64 - (s[m] - s[0])).rem_euclid(3), 0);
            }
        }
    }
}
