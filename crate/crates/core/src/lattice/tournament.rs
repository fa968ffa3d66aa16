use super::config::{ColorConfig, Geometry};
use super::form::OneForm;
use super::rules::{flipped_edges, step_flags, Rule};
use crate::error::{Error, Result};

/// Tournament ranks `rk_t` on a segment, pinned by `rk_t(origin) = ne_t(origin)`
/// and `rk_t(x+1) − rk_t(x) = −dX_t(x, x+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    ranks: Vec<i64>,
    lo: i64,
    origin: i64,
    ne_origin: u64,
    time: u64,
}

impl Ranking {
    pub fn from_config(config: &ColorConfig, origin: i64, ne_origin: u64) -> Result<Ranking> {
        let Geometry::Segment { lo, hi } = config.geometry() else {
            return Err(Error::Geometry("rankings are defined on segments".into()));
        };
        if !(lo..=hi).contains(&origin) {
            return Err(Error::SiteOutside(origin));
        }
        let form = OneForm::of(config);
        let mut ranks = vec![0i64; config.len()];
        let o = (origin - lo) as usize;
        ranks[o] = ne_origin as i64;
        for i in o + 1..ranks.len() {
            ranks[i] = ranks[i - 1] - form.values()[i - 1] as i64;
        }
        for i in (0..o).rev() {
            ranks[i] = ranks[i + 1] + form.values()[i] as i64;
        }
        Ok(Ranking { ranks, lo, origin, ne_origin, time: config.time() })
    }

    pub fn rank(&self, x: i64) -> Result<i64> {
        usize::try_from(x - self.lo)
            .ok()
            .and_then(|i| self.ranks.get(i).copied())
            .ok_or(Error::SiteOutside(x))
    }

    pub fn ranks(&self) -> &[i64] {
        &self.ranks
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn ne_origin(&self) -> u64 {
        self.ne_origin
    }

    pub fn time(&self) -> u64 {
        self.time
    }
}

/// One tournament update: `x` gains a point iff a blinking neighbor outranks it.
pub fn tournament_step(ranking: &Ranking, config: &ColorConfig) -> Result<Ranking> {
    if ranking.time != config.time() {
        return Err(Error::TimeMismatch(ranking.time, config.time()));
    }
    let Geometry::Segment { lo, .. } = config.geometry() else {
        return Err(Error::Geometry("rankings are defined on segments".into()));
    };
    if lo != ranking.lo || config.len() != ranking.ranks.len() {
        return Err(Error::Geometry("ranking and configuration cover different windows".into()));
    }
    let next = step_flags(config, Rule::Fca).0;
    if let Some(&edge) = flipped_edges(config, &next).first() {
        return Err(Error::Flip { time: config.time(), edge });
    }
    let b = config.blink();
    let s = config.sites();
    let r = &ranking.ranks;
    let n = r.len();
    let ranks: Vec<i64> = (0..n)
        .map(|i| {
            let beaten = |j: usize| s[j] == b && r[j] > r[i];
            let up = (i > 0 && beaten(i - 1)) || (i + 1 < n && beaten(i + 1));
            r[i] + up as i64
        })
        .collect();
    let ne_origin = ranks[(ranking.origin - lo) as usize] as u64;
    Ok(Ranking { ranks, lo, origin: ranking.origin, ne_origin, time: ranking.time + 1 })
}

/// `M_t(r)`: the largest rank within distance `r` of the origin.
pub fn max_rank(ranking: &Ranking, r: u64) -> Result<i64> {
    let a = ranking.origin - r as i64;
    let b = ranking.origin + r as i64;
    let hi = ranking.lo + ranking.ranks.len() as i64 - 1;
    if a < ranking.lo {
        return Err(Error::SiteOutside(a));
    }
    if b > hi {
        return Err(Error::SiteOutside(b));
    }
    Ok(ranking.ranks[(a - ranking.lo) as usize..=(b - ranking.lo) as usize].iter().copied().max().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rules::step_fca;
    use crate::rng::{random_colors, substream};

    #[test]
    fn constant_config_leaves_ranks() {
        let c = ColorConfig::segment(3, -3, vec![2; 7]).unwrap();
        let r = Ranking::from_config(&c, 0, 4).unwrap();
        assert!(r.ranks().iter().all(|&v| v == 4));
        let s = tournament_step(&r, &c).unwrap();
        assert_eq!(s.ranks(), r.ranks());
        assert_eq!(max_rank(&s, 0), Ok(4));
        assert!(max_rank(&s, 4).is_err());
    }

    #[test]
    fn rank_increments_are_excitations() {
        let mut rng = substream(21, 0);
        for kappa in [3u8, 5, 7] {
            for _ in 0..100 {
                let mut c = ColorConfig::segment(kappa as u32, -20, random_colors(&mut rng, kappa, 41)).unwrap();
                let t0 = crate::lattice::burn_in(kappa as u32);
                for _ in 0..t0 {
                    c = step_fca(&c).0;
                }
                let mut r = Ranking::from_config(&c, 0, 0).unwrap();
                let mut ne = 0u64;
                for _ in 0..30 {
                    let (next, rep) = step_fca(&c);
                    let r2 = tournament_step(&r, &c).unwrap();
                    for (i, x) in c.coordinates().enumerate() {
                        let inc = r2.ranks()[i] - r.ranks()[i];
                        assert_eq!(inc, rep.excited.contains(&x) as i64);
                    }
                    ne += rep.excited.contains(&0) as u64;
                    let rebuilt = Ranking::from_config(&next, 0, ne).unwrap();
                    assert_eq!(rebuilt.ranks(), r2.ranks());
                    c = next;
                    r = r2;
                }
            }
        }
    }

    #[test]
    fn refuses_to_step_through_flips() {
        // (1,2,0) with a blinker left of 2 flips edge (2,0)
        let c = ColorConfig::segment(3, 0, vec![0, 1, 2, 0, 2]).unwrap();
        let r = Ranking::from_config(&c, 2, 0).unwrap();
        assert!(matches!(tournament_step(&r, &c), Err(Error::Flip { .. })));
    }

    #[test]
    fn max_rank_is_monotone() {
        let mut rng = substream(21, 1);
        let c = ColorConfig::segment(5, -10, random_colors(&mut rng, 5, 21)).unwrap();
        let r = Ranking::from_config(&c, 0, 3).unwrap();
        assert_eq!(max_rank(&r, 0), Ok(3));
        let ms: Vec<i64> = (0..=10).map(|k| max_rank(&r, k).unwrap()).collect();
        assert!(ms.windows(2).all(|w| w[0] <= w[1]));
    }
}
