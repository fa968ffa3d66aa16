use crate::error::{Error, Result};
use crate::lattice::{Geometry, OneForm, Orientation};

/// `S_0, S_1, …` given by a start value and integer increments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    start: i64,
    increments: Vec<i64>,
}

impl WalkPath {
    pub fn new(start: i64, increments: Vec<i64>) -> Self {
        WalkPath { start, increments }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn increments(&self) -> &[i64] {
        &self.increments
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `S_0 ..= S_len`.
    pub fn positions(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.increments.len() + 1);
        let mut s = self.start;
        out.push(s);
        for &d in &self.increments {
            s += d;
            out.push(s);
        }
        out
    }

    /// `S_n`.
    pub fn at(&self, n: usize) -> i64 {
        self.start + self.increments[..n].iter().sum::<i64>()
    }

    /// Whether `S_1, …, S_k` are all `≥ 0`.
    pub fn survives(&self, k: usize) -> bool {
        let mut s = self.start;
        self.increments[..k].iter().all(|&d| {
            s += d;
            s >= 0
        })
    }
}

/// `S_0 = 0`, `S_n = Σ_{i<n} dX(origin ± i, origin ± (i+1))` in the chosen
/// direction. On a cycle at most `len` steps are allowed.
pub fn associated_walk(form: &OneForm, origin: i64, orientation: Orientation, steps: usize) -> Result<WalkPath> {
    let sign = match orientation {
        Orientation::Increasing => 1,
        Orientation::Decreasing => -1,
    };
    if let Geometry::Cycle { len } = form.geometry() {
        if steps > len {
            return Err(Error::WindowTooSmall(format!("{steps} steps on a cycle of length {len}")));
        }
    } else {
        let far = origin + sign * steps as i64;
        form.geometry().index(origin).ok_or(Error::SiteOutside(origin))?;
        if form.geometry().index(far).is_none() {
            return Err(Error::WindowTooSmall(format!("walk of {steps} steps from {origin} leaves the segment")));
        }
    }
    let increments = (0..steps as i64)
        .map(|i| {
            let u = origin + sign * i;
            form.between(u, u + sign).map(|v| v as i64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkPath::new(0, increments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{evolve_form, ColorConfig, Ranking};
    use crate::rng::{random_colors, substream};

    #[test]
    fn constant_form_gives_constant_walk() {
        let f = OneForm::of(&ColorConfig::segment(5, 0, vec![3; 10]).unwrap());
        let w = associated_walk(&f, 2, Orientation::Increasing, 7).unwrap();
        assert_eq!(w.positions(), vec![0; 8]);
    }

    #[test]
    fn kappa3_increments() {
        let f = OneForm::of(&ColorConfig::segment(3, 0, vec![0, 1, 2, 0, 1]).unwrap());
        let w = associated_walk(&f, 0, Orientation::Increasing, 4).unwrap();
        assert_eq!(w.increments(), &[1, 1, 1, 1]);
        let back = associated_walk(&f, 4, Orientation::Decreasing, 4).unwrap();
        assert_eq!(back.increments(), &[-1, -1, -1, -1]);
        assert!(associated_walk(&f, 0, Orientation::Increasing, 5).is_err());
    }

    #[test]
    fn walk_is_negative_rank_difference() {
        let mut rng = substream(11, 0);
        for _ in 0..20 {
            let cfg = ColorConfig::segment(3, -20, random_colors(&mut rng, 3, 41)).unwrap();
            let form = evolve_form(&cfg, 0);
            let ranking = Ranking::from_config(&cfg, 0, 0).unwrap();
            let w = associated_walk(&form, 0, Orientation::Increasing, 20).unwrap();
            for (n, s) in w.positions().into_iter().enumerate() {
                assert_eq!(ranking.rank(n as i64).unwrap() - ranking.rank(0).unwrap(), -s);
            }
        }
    }

    #[test]
    fn survival_flag() {
        let w = WalkPath::new(0, vec![1, -1, -1, 2]);
        assert!(w.survives(2));
        assert!(!w.survives(3));
        assert_eq!(w.at(4), 1);
    }
}
