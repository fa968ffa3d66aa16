use crate::error::{Error, Result};
use crate::lattice::{edge_value, BulkLattice, ColorConfig, Rule};

/// Partition of a finite window into chunks separated by zero buffers.
///
/// `boundaries` lists every qualifying `B` (a maximal run of exactly `2c`
/// zeros occupies `[B−c+1, B+c]`). Chunk `i` is `[B_{i−1}+1, B_i]`, so the
/// junction edge `(B_i, B_i+1)` sits in the middle of a buffer. The stretch
/// before the first and after the last boundary is discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub c: usize,
    pub boundaries: Vec<i64>,
    pub intervals: Vec<(i64, i64)>,
    /// `ζ_i`: sum of `dX_{5κ}(j, j+1)` over `j` in chunk `i`.
    pub zeta: Vec<i64>,
}

impl IntervalPartition {
    /// `A_i`, the first site of chunk `i`.
    pub fn starts(&self) -> impl Iterator<Item = i64> + '_ {
        self.intervals.iter().map(|iv| iv.0)
    }
}

/// Qualifying boundaries in storage-index coordinates.
fn qualifying(sites: &[u8], c: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < sites.len() {
        if sites[i] != 0 {
            i += 1;
            continue;
        }
        let s = i;
        while i < sites.len() && sites[i] == 0 {
            i += 1;
        }
        // run [s, i); flanks s−1 and i must exist (nonzero by maximality)
        if i - s == 2 * c && s > 0 && i < sites.len() {
            out.push(s + c - 1);
        }
    }
    out
}

/// Build the chunk partition of `x0` and the chunk sums of `dX_{5κ}`.
///
/// `x0` is taken as the time-0 coloring; on a cycle the evolution wraps but
/// the partition ignores runs that cross the storage seam.
pub fn chunk_partition(x0: &ColorConfig, c: usize) -> Result<IntervalPartition> {
    if c == 0 {
        return Err(Error::invalid("buffer half-width must be positive"));
    }
    let b = qualifying(x0.sites(), c);
    if b.len() < 2 {
        return Err(Error::WindowTooSmall(format!(
            "{} qualifying buffer(s) of {} zeros in a window of {} sites",
            b.len(),
            2 * c,
            x0.len()
        )));
    }
    let geom = x0.geometry();
    let mut lat = BulkLattice::from_config(x0, Rule::Fca);
    lat.run(5 * x0.kappa() as u64);
    let cols = lat.colors();
    let k = x0.kappa() as u8;
    let mut intervals = Vec::with_capacity(b.len() - 1);
    let mut zeta = Vec::with_capacity(b.len() - 1);
    for w in b.windows(2) {
        let (lo, hi) = (w[0] + 1, w[1]);
        intervals.push((geom.coordinate(lo), geom.coordinate(hi)));
        zeta.push((lo..=hi).map(|j| edge_value(k, cols[j], cols[j + 1]) as i64).sum());
    }
    Ok(IntervalPartition { c, boundaries: b.iter().map(|&i| geom.coordinate(i)).collect(), intervals, zeta })
}

/// Chunk sums from one random cycle of `len` sites.
pub fn chunk_sums(kappa: u32, c: usize, len: usize, seed: u64) -> Result<Vec<i64>> {
    let mut rng = crate::rng::substream(seed, 0);
    let colors = crate::rng::random_colors(&mut rng, kappa as u8, len);
    Ok(chunk_partition(&ColorConfig::cycle(kappa, colors)?, c)?.zeta)
}
