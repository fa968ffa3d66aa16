use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of colors; colors are stored in one byte.
pub const MAX_KAPPA: u32 = 255;

/// The distinguished blinking color `b(κ) = ⌊(κ−1)/2⌋`.
pub fn blink_color(kappa: u32) -> Result<u8> {
    check_kappa(kappa)?;
    Ok(((kappa - 1) / 2) as u8)
}

/// Burn-in time after which no edge flips: `⌊κ/2⌋` for odd κ, `5κ` for even κ.
pub fn burn_in(kappa: u32) -> u64 {
    if kappa % 2 == 1 {
        (kappa / 2) as u64
    } else {
        5 * kappa as u64
    }
}

pub(crate) fn check_kappa(kappa: u32) -> Result<()> {
    if kappa < 3 {
        Err(Error::KappaTooSmall(kappa))
    } else if kappa > MAX_KAPPA {
        Err(Error::KappaUnsupported(kappa, "colors are stored as single bytes"))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Sites `0..len` with `len−1` adjacent to `0`.
    Cycle { len: usize },
    /// The path on sites `lo..=hi`.
    Segment { lo: i64, hi: i64 },
}

impl Geometry {
    pub fn site_count(&self) -> usize {
        match *self {
            Geometry::Cycle { len } => len,
            Geometry::Segment { lo, hi } => (hi - lo + 1) as usize,
        }
    }

    pub fn edge_count(&self) -> usize {
        match *self {
            Geometry::Cycle { len } => len,
            Geometry::Segment { lo, hi } => (hi - lo) as usize,
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, Geometry::Cycle { .. })
    }

    /// Storage index of site `x`; cycle coordinates are taken modulo the length.
    pub fn index(&self, x: i64) -> Option<usize> {
        match *self {
            Geometry::Cycle { len } => Some(x.rem_euclid(len as i64) as usize),
            Geometry::Segment { lo, hi } => (lo..=hi).contains(&x).then(|| (x - lo) as usize),
        }
    }

    /// Coordinate of the site stored at index `i`.
    pub fn coordinate(&self, i: usize) -> i64 {
        match *self {
            Geometry::Cycle { .. } => i as i64,
            Geometry::Segment { lo, .. } => lo + i as i64,
        }
    }

    /// Storage index of edge `(x, x+1)`.
    pub fn edge_index(&self, x: i64) -> Option<usize> {
        match *self {
            Geometry::Cycle { len } => Some(x.rem_euclid(len as i64) as usize),
            Geometry::Segment { lo, hi } => (lo..hi).contains(&x).then(|| (x - lo) as usize),
        }
    }

    /// Neighbor indices of the site at index `i`.
    #[inline]
    pub(crate) fn neighbors(&self, i: usize) -> (Option<usize>, Option<usize>) {
        match *self {
            Geometry::Cycle { len } => (Some((i + len - 1) % len), Some((i + 1) % len)),
            Geometry::Segment { .. } => {
                let n = self.site_count();
                (i.checked_sub(1), (i + 1 < n).then_some(i + 1))
            }
        }
    }

    /// Index of the right endpoint of the edge stored at index `e`.
    #[inline]
    pub(crate) fn edge_right(&self, e: usize) -> usize {
        match *self {
            Geometry::Cycle { len } => (e + 1) % len,
            Geometry::Segment { .. } => e + 1,
        }
    }
}

/// A coloring `X_t` of a cycle or of a segment of ℤ at time `time`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorConfig {
    kappa: u8,
    sites: Vec<u8>,
    geometry: Geometry,
    time: u64,
}

impl ColorConfig {
    pub fn new(kappa: u32, sites: Vec<u8>, geometry: Geometry, time: u64) -> Result<Self> {
        check_kappa(kappa)?;
        match geometry {
            Geometry::Cycle { len } => {
                if len < 3 {
                    return Err(Error::Geometry(format!("cycle length {len} < 3")));
                }
            }
            Geometry::Segment { lo, hi } => {
                if hi < lo {
                    return Err(Error::Geometry(format!("segment [{lo}, {hi}] is empty")));
                }
            }
        }
        if sites.len() != geometry.site_count() {
            return Err(Error::Geometry(format!(
                "{} colors supplied for {} sites",
                sites.len(),
                geometry.site_count()
            )));
        }
        if let Some(&c) = sites.iter().find(|&&c| c as u32 >= kappa) {
            return Err(Error::ColorOutOfRange { color: c as u32, kappa });
        }
        Ok(ColorConfig { kappa: kappa as u8, sites, geometry, time })
    }

    pub fn cycle(kappa: u32, sites: Vec<u8>) -> Result<Self> {
        let len = sites.len();
        Self::new(kappa, sites, Geometry::Cycle { len }, 0)
    }

    /// Segment starting at coordinate `lo`.
    pub fn segment(kappa: u32, lo: i64, sites: Vec<u8>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Geometry("segment needs at least one site".into()));
        }
        let hi = lo + sites.len() as i64 - 1;
        Self::new(kappa, sites, Geometry::Segment { lo, hi }, 0)
    }

    /// Parse colors from a digit string (κ ≤ 10) or a comma-separated list.
    pub fn parse_colors(kappa: u32, text: &str) -> Result<Vec<u8>> {
        let text = text.trim();
        let colors: Vec<u32> = if text.contains(',') {
            text.split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|e| Error::Parse(format!("color {s:?}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            if kappa > 10 {
                return Err(Error::Parse("digit strings are only accepted for kappa <= 10".into()));
            }
            text.chars()
                .map(|ch| ch.to_digit(10).ok_or_else(|| Error::Parse(format!("not a digit: {ch:?}"))))
                .collect::<Result<_>>()?
        };
        colors
            .into_iter()
            .map(|c| {
                if c < kappa {
                    Ok(c as u8)
                } else {
                    Err(Error::ColorOutOfRange { color: c, kappa })
                }
            })
            .collect()
    }

    pub fn with_time(mut self, time: u64) -> Self {
        self.time = time;
        self
    }

    pub fn kappa(&self) -> u32 {
        self.kappa as u32
    }

    pub(crate) fn kappa_u8(&self) -> u8 {
        self.kappa
    }

    pub fn blink(&self) -> u8 {
        (self.kappa - 1) / 2
    }

    pub fn sites(&self) -> &[u8] {
        &self.sites
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn color(&self, x: i64) -> Result<u8> {
        self.geometry.index(x).map(|i| self.sites[i]).ok_or(Error::SiteOutside(x))
    }

    pub fn coordinates(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.sites.len()).map(move |i| self.geometry.coordinate(i))
    }

    /// Copy of the colors on `[lo, hi]` as a segment with the same time stamp.
    pub fn window(&self, lo: i64, hi: i64) -> Result<ColorConfig> {
        if hi < lo {
            return Err(Error::Geometry(format!("window [{lo}, {hi}] is empty")));
        }
        let sites = (lo..=hi).map(|x| self.color(x)).collect::<Result<Vec<_>>>()?;
        Ok(ColorConfig { kappa: self.kappa, sites, geometry: Geometry::Segment { lo, hi }, time: self.time })
    }

    /// Same geometry and time with replaced colors.
    pub fn with_sites(&self, sites: Vec<u8>) -> Result<ColorConfig> {
        ColorConfig::new(self.kappa(), sites, self.geometry, self.time)
    }

    pub(crate) fn from_parts(kappa: u8, sites: Vec<u8>, geometry: Geometry, time: u64) -> Self {
        ColorConfig { kappa, sites, geometry, time }
    }

    /// One line of a trajectory dump.
    pub fn dump_line(&self) -> String {
        if self.kappa <= 10 {
            self.sites.iter().map(|&c| char::from(b'0' + c)).collect()
        } else {
            self.sites.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for ColorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump_line())
    }
}

/// Initial interval whose colors determine `[a, b]` after `t` steps.
pub fn light_cone_window(a: i64, b: i64, t: u64) -> (i64, i64) {
    (a - t as i64, b + t as i64)
}
