use super::config::{ColorConfig, Geometry};
use crate::error::{Error, Result};

/// `dX(u, v)` for colors `u = X(u)`, `v = X(v)` of adjacent sites.
///
/// The difference `v − u` mod κ is mapped into `[−m, m]`, `m = ⌊κ/2⌋`. For
/// even κ the tie `±m` is resolved towards the endpoint whose color lies in
/// `[0, b(κ)]`.
#[inline]
pub fn edge_value(kappa: u8, u: u8, v: u8) -> i8 {
    let k = kappa as i16;
    let m = k / 2;
    let d = (v as i16 - u as i16).rem_euclid(k);
    let out = if kappa % 2 == 0 && d == m {
        if (u as i16) <= (k - 1) / 2 {
            m
        } else {
            -m
        }
    } else if d <= m {
        d
    } else {
        d - k
    };
    out as i8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Increasing,
    Decreasing,
}

/// Per-edge values of `dX` in the orientation `(x, x+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneForm {
    kappa: u8,
    values: Vec<i8>,
    geometry: Geometry,
    time: u64,
}

impl OneForm {
    pub fn of(config: &ColorConfig) -> OneForm {
        let geom = config.geometry();
        let k = config.kappa_u8();
        let s = config.sites();
        let values = (0..geom.edge_count()).map(|e| edge_value(k, s[e], s[geom.edge_right(e)])).collect();
        OneForm { kappa: k, values, geometry: geom, time: config.time() }
    }

    /// Build directly from edge values; used for synthetic particle inputs.
    pub fn from_values(kappa: u32, geometry: Geometry, values: Vec<i8>, time: u64) -> Result<OneForm> {
        super::config::check_kappa(kappa)?;
        if values.len() != geometry.edge_count() {
            return Err(Error::Geometry(format!("{} values for {} edges", values.len(), geometry.edge_count())));
        }
        let m = (kappa / 2) as i8;
        if let Some(v) = values.iter().find(|v| v.abs() > m) {
            return Err(Error::invalid(format!("edge value {v} outside [-{m}, {m}]")));
        }
        Ok(OneForm { kappa: kappa as u8, values, geometry, time })
    }

    pub fn kappa(&self) -> u32 {
        self.kappa as u32
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// `dX(x, x+1)`.
    pub fn value(&self, x: i64) -> Result<i8> {
        self.geometry.edge_index(x).map(|e| self.values[e]).ok_or(Error::SiteOutside(x))
    }

    /// `dX(u, v)` for adjacent `u`, `v` in either order.
    pub fn between(&self, u: i64, v: i64) -> Result<i8> {
        if v == u + 1 {
            self.value(u)
        } else if u == v + 1 {
            Ok(-self.value(v)?)
        } else {
            Err(Error::invalid(format!("sites {u} and {v} are not adjacent")))
        }
    }

    /// Integral of `dX` from `x` to `y` on a segment.
    pub fn path_integral(&self, x: i64, y: i64) -> Result<i64> {
        let Geometry::Segment { lo, hi } = self.geometry else {
            return Err(Error::OrientationRequired);
        };
        for s in [x, y] {
            if !(lo..=hi).contains(&s) {
                return Err(Error::SiteOutside(s));
            }
        }
        let (a, b, sign) = if x <= y { (x, y, 1) } else { (y, x, -1) };
        let sum: i64 = self.values[(a - lo) as usize..(b - lo) as usize].iter().map(|&v| v as i64).sum();
        Ok(sign * sum)
    }

    /// Integral of `dX` along the walk from `x` to `y` on a cycle moving in
    /// the given orientation (an empty walk when `x ≡ y`).
    pub fn cycle_integral(&self, x: i64, y: i64, orientation: Orientation) -> Result<i64> {
        let Geometry::Cycle { len } = self.geometry else {
            return self.path_integral(x, y);
        };
        let n = len as i64;
        let (x, y) = (x.rem_euclid(n), y.rem_euclid(n));
        let mut sum = 0i64;
        match orientation {
            Orientation::Increasing => {
                let mut s = x;
                while s != y {
                    sum += self.values[s as usize] as i64;
                    s = (s + 1) % n;
                }
            }
            Orientation::Decreasing => {
                let mut s = x;
                while s != y {
                    let prev = (s - 1).rem_euclid(n);
                    sum -= self.values[prev as usize] as i64;
                    s = prev;
                }
            }
        }
        Ok(sum)
    }
}
