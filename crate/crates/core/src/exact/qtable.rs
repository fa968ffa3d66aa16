use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::walk::{g_triple, Rational};

/// Default cap on the exact horizon.
pub const EXACT_CAP: usize = 400;

/// Survival families of the κ=3 comparison walk, labeled by the last two
/// colors `(i, j)`; for `j ≠ 2` the value does not depend on `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Dot0,
    Dot1,
    F02,
    F12,
    F22,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Dot0, Family::Dot1, Family::F02, Family::F12, Family::F22];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Family of the state whose last two colors are `(i, j)`.
    pub fn of(i: u8, j: u8) -> Family {
        match (i, j) {
            (_, 0) => Family::Dot0,
            (_, 1) => Family::Dot1,
            (0, 2) => Family::F02,
            (1, 2) => Family::F12,
            _ => Family::F22,
        }
    }

    /// One step from this family: `(height shift, next family)` for the next
    /// color `k = 0, 1, 2`.
    pub fn transitions(self) -> [(i64, Family); 3] {
        use Family::*;
        match self {
            Dot0 => [(0, Dot0), (1, Dot1), (-1, F02)],
            Dot1 => [(-1, Dot0), (0, Dot1), (1, F12)],
            F02 => [(1, Dot0), (2, Dot1), (0, F22)],
            F12 => [(-2, Dot0), (-1, Dot1), (0, F22)],
            F22 => [(1, Dot0), (-1, Dot1), (0, F22)],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Dot0 => "dot0",
            Family::Dot1 => "dot1",
            Family::F02 => "02",
            Family::F12 => "12",
            Family::F22 => "22",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dot0" | "●0" | "o0" => Family::Dot0,
            "dot1" | "●1" | "o1" => Family::Dot1,
            "02" => Family::F02,
            "12" => Family::F12,
            "22" => Family::F22,
            _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
        })
    }
}

/// Treatment of the walk that steps to −1 through `(0, 2)`: it is rescued
/// when the next color is 1, continuing from height 1 in state `(2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoryTerm {
    /// Rescue at every `t ≥ 1`, with `Q(·, −1) = 1`.
    #[default]
    Extended,
    /// Rescue only for `t ≥ 2`.
    Gated,
}

impl FromStr for MemoryTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extended" => Ok(MemoryTerm::Extended),
            "gated" => Ok(MemoryTerm::Gated),
            _ => Err(Error::Parse(format!("unknown memory term {s:?}"))),
        }
    }
}

/// Exact survival probabilities. `Q(f, x, t) = N(f, x, t) / 3^{t+1}` with
/// integer numerators; every update is a sum of earlier numerators.
#[derive(Debug, Clone)]
pub struct ExactTable {
    t_max: usize,
    memory: MemoryTerm,
    /// `num[f][t][x]` for `x < 2t`; larger `x` survive surely.
    num: Vec<Vec<Vec<BigUint>>>,
}

impl ExactTable {
    pub fn build(t_max: usize, memory: MemoryTerm) -> Result<Self> {
        Self::build_capped(t_max, memory, EXACT_CAP)
    }

    pub fn build_capped(t_max: usize, memory: MemoryTerm, cap: usize) -> Result<Self> {
        if t_max > cap {
            return Err(Error::invalid(format!("exact horizon {t_max} exceeds the cap {cap}")));
        }
        let mut num: Vec<Vec<Vec<BigUint>>> = vec![vec![Vec::new()]; 5];
        let mut pow3 = vec![BigUint::one()];
        for t in 1..=t_max + 1 {
            let p = &pow3[t - 1] * 3u32;
            pow3.push(p);
        }
        // numerator of Q(g, y, s) at scale 3^{s+1}
        let at = |num: &Vec<Vec<Vec<BigUint>>>, pow3: &Vec<BigUint>, g: Family, y: usize, s: usize| -> BigUint {
            let row = &num[g.index()][s];
            if y < row.len() {
                row[y].clone()
            } else {
                pow3[s + 1].clone()
            }
        };
        for t in 1..=t_max {
            for f in Family::ALL {
                let mut row = Vec::with_capacity(2 * t);
                for x in 0..2 * t {
                    let mut n = BigUint::zero();
                    for (shift, g) in f.transitions() {
                        let y = x as i64 + shift;
                        if y >= 0 {
                            n += at(&num, &pow3, g, y as usize, t - 1);
                        }
                    }
                    if f == Family::Dot0 && x == 0 {
                        if t >= 2 {
                            n += at(&num, &pow3, Family::Dot1, 1, t - 2);
                        } else if memory == MemoryTerm::Extended {
                            n += 1u32;
                        }
                    }
                    row.push(n);
                }
                num[f.index()].push(row);
            }
        }
        Ok(ExactTable { t_max, memory, num })
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn memory(&self) -> MemoryTerm {
        self.memory
    }

    /// `(numerator, e)` with `Q = numerator / 3^e` in lowest terms.
    pub fn reduced(&self, f: Family, x: usize, t: usize) -> (BigUint, u32) {
        let row = &self.num[f.index()][t];
        if x >= row.len() {
            return (BigUint::one(), 0);
        }
        let mut n = row[x].clone();
        let mut e = t as u32 + 1;
        let three = BigUint::from(3u32);
        while e > 0 && !n.is_zero() {
            let (q, r) = n.div_rem(&three);
            if !r.is_zero() {
                break;
            }
            n = q;
            e -= 1;
        }
        if n.is_zero() {
            e = 0;
        }
        (n, e)
    }

    pub fn value(&self, f: Family, x: usize, t: usize) -> Rational {
        let (n, e) = self.reduced(f, x, t);
        Rational::new(BigInt::from(n), BigInt::from(BigUint::from(3u32).pow(e)))
    }

    pub fn value_f64(&self, f: Family, x: usize, t: usize) -> f64 {
        use num_traits::ToPrimitive;
        self.value(f, x, t).to_f64().unwrap_or(f64::NAN)
    }

    /// Largest stored `x` at time `t` (all larger `x` have value 1).
    pub fn x_max(&self, t: usize) -> usize {
        2 * t
    }
}

/// Floating survival probabilities for long horizons. Only the columns
/// `x ≤ x_keep` are retained; at time `t` the rows are truncated to the
/// `x` range that can still reach those columns by time `T`.
#[derive(Debug, Clone)]
pub struct FloatTable {
    t_max: usize,
    memory: MemoryTerm,
    x_keep: usize,
    /// `cols[f][t * (x_keep+1) + x]`.
    cols: Vec<Vec<f64>>,
}

impl FloatTable {
    pub fn build(t_max: usize, memory: MemoryTerm, x_keep: usize) -> Self {
        let width = x_keep + 2 * t_max + 3;
        let stride = x_keep + 1;
        // three rotating time slots of five rows; cells never written stay 1,
        // which is exact for x ≥ 2t
        let mut slots: Vec<Vec<Vec<f64>>> = (0..3).map(|_| vec![vec![1.0; width]; 5]).collect();
        let mut cols = vec![vec![1.0; (t_max + 1) * stride]; 5];
        for t in 1..=t_max {
            let lim = (2 * t).min(x_keep + 2 * (t_max - t) + 1);
            let mut cur = std::mem::take(&mut slots[t % 3]);
            {
                let prev = &slots[(t - 1) % 3];
                let rescue = if t >= 2 {
                    slots[(t - 2) % 3][Family::Dot1.index()][1]
                } else if memory == MemoryTerm::Extended {
                    1.0
                } else {
                    0.0
                };
                for f in Family::ALL {
                    let row = &mut cur[f.index()];
                    let tr = f.transitions();
                    row[..lim].fill(0.0);
                    for &(shift, g) in &tr {
                        // out[x] += prev[g][x + shift] for x + shift ≥ 0
                        let src = &prev[g.index()];
                        let skip = (-shift).max(0) as usize;
                        let off = (skip as i64 + shift) as usize;
                        if skip < lim {
                            let n = lim - skip;
                            for (o, v) in row[skip..lim].iter_mut().zip(&src[off..off + n]) {
                                *o += v;
                            }
                        }
                    }
                    if f == Family::Dot0 {
                        row[0] += rescue / 3.0;
                    }
                    for v in &mut row[..lim] {
                        *v /= 3.0;
                    }
                    let keep = stride.min(lim);
                    cols[f.index()][t * stride..t * stride + keep].copy_from_slice(&row[..keep]);
                }
            }
            slots[t % 3] = cur;
        }
        FloatTable { t_max, memory, x_keep, cols }
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn memory(&self) -> MemoryTerm {
        self.memory
    }

    pub fn x_keep(&self) -> usize {
        self.x_keep
    }

    pub fn value(&self, f: Family, x: usize, t: usize) -> f64 {
        if x >= 2 * t {
            return 1.0;
        }
        assert!(x <= self.x_keep, "column {x} was not retained");
        self.cols[f.index()][t * (self.x_keep + 1) + x]
    }

    /// `Q(f, x, 0..=T)`.
    pub fn series(&self, f: Family, x: usize) -> Vec<f64> {
        (0..=self.t_max).map(|t| self.value(f, x, t)).collect()
    }
}

/// The full nine-state recursion over `(i, j)` built directly from
/// `g_triple`, with exact rationals. Used to confirm the five-family
/// reduction: returns `Q[(i, j)][t][x]` for `x ≤ x_hi`.
pub fn nine_state_table(t_max: usize, x_hi: usize, memory: MemoryTerm) -> Vec<Vec<Vec<Rational>>> {
    let w = x_hi + 2 * t_max + 3;
    let one = Rational::one();
    let third = Rational::new(1.into(), 3.into());
    let mut q: Vec<Vec<Vec<Rational>>> = vec![vec![vec![one.clone(); w]]; 9];
    for t in 1..=t_max {
        let mut next = vec![vec![Rational::zero(); w]; 9];
        for i in 0..3u8 {
            for j in 0..3u8 {
                let s = (i * 3 + j) as usize;
                for x in 0..w {
                    let mut acc = Rational::zero();
                    for k in 0..3u8 {
                        let y = x as i64 + g_triple(i, j, k);
                        let to = (j * 3 + k) as usize;
                        if y >= 0 {
                            acc += if (y as usize) < w { q[to][t - 1][y as usize].clone() } else { one.clone() };
                        } else if y == -1 && (j, k) == (0, 2) {
                            // next color 1 rescues the walk: height 1, state (2, 1)
                            if t >= 2 {
                                acc += &third * &q[7][t - 2][1];
                            } else if memory == MemoryTerm::Extended {
                                acc += third.clone();
                            }
                        }
                    }
                    next[s][x] = acc * &third;
                }
            }
        }
        for (s, row) in next.into_iter().enumerate() {
            q[s].push(row);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn base_row_and_first_step() {
        let t = ExactTable::build(3, MemoryTerm::Extended).unwrap();
        for f in Family::ALL {
            for x in 0..10 {
                assert_eq!(t.value(f, x, 0), r(1, 1));
            }
        }
        assert_eq!(t.value(Family::F12, 0, 1), r(1, 3));
        assert_eq!(t.value(Family::F22, 0, 1), r(2, 3));
        assert_eq!(t.value(Family::Dot0, 0, 1), r(7, 9));
        let g = ExactTable::build(3, MemoryTerm::Gated).unwrap();
        assert_eq!(g.value(Family::Dot0, 0, 1), r(2, 3));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(ExactTable::build(401, MemoryTerm::Extended).is_err());
        assert!(ExactTable::build_capped(10, MemoryTerm::Extended, 5).is_err());
    }

    #[test]
    fn table_invariants() {
        let t = ExactTable::build(40, MemoryTerm::Extended).unwrap();
        for f in Family::ALL {
            for s in 1..=40 {
                for x in 0..=2 * s + 2 {
                    let v = t.value(f, x, s);
                    assert!(v >= Rational::zero() && v <= Rational::one());
                    assert!(v <= t.value(f, x, s - 1), "{f} x={x} t={s}");
                    if x >= 2 * s {
                        assert_eq!(v, Rational::one());
                    }
                    if x > 0 {
                        assert!(t.value(f, x - 1, s) <= v);
                    }
                }
            }
        }
    }

    #[test]
    fn five_families_match_nine_state_recursion() {
        for memory in [MemoryTerm::Extended, MemoryTerm::Gated] {
            let t_max = 8;
            let nine = nine_state_table(t_max, 4, memory);
            let five = ExactTable::build(t_max, memory).unwrap();
            for i in 0..3u8 {
                for j in 0..3u8 {
                    let f = Family::of(i, j);
                    for t in 0..=t_max {
                        for x in 0..=4 {
                            assert_eq!(nine[(i * 3 + j) as usize][t][x], five.value(f, x, t), "({i},{j}) x={x} t={t}");
                        }
                    }
                }
            }
            // the two spellings of the rescue term agree
            for t in 0..=t_max {
                for x in 0..=4 {
                    assert_eq!(nine[7][t][x], nine[1][t][x]);
                }
            }
        }
    }

    #[test]
    fn float_matches_exact() {
        let tm = 400;
        let e = ExactTable::build(tm, MemoryTerm::Extended).unwrap();
        let fl = FloatTable::build(tm, MemoryTerm::Extended, 2);
        for f in Family::ALL {
            for t in 0..=tm {
                for x in 0..=2 {
                    let a = e.value_f64(f, x, t);
                    let b = fl.value(f, x, t);
                    assert!((a - b).abs() <= 1e-12 * a.abs(), "{f} x={x} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn reduced_form_and_parse() {
        let t = ExactTable::build(2, MemoryTerm::Extended).unwrap();
        assert_eq!(t.reduced(Family::F12, 0, 1), (BigUint::from(1u32), 1));
        assert_eq!(t.reduced(Family::Dot0, 9, 1), (BigUint::from(1u32), 0));
        assert_eq!("dot0".parse::<Family>().unwrap(), Family::Dot0);
        assert_eq!("●1".parse::<Family>().unwrap(), Family::Dot1);
        assert!("33".parse::<Family>().is_err());
    }
}
