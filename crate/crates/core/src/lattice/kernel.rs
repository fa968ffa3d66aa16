//! Byte-per-site update loops for bulk simulation.
//!
//! Each step is one pass over three shifted views of the current row, written
//! without data-dependent branches so the compiler can vectorize it.

use super::config::{check_kappa, ColorConfig, Geometry};
use super::rules::Rule;
use crate::error::{Error, Result};

#[inline(always)]
fn fca_row(l: &[u8], c: &[u8], r: &[u8], out: &mut [u8], kappa: u8) {
    let n = out.len();
    let (l, c, r) = (&l[..n], &c[..n], &r[..n]);
    let b = (kappa - 1) / 2;
    let top = kappa - 1;
    for i in 0..n {
        let x = c[i];
        let keep = ((l[i] == b) | (r[i] == b)) & (x > b);
        let inc = if x == top { 0 } else { x.wrapping_add(1) };
        out[i] = if keep { x } else { inc };
    }
}

#[inline(always)]
fn ghm_row(l: &[u8], c: &[u8], r: &[u8], out: &mut [u8], kappa: u8) {
    let n = out.len();
    let (l, c, r) = (&l[..n], &c[..n], &r[..n]);
    let top = kappa - 1;
    for i in 0..n {
        let x = c[i];
        let fire = ((l[i] == 1) | (r[i] == 1)) as u8;
        let inc = if x == top { 0 } else { x.wrapping_add(1) };
        out[i] = if x == 0 { fire } else { inc };
    }
}

#[inline(always)]
fn cca_row(l: &[u8], c: &[u8], r: &[u8], out: &mut [u8], kappa: u8) {
    let n = out.len();
    let (l, c, r) = (&l[..n], &c[..n], &r[..n]);
    let top = kappa - 1;
    for i in 0..n {
        let x = c[i];
        let inc = if x == top { 0 } else { x.wrapping_add(1) };
        let eaten = (l[i] == inc) | (r[i] == inc);
        out[i] = if eaten { inc } else { x };
    }
}

/// Write `rule(l[i], c[i], r[i])` into `out[i]`.
#[inline]
pub fn update_row(rule: Rule, kappa: u8, l: &[u8], c: &[u8], r: &[u8], out: &mut [u8]) {
    match rule {
        Rule::Fca => fca_row(l, c, r, out, kappa),
        Rule::Ghm => ghm_row(l, c, r, out, kappa),
        Rule::Cca => cca_row(l, c, r, out, kappa),
    }
}

/// Number of `i` with `c[i] != c[i+1]`.
#[inline]
pub fn count_disagreements(c: &[u8]) -> u64 {
    if c.len() < 2 {
        return 0;
    }
    let (a, b) = (&c[..c.len() - 1], &c[1..]);
    let mut total = 0u64;
    for (ca, cb) in a.chunks(1 << 16).zip(b.chunks(1 << 16)) {
        let s: u32 = ca.iter().zip(cb).map(|(x, y)| (x != y) as u32).sum();
        total += s as u64;
    }
    total
}

/// Ghost value for path endpoints; it is not a color, so it never triggers a rule.
const INERT: u8 = u8::MAX;

/// A cycle or path lattice updated in place, padded with two ghost cells.
/// On a cycle the ghosts mirror the opposite ends; on a path they stay inert.
#[derive(Debug, Clone)]
pub struct BulkLattice {
    kappa: u8,
    rule: Rule,
    geometry: Geometry,
    buf: Vec<u8>,
    scratch: Vec<u8>,
    time: u64,
}

impl BulkLattice {
    pub fn new(kappa: u32, rule: Rule, geometry: Geometry, colors: &[u8]) -> Result<Self> {
        let cfg = ColorConfig::new(kappa, colors.to_vec(), geometry, 0)?;
        Ok(Self::from_config(&cfg, rule))
    }

    /// Cycle over `colors`.
    pub fn cycle(kappa: u32, rule: Rule, colors: &[u8]) -> Result<Self> {
        Self::new(kappa, rule, Geometry::Cycle { len: colors.len() }, colors)
    }

    pub fn from_config(config: &ColorConfig, rule: Rule) -> Self {
        let n = config.len();
        let mut buf = vec![INERT; n + 2];
        buf[1..=n].copy_from_slice(config.sites());
        BulkLattice {
            kappa: config.kappa_u8(),
            rule,
            geometry: config.geometry(),
            scratch: buf.clone(),
            buf,
            time: config.time(),
        }
    }

    pub fn step(&mut self) {
        let n = self.buf.len() - 2;
        if self.geometry.is_cycle() {
            self.buf[0] = self.buf[n];
            self.buf[n + 1] = self.buf[1];
        }
        update_row(self.rule, self.kappa, &self.buf[..n], &self.buf[1..=n], &self.buf[2..], &mut self.scratch[1..=n]);
        std::mem::swap(&mut self.buf, &mut self.scratch);
        self.time += 1;
    }

    pub fn run(&mut self, steps: u64) {
        for _ in 0..steps {
            self.step();
        }
    }

    pub fn colors(&self) -> &[u8] {
        &self.buf[1..self.buf.len() - 1]
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn len(&self) -> usize {
        self.buf.len() - 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of disagreeing edges (including the closing edge on a cycle).
    pub fn disagreements(&self) -> u64 {
        let c = self.colors();
        let wrap = self.geometry.is_cycle() && c[0] != c[c.len() - 1];
        count_disagreements(c) + wrap as u64
    }

    pub fn to_config(&self) -> ColorConfig {
        ColorConfig::from_parts(self.kappa, self.colors().to_vec(), self.geometry, self.time)
    }
}

/// Evolve the FCA on a segment whose ends are dropped each step, so every
/// stored color is the exact ℤ value. Returns `e[s] = 1` iff the site at
/// `origin` (an index into `colors`) is excited at step `s`, for `s < steps`.
pub fn origin_excitations(kappa: u32, colors: &[u8], origin: usize, steps: usize) -> Result<Vec<u8>> {
    check_kappa(kappa)?;
    if origin < steps || origin + steps >= colors.len() {
        return Err(Error::WindowTooSmall(format!(
            "{} sites cannot carry {steps} exact steps at index {origin}",
            colors.len()
        )));
    }
    let k = kappa as u8;
    let mut cur = colors.to_vec();
    let mut next = vec![0u8; colors.len()];
    let mut out = Vec::with_capacity(steps);
    let mut o = origin;
    for _ in 0..steps {
        let n = cur.len() - 2;
        fca_row(&cur[..n], &cur[1..n + 1], &cur[2..], &mut next[..n], k);
        o -= 1;
        out.push((next[o] == cur[o + 1]) as u8);
        next.truncate(n);
        std::mem::swap(&mut cur, &mut next);
        next.resize(cur.len(), 0);
    }
    Ok(out)
}
