//! Labeled edge particles driven by an FCA trajectory.
//!
//! An edge with `dX = k > 0` carries `k` right-moving particles stacked in a
//! first-in first-out queue, `k < 0` carries `|k|` left-moving ones. The bottom
//! particle of a right queue on `(x, x+1)` is released when `x` blinks and moves
//! to `(x+1, x+2)`; a left queue is released when `x+1` blinks. Opposing bottom
//! particles annihilate when they would cross or land on the same edge, and
//! surviving arrivals join the top of the destination queue.

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::lattice::{flipped_edges, step_flags, ColorConfig, Geometry, OneForm, Rule};

/// Queue capacity; heights never exceed `⌊κ/2⌋`.
const QUEUE_CAP: usize = 16;

/// Largest κ the particle expansion accepts.
pub const MAX_PARTICLE_KAPPA: u32 = 2 * QUEUE_CAP as u32 + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Left => "l",
            Direction::Right => "r",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParticleState {
    /// On edge `(edge, edge+1)` at queue position `height` (1 is the bottom).
    Edge { edge: i64, height: u8 },
    Graveyard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Particle {
    pub label: u32,
    pub direction: Direction,
    pub state: ParticleState,
}

type Queue = ArrayVec<u32, QUEUE_CAP>;

/// The particle expansion `ξ_t` anchored at `anchor_time` on a cycle.
#[derive(Debug, Clone)]
pub struct ParticleField {
    kappa: u8,
    len: usize,
    time: u64,
    anchor: u64,
    particles: Vec<Particle>,
    queues: Vec<Queue>,
    history: Vec<Vec<(u64, ParticleState)>>,
}

/// Seed the expansion from a flip-free 1-form. Labels run left to right over
/// edges and bottom to top within an edge.
pub fn init_particles(form: &OneForm) -> Result<ParticleField> {
    let Geometry::Cycle { len } = form.geometry() else {
        return Err(Error::Geometry("the particle expansion runs on cycles".into()));
    };
    let kappa = form.kappa();
    if kappa > MAX_PARTICLE_KAPPA {
        return Err(Error::KappaUnsupported(kappa, "queue heights exceed the fixed capacity"));
    }
    let time = form.time();
    let mut particles = Vec::new();
    let mut queues = vec![Queue::new(); len];
    let mut history = Vec::new();
    for (e, &v) in form.values().iter().enumerate() {
        let direction = if v > 0 { Direction::Right } else { Direction::Left };
        for h in 0..v.unsigned_abs() {
            let label = particles.len() as u32;
            let state = ParticleState::Edge { edge: e as i64, height: h + 1 };
            particles.push(Particle { label, direction, state });
            queues[e].push(label);
            history.push(vec![(time, state)]);
        }
    }
    Ok(ParticleField { kappa: kappa as u8, len, time, anchor: time, particles, queues, history })
}

impl ParticleField {
    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn anchor_time(&self) -> u64 {
        self.anchor
    }

    pub fn kappa(&self) -> u32 {
        self.kappa as u32
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn particle(&self, label: u32) -> Result<&Particle> {
        self.particles.get(label as usize).ok_or(Error::UnknownLabel(label))
    }

    /// Labels on edge `(x, x+1)`, bottom first.
    pub fn queue(&self, x: i64) -> &[u32] {
        &self.queues[x.rem_euclid(self.len as i64) as usize]
    }

    /// Signed particle count `#right − #left` on edge `(x, x+1)`.
    pub fn edge_charge(&self, x: i64) -> i64 {
        let q = self.queue(x);
        match q.first() {
            None => 0,
            Some(&l) => match self.particles[l as usize].direction {
                Direction::Right => q.len() as i64,
                Direction::Left => -(q.len() as i64),
            },
        }
    }

    /// `Σ (#right − #left)` over the cycle.
    pub fn net_charge(&self) -> i64 {
        (0..self.len as i64).map(|x| self.edge_charge(x)).sum()
    }

    pub fn alive(&self) -> usize {
        self.particles.iter().filter(|p| p.state != ParticleState::Graveyard).count()
    }

    fn bottom(&self, e: usize) -> Option<(u32, Direction)> {
        self.queues[e].first().map(|&l| (l, self.particles[l as usize].direction))
    }
}

/// Advance the expansion by one step of the FCA trajectory through `config`.
pub fn step_particles(field: &ParticleField, config: &ColorConfig) -> Result<ParticleField> {
    if config.time() != field.time {
        return Err(Error::TimeMismatch(field.time, config.time()));
    }
    if config.geometry() != (Geometry::Cycle { len: field.len }) || config.kappa() != field.kappa() {
        return Err(Error::Geometry("configuration does not match the particle field".into()));
    }
    let next = step_flags(config, Rule::Fca).0;
    if let Some(&edge) = flipped_edges(config, &next).first() {
        return Err(Error::Flip { time: config.time(), edge });
    }
    let n = field.len;
    let b = config.blink();
    let x = config.sites();
    let succ = |e: usize| (e + 1) % n;

    let released: Vec<bool> = (0..n)
        .map(|e| match field.bottom(e) {
            Some((_, Direction::Right)) => x[e] == b,
            Some((_, Direction::Left)) => x[succ(e)] == b,
            None => false,
        })
        .collect();

    let mut annihilated = vec![false; n];
    for e in 0..n {
        if !matches!(field.bottom(e), Some((_, Direction::Right))) {
            continue;
        }
        let e1 = succ(e);
        match field.bottom(e1) {
            Some((_, Direction::Left)) => {
                if released[e] || released[e1] {
                    annihilated[e] = true;
                    annihilated[e1] = true;
                }
            }
            None if released[e] => {
                let e2 = succ(e1);
                if matches!(field.bottom(e2), Some((_, Direction::Left))) && released[e2] {
                    annihilated[e] = true;
                    annihilated[e2] = true;
                }
            }
            _ => {}
        }
    }

    let mut queues = field.queues.clone();
    let mut arrivals: Vec<Option<u32>> = vec![None; n];
    for e in 0..n {
        if !(released[e] || annihilated[e]) {
            continue;
        }
        let (label, dir) = field.bottom(e).expect("released edges are occupied");
        queues[e].remove(0);
        if annihilated[e] {
            continue;
        }
        let target = match dir {
            Direction::Right => succ(e),
            Direction::Left => (e + n - 1) % n,
        };
        if arrivals[target].replace(label).is_some() {
            return Err(Error::invalid(format!("two particles entered edge {target} at time {}", field.time)));
        }
    }

    let mut out = field.clone();
    out.time = field.time + 1;
    for (e, arrival) in arrivals.into_iter().enumerate() {
        if let Some(label) = arrival {
            let dir = field.particles[label as usize].direction;
            if let Some(&first) = queues[e].first() {
                if field.particles[first as usize].direction != dir {
                    return Err(Error::invalid(format!("mixed queue on edge {e} at time {}", out.time)));
                }
            }
            queues[e]
                .try_push(label)
                .map_err(|_| Error::invalid(format!("queue overflow on edge {e} at time {}", out.time)))?;
        }
    }
    for e in 0..n {
        if annihilated[e] {
            let label = field.queues[e][0];
            out.set_state(label, ParticleState::Graveyard);
        }
        for (h, &label) in queues[e].iter().enumerate() {
            out.set_state(label, ParticleState::Edge { edge: e as i64, height: h as u8 + 1 });
        }
    }
    out.queues = queues;
    Ok(out)
}

impl ParticleField {
    fn set_state(&mut self, label: u32, state: ParticleState) {
        let p = &mut self.particles[label as usize];
        if p.state != state {
            p.state = state;
            self.history[label as usize].push((self.time, state));
        }
    }
}

/// Every edge carries `dX` as `#right − #left` and no queue
/// mixes directions.
pub fn check_consistency(field: &ParticleField, form: &OneForm) -> bool {
    if form.geometry() != (Geometry::Cycle { len: field.len }) {
        return false;
    }
    (0..field.len).all(|e| {
        let q = &field.queues[e];
        let pure = q.iter().all(|&l| field.particles[l as usize].direction == field.particles[q[0] as usize].direction);
        pure && field.edge_charge(e as i64) == form.values()[e] as i64
    })
}

/// State changes of a particle since the anchor time, starting with its initial state.
pub fn trace(field: &ParticleField, label: u32) -> Result<&[(u64, ParticleState)]> {
    field.history.get(label as usize).map(|h| h.as_slice()).ok_or(Error::UnknownLabel(label))
}

/// Times `t` at which the particle sits on a new edge (it left its edge during `t−1 → t`).
pub fn move_times(field: &ParticleField, label: u32) -> Result<Vec<u64>> {
    let h = trace(field, label)?;
    let mut out = Vec::new();
    let mut edge = None;
    for &(t, s) in h {
        if let ParticleState::Edge { edge: e, .. } = s {
            if edge.is_some_and(|prev| prev != e) {
                out.push(t);
            }
            edge = Some(e);
        }
    }
    Ok(out)
}

/// CSV rows `label,time,edge,height,direction|grave` for every recorded state change.
pub fn trace_csv(field: &ParticleField) -> String {
    let mut s = String::from("label,time,edge,height,direction\n");
    for p in &field.particles {
        for &(t, st) in &field.history[p.label as usize] {
            match st {
                ParticleState::Edge { edge, height } => {
                    s.push_str(&format!("{},{},{},{},{}\n", p.label, t, edge, height, p.direction.as_str()))
                }
                ParticleState::Graveyard => s.push_str(&format!("{},{},,,grave\n", p.label, t)),
            }
        }
    }
    s
}

/// For κ = 3: whether `Σ_{i=−τ+1}^{−τ+k} dX(i,i+1) ≥ 0` for every `1 ≤ k ≤ 2τ`.
pub fn survival_criterion_k3(form: &OneForm, tau: u64) -> Result<bool> {
    if form.kappa() != 3 {
        return Err(Error::KappaUnsupported(form.kappa(), "the survival criterion is stated for three colors"));
    }
    let t = tau as i64;
    if let Geometry::Cycle { len } = form.geometry() {
        if (len as i64) < 2 * t + 1 {
            return Err(Error::WindowTooSmall(format!("cycle of length {len} for tau {tau}")));
        }
    }
    let mut sum = 0i64;
    for i in (-t + 1)..=t {
        sum += form.value(i).map_err(|_| Error::WindowTooSmall(format!("edge {i} not covered")))? as i64;
        if sum < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
