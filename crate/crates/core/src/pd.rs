//! Four-strategy stochastic Prisoner's Dilemma on a lattice.
//!
//! Each iteration runs two phases:
//!
//! 1. **Interaction.** Cells initiate in a seeded random permutation. The
//!    initiator picks one uniformly random Moore neighbor and both play one
//!    game. Payoffs apply immediately (scores capped at `max_score`) and both
//!    players remember the opponent's action. A cell initiates exactly once
//!    but may be picked as a partner any number of times.
//! 2. **Lifecycle.** Computed against the post-interaction snapshot. A cell
//!    dies if its score is `<= 0`, otherwise with the senescence probability.
//!    A dead cell mutates with probability `mu` (uniform over the first `q`
//!    strategies, score reset to `start_score`), else copies strategy and score
//!    of a uniformly drawn neighbor. Reborn cells get age 0 and no memory;
//!    survivors age by one.
//!
//! All randomness comes from one [`SimRng`] stream. Draw order per iteration:
//! the permutation shuffle, then one partner index per initiator in permutation
//! order, then for each cell in row-major order: an age-death draw (only when
//! the cell survived the score check and its death probability is in (0, 1)),
//! and for dead cells a mutation draw followed by either a strategy index or a
//! neighbor index.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Action, Cell, Coord, GameKind, Lattice, NeighborTable, Strategy};
use crate::rng::SimRng;
use crate::trajectory::{Trajectory, TrajectoryMeta};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdConfig {
    /// Temptation: defecting against a cooperator.
    pub t: i64,
    /// Reward: mutual cooperation.
    pub r: i64,
    /// Punishment: mutual defection.
    pub p: i64,
    /// Sucker's payoff: cooperating against a defector.
    pub s: i64,
    pub start_score: i64,
    pub max_score: i64,
    /// Mutation probability of a dying cell.
    pub mu: f64,
    /// Rate of senescence; `None` disables death by age.
    pub zeta: Option<f64>,
    /// Number of strategies available to mutation (the first `q` of D, C, TFT, ATFT).
    pub q: usize,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

impl PdConfig {
    /// Payoffs and scores used for every Prisoner's Dilemma scenario:
    /// T=2, R=1, P=0, S=-1, SS=2, MS=4, no mutation, no age death.
    pub fn standard(width: usize, height: usize, seed: u64) -> Self {
        PdConfig {
            t: 2,
            r: 1,
            p: 0,
            s: -1,
            start_score: 2,
            max_score: 4,
            mu: 0.0,
            zeta: None,
            q: 4,
            width,
            height,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.t > self.r && self.r > self.p && self.p > self.s) {
            return bad(format!(
                "payoffs must satisfy T > R > P > S, got T={} R={} P={} S={}",
                self.t, self.r, self.p, self.s
            ));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu must lie in [0, 1], got {}", self.mu));
        }
        if let Some(z) = self.zeta {
            if z.is_nan() || z <= 0.0 {
                return bad(format!("zeta must be positive, got {z}"));
            }
        }
        if !(1..=4).contains(&self.q) {
            return bad(format!("q must lie in 1..=4, got {}", self.q));
        }
        if self.start_score > self.max_score {
            return bad(format!(
                "start score {} exceeds max score {}",
                self.start_score, self.max_score
            ));
        }
        if self.width == 0 || self.height == 0 {
            return bad("lattice dimensions must be positive".into());
        }
        Ok(())
    }

    pub fn mutation_strategies(&self) -> &[Strategy] {
        &Strategy::PD[..self.q]
    }

    fn death_probability_for(&self, age: u32) -> f64 {
        match self.zeta {
            Some(z) => death_probability(age, z).unwrap_or(0.0),
            None => 0.0,
        }
    }
}

/// Score deltas for the (first, second) player.
pub fn payoff(a: Action, b: Action, cfg: &PdConfig) -> (i64, i64) {
    use Action::*;
    match (a, b) {
        (Cooperate, Cooperate) => (cfg.r, cfg.r),
        (Cooperate, Defect) => (cfg.s, cfg.t),
        (Defect, Cooperate) => (cfg.t, cfg.s),
        (Defect, Defect) => (cfg.p, cfg.p),
    }
}

pub fn choose_action(cell: &Cell) -> Action {
    match cell.strategy {
        Strategy::Defector => Action::Defect,
        Strategy::Cooperator => Action::Cooperate,
        Strategy::TitForTat => cell.memory.unwrap_or(Action::Cooperate),
        Strategy::AntiTitForTat => cell.memory.map_or(Action::Defect, Action::opposite),
        other => panic!("{other} is not a Prisoner's Dilemma strategy"),
    }
}

/// Probability of dying of old age: `clamp(age / zeta - 1, 0, 1)`.
pub fn death_probability(age: u32, zeta: f64) -> Result<f64> {
    if zeta.is_nan() || zeta <= 0.0 {
        return Err(Error::Config(format!("zeta must be positive, got {zeta}")));
    }
    // (age - zeta) / zeta rounds once, so 19 and 10 give exactly 0.9.
    Ok(((age as f64 - zeta) / zeta).clamp(0.0, 1.0))
}

/// Plays one game between `a` and `b` and updates scores and memories.
pub(crate) fn play_game(a: &mut Cell, b: &mut Cell, cfg: &PdConfig) {
    let (act_a, act_b) = (choose_action(a), choose_action(b));
    let (da, db) = payoff(act_a, act_b, cfg);
    a.score = (a.score + da).min(cfg.max_score);
    b.score = (b.score + db).min(cfg.max_score);
    a.memory = Some(act_b);
    b.memory = Some(act_a);
}

fn check_pd(lat: &Lattice) {
    debug_assert!(lat.is_game(GameKind::Pd), "lattice holds non-PD strategies");
}

pub fn interaction_phase(lat: &mut Lattice, cfg: &PdConfig, rng: &mut SimRng) {
    let table = NeighborTable::new(lat.width(), lat.height());
    interaction_with(lat, cfg, rng, &table);
}

fn interaction_with(lat: &mut Lattice, cfg: &PdConfig, rng: &mut SimRng, table: &NeighborTable) {
    check_pd(lat);
    let mut order: Vec<usize> = (0..lat.len()).collect();
    order.shuffle(rng);
    let cells = lat.cells_mut();
    for i in order {
        let nbrs = table.of(i);
        if nbrs.is_empty() {
            continue;
        }
        let j = nbrs[rng.gen_range(0..nbrs.len())];
        let (a, b) = pair_mut(cells, i, j);
        play_game(a, b, cfg);
    }
}

fn pair_mut(cells: &mut [Cell], i: usize, j: usize) -> (&mut Cell, &mut Cell) {
    debug_assert_ne!(i, j);
    if i < j {
        let (lo, hi) = cells.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = cells.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

pub fn lifecycle_phase(lat: &mut Lattice, cfg: &PdConfig, rng: &mut SimRng) {
    let table = NeighborTable::new(lat.width(), lat.height());
    lifecycle_with(lat, cfg, rng, &table);
}

fn lifecycle_with(lat: &mut Lattice, cfg: &PdConfig, rng: &mut SimRng, table: &NeighborTable) {
    check_pd(lat);
    let snapshot = lat.cells().to_vec();
    for (i, cell) in lat.cells_mut().iter_mut().enumerate() {
        *cell = lifecycle_cell(&snapshot, table.of(i), snapshot[i], cfg, rng);
    }
}

/// Lifecycle outcome for one cell. `neighbors` index into `snapshot`.
fn lifecycle_cell(
    snapshot: &[Cell],
    neighbors: &[usize],
    cell: Cell,
    cfg: &PdConfig,
    rng: &mut SimRng,
) -> Cell {
    let dies = cell.score <= 0 || {
        let p = cfg.death_probability_for(cell.age);
        if p >= 1.0 {
            true
        } else if p <= 0.0 {
            false
        } else {
            rng.gen::<f64>() < p
        }
    };
    if !dies {
        return Cell {
            age: cell.age.saturating_add(1),
            ..cell
        };
    }
    let mutates = rng.gen::<f64>() < cfg.mu;
    if mutates || neighbors.is_empty() {
        let pool = cfg.mutation_strategies();
        let strategy = if mutates {
            pool[rng.gen_range(0..pool.len())]
        } else {
            cell.strategy
        };
        Cell::new(strategy, cfg.start_score)
    } else {
        let donor = snapshot[neighbors[rng.gen_range(0..neighbors.len())]];
        Cell::new(donor.strategy, donor.score)
    }
}

/// Resets every cell to the starting state: score `start_score`, age 0, no memory.
pub fn reset_state(lat: &mut Lattice, cfg: &PdConfig) {
    for c in lat.cells_mut() {
        *c = Cell::new(c.strategy, cfg.start_score);
    }
}

/// Runs `iterations` full iterations and records the initial frame plus one
/// frame after each iteration.
pub fn pd_run(cfg: &PdConfig, initial: &Lattice, iterations: u64) -> Result<Trajectory> {
    cfg.validate()?;
    if initial.width() != cfg.width || initial.height() != cfg.height {
        return Err(Error::Config(format!(
            "initial lattice is {}x{}, config expects {}x{}",
            initial.width(),
            initial.height(),
            cfg.width,
            cfg.height
        )));
    }
    if !initial.is_game(GameKind::Pd) {
        return Err(Error::Config(
            "initial lattice holds non-PD strategies".into(),
        ));
    }
    let mut rng = crate::rng::seeded(cfg.seed);
    let table = NeighborTable::new(cfg.width, cfg.height);
    let mut traj = Trajectory::new(TrajectoryMeta {
        game: GameKind::Pd,
        config_digest: Some(crate::rng::digest(&format!("{cfg:?}"))),
        seed: Some(cfg.seed),
    });
    let mut lat = initial.clone();
    traj.record_frame(&lat, 0)?;
    for t in 1..=iterations {
        interaction_with(&mut lat, cfg, &mut rng, &table);
        lifecycle_with(&mut lat, cfg, &mut rng, &table);
        traj.record_frame(&lat, t)?;
    }
    Ok(traj)
}

/// Per-cell ingredients of the analytic transition probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionFactors {
    /// Fraction of neighbors whose game would leave the focal score `<= 0`.
    pub lethal_fraction: f64,
    /// Senescence death probability at the current age.
    pub age_death: f64,
    /// `lethal_fraction ∪ age_death = X + Y - XY`.
    pub death: f64,
}

/// Computes the death factor of the analytic transition for the cell at `c`.
///
/// Lethality of a neighbor is decided by the deterministic actions both cells
/// would play given their current memories, with the score capped at
/// `max_score` after the game.
pub fn transition_factors(lat: &Lattice, c: Coord, cfg: &PdConfig) -> Result<TransitionFactors> {
    let focal = *lat.get(c)?;
    let nbrs = lat.neighbors(c)?;
    let lethal_fraction = if nbrs.is_empty() {
        if focal.score <= 0 {
            1.0
        } else {
            0.0
        }
    } else {
        let lethal = nbrs
            .iter()
            .filter(|&&n| {
                let other = lat.cells()[lat.index(n)];
                let (delta, _) = payoff(choose_action(&focal), choose_action(&other), cfg);
                (focal.score + delta).min(cfg.max_score) <= 0
            })
            .count();
        lethal as f64 / nbrs.len() as f64
    };
    let x = lethal_fraction.clamp(0.0, 1.0);
    let y = cfg.death_probability_for(focal.age).clamp(0.0, 1.0);
    Ok(TransitionFactors {
        lethal_fraction: x,
        age_death: y,
        death: x + y - x * y,
    })
}

/// Probability that the cell at `c` dies this iteration and is reborn as `target`:
///
/// `(X ∪ Y) · (mu / q + (1 - mu) · |target in N| / |N|)`
///
/// where `X` is the lethal-neighbor fraction and `Y` the senescence probability.
pub fn transition_probability(
    lat: &Lattice,
    c: Coord,
    target: Strategy,
    cfg: &PdConfig,
) -> Result<f64> {
    let f = transition_factors(lat, c, cfg)?;
    Ok(f.death * rebirth_probability(lat, c, target, cfg)?)
}

fn rebirth_probability(lat: &Lattice, c: Coord, target: Strategy, cfg: &PdConfig) -> Result<f64> {
    let nbrs = lat.neighbors(c)?;
    let pool = cfg.mutation_strategies();
    let mutate = if pool.contains(&target) {
        cfg.mu / pool.len() as f64
    } else {
        0.0
    };
    let copy = if nbrs.is_empty() {
        // No donor: a non-mutating death keeps the current strategy.
        if lat.get(c)?.strategy == target {
            1.0 - cfg.mu
        } else {
            0.0
        }
    } else {
        let hits = nbrs
            .iter()
            .filter(|&&n| lat.cells()[lat.index(n)].strategy == target)
            .count();
        (1.0 - cfg.mu) * hits as f64 / nbrs.len() as f64
    };
    Ok((mutate + copy).clamp(0.0, 1.0))
}

/// Distribution of the cell's strategy after one focal iteration, in `Strategy::PD`
/// order: the transition probability for each target plus, for the current
/// strategy, the survival probability.
pub fn transition_distribution(lat: &Lattice, c: Coord, cfg: &PdConfig) -> Result<[f64; 4]> {
    let f = transition_factors(lat, c, cfg)?;
    let current = lat.get(c)?.strategy;
    let mut out = [0.0; 4];
    for (slot, &s) in out.iter_mut().zip(Strategy::PD.iter()) {
        *slot = f.death * rebirth_probability(lat, c, s, cfg)?;
        if s == current {
            *slot += 1.0 - f.death;
        }
    }
    Ok(out)
}

/// One stochastic trial of the process the analytic transition describes: the
/// focal cell initiates one game with a uniformly drawn neighbor, then the
/// lifecycle rule is applied to it against the current lattice. Returns the
/// focal cell's strategy afterwards.
pub fn sample_focal_transition(
    lat: &Lattice,
    c: Coord,
    cfg: &PdConfig,
    rng: &mut SimRng,
) -> Result<Strategy> {
    let i = lat.index(c);
    let nbrs: Vec<usize> = lat
        .neighbors(c)?
        .into_iter()
        .map(|n| lat.index(n))
        .collect();
    let mut focal = lat.cells()[i];
    if !nbrs.is_empty() {
        let mut partner = lat.cells()[nbrs[rng.gen_range(0..nbrs.len())]];
        play_game(&mut focal, &mut partner, cfg);
    }
    Ok(lifecycle_cell(lat.cells(), &nbrs, focal, cfg, rng).strategy)
}
