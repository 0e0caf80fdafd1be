//! Earth-Fire-Grass: a cyclic SIRS cellular automaton.
//!
//! One step is computed synchronously from the pre-step lattice:
//!
//! - a Fire whose age equals `max_age` turns into Earth (age 0) and ignites nothing;
//! - every other Fire picks one uniformly random Grass neighbor, if it has any,
//!   and ages by one;
//! - every picked Grass becomes Fire with age 0 (once, however many Fires picked it);
//! - an Earth whose age equals `max_age` turns into Grass (age 0), otherwise ages by one;
//! - un-ignited Grass stays as it is.
//!
//! Fires draw their neighbor index in row-major order, one draw per Fire that
//! has at least one Grass neighbor.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Cell, GameKind, Lattice, NeighborTable, Strategy};
use crate::rng::SimRng;
use crate::trajectory::{Trajectory, TrajectoryMeta};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfgConfig {
    /// Age at which Fire burns out and Earth turns fertile.
    pub max_age: u32,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub iterations: u64,
}

impl EfgConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_age == 0 {
            return Err(Error::Config("max_age must be at least 1".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Config("lattice dimensions must be positive".into()));
        }
        Ok(())
    }
}

pub fn efg_step(lat: &mut Lattice, cfg: &EfgConfig, rng: &mut SimRng) {
    let table = NeighborTable::new(lat.width(), lat.height());
    step_with(lat, cfg, rng, &table);
}

fn step_with(lat: &mut Lattice, cfg: &EfgConfig, rng: &mut SimRng, table: &NeighborTable) {
    debug_assert!(
        lat.is_game(GameKind::Efg),
        "lattice holds non-EFG strategies"
    );
    let pre = lat.cells().to_vec();
    let mut ignite = vec![false; pre.len()];
    let mut grass = Vec::with_capacity(8);
    for (i, cell) in pre.iter().enumerate() {
        if cell.strategy != Strategy::Fire || cell.age >= cfg.max_age {
            continue;
        }
        grass.clear();
        grass.extend(
            table
                .of(i)
                .iter()
                .copied()
                .filter(|&j| pre[j].strategy == Strategy::Grass),
        );
        if !grass.is_empty() {
            ignite[grass[rng.gen_range(0..grass.len())]] = true;
        }
    }
    for ((cell, old), lit) in lat.cells_mut().iter_mut().zip(&pre).zip(ignite) {
        *cell = match old.strategy {
            Strategy::Fire if old.age >= cfg.max_age => Cell::new(Strategy::Earth, 0),
            Strategy::Earth if old.age >= cfg.max_age => Cell::new(Strategy::Grass, 0),
            Strategy::Fire | Strategy::Earth => Cell {
                age: old.age + 1,
                ..*old
            },
            Strategy::Grass if lit => Cell::new(Strategy::Fire, 0),
            _ => *old,
        };
    }
}

/// Runs `cfg.iterations` steps, recording the initial frame and one frame per step.
pub fn efg_run(cfg: &EfgConfig, initial: &Lattice) -> Result<Trajectory> {
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
    if !initial.is_game(GameKind::Efg) {
        return Err(Error::Config(
            "initial lattice holds non-EFG strategies".into(),
        ));
    }
    let mut rng = crate::rng::seeded(cfg.seed);
    let table = NeighborTable::new(cfg.width, cfg.height);
    let mut traj = Trajectory::new(TrajectoryMeta {
        game: GameKind::Efg,
        config_digest: Some(crate::rng::digest(&format!("{cfg:?}"))),
        seed: Some(cfg.seed),
    });
    let mut lat = initial.clone();
    traj.record_frame(&lat, 0)?;
    for t in 1..=cfg.iterations {
        step_with(&mut lat, cfg, &mut rng, &table);
        traj.record_frame(&lat, t)?;
    }
    Ok(traj)
}

/// Grass everywhere except the given Fire cells.
pub fn grass_with_fires(
    width: usize,
    height: usize,
    fires: &[crate::lattice::Coord],
) -> Result<Lattice> {
    let mut lat = Lattice::filled(width, height, Cell::new(Strategy::Grass, 0))?;
    for &c in fires {
        lat.set_strategy(c, Strategy::Fire)?;
    }
    Ok(lat)
}
