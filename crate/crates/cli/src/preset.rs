//! Built-in scenarios: the six analysis cases and the seven two-strategy baselines.

use evotopo_core::{
    efg_run, grass_with_fires, pd_run, seeded_stream, Cell, Coord, EfgConfig, GameKind,
    IterationInterval, Lattice, PdConfig, SignificancePolicy, Squared, Strategy, Trajectory,
};
use rand::Rng;

use crate::UsageError;

const CASE2_FRAME: &str = include_str!("../fixtures/case2.frame");
const CASE3_TRAJ: &str = include_str!("../fixtures/case3.traj");
const CASE4_TRAJ: &str = include_str!("../fixtures/case4.traj");
const CASE5_TRAJ: &str = include_str!("../fixtures/case5.traj");
/// Single 10x10 frame: cooperators with three isolated defector cells.
pub const FIG3_FRAME: &str = include_str!("../fixtures/fig3.frame");

/// Squared analysis threshold used by presets (ε = 2.5).
pub fn default_threshold() -> Squared {
    Squared::new(25, 4)
}

pub const PRESET_NAMES: [&str; 14] = [
    "case1",
    "case2",
    "case3",
    "case4",
    "case5",
    "case6a",
    "case6b",
    "baseline-a",
    "baseline-b",
    "baseline-c",
    "baseline-d",
    "baseline-e",
    "baseline-f",
    "baseline-g",
];

#[derive(Debug, Clone)]
pub enum Initial {
    Fixed(Lattice),
    /// Each cell drawn uniformly from the list, from stream 1 of the run seed.
    Random(Vec<Strategy>),
}

#[derive(Debug, Clone)]
pub enum Source {
    Pd {
        config: PdConfig,
        initial: Initial,
        iterations: u64,
    },
    Efg {
        config: EfgConfig,
        initial: Lattice,
    },
    /// A stored trajectory replayed as is.
    Recorded(Trajectory),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisPlan {
    pub strategy: Strategy,
    /// `None` covers the whole trajectory.
    pub interval: Option<IterationInterval>,
    pub time_scale: Squared,
    /// `None` uses the enclosing radius capped at [`default_threshold`].
    pub threshold: Option<Squared>,
    pub policy: SignificancePolicy,
}

impl AnalysisPlan {
    pub fn new(strategy: Strategy) -> Self {
        AnalysisPlan {
            strategy,
            interval: None,
            time_scale: Squared::from_integer(1),
            threshold: Some(default_threshold()),
            policy: SignificancePolicy::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: String,
    pub summary: String,
    pub source: Source,
    pub analysis: AnalysisPlan,
}

impl Preset {
    pub fn game(&self) -> GameKind {
        match &self.source {
            Source::Pd { .. } => GameKind::Pd,
            Source::Efg { .. } => GameKind::Efg,
            Source::Recorded(t) => t.meta.game,
        }
    }

    /// Runs the scenario. `iterations` overrides the preset's run length.
    pub fn simulate(&self, seed: u64, iterations: Option<u64>) -> anyhow::Result<Trajectory> {
        match &self.source {
            Source::Pd {
                config,
                initial,
                iterations: default_iters,
            } => {
                let cfg = PdConfig {
                    seed,
                    ..config.clone()
                };
                let lattice = match initial {
                    Initial::Fixed(l) => l.clone(),
                    Initial::Random(pool) => {
                        random_lattice(cfg.width, cfg.height, pool, seed, cfg.start_score)?
                    }
                };
                Ok(pd_run(
                    &cfg,
                    &lattice,
                    iterations.unwrap_or(*default_iters),
                )?)
            }
            Source::Efg { config, initial } => {
                let cfg = EfgConfig {
                    seed,
                    iterations: iterations.unwrap_or(config.iterations),
                    ..config.clone()
                };
                Ok(efg_run(&cfg, initial)?)
            }
            Source::Recorded(traj) => {
                if iterations.is_some() {
                    return Err(UsageError(format!(
                        "preset {} replays a recorded trajectory; --iterations does not apply",
                        self.name
                    ))
                    .into());
                }
                Ok(traj.clone())
            }
        }
    }
}

/// Lattice with every cell drawn uniformly from `pool`.
pub fn random_lattice(
    width: usize,
    height: usize,
    pool: &[Strategy],
    seed: u64,
    score: i64,
) -> anyhow::Result<Lattice> {
    if pool.is_empty() {
        return Err(UsageError("random initial lattice needs at least one strategy".into()).into());
    }
    let mut rng = seeded_stream(seed, 1);
    Ok(Lattice::from_fn(width, height, |_| {
        Cell::new(pool[rng.gen_range(0..pool.len())], score)
    })?)
}

fn recorded(text: &str) -> Trajectory {
    Trajectory::parse(text).expect("bundled trajectory fixture parses")
}

fn case_config(width: usize, height: usize) -> PdConfig {
    PdConfig::standard(width, height, 0)
}

/// Config of the long run that cases 3 to 5 were cut from.
pub fn long_run_config() -> PdConfig {
    PdConfig {
        mu: 0.05,
        zeta: Some(20.0),
        ..PdConfig::standard(7, 7, 0)
    }
}

fn efg_case(name: &str, max_age: u32) -> Preset {
    let fires = [
        Coord::new(5, 5),
        Coord::new(6, 5),
        Coord::new(5, 6),
        Coord::new(6, 6),
    ];
    Preset {
        name: name.into(),
        summary: format!(
            "Earth-Fire-Grass, 12x12, four central fires, MA={max_age}, 20 steps; Fire analyzed"
        ),
        source: Source::Efg {
            config: EfgConfig {
                max_age,
                width: 12,
                height: 12,
                seed: 0,
                iterations: 20,
            },
            initial: grass_with_fires(12, 12, &fires).expect("fires inside the lattice"),
        },
        analysis: AnalysisPlan::new(Strategy::Fire),
    }
}

fn baseline(letter: char, pool: &[Strategy]) -> Preset {
    let names: Vec<&str> = pool.iter().map(|s| s.name()).collect();
    Preset {
        name: format!("baseline-{letter}"),
        summary: format!(
            "10x10, random {} start, 100 iterations, no mutation or age death",
            names.join("/")
        ),
        source: Source::Pd {
            config: case_config(10, 10),
            initial: Initial::Random(pool.to_vec()),
            iterations: 100,
        },
        analysis: AnalysisPlan::new(pool[0]),
    }
}

pub fn preset(name: &str) -> Result<Preset, UsageError> {
    use Strategy::*;
    let p = match name {
        "case1" => {
            // Left half defectors, right half TFT; the middle column is split.
            let initial = Lattice::from_fn(7, 7, |c| {
                let s = if c.x < 3 || (c.x == 3 && c.y <= 3) {
                    Defector
                } else {
                    TitForTat
                };
                Cell::new(s, 2)
            })
            .expect("7x7");
            Preset {
                name: name.into(),
                summary: "7x7 defectors vs TFT in two halves, 25 iterations; defectors analyzed"
                    .into(),
                source: Source::Pd {
                    config: case_config(7, 7),
                    initial: Initial::Fixed(initial),
                    iterations: 25,
                },
                analysis: AnalysisPlan::new(Defector),
            }
        }
        "case2" => {
            let (_, _, initial) =
                evotopo_core::parse_frame(CASE2_FRAME).expect("bundled frame parses");
            Preset {
                name: name.into(),
                summary:
                    "7x7 defectors with two TFT clusters, 30 iterations; defectors over t=0..29"
                        .into(),
                source: Source::Pd {
                    config: case_config(7, 7),
                    initial: Initial::Fixed(initial),
                    iterations: 30,
                },
                analysis: AnalysisPlan {
                    interval: Some(IterationInterval::new(0, 29).expect("ordered")),
                    ..AnalysisPlan::new(Defector)
                },
            }
        }
        "case3" | "case4" | "case5" => {
            let (text, what) = match name {
                "case3" => (CASE3_TRAJ, "one longer TFT invasion, t=596..621"),
                "case4" => (CASE4_TRAJ, "two short ATFT invasions, t=501..510"),
                _ => (
                    CASE5_TRAJ,
                    "stable TFT cluster and two ATFT invasions, t=425..450",
                ),
            };
            Preset {
                name: name.into(),
                summary: format!(
                    "recorded 7x7 defector-dominated window: {what}; defectors analyzed"
                ),
                source: Source::Recorded(recorded(text)),
                analysis: AnalysisPlan::new(Defector),
            }
        }
        "case6a" => efg_case(name, 2),
        "case6b" => efg_case(name, 4),
        "baseline-a" => baseline('a', &Strategy::PD),
        "baseline-b" => baseline('b', &[Defector, Cooperator]),
        "baseline-c" => baseline('c', &[Defector, TitForTat]),
        "baseline-d" => baseline('d', &[Defector, AntiTitForTat]),
        "baseline-e" => baseline('e', &[Cooperator, TitForTat]),
        "baseline-f" => baseline('f', &[Cooperator, AntiTitForTat]),
        "baseline-g" => baseline('g', &[TitForTat, AntiTitForTat]),
        other => {
            return Err(UsageError(format!(
                "unknown preset '{other}'; available presets: {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_resolves() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, name);
        }
        let err = preset("case9").unwrap_err().to_string();
        assert!(err.contains("case1") && err.contains("baseline-g"), "{err}");
    }

    #[test]
    fn case_presets_use_standard_payoffs() {
        for name in ["case1", "case2"] {
            let Source::Pd { config, .. } = preset(name).unwrap().source else {
                panic!("{name} is a simulation preset");
            };
            assert_eq!((config.t, config.r, config.p, config.s), (2, 1, 0, -1));
            assert_eq!((config.start_score, config.max_score), (2, 4));
        }
        let long = long_run_config();
        assert_eq!((long.mu, long.zeta), (0.05, Some(20.0)));
    }

    #[test]
    fn recorded_cases_span_their_windows() {
        let spans: Vec<(u64, u64)> = ["case3", "case4", "case5"]
            .iter()
            .map(|n| {
                let t = preset(n).unwrap().simulate(0, None).unwrap();
                (t.first_t().unwrap(), t.last_t().unwrap())
            })
            .collect();
        assert_eq!(spans, vec![(596, 621), (501, 510), (425, 450)]);
        assert!(preset("case3").unwrap().simulate(0, Some(3)).is_err());
    }

    #[test]
    fn random_start_is_seeded() {
        let pool = [Strategy::Defector, Strategy::Cooperator];
        let a = random_lattice(10, 10, &pool, 4, 2).unwrap();
        let b = random_lattice(10, 10, &pool, 4, 2).unwrap();
        let c = random_lattice(10, 10, &pool, 5, 2).unwrap();
        assert!(a.same_strategies(&b));
        assert!(!a.same_strategies(&c));
    }

    #[test]
    fn case1_frame_count() {
        let t = preset("case1").unwrap().simulate(7, None).unwrap();
        assert_eq!(t.len(), 26);
        let t0 = preset("case1").unwrap().simulate(7, Some(0)).unwrap();
        assert_eq!(t0.len(), 1);
    }
}
