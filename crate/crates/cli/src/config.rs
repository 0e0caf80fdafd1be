//! TOML run configuration, an alternative to the built-in presets.
//!
//! ```toml
//! game = "pd"
//! iterations = 50
//! mix = ["defector", "tft"]      # random start; or `initial = "start.frame"`
//!
//! [pd]
//! width = 10
//! height = 10
//! mu = 0.05
//! zeta = 20.0
//!
//! [analysis]
//! strategy = "defector"
//! interval = "0:50"
//! window = "sqrt(2):2"
//! ```
//!
//! Unset payoff and score fields take the standard values (T=2, R=1, P=0,
//! S=-1, SS=2, MS=4); mutation and age death are off unless given.

use std::path::{Path, PathBuf};

use anyhow::Context;
use evotopo_core::{parse_frame, EfgConfig, GameKind, PdConfig, SignificancePolicy, Strategy};
use serde::Deserialize;

use crate::parse::{parse_eps_sq, parse_interval, parse_rational, parse_window};
use crate::preset::{AnalysisPlan, Initial, Preset, Source};
use crate::UsageError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub game: String,
    pub iterations: Option<u64>,
    /// Frame file, relative to the config file.
    pub initial: Option<PathBuf>,
    /// Strategies for a uniformly random start.
    pub mix: Option<Vec<String>>,
    pub pd: Option<PdSection>,
    pub efg: Option<EfgSection>,
    pub analysis: Option<AnalysisSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdSection {
    pub t: Option<i64>,
    pub r: Option<i64>,
    pub p: Option<i64>,
    pub s: Option<i64>,
    pub start_score: Option<i64>,
    pub max_score: Option<i64>,
    pub mu: Option<f64>,
    pub zeta: Option<f64>,
    pub q: Option<usize>,
    pub width: Option<usize>,
    pub height: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfgSection {
    pub max_age: Option<u32>,
    pub width: Option<usize>,
    pub height: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub strategy: Option<String>,
    pub interval: Option<String>,
    pub time_scale: Option<String>,
    pub threshold: Option<String>,
    pub window: Option<String>,
    pub min_persistence: Option<f64>,
}

pub fn load(path: &Path) -> anyhow::Result<Preset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: RunConfig = toml::from_str(&text)
        .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    build(cfg, base, &path.display().to_string())
}

fn build(cfg: RunConfig, base: &Path, name: &str) -> anyhow::Result<Preset> {
    let game: GameKind = cfg
        .game
        .parse()
        .map_err(|e: evotopo_core::Error| UsageError(e.to_string()))?;
    let fixed = match &cfg.initial {
        Some(rel) => {
            let path = base.join(rel);
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading initial frame {}", path.display()))?;
            let (frame_game, _, lattice) =
                parse_frame(&text).with_context(|| format!("parsing {}", path.display()))?;
            if frame_game != game {
                return Err(UsageError(format!(
                    "initial frame is a {frame_game} frame, config says {game}"
                ))
                .into());
            }
            Some(lattice)
        }
        None => None,
    };
    let mix = cfg
        .mix
        .as_deref()
        .unwrap_or_default()
        .iter()
        .map(|s| s.parse::<Strategy>().map_err(|e| UsageError(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if fixed.is_some() == !mix.is_empty() {
        return Err(UsageError("config needs exactly one of `initial` or `mix`".into()).into());
    }
    let size = |w: Option<usize>, h: Option<usize>| -> anyhow::Result<(usize, usize)> {
        match (&fixed, w, h) {
            (Some(l), w, h) => {
                if w.is_some_and(|w| w != l.width()) || h.is_some_and(|h| h != l.height()) {
                    return Err(
                        UsageError("width/height disagree with the initial frame".into()).into(),
                    );
                }
                Ok((l.width(), l.height()))
            }
            (None, Some(w), Some(h)) => Ok((w, h)),
            (None, _, _) => Err(UsageError("a random start needs width and height".into()).into()),
        }
    };

    let source = match game {
        GameKind::Pd => {
            if cfg.efg.is_some() {
                return Err(UsageError("[efg] section in a pd config".into()).into());
            }
            let s = cfg.pd.unwrap_or_default();
            let (width, height) = size(s.width, s.height)?;
            let std = PdConfig::standard(width, height, 0);
            let config = PdConfig {
                t: s.t.unwrap_or(std.t),
                r: s.r.unwrap_or(std.r),
                p: s.p.unwrap_or(std.p),
                s: s.s.unwrap_or(std.s),
                start_score: s.start_score.unwrap_or(std.start_score),
                max_score: s.max_score.unwrap_or(std.max_score),
                mu: s.mu.unwrap_or(std.mu),
                zeta: s.zeta,
                q: s.q.unwrap_or(std.q),
                ..std
            };
            config.validate().map_err(|e| UsageError(e.to_string()))?;
            let initial = match fixed {
                Some(l) => Initial::Fixed(l),
                None => Initial::Random(mix),
            };
            Source::Pd {
                config,
                initial,
                iterations: cfg.iterations.unwrap_or(100),
            }
        }
        GameKind::Efg => {
            if cfg.pd.is_some() {
                return Err(UsageError("[pd] section in an efg config".into()).into());
            }
            let s = cfg.efg.unwrap_or_default();
            let (width, height) = size(s.width, s.height)?;
            let config = EfgConfig {
                max_age: s.max_age.unwrap_or(2),
                width,
                height,
                seed: 0,
                iterations: cfg.iterations.unwrap_or(20),
            };
            config.validate().map_err(|e| UsageError(e.to_string()))?;
            let initial = match fixed {
                Some(l) => l,
                None => crate::preset::random_lattice(width, height, &mix, 0, 0)?,
            };
            Source::Efg { config, initial }
        }
    };

    let a = cfg.analysis.unwrap_or_default();
    let default_strategy = game.strategies()[0];
    let strategy = match &a.strategy {
        Some(s) => s
            .parse::<Strategy>()
            .map_err(|e| UsageError(e.to_string()))?,
        None => default_strategy,
    };
    let mut plan = AnalysisPlan::new(strategy);
    if let Some(iv) = &a.interval {
        plan.interval = Some(parse_interval(iv)?);
    }
    if let Some(ts) = &a.time_scale {
        plan.time_scale = parse_rational(ts)?;
    }
    if let Some(th) = &a.threshold {
        plan.threshold = Some(parse_eps_sq(th)?);
    }
    let (lo, hi) = match &a.window {
        Some(w) => parse_window(w)?,
        None => {
            let d = SignificancePolicy::default();
            (d.window_low_sq, d.window_high_sq)
        }
    };
    plan.policy = SignificancePolicy::new(lo, hi, a.min_persistence)
        .map_err(|e| UsageError(e.to_string()))?;

    Ok(Preset {
        name: name.to_string(),
        summary: format!("{game} run from {name}"),
        source,
        analysis: plan,
    })
}
