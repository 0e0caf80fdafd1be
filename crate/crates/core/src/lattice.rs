//! Square lattices, Moore neighborhoods and the per-cell state shared by both games.
//!
//! Coordinates are 0-based with the origin in the bottom-left corner: `x` is the
//! column, `y` the row. Cells are stored row-major starting from row `y = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Coord { x, y }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Which game a lattice belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Pd,
    Efg,
}

impl GameKind {
    pub fn strategies(self) -> &'static [Strategy] {
        match self {
            GameKind::Pd => &Strategy::PD,
            GameKind::Efg => &Strategy::EFG,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Pd => "pd",
            GameKind::Efg => "efg",
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pd" => Ok(GameKind::Pd),
            "efg" => Ok(GameKind::Efg),
            other => Err(Error::Config(format!(
                "unknown game kind '{other}' (expected pd or efg)"
            ))),
        }
    }
}

/// Strategy label of a cell. The first four belong to the Prisoner's Dilemma,
/// the last three to Earth-Fire-Grass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strategy {
    Defector,
    Cooperator,
    TitForTat,
    AntiTitForTat,
    Earth,
    Fire,
    Grass,
}

impl Strategy {
    pub const PD: [Strategy; 4] = [
        Strategy::Defector,
        Strategy::Cooperator,
        Strategy::TitForTat,
        Strategy::AntiTitForTat,
    ];
    pub const EFG: [Strategy; 3] = [Strategy::Earth, Strategy::Fire, Strategy::Grass];

    /// Single-character code used in frame records.
    pub fn code(self) -> char {
        match self {
            Strategy::Defector => 'D',
            Strategy::Cooperator => 'C',
            Strategy::TitForTat => 'T',
            Strategy::AntiTitForTat => 'A',
            Strategy::Earth => 'E',
            Strategy::Fire => 'F',
            Strategy::Grass => 'G',
        }
    }

    pub fn from_code(c: char) -> Option<Strategy> {
        Some(match c {
            'D' => Strategy::Defector,
            'C' => Strategy::Cooperator,
            'T' => Strategy::TitForTat,
            'A' => Strategy::AntiTitForTat,
            'E' => Strategy::Earth,
            'F' => Strategy::Fire,
            'G' => Strategy::Grass,
            _ => return None,
        })
    }

    pub fn game(self) -> GameKind {
        match self {
            Strategy::Defector
            | Strategy::Cooperator
            | Strategy::TitForTat
            | Strategy::AntiTitForTat => GameKind::Pd,
            Strategy::Earth | Strategy::Fire | Strategy::Grass => GameKind::Efg,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Defector => "defector",
            Strategy::Cooperator => "cooperator",
            Strategy::TitForTat => "tft",
            Strategy::AntiTitForTat => "atft",
            Strategy::Earth => "earth",
            Strategy::Fire => "fire",
            Strategy::Grass => "grass",
        }
    }

    pub fn all() -> impl Iterator<Item = Strategy> {
        Strategy::PD.into_iter().chain(Strategy::EFG)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Accepts the long name (`defector`, `tft`, ...) case-insensitively or the one-letter code.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        if let Some(found) = Strategy::all().find(|st| st.name() == lower) {
            return Ok(found);
        }
        let alias = match lower.as_str() {
            "d" => Some(Strategy::Defector),
            "c" => Some(Strategy::Cooperator),
            "t" | "titfortat" | "tit-for-tat" => Some(Strategy::TitForTat),
            "a" | "antititfortat" | "anti-tit-for-tat" => Some(Strategy::AntiTitForTat),
            "e" => Some(Strategy::Earth),
            "f" => Some(Strategy::Fire),
            "g" => Some(Strategy::Grass),
            _ => None,
        };
        alias.ok_or_else(|| {
            let valid: Vec<_> = Strategy::all().map(Strategy::name).collect();
            Error::Config(format!(
                "unknown strategy '{s}'; valid labels: {}",
                valid.join(", ")
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Cooperate,
    Defect,
}

impl Action {
    pub fn opposite(self) -> Action {
        match self {
            Action::Cooperate => Action::Defect,
            Action::Defect => Action::Cooperate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub strategy: Strategy,
    pub score: i64,
    /// Iterations since (re)birth.
    pub age: u32,
    /// Last opponent action; `None` until the first game after (re)birth.
    pub memory: Option<Action>,
}

impl Cell {
    pub fn new(strategy: Strategy, score: i64) -> Self {
        Cell {
            strategy,
            score,
            age: 0,
            memory: None,
        }
    }
}

/// A fully occupied `width x height` grid of cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl Lattice {
    pub fn filled(width: usize, height: usize, cell: Cell) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Lattice {
            width,
            height,
            cells: vec![cell; width * height],
        })
    }

    /// Builds a lattice from row-major cells (row `y = 0` first).
    pub fn from_cells(width: usize, height: usize, cells: Vec<Cell>) -> Result<Self> {
        check_dims(width, height)?;
        if cells.len() != width * height {
            return Err(Error::Config(format!(
                "expected {} cells for a {width}x{height} lattice, got {}",
                width * height,
                cells.len()
            )));
        }
        Ok(Lattice {
            width,
            height,
            cells,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(Coord) -> Cell) -> Result<Self> {
        check_dims(width, height)?;
        let cells = (0..height)
            .flat_map(|y| (0..width).map(move |x| Coord::new(x, y)))
            .map(&mut f)
            .collect();
        Ok(Lattice {
            width,
            height,
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x < self.width && c.y < self.height
    }

    pub fn index(&self, c: Coord) -> usize {
        debug_assert!(self.contains(c));
        c.y * self.width + c.x
    }

    pub fn coord(&self, index: usize) -> Coord {
        Coord::new(index % self.width, index / self.width)
    }

    pub fn get(&self, c: Coord) -> Result<&Cell> {
        self.check(c)?;
        Ok(&self.cells[self.index(c)])
    }

    pub fn get_mut(&mut self, c: Coord) -> Result<&mut Cell> {
        self.check(c)?;
        let i = self.index(c);
        Ok(&mut self.cells[i])
    }

    pub fn set_strategy(&mut self, c: Coord, s: Strategy) -> Result<()> {
        self.get_mut(c)?.strategy = s;
        Ok(())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cells_mut(&mut self) -> &mut [Cell] {
        &mut self.cells
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.cells.len()).map(|i| self.coord(i))
    }

    pub fn neighbors(&self, c: Coord) -> Result<Vec<Coord>> {
        neighbors(self.width, self.height, c)
    }

    pub fn count(&self, s: Strategy) -> usize {
        self.cells.iter().filter(|c| c.strategy == s).count()
    }

    /// Occupancy tally in the order of `strategies`.
    pub fn tally(&self, strategies: &[Strategy]) -> Vec<usize> {
        strategies.iter().map(|&s| self.count(s)).collect()
    }

    /// True when all cells belong to `kind`.
    pub fn is_game(&self, kind: GameKind) -> bool {
        self.cells.iter().all(|c| c.strategy.game() == kind)
    }

    pub fn same_strategies(&self, other: &Lattice) -> bool {
        self.width == other.width
            && self.height == other.height
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.strategy == b.strategy)
    }

    fn check(&self, c: Coord) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x: c.x,
                y: c.y,
                width: self.width,
                height: self.height,
            })
        }
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Config(format!(
            "lattice dimensions must be positive, got {width}x{height}"
        )));
    }
    Ok(())
}

/// Moore neighborhood of `c`, clipped at the lattice boundary.
///
/// Offsets are visited row-major from `(-1, -1)` to `(1, 1)`, skipping the
/// center, so the order is fixed for a given position.
pub fn neighbors(width: usize, height: usize, c: Coord) -> Result<Vec<Coord>> {
    if c.x >= width || c.y >= height {
        return Err(Error::OutOfBounds {
            x: c.x,
            y: c.y,
            width,
            height,
        });
    }
    let mut out = Vec::with_capacity(8);
    for dy in -1i64..=1 {
        for dx in -1i64..=1 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let nx = c.x as i64 + dx;
            let ny = c.y as i64 + dy;
            if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
                out.push(Coord::new(nx as usize, ny as usize));
            }
        }
    }
    Ok(out)
}

/// Precomputed neighbor index lists for every cell of a fixed-size lattice.
#[derive(Debug, Clone)]
pub(crate) struct NeighborTable {
    lists: Vec<Vec<usize>>,
}

impl NeighborTable {
    pub(crate) fn new(width: usize, height: usize) -> Self {
        let lists = (0..width * height)
            .map(|i| {
                let c = Coord::new(i % width, i / width);
                neighbors(width, height, c)
                    .expect("in bounds")
                    .into_iter()
                    .map(|n| n.y * width + n.x)
                    .collect()
            })
            .collect();
        NeighborTable { lists }
    }

    pub(crate) fn of(&self, index: usize) -> &[usize] {
        &self.lists[index]
    }
}
