//! Recorded runs and their text format.
//!
//! A frame record looks like
//!
//! ```text
//! frame width=3 height=2 game=pd t=4
//! DDT
//! DTT
//! state
//! 2:0:- 2:1:D 4:3:C
//! 0:0:- 1:5:C 3:2:D
//! end
//! ```
//!
//! Strategy rows are printed top row (`y = height - 1`) first so the text reads
//! like the lattice picture. The `state` block holds `score:age:memory` per cell
//! in the same layout (`memory` is `C`, `D` or `-`); it may be omitted, in which
//! case every cell parses with score 0, age 0 and no memory. A trajectory file is
//! an optional `# trajectory ...` metadata line followed by concatenated frames.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{Action, Cell, GameKind, Lattice, Strategy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub t: u64,
    pub lattice: Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryMeta {
    pub game: GameKind,
    pub config_digest: Option<String>,
    pub seed: Option<u64>,
}

impl TrajectoryMeta {
    pub fn new(game: GameKind) -> Self {
        TrajectoryMeta {
            game,
            config_digest: None,
            seed: None,
        }
    }
}

/// Ordered snapshots of one run. Indices strictly increase and all frames share
/// the same dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub meta: TrajectoryMeta,
    frames: Vec<Frame>,
}

impl Trajectory {
    pub fn new(meta: TrajectoryMeta) -> Self {
        Trajectory {
            meta,
            frames: Vec::new(),
        }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn first_t(&self) -> Option<u64> {
        self.frames.first().map(|f| f.t)
    }

    pub fn last_t(&self) -> Option<u64> {
        self.frames.last().map(|f| f.t)
    }

    pub fn last(&self) -> Option<&Frame> {
        self.frames.last()
    }

    pub fn frame_at(&self, t: u64) -> Option<&Frame> {
        self.frames
            .binary_search_by_key(&t, |f| f.t)
            .ok()
            .map(|i| &self.frames[i])
    }

    /// Appends a copy of `lattice` at iteration `t`.
    pub fn record_frame(&mut self, lattice: &Lattice, t: u64) -> Result<()> {
        self.push(Frame {
            t,
            lattice: lattice.clone(),
        })
    }

    pub fn push(&mut self, frame: Frame) -> Result<()> {
        if let Some(last) = self.frames.last() {
            if frame.t <= last.t {
                return Err(Error::NonMonotonicFrame {
                    last: last.t,
                    next: frame.t,
                });
            }
            let (w, h) = (last.lattice.width(), last.lattice.height());
            if frame.lattice.width() != w || frame.lattice.height() != h {
                return Err(Error::FrameDimensions {
                    want_w: w,
                    want_h: h,
                    got_w: frame.lattice.width(),
                    got_h: frame.lattice.height(),
                });
            }
        }
        self.frames.push(frame);
        Ok(())
    }

    /// Occupancy counts per frame, in the order of `strategies`.
    pub fn tallies(&self, strategies: &[Strategy]) -> Vec<(u64, Vec<usize>)> {
        self.frames
            .iter()
            .map(|f| (f.t, f.lattice.tally(strategies)))
            .collect()
    }

    /// Occupancy time series as CSV: `t,<strategy>,...`.
    pub fn tally_csv(&self) -> String {
        let strategies = self.meta.game.strategies();
        let mut out = String::from("t");
        for s in strategies {
            out.push(',');
            out.push_str(s.name());
        }
        out.push('\n');
        for (t, counts) in self.tallies(strategies) {
            let _ = write!(out, "{t}");
            for c in counts {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "# trajectory game={}", self.meta.game);
        if let Some(seed) = self.meta.seed {
            let _ = write!(out, " seed={seed}");
        }
        if let Some(d) = &self.meta.config_digest {
            let _ = write!(out, " config={d}");
        }
        out.push('\n');
        for f in &self.frames {
            write_frame(&mut out, &f.lattice, self.meta.game, f.t);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trajectory> {
        let mut lines = Lines::new(text);
        let mut meta: Option<TrajectoryMeta> = None;
        let mut frames = Vec::new();
        while let Some((no, line)) = lines.peek() {
            if line.trim().is_empty() {
                lines.next();
                continue;
            }
            if let Some(rest) = line.strip_prefix("# trajectory") {
                meta = Some(parse_meta(no, rest)?);
                lines.next();
                continue;
            }
            if line.starts_with('#') {
                lines.next();
                continue;
            }
            let (game, frame) = parse_frame_lines(&mut lines)?;
            match &meta {
                Some(m) if m.game != game => {
                    return Err(Error::parse(
                        no,
                        1,
                        format!(
                            "frame game '{game}' differs from trajectory game '{}'",
                            m.game
                        ),
                    ))
                }
                Some(_) => {}
                None => meta = Some(TrajectoryMeta::new(game)),
            }
            frames.push((no, frame));
        }
        let meta = meta.ok_or_else(|| Error::parse(1, 1, "no frames in trajectory"))?;
        let mut traj = Trajectory::new(meta);
        for (no, frame) in frames {
            traj.push(frame)
                .map_err(|e| Error::parse(no, 1, e.to_string()))?;
        }
        Ok(traj)
    }
}

/// Serializes one lattice as a frame record.
pub fn serialize_frame(lattice: &Lattice, game: GameKind, t: u64) -> String {
    let mut out = String::new();
    write_frame(&mut out, lattice, game, t);
    out
}

/// Parses a single frame record, returning the game kind, iteration and lattice.
pub fn parse_frame(text: &str) -> Result<(GameKind, u64, Lattice)> {
    let mut lines = Lines::new(text);
    while let Some((_, line)) = lines.peek() {
        if line.trim().is_empty() || line.starts_with('#') {
            lines.next();
        } else {
            break;
        }
    }
    let (game, frame) = parse_frame_lines(&mut lines)?;
    if let Some((no, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(
            no,
            1,
            format!("trailing content after frame: '{line}'"),
        ));
    }
    Ok((game, frame.t, frame.lattice))
}

fn write_frame(out: &mut String, lattice: &Lattice, game: GameKind, t: u64) {
    let (w, h) = (lattice.width(), lattice.height());
    let _ = writeln!(out, "frame width={w} height={h} game={game} t={t}");
    let cells = lattice.cells();
    for y in (0..h).rev() {
        out.extend(cells[y * w..(y + 1) * w].iter().map(|c| c.strategy.code()));
        out.push('\n');
    }
    out.push_str("state\n");
    for y in (0..h).rev() {
        let row = &cells[y * w..(y + 1) * w];
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let mem = match c.memory {
                None => '-',
                Some(Action::Cooperate) => 'C',
                Some(Action::Defect) => 'D',
            };
            let _ = write!(out, "{}:{}:{}", c.score, c.age, mem);
        }
        out.push('\n');
    }
    out.push_str("end\n");
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate().peekable(),
        }
    }

    fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.inner.peek().map(|&(i, l)| (i + 1, l))
    }

    fn expect(&mut self, what: &str, after: usize) -> Result<(usize, &'a str)> {
        self.next().ok_or_else(|| {
            Error::parse(
                after + 1,
                1,
                format!("unexpected end of input, expected {what}"),
            )
        })
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        self.inner.next().map(|(i, l)| (i + 1, l))
    }
}

fn parse_meta(no: usize, rest: &str) -> Result<TrajectoryMeta> {
    let mut game = None;
    let mut meta_seed = None;
    let mut digest = None;
    for (key, value, col) in key_values(rest, no, "# trajectory".len())? {
        match key {
            "game" => {
                game = Some(
                    value
                        .parse::<GameKind>()
                        .map_err(|e| Error::parse(no, col, e.to_string()))?,
                )
            }
            "seed" => {
                meta_seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| Error::parse(no, col, format!("invalid seed '{value}'")))?,
                )
            }
            "config" => digest = Some(value.to_string()),
            _ => {
                return Err(Error::parse(
                    no,
                    col,
                    format!("unknown metadata key '{key}'"),
                ))
            }
        }
    }
    let game = game.ok_or_else(|| Error::parse(no, 1, "trajectory metadata without game"))?;
    Ok(TrajectoryMeta {
        game,
        config_digest: digest,
        seed: meta_seed,
    })
}

fn key_values(text: &str, no: usize, offset: usize) -> Result<Vec<(&str, &str, usize)>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for token in text.split(' ') {
        let col = offset + pos + 1;
        pos += token.len() + 1;
        if token.is_empty() {
            continue;
        }
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| Error::parse(no, col, format!("expected key=value, found '{token}'")))?;
        out.push((k, v, col));
    }
    Ok(out)
}

fn parse_frame_lines(lines: &mut Lines<'_>) -> Result<(GameKind, Frame)> {
    let (no, header) = lines.expect("frame header", 0)?;
    let rest = header
        .strip_prefix("frame")
        .ok_or_else(|| Error::parse(no, 1, format!("expected 'frame' header, found '{header}'")))?;
    let (mut width, mut height, mut game, mut t) = (None, None, None, None);
    for (key, value, col) in key_values(rest, no, "frame".len())? {
        let num = || {
            value
                .parse::<u64>()
                .map_err(|_| Error::parse(no, col, format!("invalid number '{value}' for {key}")))
        };
        match key {
            "width" => width = Some(num()? as usize),
            "height" => height = Some(num()? as usize),
            "t" => t = Some(num()?),
            "game" => {
                game = Some(
                    value
                        .parse::<GameKind>()
                        .map_err(|e| Error::parse(no, col, e.to_string()))?,
                )
            }
            _ => return Err(Error::parse(no, col, format!("unknown frame key '{key}'"))),
        }
    }
    let missing = |k: &str| Error::parse(no, 1, format!("frame header missing '{k}'"));
    let width = width.ok_or_else(|| missing("width"))?;
    let height = height.ok_or_else(|| missing("height"))?;
    let game = game.ok_or_else(|| missing("game"))?;
    let t = t.ok_or_else(|| missing("t"))?;
    if width == 0 || height == 0 {
        return Err(Error::parse(no, 1, "frame dimensions must be positive"));
    }

    let mut cells = vec![Cell::new(Strategy::Defector, 0); width * height];
    let mut last = no;
    for y in (0..height).rev() {
        let (row_no, row) = lines.expect("strategy row", last)?;
        last = row_no;
        let chars: Vec<char> = row.trim_end().chars().collect();
        if chars.len() != width {
            return Err(Error::parse(
                row_no,
                chars.len().min(width) + 1,
                format!("expected {width} strategy codes, found {}", chars.len()),
            ));
        }
        for (x, ch) in chars.into_iter().enumerate() {
            let s = Strategy::from_code(ch).ok_or_else(|| {
                Error::parse(row_no, x + 1, format!("unknown strategy code '{ch}'"))
            })?;
            if s.game() != game {
                return Err(Error::parse(
                    row_no,
                    x + 1,
                    format!("strategy '{ch}' does not belong to game {game}"),
                ));
            }
            cells[y * width + x].strategy = s;
        }
    }

    let (end_no, next) = lines.expect("'state' or 'end'", last)?;
    match next.trim() {
        "end" => {}
        "state" => {
            let mut last = end_no;
            for y in (0..height).rev() {
                let (row_no, row) = lines.expect("state row", last)?;
                last = row_no;
                parse_state_row(row_no, row, &mut cells[y * width..(y + 1) * width])?;
            }
            let (close_no, close) = lines.expect("'end'", last)?;
            if close.trim() != "end" {
                return Err(Error::parse(
                    close_no,
                    1,
                    format!("expected 'end', found '{close}'"),
                ));
            }
        }
        other => {
            return Err(Error::parse(
                end_no,
                1,
                format!("expected 'state' or 'end', found '{other}'"),
            ))
        }
    }
    let lattice = Lattice::from_cells(width, height, cells)?;
    Ok((game, Frame { t, lattice }))
}

fn parse_state_row(no: usize, row: &str, cells: &mut [Cell]) -> Result<()> {
    let mut col = 1;
    let mut fields = row.split(' ').filter(|s| !s.is_empty());
    for cell in cells.iter_mut() {
        let token = fields
            .next()
            .ok_or_else(|| Error::parse(no, col, "state row has too few cells"))?;
        let mut parts = token.split(':');
        let bad = |what: &str| Error::parse(no, col, format!("invalid {what} in '{token}'"));
        let score = parts
            .next()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or_else(|| bad("score"))?;
        let age = parts
            .next()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| bad("age"))?;
        let memory = match parts.next() {
            Some("-") => None,
            Some("C") => Some(Action::Cooperate),
            Some("D") => Some(Action::Defect),
            _ => return Err(bad("memory")),
        };
        if parts.next().is_some() {
            return Err(bad("cell state"));
        }
        cell.score = score;
        cell.age = age;
        cell.memory = memory;
        col += token.len() + 1;
    }
    if fields.next().is_some() {
        return Err(Error::parse(no, col, "state row has too many cells"));
    }
    Ok(())
}
