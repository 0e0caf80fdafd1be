use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pointcloud::Squared;

/// One persistence interval `[birth, death)` in homology dimension `dim`.
///
/// Filtration values are exact squared radii; `death == None` marks an
/// essential class that is still alive at the filtration threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bar {
    pub dim: usize,
    pub birth: Squared,
    pub death: Option<Squared>,
}

impl Bar {
    pub fn is_essential(&self) -> bool {
        self.death.is_none()
    }

    /// Zero-length pair: born and killed at the same filtration value.
    pub fn is_trivial(&self) -> bool {
        self.death == Some(self.birth)
    }

    pub fn birth_eps(&self) -> f64 {
        sqrt(self.birth)
    }

    pub fn death_eps(&self) -> f64 {
        self.death.map_or(f64::INFINITY, sqrt)
    }

    /// Alive at `eps_sq` (squared scale): `birth <= eps < death`.
    pub fn alive_at(&self, eps_sq: Squared) -> bool {
        self.birth <= eps_sq && self.death.is_none_or(|d| eps_sq < d)
    }
}

pub(crate) fn sqrt(v: Squared) -> f64 {
    (*v.numer() as f64 / *v.denom() as f64).sqrt()
}

/// Renders a squared value as its square root with two decimals (`2 -> "1.41"`).
pub fn render_eps(v: Squared) -> String {
    format!("{:.2}", sqrt(v))
}

fn bar_order(a: &Bar, b: &Bar) -> Ordering {
    a.dim
        .cmp(&b.dim)
        .then(a.birth.cmp(&b.birth))
        .then(match (a.death, b.death) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    /// Sorts bars by (dimension, birth, death).
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(bar_order);
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    /// Bars with positive length.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(|b| !b.is_trivial())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("dimension,birth_squared,death_squared,birth,death,essential\n");
        for b in &self.bars {
            let (death_sq, death) = match b.death {
                Some(d) => (d.to_string(), render_eps(d)),
                None => ("inf".to_string(), "inf".to_string()),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                b.dim,
                b.birth,
                death_sq,
                render_eps(b.birth),
                death,
                b.is_essential()
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Barcode> {
        let mut bars = Vec::new();
        let mut saw_header = false;
        for (i, line) in text.lines().enumerate() {
            let no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if !line.starts_with("dimension,") {
                    return Err(Error::parse(no, 1, "missing barcode CSV header"));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::parse(
                    no,
                    1,
                    format!("expected 6 fields, found {}", fields.len()),
                ));
            }
            let col = |k: usize| fields[..k].iter().map(|f| f.len() + 1).sum::<usize>() + 1;
            let dim = fields[0]
                .parse::<usize>()
                .map_err(|_| Error::parse(no, 1, format!("invalid dimension '{}'", fields[0])))?;
            let birth = parse_squared(fields[1]).ok_or_else(|| {
                Error::parse(no, col(1), format!("invalid birth_squared '{}'", fields[1]))
            })?;
            let death = match fields[2] {
                "inf" => None,
                other => Some(parse_squared(other).ok_or_else(|| {
                    Error::parse(no, col(2), format!("invalid death_squared '{other}'"))
                })?),
            };
            let essential = match fields[5] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::parse(
                        no,
                        col(5),
                        format!("invalid essential flag '{other}'"),
                    ))
                }
            };
            if essential != death.is_none() {
                return Err(Error::parse(
                    no,
                    col(5),
                    "essential flag disagrees with death value",
                ));
            }
            if let Some(d) = death {
                if d < birth {
                    return Err(Error::parse(no, col(2), "death precedes birth"));
                }
            }
            bars.push(Bar { dim, birth, death });
        }
        if !saw_header {
            return Err(Error::parse(1, 1, "missing barcode CSV header"));
        }
        Ok(Barcode::new(bars))
    }

    /// Horizontal bar plot, one row per non-trivial bar, grouped by dimension.
    pub fn to_svg(&self, title: &str) -> String {
        const WIDTH: f64 = 800.0;
        const LEFT: f64 = 60.0;
        const RIGHT: f64 = 30.0;
        const TOP: f64 = 40.0;
        const ROW: f64 = 6.0;
        const GAP: f64 = 14.0;
        const COLORS: [&str; 3] = ["#555555", "#1f77b4", "#d62728"];

        let shown: Vec<&Bar> = self.nontrivial().collect();
        let finite_max = shown
            .iter()
            .flat_map(|b| [Some(b.birth_eps()), b.death.map(sqrt)])
            .flatten()
            .fold(0.0f64, f64::max);
        let x_max = (finite_max * 1.1).max(1.0);
        let plot_w = WIDTH - LEFT - RIGHT;
        let x = |eps: f64| LEFT + plot_w * eps.min(x_max) / x_max;

        let mut body = String::new();
        let mut y = TOP;
        for (dim, color) in COLORS.iter().enumerate() {
            let rows: Vec<&&Bar> = shown.iter().filter(|b| b.dim == dim).collect();
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(
                body,
                r#"<text x="8" y="{:.1}" font-size="12" fill="{}">H{dim}</text>"#,
                y + 10.0,
                color
            );
            for b in rows {
                let x0 = x(b.birth_eps());
                let x1 = if b.is_essential() {
                    WIDTH - RIGHT
                } else {
                    x(b.death_eps())
                };
                let _ = writeln!(
                    body,
                    r#"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="{}" stroke-width="3"/>"#,
                    color
                );
                if b.is_essential() {
                    let _ = writeln!(
                        body,
                        r#"<polygon points="{x1:.1},{:.1} {:.1},{y:.1} {x1:.1},{:.1}" fill="{}"/>"#,
                        y - 3.0,
                        x1 + 6.0,
                        y + 3.0,
                        COLORS[dim]
                    );
                }
                y += ROW;
            }
            y += GAP;
        }
        let axis_y = y + 4.0;
        let height = axis_y + 40.0;
        let mut axis = format!(
            r#"<line x1="{LEFT}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
            WIDTH - RIGHT
        );
        axis.push('\n');
        let mut tick = 0.0;
        while tick <= x_max + 1e-9 {
            let tx = x(tick);
            let _ = writeln!(
                axis,
                r#"<line x1="{tx:.1}" y1="{axis_y:.1}" x2="{tx:.1}" y2="{:.1}" stroke="black"/><text x="{tx:.1}" y="{:.1}" font-size="11" text-anchor="middle">{tick:.1}</text>"#,
                axis_y + 5.0,
                axis_y + 18.0
            );
            tick += 0.5;
        }
        let _ = writeln!(
            axis,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">ε</text>"#,
            LEFT + plot_w / 2.0,
            axis_y + 34.0
        );
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH} {height:.0}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
             <text x=\"{LEFT}\" y=\"22\" font-size=\"14\">{}</text>\n{body}{axis}</svg>\n",
            escape(title)
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Parses `a` or `a/b` into an exact rational.
pub fn parse_squared(s: &str) -> Option<Squared> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse::<u64>().ok()?;
            let d = d.trim().parse::<u64>().ok()?;
            (d != 0).then(|| Squared::new(n, d))
        }
        None => s.trim().parse::<u64>().ok().map(Squared::from_integer),
    }
}

/// Parses a non-negative decimal scale such as `2`, `1.5` or `2.45` exactly and
/// returns its square.
pub fn squared_from_decimal(s: &str) -> Option<Squared> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 9 {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let den = 10u64.pow(frac.len() as u32);
    let num = format!("{int}{frac}").parse::<u64>().ok()?;
    let v = Squared::new(num, den);
    v.numer().checked_mul(*v.numer())?;
    v.denom().checked_mul(*v.denom())?;
    Some(v * v)
}

/// Betti numbers `(b0, b1, b2)` at squared scale `eps_sq`: bars with
/// `birth <= eps < death`.
pub fn betti_at(b: &Barcode, eps_sq: Squared) -> [usize; 3] {
    let mut out = [0; 3];
    for bar in b
        .bars()
        .iter()
        .filter(|bar| bar.dim <= 2 && bar.alive_at(eps_sq))
    {
        out[bar.dim] += 1;
    }
    out
}
