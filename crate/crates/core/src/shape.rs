//! Reading a barcode as one of the stability shapes.
//!
//! Shape 1 is a single solid component. Shape 2 adds `m` persistent loops
//! (stable clusters of other strategies inside the structure), Shape 3 adds
//! `m` persistent voids (short-lived invasions). Significance is decided by a
//! window on the ε axis.

use std::fmt;

use crate::error::{Error, Result};
use crate::persistence::{render_eps, Bar, Barcode};
use crate::pointcloud::Squared;

/// Which bars count as significant.
///
/// Window ends are stored squared so that the default `(√2, 2]` is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificancePolicy {
    pub window_low_sq: Squared,
    pub window_high_sq: Squared,
    /// Minimum length of the bar's overlap with the window, in ε units.
    /// `None` means the bar must cover the whole window.
    pub min_persistence: Option<f64>,
}

impl Default for SignificancePolicy {
    fn default() -> Self {
        SignificancePolicy {
            window_low_sq: Squared::from_integer(2),
            window_high_sq: Squared::from_integer(4),
            min_persistence: None,
        }
    }
}

impl SignificancePolicy {
    pub fn new(
        window_low_sq: Squared,
        window_high_sq: Squared,
        min_persistence: Option<f64>,
    ) -> Result<Self> {
        if window_low_sq >= window_high_sq {
            return Err(Error::Config(format!(
                "window low {} must be below window high {}",
                render_eps(window_low_sq),
                render_eps(window_high_sq)
            )));
        }
        if let Some(mp) = min_persistence {
            if !mp.is_finite() || mp < 0.0 {
                return Err(Error::Config(format!(
                    "min persistence must be a finite non-negative number, got {mp}"
                )));
            }
        }
        Ok(SignificancePolicy {
            window_low_sq,
            window_high_sq,
            min_persistence,
        })
    }

    fn lo(&self) -> f64 {
        crate::persistence::barcode_sqrt(self.window_low_sq)
    }

    fn hi(&self) -> f64 {
        crate::persistence::barcode_sqrt(self.window_high_sq)
    }

    /// Whether `bar` (of any dimension) is significant under this policy.
    pub fn is_significant(&self, bar: &Bar) -> bool {
        match self.min_persistence {
            None => {
                bar.birth <= self.window_low_sq
                    && bar.death.is_none_or(|d| d >= self.window_high_sq)
            }
            Some(mp) => {
                let start = bar.birth.max(self.window_low_sq);
                let end = bar
                    .death
                    .map_or(self.window_high_sq, |d| d.min(self.window_high_sq));
                if start >= end && !(bar.is_essential() && bar.birth <= self.window_high_sq) {
                    return false;
                }
                let len = (crate::persistence::barcode_sqrt(end)
                    - crate::persistence::barcode_sqrt(start))
                .max(0.0);
                len >= mp
            }
        }
    }

    pub fn describe(&self) -> String {
        let mp = match self.min_persistence {
            None => "full window".to_string(),
            Some(v) => format!("{v}"),
        };
        format!(
            "window ({:.2}, {:.2}], min persistence {mp}",
            self.lo(),
            self.hi()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Shape1,
    Shape2(usize),
    Shape3(usize),
    /// `(holes, voids)`
    Combined(usize, usize),
    Unclassified,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Shape1 => write!(f, "Shape1"),
            Classification::Shape2(m) => write!(f, "Shape2({m})"),
            Classification::Shape3(m) => write!(f, "Shape3({m})"),
            Classification::Combined(h, v) => write!(f, "Combined({h}, {v})"),
            Classification::Unclassified => write!(f, "Unclassified"),
        }
    }
}

impl Classification {
    pub fn from_betti(b0: usize, b1: usize, b2: usize) -> Self {
        match (b0, b1, b2) {
            (1, 0, 0) => Classification::Shape1,
            (1, m, 0) => Classification::Shape2(m),
            (1, 0, m) => Classification::Shape3(m),
            (1, h, v) => Classification::Combined(h, v),
            _ => Classification::Unclassified,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeReport {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub classification: Classification,
    pub policy: SignificancePolicy,
    /// The bars behind `b1` and `b2`.
    pub significant: Vec<Bar>,
    pub warnings: Vec<String>,
}

impl ShapeReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "classification: {}\nb0: {}\nb1: {}\nb2: {}\npolicy: {}\n",
            self.classification,
            self.b0,
            self.b1,
            self.b2,
            self.policy.describe()
        );
        for bar in &self.significant {
            let death = bar.death.map_or("inf".to_string(), render_eps);
            out.push_str(&format!(
                "bar: H{} [{}, {})\n",
                bar.dim,
                render_eps(bar.birth),
                death
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Significant counts `(b0, b1, b2)`.
///
/// `b0` is the number of components alive at the top of the window; `b1`
/// and `b2` count bars accepted by the policy.
pub fn significant_features(b: &Barcode, p: &SignificancePolicy) -> [usize; 3] {
    let b0 = b
        .in_dim(0)
        .filter(|bar| bar.alive_at(p.window_high_sq))
        .count();
    let count = |dim| b.in_dim(dim).filter(|bar| p.is_significant(bar)).count();
    [b0, count(1), count(2)]
}

pub fn classify(b: &Barcode, p: &SignificancePolicy) -> ShapeReport {
    let [b0, b1, b2] = significant_features(b, p);
    let classification = Classification::from_betti(b0, b1, b2);
    let significant = b
        .bars()
        .iter()
        .filter(|bar| bar.dim >= 1 && p.is_significant(bar))
        .cloned()
        .collect();
    let mut warnings = Vec::new();
    if b.is_empty() {
        warnings.push(
            "empty point cloud: the strategy never occupies a cell in the interval".to_string(),
        );
    } else if classification == Classification::Unclassified {
        warnings.push(format!(
            "{b0} components at the top of the window; shapes need exactly one"
        ));
    }
    ShapeReport {
        b0,
        b1,
        b2,
        classification,
        policy: *p,
        significant,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(n: u64) -> Squared {
        Squared::from_integer(n)
    }

    fn bar(dim: usize, birth: u64, death: Option<u64>) -> Bar {
        Bar {
            dim,
            birth: sq(birth),
            death: death.map(sq),
        }
    }

    #[test]
    fn two_holes_over_root_two_to_root_five() {
        let b = Barcode::new(vec![
            bar(0, 0, None),
            bar(1, 2, Some(5)),
            bar(1, 2, Some(5)),
        ]);
        let r = classify(&b, &SignificancePolicy::default());
        assert_eq!([r.b0, r.b1, r.b2], [1, 2, 0]);
        assert_eq!(r.classification, Classification::Shape2(2));
        assert_eq!(r.significant.len(), 2);
    }

    #[test]
    fn short_bars_are_ignored() {
        let b = Barcode::new(vec![
            bar(0, 0, None),
            bar(0, 0, Some(1)),
            bar(1, 1, Some(2)),
            bar(2, 2, Some(3)),
        ]);
        let r = classify(&b, &SignificancePolicy::default());
        assert_eq!([r.b0, r.b1, r.b2], [1, 0, 0]);
        assert_eq!(r.classification, Classification::Shape1);
    }

    #[test]
    fn empty_barcode_warns() {
        let r = classify(&Barcode::default(), &SignificancePolicy::default());
        assert_eq!([r.b0, r.b1, r.b2], [0, 0, 0]);
        assert_eq!(r.classification, Classification::Unclassified);
        assert!(r.warnings[0].contains("empty"));
    }

    #[test]
    fn two_blobs_are_unclassified() {
        let b = Barcode::new(vec![bar(0, 0, None), bar(0, 0, Some(9))]);
        assert_eq!(
            classify(&b, &SignificancePolicy::default()).classification,
            Classification::Unclassified
        );
    }

    #[test]
    fn classification_table() {
        assert_eq!(
            Classification::from_betti(1, 0, 2),
            Classification::Shape3(2)
        );
        assert_eq!(
            Classification::from_betti(1, 1, 2),
            Classification::Combined(1, 2)
        );
        assert_eq!(Classification::Combined(1, 2).to_string(), "Combined(1, 2)");
        assert_eq!(Classification::Shape2(3).to_string(), "Shape2(3)");
    }

    #[test]
    fn custom_min_persistence() {
        let p = SignificancePolicy::new(sq(2), sq(4), Some(0.1)).unwrap();
        // [1, √3) overlaps (√2, 2] by about 0.318.
        assert!(p.is_significant(&bar(1, 1, Some(3))));
        assert!(!p.is_significant(&bar(1, 1, Some(2))));
        assert!(!SignificancePolicy::default().is_significant(&bar(1, 1, Some(3))));
        assert!(SignificancePolicy::new(sq(4), sq(4), None).is_err());
        assert!(SignificancePolicy::new(sq(1), sq(4), Some(-1.0)).is_err());
    }
}
