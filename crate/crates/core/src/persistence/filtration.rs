use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::persistence::{Threshold, MAX_SIMPLEX_DIM};
use crate::pointcloud::{Squared, SquaredDistanceMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Simplex {
    /// Strictly increasing point indices.
    pub vertices: Vec<usize>,
    /// Largest pairwise squared distance among the vertices (0 for a vertex).
    pub squared_diameter: Squared,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-one faces, each given by its vertex list.
    pub fn facets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = if self.vertices.len() > 1 {
            self.vertices.len()
        } else {
            0
        };
        (0..n).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

pub(crate) fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.squared_diameter
        .cmp(&b.squared_diameter)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices of a Vietoris-Rips complex sorted in filtration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    threshold: Squared,
    max_dim: usize,
}

impl Filtration {
    /// Wraps an arbitrary simplex list without checking it; [`Filtration::validate`]
    /// and [`crate::persistence::reduce`] report violations.
    pub fn from_simplices(simplices: Vec<Simplex>, threshold: Squared, max_dim: usize) -> Self {
        Filtration {
            simplices,
            threshold,
            max_dim,
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn threshold(&self) -> Squared {
        self.threshold
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }

    /// Number of `k`-simplices with squared diameter at most `eps_sq`, for `k = 0..=max_dim`.
    pub fn counts_at(&self, eps_sq: Squared) -> Vec<usize> {
        let mut out = vec![0; self.max_dim + 1];
        for s in self
            .simplices
            .iter()
            .filter(|s| s.squared_diameter <= eps_sq)
        {
            out[s.dim()] += 1;
        }
        out
    }

    /// Checks ordering, vertex lists and that every face precedes its cofaces.
    pub fn validate(&self) -> Result<HashMap<&[usize], usize>> {
        let mut index: HashMap<&[usize], usize> = HashMap::with_capacity(self.simplices.len());
        for (i, s) in self.simplices.iter().enumerate() {
            if s.vertices.is_empty() || s.dim() > MAX_SIMPLEX_DIM {
                return Err(Error::Invariant(format!(
                    "simplex {i} has {} vertices",
                    s.vertices.len()
                )));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!(
                    "simplex {i} vertices not strictly increasing"
                )));
            }
            if i > 0 && filtration_order(&self.simplices[i - 1], s) != Ordering::Less {
                return Err(Error::Invariant(format!(
                    "simplex {i} out of filtration order"
                )));
            }
            for face in s.facets() {
                match index.get(face.as_slice()) {
                    Some(&j) if self.simplices[j].squared_diameter <= s.squared_diameter => {}
                    Some(_) => {
                        return Err(Error::Invariant(format!(
                            "face of simplex {i} has larger diameter"
                        )))
                    }
                    None => {
                        return Err(Error::Invariant(format!(
                            "face {face:?} of simplex {i} missing or later in the order"
                        )))
                    }
                }
            }
            index.insert(&s.vertices, i);
        }
        Ok(index)
    }
}

/// Enumerates every simplex of dimension at most `max_dim` whose squared
/// diameter does not exceed `threshold` (clique expansion of the threshold graph).
pub fn build_filtration(
    m: &SquaredDistanceMatrix,
    max_dim: usize,
    threshold: Threshold,
) -> Result<Filtration> {
    if max_dim > MAX_SIMPLEX_DIM {
        return Err(Error::UnsupportedDimension(max_dim));
    }
    let n = m.len();
    let thr = threshold.raw(m);
    let threshold_value = Squared::new(thr, m.denom());
    let higher: Vec<Vec<usize>> = (0..n)
        .map(|i| (i + 1..n).filter(|&j| m.raw(i, j) <= thr).collect())
        .collect();

    let mut raw: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut stack: Vec<(Vec<usize>, u64)> = (0..n).rev().map(|i| (vec![i], 0)).collect();
    while let Some((verts, diam)) = stack.pop() {
        if verts.len() <= max_dim {
            let last = *verts.last().expect("nonempty");
            for &w in higher[last].iter().rev() {
                if verts.iter().all(|&v| m.raw(v, w) <= thr) {
                    let d = verts
                        .iter()
                        .map(|&v| m.raw(v, w))
                        .max()
                        .unwrap_or(0)
                        .max(diam);
                    let mut next = verts.clone();
                    next.push(w);
                    stack.push((next, d));
                }
            }
        }
        raw.push((diam, verts));
    }
    raw.sort_unstable_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.len().cmp(&b.1.len()))
            .then_with(|| a.1.cmp(&b.1))
    });
    let simplices = raw
        .into_iter()
        .map(|(d, vertices)| Simplex {
            vertices,
            squared_diameter: Squared::new(d, m.denom()),
        })
        .collect();
    Ok(Filtration {
        simplices,
        threshold: threshold_value,
        max_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{squared_distance_matrix, PointCloud};

    fn matrix(points: &[[i64; 3]]) -> SquaredDistanceMatrix {
        squared_distance_matrix(&PointCloud::new(points.to_vec()))
    }

    fn sq(n: u64) -> Squared {
        Squared::from_integer(n)
    }

    #[test]
    fn equilateral_triangle_clique() {
        // Pairwise squared distance 2 in the plane x + y + z = 1.
        let m = matrix(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let f = build_filtration(&m, 2, Threshold::Squared(sq(2))).unwrap();
        assert_eq!((f.count_dim(0), f.count_dim(1), f.count_dim(2)), (3, 3, 1));
        f.validate().unwrap();
    }

    #[test]
    fn unit_square_without_diagonals() {
        let m = matrix(&[[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]);
        let f = build_filtration(&m, 2, Threshold::Squared(sq(1))).unwrap();
        assert_eq!((f.count_dim(0), f.count_dim(1), f.count_dim(2)), (4, 4, 0));
        let full = build_filtration(&m, 3, Threshold::Squared(sq(2))).unwrap();
        assert_eq!(full.counts_at(sq(2)), vec![4, 6, 4, 1]);
        assert_eq!(full.counts_at(sq(1)), vec![4, 4, 0, 0]);
    }

    #[test]
    fn empty_cloud_and_dimension_guard() {
        let m = matrix(&[]);
        assert!(build_filtration(&m, 3, Threshold::Squared(sq(4)))
            .unwrap()
            .is_empty());
        assert!(matches!(
            build_filtration(&m, 4, Threshold::Squared(sq(4))),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn order_breaks_ties_by_dimension_then_vertices() {
        let m = matrix(&[[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]);
        let f = build_filtration(&m, 2, Threshold::Squared(sq(2))).unwrap();
        let at2: Vec<&Simplex> = f
            .simplices()
            .iter()
            .filter(|s| s.squared_diameter == sq(2))
            .collect();
        assert_eq!(at2[0].vertices, vec![0, 2]);
        assert_eq!(at2[1].vertices, vec![1, 3]);
        assert!(at2[2..].iter().all(|s| s.dim() == 2));
    }

    #[test]
    fn validate_catches_missing_face() {
        let f = Filtration::from_simplices(
            vec![
                Simplex {
                    vertices: vec![0],
                    squared_diameter: sq(0),
                },
                Simplex {
                    vertices: vec![0, 1],
                    squared_diameter: sq(1),
                },
            ],
            sq(1),
            1,
        );
        assert!(matches!(f.validate(), Err(Error::Invariant(_))));
    }
}
