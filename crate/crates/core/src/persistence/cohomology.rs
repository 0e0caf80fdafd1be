//! Implicit coboundary reduction for Vietoris-Rips complexes.
//!
//! For homology dimension `d >= 1` the `d`-simplices are enumerated and
//! processed in reverse filtration order. Each column is the coboundary of a
//! simplex, generated on the fly from the neighbor lists; its pivot is the
//! coface that comes first in the filtration. A column whose first coface is
//! not yet claimed is finished without ever being materialized, which is the
//! common case. Simplices that were pivots in dimension `d - 1` (or merge
//! edges, for `d = 1`) reduce to zero and are skipped.
//!
//! The pairs coincide with those of the homology reduction of the explicit
//! boundary matrix under the same total order.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::persistence::barcode::{Bar, Barcode};
use crate::persistence::reduce::symmetric_difference;
use crate::persistence::union_find::UnionFind;
use crate::persistence::Threshold;
use crate::pointcloud::{Squared, SquaredDistanceMatrix};

/// A simplex with `K` vertices, ordered by (squared diameter, vertices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key<const K: usize> {
    diam: u64,
    v: [u32; K],
}

struct Complex<'a> {
    m: &'a SquaredDistanceMatrix,
    thr: u64,
    /// All neighbors within the threshold, ascending.
    nbrs: Vec<Vec<u32>>,
}

impl<'a> Complex<'a> {
    fn new(m: &'a SquaredDistanceMatrix, thr: u64) -> Self {
        let n = m.len();
        let nbrs = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && m.raw(i, j) <= thr)
                    .map(|j| j as u32)
                    .collect()
            })
            .collect();
        Complex { m, thr, nbrs }
    }

    #[inline]
    fn dist(&self, a: u32, b: u32) -> u64 {
        self.m.raw(a as usize, b as usize)
    }

    fn edges(&self) -> Vec<Key<2>> {
        let mut out = Vec::new();
        for (i, list) in self.nbrs.iter().enumerate() {
            let i = i as u32;
            for &j in list.iter().filter(|&&j| j > i) {
                out.push(Key {
                    diam: self.dist(i, j),
                    v: [i, j],
                });
            }
        }
        out.sort_unstable();
        out
    }

    fn triangles(&self) -> Vec<Key<3>> {
        let mut out = Vec::new();
        for (i, list) in self.nbrs.iter().enumerate() {
            let i = i as u32;
            let higher = &list[list.partition_point(|&x| x <= i)..];
            for (a, &j) in higher.iter().enumerate() {
                let dij = self.dist(i, j);
                for &k in &higher[a + 1..] {
                    let djk = self.dist(j, k);
                    if djk <= self.thr {
                        out.push(Key {
                            diam: dij.max(self.dist(i, k)).max(djk),
                            v: [i, j, k],
                        });
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Calls `f` for every coface of `s` within the threshold.
    #[inline]
    fn for_each_coface<const K: usize, const K1: usize>(
        &self,
        s: &Key<K>,
        mut f: impl FnMut(Key<K1>),
    ) {
        debug_assert_eq!(K + 1, K1);
        'candidates: for &w in &self.nbrs[s.v[0] as usize] {
            let mut diam = s.diam.max(self.dist(w, s.v[0]));
            for &u in &s.v[1..] {
                if u == w {
                    continue 'candidates;
                }
                let d = self.dist(w, u);
                if d > self.thr {
                    continue 'candidates;
                }
                diam = diam.max(d);
            }
            let pos = s.v.partition_point(|&u| u < w);
            let v = std::array::from_fn(|k| match k.cmp(&pos) {
                std::cmp::Ordering::Less => s.v[k],
                std::cmp::Ordering::Equal => w,
                std::cmp::Ordering::Greater => s.v[k - 1],
            });
            f(Key { diam, v });
        }
    }

    fn coboundary<const K: usize, const K1: usize>(&self, s: &Key<K>) -> Vec<Key<K1>> {
        let mut out = Vec::new();
        self.for_each_coface(s, |c| out.push(c));
        out.sort_unstable();
        out
    }

    /// Reduces the coboundary columns of `columns` (given in reverse filtration
    /// order). Returns the claimed pivots; pushes `(birth, death)` raw pairs.
    fn reduce_columns<const K: usize, const K1: usize>(
        &self,
        columns: impl Iterator<Item = Key<K>>,
        pairs: &mut Vec<(u64, Option<u64>)>,
    ) -> HashMap<Key<K1>, usize> {
        let mut pivots: HashMap<Key<K1>, usize> = HashMap::new();
        let mut keys: Vec<Key<K>> = Vec::new();
        let mut cache: Vec<Option<Vec<Key<K1>>>> = Vec::new();
        for sigma in columns {
            let idx = keys.len();
            keys.push(sigma);
            cache.push(None);

            let mut first: Option<Key<K1>> = None;
            self.for_each_coface(&sigma, |c| {
                if first.is_none_or(|f| c < f) {
                    first = Some(c);
                }
            });
            let Some(first) = first else {
                pairs.push((sigma.diam, None));
                continue;
            };
            if let std::collections::hash_map::Entry::Vacant(e) = pivots.entry(first) {
                e.insert(idx);
                pairs.push((sigma.diam, Some(first.diam)));
                continue;
            }

            let mut col: Vec<Key<K1>> = self.coboundary(&sigma);
            loop {
                let Some(&pivot) = col.first() else {
                    pairs.push((sigma.diam, None));
                    break;
                };
                match pivots.get(&pivot) {
                    None => {
                        pivots.insert(pivot, idx);
                        pairs.push((sigma.diam, Some(pivot.diam)));
                        cache[idx] = Some(col);
                        break;
                    }
                    Some(&k) => {
                        if cache[k].is_none() {
                            cache[k] = Some(self.coboundary(&keys[k]));
                        }
                        col = symmetric_difference(&col, cache[k].as_deref().expect("cached"));
                    }
                }
            }
        }
        pivots
    }
}

/// Barcode of the Vietoris-Rips filtration of `m` in homology dimensions
/// `0..=max_hom_dim` (at most 2), truncated at `threshold`.
pub fn rips_barcode(
    m: &SquaredDistanceMatrix,
    max_hom_dim: usize,
    threshold: Threshold,
) -> Result<Barcode> {
    if max_hom_dim > 2 {
        return Err(Error::UnsupportedDimension(max_hom_dim + 1));
    }
    let n = m.len();
    if n == 0 {
        return Ok(Barcode::default());
    }
    if n > u32::MAX as usize {
        return Err(Error::Config("too many points".into()));
    }
    let thr = threshold.raw(m);
    let cx = Complex::new(m, thr);
    let denom = m.denom();
    let value = |raw: u64| Squared::new(raw, denom);
    let mut bars = Vec::new();

    let edges = cx.edges();
    let mut uf = UnionFind::new(n);
    let mut merges = vec![false; edges.len()];
    for (e, merge) in edges.iter().zip(merges.iter_mut()) {
        if uf.union(e.v[0] as usize, e.v[1] as usize) {
            *merge = true;
            bars.push(Bar {
                dim: 0,
                birth: value(0),
                death: Some(value(e.diam)),
            });
        }
    }
    bars.extend((0..uf.sets()).map(|_| Bar {
        dim: 0,
        birth: value(0),
        death: None,
    }));
    if max_hom_dim == 0 {
        return Ok(Barcode::new(bars));
    }

    let mut raw_pairs = Vec::new();
    let columns = edges
        .iter()
        .zip(&merges)
        .rev()
        .filter(|(_, &merge)| !merge)
        .map(|(e, _)| *e);
    let edge_pivots: HashMap<Key<3>, usize> = cx.reduce_columns(columns, &mut raw_pairs);
    bars.extend(raw_pairs.drain(..).map(|(b, d)| Bar {
        dim: 1,
        birth: value(b),
        death: d.map(value),
    }));
    drop(edges);
    drop(merges);

    if max_hom_dim >= 2 {
        let triangles = cx.triangles();
        let columns = triangles
            .iter()
            .rev()
            .filter(|t| !edge_pivots.contains_key(t))
            .copied();
        cx.reduce_columns::<3, 4>(columns, &mut raw_pairs);
        bars.extend(raw_pairs.drain(..).map(|(b, d)| Bar {
            dim: 2,
            birth: value(b),
            death: d.map(value),
        }));
    }
    Ok(Barcode::new(bars))
}
