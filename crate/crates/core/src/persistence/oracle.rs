//! Betti numbers of a single Rips complex by brute force: enumerate every
//! clique, write down the boundary matrices and take GF(2) ranks with bitset
//! Gaussian elimination. No filtration order is involved, so this shares no
//! logic with the persistence routes it checks.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pointcloud::{Squared, SquaredDistanceMatrix};

/// Inputs above this size are rejected; the enumeration is exponential.
pub const ORACLE_MAX_POINTS: usize = 64;

fn guard(m: &SquaredDistanceMatrix) -> Result<()> {
    if m.len() > ORACLE_MAX_POINTS {
        return Err(Error::OracleTooLarge {
            points: m.len(),
            limit: ORACLE_MAX_POINTS,
        });
    }
    Ok(())
}

/// `out[k]` lists the `k`-simplices (sorted vertex lists) for `k <= top`.
fn cliques(m: &SquaredDistanceMatrix, eps_sq: Squared, top: usize) -> Vec<Vec<Vec<usize>>> {
    let n = m.len();
    let adj = |i: usize, j: usize| m.get(i, j) <= eps_sq;
    let mut out: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|i| vec![i]).collect()];
    for k in 1..=top {
        let mut next = Vec::new();
        for s in &out[k - 1] {
            let last = *s.last().expect("nonempty");
            for w in last + 1..n {
                if s.iter().all(|&v| adj(v, w)) {
                    let mut t = s.clone();
                    t.push(w);
                    next.push(t);
                }
            }
        }
        out.push(next);
    }
    out
}

/// Rank over GF(2) of the boundary map from `upper` (k-simplices) to `lower`.
fn boundary_rank(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> usize {
    if lower.is_empty() || upper.is_empty() {
        return 0;
    }
    let row: HashMap<&[usize], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let words = lower.len().div_ceil(64);
    let mut basis: Vec<Option<Vec<u64>>> = vec![None; lower.len()];
    let mut rank = 0;
    for s in upper {
        let mut col = vec![0u64; words];
        for skip in 0..s.len() {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            let r = row[face.as_slice()];
            col[r / 64] ^= 1 << (r % 64);
        }
        while let Some(p) = highest_bit(&col) {
            match &basis[p] {
                Some(b) => col.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis[p] = Some(col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn betti_from(cl: &[Vec<Vec<usize>>], upto: usize, closed_top: bool) -> Vec<usize> {
    let ranks: Vec<usize> = (1..cl.len())
        .map(|k| boundary_rank(&cl[k - 1], &cl[k]))
        .collect();
    (0..=upto)
        .map(|k| {
            let into = if k == 0 { 0 } else { ranks[k - 1] };
            let from = if closed_top && k + 1 == cl.len() {
                0
            } else {
                ranks[k]
            };
            cl[k].len() - into - from
        })
        .collect()
}

/// Betti numbers `b_0..=b_max_betti_dim` of the Rips complex at squared scale `eps_sq`.
pub fn betti_oracle(
    m: &SquaredDistanceMatrix,
    eps_sq: Squared,
    max_betti_dim: usize,
) -> Result<Vec<usize>> {
    guard(m)?;
    let cl = cliques(m, eps_sq, max_betti_dim + 1);
    Ok(betti_from(&cl, max_betti_dim, false))
}

/// Simplex counts and Betti numbers of the `top`-skeleton of the Rips complex
/// at `eps_sq`. Their alternating sums agree (Euler characteristic).
pub fn skeleton_betti(
    m: &SquaredDistanceMatrix,
    eps_sq: Squared,
    top: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    guard(m)?;
    let cl = cliques(m, eps_sq, top);
    let counts = cl.iter().map(Vec::len).collect();
    Ok((counts, betti_from(&cl, top, true)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointcloud::{squared_distance_matrix, PointCloud};

    fn sq(n: u64) -> Squared {
        Squared::from_integer(n)
    }

    fn square() -> SquaredDistanceMatrix {
        squared_distance_matrix(&PointCloud::new(vec![
            [0, 0, 0],
            [1, 0, 0],
            [1, 1, 0],
            [0, 1, 0],
        ]))
    }

    #[test]
    fn square_loop_then_filled() {
        assert_eq!(betti_oracle(&square(), sq(0), 2).unwrap(), vec![4, 0, 0]);
        assert_eq!(betti_oracle(&square(), sq(1), 2).unwrap(), vec![1, 1, 0]);
        assert_eq!(betti_oracle(&square(), sq(2), 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn octahedron_void() {
        let pts = vec![
            [1, 0, 0],
            [-1, 0, 0],
            [0, 1, 0],
            [0, -1, 0],
            [0, 0, 1],
            [0, 0, -1],
        ];
        let m = squared_distance_matrix(&PointCloud::new(pts));
        assert_eq!(betti_oracle(&m, sq(2), 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(betti_oracle(&m, sq(4), 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn euler_characteristic_of_skeleton() {
        let (counts, betti) = skeleton_betti(&square(), sq(2), 3).unwrap();
        assert_eq!(counts, vec![4, 6, 4, 1]);
        let chi = |v: &[usize]| {
            v.iter()
                .enumerate()
                .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum::<i64>()
        };
        assert_eq!(chi(&counts), chi(&betti));
    }

    #[test]
    fn refuses_large_inputs() {
        let pts = (0..65).map(|i| [i, 0, 0]).collect();
        let m = squared_distance_matrix(&PointCloud::new(pts));
        assert!(matches!(
            betti_oracle(&m, sq(1), 1),
            Err(Error::OracleTooLarge {
                points: 65,
                limit: 64
            })
        ));
    }
}
