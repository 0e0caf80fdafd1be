use crate::error::{Error, Result};
use crate::persistence::barcode::{Bar, Barcode};
use crate::persistence::filtration::Filtration;

/// Standard column reduction of the boundary matrix of `f` over GF(2).
///
/// Dimensions are reduced from the top down; once a column of dimension `d`
/// settles on pivot row `i`, column `i` (dimension `d - 1`) is known to reduce
/// to zero and is skipped. Homology is reported up to dimension
/// `min(2, max_dim - 1)`, the highest dimension fully determined by the
/// simplices present.
pub fn reduce(f: &Filtration) -> Result<Barcode> {
    let index = f.validate()?;
    let simplices = f.simplices();
    let n = simplices.len();

    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            let mut col: Vec<usize> = s.facets().map(|face| index[face.as_slice()]).collect();
            col.sort_unstable();
            col
        })
        .collect();
    drop(index);

    let top = simplices.iter().map(|s| s.dim()).max().unwrap_or(0);
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n];
    let mut cleared = vec![false; n];
    for dim in (1..=top).rev() {
        for j in 0..n {
            if simplices[j].dim() != dim || cleared[j] {
                continue;
            }
            let mut col = std::mem::take(&mut columns[j]);
            while let Some(&low) = col.last() {
                match pivot_owner[low] {
                    Some(k) => col = symmetric_difference(&col, &columns[k]),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                if low >= j {
                    return Err(Error::Invariant(format!(
                        "pivot {low} not before column {j}"
                    )));
                }
                pivot_owner[low] = Some(j);
                cleared[low] = true;
                columns[low].clear();
            }
            columns[j] = col;
        }
    }

    let max_hom = f.max_dim().saturating_sub(1).min(2);
    let mut bars = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        let dim = s.dim();
        if dim > max_hom {
            continue;
        }
        let positive = columns[i].is_empty();
        if !positive {
            continue;
        }
        let death = pivot_owner[i].map(|j| simplices[j].squared_diameter);
        bars.push(Bar {
            dim,
            birth: s.squared_diameter,
            death,
        });
    }
    Ok(Barcode::new(bars))
}

pub(crate) fn symmetric_difference<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::filtration::{build_filtration, Simplex};
    use crate::persistence::Threshold;
    use crate::pointcloud::{squared_distance_matrix, PointCloud, Squared};

    fn sq(n: u64) -> Squared {
        Squared::from_integer(n)
    }

    #[test]
    fn unit_square_barcode() {
        let m = squared_distance_matrix(&PointCloud::new(vec![
            [0, 0, 0],
            [1, 0, 0],
            [1, 1, 0],
            [0, 1, 0],
        ]));
        let f = build_filtration(&m, 3, Threshold::Squared(sq(2))).unwrap();
        let b = reduce(&f).unwrap();
        let h0: Vec<_> = b.in_dim(0).collect();
        assert_eq!(h0.len(), 4);
        assert_eq!(h0.iter().filter(|bar| bar.death == Some(sq(1))).count(), 3);
        assert_eq!(h0.iter().filter(|bar| bar.is_essential()).count(), 1);
        let h1: Vec<_> = b.in_dim(1).filter(|bar| !bar.is_trivial()).collect();
        assert_eq!(h1.len(), 1);
        assert_eq!((h1[0].birth, h1[0].death), (sq(1), Some(sq(2))));
        assert_eq!(b.in_dim(2).filter(|bar| !bar.is_trivial()).count(), 0);
    }

    #[test]
    fn single_point() {
        let m = squared_distance_matrix(&PointCloud::new(vec![[3, 1, 4]]));
        let b = reduce(&build_filtration(&m, 3, Threshold::EnclosingRadius).unwrap()).unwrap();
        assert_eq!(
            b.bars(),
            &[Bar {
                dim: 0,
                birth: sq(0),
                death: None
            }]
        );
    }

    #[test]
    fn rejects_unordered_filtration() {
        let f = Filtration::from_simplices(
            vec![
                Simplex {
                    vertices: vec![1],
                    squared_diameter: sq(0),
                },
                Simplex {
                    vertices: vec![0],
                    squared_diameter: sq(0),
                },
            ],
            sq(0),
            1,
        );
        assert!(matches!(reduce(&f), Err(Error::Invariant(_))));
    }

    #[test]
    fn symmetric_difference_cancels_pairs() {
        assert_eq!(symmetric_difference(&[1, 3, 5], &[3, 4]), vec![1, 4, 5]);
        assert!(symmetric_difference(&[2, 7], &[2, 7]).is_empty());
    }
}
