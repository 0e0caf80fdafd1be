//! Vietoris-Rips persistent homology in dimensions 0 to 2 over the two-element field.
//!
//! Two independent routes produce identical barcodes:
//!
//! - [`build_filtration`] + [`reduce`]: an explicit, sorted simplex list and the
//!   standard column reduction of its boundary matrix (with clearing). Simple
//!   and memory hungry; meant for small inputs and as a reference.
//! - [`rips_barcode`]: union-find for dimension 0 and an implicit coboundary
//!   reduction for dimensions 1 and 2 that never materializes the top
//!   simplices. This is the route used on trajectory point clouds.
//!
//! [`betti_oracle`] computes Betti numbers of a single complex by direct rank
//! computation and is the independent check for both.
//!
//! All filtration values are exact squared diameters. Simplices are ordered by
//! (squared diameter, dimension, lexicographic vertex list).

mod barcode;
mod cohomology;
mod filtration;
mod oracle;
mod reduce;
mod union_find;

pub(crate) use barcode::sqrt as barcode_sqrt;
pub use barcode::{betti_at, parse_squared, render_eps, squared_from_decimal, Bar, Barcode};
pub use cohomology::rips_barcode;
pub use filtration::{build_filtration, Filtration, Simplex};
pub use oracle::{betti_oracle, skeleton_betti, ORACLE_MAX_POINTS};
pub use reduce::reduce;
pub use union_find::UnionFind;

use crate::error::{Error, Result};
use crate::pointcloud::{Squared, SquaredDistanceMatrix};

/// Largest simplex dimension the filtration builder accepts.
pub const MAX_SIMPLEX_DIM: usize = 3;

/// Upper bound on the squared diameter of admitted simplices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Squared(Squared),
    /// The enclosing radius of the input; beyond it the complex is a cone.
    EnclosingRadius,
}

impl Threshold {
    pub fn resolve(self, m: &SquaredDistanceMatrix) -> Squared {
        match self {
            Threshold::Squared(s) => s,
            Threshold::EnclosingRadius => {
                enclosing_radius(m).unwrap_or_else(|_| Squared::from_integer(0))
            }
        }
    }

    pub(crate) fn raw(self, m: &SquaredDistanceMatrix) -> u64 {
        match self {
            Threshold::Squared(s) => m.raw_bound(s),
            Threshold::EnclosingRadius => enclosing_raw(m).unwrap_or(0),
        }
    }
}

/// `min_i max_j d(i, j)` as an exact squared value.
pub fn enclosing_radius(m: &SquaredDistanceMatrix) -> Result<Squared> {
    enclosing_raw(m).map(|r| Squared::new(r, m.denom()))
}

fn enclosing_raw(m: &SquaredDistanceMatrix) -> Result<u64> {
    (0..m.len())
        .map(|i| (0..m.len()).map(|j| m.raw(i, j)).max().unwrap_or(0))
        .min()
        .ok_or(Error::EmptyMatrix)
}
