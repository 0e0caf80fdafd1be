//! Spatial evolutionary games and the topology of their space-time footprints.
//!
//! The pipeline is: simulate a game on a lattice ([`pd`], [`efg`]) into a
//! [`Trajectory`], turn the cells held by one strategy over an interval of
//! iterations into a point cloud ([`pointcloud`]), compute its Vietoris-Rips
//! barcode ([`persistence`]) and read off a shape ([`shape`]).

pub mod efg;
pub mod error;
pub mod lattice;
pub mod pd;
pub mod persistence;
pub mod pointcloud;
pub mod rng;
pub mod shape;
pub mod trajectory;

pub use efg::{efg_run, efg_step, grass_with_fires, EfgConfig};
pub use error::{Error, Result};
pub use lattice::{neighbors, Action, Cell, Coord, GameKind, Lattice, Strategy};
pub use pd::{
    choose_action, death_probability, interaction_phase, lifecycle_phase, payoff, pd_run,
    reset_state, sample_focal_transition, transition_distribution, transition_factors,
    transition_probability, PdConfig, TransitionFactors,
};
pub use persistence::{
    betti_at, betti_oracle, build_filtration, enclosing_radius, reduce, rips_barcode,
    skeleton_betti, Bar, Barcode, Filtration, Simplex, Threshold,
};
pub use pointcloud::{
    edge_contact_report, extract_cloud, frozen_from, squared_distance_matrix, EdgeContact,
    IterationInterval, PointCloud, Squared, SquaredDistanceMatrix,
};
pub use rng::{seeded, seeded_stream, SimRng};
pub use shape::{classify, significant_features, Classification, ShapeReport, SignificancePolicy};
pub use trajectory::{parse_frame, serialize_frame, Frame, Trajectory, TrajectoryMeta};
