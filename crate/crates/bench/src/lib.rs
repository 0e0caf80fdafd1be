//! Inputs shared by the benchmarks in `benches/`.

use evotopo_core::{
    extract_cloud, pd_run, squared_distance_matrix, Cell, IterationInterval, Lattice, PdConfig,
    Squared, SquaredDistanceMatrix, Strategy,
};

/// 7x7 defectors around a 2x2 TFT block.
pub fn clustered_lattice() -> Lattice {
    Lattice::from_fn(7, 7, |c| {
        let inside = (2..4).contains(&c.x) && (2..4).contains(&c.y);
        Cell::new(
            if inside {
                Strategy::TitForTat
            } else {
                Strategy::Defector
            },
            2,
        )
    })
    .expect("7x7")
}

/// Distances of the defector cloud over `frames` iterations of the clustered lattice.
pub fn defector_matrix(frames: u64) -> SquaredDistanceMatrix {
    let cfg = PdConfig::standard(7, 7, 1);
    let traj = pd_run(&cfg, &clustered_lattice(), frames.saturating_sub(1)).expect("valid run");
    let iv = IterationInterval::full(&traj).expect("frames");
    let cloud = extract_cloud(&traj, Strategy::Defector, iv, Squared::from_integer(1))
        .expect("interval in range");
    squared_distance_matrix(&cloud)
}
