use evotopo_bench::{clustered_lattice, defector_matrix};
use evotopo_core::{
    rips_barcode, significant_features, SignificancePolicy, Squared, Strategy, Threshold,
};

#[test]
fn benchmark_cloud_has_the_expected_shape() {
    // The TFT block survives the first frames, so the defector cloud has a loop.
    let m = defector_matrix(5);
    assert_eq!(m.len() % 45, 0);
    let b = rips_barcode(&m, 2, Threshold::Squared(Squared::new(25, 4))).unwrap();
    let [b0, b1, _] = significant_features(&b, &SignificancePolicy::default());
    assert_eq!((b0, b1), (1, 1));
    assert_eq!(clustered_lattice().count(Strategy::Defector), 45);
}
