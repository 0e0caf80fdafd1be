use std::collections::BTreeSet;

use evotopo_core::persistence::{skeleton_betti, UnionFind};
use evotopo_core::Strategy as S;
use evotopo_core::*;
use proptest::prelude::*;

fn cloud(
    max_points: usize,
    max_coord: i64,
) -> impl proptest::strategy::Strategy<Value = Vec<[i64; 3]>> {
    prop::collection::vec(prop::array::uniform3(0..=max_coord), 1..=max_points)
}

fn critical_values(m: &SquaredDistanceMatrix) -> Vec<Squared> {
    let mut set = BTreeSet::new();
    set.insert(Squared::from_integer(0));
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            set.insert(m.get(i, j));
        }
    }
    set.into_iter().collect()
}

fn chi(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(k, &x)| if k % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn implicit_and_explicit_reductions_agree(pts in cloud(12, 4), cap in 1u64..20) {
        let m = squared_distance_matrix(&PointCloud::new(pts));
        let thr = Threshold::Squared(Squared::from_integer(cap));
        let implicit = rips_barcode(&m, 2, thr).unwrap();
        let explicit = reduce(&build_filtration(&m, 3, thr).unwrap()).unwrap();
        prop_assert_eq!(implicit, explicit);
    }

    #[test]
    fn barcode_matches_oracle_at_critical_values(pts in cloud(10, 4)) {
        let m = squared_distance_matrix(&PointCloud::new(pts));
        let b = rips_barcode(&m, 2, Threshold::EnclosingRadius).unwrap();
        let top = enclosing_radius(&m).unwrap();
        for eps in critical_values(&m).into_iter().filter(|&e| e < top) {
            let oracle = betti_oracle(&m, eps, 2).unwrap();
            prop_assert_eq!(betti_at(&b, eps).to_vec(), oracle, "eps^2 = {}", eps);
        }
    }

    #[test]
    fn euler_characteristic_of_skeleton(pts in cloud(9, 3)) {
        let m = squared_distance_matrix(&PointCloud::new(pts));
        for eps in critical_values(&m) {
            let (counts, betti) = skeleton_betti(&m, eps, 3).unwrap();
            prop_assert_eq!(chi(&counts), chi(&betti));
        }
    }

    #[test]
    fn essential_components_match_union_find(pts in cloud(25, 6), cap in 0u64..10) {
        let m = squared_distance_matrix(&PointCloud::new(pts));
        let eps = Squared::from_integer(cap);
        let b = rips_barcode(&m, 0, Threshold::Squared(eps)).unwrap();
        let mut uf = UnionFind::new(m.len());
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if m.get(i, j) <= eps {
                    uf.union(i, j);
                }
            }
        }
        prop_assert_eq!(b.in_dim(0).filter(|bar| bar.is_essential()).count(), uf.sets());
        prop_assert_eq!(b.in_dim(0).count(), m.len());
    }

    #[test]
    fn births_precede_deaths(pts in cloud(15, 5)) {
        let m = squared_distance_matrix(&PointCloud::new(pts));
        let b = rips_barcode(&m, 2, Threshold::Squared(Squared::from_integer(8))).unwrap();
        for bar in b.bars() {
            if let Some(d) = bar.death {
                prop_assert!(bar.birth <= d);
            }
        }
    }

    #[test]
    fn classification_is_scale_consistent(pts in cloud(12, 4), c in 2i64..4) {
        let base = PointCloud::new(pts.clone());
        let scaled = PointCloud::new(pts.iter().map(|p| [p[0] * c, p[1] * c, p[2] * c]).collect());
        let c2 = Squared::from_integer((c * c) as u64);
        let policy = SignificancePolicy::default();
        let scaled_policy = SignificancePolicy::new(policy.window_low_sq * c2, policy.window_high_sq * c2, None).unwrap();
        let thr = Squared::from_integer(6);
        let a = rips_barcode(&squared_distance_matrix(&base), 2, Threshold::Squared(thr)).unwrap();
        let b = rips_barcode(&squared_distance_matrix(&scaled), 2, Threshold::Squared(thr * c2)).unwrap();
        prop_assert_eq!(classify(&a, &policy).classification, classify(&b, &scaled_policy).classification);
    }

    #[test]
    fn frame_round_trip(w in 1usize..7, h in 1usize..7, codes in prop::collection::vec(0usize..4, 49), t in 0u64..1000) {
        let lat = Lattice::from_fn(w, h, |c| Cell::new(S::PD[codes[c.y * 7 + c.x]], 0)).unwrap();
        let text = serialize_frame(&lat, GameKind::Pd, t);
        let (game, t2, back) = parse_frame(&text).unwrap();
        prop_assert_eq!(game, GameKind::Pd);
        prop_assert_eq!(t2, t);
        prop_assert!(back.same_strategies(&lat));
    }

    #[test]
    fn efg_transitions_are_legal(seed in any::<u64>(), max_age in 1u32..5, fires in prop::collection::vec((0usize..8, 0usize..8), 1..6)) {
        let coords: Vec<Coord> = fires.into_iter().map(|(x, y)| Coord::new(x, y)).collect();
        let cfg = EfgConfig { max_age, width: 8, height: 8, seed, iterations: 12 };
        let traj = efg_run(&cfg, &grass_with_fires(8, 8, &coords).unwrap()).unwrap();
        for pair in traj.frames().windows(2) {
            for (a, b) in pair[0].lattice.cells().iter().zip(pair[1].lattice.cells()) {
                let legal = matches!(
                    (a.strategy, b.strategy),
                    (S::Grass, S::Grass | S::Fire)
                        | (S::Fire, S::Fire | S::Earth)
                        | (S::Earth, S::Earth | S::Grass)
                );
                prop_assert!(legal, "{:?} -> {:?}", a.strategy, b.strategy);
            }
        }
    }

    #[test]
    fn pd_runs_are_deterministic(seed in any::<u64>()) {
        let mut cfg = PdConfig::standard(6, 6, seed);
        cfg.mu = 0.05;
        cfg.zeta = Some(20.0);
        let init = Lattice::from_fn(6, 6, |c| Cell::new(S::PD[(c.x + 2 * c.y) % 4], cfg.start_score)).unwrap();
        let a = pd_run(&cfg, &init, 15).unwrap();
        let b = pd_run(&cfg, &init, 15).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
    }
}
