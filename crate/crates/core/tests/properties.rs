use proptest::prelude::*;
use setbm::{
    distribution_function, embed, exponential_pair_variable, gh_diff_interval, hausdorff, minkowski_sum, scalar_mul,
    simulate_bm, ConvexSet, DirectionGrid, GhCase, TimeGrid,
};

fn polygon() -> impl Strategy<Value = ConvexSet> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..8)
        .prop_map(|pts| ConvexSet::polytope(pts.into_iter().map(|(x, y)| vec![x, y]).collect()).unwrap())
}

fn interval() -> impl Strategy<Value = ConvexSet> {
    (-10.0f64..10.0, 0.0f64..10.0).prop_map(|(lo, w)| ConvexSet::interval(lo, lo + w).unwrap())
}

proptest! {
    #[test]
    fn hausdorff_is_a_metric(a in polygon(), b in polygon(), c in polygon()) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert!((ab - hausdorff(&b, &a).unwrap()).abs() <= 1e-12);
        prop_assert!(hausdorff(&a, &a).unwrap() <= 1e-12);
        prop_assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap() + 1e-9);
    }

    #[test]
    fn minkowski_sum_is_translation_invariant_in_distance(a in polygon(), b in polygon(), c in polygon()) {
        let ac = minkowski_sum(&a, &c).unwrap();
        let bc = minkowski_sum(&b, &c).unwrap();
        prop_assert!((hausdorff(&ac, &bc).unwrap() - hausdorff(&a, &b).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn interval_difference_reconstructs(a in interval(), b in interval()) {
        let r = gh_diff_interval(&a, &b).unwrap();
        let c = r.value.unwrap();
        let residual = match r.case {
            GhCase::CaseII => hausdorff(&minkowski_sum(&a, &scalar_mul(-1.0, &c)).unwrap(), &b).unwrap(),
            _ => hausdorff(&minkowski_sum(&b, &c).unwrap(), &a).unwrap(),
        };
        prop_assert!(residual <= 1e-9);
    }

    #[test]
    fn embedding_preserves_containment_order_in_one_dimension(a in interval(), b in interval()) {
        let grid = DirectionGrid::line();
        let le = embed(&a, &grid).unwrap().le(&embed(&b, &grid).unwrap()).unwrap();
        prop_assert_eq!(le, a.is_subset_of(&b).unwrap());
    }
}

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

#[test]
fn simulation_does_not_depend_on_thread_count() {
    let tg = TimeGrid::uniform(16, 1.0).unwrap();
    let grid = DirectionGrid::circle(8).unwrap();
    let one = with_threads(1, || simulate_bm(&tg, &grid, 5000, 9).unwrap());
    let four = with_threads(4, || simulate_bm(&tg, &grid, 5000, 9).unwrap());
    for (p, q) in one.paths().zip(four.paths()) {
        assert_eq!(p.scalars(), q.scalars());
    }
}

#[test]
fn distribution_estimate_does_not_depend_on_thread_count() {
    let g = exponential_pair_variable(1.0).unwrap();
    let y = ConvexSet::interval(0.2, 2.5).unwrap();
    let one = with_threads(1, || distribution_function(&g, &y, 50_000, 3).unwrap());
    let four = with_threads(4, || distribution_function(&g, &y, 50_000, 3).unwrap());
    assert_eq!(one, four);
}
