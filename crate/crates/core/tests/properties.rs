use proptest::prelude::*;

use ged_core::io::{parse_text_graph, serialize_text};
use ged_core::lsape::lsape_bruteforce;
use ged_core::multistart::random_node_map;
use ged_core::{
    bp_beam, edit_path_cost, exact_ged, ipfp, k_refine, lsape_solve, permute_graph, sample_node_maps,
    EditCostModel, ExtendedCostMatrix, IpfpConfig, LabeledGraph, NodeMap, RefineConfig, ScoresMatrix,
};
use rand::SeedableRng;

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = LabeledGraph> {
    (0..=max_nodes).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let count = pairs.len();
        (
            prop::collection::vec(prop::sample::select(vec!["a", "b", "c"]), n),
            prop::collection::vec(prop::option::of(prop::sample::select(vec!["x", "y"])), count),
        )
            .prop_map(move |(labels, edge_labels)| {
                let edges = pairs
                    .iter()
                    .zip(edge_labels)
                    .filter_map(|(&(a, b), l)| l.map(|l| (a, b, l)));
                LabeledGraph::new("p", labels.into_iter().map(String::from).collect(), edges).unwrap()
            })
    })
}

fn pair_with_map(max_nodes: usize) -> impl Strategy<Value = (LabeledGraph, LabeledGraph, NodeMap)> {
    (graph_strategy(max_nodes), graph_strategy(max_nodes), any::<u64>()).prop_map(|(g, h, seed)| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let map = random_node_map(g.order(), h.order(), &mut rng);
        (g, h, map)
    })
}

fn costs_strategy() -> impl Strategy<Value = EditCostModel> {
    prop::sample::select(vec![(3.0, 1.0, 1.0), (2.0, 1.0, 1.0), (1.0, 2.0, 0.5)])
        .prop_map(|(s, d, i)| EditCostModel::constant(s, d, i).unwrap())
}

fn inverse(map: &NodeMap) -> NodeMap {
    NodeMap::from_forward(map.backward().to_vec(), map.source_count()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inverse_map_has_equal_cost_under_symmetric_costs((g, h, map) in pair_with_map(6)) {
        let costs = EditCostModel::constant(3.0, 1.0, 1.0).unwrap();
        let forward = edit_path_cost(&g, &h, &map, &costs).unwrap();
        let backward = edit_path_cost(&h, &g, &inverse(&map), &costs).unwrap();
        prop_assert!((forward - backward).abs() < 1e-9);
    }

    #[test]
    fn local_searches_never_worsen_and_stay_above_exact(
        (g, h, map) in pair_with_map(4),
        costs in costs_strategy(),
        k in 2usize..=3,
        dummy in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let start = edit_path_cost(&g, &h, &map, &costs).unwrap();
        let (exact, _) = exact_ged(&g, &h, &costs).unwrap();
        let config = RefineConfig::k_refine(k).with_dummy(dummy);
        let results = [
            k_refine(&g, &h, map.clone(), &config, &costs).unwrap(),
            ipfp(&g, &h, map.clone(), &IpfpConfig::default(), &costs).unwrap(),
            bp_beam(&g, &h, &map, 3, seed, &costs).unwrap(),
        ];
        for out in results {
            let cost = edit_path_cost(&g, &h, &out, &costs).unwrap();
            prop_assert!(cost <= start + 1e-9);
            prop_assert!(cost >= exact - 1e-9);
            prop_assert!((out.cached_cost().unwrap() - cost).abs() < 1e-9);
        }
    }

    #[test]
    fn permuted_copy_has_distance_zero(g in graph_strategy(5), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (copy, witness) = permute_graph(&g, &perm).unwrap();
        let costs = EditCostModel::muta_n();
        prop_assert_eq!(edit_path_cost(&g, &copy, &witness, &costs).unwrap(), 0.0);
        prop_assert_eq!(exact_ged(&g, &copy, &costs).unwrap().0, 0.0);
    }

    #[test]
    fn lsape_row_shift_moves_objective(
        n in 0usize..=4,
        m in 0usize..=4,
        seed in any::<u64>(),
        shift in 0.0f64..5.0,
    ) {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = ExtendedCostMatrix::from_fn(n, m, |_, _| rng.random_range(0.0..10.0)).unwrap();
        let base = lsape_solve(&c).objective;
        prop_assert!((base - lsape_bruteforce(&c).unwrap().objective).abs() < 1e-9);
        if n > 0 {
            let shifted = ExtendedCostMatrix::from_fn(n, m, |i, k| c.get(i, k) + if i == 0 { shift } else { 0.0 }).unwrap();
            prop_assert!((lsape_solve(&shifted).objective - base - shift).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_maps_are_valid(
        n in 0usize..=5,
        m in 0usize..=5,
        weights in prop::collection::vec(prop::sample::select(vec![0.0, 0.0, 1.0, 2.5]), 36),
        seed in any::<u64>(),
    ) {
        let mut scores = ScoresMatrix::zeros(n, m);
        for i in 0..=n {
            for k in 0..=m {
                scores.set(i, k, weights[i * 6 + k]).unwrap();
            }
        }
        for map in sample_node_maps(&scores, 5, seed).unwrap() {
            prop_assert!(map.is_consistent(n, m));
            for i in 0..n {
                let pick = map.target(i).unwrap_or(m);
                prop_assert!(scores.get(i, pick) > 0.0 || (0..=m).all(|k| scores.get(i, k) == 0.0
                    || (k < m && map.source(k).is_some_and(|s| s < i))));
            }
        }
    }

    #[test]
    fn text_format_round_trips(g in graph_strategy(6)) {
        let text = serialize_text(&g).unwrap();
        let parsed = parse_text_graph(&text).unwrap();
        prop_assert!(parsed == g);
        prop_assert_eq!(serialize_text(&parsed).unwrap(), text);
    }
}
