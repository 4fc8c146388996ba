mod common;

use planar_flow::engines::{apex_maxflow, hassin_same_face_maxflow};
use planar_flow::flow_base::{sum_flows, Pseudoflow};
use planar_flow::generate::{gen_random_planar, gen_same_face, PlanarSpec};
use planar_flow::io::{emit_flow, emit_instance, parse_flow, parse_instance, Instance};
use planar_flow::verify::{check_cut, check_flow, check_max, reference_value};
use planar_flow::{solve, Solver, SolverConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn planar(n: usize, cap: u32, s: usize, t: usize, seed: u64) -> planar_flow::Network {
    gen_random_planar(&PlanarSpec {
        max_capacity: cap,
        sources: s,
        sinks: t,
        ..PlanarSpec::new(n, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_matches_reference(n in 10usize..80, cap in 0u32..20, s in 1usize..8, t in 1usize..8, seed: u64) {
        let net = planar(n, cap, s, t, seed);
        let sol = solve(&net).unwrap();
        prop_assert_eq!(sol.value, reference_value(&net));
        check_flow(&net, &sol.flow).unwrap();
        check_max(&net, &sol.flow).unwrap();
        check_cut(&net, &sol.flow, &sol.cut.darts).unwrap();
    }

    #[test]
    fn debug_mode_matches_reference(n in 10usize..60, s in 2usize..8, t in 2usize..8, seed: u64) {
        let net = planar(n, 9, s, t, seed);
        let solver = Solver::new(SolverConfig { debug: true, k_single: 1, k_pair: 0.1 });
        let sol = solver.solve(&net).unwrap();
        prop_assert_eq!(sol.value, reference_value(&net));
        prop_assert!(sol.stats.progress_violations().is_empty());
    }

    #[test]
    fn separated_residual_stays_separated(seed: u64) {
        common::separation_trial(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn pseudoflow_operations(seed: u64) {
        common::pseudoflow_trial(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn same_face_matches_reference(n in 3usize..60, cap in 1u32..15, seed: u64) {
        let net = gen_same_face::<i64>(n, cap, seed);
        let r = hassin_same_face_maxflow(&net.graph, &net.capacity, net.sources[0], net.sinks[0]).unwrap();
        prop_assert_eq!(r.value, reference_value(&net));
        check_flow(&net, &r.flow).unwrap();
    }

    #[test]
    fn flow_sum_is_associative(n in 4usize..40, seed: u64) {
        let net = planar(n, 8, 2, 2, seed);
        let g = &net.graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_pseudoflow(&net.capacity, g.edge_count(), &mut rng);
        let r1 = net.capacity.residual_of(&f);
        let a = apex_maxflow(g, &r1, &net.sources[..1], &net.sinks).flow;
        let fa = sum_flows(&net.capacity, &f, &a).unwrap();
        let b = apex_maxflow(g, &net.capacity.residual_of(&fa), &net.sources, &net.sinks).flow;
        let left = sum_flows(&net.capacity, &fa, &b).unwrap();
        let ab = sum_flows(&r1, &a, &b).unwrap();
        let right = sum_flows(&net.capacity, &f, &ab).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn instance_text_round_trip(n in 4usize..50, seed: u64) {
        let net = planar(n, 20, 3, 3, seed);
        let inst = Instance::new(net);
        let text = emit_instance(&inst);
        let back: Instance<i64> = parse_instance(&text).unwrap();
        prop_assert!(back == inst);
        let sol = solve(&back.network).unwrap();
        let flow: Pseudoflow<i64> = parse_flow(&emit_flow(&sol.flow, sol.value), back.network.graph.edge_count()).unwrap();
        prop_assert_eq!(flow, sol.flow);
    }
}
