//! Property tests over seeded random graphs and parameter sweeps.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinal_lab::analysis::{
    beta_from_nu, critical_p, dim_inequality, graph_gradient, graph_gradient_edges, lp_norm, nash_ratio,
    nash_slope_law, p_lower_bound,
};
use spinal_lab::generators::{random_connected, random_glued, random_parts, vicsek};
use spinal_lab::graph::{Graph, Truncation};
use spinal_lab::io::GraphDocument;
use spinal_lab::spinal::{glue, validate_bruteforce, validate_structural, CanonicalForm};
use spinal_lab::volume::measure_doubling;
use spinal_lab::walk::{return_probabilities_direct, return_probabilities_exact, return_probabilities_mc};

fn graph(seed: u64, n: usize) -> Graph {
    random_connected(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

proptest! {
    #[test]
    fn distances_form_a_metric(seed in any::<u64>(), n in 1usize..40) {
        let g = graph(seed, n);
        let d: Vec<Vec<usize>> = (0..n).map(|x| g.bfs_distances(x).into_iter().map(Option::unwrap).collect()).collect();
        for x in 0..n {
            prop_assert_eq!(d[x][x], 0);
            for y in 0..n {
                prop_assert_eq!(d[x][y], d[y][x]);
                prop_assert_eq!(d[x][y] == 1, g.has_edge(x, y));
                for z in 0..n {
                    prop_assert!(d[x][z] <= d[x][y] + d[y][z]);
                }
            }
        }
    }

    #[test]
    fn volume_table_counts_balls(seed in any::<u64>(), n in 1usize..60, x in any::<prop::sample::Index>()) {
        let g = graph(seed, n);
        let x = x.index(n);
        let vt = g.volume_table(x, n);
        for r in 0..=n {
            prop_assert_eq!(vt.volume(r), g.ball(x, r as f64).len());
            prop_assert_eq!(g.ball(x, r as f64 + 0.5).len(), vt.volume(r));
        }
    }

    #[test]
    fn gradient_sweeps_agree(seed in any::<u64>(), n in 2usize..50, values in prop::collection::vec(-1e3f64..1e3, 50)) {
        let g = graph(seed, n);
        let f = &values[..n];
        let a = graph_gradient(&g, f);
        let b = graph_gradient_edges(&g, f);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }

    #[test]
    fn nash_ratio_is_scale_invariant(
        seed in any::<u64>(),
        n in 2usize..40,
        values in prop::collection::vec(0.0f64..1.0, 40),
        scale in 1e-6f64..1e6,
        p in 1.1f64..6.0,
        beta in 0.2f64..4.0,
    ) {
        let g = graph(seed, n);
        let f = &values[..n];
        prop_assume!(lp_norm(f, 1.0) > 0.0);
        let scaled: Vec<f64> = f.iter().map(|v| v * scale).collect();
        let r = nash_ratio(&g, f, p, beta).unwrap();
        let s = nash_ratio(&g, &scaled, p, beta).unwrap();
        prop_assume!(r.is_finite());
        prop_assert!((r - s).abs() <= 1e-9 * r, "{} vs {}", r, s);
    }

    #[test]
    fn glue_then_decompose_round_trips(seed in any::<u64>(), k in 1usize..10, m in 1usize..8) {
        let (skeleton, fibers) = random_parts(seed, k, m);
        let sg = glue(&skeleton, &fibers).unwrap();
        let dec = sg.decompose();
        prop_assert_eq!(&dec.skeleton, &skeleton);
        for (f, d) in fibers.iter().zip(&dec.fibers) {
            prop_assert_eq!(f.graph.vertex_count(), d.graph.vertex_count());
            prop_assert_eq!(f.graph.edge_count(), d.graph.edge_count());
        }
        let back = glue(&dec.skeleton, &dec.fibers).unwrap();
        prop_assert_eq!(CanonicalForm::of(&back), sg.canonical_form());
        prop_assert_eq!(back.canonical_form(), sg.canonical_form());
    }

    #[test]
    fn validators_agree_on_random_assignments(seed in any::<u64>(), n in 1usize..9, code in any::<u64>()) {
        let g = graph(seed, n);
        // Spine: a nonempty subset; projection: a spine vertex per vertex.
        let mask = (code % ((1u64 << n) - 1)) + 1;
        let spine: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let mut rest = code / ((1u64 << n) - 1) + 1;
        let pi: Vec<usize> = (0..n)
            .map(|v| {
                if mask >> v & 1 == 1 {
                    v
                } else {
                    rest = rest.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    spine[(rest >> 33) as usize % spine.len()]
                }
            })
            .collect();
        let structural = validate_structural(&g, &spine, &pi).is_valid();
        let brute = validate_bruteforce(&g, &spine, &pi, n, usize::MAX).unwrap();
        prop_assert_eq!(structural, brute);
    }

    #[test]
    fn glued_graphs_validate_and_survive_json(seed in any::<u64>(), k in 1usize..8, m in 1usize..6) {
        let sg = random_glued(seed, k, m);
        prop_assert!(validate_structural(sg.graph(), sg.spine(), sg.projection()).is_valid());
        prop_assert!(validate_bruteforce(sg.graph(), sg.spine(), sg.projection(), 64, usize::MAX).unwrap());
        let text = GraphDocument::from_spinal(&sg).to_json();
        let back = GraphDocument::from_json(&text).unwrap().spinal().unwrap();
        prop_assert_eq!(back.canonical_form(), sg.canonical_form());
        prop_assert!(sg.check_fiber_geodesics(&sg.fiber_pairs(usize::MAX)).violations.is_empty());
    }

    #[test]
    fn spinal_sets_are_preimages_of_spine_balls(seed in any::<u64>(), k in 1usize..10, m in 1usize..5, r in 0usize..6) {
        let sg = random_glued(seed, k, m);
        let x = seed as usize % sg.graph().vertex_count();
        let expected: Vec<usize> =
            (0..sg.graph().vertex_count()).filter(|&y| sg.spinal_distance(x, y) <= r).collect();
        prop_assert_eq!(sg.spinal_set(x, r), expected);
        prop_assert_eq!(sg.spinal_volumes(x, r)[r], sg.spinal_set(x, r).len());
    }

    #[test]
    fn test_function_support_and_gradient(seed in any::<u64>(), k in 1usize..10, m in 1usize..5, n in 1u64..8) {
        let sg = random_glued(seed, k, m);
        let x0 = sg.spine()[seed as usize % sg.spine().len()];
        let g = sg.test_function(x0, n).unwrap();
        let reach = (n - 1) as usize;
        prop_assert_eq!(g.support(), sg.spinal_set(x0, reach));
        for y in 0..sg.graph().vertex_count() {
            let d = sg.spinal_distance(x0, y) as u64;
            prop_assert_eq!(g.numerators[y], n.saturating_sub(d));
        }
        let grad = graph_gradient(sg.graph(), &g.values());
        for (y, &gy) in grad.iter().enumerate() {
            if !sg.is_spine(y) {
                prop_assert_eq!(gy, 0.0);
            }
        }
    }

    #[test]
    fn conjugate_exponents(ds in 1.0f64..3.0, gap in 0.05f64..4.0, nu in 1.05f64..10.0) {
        let dg = ds + gap;
        let pc = critical_p(ds, dg, nu);
        let pl = p_lower_bound(beta_from_nu(nu), ds, dg);
        if let (Ok(pc), Ok(pl)) = (pc, pl) {
            prop_assume!(pc > 1.0 && pc < 1e6);
            prop_assert!((1.0 / pc + 1.0 / pl - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn inequality_boundary_at_p_two(nu in 1.0001f64..10.0) {
        let beta = beta_from_nu(nu);
        prop_assert!(dim_inequality(2.0, beta, 1.0, nu).slack.abs() <= 1e-12);
        prop_assert_eq!(nash_slope_law(2.0, beta, 1.0, nu), dim_inequality(2.0, beta, 1.0, nu).slack);
        prop_assert!((critical_p(1.0, nu, nu).unwrap() - 2.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn half_time_walk_matches_direct(seed in any::<u64>(), n in 2usize..60, t in 1usize..40) {
        let g = graph(seed, n);
        let x = seed as usize % n;
        let half = return_probabilities_exact(&g, &Truncation::none(), x, 2 * t).unwrap();
        let direct = return_probabilities_direct(&g, x, 2 * t);
        for (a, b) in half.entries.iter().zip(&direct.entries) {
            prop_assert_eq!(a.0, b.0);
            prop_assert!((a.1 - b.1).abs() <= 1e-12, "t={}: {} vs {}", a.0, a.1, b.1);
        }
        prop_assert!(half.max_mass_error <= 1e-12);
    }

    #[test]
    fn doubling_estimates_replay(seed in any::<u64>(), n in 10usize..80) {
        let g = graph(seed, n);
        let est = measure_doubling(&g, &[0, n / 2], 1, 6).unwrap();
        prop_assert!(est.replay(&g));
    }
}

#[test]
fn monte_carlo_within_three_standard_errors() {
    let v = vicsek(2, 3).unwrap();
    let (g, t) = (v.spinal.graph(), v.spinal.truncation());
    let exact = return_probabilities_exact(g, t, v.center, 40).unwrap();
    let mc = return_probabilities_mc(g, t, v.center, 40, 200_000, 2024).unwrap();
    let se = mc.std_errors.as_ref().unwrap();
    for ((e, m), s) in exact.entries.iter().zip(&mc.entries).zip(se).skip(1) {
        assert!((e.1 - m.1).abs() <= 3.0 * s, "t={}: exact {} mc {} se {}", e.0, e.1, m.1, s);
    }
}

#[test]
fn enumeration_matches_known_class_counts() {
    // Connected graphs up to isomorphism on 1..=7 vertices.
    let counts: Vec<usize> = (1..=7).map(|n| common::connected_graph_classes(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
}
