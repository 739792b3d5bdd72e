mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use tokaut::autsearch::{automorphism_group, refine, OrderedPartition};
use tokaut::constructions::{iota_lift, phi_alpha_bipartite, AlphaFamily};
use tokaut::factorization::{is_prime, prime_factor_decomposition};
use tokaut::graph::{cartesian_product, complete_bipartite, cycle_graph, path_graph, BipartiteSpec, Graph};
use tokaut::perm::{schreier_sims, Permutation};
use tokaut::token::{all_configs, rank, token_graph, unrank, TokenConfig};

use common::binom;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len())
            .prop_map(move |mask| Graph::from_edges(n, &pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&e, _)| e).collect::<Vec<_>>()).unwrap())
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn arb_relabeled(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    })
}

fn is_equitable(g: &Graph, cells: &[Vec<usize>]) -> bool {
    let mut cell_of = vec![0; g.n()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_of[v] = i;
        }
    }
    cells.iter().all(|c| {
        let profile = |v: usize| {
            let mut counts = vec![0; cells.len()];
            for w in g.neighbors(v) {
                counts[cell_of[w]] += 1;
            }
            counts
        };
        let first = profile(c[0]);
        c.iter().all(|&v| profile(v) == first)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_unrank_round_trip(n in 1usize..14, k_seed in 0usize..14, r_seed in 0usize..10_000) {
        let k = k_seed % (n + 1);
        let r = r_seed % binom(n, k);
        let c = unrank(r, n, k).unwrap();
        prop_assert_eq!(c.k(), k);
        prop_assert_eq!(rank(&c, n).unwrap(), r);
        prop_assert_eq!(&TokenConfig::new(c.members().to_vec(), n).unwrap(), &c);
    }

    #[test]
    fn ranks_follow_enumeration_order(n in 1usize..10, k_seed in 0usize..10) {
        let k = k_seed % (n + 1);
        for (i, c) in all_configs(n, k).iter().enumerate() {
            prop_assert_eq!(c.rank(), i);
        }
    }

    #[test]
    fn token_graph_edge_count(g in arb_graph(8), k_seed in 0usize..8) {
        let n = g.n();
        let k = 1 + k_seed % (n - 1);
        let tg = token_graph(&g, k).unwrap();
        prop_assert_eq!(tg.graph().n(), binom(n, k));
        prop_assert_eq!(tg.graph().edge_count(), binom(n - 2, k - 1) * g.edge_count());
    }

    #[test]
    fn aut_order_is_relabel_invariant((g, map) in arb_relabeled(9)) {
        let a = automorphism_group(&g);
        let b = automorphism_group(&g.relabel(&map));
        prop_assert_eq!(a.order(), b.order());
        for p in a.generators() {
            prop_assert!(g.is_automorphism(p.images()));
        }
    }

    #[test]
    fn aut_order_matches_brute_force(g in arb_graph(7)) {
        prop_assert_eq!(automorphism_group(&g).order(), BigUint::from(common::brute_automorphism_count(&g)));
    }

    #[test]
    fn refinement_is_equitable_and_finer(g in arb_graph(12), colors in proptest::collection::vec(0usize..3, 12)) {
        let start = OrderedPartition::from_colors(&colors[..g.n()]);
        let p = refine(&g, &start, None);
        prop_assert!(is_equitable(&g, p.cells()));
        let mut color_of = vec![0; g.n()];
        for (i, c) in start.cells().iter().enumerate() {
            for &v in c {
                color_of[v] = i;
            }
        }
        for c in p.cells() {
            prop_assert!(c.iter().all(|&v| color_of[v] == color_of[c[0]]));
        }
    }

    #[test]
    fn phi_composition_is_xor(n in 2usize..5, a in any::<u16>(), b in any::<u16>()) {
        let k = 2;
        let spec = BipartiteSpec::new(2, n);
        let pick = |mask: u16| AlphaFamily::bipartite(n, k, (0..n).filter(|i| mask >> i & 1 == 1).map(|i| vec![i + 2])).unwrap();
        let (fa, fb) = (pick(a), pick(b));
        let pa = phi_alpha_bipartite(spec, k, &fa).unwrap();
        let pb = phi_alpha_bipartite(spec, k, &fb).unwrap();
        let tg = token_graph(&complete_bipartite(spec).unwrap(), k).unwrap();
        prop_assert!(tg.graph().is_automorphism(pa.images()));
        prop_assert_eq!(pa.compose(&pb).unwrap(), phi_alpha_bipartite(spec, k, &fa.symmetric_difference(&fb).unwrap()).unwrap());
        prop_assert!(pa.compose(&pa).unwrap().is_identity());
    }

    #[test]
    fn iota_is_a_homomorphism(p in arb_perm(6), q in arb_perm(6), k in 1usize..6) {
        let tg = token_graph(&Graph::empty(6).unwrap(), k).unwrap();
        let lp = iota_lift(&p, &tg).unwrap();
        let lq = iota_lift(&q, &tg).unwrap();
        prop_assert_eq!(iota_lift(&p.compose(&q).unwrap(), &tg).unwrap(), lp.compose(&lq).unwrap());
    }

    #[test]
    fn factorization_is_stable_under_relabeling(
        a in 2usize..5, b in 3usize..6, cyc in any::<bool>(), seed in Just((0..30usize).collect::<Vec<_>>()).prop_shuffle()
    ) {
        let second = if cyc { cycle_graph(b).unwrap() } else { path_graph(b).unwrap() };
        let g = cartesian_product(&[path_graph(a).unwrap(), second]).unwrap();
        let n = g.n();
        let map: Vec<usize> = {
            let mut order: Vec<usize> = seed.into_iter().filter(|&v| v < n).collect();
            order.truncate(n);
            order
        };
        let h = g.relabel(&map);
        let fg = prime_factor_decomposition(&g).unwrap();
        let fh = prime_factor_decomposition(&h).unwrap();
        prop_assert!(fg.certifies(&g));
        prop_assert!(fh.certifies(&h));
        let sizes = |f: &tokaut::factorization::Factorization| f.factors.iter().map(Graph::n).collect::<Vec<_>>();
        prop_assert_eq!(sizes(&fg), sizes(&fh));
        for f in &fh.factors {
            prop_assert!(is_prime(f).unwrap());
        }
    }

    #[test]
    fn group_contains_generators_and_orders_divide(p in arb_perm(7), q in arb_perm(7)) {
        let g = schreier_sims(&[p.clone(), q.clone()]).unwrap();
        prop_assert!(g.contains(&p).unwrap());
        prop_assert!(g.contains(&q).unwrap());
        let pq = p.compose(&q).unwrap();
        prop_assert!(g.contains(&pq).unwrap());
        prop_assert_eq!(g.order() % pq.order(), BigUint::ZERO);
        prop_assert_eq!(g.order() % p.order(), BigUint::ZERO);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(15)) {
        let text = g.to_edge_list();
        let h = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(h.n(), g.n());
        prop_assert_eq!(h.edges(), g.edges());
        prop_assert_eq!(h.to_edge_list(), text);
    }
}
