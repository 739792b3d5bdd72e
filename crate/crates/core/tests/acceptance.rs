//! Acceptance suite: one PASS/FAIL line per criterion, exact integer
//! comparisons throughout.
//!
//! Two sub-checks are expected to print FAIL because the stated claim does
//! not hold; for those the suite asserts the independently measured outcome
//! instead, so any change in behaviour still fails the run.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigUint;
use tokaut::autsearch::automorphism_group;
use tokaut::constructions::{
    bipartite_generator_set, complement_automorphism, cube_slices, cube_token_graph, h_partition, iota_lift,
    phi_alpha_bipartite, product_subgroup_generator_set, psi_pi, AlphaFamily,
};
use tokaut::graph::{
    cartesian_product, complete_bipartite, complete_graph, cycle_graph, hypercube, path_graph, BipartiteSpec, Graph,
};
use tokaut::perm::{schreier_sims, Permutation};
use tokaut::token::{all_configs, token_graph};
use tokaut::verify::{verify_bipartite, verify_cube, ScaleGuard};

use common::{binom, brute_automorphism_count, brute_isomorphic};

struct Outcome {
    id: &'static str,
    passed: bool,
    /// A FAIL here is the documented, measured outcome.
    expected_fail: bool,
    detail: String,
}

struct Suite {
    outcomes: Vec<Outcome>,
}

impl Suite {
    fn record(&mut self, id: &'static str, passed: bool, detail: String) {
        self.outcomes.push(Outcome {
            id,
            passed,
            expected_fail: false,
            detail,
        });
    }

    fn record_known_false(&mut self, id: &'static str, passed: bool, detail: String) {
        self.outcomes.push(Outcome {
            id,
            passed,
            expected_fail: true,
            detail,
        });
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn criterion_1(s: &mut Suite) {
    let spec = BipartiteSpec::new(2, 2);
    let tg = token_graph(&complete_bipartite(spec).unwrap(), 2).unwrap();
    let aut = automorphism_group(tg.graph());
    let brute = brute_automorphism_count(tg.graph());
    s.record(
        "1a",
        aut.order() == big(48) && brute == 48 && tg.graph().n() == 6,
        format!("|Aut(F_2(K_2,2))| computed {} brute force {brute}, expected 48", aut.order()),
    );

    let mut gens: Vec<Permutation> = automorphism_group(tg.base())
        .generators()
        .iter()
        .map(|g| iota_lift(g, &tg).unwrap())
        .collect();
    let c = complement_automorphism(&tg).unwrap();
    gens.push(c);
    let sub = schreier_sims(&gens).unwrap();
    let inside = sub.is_subgroup_of(&aut.group).unwrap();
    let sub_order = sub.order();
    // the lifted group is D_4 (order 8) and the complement commutes with it
    assert_eq!(sub_order, big(16), "measured order of <iota(Aut), c> changed");
    s.record_known_false(
        "1b",
        sub_order == big(48) && inside,
        format!("<iota(Aut(K_2,2)), c> has order {sub_order} (claimed 48), contained: {inside}"),
    );

    let (_, full) = bipartite_generator_set(2, 2, 2).unwrap();
    let perms: Vec<Permutation> = full.iter().map(|g| g.perm.clone()).collect();
    let g = schreier_sims(&perms).unwrap();
    s.record(
        "1c",
        g.order() == big(48) && g.is_subgroup_of(&aut.group).unwrap(),
        format!("swaps + lifts + complement generate order {}, expected 48", g.order()),
    );
}

fn bipartite_line(s: &mut Suite, id: &'static str, cases: &[(usize, usize, usize, u64, usize)]) {
    let guard = ScaleGuard::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for &(m, n, k, expect, vertices) in cases {
        let r = verify_bipartite(m, n, k, &guard).unwrap();
        let brute = brute_automorphism_count(token_graph(&complete_bipartite(BipartiteSpec::new(m, n)).unwrap(), k).unwrap().graph());
        let e = expect.to_string();
        let this = r.passed
            && r.computed_order == e
            && r.generated_order == e
            && r.predicted_order == e
            && r.subgroup_certified
            && r.vertex_count == vertices
            && brute == expect;
        ok &= this;
        parts.push(format!(
            "({m},{n},{k}) |V|={} computed {} generated {} predicted {} brute {brute}",
            r.vertex_count, r.computed_order, r.generated_order, r.predicted_order
        ));
        if let Some(&outside) = r.checks.get("complement_outside_swaps_and_lifts") {
            ok &= outside;
            parts.push(format!("complement outside swaps and lifts: {outside}"));
        }
    }
    s.record(id, ok, parts.join("; "));
}

fn criterion_4_star(s: &mut Suite) {
    let tg = token_graph(&complete_bipartite(BipartiteSpec::new(1, 3)).unwrap(), 2).unwrap();
    let c6 = cycle_graph(6).unwrap();
    let iso = brute_isomorphic(tg.graph(), &c6);
    let count = brute_automorphism_count(&c6);
    let r = verify_bipartite(1, 3, 2, &ScaleGuard::default()).unwrap();
    s.record(
        "4b",
        iso && count == 12 && r.passed && r.computed_order == "12",
        format!("F_2(K_1,3) = C_6 by brute force: {iso}; |Aut(C_6)| = {count}; computed {}", r.computed_order),
    );
}

fn criterion_5(s: &mut Suite) {
    let guard = ScaleGuard::default();
    for (r, expect, vertices, id) in [(3, 192u64, 28, "5a"), (4, 3072, 120, "5b")] {
        let rep = verify_cube(r, &guard).unwrap();
        let e = expect.to_string();
        s.record(
            id,
            rep.passed && rep.computed_order == e && rep.generated_order == e && rep.subgroup_certified && rep.vertex_count == vertices,
            format!(
                "F_2(Q_{r}) |V|={} computed {} generated {} predicted {}",
                rep.vertex_count, rep.computed_order, rep.generated_order, rep.predicted_order
            ),
        );
    }
}

fn criterion_6(s: &mut Suite) {
    let k2 = complete_graph(2).unwrap();
    let cases: Vec<(&str, Vec<Graph>)> = vec![
        ("K_2□P_3", vec![k2.clone(), path_graph(3).unwrap()]),
        ("K_2□C_5", vec![k2.clone(), cycle_graph(5).unwrap()]),
        ("K_2□K_2□K_2", vec![k2.clone(), k2.clone(), k2]),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, factors) in cases {
        let base = cartesian_product(&factors).unwrap();
        let base_order = brute_automorphism_count(&base);
        assert_eq!(automorphism_group(&base).order(), big(base_order));
        let (tg, gens) = product_subgroup_generator_set(&factors).unwrap();
        let perms: Vec<Permutation> = gens.iter().map(|g| g.perm.clone()).collect();
        let sub = schreier_sims(&perms).unwrap();
        let aut = automorphism_group(tg.graph());
        let contained = sub.is_subgroup_of(&aut.group).unwrap();
        let expect = big(base_order << (factors.len() - 1));
        let lagrange = aut.order() % sub.order() == BigUint::ZERO;
        let whole = aut.order() == sub.order();
        ok &= contained && sub.order() == expect && lagrange;
        parts.push(format!(
            "{name}: subgroup {} (expected {expect}) in {} contained {contained} divides {lagrange} whole group {whole}",
            sub.order(),
            aut.order()
        ));
    }
    s.record("6", ok, parts.join("; "));
}

fn criterion_7(s: &mut Suite) {
    // (i) degree formula and (ii) H_i distances, all m+n <= 9
    let mut degree_ok = true;
    let mut dist_ok = true;
    let mut instances = 0;
    for m in 1..=8 {
        for n in m..=(9 - m) {
            let spec = BipartiteSpec::new(m, n);
            let base = complete_bipartite(spec).unwrap();
            for k in 1..m + n {
                instances += 1;
                let tg = token_graph(&base, k).unwrap();
                for (rank, a) in tg.configs().iter().enumerate() {
                    let j = a.members().iter().filter(|&&v| v < m).count();
                    let formula = j * (n + j - k) + (k - j) * (m - j);
                    degree_ok &= tg.graph().degree(rank) == formula;
                }
                let parts = h_partition(spec, k).unwrap();
                for (i, p) in parts.iter().enumerate() {
                    dist_ok &= p.len() == binom(m, i) * binom(n, k - i);
                }
                // BFS from the lowest nonempty H_j; H_0 is empty when k > n
                let low = parts.iter().position(|p| !p.is_empty()).unwrap();
                let mut dist = vec![usize::MAX; tg.graph().n()];
                let mut queue: std::collections::VecDeque<usize> = parts[low].iter().copied().collect();
                for &v in &parts[low] {
                    dist[v] = 0;
                }
                while let Some(u) = queue.pop_front() {
                    for v in tg.graph().neighbors(u) {
                        if dist[v] == usize::MAX {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                for (i, p) in parts.iter().enumerate() {
                    dist_ok &= p.iter().all(|&v| dist[v] + low == i);
                }
            }
        }
    }
    s.record("7i", degree_ok, format!("degree formula on {instances} token graphs with m+n <= 9"));
    s.record("7ii", dist_ok, format!("H_i sizes and distance to lowest H_j on {instances} token graphs"));

    // (iii) slices
    let mut slice_ok = true;
    let mut checked = 0;
    for r in 3..=4 {
        let tg = cube_token_graph(r).unwrap();
        let smaller = cube_token_graph(r - 1).unwrap();
        let q = hypercube(2 * (r - 1)).unwrap();
        for i in 1..=r {
            let sl = cube_slices(r, i).unwrap();
            let half = binom(1 << (r - 1), 2);
            slice_ok &= sl.zero.len() == half && sl.one.len() == half && sl.delta.len() == 1 << (2 * (r - 1));
            // pair classification recomputed from the bits directly
            for (rank, a) in all_configs(1 << r, 2).iter().enumerate() {
                let bit = |v: usize| v >> (r - i) & 1;
                let (x, y) = (bit(a.members()[0]), bit(a.members()[1]));
                let class = if x != y { &sl.delta } else if x == 0 { &sl.zero } else { &sl.one };
                slice_ok &= class.binary_search(&rank).is_ok();
            }
            let g0 = tg.graph().induced_subgraph(&sl.zero).unwrap();
            let gd = tg.graph().induced_subgraph(&sl.delta).unwrap();
            slice_ok &= tokaut::graph::is_isomorphic(&g0, smaller.graph()).is_some_and(|m| is_iso_map(&g0, smaller.graph(), &m));
            slice_ok &= tokaut::graph::is_isomorphic(&gd, &q).is_some_and(|m| is_iso_map(&gd, &q, &m));
            checked += 1;
        }
    }
    s.record("7iii", slice_ok, format!("slice isomorphisms on {checked} (r,i) pairs, maps edge-checked"));

    // (iv) composition laws
    let mut compose_ok = true;
    let mut conj_ok = true;
    let mut lit_pairs = (0, 0);
    let mut corrected_ok = true;
    let mut psi_commute_ok = true;
    for (n, k) in [(3, 2), (4, 3)] {
        let spec = BipartiteSpec::new(2, n);
        let tg = token_graph(&complete_bipartite(spec).unwrap(), k).unwrap();
        let fams = all_families(n, k);
        let phis: Vec<Permutation> = fams.iter().map(|a| phi_alpha_bipartite(spec, k, a).unwrap()).collect();
        for (i, a) in fams.iter().enumerate() {
            compose_ok &= tg.graph().is_automorphism(phis[i].images());
            for (j, b) in fams.iter().enumerate() {
                let ab = a.symmetric_difference(b).unwrap();
                compose_ok &= phis[i].compose(&phis[j]).unwrap() == phi_alpha_bipartite(spec, k, &ab).unwrap();
            }
        }
        let perms = y_permutations(n);
        let psis: Vec<Permutation> = perms.iter().map(|p| psi_pi(spec, k, p).unwrap()).collect();
        for (p, psi) in perms.iter().zip(&psis) {
            for (a, phi) in fams.iter().zip(&phis) {
                let lhs = psi.compose(phi).unwrap().compose(&psi.inverse()).unwrap();
                conj_ok &= lhs == phi_alpha_bipartite(spec, k, &a.mapped(p).unwrap()).unwrap();
            }
        }
        if 2 * k == n + 2 {
            let c = complement_automorphism(&tg).unwrap();
            for (a, phi) in fams.iter().zip(&phis) {
                let commutes = c.compose(phi).unwrap() == phi.compose(&c).unwrap();
                lit_pairs.0 += usize::from(commutes);
                lit_pairs.1 += 1;
                let conj = c.compose(phi).unwrap().compose(&c).unwrap();
                corrected_ok &= conj == phi_alpha_bipartite(spec, k, &a.complemented_in_y().unwrap()).unwrap();
            }
            for psi in &psis {
                psi_commute_ok &= c.compose(psi).unwrap() == psi.compose(&c).unwrap();
            }
        }
    }
    s.record("7iv-a", compose_ok, "phi_a phi_b = phi_(a xor b), all pairs at (n,k) = (3,2), (4,3)".into());
    s.record("7iv-b", conj_ok, "psi phi_a psi^-1 = phi_pi(a), all pi and a at (3,2), (4,3)".into());
    s.record("7iv-c", psi_commute_ok, "complement commutes with every psi_pi at (4,3)".into());
    // 8 of 64 families at (4,3) are closed under complement in Y
    assert_eq!(lit_pairs, (8, 64), "measured complement commutation count changed");
    s.record_known_false(
        "7iv-d",
        lit_pairs.0 == lit_pairs.1,
        format!(
            "complement commutes with phi_a for {} of {} families at (4,3); holds exactly when a is closed under S -> Y minus S",
            lit_pairs.0, lit_pairs.1
        ),
    );
    s.record(
        "7iv-e",
        corrected_ok,
        "c phi_a c = phi_a' with a' = {Y minus S : S in a}, all a at (4,3)".into(),
    );
}

fn is_iso_map(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    distinct.len() == g.n() && g.edge_count() == h.edge_count() && g.edges().iter().all(|&(u, v)| h.has_edge(map[u], map[v]))
}

fn all_families(n: usize, k: usize) -> Vec<AlphaFamily> {
    let ys: Vec<usize> = (2..n + 2).collect();
    let sets: Vec<Vec<usize>> = all_configs(n, k - 1)
        .iter()
        .map(|c| c.members().iter().map(|&i| ys[i]).collect())
        .collect();
    (0u32..1 << sets.len())
        .map(|mask| {
            AlphaFamily::bipartite(n, k, (0..sets.len()).filter(|&i| mask >> i & 1 == 1).map(|i| sets[i].clone())).unwrap()
        })
        .collect()
}

fn y_permutations(n: usize) -> Vec<Permutation> {
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if i == cur.len() {
            let images = [0, 1].into_iter().chain(cur.iter().map(|&v| v + 2)).collect();
            out.push(Permutation::from_images(images).unwrap());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    let mut out = Vec::new();
    rec(0, &mut (0..n).collect(), &mut out);
    out
}

fn criterion_8(s: &mut Suite) {
    let mut fixtures: Vec<(String, Graph)> = Vec::new();
    for n in 1..=5 {
        fixtures.push((format!("K_{n}"), complete_graph(n).unwrap()));
    }
    for n in 3..=8 {
        fixtures.push((format!("C_{n}"), cycle_graph(n).unwrap()));
    }
    for m in 1..=3 {
        for n in m..=(7 - m) {
            fixtures.push((format!("K_{m},{n}"), complete_bipartite(BipartiteSpec::new(m, n)).unwrap()));
        }
    }
    fixtures.push(("Q_3".into(), hypercube(3).unwrap()));
    fixtures.push((
        "F_2(K_2,3)".into(),
        token_graph(&complete_bipartite(BipartiteSpec::new(2, 3)).unwrap(), 2).unwrap().graph().clone(),
    ));
    let mut ok = true;
    let mut bad = Vec::new();
    for (name, g) in &fixtures {
        let computed = automorphism_group(g).order();
        let brute = brute_automorphism_count(g);
        assert!(brute <= 100_000);
        // relabeling must not change the order
        let n = g.n();
        let shifted: Vec<usize> = (0..n).map(|v| (v * 5 + 2) % n).collect();
        let relabeled = if tokaut_gcd(5, n) == 1 { automorphism_group(&g.relabel(&shifted)).order() } else { computed.clone() };
        if computed != big(brute) || relabeled != computed {
            ok = false;
            bad.push(format!("{name}: search {computed} brute {brute}"));
        }
    }
    s.record(
        "8",
        ok,
        if ok {
            format!("{} fixtures agree with brute-force counts", fixtures.len())
        } else {
            bad.join("; ")
        },
    );
}

fn tokaut_gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        tokaut_gcd(b, a % b)
    }
}

fn main() {
    let started = Instant::now();
    let mut s = Suite { outcomes: Vec::new() };
    criterion_1(&mut s);
    bipartite_line(&mut s, "2", &[(2, 3, 2, 48, 10), (2, 4, 2, 384, 15)]);
    bipartite_line(&mut s, "3", &[(2, 4, 3, 3072, 20)]);
    bipartite_line(&mut s, "4a", &[(3, 4, 2, 144, 21), (3, 3, 2, 72, 15), (3, 3, 3, 144, 20), (1, 3, 2, 12, 6)]);
    criterion_4_star(&mut s);
    criterion_5(&mut s);
    criterion_6(&mut s);
    criterion_7(&mut s);
    criterion_8(&mut s);

    let mut unexpected = 0;
    for o in &s.outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let note = if o.expected_fail && !o.passed { " [claim does not hold; measured value asserted]" } else { "" };
        println!("{tag} criterion {}: {}{note}", o.id, o.detail);
        if o.passed == o.expected_fail {
            unexpected += 1;
        }
    }
    println!("acceptance finished in {:.1} s", started.elapsed().as_secs_f64());
    if unexpected > 0 {
        eprintln!("{unexpected} criteria deviated from their expected outcome");
        std::process::exit(1);
    }
}
