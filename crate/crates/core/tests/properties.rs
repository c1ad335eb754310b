use std::collections::BTreeSet;

use proptest::prelude::*;

use cyclepack::collection::Cycle;
use cyclepack::generators::{gen_complete, gen_complete_bipartite, gen_gnp, gen_petersen};
use cyclepack::{
    exact_pack, minimalize, pack, pack_with_minimalization, verify_certificate, CycleCollection, Graph,
    OracleBudget, OracleOutcome, PackConfig, PackingCertificate, Potential, VertexId,
};

/// Graph on `0..n` whose edges are picked by `mask` over the pairs `(u, v)`,
/// `u < v`, in lexicographic order.
fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        let top = if pairs == 0 { 1 } else { 1u64 << pairs };
        (Just(n), 0..top).prop_map(|(n, mask)| graph_from_mask(n, mask))
    })
}

/// All cycles of `g` as vertex sequences, each listed once.
fn all_cycles(g: &Graph) -> Vec<Vec<VertexId>> {
    fn extend(g: &Graph, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let (start, last) = (path[0], *path.last().unwrap());
        if path.len() >= 3 && g.has_edge(last, start) && path[1] < last {
            out.push(path.clone());
        }
        for &u in g.neighbors(last) {
            if u > start && !path.contains(&u) {
                path.push(u);
                extend(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in g.vertices() {
        extend(g, &mut vec![s], &mut out);
    }
    out
}

/// Independent brute force: choose `k` pairwise disjoint cycles of order at
/// least `r` from the full cycle list.
fn brute_force_packs(g: &Graph, k: usize, r: usize) -> bool {
    fn choose(cands: &[BTreeSet<VertexId>], from: usize, used: &BTreeSet<VertexId>, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        (from..cands.len()).any(|i| {
            cands[i].is_disjoint(used) && {
                let next: BTreeSet<VertexId> = used.union(&cands[i]).copied().collect();
                choose(cands, i + 1, &next, k - 1)
            }
        })
    }
    let cands: Vec<BTreeSet<VertexId>> = all_cycles(g)
        .into_iter()
        .filter(|c| c.len() >= r)
        .map(|c| c.into_iter().collect())
        .collect();
    choose(&cands, 0, &BTreeSet::new(), k)
}

fn lowers_every_move(g: &Graph) -> bool {
    let d = g.stats().unwrap().avg_degree;
    let deletions = g.n() == 1 || g.vertices().all(|v| g.delete_vertex(v).unwrap().stats().unwrap().avg_degree < d);
    let contractions = g.edges().all(|(u, v)| g.contract_edge(u, v).unwrap().stats().unwrap().avg_degree < d);
    deletions && contractions
}

#[test]
fn seed_is_valid_on_every_graph_up_to_six_vertices() {
    for n in 1..=6 {
        let pairs = n * (n - 1) / 2;
        for mask in 0..1u64 << pairs {
            let g = graph_from_mask(n, mask);
            let c = CycleCollection::seed(&g, 3).unwrap();
            assert!(c.validate(&g, true).is_valid());
            assert_eq!(c.potential(), Potential(vec![0, 0, n]));
        }
    }
}

#[test]
fn oracle_examples() {
    let b = OracleBudget::default();
    assert!(matches!(exact_pack(&gen_complete(6).unwrap(), 2, 3, b), OracleOutcome::Yes(_)));
    assert_eq!(exact_pack(&gen_complete_bipartite(6, 3).unwrap(), 2, 3, b), OracleOutcome::No);
    let OracleOutcome::Yes(cert) = exact_pack(&gen_petersen(), 2, 5, b) else {
        panic!("Petersen graph holds two disjoint pentagons");
    };
    assert!(verify_certificate(&gen_petersen(), &cert));
}

#[test]
fn engine_examples() {
    let k9 = gen_complete(9).unwrap();
    let res = pack(&k9, &PackConfig::new(3, 3).unwrap()).unwrap();
    assert!(verify_certificate(&k9, res.certificate().unwrap()));
    let k63 = gen_complete_bipartite(6, 3).unwrap();
    assert!(!pack(&k63, &PackConfig::new(2, 3).unwrap()).unwrap().is_success());
}

#[test]
fn oracle_matches_cycle_enumeration_on_graphs_with_five_vertices() {
    for mask in 0..1u64 << 10 {
        let g = graph_from_mask(5, mask);
        for (k, r) in [(1, 3), (1, 4), (1, 5), (2, 3)] {
            let oracle = matches!(exact_pack(&g, k, r, OracleBudget::default()), OracleOutcome::Yes(_));
            assert_eq!(oracle, brute_force_packs(&g, k, r), "mask {mask} k {k} r {r}");
        }
    }
}

#[test]
fn gnp_is_deterministic() {
    assert_eq!(gen_gnp(30, 0.4, 9).unwrap(), gen_gnp(30, 0.4, 9).unwrap());
    assert_ne!(gen_gnp(30, 0.4, 9).unwrap(), gen_gnp(30, 0.4, 10).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn contraction_removes_one_plus_common_edges(g in small_graph(8)) {
        for (u, v) in g.edges() {
            let common = g.common_neighbors(u, v).unwrap().len();
            let h = g.contract_edge(u, v).unwrap();
            prop_assert_eq!(h.m(), g.m() - 1 - common);
            prop_assert_eq!(h.n(), g.n() - 1);
            prop_assert!(h.check_invariants().is_ok());
        }
        for v in g.vertices() {
            prop_assert_eq!(g.delete_vertex(v).unwrap().m(), g.m() - g.degree(v));
        }
    }

    #[test]
    fn oracle_matches_cycle_enumeration(g in small_graph(8), k in 1usize..=3, r in 3usize..=6) {
        let answer = exact_pack(&g, k, r, OracleBudget::default());
        prop_assert_eq!(matches!(answer, OracleOutcome::Yes(_)), brute_force_packs(&g, k, r));
        if let OracleOutcome::Yes(cert) = answer {
            prop_assert!(verify_certificate(&g, &cert));
        }
    }

    #[test]
    fn edge_list_round_trips(g in small_graph(9)) {
        prop_assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn potential_order_is_lexicographic(a in proptest::collection::vec(0usize..4, 4), b in proptest::collection::vec(0usize..4, 4)) {
        let (pa, pb) = (Potential(a.clone()), Potential(b.clone()));
        prop_assert_eq!(pa.cmp(&pb), a.cmp(&b));
        prop_assert_eq!(pa == pb, a == b);
    }

    #[test]
    fn minimalized_graphs_are_minimal(g in small_graph(8)) {
        let res = minimalize(&g).unwrap();
        prop_assert!(lowers_every_move(&res.minor));
        prop_assert!(res.final_d >= res.original_d);
        prop_assert_eq!(res.history.replay(&g).unwrap(), res.minor.clone());
        prop_assert!(res.history.check_branch_sets(&g).is_ok());
    }

    #[test]
    fn engine_is_sound_and_monotone(g in small_graph(9), k in 1usize..=3, r in 3usize..=5) {
        let cfg = PackConfig::new(k, r).unwrap();
        let res = pack(&g, &cfg).unwrap();
        prop_assert!(res.trace_is_monotone());
        if let Some(cert) = res.certificate() {
            prop_assert!(verify_certificate(&g, cert));
            prop_assert!(brute_force_packs(&g, k, r));
        }
        let (_, lifted) = pack_with_minimalization(&g, &cfg).unwrap();
        if let Some(cert) = lifted.certificate() {
            prop_assert!(verify_certificate(&g, cert));
        }
    }

    #[test]
    fn mutated_certificates_are_rejected(n in 9usize..=14, seed in 0u64..1000, which in 0usize..64) {
        let g = gen_complete(n).unwrap();
        let res = pack(&g, &PackConfig::new(3, 3).unwrap()).unwrap();
        let cert = res.certificate().unwrap().clone();
        prop_assert!(verify_certificate(&g, &cert));
        let c = which % cert.cycles.len();
        let pos = (seed as usize) % cert.cycles[c].len();
        // share a vertex with another cycle
        let mut shared = cert.clone();
        let other = cert.cycles[(c + 1) % cert.cycles.len()][0];
        shared.cycles[c][pos] = other;
        prop_assert!(!verify_certificate(&g, &shared));
        // leave the graph
        let mut foreign = cert.clone();
        foreign.cycles[c][pos] = 1000;
        prop_assert!(!verify_certificate(&g, &foreign));
        // drop a vertex below the order bound
        let mut short = PackingCertificate { r: cert.cycles[c].len(), ..cert.clone() };
        short.cycles[c].remove(pos);
        prop_assert!(!verify_certificate(&g, &short));
    }

    #[test]
    fn collection_json_round_trips(g in small_graph(8)) {
        let res = pack(&g, &PackConfig::new(2, 4).unwrap()).unwrap();
        let mut c = CycleCollection::seed(&g, 4).unwrap();
        for entry in &res.trace {
            if entry.potential_after.is_none() {
                break;
            }
            for gone in &entry.removed {
                c.remove(gone);
            }
            let covered: BTreeSet<VertexId> = entry.added.iter().flat_map(|a| a.vertices().to_vec()).collect();
            for a in &entry.added {
                c.insert(a.clone()).unwrap();
            }
            for gone in &entry.removed {
                for &v in gone.vertices() {
                    if !covered.contains(&v) {
                        c.insert(Cycle::new(vec![v]).unwrap()).unwrap();
                    }
                }
            }
            prop_assert_eq!(Some(c.potential()), entry.potential_after.clone());
            prop_assert!(c.validate(&g, true).is_valid());
        }
        prop_assert_eq!(CycleCollection::from_json(&c.to_json()).unwrap(), c);
    }
}
