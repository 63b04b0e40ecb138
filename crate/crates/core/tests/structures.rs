use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcolor::digraph::{Digraph, TupleIndexer, DEFAULT_POWER_BUDGET};
use hcolor::generate::gen_random_special_tree;
use hcolor::minpath::{
    common_onto_minimal_path, default_max_len, is_onto_path_hom, path_onto_hom, sample_minimal_path, OrientedPath,
};
use hcolor::spectree::{compile, recover_top_bottom, SpecialTree};
use hcolor::vset::VertexSet;

fn random_oriented_tree(seed: u64, n: usize) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|v| {
            let u = rng.gen_range(0..v);
            if rng.gen_bool(0.5) {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    Digraph::new(n, edges).unwrap()
}

fn random_digraph(seed: u64, n: usize, p: f64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).unwrap()
}

fn small_tree(seed: u64) -> SpecialTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, h) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
    compile(&gen_random_special_tree(seed, a, b, h, h + 2).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oriented_trees_are_balanced(seed in any::<u64>(), n in 1usize..30) {
        let g = random_oriented_tree(seed, n);
        let lv = g.compute_levels().unwrap();
        for &(u, v) in g.edges() {
            prop_assert_eq!(lv.level(v), lv.level(u) + 1);
        }
        prop_assert_eq!((0..n).map(|v| lv.level(v)).min(), Some(0));
    }

    #[test]
    fn power_edge_counts(seed in any::<u64>(), n in 1usize..5, k in 1usize..4) {
        let g = random_digraph(seed, n, 0.4);
        let p = g.direct_power(k, DEFAULT_POWER_BUDGET).unwrap();
        prop_assert_eq!(p.edge_count(), g.edge_count().pow(k as u32));
        prop_assert_eq!(p.vertex_count(), n.pow(k as u32));
    }

    #[test]
    fn diagonal_component_is_union_of_components(seed in any::<u64>(), n in 1usize..5, k in 1usize..4) {
        let g = random_digraph(seed, n, 0.3);
        let idx = TupleIndexer::new(n, k, DEFAULT_POWER_BUDGET).unwrap();
        let delta = g.diagonal_component(k, DEFAULT_POWER_BUDGET).unwrap();
        for v in 0..n {
            prop_assert!(delta.contains(idx.encode(&vec![v; k])));
        }
        let p = g.direct_power(k, DEFAULT_POWER_BUDGET).unwrap();
        for comp in p.connected_components() {
            let inside = comp.iter().filter(|&t| delta.contains(t)).count();
            prop_assert!(inside == 0 || inside == comp.len());
        }
    }

    #[test]
    fn top_and_bottom_powers_in_diagonal_component(seed in any::<u64>()) {
        let tree = small_tree(seed);
        let hs = tree.vertex_count();
        for k in 1..=3 {
            let delta = tree.digraph.diagonal_component(k, DEFAULT_POWER_BUDGET).unwrap();
            for side in [tree.a_set().to_vec(), tree.b_set().to_vec()] {
                let idx = TupleIndexer::new(hs, k, DEFAULT_POWER_BUDGET).unwrap();
                let mut t = vec![0; k];
                for code in 0..side.len().pow(k as u32) {
                    let mut c = code;
                    for slot in t.iter_mut() {
                        *slot = side[c % side.len()];
                        c /= side.len();
                    }
                    prop_assert!(delta.contains(idx.encode(&t)));
                }
            }
        }
    }

    #[test]
    fn minimal_paths_dominate_subpaths(seed in any::<u64>(), h in 1usize..6, extra in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample_minimal_path(&mut rng, h, h + extra).unwrap();
        prop_assert!(p.is_minimal());
        prop_assert_eq!(p.net_length(), p.height() as i64);
        let d = p.directions();
        for i in 0..d.len() {
            for j in i + 1..=d.len() {
                if (i, j) == (0, d.len()) {
                    continue;
                }
                let net: i64 = d[i..j].iter().map(|&f| if f { 1 } else { -1 }).sum();
                prop_assert!(net.abs() < p.net_length());
            }
        }
    }

    #[test]
    fn onto_hom_matches_brute_force(q in proptest::collection::vec(any::<bool>(), 0..8), p in proptest::collection::vec(any::<bool>(), 0..6)) {
        let (q, p) = (OrientedPath::new(q), OrientedPath::new(p));
        let found = path_onto_hom(&q, &p);
        if let Some(m) = &found {
            prop_assert!(is_onto_path_hom(&q, &p, m));
        }
        let positions = p.vertex_count();
        let mut map = vec![0usize; q.vertex_count()];
        let mut exists = false;
        'all: loop {
            if is_onto_path_hom(&q, &p, &map) {
                exists = true;
                break;
            }
            for slot in map.iter_mut() {
                *slot += 1;
                if *slot < positions {
                    continue 'all;
                }
                *slot = 0;
            }
            break;
        }
        prop_assert_eq!(found.is_some(), exists);
    }

    #[test]
    fn recover_inverts_compile(seed in any::<u64>()) {
        let tree = small_tree(seed);
        let tb = recover_top_bottom(&tree.digraph, tree.height()).unwrap();
        prop_assert_eq!(&tb.a, &tree.a_set());
        prop_assert_eq!(&tb.b, &tree.b_set());
        let got: BTreeSet<_> = tb.e.iter().copied().collect();
        let want: BTreeSet<_> = tree.spec.edges.iter().map(|e| (e.a, tree.spec.a_count + e.b)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn preceq_respects_distance(seed in any::<u64>()) {
        let tree = small_tree(seed);
        let t = tree.template_vertex_count();
        for o in 0..t {
            let order = tree.order_from(o);
            for u in 0..t {
                for v in 0..t {
                    if order.preceq(u, v) {
                        prop_assert!(tree.dist_e(o, u) <= tree.dist_e(o, v));
                    }
                }
            }
        }
    }
}

#[test]
fn common_paths_on_random_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let h = rng.gen_range(1..=4);
        let family: Vec<OrientedPath> = (0..rng.gen_range(1..=3))
            .map(|_| sample_minimal_path(&mut rng, h, h + 4).unwrap())
            .collect();
        let q = common_onto_minimal_path(&family, default_max_len(&family)).unwrap();
        assert!(q.is_minimal());
        assert_eq!(q.height(), h);
        for p in &family {
            assert!(path_onto_hom(&q, p).is_some());
        }
    }
}

#[test]
fn neighbourhoods_exhaustive() {
    let mut checked = 0;
    for seed in 0..60 {
        let tree = small_tree(seed);
        if tree.template_vertex_count() > 12 {
            continue;
        }
        let n = tree.vertex_count();
        let a = tree.a_set().to_vec();
        let (full_a, full_b) = (tree.a_set(), tree.b_set());
        for mask in 1u32..(1 << a.len()) {
            let c = VertexSet::from_iter_in(n, (0..a.len()).filter(|i| mask >> i & 1 == 1).map(|i| a[i]));
            let mut reached_all = false;
            for k in 0..=2 * tree.template_vertex_count() {
                let e = tree.e_neighborhood(&c, k).unwrap();
                assert_eq!(e, tree.e_neighborhood_closed_form(&c, k).unwrap());
                assert!(e.is_subset(if k % 2 == 0 { &full_a } else { &full_b }));
                // monotone in C
                for extra in a.iter().copied() {
                    let mut bigger = c.clone();
                    bigger.insert(extra);
                    assert!(e.is_subset(&tree.e_neighborhood(&bigger, k).unwrap()));
                }
                if k % 2 == 0 && e == full_a && tree.e_neighborhood(&c, k + 1).unwrap() == full_b {
                    reached_all = true;
                }
            }
            assert!(reached_all);
            checked += 1;
        }
    }
    assert!(checked > 100);
}
