use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hcolor::algebra::{binary_polymer, expr_polymer, is_special, make_special, star, DEFAULT_ARITY_BUDGET};
use hcolor::classify::{classify_digraph, classify_special_tree, compute_core, SearchStatus, TaylorStatus, Verdict};
use hcolor::digraph::Digraph;
use hcolor::generate::random_corpus;
use hcolor::homsolver::solve_hom;
use hcolor::polysearch::{find_wnu, Budget};
use hcolor::spectree::compile;

const NODES: u64 = 1 << 22;

fn random_digraph(seed: u64, n: usize, p: f64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Digraph::new(n, edges).unwrap()
}

fn relabel(g: &Digraph, perm: &[usize]) -> Digraph {
    Digraph::new(g.vertex_count(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v])).collect::<Vec<_>>()).unwrap()
}

fn is_bijection(f: &[usize]) -> bool {
    let mut seen = vec![false; f.len()];
    f.iter().all(|&x| x < f.len() && !std::mem::replace(&mut seen[x], true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn core_is_idempotent(seed in any::<u64>(), n in 1usize..8) {
        let g = random_digraph(seed, n, 0.3);
        let c = compute_core(&g, NODES).unwrap();
        prop_assert!(c.verify(&g));
        let cc = compute_core(&c.core, NODES).unwrap();
        prop_assert_eq!(cc.core.vertex_count(), c.core.vertex_count());
        prop_assert!(is_bijection(&cc.retraction));
    }

    #[test]
    fn cores_are_unique_up_to_isomorphism(seed in any::<u64>(), n in 1usize..8) {
        let g = random_digraph(seed, n, 0.3);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let c1 = compute_core(&g, NODES).unwrap().core;
        let c2 = compute_core(&relabel(&g, &perm), NODES).unwrap().core;
        prop_assert_eq!(c1.vertex_count(), c2.vertex_count());
        prop_assert_eq!(c1.edge_count(), c2.edge_count());
        let there = solve_hom(&c1, &c2, &[], None).unwrap().unwrap();
        let back = solve_hom(&c2, &c1, &[], None).unwrap().unwrap();
        prop_assert!(is_bijection(&there) && is_bijection(&back));
    }

    #[test]
    fn np_complete_excludes_wnus(seed in any::<u64>(), n in 2usize..6) {
        let g = random_digraph(seed, n, 0.5);
        let r = classify_digraph(&g, false, Budget::default());
        prop_assert!(r.verdict != Verdict::BoundedWidth);
        if r.verdict == Verdict::NpComplete {
            prop_assert!(r.is_core);
            prop_assert_eq!(r.taylor.status, TaylorStatus::Refuted);
            for w in &r.width_certificates {
                prop_assert!(w.status != SearchStatus::Found);
            }
            prop_assert!(find_wnu(&g, 3, Budget::default()).unwrap().is_none());
        }
    }
}

#[test]
fn special_polymers_of_corpus_wnus() {
    let mut checked = 0;
    for spec in random_corpus(300, 30, 20) {
        let h = compile(&spec).unwrap().digraph;
        let Some(w) = find_wnu(&h, 3, Budget::default()).unwrap() else {
            continue;
        };
        let circ = binary_polymer(&w).unwrap();
        assert!(circ.is_polymorphism(&h));
        let s = make_special(&w).unwrap();
        assert!(is_special(&s.polymer));
        assert!(s.polymer.is_polymorphism(&h));
        if let Ok(e) = s.expr(DEFAULT_ARITY_BUDGET) {
            assert_eq!(expr_polymer(&e), s.polymer);
        }
        let st = star(&s.polymer, h.vertex_count());
        assert!(st.is_polymorphism(&h));
        assert!(st.is_idempotent());
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn corpus_verdicts_agree_with_siggers_search() {
    for spec in random_corpus(301, 20, 20) {
        let r = classify_special_tree(&spec, Budget::default());
        assert_eq!(r.format_version, 1);
        match r.taylor.status {
            TaylorStatus::SiggersFound => assert_eq!(r.verdict, Verdict::BoundedWidth),
            TaylorStatus::Refuted => assert_eq!(r.verdict, Verdict::NpComplete),
            TaylorStatus::BudgetExceeded => assert_eq!(r.verdict, Verdict::Undetermined),
        }
        assert!(r.core_size <= r.input.vertices);
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for key in ["input", "is_core", "core_size", "taylor", "width_certificates", "verdict", "timings", "seeds"] {
            assert!(keys.contains(&key), "missing {key}");
        }
        let verdict = serde_json::to_value(r.verdict).unwrap();
        assert!(["NP_COMPLETE", "BOUNDED_WIDTH", "UNDETERMINED"].contains(&verdict.as_str().unwrap()));
        let again = classify_special_tree(&spec, Budget::default());
        assert_eq!(r.without_timings(), again.without_timings());
    }
}
