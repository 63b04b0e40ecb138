//! Seeded random special trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::minpath::sample_minimal_path;
use crate::spectree::{SpecialTreeSpec, TemplateEdge};

/// A uniform spanning tree of `K_{a,b}` (Aldous–Broder walk), edges in discovery order.
pub fn random_bipartite_tree<R: Rng>(rng: &mut R, a_count: usize, b_count: usize) -> Vec<(usize, usize)> {
    let total = a_count + b_count;
    let mut seen = vec![false; total];
    let mut cur = rng.gen_range(0..total);
    seen[cur] = true;
    let mut left = total - 1;
    let mut edges = Vec::with_capacity(left);
    while left > 0 {
        let next = if cur < a_count {
            a_count + rng.gen_range(0..b_count)
        } else {
            rng.gen_range(0..a_count)
        };
        if !seen[next] {
            seen[next] = true;
            left -= 1;
            let (a, b) = if cur < a_count { (cur, next) } else { (next, cur) };
            edges.push((a, b - a_count));
        }
        cur = next;
    }
    edges
}

/// A random special tree: uniform template tree, each edge replaced by a
/// uniform minimal path of height `h` and length at most `max_path_len`.
pub fn gen_random_special_tree(
    seed: u64,
    a_count: usize,
    b_count: usize,
    h: usize,
    max_path_len: usize,
) -> Result<SpecialTreeSpec> {
    if a_count == 0 || b_count == 0 || h == 0 {
        return Err(Error::InvalidParams("a_count, b_count and h must be positive".into()));
    }
    if max_path_len < h {
        return Err(Error::InvalidParams(format!("max_path_len {max_path_len} is below the height {h}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let template = random_bipartite_tree(&mut rng, a_count, b_count);
    let edges = template
        .into_iter()
        .map(|(a, b)| {
            Ok(TemplateEdge {
                a,
                b,
                path: sample_minimal_path(&mut rng, h, max_path_len)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = SpecialTreeSpec {
        a_count,
        b_count,
        height: h,
        edges,
    };
    spec.validate()?;
    Ok(spec)
}

/// Parameters of the `i`-th tree in a seeded corpus: small templates and heights,
/// paths at most two edges longer than the height.
pub fn corpus_params(seed: u64, i: usize) -> (u64, usize, usize, usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let a = rng.gen_range(1..=3);
    let b = rng.gen_range(1..=3);
    let h = rng.gen_range(1..=3);
    (rng.gen(), a, b, h, h + 2)
}

/// `count` seeded random special trees with at most `max_vertices` vertices each.
pub fn random_corpus(seed: u64, count: usize, max_vertices: usize) -> Vec<SpecialTreeSpec> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        let (s, a, b, h, len) = corpus_params(seed, i);
        i += 1;
        if let Ok(spec) = gen_random_special_tree(s, a, b, h, len) {
            if spec.vertex_total() <= max_vertices {
                out.push(spec);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectree::compile;
    use proptest::prelude::*;

    #[test]
    fn single_edge() {
        for seed in 0..5 {
            let s = gen_random_special_tree(seed, 1, 1, 1, 4).unwrap();
            assert_eq!(s.to_stree(), "stree 1 1 1 1\n0 0 1\n");
        }
    }

    #[test]
    fn seed_42_is_valid_and_stable() {
        let s = gen_random_special_tree(42, 3, 3, 3, 7).unwrap();
        s.validate().unwrap();
        assert_eq!(s.edges.len(), 5);
        assert_eq!(s.to_stree(), gen_random_special_tree(42, 3, 3, 3, 7).unwrap().to_stree());
    }

    #[test]
    fn bad_params() {
        assert!(matches!(gen_random_special_tree(0, 0, 1, 1, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(gen_random_special_tree(0, 1, 1, 3, 2), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn spanning_trees_are_uniform_on_k22() {
        // K_{2,2} is a 4-cycle: four spanning trees, each dropping one edge
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = std::collections::BTreeMap::new();
        for _ in 0..4000 {
            let mut t = random_bipartite_tree(&mut rng, 2, 2);
            t.sort();
            *counts.entry(t).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| (850..1150).contains(&c)), "{counts:?}");
    }

    #[test]
    fn corpus_respects_size() {
        let c = random_corpus(42, 25, 30);
        assert_eq!(c.len(), 25);
        assert!(c.iter().all(|s| s.vertex_total() <= 30));
        assert_eq!(c, random_corpus(42, 25, 30));
    }

    proptest! {
        #[test]
        fn generated_specs_compile(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, h in 1usize..4, extra in 0usize..3) {
            let s = gen_random_special_tree(seed, a, b, h, h + extra).unwrap();
            let t = compile(&s).unwrap();
            prop_assert_eq!(t.vertex_count(), s.vertex_total());
            prop_assert!(t.digraph.is_oriented_tree());
            prop_assert_eq!(SpecialTreeSpec::parse_stree(&s.to_stree()).unwrap(), s);
        }
    }
}
