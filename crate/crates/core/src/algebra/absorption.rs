use crate::error::{Error, Result};
use crate::spectree::{RootedOrder, SpecialTree};
use crate::vset::VertexSet;

use super::optable::{OperationExpr, OperationTable};

/// `subset ⊴ superset` via `op`.
#[derive(Clone, Debug)]
pub struct AbsorptionCertificate {
    pub superset: VertexSet,
    pub subset: VertexSet,
    pub op: OperationExpr,
}

fn closed_under(s: &VertexSet, op: &OperationExpr, budget: u128) -> Result<bool> {
    let members = s.to_vec();
    let k = op.arity();
    let needed = (members.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "closure check applications",
            needed,
            budget,
        });
    }
    let lists: Vec<&[usize]> = (0..k).map(|_| members.as_slice()).collect();
    let mut ok = true;
    crate::digraph::for_each_product(&lists, |t| {
        ok = ok && s.contains(op.eval(t));
    });
    Ok(ok)
}

/// Exhaustive check of every application with one coordinate from the
/// superset and the rest from the subset.
pub fn verify_absorption(cert: &AbsorptionCertificate, budget: u128) -> Result<bool> {
    let (a, b, op) = (&cert.superset, &cert.subset, &cert.op);
    if b.is_empty() || !b.is_subset(a) || !op.is_idempotent() {
        return Ok(false);
    }
    if !closed_under(a, op, budget)? || !closed_under(b, op, budget)? {
        return Ok(false);
    }
    let k = op.arity();
    let bs = b.to_vec();
    let avs = a.to_vec();
    let needed = (k as u128) * (avs.len() as u128) * (bs.len() as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "absorption applications",
            needed,
            budget,
        });
    }
    let mut lists: Vec<&[usize]> = (0..k).map(|_| bs.as_slice()).collect();
    let mut ok = true;
    for i in 0..k {
        lists[i] = avs.as_slice();
        crate::digraph::for_each_product(&lists, |t| {
            ok = ok && b.contains(op.eval(t));
        });
        lists[i] = bs.as_slice();
    }
    Ok(ok)
}

/// `{o} ⊴ superset` via a WNU with polymer `∘`: every one-free application
/// equals `o∘a`, so the check is `o∘a = o` for all `a` in the superset.
pub fn singleton_absorbs_via_polymer(polymer: &OperationTable, o: usize, superset: &VertexSet) -> bool {
    superset.iter().all(|a| polymer.apply2(o, a) == o)
}

/// The first `u ∈ A ∪ B` with `u∘w = u` for all `w ∈ E_2(u)`.
pub fn find_singleton_absorber(tree: &SpecialTree, polymer: &OperationTable) -> Result<usize> {
    let n = tree.vertex_count();
    (0..tree.template_vertex_count())
        .find(|&u| {
            let e2 = tree.e_neighborhood(&VertexSet::singleton(n, u), 2).expect("template vertex");
            singleton_absorbs_via_polymer(polymer, u, &e2)
        })
        .ok_or_else(|| {
            Error::NoneFound("no singleton absorbing its E_2-neighbourhood; polymer not special or tree not Taylor".into())
        })
}

/// `a∘a' = a` for all `⪯`-comparable `a ⪯ a'` within `A` and within `B`.
pub fn verify_preceq_absorption(tree: &SpecialTree, o: usize, polymer: &OperationTable) -> bool {
    let order = tree.order_from(o);
    preceq_violations(tree, &order, polymer).is_empty()
}

/// Pairs `(a, a')` with `a ⪯ a'` on one side but `a∘a' ≠ a`.
pub fn preceq_violations(tree: &SpecialTree, order: &RootedOrder, polymer: &OperationTable) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for side in [tree.a_set(), tree.b_set()] {
        for a in side.iter() {
            for a2 in side.iter() {
                if order.preceq(a, a2) && polymer.apply2(a, a2) != a {
                    bad.push((a, a2));
                }
            }
        }
    }
    bad
}

/// The weakest absorption-freeness test used before the pointing constructions:
/// at least two elements, closed under `∘`, and no `c` with `c∘c' = c` for all `c' ∈ C`.
pub fn relatively_absorption_free(c: &VertexSet, polymer: &OperationTable) -> bool {
    c.len() >= 2
        && c.iter().all(|x| c.iter().all(|y| c.contains(polymer.apply2(x, y))))
        && !c.iter().any(|x| singleton_absorbs_via_polymer(polymer, x, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polymer::binary_polymer;

    fn meet() -> OperationExpr {
        OperationExpr::leaf(OperationTable::from_fn(2, 2, |t| t[0].min(t[1])))
    }

    #[test]
    fn boolean_meet() {
        let a = VertexSet::full(2);
        let yes = AbsorptionCertificate {
            superset: a.clone(),
            subset: VertexSet::singleton(2, 0),
            op: meet(),
        };
        assert!(verify_absorption(&yes, 1000).unwrap());
        let no = AbsorptionCertificate {
            subset: VertexSet::singleton(2, 1),
            ..yes.clone()
        };
        assert!(!verify_absorption(&no, 1000).unwrap());
        let whole = AbsorptionCertificate { subset: a, ..yes };
        assert!(verify_absorption(&whole, 1000).unwrap());
    }

    #[test]
    fn polymer_reduction_matches_full_check() {
        // all 3-ary WNUs on two elements: the four free orbit values
        for bits in 0..4usize {
            let circ = [[0, bits & 1], [bits >> 1 & 1, 1]];
            let w = OperationTable::from_fn(2, 3, |t| {
                let ones = t.iter().sum::<usize>();
                match ones {
                    0 => 0,
                    3 => 1,
                    1 => circ[0][1],
                    _ => circ[1][0],
                }
            });
            assert!(w.is_wnu());
            let p = binary_polymer(&w).unwrap();
            let full = VertexSet::full(2);
            for o in 0..2 {
                let cert = AbsorptionCertificate {
                    superset: full.clone(),
                    subset: VertexSet::singleton(2, o),
                    op: OperationExpr::leaf(w.clone()),
                };
                assert_eq!(verify_absorption(&cert, 1000).unwrap(), singleton_absorbs_via_polymer(&p, o, &full));
            }
        }
    }

    #[test]
    fn relative_freeness() {
        let p = OperationTable::from_fn(3, 2, |t| (2 * t[0] + 2 * t[1]) % 3);
        assert!(relatively_absorption_free(&VertexSet::full(3), &p));
        let first = OperationTable::projection(3, 2, 0);
        assert!(!relatively_absorption_free(&VertexSet::full(3), &first));
        assert!(!relatively_absorption_free(&VertexSet::singleton(3, 1), &p));
    }
}
