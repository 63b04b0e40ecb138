use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vset::VertexSet;

use super::optable::{OperationExpr, OperationTable};

/// `x∘y = w(x,…,x,y)` of a WNU `w`.
pub fn binary_polymer(w: &OperationTable) -> Result<OperationTable> {
    if w.arity() < 2 || !w.is_wnu() {
        return Err(Error::NotWnu);
    }
    Ok(polymer_unchecked(w))
}

fn polymer_unchecked(w: &OperationTable) -> OperationTable {
    let k = w.arity();
    let mut args = vec![0; k];
    OperationTable::from_fn(w.base(), 2, |t| {
        args.iter_mut().for_each(|a| *a = t[0]);
        args[k - 1] = t[1];
        w.eval(&args)
    })
}

/// `x∘y` read off an expression through its first and last coordinates.
pub fn expr_polymer(e: &OperationExpr) -> OperationTable {
    let k = e.arity();
    let mut args = vec![0; k];
    OperationTable::from_fn(e.base(), 2, |t| {
        args.iter_mut().for_each(|a| *a = t[0]);
        args[k - 1] = t[1];
        e.eval(&args)
    })
}

/// `p(x, p(x, y)) = p(x, y)` for all `x, y`.
pub fn is_special(p: &OperationTable) -> bool {
    let n = p.base();
    (0..n).all(|x| (0..n).all(|y| p.apply2(x, p.apply2(x, y)) == p.apply2(x, y)))
}

/// The special WNU `w ⟵ w ⟵ … ⟵ w` (`copies` factors), held through its polymer.
#[derive(Clone, Debug)]
pub struct SpecialWnu {
    pub base: Arc<OperationTable>,
    pub copies: usize,
    pub polymer: OperationTable,
}

impl SpecialWnu {
    /// Builds the composed expression; its arity is `k^copies`.
    pub fn expr(&self, arity_budget: u128) -> Result<OperationExpr> {
        let leaf = OperationExpr::Leaf(self.base.clone());
        let mut e = leaf.clone();
        for _ in 1..self.copies {
            e = OperationExpr::compose(&e, &leaf, arity_budget)?;
        }
        Ok(e)
    }
}

/// Iterates `p_1 = ∘`, `p_{m+1}(x,y) = x∘p_m(x,y)` until `p_m` is special.
///
/// `p_m` is the polymer of the `m`-fold composition of `w` with itself.
pub fn make_special(w: &OperationTable) -> Result<SpecialWnu> {
    let circ = binary_polymer(w)?;
    let n = w.base();
    let mut p = circ.clone();
    let mut m = 1;
    while !is_special(&p) {
        p = OperationTable::from_fn(n, 2, |t| circ.apply2(t[0], p.apply2(t[0], t[1])));
        m += 1;
    }
    let base = Arc::new(w.clone());
    let leaf = OperationExpr::Leaf(base.clone());
    if (w.arity() as u128).pow(2) <= super::DEFAULT_ARITY_BUDGET {
        let twice = OperationExpr::compose(&leaf, &leaf, super::DEFAULT_ARITY_BUDGET)?;
        let want = OperationTable::from_fn(n, 2, |t| circ.apply2(t[0], circ.apply2(t[0], t[1])));
        if expr_polymer(&twice) != want {
            return Err(Error::ConstructionStuck("polymer of w ⟵ w differs from x∘(x∘y)".into()));
        }
    }
    Ok(SpecialWnu {
        base,
        copies: m,
        polymer: p,
    })
}

/// `x⋆y = (…((x∘y)∘y)…)∘y` with `∘` applied `hsize` times.
pub fn star(polymer: &OperationTable, hsize: usize) -> OperationTable {
    OperationTable::from_fn(polymer.base(), 2, |t| {
        let mut v = t[0];
        for _ in 0..hsize {
            v = polymer.apply2(v, t[1]);
        }
        v
    })
}

/// Least superset of `s` closed under every operation in `ops`.
pub fn closure(s: &VertexSet, ops: &[OperationExpr], budget: u128) -> Result<VertexSet> {
    let mut cur = s.clone();
    loop {
        let members = cur.to_vec();
        let mut next = cur.clone();
        for op in ops {
            let k = op.arity();
            let needed = (members.len() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    what: "closure applications",
                    needed,
                    budget,
                });
            }
            let lists: Vec<&[usize]> = (0..k).map(|_| members.as_slice()).collect();
            crate::digraph::for_each_product(&lists, |t| {
                next.insert(op.eval(t));
            });
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn maj2() -> OperationTable {
        OperationTable::from_fn(2, 3, |t| usize::from(t.iter().sum::<usize>() >= 2))
    }

    /// A random 3-ary WNU on `n` elements: values on the one-different
    /// orbit are shared, all other tuples arbitrary.
    pub(crate) fn random_wnu(n: usize, seed: u64) -> OperationTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circ: Vec<usize> = (0..n * n)
            .map(|i| if i / n == i % n { i / n } else { rng.gen_range(0..n) })
            .collect();
        let mut free: Vec<usize> = (0..n * n * n).map(|_| rng.gen_range(0..n)).collect();
        OperationTable::from_fn(n, 3, |t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            let idx = (a * n + b) * n + c;
            if a == b && b == c {
                a
            } else if a == b {
                circ[a * n + c]
            } else if a == c {
                circ[a * n + b]
            } else if b == c {
                circ[b * n + a]
            } else {
                std::mem::take(&mut free[idx])
            }
        })
    }

    #[test]
    fn majority_polymer_is_first_projection() {
        let p = binary_polymer(&maj2()).unwrap();
        assert_eq!(p, OperationTable::projection(2, 2, 0));
        let s = make_special(&maj2()).unwrap();
        assert_eq!(s.copies, 1);
        assert_eq!(star(&p, 2), p);
    }

    #[test]
    fn non_wnu_rejected() {
        assert_eq!(binary_polymer(&OperationTable::projection(2, 3, 0)), Err(Error::NotWnu));
    }

    #[test]
    fn random_wnus_become_special() {
        for seed in 0..20 {
            let w = random_wnu(4, seed);
            assert!(w.is_wnu());
            let p = binary_polymer(&w).unwrap();
            // every rotation agrees
            for x in 0..4 {
                for y in 0..4 {
                    let v = p.apply2(x, y);
                    assert_eq!(w.eval(&[y, x, x]), v);
                    assert_eq!(w.eval(&[x, y, x]), v);
                }
            }
            let s = make_special(&w).unwrap();
            assert!(is_special(&s.polymer));
            if (w.arity() as u128).pow(s.copies as u32) <= 1 << 12 {
                let e = s.expr(1 << 12).unwrap();
                assert_eq!(expr_polymer(&e), s.polymer);
            }
        }
    }

    #[test]
    fn star_iterates_right() {
        let second = OperationTable::projection(3, 2, 1);
        assert_eq!(star(&second, 3), second);
        for x in 0..3 {
            assert_eq!(star(&second, 3).apply2(x, x), x);
        }
    }

    #[test]
    fn closures() {
        let meet = OperationExpr::leaf(OperationTable::from_fn(3, 2, |t| t[0].min(t[1])));
        let s = VertexSet::from_iter_in(3, [1]);
        assert_eq!(closure(&s, &[meet.clone()], 1000).unwrap(), s);
        let full = VertexSet::full(3);
        assert_eq!(closure(&full, &[meet.clone()], 1000).unwrap(), full);
        // on the chain 0 < 1 < 2 with "average rounded down" the ends generate the middle
        let mid = OperationExpr::leaf(OperationTable::from_fn(3, 2, |t| (t[0] + t[1]) / 2));
        let ends = VertexSet::from_iter_in(3, [0, 2]);
        assert_eq!(closure(&ends, &[mid], 1000).unwrap(), full);
    }
}
