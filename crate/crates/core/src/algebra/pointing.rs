use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::vset::VertexSet;

use super::optable::{OperationExpr, OperationTable};

/// `op` weakly points `from` to `to`: placing any `x ∈ from` at position `i`
/// of witness `i` yields a value in `to`.
#[derive(Clone, Debug)]
pub struct WeakPointingCertificate {
    pub op: OperationExpr,
    pub from: VertexSet,
    pub to: VertexSet,
    pub witnesses: Vec<Vec<usize>>,
    /// When present: position `i` of witness `i` filled with `u` gives `alpha[u]`, for every `i`.
    pub alpha: Option<BTreeMap<usize, usize>>,
}

impl WeakPointingCertificate {
    pub fn arity(&self) -> usize {
        self.op.arity()
    }

    fn apply(&self, i: usize, x: usize, buf: &mut Vec<usize>) -> usize {
        buf.clear();
        buf.extend_from_slice(&self.witnesses[i]);
        buf[i] = x;
        self.op.eval(buf)
    }
}

/// `{x}` pointed to itself by the unary identity.
pub fn trivial_pointing(base: usize, x: usize) -> WeakPointingCertificate {
    WeakPointingCertificate {
        op: OperationExpr::leaf(OperationTable::projection(base, 1, 0)),
        from: VertexSet::singleton(base, x),
        to: VertexSet::singleton(base, x),
        witnesses: vec![vec![x]],
        alpha: None,
    }
}

pub fn verify_weak_pointing(cert: &WeakPointingCertificate) -> bool {
    let n = cert.arity();
    if cert.from.is_empty() || cert.to.is_empty() || cert.witnesses.len() != n {
        return false;
    }
    if cert.witnesses.iter().any(|w| w.len() != n || w.iter().any(|&v| v >= cert.op.base())) {
        return false;
    }
    if !cert.op.is_idempotent() {
        return false;
    }
    let mut buf = Vec::with_capacity(n);
    for i in 0..n {
        for x in cert.from.iter() {
            if !cert.to.contains(cert.apply(i, x, &mut buf)) {
                return false;
            }
        }
        if let Some(alpha) = &cert.alpha {
            for (&u, &a) in alpha {
                if cert.apply(i, u, &mut buf) != a {
                    return false;
                }
            }
        }
    }
    true
}

/// `g ⟵ f` pointing `f.from` to `g.to`, given `f: X → Y` and `g: Y' → Z` with `Y ⊆ Y'`.
///
/// Witness `(i, j)` (free position `(i−1)k + j`) is witness `i` of `g` with
/// every entry repeated `k` times, except block `i`, which is witness `j` of `f`.
pub fn compose_pointing(
    f: &WeakPointingCertificate,
    g: &WeakPointingCertificate,
    arity_budget: u128,
) -> Result<WeakPointingCertificate> {
    if !f.to.is_subset(&g.from) {
        return Err(Error::PreconditionViolated("target of the inner pointing is not pointed by the outer".into()));
    }
    let op = OperationExpr::compose(&g.op, &f.op, arity_budget)?;
    let (k, n) = (f.arity(), g.arity());
    let mut witnesses = Vec::with_capacity(n * k);
    for i in 0..n {
        for j in 0..k {
            let mut c = Vec::with_capacity(n * k);
            for l in 0..n {
                if l == i {
                    c.extend_from_slice(&f.witnesses[j]);
                } else {
                    c.extend(std::iter::repeat(g.witnesses[i][l]).take(k));
                }
            }
            witnesses.push(c);
        }
    }
    let cert = WeakPointingCertificate {
        op,
        from: f.from.clone(),
        to: g.to.clone(),
        witnesses,
        alpha: None,
    };
    if !verify_weak_pointing(&cert) {
        return Err(Error::ConstructionStuck("composed pointing certificate failed verification".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_ARITY_BUDGET;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn meet() -> OperationExpr {
        OperationExpr::leaf(OperationTable::from_fn(2, 2, |t| t[0].min(t[1])))
    }

    #[test]
    fn simple_certificates() {
        let t = trivial_pointing(3, 1);
        assert!(verify_weak_pointing(&t));
        let m = WeakPointingCertificate {
            op: meet(),
            from: VertexSet::full(2),
            to: VertexSet::singleton(2, 0),
            witnesses: vec![vec![1, 0], vec![0, 1]],
            alpha: None,
        };
        assert!(verify_weak_pointing(&m));
        let proj = WeakPointingCertificate {
            op: OperationExpr::leaf(OperationTable::projection(2, 2, 0)),
            witnesses: vec![vec![0, 0], vec![0, 0]],
            ..m.clone()
        };
        assert!(!verify_weak_pointing(&proj));
        let chained = compose_pointing(&m, &m, DEFAULT_ARITY_BUDGET).unwrap();
        assert_eq!(chained.arity(), 4);
        assert_eq!(chained.to.to_vec(), vec![0]);
        let id = WeakPointingCertificate {
            op: OperationExpr::leaf(OperationTable::projection(2, 1, 0)),
            from: VertexSet::singleton(2, 0),
            to: VertexSet::singleton(2, 0),
            witnesses: vec![vec![0]],
            alpha: None,
        };
        let kept = compose_pointing(&m, &id, DEFAULT_ARITY_BUDGET).unwrap();
        assert_eq!(kept.arity(), 2);
    }

    #[test]
    fn random_compositions_verify() {
        // semilattice-like ops on 4 elements pointing to their absorbing element
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let bottom = rng.gen_range(0..4);
            let mut vals: Vec<usize> = (0..16).map(|_| rng.gen_range(0..4)).collect();
            for x in 0..4 {
                vals[x * 4 + x] = x;
                vals[x * 4 + bottom] = bottom;
                vals[bottom * 4 + x] = bottom;
            }
            let op = OperationExpr::leaf(OperationTable::new(4, 2, vals).unwrap());
            let f = WeakPointingCertificate {
                op: op.clone(),
                from: VertexSet::full(4),
                to: VertexSet::singleton(4, bottom),
                witnesses: vec![vec![0, bottom], vec![bottom, 0]],
                alpha: None,
            };
            assert!(verify_weak_pointing(&f));
            let g = WeakPointingCertificate {
                from: VertexSet::singleton(4, bottom),
                ..f.clone()
            };
            assert!(verify_weak_pointing(&compose_pointing(&f, &g, DEFAULT_ARITY_BUDGET).unwrap()));
        }
    }
}
