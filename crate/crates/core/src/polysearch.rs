//! Polymorphism search through indicator instances.
//!
//! A `k`-ary operation on `H` satisfying a system of identities is the same
//! thing as a homomorphism from a quotient of `H^k` to `H`: tuples forced equal
//! by the identities are merged into one variable, tuples whose image is
//! forced are pinned, and every edge of `H^k` becomes a binary constraint.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::OperationTable;
use crate::digraph::{Digraph, TupleIndexer};
use crate::error::{Error, Result};
use crate::homsolver::{solve_csp, CspInstance, Relation, DEFAULT_NODE_BUDGET};
use crate::vset::VertexSet;

/// Default cap on `|H|^k`, the number of tuples in an indicator instance.
pub const DEFAULT_TUPLE_BUDGET: u128 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub tuples: u128,
    pub nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuples: DEFAULT_TUPLE_BUDGET,
            nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

/// A tuple shape over abstract variables: position `i` holds variable `pattern[i]`.
pub type Pattern = Vec<usize>;

/// Which assignments of abstract variables a rule is instantiated for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    /// All abstract variables take values inside one of the listed sets.
    Within(Vec<VertexSet>),
}

/// For every admissible assignment of `vars` abstract variables, the
/// instantiated `merge` tuples share one image; with `pin = Some(v)` that
/// image is the value of abstract variable `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub vars: usize,
    pub merge: Vec<Pattern>,
    pub pin: Option<usize>,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySystem {
    pub arity: usize,
    pub rules: Vec<Rule>,
    /// Identify tuples with the same set of entries.
    pub set_symmetric: bool,
}

impl IdentitySystem {
    pub fn new(arity: usize) -> Self {
        IdentitySystem {
            arity,
            rules: Vec::new(),
            set_symmetric: false,
        }
    }

    pub fn idempotent(arity: usize) -> Self {
        let mut s = Self::new(arity);
        s.rules.push(idempotency_rule(arity));
        s
    }

    pub fn wnu(arity: usize) -> Self {
        let mut s = Self::idempotent(arity);
        s.rules.push(wnu_rule(arity, Scope::All));
        s
    }

    /// Idempotent everywhere, WNU identities only for arguments inside one of `parts`.
    pub fn wnu_within(arity: usize, parts: Vec<VertexSet>) -> Self {
        let mut s = Self::idempotent(arity);
        s.rules.push(wnu_rule(arity, Scope::Within(parts)));
        s
    }

    pub fn majority() -> Self {
        let mut s = Self::new(3);
        s.rules.push(Rule {
            vars: 2,
            merge: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]],
            pin: Some(0),
            scope: Scope::All,
        });
        s
    }

    /// `s(a,r,e,a) = s(r,a,r,e)`, idempotent.
    pub fn siggers() -> Self {
        let mut s = Self::idempotent(4);
        s.rules.push(Rule {
            vars: 3,
            merge: vec![vec![0, 1, 2, 0], vec![1, 0, 1, 2]],
            pin: None,
            scope: Scope::All,
        });
        s
    }

    pub fn tsi(arity: usize) -> Self {
        let mut s = Self::idempotent(arity);
        s.set_symmetric = true;
        s
    }

    fn validate(&self) -> Result<()> {
        for r in &self.rules {
            let bad = r.merge.iter().any(|p| p.len() != self.arity || p.iter().any(|&v| v >= r.vars))
                || r.pin.is_some_and(|v| v >= r.vars)
                || r.merge.is_empty();
            if bad {
                return Err(Error::InvalidParams("malformed identity rule".into()));
            }
            if let Some(v) = r.pin {
                if !r.merge.iter().all(|p| p.contains(&v)) {
                    return Err(Error::InvalidParams("pin target must occur in every pinned pattern".into()));
                }
            }
        }
        Ok(())
    }
}

fn idempotency_rule(arity: usize) -> Rule {
    Rule {
        vars: 1,
        merge: vec![vec![0; arity]],
        pin: Some(0),
        scope: Scope::All,
    }
}

/// The `k` rotations of `(y, x, …, x)`, with `x = 0` and `y = 1`.
fn wnu_rule(arity: usize, scope: Scope) -> Rule {
    Rule {
        vars: 2,
        merge: (0..arity)
            .map(|i| (0..arity).map(|j| usize::from(i == j)).collect())
            .collect(),
        pin: None,
        scope,
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

/// The quotient instance together with the tuple-to-variable map.
#[derive(Clone, Debug)]
pub struct Indicator {
    pub instance: CspInstance,
    pub indexer: TupleIndexer,
    pub class_of: Vec<u32>,
}

impl Indicator {
    pub fn class_count(&self) -> usize {
        self.instance.var_count()
    }

    /// Reads the operation off a solution of the instance.
    pub fn table(&self, solution: &[usize]) -> OperationTable {
        let values = self.class_of.iter().map(|&c| solution[c as usize]).collect();
        OperationTable::new(self.indexer.base(), self.indexer.arity(), values).expect("solution values in range")
    }
}

/// Builds the indicator instance of `sys` over `h`.
pub fn indicator(h: &Digraph, sys: &IdentitySystem, tuple_budget: u128) -> Result<Indicator> {
    sys.validate()?;
    let n = h.vertex_count();
    let k = sys.arity;
    let indexer = TupleIndexer::new(n, k, tuple_budget)?;
    let len = indexer.len();
    let mut uf = UnionFind::new(len);
    let mut pins: Vec<(usize, usize)> = Vec::new();
    let mut tuple = vec![0usize; k];
    for r in &sys.rules {
        let mut assignment = vec![0usize; r.vars];
        let mut apply = |a: &[usize]| {
            let mut first = None;
            for p in &r.merge {
                for (slot, &v) in tuple.iter_mut().zip(p) {
                    *slot = a[v];
                }
                let t = indexer.encode(&tuple);
                match first {
                    None => first = Some(t),
                    Some(f) => uf.union(f, t),
                }
            }
            if let (Some(v), Some(f)) = (r.pin, first) {
                pins.push((f, a[v]));
            }
        };
        let value_lists: Vec<Vec<usize>> = match &r.scope {
            Scope::All => vec![(0..n).collect()],
            Scope::Within(parts) => parts.iter().map(|s| s.to_vec()).collect(),
        };
        for values in &value_lists {
            if values.is_empty() && r.vars > 0 {
                continue;
            }
            let lists: Vec<&[usize]> = (0..r.vars).map(|_| values.as_slice()).collect();
            crate::digraph::for_each_product(&lists, |a| {
                assignment.copy_from_slice(a);
                apply(&assignment);
            });
        }
    }
    if sys.set_symmetric {
        let mut rep: HashMap<Vec<usize>, usize> = HashMap::new();
        for t in 0..len {
            indexer.decode_into(t, &mut tuple);
            let mut key = tuple.clone();
            key.sort_unstable();
            key.dedup();
            let r = *rep.entry(key).or_insert(t);
            uf.union(r, t);
        }
    }
    let mut class_of = vec![u32::MAX; len];
    let mut root_class: Vec<u32> = vec![u32::MAX; len];
    let mut classes = 0u32;
    for t in 0..len {
        let r = uf.find(t);
        if root_class[r] == u32::MAX {
            root_class[r] = classes;
            classes += 1;
        }
        class_of[t] = root_class[r];
    }
    drop(root_class);
    let mut instance = CspInstance::new(classes as usize, n);
    let mut pinned: Vec<Option<usize>> = vec![None; classes as usize];
    for (t, v) in pins {
        let c = class_of[t] as usize;
        match pinned[c] {
            Some(w) if w != v => return Err(Error::InconsistentPins),
            _ => pinned[c] = Some(v),
        }
    }
    for (c, p) in pinned.iter().enumerate() {
        if let Some(v) = *p {
            instance.pin(c, v);
        }
    }
    let rel = instance.add_shared_relation(Arc::new(Relation::from_digraph(h)));
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let edges = h.edges();
    if !edges.is_empty() {
        let edge_count = edges.len();
        let idx: Vec<usize> = (0..edge_count).collect();
        let lists: Vec<&[usize]> = (0..k).map(|_| idx.as_slice()).collect();
        let mut src = vec![0usize; k];
        let mut dst = vec![0usize; k];
        crate::digraph::for_each_product(&lists, |choice| {
            for (i, &e) in choice.iter().enumerate() {
                (src[i], dst[i]) = edges[e];
            }
            pairs.push((class_of[indexer.encode(&src)], class_of[indexer.encode(&dst)]));
        });
    }
    pairs.sort_unstable();
    pairs.dedup();
    for (a, b) in pairs {
        instance.add_constraint(a as usize, b as usize, rel, 0);
    }
    Ok(Indicator {
        instance,
        indexer,
        class_of,
    })
}

/// A polymorphism satisfying `sys`, or `None` when none exists.
pub fn find_polymorphism(h: &Digraph, sys: &IdentitySystem, budget: Budget) -> Result<Option<OperationTable>> {
    let ind = match indicator(h, sys, budget.tuples) {
        Ok(ind) => ind,
        Err(Error::InconsistentPins) => return Ok(None),
        Err(e) => return Err(e),
    };
    let Some(sol) = solve_csp(&ind.instance, budget.nodes)? else {
        return Ok(None);
    };
    Ok(Some(ind.table(&sol)))
}

fn checked(h: &Digraph, t: Option<OperationTable>, ok: impl Fn(&OperationTable) -> bool) -> Result<Option<OperationTable>> {
    if let Some(t) = &t {
        if !(t.is_polymorphism(h) && ok(t)) {
            return Err(Error::ConstructionStuck("indicator solution failed re-verification".into()));
        }
    }
    Ok(t)
}

/// A `k`-ary WNU polymorphism of `h`, or `None`.
pub fn find_wnu(h: &Digraph, k: usize, budget: Budget) -> Result<Option<OperationTable>> {
    if k < 2 {
        return Err(Error::InvalidParams("WNU arity must be at least 2".into()));
    }
    let t = find_polymorphism(h, &IdentitySystem::wnu(k), budget)?;
    checked(h, t, |t| t.is_wnu())
}

/// An idempotent polymorphism that is a WNU on each of `parts`.
pub fn find_wnu_within(h: &Digraph, k: usize, parts: &[VertexSet], budget: Budget) -> Result<Option<OperationTable>> {
    let t = find_polymorphism(h, &IdentitySystem::wnu_within(k, parts.to_vec()), budget)?;
    checked(h, t, |t| t.is_idempotent() && parts.iter().all(|p| is_wnu_on(t, p)))
}

pub fn find_siggers(h: &Digraph, budget: Budget) -> Result<Option<OperationTable>> {
    let t = find_polymorphism(h, &IdentitySystem::siggers(), budget)?;
    checked(h, t, |t| t.is_siggers())
}

pub fn find_majority(h: &Digraph, budget: Budget) -> Result<Option<OperationTable>> {
    let t = find_polymorphism(h, &IdentitySystem::majority(), budget)?;
    checked(h, t, |t| t.is_majority())
}

/// A `k`-ary totally symmetric idempotent polymorphism, or `None`.
pub fn find_tsi(h: &Digraph, k: usize, budget: Budget) -> Result<Option<OperationTable>> {
    if k == 0 {
        return Err(Error::InvalidParams("arity must be positive".into()));
    }
    let t = find_polymorphism(h, &IdentitySystem::tsi(k), budget)?;
    checked(h, t, |t| t.is_tsi())
}

/// WNU identities for arguments drawn from `part`.
pub fn is_wnu_on(t: &OperationTable, part: &VertexSet) -> bool {
    let k = t.arity();
    let mut args = vec![0; k];
    part.iter().all(|x| {
        part.iter().all(|y| {
            args.iter_mut().for_each(|a| *a = x);
            args[0] = y;
            let first = t.eval(&args);
            (1..k).all(|i| {
                args[i - 1] = x;
                args[i] = y;
                t.eval(&args) == first
            })
        })
    })
}
