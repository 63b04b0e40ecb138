use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::digraph::{TupleIndexer, DEFAULT_POWER_BUDGET};
use crate::error::{Error, Result};
use crate::polysearch::is_wnu_on;
use crate::spectree::{RootedOrder, SpecialTree};
use crate::vset::VertexSet;

use super::optable::{OperationExpr, OperationTable};
use super::pointing::{compose_pointing, trivial_pointing, verify_weak_pointing, WeakPointingCertificate};
use super::polymer::star;
use super::sets::{s_set, SSet, Term};

/// A set `C` of template children of `parent` (in the order rooted at `o`),
/// with `⋆` and the `S`-sets on `C`.
#[derive(Clone, Debug)]
pub struct Neighborhood<'a> {
    tree: &'a SpecialTree,
    order: RootedOrder,
    star: OperationTable,
    parent: usize,
    members: VertexSet,
    s_sets: BTreeMap<(usize, usize), SSet>,
}

impl<'a> Neighborhood<'a> {
    pub fn new(
        tree: &'a SpecialTree,
        order: RootedOrder,
        star: OperationTable,
        parent: usize,
        members: VertexSet,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::PreconditionViolated("empty neighbourhood subset".into()));
        }
        for c in members.iter() {
            let adjacent = tree.is_template_vertex(c) && tree.template_neighbors(parent).contains(&c);
            if !adjacent || !order.strictly_below(parent, c) {
                return Err(Error::PreconditionViolated(format!(
                    "{c} is not a template child of {parent}"
                )));
            }
        }
        Ok(Neighborhood {
            tree,
            order,
            star,
            parent,
            members,
            s_sets: BTreeMap::new(),
        })
    }

    /// Convenience constructor computing `⋆` from a special polymer.
    pub fn from_polymer(
        tree: &'a SpecialTree,
        o: usize,
        polymer: &OperationTable,
        parent: usize,
        members: VertexSet,
    ) -> Result<Self> {
        let st = star(polymer, tree.vertex_count());
        Self::new(tree, tree.order_from(o), st, parent, members)
    }

    pub fn parent(&self) -> usize {
        self.parent
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn star(&self) -> &OperationTable {
        &self.star
    }

    pub fn s_set(&mut self, c: usize, c2: usize) -> &SSet {
        let st = &self.star;
        self.s_sets.entry((c, c2)).or_insert_with(|| s_set(c, c2, st))
    }

    /// Template vertices on the parent's side lying `⪯`-above some member.
    pub fn above_members(&self) -> Vec<usize> {
        let side = self.tree.side_of(self.parent);
        side.iter()
            .filter(|&d| self.members.iter().any(|c| self.order.strictly_below(c, d)))
            .collect()
    }

    /// Vertices `d` above `C` with `b⋆d ≠ b` or `d⋆b ≠ b`, where `b` is the parent.
    pub fn star_absorption_violations(&self) -> Vec<usize> {
        let b = self.parent;
        self.above_members()
            .into_iter()
            .filter(|&d| self.star.apply2(b, d) != b || self.star.apply2(d, b) != b)
            .collect()
    }

    /// `(c, c', term, d)` where a witnessing term fails `φ(b,d) = φ(d,b) = b`.
    pub fn term_absorption_violations(&mut self) -> Vec<(usize, usize, Arc<Term>, usize)> {
        let b = self.parent;
        let above = self.above_members();
        let members = self.members.to_vec();
        let mut bad = Vec::new();
        for &c in &members {
            for &c2 in &members {
                let st = self.star.clone();
                let s = self.s_set(c, c2).clone();
                for t in s.terms.values() {
                    for &d in &above {
                        if t.eval(&st, b, d) != b || t.eval(&st, d, b) != b {
                            bad.push((c, c2, t.clone(), d));
                        }
                    }
                }
            }
        }
        bad
    }

    /// A commutative choice `γ(c,c') = γ(c',c) ∈ S_{c,c'}` (least element), with overrides.
    pub fn commutative_gamma(&mut self, overrides: &[((usize, usize), usize)]) -> BTreeMap<(usize, usize), usize> {
        let members = self.members.to_vec();
        let mut gamma = BTreeMap::new();
        for (i, &c) in members.iter().enumerate() {
            gamma.insert((c, c), c);
            for &c2 in &members[i + 1..] {
                let v = *self.s_set(c, c2).terms.keys().next().expect("S-sets are nonempty");
                gamma.insert((c, c2), v);
                gamma.insert((c2, c), v);
            }
        }
        for &((c, c2), v) in overrides {
            gamma.insert((c, c2), v);
            gamma.insert((c2, c), v);
        }
        gamma
    }

    /// Witnessing terms for `gamma`; `PreconditionViolated` when a value lies outside its `S`-set.
    pub fn terms_for(&mut self, gamma: &BTreeMap<(usize, usize), usize>) -> Result<BTreeMap<(usize, usize), Arc<Term>>> {
        let mut out = BTreeMap::new();
        for (&(c, c2), &v) in gamma {
            let t = self.s_set(c, c2).term(v).cloned().ok_or_else(|| {
                Error::PreconditionViolated(format!("γ({c},{c2}) = {v} lies outside S_{{{c},{c2}}}"))
            })?;
            out.insert((c, c2), t);
        }
        Ok(out)
    }

    /// A binary idempotent polymorphism extending `gamma` on `C`.
    pub fn extend_binary(&mut self, gamma: &BTreeMap<(usize, usize), usize>) -> Result<OperationTable> {
        let terms = self.terms_for(gamma)?;
        extend_binary(self.tree, &self.order, self.parent, &self.members, gamma, &self.star, &terms)
    }

    /// A certificate weakly pointing `C` to a singleton.
    pub fn pointing(&mut self, arity_budget: u128) -> Result<WeakPointingCertificate> {
        let members = self.members.clone();
        let closed = members
            .iter()
            .all(|x| members.iter().all(|y| members.contains(self.star.apply2(x, y))));
        if !closed {
            return Err(Error::PreconditionViolated("C is not closed under ⋆".into()));
        }
        let cert = self.set_pointing(&members, arity_budget)?;
        if !verify_weak_pointing(&cert) {
            return Err(Error::ConstructionStuck("neighbourhood pointing failed verification".into()));
        }
        Ok(cert)
    }

    fn alpha_of(&self, phi: &OperationTable, second: usize) -> BTreeMap<usize, usize> {
        self.members.iter().map(|u| (u, phi.apply2(u, second))).collect()
    }

    /// `{x, y}` weakly pointed to a singleton, with a symmetry map `α` on `C`.
    fn pair_pointing(&mut self, x: usize, y: usize, depth: usize, arity_budget: u128) -> Result<WeakPointingCertificate> {
        let n = self.tree.vertex_count();
        if depth > self.members.len() + 2 {
            return Err(Error::ConstructionStuck(format!("pair recursion on {{{x},{y}}} does not shrink")));
        }
        let pair = VertexSet::from_iter_in(n, [x, y]);
        let s = self.s_set(x, y).clone();
        let base = if s.contains(x) {
            Some(x)
        } else if s.contains(y) {
            Some(y)
        } else {
            None
        };
        if let Some(z) = base {
            let gamma = self.commutative_gamma(&[((x, y), z)]);
            let phi = self.extend_binary(&gamma)?;
            let cert = WeakPointingCertificate {
                alpha: Some(self.alpha_of(&phi, z)),
                op: OperationExpr::leaf(phi),
                from: pair,
                to: VertexSet::singleton(n, z),
                witnesses: vec![vec![z, z]; 2],
            };
            return if verify_weak_pointing(&cert) {
                Ok(cert)
            } else {
                Err(Error::ConstructionStuck(format!("base pointing of {{{x},{y}}} failed")))
            };
        }
        let st = &self.star;
        let c = st.apply2(x, y);
        let (x2, y2) = (st.apply2(x, c), st.apply2(y, c));
        let gamma = self.commutative_gamma(&[((x, c), x2), ((y, c), y2)]);
        let phi = self.extend_binary(&gamma)?;
        let step = WeakPointingCertificate {
            op: OperationExpr::leaf(phi.clone()),
            from: pair,
            to: VertexSet::from_iter_in(n, [x2, y2]),
            witnesses: vec![vec![c, c]; 2],
            alpha: None,
        };
        if !verify_weak_pointing(&step) {
            return Err(Error::ConstructionStuck(format!("pointing {{{x},{y}}} to {{{x2},{y2}}} failed")));
        }
        let inner = self.pair_pointing(x2, y2, depth + 1, arity_budget)?;
        let inner_alpha = inner.alpha.clone().expect("pair certificates carry α");
        let mut cert = compose_pointing(&step, &inner, arity_budget)?;
        let alpha = self
            .members
            .iter()
            .map(|u| inner_alpha.get(&phi.apply2(u, c)).map(|&a| (u, a)))
            .collect::<Option<BTreeMap<_, _>>>()
            .ok_or_else(|| Error::ConstructionStuck(format!("φ(·,{c}) leaves C")))?;
        cert.alpha = Some(alpha);
        if !verify_weak_pointing(&cert) {
            return Err(Error::ConstructionStuck(format!("composed α for {{{x},{y}}} does not hold")));
        }
        Ok(cert)
    }

    fn set_pointing(&mut self, xs: &VertexSet, arity_budget: u128) -> Result<WeakPointingCertificate> {
        let n = self.tree.vertex_count();
        let mut it = xs.iter();
        let x = it.next().ok_or_else(|| Error::PreconditionViolated("empty set".into()))?;
        let Some(y) = it.next() else {
            return Ok(trivial_pointing(n, x));
        };
        let pair = self.pair_pointing(x, y, 0, arity_budget)?;
        let alpha = pair.alpha.clone().expect("pair certificates carry α");
        let image = VertexSet::from_iter_in(n, xs.iter().map(|u| alpha[&u]));
        if image.len() >= xs.len() {
            return Err(Error::ConstructionStuck("symmetry map does not merge the pair".into()));
        }
        let step = WeakPointingCertificate {
            from: xs.clone(),
            to: image.clone(),
            alpha: None,
            ..pair
        };
        if !verify_weak_pointing(&step) {
            return Err(Error::ConstructionStuck("pair operation does not point the set to its α-image".into()));
        }
        let rest = self.set_pointing(&image, arity_budget)?;
        compose_pointing(&step, &rest, arity_budget)
    }
}

/// The branch `c ∈ C` with `b ≺ x ≺ c` or `c ⪯ x`, if any.
fn branch_of(order: &RootedOrder, b: usize, members: &[usize], x: usize) -> Option<usize> {
    members.iter().copied().find(|&c| {
        (order.strictly_below(b, x) && order.strictly_below(x, c)) || order.preceq(c, x)
    })
}

/// Extends `gamma` (given on `C × C` with witnessing `⋆`-terms) to a binary
/// idempotent polymorphism: `φ_{c,c'}(x,y)` when `x` and `y` sit on the
/// branches of `c` and `c'` at a common level, `x⋆y` otherwise.
pub fn extend_binary(
    tree: &SpecialTree,
    order: &RootedOrder,
    b: usize,
    members: &VertexSet,
    gamma: &BTreeMap<(usize, usize), usize>,
    star: &OperationTable,
    terms: &BTreeMap<(usize, usize), Arc<Term>>,
) -> Result<OperationTable> {
    let n = tree.vertex_count();
    let cs = members.to_vec();
    for &c in &cs {
        for &c2 in &cs {
            let want = gamma.get(&(c, c2)).copied().unwrap_or(c);
            let t = terms
                .get(&(c, c2))
                .ok_or_else(|| Error::PreconditionViolated(format!("no witnessing term for ({c},{c2})")))?;
            if t.eval(star, c, c2) != want || !t.has_both_variables() {
                return Err(Error::PreconditionViolated(format!("γ({c},{c2}) = {want} is not witnessed")));
            }
        }
    }
    let branch: Vec<Option<usize>> = (0..n).map(|x| branch_of(order, b, &cs, x)).collect();
    let mut tables: HashMap<(usize, usize), OperationTable> = HashMap::new();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let v = match (branch[x], branch[y]) {
                (Some(c), Some(c2)) if tree.levels.level(x) == tree.levels.level(y) => tables
                    .entry((c, c2))
                    .or_insert_with(|| terms[&(c, c2)].table(star))
                    .apply2(x, y),
                _ => star.apply2(x, y),
            };
            values.push(v);
        }
    }
    let tau = OperationTable::new(n, 2, values)?;
    for &c in &cs {
        for &c2 in &cs {
            if tau.apply2(c, c2) != gamma.get(&(c, c2)).copied().unwrap_or(c) {
                return Err(Error::ConstructionStuck(format!("extension differs from γ at ({c},{c2})")));
            }
        }
    }
    if !tau.is_idempotent() || !tau.is_polymorphism(&tree.digraph) {
        return Err(Error::ConstructionStuck("binary extension is not an idempotent polymorphism".into()));
    }
    Ok(tau)
}

/// A certificate weakly pointing `c_set`, a set of template children of `b`
/// in the order rooted at `o`, to a singleton.
pub fn build_pointing_for_neighborhood(
    tree: &SpecialTree,
    o: usize,
    polymer: &OperationTable,
    b: usize,
    c_set: &VertexSet,
    arity_budget: u128,
) -> Result<WeakPointingCertificate> {
    Neighborhood::from_polymer(tree, o, polymer, b, c_set.clone())?.pointing(arity_budget)
}

/// A certificate weakly pointing `c_set` (inside `A` or inside `B`) to a
/// singleton, by induction on the template distance from `o`.
pub fn build_pointing_for_af(
    tree: &SpecialTree,
    c_set: &VertexSet,
    o: usize,
    polymer: &OperationTable,
    arity_budget: u128,
) -> Result<WeakPointingCertificate> {
    let st = star(polymer, tree.vertex_count());
    let order = tree.order_from(o);
    let cert = af_pointing(tree, &order, &st, c_set, o, arity_budget)?;
    if !verify_weak_pointing(&cert) {
        return Err(Error::ConstructionStuck("pointing certificate failed verification".into()));
    }
    Ok(cert)
}

fn af_pointing(
    tree: &SpecialTree,
    order: &RootedOrder,
    st: &OperationTable,
    c_set: &VertexSet,
    o: usize,
    arity_budget: u128,
) -> Result<WeakPointingCertificate> {
    let n = tree.vertex_count();
    let cs = c_set.to_vec();
    let first = *cs.first().ok_or_else(|| Error::PreconditionViolated("empty set".into()))?;
    if !cs.iter().all(|&c| tree.is_template_vertex(c)) {
        return Err(Error::PreconditionViolated("set is not inside A ∪ B".into()));
    }
    tree.e_neighborhood(c_set, 0)?;
    let k = tree.dist_e(o, first);
    if cs.iter().any(|&c| tree.dist_e(o, c) != k) {
        return Err(Error::DistanceNotUniform(o));
    }
    if cs.len() == 1 {
        return Ok(trivial_pointing(n, first));
    }
    if k == 0 {
        return Err(Error::DistanceNotUniform(o));
    }
    let parent_of = |c: usize| order.parent_template(tree, c);
    let parents: VertexSet = VertexSet::from_iter_in(n, cs.iter().map(|&c| parent_of(c)));
    if parents.len() == 1 {
        let p = parents.first().unwrap();
        let mut nb = Neighborhood::new(tree, order.clone(), st.clone(), p, c_set.clone())?;
        return nb.pointing(arity_budget);
    }
    let outer = af_pointing(tree, order, st, &parents, o, arity_budget)?;
    let d = outer
        .to
        .first()
        .filter(|_| outer.to.len() == 1)
        .ok_or_else(|| Error::ConstructionStuck("parent pointing does not end in a singleton".into()))?;
    let lift: BTreeMap<usize, usize> = parents
        .iter()
        .map(|p| (p, *cs.iter().find(|&&c| parent_of(c) == p).unwrap()))
        .collect();
    let fiber = VertexSet::from_iter_in(n, cs.iter().copied().filter(|&c| parent_of(c) == d));
    let lifted = WeakPointingCertificate {
        op: outer.op.clone(),
        from: c_set.clone(),
        to: fiber.clone(),
        witnesses: outer
            .witnesses
            .iter()
            .map(|w| w.iter().map(|v| lift.get(v).copied().unwrap_or(*v)).collect())
            .collect(),
        alpha: None,
    };
    if !verify_weak_pointing(&lifted) {
        return Err(Error::ConstructionStuck("lifted pointing leaves the preimage of d".into()));
    }
    let inner = if fiber.len() == 1 {
        trivial_pointing(n, fiber.first().unwrap())
    } else {
        Neighborhood::new(tree, order.clone(), st.clone(), d, fiber)?.pointing(arity_budget)?
    };
    compose_pointing(&lifted, &inner, arity_budget)
}

impl RootedOrder {
    /// The template neighbour of `c` one step closer to the root.
    pub fn parent_template(&self, tree: &SpecialTree, c: usize) -> usize {
        let d = tree.dist_e(self.root(), c);
        *tree
            .template_neighbors(c)
            .iter()
            .find(|&&p| tree.dist_e(self.root(), p) + 1 == d)
            .expect("non-root template vertex has a parent")
    }
}

/// Extends `tau` (idempotent polymorphism, WNU on `A` and on `B`, arity ≥ 3)
/// to a WNU polymorphism of the whole tree.
///
/// `edge_rank[e]` fixes the linear order of template edges used to break ties
/// between interior vertices; within an edge, vertices closer to `A` come first.
pub fn extend_wnu(tree: &SpecialTree, tau: &OperationTable, edge_rank: &[usize]) -> Result<OperationTable> {
    let n = tau.arity();
    let hs = tree.vertex_count();
    if n < 3 {
        return Err(Error::PreconditionViolated("arity must be at least 3".into()));
    }
    if tau.base() != hs || edge_rank.len() != tree.spec.edges.len() {
        return Err(Error::PreconditionViolated("operation or edge order does not match the tree".into()));
    }
    if !tau.is_idempotent() || !is_wnu_on(tau, &tree.a_set()) || !is_wnu_on(tau, &tree.b_set()) {
        return Err(Error::PreconditionViolated("operation is not a WNU on A and on B".into()));
    }
    if !tau.is_polymorphism(&tree.digraph) {
        return Err(Error::PreconditionViolated("operation is not a polymorphism".into()));
    }
    let delta = tree.digraph.diagonal_component(n, DEFAULT_POWER_BUDGET)?;
    let idx = TupleIndexer::new(hs, n, DEFAULT_POWER_BUDGET)?;
    let na = tree.spec.a_count;
    let nt = tree.template_vertex_count();
    let key = |v: usize| tree.interior_key(v, edge_rank).expect("interior vertex");
    let min_interior = |t: &[usize]| *t.iter().min_by_key(|&&v| key(v)).unwrap();
    let lvl = |v: usize| tree.levels.level(v);
    /// The coordinate differing from all others, when the others agree.
    fn odd_one<T: PartialEq>(t: &[T]) -> Option<usize> {
        let common = if t[0] == t[1] || t[0] == t[2] { &t[0] } else { &t[1] };
        let mut diff = (0..t.len()).filter(|&j| t[j] != *common);
        match (diff.next(), diff.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }
    let mut values = vec![0usize; idx.len()];
    let mut t = vec![0usize; n];
    let mut perm = vec![0usize; n];
    for (code, slot) in values.iter_mut().enumerate() {
        idx.decode_into(code, &mut t);
        let in_a = t.iter().all(|&v| v < na);
        let in_b = t.iter().all(|&v| (na..nt).contains(&v));
        *slot = if in_a || in_b {
            tau.eval(&t)
        } else if delta.contains(code) {
            let edges: Vec<usize> = t
                .iter()
                .map(|&v| tree.path_of(v).ok_or_else(|| Error::ConstructionStuck("template vertex in a mixed diagonal tuple".into())))
                .collect::<Result<_>>()?;
            if edges.iter().all(|&e| e == edges[0]) {
                min_interior(&t)
            } else if let Some(i) = odd_one(&edges) {
                perm[0] = t[i];
                let mut w = 1;
                for (j, &v) in t.iter().enumerate() {
                    if j != i {
                        perm[w] = v;
                        w += 1;
                    }
                }
                tau.eval(&perm)
            } else {
                tau.eval(&t)
            }
        } else {
            let levels: Vec<usize> = t.iter().map(|&v| lvl(v)).collect();
            if levels.iter().all(|&l| l == levels[0]) {
                min_interior(&t)
            } else if let Some(i) = odd_one(&levels) {
                t[i]
            } else {
                t[0]
            }
        };
    }
    let out = OperationTable::new(hs, n, values)?;
    if !out.is_wnu() || !out.is_polymorphism(&tree.digraph) {
        return Err(Error::ConstructionStuck("extended operation is not a WNU polymorphism".into()));
    }
    Ok(out)
}
