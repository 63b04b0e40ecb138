//! Binary CSP engine over bitset domains.
//!
//! Homomorphism search builds one variable per source vertex; polymorphism
//! search builds one variable per indicator class. Both go through
//! [`solve_csp`]: arc consistency, then maintained-arc-consistency
//! backtracking on each connected component of the constraint graph.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::vset::{word_count, VertexSet};

/// A binary relation on `0..size`, with row sets in both directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    size: usize,
    words: usize,
    fwd: Vec<u64>,
    bwd: Vec<u64>,
}

impl Relation {
    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let words = word_count(size);
        let mut fwd = vec![0u64; size * words];
        let mut bwd = vec![0u64; size * words];
        for (a, b) in pairs {
            assert!(a < size && b < size, "pair ({a}, {b}) outside 0..{size}");
            fwd[a * words + b / 64] |= 1 << (b % 64);
            bwd[b * words + a / 64] |= 1 << (a % 64);
        }
        Relation {
            size,
            words,
            fwd,
            bwd,
        }
    }

    /// The edge relation of `h`.
    pub fn from_digraph(h: &Digraph) -> Self {
        Self::from_pairs(h.vertex_count(), h.edges().iter().copied())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.fwd[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    fn row(&self, forward: bool, v: usize) -> &[u64] {
        let r = if forward { &self.fwd } else { &self.bwd };
        &r[v * self.words..(v + 1) * self.words]
    }
}

/// Constraint `(x, y) ∈ rel`. `tag` is free for diagnostics (source edge index, rule id).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub x: usize,
    pub y: usize,
    pub rel: usize,
    pub tag: u32,
}

#[derive(Clone, Debug)]
pub struct CspInstance {
    domain_size: usize,
    words: usize,
    domains: Vec<u64>,
    relations: Vec<Arc<Relation>>,
    constraints: Vec<Constraint>,
}

impl CspInstance {
    /// `vars` variables, each with the full domain `0..domain_size`.
    pub fn new(vars: usize, domain_size: usize) -> Self {
        let words = word_count(domain_size);
        let full = VertexSet::full(domain_size);
        let mut domains = Vec::with_capacity(vars * words);
        for _ in 0..vars {
            domains.extend_from_slice(full.words());
        }
        CspInstance {
            domain_size,
            words,
            domains,
            relations: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        if self.words == 0 {
            self.domains.len()
        } else {
            self.domains.len() / self.words
        }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn domain(&self, v: usize) -> VertexSet {
        VertexSet::from_iter_in(self.domain_size, RowIter::new(self.row(v)))
    }

    pub fn domain_len(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn domain_contains(&self, v: usize, a: usize) -> bool {
        self.row(v)[a / 64] >> (a % 64) & 1 == 1
    }

    pub fn restrict_domain(&mut self, v: usize, s: &VertexSet) {
        let w = self.words;
        for (d, m) in self.domains[v * w..(v + 1) * w].iter_mut().zip(s.words()) {
            *d &= m;
        }
    }

    pub fn pin(&mut self, v: usize, a: usize) {
        self.restrict_domain(v, &VertexSet::singleton(self.domain_size, a));
    }

    pub fn add_relation(&mut self, r: Relation) -> usize {
        assert_eq!(r.size, self.domain_size);
        self.relations.push(Arc::new(r));
        self.relations.len() - 1
    }

    pub fn add_shared_relation(&mut self, r: Arc<Relation>) -> usize {
        assert_eq!(r.size, self.domain_size);
        self.relations.push(r);
        self.relations.len() - 1
    }

    pub fn relation(&self, id: usize) -> &Relation {
        &self.relations[id]
    }

    /// Adds `(x, y) ∈ rel`. A loop `x = y` is applied at once as a unary filter.
    pub fn add_constraint(&mut self, x: usize, y: usize, rel: usize, tag: u32) {
        assert!(x < self.var_count() && y < self.var_count());
        if x == y {
            let r = self.relations[rel].clone();
            let keep = VertexSet::from_iter_in(
                self.domain_size,
                (0..self.domain_size).filter(|&a| r.contains(a, a)),
            );
            self.restrict_domain(x, &keep);
        } else {
            self.constraints.push(Constraint { x, y, rel, tag });
        }
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn has_empty_domain(&self) -> bool {
        (0..self.var_count()).any(|v| self.row(v).iter().all(|&w| w == 0))
    }

    /// Whether `assignment` satisfies all domains and constraints.
    pub fn is_solution(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.var_count()
            && assignment
                .iter()
                .enumerate()
                .all(|(v, &a)| a < self.domain_size && self.domain_contains(v, a))
            && self
                .constraints
                .iter()
                .all(|c| self.relations[c.rel].contains(assignment[c.x], assignment[c.y]))
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.domains[v * self.words..(v + 1) * self.words]
    }
}

struct RowIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> RowIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        RowIter {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for RowIter<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// One variable per `x`-vertex, one constraint per `x`-edge with the edge relation of `h`.
pub fn build_instance(x: &Digraph, h: &Digraph, pins: &[(usize, usize)]) -> Result<CspInstance> {
    let mut inst = CspInstance::new(x.vertex_count(), h.vertex_count());
    for &(v, t) in pins {
        if v >= x.vertex_count() || t >= h.vertex_count() {
            return Err(Error::InvalidPin(v, t));
        }
        inst.pin(v, t);
    }
    let rel = inst.add_relation(Relation::from_digraph(h));
    for (i, &(u, v)) in x.edges().iter().enumerate() {
        inst.add_constraint(u, v, rel, i as u32);
    }
    Ok(inst)
}

/// Arcs incident to each variable, in CSR form.
struct Arcs {
    start: Vec<usize>,
    /// `(other variable, relation, this variable is the constraint's first slot)`
    list: Vec<(usize, usize, bool)>,
}

impl Arcs {
    fn new(inst: &CspInstance) -> Self {
        let n = inst.var_count();
        let mut deg = vec![0usize; n + 1];
        for c in &inst.constraints {
            deg[c.x] += 1;
            deg[c.y] += 1;
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + deg[v];
        }
        let mut fill = start.clone();
        let mut list = vec![(0, 0, false); start[n]];
        for c in &inst.constraints {
            list[fill[c.x]] = (c.y, c.rel, true);
            fill[c.x] += 1;
            list[fill[c.y]] = (c.x, c.rel, false);
            fill[c.y] += 1;
        }
        Arcs { start, list }
    }

    fn of(&self, v: usize) -> &[(usize, usize, bool)] {
        &self.list[self.start[v]..self.start[v + 1]]
    }
}

/// Mutable search state: domains with an undo trail.
struct State<'a> {
    inst: &'a CspInstance,
    arcs: &'a Arcs,
    dom: Vec<u64>,
    words: usize,
    trail_var: Vec<usize>,
    trail_words: Vec<u64>,
    sizes: Vec<usize>,
    /// Unfixed variables of the component being searched, keyed by domain size.
    open: BTreeSet<(usize, usize)>,
    tracking: Vec<bool>,
    queue: Vec<usize>,
    queued: Vec<bool>,
    scratch: Vec<u64>,
}

impl<'a> State<'a> {
    fn new(inst: &'a CspInstance, arcs: &'a Arcs) -> Self {
        let n = inst.var_count();
        let dom = inst.domains.clone();
        let words = inst.words;
        let sizes = (0..n)
            .map(|v| dom[v * words..(v + 1) * words].iter().map(|w| w.count_ones() as usize).sum())
            .collect();
        State {
            inst,
            arcs,
            dom,
            words,
            trail_var: Vec::new(),
            trail_words: Vec::new(),
            sizes,
            open: BTreeSet::new(),
            tracking: vec![false; n],
            queue: Vec::new(),
            queued: vec![false; n],
            scratch: vec![0; words],
        }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.dom[v * self.words..(v + 1) * self.words]
    }

    fn set_size(&mut self, v: usize, s: usize) {
        let old = self.sizes[v];
        if old == s {
            return;
        }
        if self.tracking[v] {
            if old > 1 {
                self.open.remove(&(old, v));
            }
            if s > 1 {
                self.open.insert((s, v));
            }
        }
        self.sizes[v] = s;
    }

    /// Intersects the domain of `v` with `mask`; returns whether it shrank.
    fn narrow(&mut self, v: usize, mask: &[u64], trail: bool) -> bool {
        let w = self.words;
        let row = &self.dom[v * w..(v + 1) * w];
        if row.iter().zip(mask).all(|(d, m)| d & !m == 0) {
            return false;
        }
        if trail {
            self.trail_var.push(v);
            self.trail_words.extend_from_slice(row);
        }
        let mut s = 0;
        for (d, m) in self.dom[v * w..(v + 1) * w].iter_mut().zip(mask) {
            *d &= m;
            s += d.count_ones() as usize;
        }
        self.set_size(v, s);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let w = self.words;
        while self.trail_var.len() > mark {
            let v = self.trail_var.pop().unwrap();
            let at = self.trail_words.len() - w;
            let s = self.trail_words[at..].iter().map(|x| x.count_ones() as usize).sum();
            self.dom[v * w..(v + 1) * w].copy_from_slice(&self.trail_words[at..]);
            self.trail_words.truncate(at);
            self.set_size(v, s);
        }
    }

    fn enqueue(&mut self, v: usize) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push(v);
        }
    }

    /// Propagates supports from queued variables to a fixpoint. False on a wipe-out.
    fn propagate(&mut self, trail: bool) -> bool {
        let mut ok = true;
        while let Some(y) = self.queue.pop() {
            self.queued[y] = false;
            if !ok {
                continue;
            }
            let arcs = self.arcs;
            for &(x, rel, y_first) in arcs.of(y) {
                let r = &self.inst.relations[rel];
                let mut support = std::mem::take(&mut self.scratch);
                support.iter_mut().for_each(|s| *s = 0);
                for b in RowIter::new(&self.dom[y * self.words..(y + 1) * self.words]) {
                    for (s, m) in support.iter_mut().zip(r.row(y_first, b)) {
                        *s |= m;
                    }
                }
                let changed = self.narrow(x, &support, trail);
                self.scratch = support;
                if changed {
                    if self.sizes[x] == 0 {
                        ok = false;
                        break;
                    }
                    self.enqueue(x);
                }
            }
        }
        ok
    }

    fn propagate_all(&mut self) -> bool {
        if (0..self.inst.var_count()).any(|v| self.sizes[v] == 0) {
            return false;
        }
        for v in (0..self.inst.var_count()).rev() {
            self.enqueue(v);
        }
        self.propagate(false)
    }
}

/// Greatest arc-consistent sub-instance, or `None` when some domain empties.
pub fn arc_consistency(inst: &CspInstance) -> Option<CspInstance> {
    let arcs = Arcs::new(inst);
    let mut st = State::new(inst, &arcs);
    if !st.propagate_all() {
        return None;
    }
    let mut out = inst.clone();
    out.domains = st.dom;
    Some(out)
}

/// Node budget for backtracking search.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Finds a solution by MAC backtracking, or `None` if none exists.
///
/// Variable order: smallest domain, then lowest index. Values ascend.
pub fn solve_csp(inst: &CspInstance, node_budget: u64) -> Result<Option<Vec<usize>>> {
    let n = inst.var_count();
    let arcs = Arcs::new(inst);
    let mut st = State::new(inst, &arcs);
    if !st.propagate_all() {
        return Ok(None);
    }
    let comps = constraint_components(inst);
    let mut nodes = 0u64;
    for comp in comps {
        if comp.iter().all(|&v| st.sizes[v] == 1) {
            continue;
        }
        if comp.len() == 1 {
            let v = comp[0];
            let a = RowIter::new(st.row(v)).next().expect("nonempty after AC");
            let mut mask = vec![0u64; st.words];
            mask[a / 64] |= 1 << (a % 64);
            st.narrow(v, &mask, false);
            continue;
        }
        for &v in &comp {
            st.tracking[v] = true;
            if st.sizes[v] > 1 {
                st.open.insert((st.sizes[v], v));
            }
        }
        let found = search_component(&mut st, &mut nodes, node_budget)?;
        for &v in &comp {
            st.tracking[v] = false;
        }
        st.open.clear();
        st.trail_var.clear();
        st.trail_words.clear();
        if !found {
            return Ok(None);
        }
    }
    let sol: Vec<usize> = (0..n)
        .map(|v| RowIter::new(st.row(v)).next().expect("assigned"))
        .collect();
    debug_assert!(inst.is_solution(&sol));
    if !inst.is_solution(&sol) {
        return Err(Error::ConstructionStuck("search produced a non-solution".into()));
    }
    Ok(Some(sol))
}

struct Frame {
    var: usize,
    values: Vec<usize>,
    next: usize,
    mark: usize,
}

fn search_component(st: &mut State<'_>, nodes: &mut u64, budget: u64) -> Result<bool> {
    let Some(&(_, v0)) = st.open.iter().next() else {
        return Ok(true);
    };
    let mut stack = vec![Frame {
        var: v0,
        values: RowIter::new(st.row(v0)).collect(),
        next: 0,
        mark: st.trail_var.len(),
    }];
    let mut mask = vec![0u64; st.words];
    while let Some(top) = stack.last_mut() {
        if top.next == top.values.len() {
            let mark = top.mark;
            stack.pop();
            st.undo_to(mark);
            continue;
        }
        let (var, a, mark) = (top.var, top.values[top.next], top.mark);
        top.next += 1;
        st.undo_to(mark);
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded {
                what: "search nodes",
                needed: *nodes as u128,
                budget: budget as u128,
            });
        }
        mask.iter_mut().for_each(|m| *m = 0);
        mask[a / 64] |= 1 << (a % 64);
        st.narrow(var, &mask, true);
        st.enqueue(var);
        if !st.propagate(true) {
            continue;
        }
        match st.open.iter().next() {
            None => return Ok(true),
            Some(&(_, v)) => {
                let frame = Frame {
                    var: v,
                    values: RowIter::new(st.row(v)).collect(),
                    next: 0,
                    mark: st.trail_var.len(),
                };
                stack.push(frame);
            }
        }
    }
    Ok(false)
}

/// Connected components of the constraint graph, each sorted, ordered by least variable.
fn constraint_components(inst: &CspInstance) -> Vec<Vec<usize>> {
    let n = inst.var_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in &inst.constraints {
        let (a, b) = (find(&mut parent, c.x), find(&mut parent, c.y));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v);
    }
    comps
}

/// Whether `map` sends every edge of `x` to an edge of `h`.
pub fn is_homomorphism(x: &Digraph, h: &Digraph, map: &[usize]) -> bool {
    map.len() == x.vertex_count()
        && map.iter().all(|&t| t < h.vertex_count())
        && x.edges().iter().all(|&(u, v)| h.has_edge(map[u], map[v]))
}

/// A verified homomorphism `x -> h` respecting `pins`, or `None`.
pub fn solve_hom(
    x: &Digraph,
    h: &Digraph,
    pins: &[(usize, usize)],
    node_budget: Option<u64>,
) -> Result<Option<Vec<usize>>> {
    let inst = build_instance(x, h, pins)?;
    let sol = solve_csp(&inst, node_budget.unwrap_or(DEFAULT_NODE_BUDGET))?;
    if let Some(map) = &sol {
        assert!(is_homomorphism(x, h, map) && pins.iter().all(|&(v, t)| map[v] == t));
    }
    Ok(sol)
}

/// All homomorphisms `x -> h` in lexicographic order, up to `limit`.
///
/// Plain depth-first enumeration in vertex order; `budget` caps visited nodes.
pub fn enumerate_homs(
    x: &Digraph,
    h: &Digraph,
    limit: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let n = x.vertex_count();
    let m = h.vertex_count();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    if m == 0 || limit == 0 {
        return Ok(out);
    }
    let mut map = vec![0usize; n];
    let mut depth = 0usize;
    let mut nodes = 0u64;
    let consistent = |map: &[usize], d: usize| {
        x.out_neighbors(d)
            .iter()
            .filter(|&&w| w <= d)
            .all(|&w| h.has_edge(map[d], map[w]))
            && x
                .in_neighbors(d)
                .iter()
                .filter(|&&w| w <= d)
                .all(|&w| h.has_edge(map[w], map[d]))
    };
    loop {
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExceeded {
                what: "enumeration nodes",
                needed: nodes as u128,
                budget: budget as u128,
            });
        }
        let ok = consistent(&map, depth);
        if ok && depth + 1 == n {
            out.push(map.clone());
            if out.len() == limit {
                return Ok(out);
            }
        }
        if ok && depth + 1 < n {
            depth += 1;
            map[depth] = 0;
            continue;
        }
        loop {
            map[depth] += 1;
            if map[depth] < m {
                break;
            }
            if depth == 0 {
                return Ok(out);
            }
            depth -= 1;
        }
    }
}

/// A nonempty (2,3)-consistent family: surviving domains and pair relations.
#[derive(Clone, Debug)]
pub struct PairFamily {
    domains: Vec<VertexSet>,
    /// `pairs[x][y]` rows indexed by values of `x`, for every `x != y`.
    pairs: Vec<Vec<Vec<VertexSet>>>,
}

impl PairFamily {
    pub fn domain(&self, v: usize) -> &VertexSet {
        &self.domains[v]
    }

    pub fn allows(&self, x: usize, a: usize, y: usize, b: usize) -> bool {
        if x == y {
            return a == b && self.domains[x].contains(a);
        }
        self.pairs[x][y][a].contains(b)
    }
}

/// (2,3)-consistency: prune pairs on every 2-set of variables until each pair
/// extends to every third variable. `None` when the family collapses.
///
/// Cost per round is `O(n^3 d^3)` for `n` variables over a `d`-element domain.
pub fn consistency_23(inst: &CspInstance) -> Option<PairFamily> {
    let n = inst.var_count();
    let d = inst.domain_size;
    let mut domains: Vec<VertexSet> = (0..n).map(|v| inst.domain(v)).collect();
    if domains.iter().any(|s| s.is_empty()) {
        return None;
    }
    let mut pairs: Vec<Vec<Vec<VertexSet>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y {
                        Vec::new()
                    } else {
                        (0..d)
                            .map(|a| {
                                if domains[x].contains(a) {
                                    domains[y].clone()
                                } else {
                                    VertexSet::new(d)
                                }
                            })
                            .collect()
                    }
                })
                .collect()
        })
        .collect();
    for c in &inst.constraints {
        let r = &inst.relations[c.rel];
        for a in 0..d {
            for b in 0..d {
                if !r.contains(a, b) {
                    pairs[c.x][c.y][a].remove(b);
                    pairs[c.y][c.x][b].remove(a);
                }
            }
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                for a in domains[x].to_vec() {
                    for b in pairs[x][y][a].to_vec() {
                        let extends = (0..n).filter(|&z| z != x && z != y).all(|z| {
                            pairs[x][z][a].intersects(&pairs[y][z][b])
                        });
                        if !extends {
                            pairs[x][y][a].remove(b);
                            pairs[y][x][b].remove(a);
                            changed = true;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for a in domains[x].to_vec() {
                if (0..n).any(|y| y != x && pairs[x][y][a].is_empty()) {
                    domains[x].remove(a);
                    for y in 0..n {
                        if y != x {
                            for b in pairs[x][y][a].to_vec() {
                                pairs[y][x][b].remove(a);
                            }
                            pairs[x][y][a] = VertexSet::new(d);
                        }
                    }
                    changed = true;
                }
            }
            if domains[x].is_empty() {
                return None;
            }
        }
        if !changed {
            break;
        }
    }
    Some(PairFamily { domains, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minpath::OrientedPath;
    use crate::spectree::{canned_triad, compile};

    fn path(s: &str) -> Digraph {
        s.parse::<OrientedPath>().unwrap().to_digraph()
    }

    #[test]
    fn edge_to_edge() {
        let e = path("1");
        assert_eq!(solve_hom(&e, &e, &[], None).unwrap(), Some(vec![0, 1]));
        assert_eq!(enumerate_homs(&e, &e, usize::MAX, 1000).unwrap().len(), 1);
        let inst = build_instance(&e, &e, &[]).unwrap();
        assert_eq!(inst.var_count(), 2);
        assert_eq!(inst.constraints().len(), 1);
    }

    #[test]
    fn two_step_path_into_edge() {
        let x = path("11");
        let h = path("1");
        assert_eq!(solve_hom(&x, &h, &[], None).unwrap(), None);
        assert!(arc_consistency(&build_instance(&x, &h, &[]).unwrap()).is_none());
        assert!(enumerate_homs(&x, &h, usize::MAX, 1000).unwrap().is_empty());
    }

    #[test]
    fn backward_pair_counts() {
        // brute force over all 8 maps of "10" into "1"
        let x = path("10");
        let h = path("1");
        let brute = (0..8)
            .filter(|m| {
                let map = [m & 1, m >> 1 & 1, m >> 2 & 1];
                is_homomorphism(&x, &h, &map)
            })
            .count();
        assert_eq!(enumerate_homs(&x, &h, usize::MAX, 1000).unwrap().len(), brute);
        assert_eq!(brute, 1);
    }

    #[test]
    fn single_vertex_maps() {
        let x = Digraph::new(1, []).unwrap();
        let h = path("110");
        assert_eq!(enumerate_homs(&x, &h, usize::MAX, 1000).unwrap().len(), 4);
        let empty = Digraph::new(0, []).unwrap();
        assert_eq!(solve_hom(&empty, &h, &[], None).unwrap(), Some(vec![]));
    }

    #[test]
    fn pins_and_invalid_pins() {
        let x = path("1");
        let h = path("11");
        let inst = build_instance(&x, &h, &[(0, 1)]).unwrap();
        assert_eq!(inst.domain(0).to_vec(), vec![1]);
        assert_eq!(solve_hom(&x, &h, &[(0, 1)], None).unwrap(), Some(vec![1, 2]));
        assert_eq!(build_instance(&x, &h, &[(0, 9)]).unwrap_err(), Error::InvalidPin(0, 9));
    }

    #[test]
    fn zigzag_path_does_not_fit_triad() {
        let x = path("110110110001111");
        let t = compile(&canned_triad()).unwrap();
        let inst = build_instance(&x, &t.digraph, &[]).unwrap();
        assert_eq!((inst.var_count(), inst.domain_size()), (16, 39));
        assert_eq!(solve_hom(&x, &t.digraph, &[], None).unwrap(), None);
    }

    #[test]
    fn triad_arm_maps_into_triad() {
        let t = compile(&canned_triad()).unwrap();
        for e in &t.spec.edges {
            let x = e.path.to_digraph();
            let map = solve_hom(&x, &t.digraph, &[], None).unwrap().unwrap();
            assert!(is_homomorphism(&x, &t.digraph, &map));
        }
    }

    #[test]
    fn loops_filter_domains() {
        let x = Digraph::new(1, [(0, 0)]).unwrap();
        let h = Digraph::new(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(solve_hom(&x, &h, &[], None).unwrap(), Some(vec![1]));
    }

    #[test]
    fn budget_is_reported() {
        let k3 = Digraph::symmetric_clique(3);
        let k4 = Digraph::symmetric_clique(4);
        let err = solve_hom(&k4, &k3, &[], Some(2)).unwrap_err();
        assert!(err.is_budget());
        assert_eq!(solve_hom(&k4, &k3, &[], None).unwrap(), None);
    }

    #[test]
    fn pair_consistency_basics() {
        let e = path("1");
        let inst = build_instance(&e, &e, &[(0, 0), (1, 1)]).unwrap();
        assert!(consistency_23(&inst).is_some());
        let k2 = Digraph::symmetric_clique(2);
        let c5 = Digraph::from_edges_dedup(5, (0..5).flat_map(|i| [(i, (i + 1) % 5), ((i + 1) % 5, i)])).unwrap();
        assert!(consistency_23(&build_instance(&c5, &k2, &[]).unwrap()).is_none());
        // K4 -> K3 survives (2,3)-consistency though no homomorphism exists
        let k3 = Digraph::symmetric_clique(3);
        let k4 = Digraph::symmetric_clique(4);
        assert!(consistency_23(&build_instance(&k4, &k3, &[]).unwrap()).is_some());
    }
}
