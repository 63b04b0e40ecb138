//! Finite digraphs, level functions, connectivity and direct powers.
//!
//! Vertices are dense indices `0..n`. Tuples of a direct power `G^k` are
//! numbered lexicographically with the leftmost coordinate most significant,
//! see [`TupleIndexer`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::vset::VertexSet;

/// Default bound on the number of tuples a direct power may materialize.
pub const DEFAULT_POWER_BUDGET: u128 = 5_000_000;

/// Adjacency bit rows are kept only below this vertex count.
const ADJ_MATRIX_LIMIT: usize = 4096;

/// A finite digraph with vertex set `0..vertex_count`.
#[derive(Clone)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    adj: Option<Vec<VertexSet>>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Digraph {}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph, rejecting out-of-range endpoints and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &list {
            if u >= n || v >= n {
                return Err(Error::InvalidParams(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    /// Like [`Digraph::new`] but silently drops duplicate edges.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
        list.sort_unstable();
        list.dedup();
        Self::new(n, list)
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &edges {
            out[u].push(v);
            inn[v].push(u);
        }
        for l in inn.iter_mut() {
            l.sort_unstable();
        }
        let adj = (n <= ADJ_MATRIX_LIMIT).then(|| {
            out.iter()
                .map(|l| VertexSet::from_iter_in(n, l.iter().copied()))
                .collect()
        });
        Digraph {
            n,
            edges,
            out,
            inn,
            adj,
        }
    }

    /// The symmetric complete graph on `n` vertices without loops.
    pub fn symmetric_clique(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Self::from_sorted(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Out-neighbourhood as a bit set, when the digraph is small enough to keep one.
    pub fn out_set(&self, v: usize) -> Option<&VertexSet> {
        self.adj.as_ref().map(|a| &a[v])
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.adj {
            Some(a) => a[u].contains(v),
            None => self.out[u].binary_search(&v).is_ok(),
        }
    }

    /// Undirected neighbours (in- and out-), without repetition.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self.out[v].iter().chain(&self.inn[v]).copied().collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn reversed(&self) -> Digraph {
        let mut edges: Vec<_> = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        edges.sort_unstable();
        Self::from_sorted(self.n, edges)
    }

    /// Induced subgraph on `keep`; returns the subgraph and the map from new to old indices.
    pub fn induced(&self, keep: &VertexSet) -> (Digraph, Vec<usize>) {
        let old: Vec<usize> = keep.iter().filter(|&v| v < self.n).collect();
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_of[u] != usize::MAX && new_of[v] != usize::MAX)
            .map(|&(u, v)| (new_of[u], new_of[v]))
            .collect();
        edges.sort_unstable();
        (Self::from_sorted(old.len(), edges), old)
    }

    /// Weakly connected components, ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut comp = vec![usize::MAX; self.n];
        let mut result = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = result.len();
            let mut set = VertexSet::new(self.n);
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(u) = queue.pop_front() {
                set.insert(u);
                for &w in self.out[u].iter().chain(&self.inn[u]) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            result.push(set);
        }
        result
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// Connected, and the underlying undirected multigraph is acyclic.
    pub fn is_oriented_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.n
    }

    /// The level function, normalized to minimum 0 on every component.
    pub fn compute_levels(&self) -> Result<LevelAssignment> {
        let mut lvl: Vec<Option<i64>> = vec![None; self.n];
        let mut levels = vec![0usize; self.n];
        for comp in self.connected_components() {
            let s = comp.first().expect("components are nonempty");
            lvl[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            let mut members = Vec::new();
            while let Some(u) = queue.pop_front() {
                members.push(u);
                let lu = lvl[u].expect("queued vertices carry a level");
                let steps = self.out[u]
                    .iter()
                    .map(|&w| (w, lu + 1, (u, w)))
                    .chain(self.inn[u].iter().map(|&w| (w, lu - 1, (w, u))));
                for (w, want, edge) in steps {
                    match lvl[w] {
                        None => {
                            lvl[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(l) if l != want => return Err(Error::NotBalanced(edge.0, edge.1)),
                        Some(_) => {}
                    }
                }
            }
            let min = members.iter().map(|&v| lvl[v].unwrap()).min().unwrap();
            for v in members {
                levels[v] = (lvl[v].unwrap() - min) as usize;
            }
        }
        let height = levels.iter().copied().max().unwrap_or(0);
        Ok(LevelAssignment { levels, height })
    }

    /// The `k`-th direct power, materialized.
    pub fn direct_power(&self, k: usize, budget: u128) -> Result<Digraph> {
        let idx = TupleIndexer::new(self.n, k, budget)?;
        let m = self.edges.len() as u128;
        let edge_total = m.checked_pow(k as u32).unwrap_or(u128::MAX);
        if edge_total > budget.saturating_mul(4) {
            return Err(Error::BudgetExceeded {
                what: "direct power edges",
                needed: edge_total,
                budget: budget.saturating_mul(4),
            });
        }
        let mut edges = Vec::with_capacity(edge_total as usize);
        self.for_each_power_edge(k, |u, v| edges.push((idx.encode(u), idx.encode(v))));
        edges.sort_unstable();
        Ok(Self::from_sorted(idx.len(), edges))
    }

    /// Streams the edges of `G^k` as coordinate tuples, without materializing the power.
    pub fn for_each_power_edge(&self, k: usize, mut f: impl FnMut(&[usize], &[usize])) {
        let m = self.edges.len();
        if m == 0 && k > 0 {
            return;
        }
        let mut choice = vec![0usize; k];
        let mut src = vec![0usize; k];
        let mut dst = vec![0usize; k];
        loop {
            for i in 0..k {
                let (u, v) = self.edges[choice[i]];
                src[i] = u;
                dst[i] = v;
            }
            f(&src, &dst);
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < m {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// The component of `G^k` containing the diagonal, as a set of tuple indices.
    pub fn diagonal_component(&self, k: usize, budget: u128) -> Result<VertexSet> {
        let idx = TupleIndexer::new(self.n, k, budget)?;
        let mut seen = VertexSet::new(idx.len());
        let mut queue = VecDeque::new();
        for v in 0..self.n {
            let t = idx.encode(&vec![v; k]);
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
        let mut tuple = vec![0usize; k];
        while let Some(t) = queue.pop_front() {
            idx.decode_into(t, &mut tuple);
            for forward in [true, false] {
                let lists: Vec<&[usize]> = tuple
                    .iter()
                    .map(|&x| if forward { self.out_neighbors(x) } else { self.in_neighbors(x) })
                    .collect();
                for_each_product(&lists, |nb| {
                    let w = idx.encode(nb);
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                });
            }
        }
        Ok(seen)
    }

    /// Serializes in the `.dg` text format.
    pub fn to_dg(&self) -> String {
        let mut s = format!("digraph {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Parses the `.dg` text format.
    pub fn parse_dg(text: &str) -> Result<Digraph> {
        if !text.ends_with('\n') {
            return Err(Error::parse(text.lines().count(), "missing trailing newline"));
        }
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line_no = no + 1;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            match header {
                None => {
                    let parts: Vec<&str> = line.split(' ').collect();
                    if parts.len() != 3 || parts[0] != "digraph" {
                        return Err(Error::parse(line_no, "expected `digraph <n> <m>`"));
                    }
                    let n = parse_num(parts[1], line_no)?;
                    let m = parse_num(parts[2], line_no)?;
                    header = Some((n, m));
                }
                Some((n, _)) => {
                    let parts: Vec<&str> = line.split(' ').collect();
                    if parts.len() != 2 {
                        return Err(Error::parse(line_no, "expected `<u> <v>`"));
                    }
                    let u = parse_num(parts[0], line_no)?;
                    let v = parse_num(parts[1], line_no)?;
                    if u >= n || v >= n {
                        return Err(Error::parse(line_no, format!("vertex out of range 0..{n}")));
                    }
                    edges.push(((u, v), line_no));
                }
            }
        }
        let (n, m) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
        if edges.len() != m {
            return Err(Error::parse(0, format!("header announces {m} edges, found {}", edges.len())));
        }
        let mut seen = std::collections::HashSet::new();
        for &(e, line_no) in &edges {
            if !seen.insert(e) {
                return Err(Error::parse(line_no, format!("duplicate edge {} {}", e.0, e.1)));
            }
        }
        Digraph::new(n, edges.into_iter().map(|(e, _)| e))
    }
}

fn parse_num(s: &str, line: usize) -> Result<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("`{s}` is not a decimal number")));
    }
    s.parse().map_err(|_| Error::parse(line, format!("`{s}` is out of range")))
}

/// Calls `f` with every element of the cartesian product of `lists`.
pub(crate) fn for_each_product(lists: &[&[usize]], mut f: impl FnMut(&[usize])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let k = lists.len();
    let mut pos = vec![0usize; k];
    let mut cur: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < lists[i].len() {
                cur[i] = lists[i][pos[i]];
                break;
            }
            pos[i] = 0;
            cur[i] = lists[i][0];
        }
    }
}

/// Level function of a balanced digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAssignment {
    pub levels: Vec<usize>,
    pub height: usize,
}

impl LevelAssignment {
    pub fn level(&self, v: usize) -> usize {
        self.levels[v]
    }

    pub fn vertices_at(&self, level: usize) -> VertexSet {
        VertexSet::from_iter_in(
            self.levels.len(),
            self.levels
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l == level)
                .map(|(v, _)| v),
        )
    }
}

/// Lexicographic numbering of `k`-tuples over `0..n`, leftmost coordinate most significant.
#[derive(Clone, Debug)]
pub struct TupleIndexer {
    base: usize,
    arity: usize,
    len: usize,
}

impl TupleIndexer {
    pub fn new(base: usize, arity: usize, budget: u128) -> Result<Self> {
        let total = (base as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::BudgetExceeded {
                what: "tuples of the direct power",
                needed: total,
                budget,
            });
        }
        Ok(TupleIndexer {
            base,
            arity,
            len: total as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.base + x)
    }

    pub fn decode_into(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.base;
            idx /= self.base;
        }
    }

    pub fn decode(&self, idx: usize) -> Vec<usize> {
        let mut v = vec![0; self.arity];
        self.decode_into(idx, &mut v);
        v
    }
}
