//! Special trees: a height-1 bipartite template `T = (A ∪ B; E)` whose
//! edges are replaced by minimal paths of a common height.
//!
//! Compiled vertex numbering is canonical: the `A` block first, then the `B`
//! block, then the interior vertices of every attached path in template-edge
//! order. Template vertices are referred to by their digraph index.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::digraph::{Digraph, LevelAssignment};
use crate::error::{Error, Result};
use crate::minpath::{common_onto_minimal_path, default_max_len, OrientedPath};
use crate::vset::VertexSet;

/// One template edge `(a, b)` together with its attached minimal path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateEdge {
    pub a: usize,
    pub b: usize,
    pub path: OrientedPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTreeSpec {
    pub a_count: usize,
    pub b_count: usize,
    pub height: usize,
    pub edges: Vec<TemplateEdge>,
}

impl SpecialTreeSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.a_count == 0 || self.b_count == 0 {
            return bad("A and B must be nonempty".into());
        }
        if self.height == 0 {
            return bad("height must be positive".into());
        }
        if self.edges.len() + 1 != self.a_count + self.b_count {
            return bad(format!(
                "template has {} edges, a tree on {} vertices needs {}",
                self.edges.len(),
                self.a_count + self.b_count,
                self.a_count + self.b_count - 1
            ));
        }
        let mut pairs = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.a >= self.a_count || e.b >= self.b_count {
                return bad(format!("edge {i} ({}, {}) out of range", e.a, e.b));
            }
            if !pairs.insert((e.a, e.b)) {
                return bad(format!("duplicate template edge ({}, {})", e.a, e.b));
            }
            if !e.path.is_minimal() {
                return bad(format!("path {} of edge {i} is not minimal", e.path));
            }
            if e.path.height() != self.height {
                return bad(format!(
                    "path {} of edge {i} has height {}, expected {}",
                    e.path,
                    e.path.height(),
                    self.height
                ));
            }
        }
        let t = Digraph::new(
            self.a_count + self.b_count,
            self.edges.iter().map(|e| (e.a, self.a_count + e.b)),
        )
        .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if !t.is_connected() {
            return bad("template is not connected".into());
        }
        Ok(())
    }

    pub fn vertex_total(&self) -> usize {
        self.a_count + self.b_count + self.edges.iter().map(|e| e.path.len() - 1).sum::<usize>()
    }

    /// `.stree` text form.
    pub fn to_stree(&self) -> String {
        let mut s = format!(
            "stree {} {} {} {}\n",
            self.a_count,
            self.b_count,
            self.height,
            self.edges.len()
        );
        for e in &self.edges {
            writeln!(s, "{} {} {}", e.a, e.b, e.path).unwrap();
        }
        s
    }

    pub fn parse_stree(text: &str) -> Result<SpecialTreeSpec> {
        let mut header: Option<[usize; 4]> = None;
        let mut edges = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line_no = no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    if parts.len() != 5 || parts[0] != "stree" {
                        return Err(Error::parse(line_no, "expected `stree <|A|> <|B|> <h> <m>`"));
                    }
                    let mut nums = [0usize; 4];
                    for (slot, s) in nums.iter_mut().zip(&parts[1..]) {
                        *slot = s
                            .parse()
                            .map_err(|_| Error::parse(line_no, format!("`{s}` is not a number")))?;
                    }
                    header = Some(nums);
                }
                Some(_) => {
                    if parts.len() != 3 {
                        return Err(Error::parse(line_no, "expected `<a> <b> <path>`"));
                    }
                    let a = parts[0]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "bad A index"))?;
                    let b = parts[1]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "bad B index"))?;
                    let path: OrientedPath = parts[2]
                        .parse()
                        .map_err(|_| Error::parse(line_no, "bad path literal"))?;
                    edges.push(TemplateEdge { a, b, path });
                }
            }
        }
        let [a_count, b_count, height, m] = header.ok_or_else(|| Error::parse(0, "missing header"))?;
        if edges.len() != m {
            return Err(Error::parse(0, format!("header announces {m} edges, found {}", edges.len())));
        }
        let spec = SpecialTreeSpec {
            a_count,
            b_count,
            height,
            edges,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The same tree with every edge reversed: `A` and `B` swap roles.
    pub fn reversed(&self) -> SpecialTreeSpec {
        SpecialTreeSpec {
            a_count: self.b_count,
            b_count: self.a_count,
            height: self.height,
            edges: self
                .edges
                .iter()
                .map(|e| TemplateEdge {
                    a: e.b,
                    b: e.a,
                    path: OrientedPath::new(e.path.directions().iter().rev().map(|&d| d).collect()),
                })
                .collect(),
        }
    }
}

/// The 39-vertex special triad with NP-complete H-coloring.
///
/// `A = {c, t1, t2, t3}`, `B = {w1, w2, w3}`; each arm is `c -> w_i <- t_i`.
pub fn canned_triad() -> SpecialTreeSpec {
    let e = |a, b, p: &str| TemplateEdge {
        a,
        b,
        path: p.parse().expect("literal"),
    };
    SpecialTreeSpec {
        a_count: 4,
        b_count: 3,
        height: 4,
        edges: vec![
            e(0, 0, "111011"),
            e(1, 0, "110111"),
            e(0, 1, "110111"),
            e(2, 1, "111011"),
            e(0, 2, "11100111"),
            e(3, 2, "111011"),
        ],
    }
}

/// The one-edge template carrying a single path.
pub fn single_path_spec(path: OrientedPath) -> SpecialTreeSpec {
    SpecialTreeSpec {
        a_count: 1,
        b_count: 1,
        height: path.height(),
        edges: vec![TemplateEdge { a: 0, b: 0, path }],
    }
}

/// What a compiled vertex is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    A(usize),
    B(usize),
    /// Interior vertex of the path on template edge `edge`, at position `pos` (1-based from `a`).
    Interior { edge: usize, pos: usize },
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Role::A(i) => write!(f, "A{i}"),
            Role::B(j) => write!(f, "B{j}"),
            Role::Interior { edge, pos } => write!(f, "P{edge}:{pos}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpecialTree {
    pub spec: SpecialTreeSpec,
    pub digraph: Digraph,
    pub levels: LevelAssignment,
    pub roles: Vec<Role>,
    /// Vertex ids along every template edge's path, from `a` to `b`.
    pub edge_vertices: Vec<Vec<usize>>,
    template_adj: Vec<Vec<usize>>,
    template_dist: Vec<Vec<usize>>,
}

/// Compiles a spec into a digraph with canonical numbering.
pub fn compile(spec: &SpecialTreeSpec) -> Result<SpecialTree> {
    spec.validate()?;
    let (na, nb) = (spec.a_count, spec.b_count);
    let n = spec.vertex_total();
    let mut roles: Vec<Role> = (0..na).map(Role::A).chain((0..nb).map(Role::B)).collect();
    let mut edges = Vec::with_capacity(n - 1);
    let mut edge_vertices = Vec::with_capacity(spec.edges.len());
    for (ei, e) in spec.edges.iter().enumerate() {
        let len = e.path.len();
        let mut ids = Vec::with_capacity(len + 1);
        ids.push(e.a);
        for pos in 1..len {
            ids.push(roles.len());
            roles.push(Role::Interior { edge: ei, pos });
        }
        ids.push(na + e.b);
        for (i, &d) in e.path.directions().iter().enumerate() {
            edges.push(if d { (ids[i], ids[i + 1]) } else { (ids[i + 1], ids[i]) });
        }
        edge_vertices.push(ids);
    }
    let digraph = Digraph::new(n, edges).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let levels = digraph.compute_levels()?;
    let tn = na + nb;
    let mut template_adj = vec![Vec::new(); tn];
    for e in &spec.edges {
        template_adj[e.a].push(na + e.b);
        template_adj[na + e.b].push(e.a);
    }
    for l in template_adj.iter_mut() {
        l.sort_unstable();
    }
    let template_dist = (0..tn).map(|s| bfs_dist(&template_adj, s)).collect();
    let tree = SpecialTree {
        spec: spec.clone(),
        digraph,
        levels,
        roles,
        edge_vertices,
        template_adj,
        template_dist,
    };
    debug_assert!(tree.digraph.is_oriented_tree());
    Ok(tree)
}

fn bfs_dist(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if d[w] == usize::MAX {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

impl SpecialTree {
    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    pub fn a_set(&self) -> VertexSet {
        VertexSet::from_iter_in(self.vertex_count(), 0..self.spec.a_count)
    }

    pub fn b_set(&self) -> VertexSet {
        let na = self.spec.a_count;
        VertexSet::from_iter_in(self.vertex_count(), na..na + self.spec.b_count)
    }

    pub fn template_vertex_count(&self) -> usize {
        self.spec.a_count + self.spec.b_count
    }

    pub fn is_template_vertex(&self, v: usize) -> bool {
        v < self.template_vertex_count()
    }

    pub fn is_a(&self, v: usize) -> bool {
        v < self.spec.a_count
    }

    /// The set (`A` or `B`) containing template vertex `v`.
    pub fn side_of(&self, v: usize) -> VertexSet {
        if self.is_a(v) {
            self.a_set()
        } else {
            self.b_set()
        }
    }

    /// Template edge owning an interior vertex.
    pub fn path_of(&self, v: usize) -> Option<usize> {
        match self.roles[v] {
            Role::Interior { edge, .. } => Some(edge),
            _ => None,
        }
    }

    /// Template neighbours of a template vertex.
    pub fn template_neighbors(&self, v: usize) -> &[usize] {
        &self.template_adj[v]
    }

    /// Distance of two template vertices in the template tree.
    pub fn dist_e(&self, x: usize, y: usize) -> usize {
        self.template_dist[x][y]
    }

    /// `E_k(S)` by the inductive definition.
    pub fn e_neighborhood(&self, s: &VertexSet, k: usize) -> Result<VertexSet> {
        self.check_one_side(s)?;
        let mut cur = s.clone();
        for _ in 0..k {
            let mut next = VertexSet::new(self.vertex_count());
            for v in cur.iter() {
                for &w in &self.template_adj[v] {
                    next.insert(w);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// `E_k(S)` by distance and parity.
    pub fn e_neighborhood_closed_form(&self, s: &VertexSet, k: usize) -> Result<VertexSet> {
        self.check_one_side(s)?;
        let n = self.vertex_count();
        Ok(VertexSet::from_iter_in(
            n,
            (0..self.template_vertex_count()).filter(|&x| {
                s.iter().any(|c| {
                    let d = self.dist_e(x, c);
                    d <= k && d % 2 == k % 2
                })
            }),
        ))
    }

    fn check_one_side(&self, s: &VertexSet) -> Result<()> {
        let na = self.spec.a_count;
        let tn = self.template_vertex_count();
        let all_a = s.iter().all(|v| v < na);
        let all_b = s.iter().all(|v| (na..tn).contains(&v));
        if all_a || all_b {
            Ok(())
        } else {
            Err(Error::MixedLevels)
        }
    }

    /// The ⪯ order rooted at `o`.
    pub fn order_from(&self, o: usize) -> RootedOrder {
        RootedOrder::new(&self.digraph, o)
    }

    /// Linear order ⊑ key of an interior vertex for a given template-edge order.
    pub fn interior_key(&self, v: usize, edge_rank: &[usize]) -> Option<(usize, usize)> {
        match self.roles[v] {
            Role::Interior { edge, pos } => Some((edge_rank[edge], pos)),
            _ => None,
        }
    }

    /// Role sidecar lines `<vertex> <role>`.
    pub fn roles_text(&self) -> String {
        let mut s = String::new();
        for (v, r) in self.roles.iter().enumerate() {
            writeln!(s, "{v} {r}").unwrap();
        }
        s
    }
}

/// `u ⪯ v` iff `u` lies on the unique oriented path from the root to `v`.
#[derive(Clone, Debug)]
pub struct RootedOrder {
    root: usize,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl RootedOrder {
    pub fn new(tree: &Digraph, root: usize) -> Self {
        let n = tree.vertex_count();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        parent[root] = root;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for w in tree.neighbors(u) {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = u;
                    q.push_back(w);
                }
            }
        }
        RootedOrder {
            root,
            parent,
            depth,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != self.root && self.parent[v] != usize::MAX).then(|| self.parent[v])
    }

    pub fn preceq(&self, u: usize, v: usize) -> bool {
        if self.depth[u] == usize::MAX || self.depth[v] == usize::MAX {
            return false;
        }
        let mut cur = v;
        while self.depth[cur] > self.depth[u] {
            cur = self.parent[cur];
        }
        cur == u
    }

    pub fn strictly_below(&self, u: usize, v: usize) -> bool {
        u != v && self.preceq(u, v)
    }
}

/// `u ⪯ v` in the order rooted at `o` of an oriented tree.
pub fn preceq(tree: &Digraph, o: usize, u: usize, v: usize) -> bool {
    RootedOrder::new(tree, o).preceq(u, v)
}

/// Top and bottom levels with the template relation recovered from a balanced tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopBottom {
    pub a: VertexSet,
    pub b: VertexSet,
    pub e: Vec<(usize, usize)>,
}

/// Recovers `A`, `B` and `E` from a balanced oriented tree of height `h`.
///
/// `E` is the set of endpoint pairs of homomorphic images of a common
/// minimal path mapping onto every level-0-to-level-`h` minimal path of `g`.
pub fn recover_top_bottom(g: &Digraph, h: usize) -> Result<TopBottom> {
    let lv = g.compute_levels()?;
    if lv.height != h {
        return Err(Error::InvalidParams(format!(
            "digraph has height {}, expected {h}",
            lv.height
        )));
    }
    let a = lv.vertices_at(0);
    let b = lv.vertices_at(h);
    let mut family = BTreeSet::new();
    for s in a.iter() {
        for (_, path) in minimal_paths_from(g, &lv, s) {
            family.insert(path);
        }
    }
    let family: Vec<OrientedPath> = family.into_iter().collect();
    if family.is_empty() {
        return Ok(TopBottom { a, b, e: Vec::new() });
    }
    let q = common_onto_minimal_path(&family, default_max_len(&family))?;
    let mut e = Vec::new();
    for s in a.iter() {
        let mut reach = VertexSet::singleton(g.vertex_count(), s);
        for &d in q.directions() {
            let mut next = VertexSet::new(g.vertex_count());
            for v in reach.iter() {
                let nb = if d { g.out_neighbors(v) } else { g.in_neighbors(v) };
                for &w in nb {
                    next.insert(w);
                }
            }
            reach = next;
        }
        for t in reach.iter().filter(|&t| b.contains(t)) {
            e.push((s, t));
        }
    }
    Ok(TopBottom { a, b, e })
}

/// Same as [`recover_top_bottom`] but reads `E` off the level structure:
/// pairs joined through vertices of intermediate levels only.
pub fn recover_top_bottom_levels_only(g: &Digraph, h: usize) -> Result<TopBottom> {
    let lv = g.compute_levels()?;
    let a = lv.vertices_at(0);
    let b = lv.vertices_at(h);
    let mut e = Vec::new();
    for s in a.iter() {
        for (t, _) in minimal_paths_from(g, &lv, s) {
            e.push((s, t));
        }
    }
    e.sort_unstable();
    e.dedup();
    Ok(TopBottom { a, b, e })
}

/// Tree paths from a level-0 vertex to top-level vertices through intermediate levels.
fn minimal_paths_from(g: &Digraph, lv: &LevelAssignment, s: usize) -> Vec<(usize, OrientedPath)> {
    let h = lv.height;
    let n = g.vertex_count();
    let mut prev: Vec<Option<(usize, bool)>> = vec![None; n];
    let mut seen = VertexSet::singleton(n, s);
    let mut q = VecDeque::from([s]);
    let mut found = Vec::new();
    while let Some(u) = q.pop_front() {
        if u != s && lv.level(u) == h {
            let mut dirs = Vec::new();
            let mut cur = u;
            while let Some((p, d)) = prev[cur] {
                dirs.push(d);
                cur = p;
            }
            dirs.reverse();
            found.push((u, OrientedPath::new(dirs)));
            continue;
        }
        let steps = g
            .out_neighbors(u)
            .iter()
            .map(|&w| (w, true))
            .chain(g.in_neighbors(u).iter().map(|&w| (w, false)));
        for (w, d) in steps {
            let l = lv.level(w);
            if l == 0 || seen.contains(w) {
                continue;
            }
            if l == h || (0 < l && l < h) {
                seen.insert(w);
                prev[w] = Some((u, d));
                q.push_back(w);
            }
        }
    }
    found
}

/// Reads the special-tree structure off an arbitrary digraph, when it has one.
///
/// Returns the spec and the map from compiled vertex ids to `g`'s vertex ids.
pub fn decompose_special_tree(g: &Digraph) -> Result<(SpecialTreeSpec, Vec<usize>)> {
    if !g.is_oriented_tree() {
        return Err(Error::InvalidSpec("not an oriented tree".into()));
    }
    let lv = g.compute_levels()?;
    let h = lv.height;
    if h == 0 {
        return Err(Error::InvalidSpec("height 0".into()));
    }
    let a: Vec<usize> = lv.vertices_at(0).to_vec();
    let b: Vec<usize> = lv.vertices_at(h).to_vec();
    let mut b_index = vec![usize::MAX; g.vertex_count()];
    for (j, &v) in b.iter().enumerate() {
        b_index[v] = j;
    }
    let mut edges = Vec::new();
    let mut interiors: Vec<Vec<usize>> = Vec::new();
    for (i, &s) in a.iter().enumerate() {
        for &first in g.out_neighbors(s) {
            let mut dirs = vec![true];
            let mut visited = Vec::new();
            let (mut prev, mut cur) = (s, first);
            while lv.level(cur) != h {
                if lv.level(cur) == 0 {
                    return Err(Error::InvalidSpec(format!("vertex {cur} returns to level 0")));
                }
                visited.push(cur);
                let nbs = g.neighbors(cur);
                if nbs.len() != 2 {
                    return Err(Error::InvalidSpec(format!(
                        "interior vertex {cur} has degree {}",
                        nbs.len()
                    )));
                }
                let next = if nbs[0] == prev { nbs[1] } else { nbs[0] };
                dirs.push(g.has_edge(cur, next));
                prev = cur;
                cur = next;
            }
            edges.push(TemplateEdge {
                a: i,
                b: b_index[cur],
                path: OrientedPath::new(dirs),
            });
            interiors.push(visited);
        }
    }
    let spec = SpecialTreeSpec {
        a_count: a.len(),
        b_count: b.len(),
        height: h,
        edges,
    };
    spec.validate()?;
    if spec.vertex_total() != g.vertex_count() {
        return Err(Error::InvalidSpec("interior vertices not covered by minimal paths".into()));
    }
    let mut map: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    for v in interiors {
        map.extend(v);
    }
    Ok((spec, map))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triad_compiles() {
        let spec = canned_triad();
        for e in &spec.edges {
            assert!(e.path.is_minimal() && e.path.height() == 4, "{}", e.path);
        }
        assert_eq!(spec.vertex_total(), 39);
        let t = compile(&spec).unwrap();
        assert_eq!(t.vertex_count(), 39);
        assert_eq!(t.digraph.edge_count(), 38);
        assert_eq!(t.levels.height, 4);
        assert!(t.digraph.is_oriented_tree());
        assert_eq!(t.levels.vertices_at(0), t.a_set());
        assert_eq!(t.levels.vertices_at(4), t.b_set());
    }

    #[test]
    fn single_edge_spec() {
        let t = compile(&single_path_spec("1".parse().unwrap())).unwrap();
        assert_eq!(t.digraph, Digraph::new(2, [(0, 1)]).unwrap());
        let tb = recover_top_bottom(&t.digraph, 1).unwrap();
        assert_eq!(tb.a.to_vec(), vec![0]);
        assert_eq!(tb.b.to_vec(), vec![1]);
        assert_eq!(tb.e, vec![(0, 1)]);
    }

    #[test]
    fn triad_with_zigzag_path() {
        let t = compile(&single_path_spec("110110110001111".parse().unwrap())).unwrap();
        assert_eq!(t.vertex_count(), 16);
        assert_eq!(t.levels.height, 5);
    }

    #[test]
    fn triad_distances_and_neighbourhoods() {
        let t = compile(&canned_triad()).unwrap();
        let (c, t1, t2) = (0, 1, 2);
        let (w1, w2, w3) = (4, 5, 6);
        assert_eq!(t.dist_e(c, c), 0);
        assert_eq!(t.dist_e(c, t1), 2);
        assert_eq!(t.dist_e(t1, t2), 4);
        let n = t.vertex_count();
        let sc = VertexSet::singleton(n, c);
        assert_eq!(t.e_neighborhood(&sc, 0).unwrap(), sc);
        assert_eq!(t.e_neighborhood(&sc, 1).unwrap().to_vec(), vec![w1, w2, w3]);
        assert_eq!(t.e_neighborhood(&sc, 2).unwrap(), t.a_set());
        let mixed = VertexSet::from_iter_in(n, [c, w1]);
        assert_eq!(t.e_neighborhood(&mixed, 1), Err(Error::MixedLevels));
        let interior = VertexSet::singleton(n, 10);
        assert_eq!(t.e_neighborhood(&interior, 1), Err(Error::MixedLevels));
    }

    #[test]
    fn triad_order() {
        let t = compile(&canned_triad()).unwrap();
        let ord = t.order_from(0);
        assert!(ord.preceq(0, 4) && ord.preceq(4, 1) && ord.preceq(0, 1));
        assert!(!ord.preceq(1, 4));
        for v in 0..t.vertex_count() {
            assert!(ord.preceq(0, v) && ord.preceq(v, v));
        }
    }

    #[test]
    fn stree_round_trip() {
        let spec = canned_triad();
        let text = spec.to_stree();
        assert!(text.starts_with("stree 4 3 4 6\n0 0 111011\n"));
        assert_eq!(SpecialTreeSpec::parse_stree(&text).unwrap(), spec);
        assert!(SpecialTreeSpec::parse_stree("stree 1 1 2 1\n0 0 101\n").is_err());
        assert!(SpecialTreeSpec::parse_stree("stree 2 1 1 1\n0 0 1\n").is_err());
    }

    #[test]
    fn invalid_specs() {
        let mut spec = canned_triad();
        spec.edges[1].a = 0;
        assert!(matches!(compile(&spec), Err(Error::InvalidSpec(_))));
        let mut spec = canned_triad();
        spec.edges[0].path = "11011".parse().unwrap();
        assert!(matches!(compile(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn decompose_inverts_compile() {
        let spec = canned_triad();
        let t = compile(&spec).unwrap();
        let (back, map) = decompose_special_tree(&t.digraph).unwrap();
        assert_eq!(back.vertex_total(), 39);
        let t2 = compile(&back).unwrap();
        for &(u, v) in t2.digraph.edges() {
            assert!(t.digraph.has_edge(map[u], map[v]));
        }
    }

    #[test]
    fn reversal_swaps_sides() {
        let spec = canned_triad();
        let r = compile(&spec.reversed()).unwrap();
        assert_eq!(r.a_set().len(), 3);
        assert_eq!(r.b_set().len(), 4);
        assert_eq!(r.digraph.edge_count(), 38);
    }
}
