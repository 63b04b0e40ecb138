//! Oriented paths written as direction strings, minimality, and onto
//! homomorphisms between paths.
//!
//! A path of length `L` has vertices `0..=L`; character `i` describes the
//! edge between vertices `i` and `i + 1`: `1` is `i -> i+1`, `0` is `i+1 -> i`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::digraph::{for_each_product, Digraph};
use crate::error::{Error, Result};

/// Reachable-state cap for the joint product search before falling back to pairwise folding.
const JOINT_STATE_CAP: usize = 2_000_000;

/// An oriented path as a sequence of edge directions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedPath {
    dirs: Vec<bool>,
}

impl OrientedPath {
    pub fn new(dirs: Vec<bool>) -> Self {
        OrientedPath { dirs }
    }

    pub fn directions(&self) -> &[bool] {
        &self.dirs
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.dirs.len() + 1
    }

    /// Forward edges minus backward edges.
    pub fn net_length(&self) -> i64 {
        self.dirs.iter().map(|&d| if d { 1 } else { -1 }).sum()
    }

    fn raw_levels(&self) -> Vec<i64> {
        let mut lv = Vec::with_capacity(self.dirs.len() + 1);
        let mut cur = 0i64;
        lv.push(cur);
        for &d in &self.dirs {
            cur += if d { 1 } else { -1 };
            lv.push(cur);
        }
        lv
    }

    /// Levels of the vertices, shifted so that the minimum is 0.
    pub fn levels(&self) -> Vec<usize> {
        let raw = self.raw_levels();
        let min = *raw.iter().min().unwrap();
        raw.into_iter().map(|l| (l - min) as usize).collect()
    }

    pub fn height(&self) -> usize {
        let raw = self.raw_levels();
        (raw.iter().max().unwrap() - raw.iter().min().unwrap()) as usize
    }

    /// Initial vertex at level 0, terminal at the top level, everything else strictly between.
    pub fn is_minimal(&self) -> bool {
        if self.dirs.is_empty() {
            return true;
        }
        let lv = self.levels();
        let h = *lv.iter().max().unwrap();
        let last = lv.len() - 1;
        lv[0] == 0
            && lv[last] == h
            && lv[1..last].iter().all(|&l| 0 < l && l < h)
    }

    /// Edge set on vertices `0..=len`.
    pub fn to_digraph(&self) -> Digraph {
        let edges = self
            .dirs
            .iter()
            .enumerate()
            .map(|(i, &d)| if d { (i, i + 1) } else { (i + 1, i) });
        Digraph::new(self.vertex_count(), edges).expect("path edges are distinct")
    }

    /// Whether there is an edge from position `a` to position `b`.
    fn edge(&self, a: usize, b: usize) -> bool {
        if b == a + 1 {
            self.dirs[a]
        } else if a == b + 1 {
            !self.dirs[b]
        } else {
            false
        }
    }

    /// Positions `b` with an edge `a -> b` (forward) or `b -> a` (backward).
    fn steps(&self, a: usize, forward: bool) -> impl Iterator<Item = usize> + '_ {
        let down = a.checked_sub(1);
        let up = (a < self.dirs.len()).then_some(a + 1);
        [down, up].into_iter().flatten().filter(move |&b| {
            if forward {
                self.edge(a, b)
            } else {
                self.edge(b, a)
            }
        })
    }
}

impl FromStr for OrientedPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.bytes()
            .map(|b| match b {
                b'1' => Ok(true),
                b'0' => Ok(false),
                _ => Err(Error::parse(0, format!("`{s}` is not a path literal over {{0,1}}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(OrientedPath::new)
    }
}

impl fmt::Display for OrientedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.dirs {
            f.write_str(if d { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for OrientedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrientedPath({self})")
    }
}

/// A homomorphism `q -> p` sending initial to initial and terminal to terminal.
///
/// Any such map is onto: consecutive images differ by one position, so the
/// walk from `0` to `p.len()` passes every position of `p`.
pub fn path_onto_hom(q: &OrientedPath, p: &OrientedPath) -> Option<Vec<usize>> {
    let (lq, lp) = (q.len(), p.len());
    let mut reach = vec![vec![false; lp + 1]; lq + 1];
    reach[0][0] = true;
    for i in 0..lq {
        let fwd = q.dirs[i];
        for j in 0..=lp {
            if reach[i][j] {
                for t in p.steps(j, fwd) {
                    reach[i + 1][t] = true;
                }
            }
        }
    }
    if !reach[lq][lp] {
        return None;
    }
    let mut map = vec![0usize; lq + 1];
    map[lq] = lp;
    for i in (0..lq).rev() {
        let fwd = q.dirs[i];
        let next = map[i + 1];
        map[i] = (0..=lp)
            .find(|&j| reach[i][j] && p.steps(j, fwd).any(|t| t == next))
            .expect("reachability table is consistent");
    }
    Some(map)
}

/// Checks a position map is an endpoint-preserving onto homomorphism `q -> p`.
pub fn is_onto_path_hom(q: &OrientedPath, p: &OrientedPath, map: &[usize]) -> bool {
    if map.len() != q.vertex_count() || map[0] != 0 || map[q.len()] != p.len() {
        return false;
    }
    let edges_ok = q.dirs.iter().enumerate().all(|(i, &d)| {
        let (a, b) = if d { (map[i], map[i + 1]) } else { (map[i + 1], map[i]) };
        a <= p.len() && b <= p.len() && p.edge(a, b)
    });
    let mut hit = vec![false; p.vertex_count()];
    for &m in map {
        if m < hit.len() {
            hit[m] = true;
        }
    }
    edges_ok && hit.into_iter().all(|h| h)
}

/// A minimal path of the common height mapping onto every input, endpoints to endpoints.
///
/// Any such path is a walk in the direct product of the inputs from the tuple
/// of initial vertices to the tuple of terminal vertices, so a breadth-first
/// search in the product finds the shortest one. Large families are folded
/// pairwise. The result is verified against every input.
pub fn common_onto_minimal_path(paths: &[OrientedPath], max_len: usize) -> Result<OrientedPath> {
    let first = paths
        .first()
        .ok_or_else(|| Error::InvalidParams("empty path family".into()))?;
    for p in paths {
        if !p.is_minimal() {
            return Err(Error::NotMinimal(p.to_string()));
        }
        if p.height() != first.height() {
            return Err(Error::HeightMismatch(first.height() as i64, p.height() as i64));
        }
    }
    let mut uniq: Vec<OrientedPath> = paths.to_vec();
    uniq.sort();
    uniq.dedup();
    let q = if uniq.len() == 1 {
        uniq.pop().unwrap()
    } else {
        match product_walk(&uniq, JOINT_STATE_CAP) {
            Some(q) => q,
            None => {
                let mut acc = uniq[0].clone();
                for p in &uniq[1..] {
                    acc = product_walk(&[acc, p.clone()], usize::MAX)
                        .expect("pairwise product walk exists for minimal paths of equal height");
                }
                acc
            }
        }
    };
    if q.len() > max_len {
        return Err(Error::SearchExhausted(max_len));
    }
    debug_assert!(q.is_minimal());
    for p in paths {
        let map = path_onto_hom(&q, p).ok_or(Error::SearchExhausted(max_len))?;
        if !is_onto_path_hom(&q, p, &map) {
            return Err(Error::SearchExhausted(max_len));
        }
    }
    Ok(q)
}

/// Default length cap: four times the total input length.
pub fn default_max_len(paths: &[OrientedPath]) -> usize {
    4 * paths.iter().map(|p| p.len()).sum::<usize>().max(1)
}

/// Shortest walk in the product of `paths` from all-initial to all-terminal.
/// Returns `None` when more than `cap` states would be visited.
fn product_walk(paths: &[OrientedPath], cap: usize) -> Option<OrientedPath> {
    let start: Vec<usize> = vec![0; paths.len()];
    let goal: Vec<usize> = paths.iter().map(|p| p.len()).collect();
    let mut parent: HashMap<Vec<usize>, (Vec<usize>, bool)> = HashMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    parent.insert(start.clone(), (Vec::new(), true));
    while let Some(s) = queue.pop_front() {
        if s == goal {
            let mut dirs = Vec::new();
            let mut cur = s;
            while cur != start {
                let (prev, d) = parent[&cur].clone();
                dirs.push(d);
                cur = prev;
            }
            dirs.reverse();
            return Some(OrientedPath::new(dirs));
        }
        for fwd in [true, false] {
            let opts: Vec<Vec<usize>> = s
                .iter()
                .zip(paths)
                .map(|(&pos, p)| p.steps(pos, fwd).collect())
                .collect();
            let lists: Vec<&[usize]> = opts.iter().map(|v| v.as_slice()).collect();
            let mut fresh = Vec::new();
            for_each_product(&lists, |t| {
                if !parent.contains_key(t) {
                    fresh.push(t.to_vec());
                }
            });
            for t in fresh {
                if parent.contains_key(&t) {
                    continue;
                }
                parent.insert(t.clone(), (s.clone(), fwd));
                queue.push_back(t);
            }
        }
        if parent.len() > cap {
            return None;
        }
    }
    None
}

/// Counts of minimal paths of height `h` by length, for lengths `0..=max_len`.
pub fn minimal_path_counts(h: usize, max_len: usize) -> Result<Vec<u128>> {
    if h == 0 {
        return Err(Error::InvalidParams("minimal paths need height >= 1".into()));
    }
    // ways[r][l]: walks from level l with r steps left that end at h,
    // visiting only levels 1..h-1 before the final step.
    let mut ways = vec![vec![0u128; h + 1]; max_len + 1];
    ways[0][h] = 1;
    for r in 1..=max_len {
        for l in 0..h {
            let mut total = 0u128;
            for nl in [l.wrapping_sub(1), l + 1] {
                if nl > h {
                    continue;
                }
                let allowed = if r == 1 { nl == h } else { (1..h).contains(&nl) };
                if allowed {
                    total = total
                        .checked_add(ways[r - 1][nl])
                        .ok_or_else(|| Error::InvalidParams("path length too large to count".into()))?;
                }
            }
            ways[r][l] = total;
        }
    }
    Ok((0..=max_len).map(|r| ways[r][0]).collect())
}

/// Samples a minimal path of height `h` and length at most `max_len`,
/// uniformly among all such paths.
pub fn sample_minimal_path<R: Rng>(rng: &mut R, h: usize, max_len: usize) -> Result<OrientedPath> {
    let counts = minimal_path_counts(h, max_len)?;
    let total: u128 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidParams(format!(
            "no minimal path of height {h} has length <= {max_len}"
        )));
    }
    let mut pick = rng.gen_range(0..total);
    let mut len = 0;
    for (l, &c) in counts.iter().enumerate() {
        if pick < c {
            len = l;
            break;
        }
        pick -= c;
    }
    // Per-length suffix counts, recomputed for the chosen length.
    let mut ways = vec![vec![0u128; h + 1]; len + 1];
    ways[0][h] = 1;
    for r in 1..=len {
        for l in 0..h {
            for nl in [l.wrapping_sub(1), l + 1] {
                if nl > h {
                    continue;
                }
                let allowed = if r == 1 { nl == h } else { (1..h).contains(&nl) };
                if allowed {
                    ways[r][l] += ways[r - 1][nl];
                }
            }
        }
    }
    let mut dirs = Vec::with_capacity(len);
    let mut level = 0usize;
    for r in (1..=len).rev() {
        let up_ok = if r == 1 { level + 1 == h } else { (1..h).contains(&(level + 1)) };
        let up = if up_ok { ways[r - 1][level + 1] } else { 0 };
        let down_ok = level >= 1 && r > 1 && (1..h).contains(&(level - 1));
        let down = if down_ok { ways[r - 1][level - 1] } else { 0 };
        let go_up = rng.gen_range(0..up + down) < up;
        dirs.push(go_up);
        level = if go_up { level + 1 } else { level - 1 };
    }
    Ok(OrientedPath::new(dirs))
}

/// All minimal paths of height `h` with exactly `len` edges, in lexicographic order of strings.
pub fn enumerate_minimal_paths(h: usize, len: usize) -> Vec<OrientedPath> {
    fn rec(h: usize, left: usize, level: usize, cur: &mut Vec<bool>, out: &mut Vec<OrientedPath>) {
        if left == 0 {
            if level == h {
                out.push(OrientedPath::new(cur.clone()));
            }
            return;
        }
        for up in [false, true] {
            let nl = if up { level + 1 } else { level.wrapping_sub(1) };
            let ok = if left == 1 { nl == h } else { (1..h).contains(&nl) };
            if ok {
                cur.push(up);
                rec(h, left - 1, nl, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if h >= 1 {
        rec(h, len, 0, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> OrientedPath {
        s.parse().unwrap()
    }

    #[test]
    fn zigzag_path() {
        let fig = p("110110110001111");
        assert!(fig.is_minimal());
        assert_eq!(fig.height(), 5);
        assert_eq!(fig.net_length(), 5);
        assert_eq!(fig.vertex_count(), 16);
        assert_eq!(*fig.levels().last().unwrap(), 5);
    }

    #[test]
    fn minimality_examples() {
        assert!(p("1").is_minimal());
        assert!(!p("101").is_minimal());
        assert_eq!(p("1").net_length(), 1);
        assert_eq!(p("10").net_length(), 0);
        assert!(p("11011").is_minimal());
        assert!(!p("0").is_minimal());
    }

    #[test]
    fn onto_hom_examples() {
        let a = p("11011");
        assert_eq!(path_onto_hom(&a, &a), Some((0..=5).collect()));
        assert_eq!(path_onto_hom(&p("11"), &p("1")), None);
        let q = p("1101011");
        let map = path_onto_hom(&q, &p("111")).unwrap();
        assert!(is_onto_path_hom(&q, &p("111"), &map));
    }

    #[test]
    fn common_path_of_singleton_and_duplicate() {
        let a = p("110111");
        assert_eq!(common_onto_minimal_path(&[a.clone()], 100).unwrap(), a);
        assert_eq!(common_onto_minimal_path(&[a.clone(), a.clone()], 100).unwrap(), a);
    }

    #[test]
    fn common_path_errors() {
        assert_eq!(
            common_onto_minimal_path(&[p("110111"), p("111011")], 8).unwrap(),
            p("11011011")
        );
        assert!(matches!(
            common_onto_minimal_path(&[p("1"), p("11")], 100),
            Err(Error::HeightMismatch(1, 2))
        ));
        assert!(matches!(
            common_onto_minimal_path(&[p("101")], 100),
            Err(Error::NotMinimal(_))
        ));
        assert!(matches!(
            common_onto_minimal_path(&[p("110111"), p("111011")], 7),
            Err(Error::SearchExhausted(7))
        ));
    }

    #[test]
    fn counts_match_enumeration() {
        for h in 1..=4 {
            let counts = minimal_path_counts(h, 11).unwrap();
            for (len, &c) in counts.iter().enumerate() {
                let all = enumerate_minimal_paths(h, len);
                assert_eq!(all.len() as u128, c, "h={h} len={len}");
                assert!(all.iter().all(|q| q.is_minimal() && q.height() == h));
            }
        }
        assert_eq!(enumerate_minimal_paths(1, 1), vec![p("1")]);
        assert_eq!(enumerate_minimal_paths(2, 4), vec![]);
    }
}
