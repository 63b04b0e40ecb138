use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::digraph::{for_each_product, Digraph};
use crate::error::{Error, Result};

/// Default cap on the arity of composed expressions.
pub const DEFAULT_ARITY_BUDGET: u128 = 1 << 16;

/// A `k`-ary operation on `0..n`, tabulated in lexicographic tuple order
/// (leftmost coordinate most significant).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OperationTable {
    n: usize,
    k: usize,
    values: Vec<usize>,
}

impl std::fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "op[{}^{}]{:?}", self.n, self.k, self.values)
    }
}

impl OperationTable {
    pub fn new(n: usize, k: usize, values: Vec<usize>) -> Result<Self> {
        let len = table_len(n, k)?;
        if values.len() != len {
            return Err(Error::InvalidParams(format!(
                "table for {n}^{k} needs {len} values, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidParams(format!("value {v} outside 0..{n}")));
        }
        Ok(OperationTable { n, k, values })
    }

    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> usize) -> Self {
        let len = table_len(n, k).expect("table size");
        let mut values = Vec::with_capacity(len);
        let mut t = vec![0usize; k];
        for _ in 0..len {
            let v = f(&t);
            assert!(v < n, "value {v} outside 0..{n}");
            values.push(v);
            for i in (0..k).rev() {
                t[i] += 1;
                if t[i] < n {
                    break;
                }
                t[i] = 0;
            }
        }
        OperationTable { n, k, values }
    }

    pub fn projection(n: usize, k: usize, i: usize) -> Self {
        assert!(i < k);
        Self::from_fn(n, k, |t| t[i])
    }

    pub fn base(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.k);
        args.iter().fold(0, |acc, &a| acc * self.n + a)
    }

    #[inline]
    pub fn eval(&self, args: &[usize]) -> usize {
        self.values[self.index(args)]
    }

    /// Shorthand for binary tables.
    #[inline]
    pub fn apply2(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.k, 2);
        self.values[x * self.n + y]
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let (n, k) = (self.n, self.k);
        (0..self.values.len()).map(move |mut idx| {
            let mut t = vec![0; k];
            for i in (0..k).rev() {
                t[i] = idx % n;
                idx /= n;
            }
            t
        })
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|x| self.eval(&vec![x; self.k]) == x)
    }

    /// Exhaustive check over all `k`-tuples of edges.
    pub fn is_polymorphism(&self, h: &Digraph) -> bool {
        if h.vertex_count() != self.n {
            return false;
        }
        let edges = h.edges();
        if self.k == 0 || edges.is_empty() {
            return true;
        }
        let m = edges.len();
        // parallel over the first coordinate's edge
        (0..m).into_par_iter().all(|first| {
            let mut ok = true;
            let idx: Vec<usize> = (0..m).collect();
            let lists: Vec<&[usize]> = (1..self.k).map(|_| idx.as_slice()).collect();
            let mut src = vec![0; self.k];
            let mut dst = vec![0; self.k];
            src[0] = edges[first].0;
            dst[0] = edges[first].1;
            for_each_product(&lists, |choice| {
                if !ok {
                    return;
                }
                for (i, &e) in choice.iter().enumerate() {
                    src[i + 1] = edges[e].0;
                    dst[i + 1] = edges[e].1;
                }
                if !h.has_edge(self.eval(&src), self.eval(&dst)) {
                    ok = false;
                }
            });
            ok
        })
    }

    /// All `k` one-different patterns `f(y,x,…,x) = … = f(x,…,x,y)` agree, and `f` is idempotent.
    pub fn is_wnu(&self) -> bool {
        if !self.is_idempotent() {
            return false;
        }
        if self.k < 2 {
            return true;
        }
        let mut t = vec![0; self.k];
        for x in 0..self.n {
            for y in 0..self.n {
                t.iter_mut().for_each(|v| *v = x);
                t[0] = y;
                let first = self.eval(&t);
                for i in 1..self.k {
                    t[i - 1] = x;
                    t[i] = y;
                    if self.eval(&t) != first {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_majority(&self) -> bool {
        self.k == 3
            && (0..self.n).all(|x| {
                (0..self.n).all(|y| {
                    self.eval(&[y, x, x]) == x && self.eval(&[x, y, x]) == x && self.eval(&[x, x, y]) == x
                })
            })
    }

    /// Value depends only on the set of arguments.
    pub fn is_totally_symmetric(&self) -> bool {
        use std::collections::HashMap;
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, t) in self.tuples().enumerate() {
            let mut key = t;
            key.sort_unstable();
            key.dedup();
            let v = self.values[i];
            if *seen.entry(key).or_insert(v) != v {
                return false;
            }
        }
        true
    }

    pub fn is_tsi(&self) -> bool {
        self.is_idempotent() && self.is_totally_symmetric()
    }

    /// `s(a,r,e,a) = s(r,a,r,e)` for all `a, r, e`.
    pub fn is_siggers(&self) -> bool {
        self.k == 4
            && self.is_idempotent()
            && (0..self.n).all(|a| {
                (0..self.n).all(|r| (0..self.n).all(|e| self.eval(&[a, r, e, a]) == self.eval(&[r, a, r, e])))
            })
    }

    pub fn is_commutative(&self) -> bool {
        self.k == 2 && (0..self.n).all(|x| (0..self.n).all(|y| self.apply2(x, y) == self.apply2(y, x)))
    }

    /// `.op` text form.
    pub fn to_op(&self) -> String {
        let mut s = format!("op {} {}\n", self.n, self.k);
        for v in &self.values {
            writeln!(s, "{v}").unwrap();
        }
        s
    }

    pub fn parse_op(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "op" {
            return Err(Error::parse(hl + 1, "expected `op <n> <k>`"));
        }
        let n: usize = parts[1].parse().map_err(|_| Error::parse(hl + 1, "bad base size"))?;
        let k: usize = parts[2].parse().map_err(|_| Error::parse(hl + 1, "bad arity"))?;
        let mut values = Vec::new();
        for (no, l) in lines {
            let v: usize = l
                .trim()
                .parse()
                .map_err(|_| Error::parse(no + 1, format!("`{}` is not a value", l.trim())))?;
            if v >= n {
                return Err(Error::parse(no + 1, format!("value {v} outside 0..{n}")));
            }
            values.push(v);
        }
        OperationTable::new(n, k, values)
    }
}

fn table_len(n: usize, k: usize) -> Result<usize> {
    (n as u128)
        .checked_pow(k as u32)
        .filter(|&l| l <= 1 << 32)
        .map(|l| l as usize)
        .ok_or(Error::BudgetExceeded {
            what: "operation table entries",
            needed: u128::MAX,
            budget: 1 << 32,
        })
}

/// An operation given as a table or as a composition `g ⟵ f`.
///
/// `(g ⟵ f)(x_1,…,x_{kn}) = g(f(x_1,…,x_k), …, f(x_{(n−1)k+1},…,x_{nk}))`
/// where `k` is the arity of `f` and `n` the arity of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperationExpr {
    Leaf(Arc<OperationTable>),
    Compose {
        outer: Arc<OperationExpr>,
        inner: Arc<OperationExpr>,
        arity: usize,
    },
}

impl OperationExpr {
    pub fn leaf(t: OperationTable) -> Self {
        OperationExpr::Leaf(Arc::new(t))
    }

    /// `outer ⟵ inner`, refused when the arity would exceed `arity_budget`.
    pub fn compose(outer: &OperationExpr, inner: &OperationExpr, arity_budget: u128) -> Result<Self> {
        assert_eq!(outer.base(), inner.base());
        let arity = outer.arity() as u128 * inner.arity() as u128;
        if arity > arity_budget {
            return Err(Error::ArityBudgetExceeded {
                arity,
                budget: arity_budget,
            });
        }
        Ok(OperationExpr::Compose {
            outer: Arc::new(outer.clone()),
            inner: Arc::new(inner.clone()),
            arity: arity as usize,
        })
    }

    pub fn base(&self) -> usize {
        match self {
            OperationExpr::Leaf(t) => t.base(),
            OperationExpr::Compose { inner, .. } => inner.base(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            OperationExpr::Leaf(t) => t.arity(),
            OperationExpr::Compose { arity, .. } => *arity,
        }
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity());
        match self {
            OperationExpr::Leaf(t) => t.eval(args),
            OperationExpr::Compose { outer, inner, .. } => {
                let k = inner.arity();
                let mid: Vec<usize> = args.chunks(k).map(|c| inner.eval(c)).collect();
                outer.eval(&mid)
            }
        }
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.base()).all(|x| self.eval(&vec![x; self.arity()]) == x)
    }

    /// Tabulates the expression when `base^arity` fits in `budget`.
    pub fn to_table(&self, budget: u128) -> Result<OperationTable> {
        if let OperationExpr::Leaf(t) = self {
            return Ok((**t).clone());
        }
        let needed = (self.base() as u128).checked_pow(self.arity() as u32).unwrap_or(u128::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "expression table entries",
                needed,
                budget,
            });
        }
        Ok(OperationTable::from_fn(self.base(), self.arity(), |t| self.eval(t)))
    }

    /// Polymorphism check: leaves exhaustively, compositions through their parts
    /// (a composition of polymorphisms is a polymorphism).
    pub fn is_polymorphism(&self, h: &Digraph) -> bool {
        match self {
            OperationExpr::Leaf(t) => t.is_polymorphism(h),
            OperationExpr::Compose { outer, inner, .. } => outer.is_polymorphism(h) && inner.is_polymorphism(h),
        }
    }

    /// Exhaustive polymorphism check over all edge tuples, for compositions too.
    pub fn is_polymorphism_exhaustive(&self, h: &Digraph, budget: u128) -> Result<bool> {
        let m = h.edges().len() as u128;
        let needed = m.checked_pow(self.arity() as u32).unwrap_or(u128::MAX);
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "edge tuples",
                needed,
                budget,
            });
        }
        let idx: Vec<usize> = (0..h.edges().len()).collect();
        let lists: Vec<&[usize]> = (0..self.arity()).map(|_| idx.as_slice()).collect();
        let mut ok = true;
        let mut src = vec![0; self.arity()];
        let mut dst = vec![0; self.arity()];
        for_each_product(&lists, |choice| {
            if !ok {
                return;
            }
            for (i, &e) in choice.iter().enumerate() {
                (src[i], dst[i]) = h.edges()[e];
            }
            ok = h.has_edge(self.eval(&src), self.eval(&dst));
        });
        Ok(ok)
    }
}

impl From<OperationTable> for OperationExpr {
    fn from(t: OperationTable) -> Self {
        OperationExpr::leaf(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj2() -> OperationTable {
        OperationTable::from_fn(2, 3, |t| usize::from(t.iter().sum::<usize>() >= 2))
    }

    #[test]
    fn projections_and_majority_on_edge() {
        let e = Digraph::new(2, [(0, 1)]).unwrap();
        for i in 0..3 {
            assert!(OperationTable::projection(2, 3, i).is_polymorphism(&e));
        }
        assert!(maj2().is_polymorphism(&e));
        assert!(maj2().is_majority() && maj2().is_wnu());
        let zero = OperationTable::from_fn(2, 1, |_| 0);
        assert!(!zero.is_polymorphism(&e));
    }

    #[test]
    fn identity_predicates() {
        let meet = OperationTable::from_fn(2, 2, |t| t[0].min(t[1]));
        assert!(meet.is_commutative() && meet.is_wnu() && meet.is_tsi());
        let p0 = OperationTable::projection(3, 2, 0);
        assert!(!p0.is_commutative() && !p0.is_wnu() && p0.is_idempotent());
        let sig = OperationTable::from_fn(2, 4, |t| usize::from(t.iter().sum::<usize>() >= 2).min(t[0].max(t[1])));
        assert_eq!(sig.is_siggers(), {
            (0..2).all(|a| (0..2).all(|r| (0..2).all(|e| sig.eval(&[a, r, e, a]) == sig.eval(&[r, a, r, e]))))
                && sig.is_idempotent()
        });
    }

    #[test]
    fn op_round_trip() {
        let m = maj2();
        let text = m.to_op();
        assert!(text.starts_with("op 2 3\n0\n0\n0\n1\n"));
        assert_eq!(OperationTable::parse_op(&text).unwrap(), m);
        assert!(OperationTable::parse_op("op 2 1\n0\n").is_err());
        assert!(OperationTable::parse_op("op 2 1\n0\n2\n").is_err());
    }

    #[test]
    fn composition_matches_formula() {
        // exhaustive on combined arity 6 over a 3-element base
        let g = OperationTable::from_fn(3, 2, |t| (t[0] + 2 * t[1]) % 3);
        let f = OperationTable::from_fn(3, 3, |t| (t[0] * t[1] + t[2]) % 3);
        let e = OperationExpr::compose(&g.clone().into(), &f.clone().into(), DEFAULT_ARITY_BUDGET).unwrap();
        assert_eq!(e.arity(), 6);
        let table = e.to_table(1 << 20).unwrap();
        for t in table.tuples() {
            let want = g.eval(&[f.eval(&t[0..3]), f.eval(&t[3..6])]);
            assert_eq!(table.eval(&t), want);
        }
        let err = OperationExpr::compose(&e, &e, 30).unwrap_err();
        assert_eq!(err, Error::ArityBudgetExceeded { arity: 36, budget: 30 });
    }

    #[test]
    fn structural_and_exhaustive_polymorphism_agree() {
        let h = Digraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mn = OperationTable::from_fn(3, 2, |t| t[0].min(t[1]));
        let e = OperationExpr::compose(&mn.clone().into(), &mn.into(), 64).unwrap();
        assert!(e.is_polymorphism(&h));
        assert!(e.is_polymorphism_exhaustive(&h, 1 << 20).unwrap());
    }
}
