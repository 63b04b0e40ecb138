use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::vset::VertexSet;

use super::optable::OperationTable;

/// A binary term in `⋆` over the variables `x` and `y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    X,
    Y,
    Star(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn star(a: &Arc<Term>, b: &Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Star(a.clone(), b.clone()))
    }

    pub fn eval(&self, star: &OperationTable, x: usize, y: usize) -> usize {
        match self {
            Term::X => x,
            Term::Y => y,
            Term::Star(a, b) => star.apply2(a.eval(star, x, y), b.eval(star, x, y)),
        }
    }

    /// The binary operation the term defines.
    pub fn table(&self, star: &OperationTable) -> OperationTable {
        OperationTable::from_fn(star.base(), 2, |t| self.eval(star, t[0], t[1]))
    }

    /// Exchanges `x` and `y`.
    pub fn swapped(&self) -> Term {
        match self {
            Term::X => Term::Y,
            Term::Y => Term::X,
            Term::Star(a, b) => Term::Star(Arc::new(a.swapped()), Arc::new(b.swapped())),
        }
    }

    pub fn has_both_variables(&self) -> bool {
        fn vars(t: &Term, acc: &mut (bool, bool)) {
            match t {
                Term::X => acc.0 = true,
                Term::Y => acc.1 = true,
                Term::Star(a, b) => {
                    vars(a, acc);
                    vars(b, acc);
                }
            }
        }
        let mut acc = (false, false);
        vars(self, &mut acc);
        acc == (true, true)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::X => write!(f, "x"),
            Term::Y => write!(f, "y"),
            Term::Star(a, b) => write!(f, "({a}⋆{b})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `S_{c,c'}`: values at `(c, c')` of binary `⋆`-terms using both variables,
/// each with one witnessing term.
#[derive(Clone, Debug)]
pub struct SSet {
    pub c: usize,
    pub c2: usize,
    pub terms: BTreeMap<usize, Arc<Term>>,
}

impl SSet {
    pub fn elements(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(universe, self.terms.keys().copied())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.terms.contains_key(&v)
    }

    pub fn term(&self, v: usize) -> Option<&Arc<Term>> {
        self.terms.get(&v)
    }
}

/// Closes `{c⋆c', c'⋆c}` under `s ↦ c⋆s, c'⋆s, s⋆c, s⋆c'` and `(s, s') ↦ s⋆s'`.
pub fn s_set(c: usize, c2: usize, star: &OperationTable) -> SSet {
    let x = Arc::new(Term::X);
    let y = Arc::new(Term::Y);
    let mut terms: BTreeMap<usize, Arc<Term>> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    let add = |v: usize, t: Arc<Term>, terms: &mut BTreeMap<usize, Arc<Term>>, order: &mut Vec<usize>| {
        if let std::collections::btree_map::Entry::Vacant(e) = terms.entry(v) {
            e.insert(t);
            order.push(v);
        }
    };
    add(star.apply2(c, c2), Term::star(&x, &y), &mut terms, &mut order);
    add(star.apply2(c2, c), Term::star(&y, &x), &mut terms, &mut order);
    let mut done = 0;
    while done < order.len() {
        let s = order[done];
        let ts = terms[&s].clone();
        add(star.apply2(c, s), Term::star(&x, &ts), &mut terms, &mut order);
        add(star.apply2(c2, s), Term::star(&y, &ts), &mut terms, &mut order);
        add(star.apply2(s, c), Term::star(&ts, &x), &mut terms, &mut order);
        add(star.apply2(s, c2), Term::star(&ts, &y), &mut terms, &mut order);
        for i in 0..=done {
            let r = order[i];
            let tr = terms[&r].clone();
            add(star.apply2(s, r), Term::star(&ts, &tr), &mut terms, &mut order);
            add(star.apply2(r, s), Term::star(&tr, &ts), &mut terms, &mut order);
        }
        done += 1;
    }
    SSet { c, c2, terms }
}
