//! Cores, the NP-complete / bounded-width classification of special trees,
//! and instance-level checks of the absorption properties.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    build_pointing_for_af, extend_wnu, find_singleton_absorber, make_special, preceq_violations,
    relatively_absorption_free, s_set, singleton_absorbs_via_polymer, star, Neighborhood, OperationTable,
    DEFAULT_ARITY_BUDGET,
};
use crate::digraph::{Digraph, DEFAULT_POWER_BUDGET};
use crate::error::{Error, Result};
use crate::homsolver::{build_instance, is_homomorphism, solve_csp};
use crate::polysearch::{find_majority, find_siggers, find_wnu, find_wnu_within, Budget};
use crate::spectree::{compile, decompose_special_tree, SpecialTree, SpecialTreeSpec};
use crate::vset::VertexSet;

pub const FORMAT_VERSION: u32 = 1;

/// A core of a digraph with certified homomorphisms both ways.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub core: Digraph,
    /// Core vertex `i` is vertex `vertices[i]` of the input.
    pub vertices: Vec<usize>,
    /// Input vertex `v` maps to core vertex `retraction[v]`.
    pub retraction: Vec<usize>,
}

impl CoreResult {
    /// Re-checks both homomorphisms and that the retraction fixes the core.
    pub fn verify(&self, g: &Digraph) -> bool {
        is_homomorphism(g, &self.core, &self.retraction)
            && is_homomorphism(&self.core, g, &self.vertices)
            && self.vertices.iter().enumerate().all(|(i, &v)| self.retraction[v] == i)
    }
}

/// An endomorphism of `g` missing `v`, if any.
fn endomorphism_avoiding(g: &Digraph, v: usize, node_budget: u64) -> Result<Option<Vec<usize>>> {
    let mut inst = build_instance(g, g, &[])?;
    let mut dom = VertexSet::full(g.vertex_count());
    dom.remove(v);
    for x in 0..g.vertex_count() {
        inst.restrict_domain(x, &dom);
    }
    solve_csp(&inst, node_budget)
}

/// Iterates `f` until it is idempotent; the result retracts onto its image.
fn to_retraction(f: &[usize]) -> Vec<usize> {
    let mut r = f.to_vec();
    loop {
        let rr: Vec<usize> = r.iter().map(|&x| r[x]).collect();
        if rr == r {
            return r;
        }
        r = rr;
    }
}

/// Shrinks `g` by proper retractions until every endomorphism is onto.
///
/// Each step finds an endomorphism missing some vertex and replaces `g` by the
/// image of an idempotent power of it. The final pass proves that no vertex
/// can be avoided, so the result has no proper retraction.
pub fn compute_core(g: &Digraph, node_budget: u64) -> Result<CoreResult> {
    let n = g.vertex_count();
    let mut cur = g.clone();
    let mut vertices: Vec<usize> = (0..n).collect();
    let mut retraction: Vec<usize> = (0..n).collect();
    'shrink: loop {
        for v in 0..cur.vertex_count() {
            if let Some(f) = endomorphism_avoiding(&cur, v, node_budget)? {
                let r = to_retraction(&f);
                let image = VertexSet::from_iter_in(cur.vertex_count(), r.iter().copied());
                let (sub, old) = cur.induced(&image);
                let mut new_of = vec![usize::MAX; cur.vertex_count()];
                for (i, &o) in old.iter().enumerate() {
                    new_of[o] = i;
                }
                for t in retraction.iter_mut() {
                    *t = new_of[r[*t]];
                }
                vertices = old.iter().map(|&o| vertices[o]).collect();
                cur = sub;
                continue 'shrink;
            }
        }
        break;
    }
    let res = CoreResult {
        core: cur,
        vertices,
        retraction,
    };
    if !res.verify(g) {
        return Err(Error::ConstructionStuck("core certificate failed verification".into()));
    }
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaylorStatus {
    SiggersFound,
    Refuted,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NpComplete,
    BoundedWidth,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    None,
    BudgetExceeded,
}

impl SearchStatus {
    fn of(r: &Result<Option<OperationTable>>) -> Self {
        match r {
            Ok(Some(_)) => SearchStatus::Found,
            Ok(None) => SearchStatus::None,
            Err(_) => SearchStatus::BudgetExceeded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub special_tree: bool,
    pub height: Option<usize>,
    pub a_count: Option<usize>,
    pub b_count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaylorEvidence {
    pub status: TaylorStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WidthCertificate {
    pub kind: String,
    pub arity: usize,
    pub status: SearchStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub core_ms: f64,
    pub taylor_ms: f64,
    pub width_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub format_version: u32,
    pub input: InputSummary,
    /// The structure whose Taylor status was decided is a certified core.
    pub is_core: bool,
    pub core_size: usize,
    pub taylor: TaylorEvidence,
    pub width_certificates: Vec<WidthCertificate>,
    pub verdict: Verdict,
    pub timings: Timings,
    pub seeds: Vec<u64>,
}

impl ClassificationReport {
    /// The report with timings zeroed, for byte-stable comparisons.
    pub fn without_timings(&self) -> Self {
        ClassificationReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Core, Siggers search on the core, then cheap width certificates.
///
/// `special_tree` says whether a Siggers operation implies bounded width;
/// without it a found Siggers operation leaves the verdict undetermined.
pub fn classify_digraph(g: &Digraph, special_tree: bool, budget: Budget) -> ClassificationReport {
    let start = Instant::now();
    let mut summary = InputSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        special_tree,
        height: None,
        a_count: None,
        b_count: None,
    };
    if special_tree {
        if let Ok((spec, _)) = decompose_special_tree(g) {
            summary.height = Some(spec.height);
            summary.a_count = Some(spec.a_count);
            summary.b_count = Some(spec.b_count);
        }
    }
    let mut timings = Timings::default();
    let t = Instant::now();
    let core = compute_core(g, budget.nodes);
    timings.core_ms = ms(t);
    let (target, is_core, mut notes) = match &core {
        Ok(c) => (c.core.clone(), true, Vec::new()),
        Err(e) => (g.clone(), false, vec![format!("core not certified: {e}")]),
    };
    let mut core_special = special_tree;
    if special_tree && is_core && target.vertex_count() < g.vertex_count() {
        if let Err(e) = decompose_special_tree(&target) {
            core_special = false;
            notes.push(format!("core is not a special tree: {e}"));
        }
    }
    let t = Instant::now();
    let siggers = find_siggers(&target, budget);
    timings.taylor_ms = ms(t);
    let status = match &siggers {
        Ok(Some(_)) => TaylorStatus::SiggersFound,
        Ok(None) => TaylorStatus::Refuted,
        Err(e) => {
            notes.push(format!("siggers search: {e}"));
            TaylorStatus::BudgetExceeded
        }
    };
    let t = Instant::now();
    let attempts: [(&str, usize, Box<dyn Fn() -> Result<Option<OperationTable>>>); 3] = [
        ("majority", 3, Box::new(|| find_majority(&target, budget))),
        ("wnu", 3, Box::new(|| find_wnu(&target, 3, budget))),
        ("wnu", 4, Box::new(|| find_wnu(&target, 4, budget))),
    ];
    let width_certificates = attempts
        .iter()
        .map(|(kind, arity, f)| WidthCertificate {
            kind: kind.to_string(),
            arity: *arity,
            status: SearchStatus::of(&f()),
        })
        .collect();
    timings.width_ms = ms(t);
    let verdict = match status {
        TaylorStatus::Refuted if is_core => Verdict::NpComplete,
        TaylorStatus::SiggersFound if core_special => Verdict::BoundedWidth,
        _ => Verdict::Undetermined,
    };
    timings.total_ms = ms(start);
    let detail = if notes.is_empty() {
        format!("searched on {} vertices", target.vertex_count())
    } else {
        notes.join("; ")
    };
    ClassificationReport {
        format_version: FORMAT_VERSION,
        input: summary,
        is_core,
        core_size: target.vertex_count(),
        taylor: TaylorEvidence { status, detail },
        width_certificates,
        verdict,
        timings,
        seeds: Vec::new(),
    }
}

pub fn classify_special_tree(spec: &SpecialTreeSpec, budget: Budget) -> ClassificationReport {
    match compile(spec) {
        Ok(tree) => classify_digraph(&tree.digraph, true, budget),
        Err(e) => ClassificationReport {
            format_version: FORMAT_VERSION,
            input: InputSummary {
                vertices: spec.vertex_total(),
                edges: 0,
                special_tree: false,
                height: Some(spec.height),
                a_count: Some(spec.a_count),
                b_count: Some(spec.b_count),
            },
            is_core: false,
            core_size: 0,
            taylor: TaylorEvidence {
                status: TaylorStatus::BudgetExceeded,
                detail: format!("spec rejected: {e}"),
            },
            width_certificates: Vec::new(),
            verdict: Verdict::Undetermined,
            timings: Timings::default(),
            seeds: Vec::new(),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    /// A construction failed whose precondition is only checked relatively.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub format_version: u32,
    pub seed: u64,
    pub vertices: usize,
    pub wnu_found: bool,
    pub edge_order: Vec<usize>,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

struct Suite {
    checks: Vec<SuiteCheck>,
}

impl Suite {
    fn push(&mut self, name: &str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(SuiteCheck {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: &str, ok: bool, pass: impl Into<String>, fail: impl Into<String>) {
        if ok {
            self.push(name, CheckStatus::Pass, pass);
        } else {
            self.push(name, CheckStatus::Fail, fail);
        }
    }

    fn skip_all(&mut self, names: &[&str], why: &str) {
        for n in names {
            self.push(n, CheckStatus::Skipped, why);
        }
    }
}

pub const SUITE_CHECKS: [&str; 11] = [
    "top_bottom_in_diagonal_component",
    "wnu_extension",
    "special_polymer",
    "singleton_absorbs_e2",
    "preceq_absorption",
    "s_set_identities",
    "star_absorbs",
    "terms_absorb",
    "binary_extension",
    "neighbourhood_pointing",
    "distance_pointing",
];

/// Instance checks of the absorption properties on one special tree.
///
/// The seed fixes the linear order of template edges used by the WNU extension.
pub fn verify_lemma_suite(spec: &SpecialTreeSpec, seed: u64, budget: Budget) -> Result<SuiteReport> {
    let tree = compile(spec)?;
    let mut edge_order: Vec<usize> = (0..spec.edges.len()).collect();
    edge_order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut edge_rank = vec![0; edge_order.len()];
    for (r, &e) in edge_order.iter().enumerate() {
        edge_rank[e] = r;
    }
    let mut s = Suite { checks: Vec::new() };

    let mut diag_ok = Ok(true);
    for n in 1..=3 {
        match tree.digraph.diagonal_component(n, DEFAULT_POWER_BUDGET) {
            Ok(delta) => {
                let ok = top_bottom_tuples(&tree, n).into_iter().all(|code| delta.contains(code));
                diag_ok = diag_ok.map(|acc| acc && ok);
            }
            Err(e) => diag_ok = Err(e),
        }
    }
    match diag_ok {
        Ok(ok) => s.check(SUITE_CHECKS[0], ok, "A^n ∪ B^n ⊆ Δ_n for n ≤ 3", "a top/bottom tuple lies outside Δ_n"),
        Err(e) => s.push(SUITE_CHECKS[0], CheckStatus::Skipped, e.to_string()),
    }

    let tau = match find_wnu_within(&tree.digraph, 3, &[tree.a_set(), tree.b_set()], budget) {
        Ok(Some(t)) => t,
        Ok(None) => {
            s.skip_all(&SUITE_CHECKS[1..], "no 3-ary polymorphism that is a WNU on A and on B");
            return Ok(finish(seed, &tree, false, edge_order, s));
        }
        Err(e) => {
            s.skip_all(&SUITE_CHECKS[1..], &format!("WNU search: {e}"));
            return Ok(finish(seed, &tree, false, edge_order, s));
        }
    };

    let full = match extend_wnu(&tree, &tau, &edge_rank) {
        Ok(w) => {
            s.push(SUITE_CHECKS[1], CheckStatus::Pass, "extension is a WNU polymorphism of H");
            w
        }
        Err(e) => {
            s.push(SUITE_CHECKS[1], CheckStatus::Fail, e.to_string());
            s.skip_all(&SUITE_CHECKS[2..], "no WNU on H");
            return Ok(finish(seed, &tree, true, edge_order, s));
        }
    };

    let special = make_special(&full)?;
    let p = &special.polymer;
    let special_ok = crate::algebra::is_special(p) && p.is_polymorphism(&tree.digraph) && p.is_idempotent();
    s.check(
        SUITE_CHECKS[2],
        special_ok,
        format!("x∘(x∘y) = x∘y after {} composition(s)", special.copies),
        "iterated polymer is not a special idempotent polymorphism",
    );

    let n = tree.vertex_count();
    let o = match find_singleton_absorber(&tree, p) {
        Ok(o) => {
            let e2 = tree.e_neighborhood(&VertexSet::singleton(n, o), 2)?;
            s.check(
                SUITE_CHECKS[3],
                singleton_absorbs_via_polymer(p, o, &e2),
                format!("{{{o}}} absorbs E_2({o})"),
                "absorber check inconsistent",
            );
            o
        }
        Err(e) => {
            s.push(SUITE_CHECKS[3], CheckStatus::Fail, e.to_string());
            s.skip_all(&SUITE_CHECKS[4..], "no singleton absorber");
            return Ok(finish(seed, &tree, true, edge_order, s));
        }
    };

    let order = tree.order_from(o);
    let bad = preceq_violations(&tree, &order, p);
    let side = tree.side_of(o);
    let level_ok = singleton_absorbs_via_polymer(p, o, &side);
    s.check(
        SUITE_CHECKS[4],
        bad.is_empty() && level_ok,
        format!("a∘a' = a on all ⪯-comparable pairs; o∘x = o on the side of o = {o}"),
        format!("{} violating pair(s), o∘x = o on its side: {level_ok}", bad.len()),
    );

    let st = star(p, n);
    let mut sset_bad = Vec::new();
    for side in [tree.a_set(), tree.b_set()] {
        for c in side.iter() {
            if s_set(c, c, &st).terms.keys().copied().collect::<Vec<_>>() != vec![c] {
                sset_bad.push(format!("S_{{{c},{c}}} ≠ {{{c}}}"));
            }
            for c2 in side.iter().filter(|&c2| c2 > c) {
                let a = s_set(c, c2, &st);
                let b = s_set(c2, c, &st);
                if a.terms.keys().ne(b.terms.keys()) {
                    sset_bad.push(format!("S_{{{c},{c2}}} ≠ S_{{{c2},{c}}}"));
                }
                if a.terms.iter().any(|(&v, t)| t.eval(&st, c, c2) != v || !t.has_both_variables()) {
                    sset_bad.push(format!("bad witnessing term in S_{{{c},{c2}}}"));
                }
            }
        }
    }
    s.check(
        SUITE_CHECKS[5],
        sset_bad.is_empty(),
        "S_{c,c} = {c}, S_{c,c'} = S_{c',c}, terms evaluate correctly",
        sset_bad.join("; "),
    );

    neighbourhood_checks(&tree, o, p, &st, &mut s);
    Ok(finish(seed, &tree, true, edge_order, s))
}

fn finish(seed: u64, tree: &SpecialTree, wnu_found: bool, edge_order: Vec<usize>, s: Suite) -> SuiteReport {
    SuiteReport {
        format_version: FORMAT_VERSION,
        seed,
        vertices: tree.vertex_count(),
        wnu_found,
        edge_order,
        checks: s.checks,
    }
}

/// Codes of `A^n ∪ B^n` under the tuple indexing of `H^n`.
fn top_bottom_tuples(tree: &SpecialTree, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let hs = tree.vertex_count();
    for side in [tree.a_set().to_vec(), tree.b_set().to_vec()] {
        let lists: Vec<&[usize]> = (0..n).map(|_| side.as_slice()).collect();
        crate::digraph::for_each_product(&lists, |t| {
            out.push(t.iter().fold(0, |acc, &v| acc * hs + v));
        });
    }
    out
}

/// The checks that need a relatively absorption-free set of template children.
fn neighbourhood_checks(tree: &SpecialTree, o: usize, p: &OperationTable, st: &OperationTable, s: &mut Suite) {
    let n = tree.vertex_count();
    let order = tree.order_from(o);
    let mut found: Vec<(usize, VertexSet)> = Vec::new();
    for parent in 0..tree.template_vertex_count() {
        let kids: Vec<usize> = tree
            .template_neighbors(parent)
            .iter()
            .copied()
            .filter(|&c| order.strictly_below(parent, c))
            .collect();
        if kids.len() > 12 {
            continue;
        }
        for mask in 1u32..(1 << kids.len()) {
            let c = VertexSet::from_iter_in(n, (0..kids.len()).filter(|i| mask >> i & 1 == 1).map(|i| kids[i]));
            if relatively_absorption_free(&c, p) {
                found.push((parent, c));
            }
        }
    }
    if found.is_empty() {
        s.skip_all(&SUITE_CHECKS[6..], "no relatively absorption-free set of template children");
        return;
    }
    let mut failures: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut stuck: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (parent, c) in &found {
        let label = format!("C = {:?} below {parent}", c.to_vec());
        let mut nb = match Neighborhood::new(tree, order.clone(), st.clone(), *parent, c.clone()) {
            Ok(nb) => nb,
            Err(e) => {
                failures.entry(SUITE_CHECKS[6]).or_default().push(format!("{label}: {e}"));
                continue;
            }
        };
        if !nb.star_absorption_violations().is_empty() {
            failures.entry(SUITE_CHECKS[6]).or_default().push(label.clone());
        }
        if !nb.term_absorption_violations().is_empty() {
            failures.entry(SUITE_CHECKS[7]).or_default().push(label.clone());
        }
        let gamma = nb.commutative_gamma(&[]);
        if let Err(e) = nb.extend_binary(&gamma) {
            failures.entry(SUITE_CHECKS[8]).or_default().push(format!("{label}: {e}"));
        }
        if let Err(e) = nb.pointing(DEFAULT_ARITY_BUDGET) {
            stuck.entry(SUITE_CHECKS[9]).or_default().push(format!("{label}: {e}"));
        }
        if let Err(e) = build_pointing_for_af(tree, c, o, p, DEFAULT_ARITY_BUDGET) {
            stuck.entry(SUITE_CHECKS[10]).or_default().push(format!("{label}: {e}"));
        }
    }
    for (i, name) in SUITE_CHECKS[6..].iter().enumerate() {
        let total = found.len();
        if let Some(f) = failures.get(name) {
            s.push(name, CheckStatus::Fail, f.join("; "));
        } else if let Some(f) = stuck.get(name) {
            s.push(name, CheckStatus::Inconclusive, f.join("; "));
        } else {
            let what = ["⋆-absorption", "term absorption", "binary extension", "pointing", "pointing"][i];
            s.push(name, CheckStatus::Pass, format!("{what} holds on {total} set(s)"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homsolver::enumerate_homs;
    use crate::minpath::OrientedPath;
    use crate::spectree::{canned_triad, single_path_spec};

    fn path(s: &str) -> Digraph {
        s.parse::<OrientedPath>().unwrap().to_digraph()
    }

    /// Brute force: the smallest image of an endomorphism that is a retraction.
    fn brute_core_size(g: &Digraph) -> usize {
        let n = g.vertex_count();
        enumerate_homs(g, g, usize::MAX, u64::MAX)
            .unwrap()
            .into_iter()
            .map(|f| VertexSet::from_iter_in(n, f).len())
            .min()
            .unwrap()
    }

    #[test]
    fn edge_and_short_path_are_cores() {
        for p in ["1", "11"] {
            let g = path(p);
            let c = compute_core(&g, 1_000_000).unwrap();
            assert_eq!(c.core.vertex_count(), g.vertex_count());
            assert_eq!(brute_core_size(&g), g.vertex_count());
        }
        // the 27 maps of "11" to itself: only the identity is a homomorphism
        assert_eq!(enumerate_homs(&path("11"), &path("11"), 100, u64::MAX).unwrap().len(), 1);
    }

    #[test]
    fn paths_retract_to_brute_force_size() {
        for p in ["10", "101", "1101", "11010", "110100", "1011"] {
            let g = path(p);
            let c = compute_core(&g, 1_000_000).unwrap();
            assert!(c.verify(&g));
            assert_eq!(c.core.vertex_count(), brute_core_size(&g), "{p}");
            let again = compute_core(&c.core, 1_000_000).unwrap();
            assert_eq!(again.core.vertex_count(), c.core.vertex_count());
        }
    }

    #[test]
    fn doubled_arm_triad_retracts() {
        let mut spec = canned_triad();
        // a fourth arm duplicating the first one's path
        let first = spec.edges[0].clone();
        spec.b_count += 1;
        spec.edges.push(crate::spectree::TemplateEdge {
            a: first.a,
            b: spec.b_count - 1,
            path: first.path.clone(),
        });
        let tree = compile(&spec).unwrap();
        let c = compute_core(&tree.digraph, 10_000_000).unwrap();
        assert!(c.core.vertex_count() < tree.vertex_count());
        assert!(c.core.vertex_count() <= compile(&canned_triad()).unwrap().vertex_count());
        assert!(decompose_special_tree(&c.core).is_ok());
    }

    #[test]
    fn budget_folds_into_undetermined() {
        let tiny = Budget { tuples: 10, nodes: 10 };
        let r = classify_special_tree(&canned_triad(), tiny);
        assert_eq!(r.verdict, Verdict::Undetermined);
        assert_eq!(r.taylor.status, TaylorStatus::BudgetExceeded);
    }

    #[test]
    fn single_edge_is_bounded_width() {
        let spec = single_path_spec("1".parse().unwrap());
        let r = classify_special_tree(&spec, Budget::default());
        assert!(r.is_core);
        assert_eq!(r.core_size, 2);
        assert_eq!(r.taylor.status, TaylorStatus::SiggersFound);
        assert_eq!(r.verdict, Verdict::BoundedWidth);
        assert_eq!(r.width_certificates[0].status, SearchStatus::Found);
        let suite = verify_lemma_suite(&spec, 0, Budget::default()).unwrap();
        assert!(suite.passed(), "{suite:?}");
        for name in &SUITE_CHECKS[..6] {
            assert_eq!(suite.status(name), Some(CheckStatus::Pass), "{name}");
        }
    }

    #[test]
    fn non_tree_caps_verdict() {
        let k3 = Digraph::symmetric_clique(3);
        let r = classify_digraph(&k3, false, Budget::default());
        assert_eq!(r.taylor.status, TaylorStatus::Refuted);
        assert_eq!(r.verdict, Verdict::NpComplete);
        let k2 = Digraph::symmetric_clique(2);
        let r = classify_digraph(&k2, false, Budget::default());
        assert_eq!(r.taylor.status, TaylorStatus::SiggersFound);
        assert_eq!(r.verdict, Verdict::Undetermined);
    }

    #[test]
    fn suite_is_deterministic() {
        for spec in crate::generate::random_corpus(7, 4, 30) {
            let a = verify_lemma_suite(&spec, 11, Budget::default()).unwrap();
            let b = verify_lemma_suite(&spec, 11, Budget::default()).unwrap();
            assert_eq!(a, b);
            assert!(a.passed(), "{a:?}");
        }
    }
}
