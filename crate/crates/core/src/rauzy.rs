//! Rauzy graphs, the `θ_n` quotient, groups described by Rauzy graphs,
//! return words and the Return Theorem checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::{Letter, Word};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::extension::extension_graph;
use crate::factor_set::FactorSet;

/// The Rauzy graph `G_n(S)`: vertices are the stored words of length `n`,
/// edges `(x, a, y)` whenever `xa ∈ S ∩ Ay`.
#[derive(Clone, Debug)]
pub struct RauzyGraph {
    pub order: usize,
    pub vertices: Vec<Word>,
    pub edges: BTreeSet<(usize, Letter, usize)>,
}

pub fn rauzy_graph(s: &FactorSet, n: usize) -> Result<RauzyGraph> {
    if n + 1 > s.horizon() {
        return Err(Error::Horizon {
            word: format!("Rauzy graph of order {n}"),
            needed: n + 1,
            horizon: s.horizon(),
        });
    }
    let vertices: Vec<Word> = s.words_of_len(n).cloned().collect();
    let index: BTreeMap<&Word, usize> = vertices.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut edges = BTreeSet::new();
    for (i, x) in vertices.iter().enumerate() {
        for a in s.alphabet().letters() {
            let xa = x.concat(&Word::single(a));
            if s.contains(&xa) {
                let y = xa.suffix(n);
                edges.insert((i, a, index[&y]));
            }
        }
    }
    Ok(RauzyGraph { order: n, vertices, edges })
}

impl RauzyGraph {
    pub fn vertex_index(&self, w: &Word) -> Option<usize> {
        self.vertices.iter().position(|v| v == w)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Strong connectivity: every vertex reachable from and co-reachable to
    /// the first vertex.
    pub fn strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(p) = queue.pop_front() {
                for &(x, _, y) in &self.edges {
                    let (from, to) = if forward { (x, y) } else { (y, x) };
                    if from == p && !seen[to] {
                        seen[to] = true;
                        queue.push_back(to);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(true) && reach(false)
    }

    /// The simple automaton `(vertices, v, v)` with `v` the given base.
    pub fn to_automaton(&self, s: &FactorSet, base: &Word) -> Result<Automaton> {
        let base_idx = self
            .vertex_index(base)
            .ok_or_else(|| Error::NotAFactor { word: s.render(base) })?;
        let names = self.vertices.iter().map(|w| s.render(w)).collect();
        let mut a = Automaton::new(s.alphabet().clone(), names, base_idx);
        for &(x, l, y) in &self.edges {
            a.add_transition(x, l, y)?;
        }
        Ok(a)
    }

    pub fn to_labeled(&self, s: &FactorSet) -> LabeledGraph {
        LabeledGraph {
            names: self.vertices.iter().map(|w| s.render(w)).collect(),
            edges: self.edges.iter().map(|&(x, a, y)| (x, a, y)).collect(),
        }
    }

    /// DOT rendering with edge labels, deterministic ordering.
    pub fn to_dot(&self, s: &FactorSet, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  rankdir=LR;\n");
        for w in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", s.render(w)));
        }
        for &(x, a, y) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                s.render(&self.vertices[x]),
                s.render(&self.vertices[y]),
                s.alphabet().token(a)
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// A partition of the vertices of a Rauzy graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaPartition {
    pub order: usize,
    /// Classes as sets of words, in canonical order.
    pub classes: Vec<BTreeSet<Word>>,
}

impl ThetaPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, w: &Word) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(w))
    }
}

/// The equivalence `θ_n` on `S ∩ Aⁿ`: `ax ~ bx` whenever `a` and `b`,
/// as left vertices of the extension graph `E(x)`, are connected by a path.
pub fn theta_n_partition(s: &FactorSet, n: usize) -> Result<ThetaPartition> {
    if n < 1 {
        return Err(Error::Precondition("θ_n needs n ≥ 1".into()));
    }
    if n + 1 > s.horizon() {
        return Err(Error::Horizon {
            word: format!("θ_{n}"),
            needed: n + 1,
            horizon: s.horizon(),
        });
    }
    let mut classes: Vec<BTreeSet<Word>> = Vec::new();
    let suffixes: BTreeSet<Word> = s.words_of_len(n).map(|w| w.suffix(n - 1)).collect();
    for x in suffixes {
        let graph = extension_graph(s, &x)?;
        // group left vertices of E(x) by connected component
        let lefts: Vec<Word> = graph.left().to_vec();
        let mut comp: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
        for (i, a) in lefts.iter().enumerate() {
            let c = component_of_left(&graph, i);
            comp.entry(c).or_default().insert(a.concat(&x));
        }
        classes.extend(comp.into_values());
    }
    classes.sort();
    Ok(ThetaPartition { order: n, classes })
}

/// Index of the component containing left vertex `i` (least reachable
/// left-vertex index, used only as a grouping key).
fn component_of_left(g: &crate::extension::Bipartite, i: usize) -> usize {
    let nl = g.left().len();
    let nr = g.right().len();
    let mut seen = vec![false; nl + nr];
    seen[i] = true;
    let mut queue = VecDeque::from([i]);
    let mut least = i;
    while let Some(v) = queue.pop_front() {
        for &(l, r) in g.edges() {
            let (x, y) = (l, nl + r);
            for (from, to) in [(x, y), (y, x)] {
                if from == v && !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                    if to < nl {
                        least = least.min(to);
                    }
                }
            }
        }
    }
    least
}

/// A directed edge-labeled multigraph with anonymous vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub names: Vec<String>,
    pub edges: BTreeSet<(usize, Letter, usize)>,
}

impl LabeledGraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }
}

/// The quotient of a Rauzy graph by a vertex partition, with deduplicated
/// edges.
pub fn quotient_graph(g: &RauzyGraph, partition: &ThetaPartition, s: &FactorSet) -> Result<LabeledGraph> {
    let mut class_of = vec![usize::MAX; g.vertices.len()];
    for (i, w) in g.vertices.iter().enumerate() {
        class_of[i] = partition
            .class_of(w)
            .ok_or_else(|| Error::Precondition(format!("partition misses `{}`", s.render(w))))?;
    }
    let names = partition
        .classes
        .iter()
        .map(|c| {
            let members: Vec<String> = c.iter().map(|w| s.render(w)).collect();
            if members.len() == 1 {
                members[0].clone()
            } else {
                format!("{{{}}}", members.join(","))
            }
        })
        .collect();
    let edges = g
        .edges
        .iter()
        .map(|&(x, a, y)| (class_of[x], a, class_of[y]))
        .collect();
    Ok(LabeledGraph { names, edges })
}

type RefineSignature = (u64, Vec<(u16, u64)>, Vec<(u16, u64)>);

/// Label-respecting digraph isomorphism by backtracking over color-refined
/// candidate maps. Intended for the desk-scale graphs produced here.
pub fn labeled_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edges.len() != b.edges.len() {
        return false;
    }
    // iterated signature refinement
    let colors = |g: &LabeledGraph| -> Vec<u64> {
        let mut color = vec![0u64; g.vertex_count()];
        for _ in 0..g.vertex_count() {
            let mut sig: Vec<RefineSignature> = (0..g.vertex_count())
                .map(|v| {
                    let mut outs: Vec<(u16, u64)> = g
                        .edges
                        .iter()
                        .filter(|&&(x, _, _)| x == v)
                        .map(|&(_, l, y)| (l.0, color[y]))
                        .collect();
                    outs.sort_unstable();
                    let mut ins: Vec<(u16, u64)> = g
                        .edges
                        .iter()
                        .filter(|&&(_, _, y)| y == v)
                        .map(|&(x, l, _)| (l.0, color[x]))
                        .collect();
                    ins.sort_unstable();
                    (color[v], outs, ins)
                })
                .collect();
            let mut sorted = sig.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for (v, s) in sig.drain(..).enumerate() {
                color[v] = sorted.binary_search(&s).unwrap() as u64;
            }
        }
        color
    };
    let ca = colors(a);
    let cb = colors(b);
    let mut hist_a: Vec<u64> = ca.clone();
    let mut hist_b: Vec<u64> = cb.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return false;
    }
    // backtracking assignment respecting colors
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(a, b, &ca, &cb, &mut map, &mut used, 0)
}

fn backtrack(
    a: &LabeledGraph,
    b: &LabeledGraph,
    ca: &[u64],
    cb: &[u64],
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    v: usize,
) -> bool {
    let n = ca.len();
    if v == n {
        let mapped: BTreeSet<(usize, Letter, usize)> = a
            .edges
            .iter()
            .map(|&(x, l, y)| (map[x], l, map[y]))
            .collect();
        return mapped == b.edges;
    }
    for w in 0..n {
        if used[w] || ca[v] != cb[w] {
            continue;
        }
        // partial consistency on edges among already-mapped vertices
        let consistent = a.edges.iter().all(|&(x, l, y)| {
            let (mx, my) = (
                if x == v { w } else { map[x] },
                if y == v { w } else { map[y] },
            );
            if mx == usize::MAX || my == usize::MAX {
                return true;
            }
            b.edges.contains(&(mx, l, my))
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if backtrack(a, b, ca, cb, map, used, v + 1) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

#[derive(Clone, Debug)]
pub struct RauzyGroupReport {
    /// The folded automaton of `(G_n, base, base)`.
    pub folded: Automaton,
    /// Whether the fold is the one-vertex rose carrying exactly `S ∩ A`.
    pub describes_free_group: bool,
}

/// Folds the Rauzy automaton of order `n` based at `base` and decides
/// structurally whether the described group is the free group on `S ∩ A`.
pub fn rauzy_group(s: &FactorSet, n: usize, base: &Word) -> Result<RauzyGroupReport> {
    let g = rauzy_graph(s, n)?;
    if !g.strongly_connected() {
        return Err(Error::Precondition(format!(
            "the Rauzy graph of order {n} is not strongly connected"
        )));
    }
    let automaton = g.to_automaton(s, base)?;
    let report = automaton.fold()?;
    let folded = report.automaton;
    let letters: BTreeSet<Letter> = s.letters_present().into_iter().collect();
    let rose = folded.n_states() == 1
        && letters
            .iter()
            .all(|&a| folded.step(0, a) == Some(0))
        && folded.edge_count() == letters.len();
    Ok(RauzyGroupReport { folded, describes_free_group: rose })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReturnSide {
    Right,
    Left,
}

/// A set of first return words, with the completeness certificate for the
/// horizon.
#[derive(Clone, Debug)]
pub struct ReturnWords {
    pub base: Word,
    pub side: ReturnSide,
    pub words: BTreeSet<Word>,
    /// True when every stored horizon-length word starting (resp. ending)
    /// with the base completes a first return, so no return can extend
    /// past the horizon.
    pub complete: bool,
}

/// First return words to `w` within the horizon.
///
/// Right side: the `x` with `wx ∈ S ∩ A⁺w` whose proper prefixes have no
/// such occurrence; left side symmetric.
pub fn return_words(s: &FactorSet, w: &Word, side: ReturnSide) -> Result<ReturnWords> {
    if !s.contains(w) {
        return Err(Error::NotAFactor { word: s.render(w) });
    }
    let n = s.horizon();
    let m = w.len();
    let mut words = BTreeSet::new();
    let mut complete = true;
    match side {
        ReturnSide::Right => {
            for len in m + 1..=n {
                for u in s.words_of_len_with_prefix(len, w) {
                    let ends = u.occurrence_ends(w);
                    // ends[0] == m always (u starts with w)
                    match ends.get(1) {
                        Some(&e) if e == len => {
                            words.insert(u.factor(m, len));
                        }
                        Some(_) => {}
                        None if len == n => complete = false,
                        None => {}
                    }
                }
            }
        }
        ReturnSide::Left => {
            for len in m + 1..=n {
                for u in s.words_of_len(len) {
                    if !u.ends_with(w) {
                        continue;
                    }
                    let ends = u.occurrence_ends(w);
                    let k = ends.len();
                    // second-to-last occurrence must sit at the start
                    match ends.get(k.wrapping_sub(2)) {
                        Some(&e) if e == m => {
                            words.insert(u.factor(0, len - m));
                        }
                        Some(_) => {}
                        None if len == n => complete = false,
                        None => {}
                    }
                }
            }
        }
    }
    Ok(ReturnWords { base: w.clone(), side, words, complete })
}

/// Verdict of the Return Theorem on one word, or inconclusive when the
/// return set is not certified complete at this horizon.
#[derive(Clone, Debug)]
pub enum ReturnVerdict {
    Inconclusive(ReturnWords),
    Concluded(ReturnTheoremReport),
}

#[derive(Clone, Debug)]
pub struct ReturnTheoremReport {
    pub returns: ReturnWords,
    pub cardinality: usize,
    pub alphabet_size: usize,
    pub card_equals_alphabet: bool,
    /// The Stallings automaton of the return words is the one-vertex rose
    /// over `S ∩ A`.
    pub generates_free_group: bool,
    pub rank: usize,
    pub is_basis: bool,
}

pub fn verify_return_theorem(s: &FactorSet, w: &Word) -> Result<ReturnVerdict> {
    let returns = return_words(s, w, ReturnSide::Right)?;
    if !returns.complete || returns.words.is_empty() {
        return Ok(ReturnVerdict::Inconclusive(returns));
    }
    let letters = s.letters_present();
    let generators: Vec<crate::free_group::ReducedWord> = returns
        .words
        .iter()
        .map(crate::free_group::ReducedWord::from_word)
        .collect();
    let folded = crate::automaton::stallings_automaton(s.alphabet(), &generators)?;
    let rank = folded.rank()?;
    let rose = folded.n_states() == 1
        && folded.edge_count() == letters.len()
        && letters.iter().all(|&a| folded.step(0, a) == Some(0));
    let cardinality = returns.words.len();
    let card_equals_alphabet = cardinality == letters.len();
    Ok(ReturnVerdict::Concluded(ReturnTheoremReport {
        cardinality,
        alphabet_size: letters.len(),
        card_equals_alphabet,
        generates_free_group: rose,
        rank,
        is_basis: rose && card_equals_alphabet,
        returns,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{bifix_decode, CodingMorphism};

    fn returns(s: &FactorSet, w: &str) -> Vec<String> {
        let w = s.parse(w).unwrap();
        let r = return_words(s, &w, ReturnSide::Right).unwrap();
        assert!(r.complete, "returns of {} should be complete", s.render(&w));
        r.words.iter().map(|x| s.render(x)).collect()
    }

    #[test]
    fn fibonacci_rauzy_g7() {
        let s = FactorSet::from_named("fibonacci", 16).unwrap();
        let g = rauzy_graph(&s, 7).unwrap();
        assert_eq!(g.vertices.len(), 8);
        assert_eq!(g.edge_count(), 9);
        assert!(g.strongly_connected());
    }

    #[test]
    fn chacon_rauzy_g1() {
        let s = FactorSet::from_named("chacon", 12).unwrap();
        let g = rauzy_graph(&s, 1).unwrap();
        assert_eq!(g.vertices.len(), 3);
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn order_zero_is_the_letter_rose() {
        let s = FactorSet::from_named("chacon", 8).unwrap();
        let g = rauzy_graph(&s, 0).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn decoded_fibonacci_theta2() {
        let s = FactorSet::from_named("fibonacci", 24).unwrap();
        let f = CodingMorphism::parse("u->aa;v->ab;w->ba").unwrap();
        let d = bifix_decode(&s, &f).unwrap();
        let theta = theta_n_partition(&d, 2).unwrap();
        let classes: BTreeSet<BTreeSet<String>> = theta
            .classes
            .iter()
            .map(|c| c.iter().map(|w| d.render(w)).collect())
            .collect();
        let expected: BTreeSet<BTreeSet<String>> = [
            ["wv", "vv"].iter().map(|s| s.to_string()).collect(),
            ["vu"].iter().map(|s| s.to_string()).collect(),
            ["ww", "uw"].iter().map(|s| s.to_string()).collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(classes, expected);

        let g2 = rauzy_graph(&d, 2).unwrap();
        let q = quotient_graph(&g2, &theta, &d).unwrap();
        let g1 = rauzy_graph(&d, 1).unwrap().to_labeled(&d);
        assert!(labeled_isomorphic(&q, &g1));
    }

    #[test]
    fn chacon_theta1_quotient_not_isomorphic_to_g0() {
        let s = FactorSet::from_named("chacon", 12).unwrap();
        let theta = theta_n_partition(&s, 1).unwrap();
        assert_eq!(theta.class_count(), 2);
        let g1 = rauzy_graph(&s, 1).unwrap();
        let q = quotient_graph(&g1, &theta, &s).unwrap();
        assert_eq!(q.vertex_count(), 2);
        let g0 = rauzy_graph(&s, 0).unwrap().to_labeled(&s);
        assert!(!labeled_isomorphic(&q, &g0));
    }

    #[test]
    fn sturmian_theta1_matches_g0() {
        let s = FactorSet::from_named("fibonacci", 12).unwrap();
        let theta = theta_n_partition(&s, 1).unwrap();
        let g1 = rauzy_graph(&s, 1).unwrap();
        let q = quotient_graph(&g1, &theta, &s).unwrap();
        let g0 = rauzy_graph(&s, 0).unwrap().to_labeled(&s);
        assert!(labeled_isomorphic(&q, &g0));
    }

    #[test]
    fn trivial_partition_keeps_graph() {
        let s = FactorSet::from_named("fibonacci", 10).unwrap();
        let g = rauzy_graph(&s, 3).unwrap();
        let singletons = ThetaPartition {
            order: 3,
            classes: g.vertices.iter().map(|w| [w.clone()].into_iter().collect()).collect(),
        };
        let q = quotient_graph(&g, &singletons, &s).unwrap();
        assert_eq!(q.vertex_count(), g.vertices.len());
        assert_eq!(q.edges.len(), g.edge_count());
        assert!(labeled_isomorphic(&q, &g.to_labeled(&s)));
    }

    #[test]
    fn fibonacci_g7_folds_to_rose() {
        let s = FactorSet::from_named("fibonacci", 16).unwrap();
        let base = s.parse("aababaa").unwrap();
        let r = rauzy_group(&s, 7, &base).unwrap();
        assert!(r.describes_free_group);
        assert_eq!(r.folded.n_states(), 1);
    }

    #[test]
    fn chacon_g1_does_not_describe_the_rose() {
        let s = FactorSet::from_named("chacon", 12).unwrap();
        let base = s.parse("a").unwrap();
        let r = rauzy_group(&s, 1, &base).unwrap();
        assert!(!r.describes_free_group);
        assert_eq!(r.folded.n_states(), 2);
    }

    #[test]
    fn order_zero_group_is_immediate() {
        let s = FactorSet::from_named("tribonacci", 10).unwrap();
        let r = rauzy_group(&s, 0, &Word::empty()).unwrap();
        assert!(r.describes_free_group);
    }

    #[test]
    fn paper_return_sets() {
        let fib = FactorSet::from_named("fibonacci", 20).unwrap();
        assert_eq!(returns(&fib, "aa"), ["baa", "babaa"]);

        let ch = FactorSet::from_named("chacon", 22).unwrap();
        assert_eq!(returns(&ch, "a"), ["a", "bca", "bcbca"]);
        assert_eq!(returns(&ch, "ab"), ["caab", "cbcab"]);

        let g = FactorSet::from_named("cassaigne-neutral", 20).unwrap();
        assert_eq!(returns(&g, "1"), ["2231", "231", "31"]);
    }

    #[test]
    fn left_returns_cross_identity() {
        let s = FactorSet::from_named("fibonacci", 20).unwrap();
        let w = s.parse("aa").unwrap();
        let right = return_words(&s, &w, ReturnSide::Right).unwrap();
        let left = return_words(&s, &w, ReturnSide::Left).unwrap();
        assert!(left.complete);
        let wr: BTreeSet<Word> = right.words.iter().map(|x| w.concat(x)).collect();
        let rw: BTreeSet<Word> = left.words.iter().map(|x| x.concat(&w)).collect();
        assert_eq!(wr, rw);
    }

    #[test]
    fn return_theorem_verdicts() {
        let fib = FactorSet::from_named("fibonacci", 20).unwrap();
        let w = fib.parse("aa").unwrap();
        match verify_return_theorem(&fib, &w).unwrap() {
            ReturnVerdict::Concluded(r) => {
                assert!(r.card_equals_alphabet && r.generates_free_group && r.is_basis);
            }
            ReturnVerdict::Inconclusive(_) => panic!("expected a verdict"),
        }

        let g = FactorSet::from_named("cassaigne-neutral", 20).unwrap();
        let w = g.parse("1").unwrap();
        match verify_return_theorem(&g, &w).unwrap() {
            ReturnVerdict::Concluded(r) => {
                assert_eq!(r.cardinality, 3);
                assert!(r.card_equals_alphabet);
                assert!(!r.generates_free_group && !r.is_basis);
                assert_eq!(r.rank, 2);
            }
            ReturnVerdict::Inconclusive(_) => panic!("expected a verdict"),
        }

        let ch = FactorSet::from_named("chacon", 22).unwrap();
        let w = ch.parse("ab").unwrap();
        match verify_return_theorem(&ch, &w).unwrap() {
            ReturnVerdict::Concluded(r) => {
                assert_eq!(r.cardinality, 2);
                assert!(!r.card_equals_alphabet);
            }
            ReturnVerdict::Inconclusive(_) => panic!("expected a verdict"),
        }
    }
}
