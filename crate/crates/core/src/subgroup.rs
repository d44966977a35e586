//! Incidence graphs of bifix codes, the `θ_X` classes, coset automata, and
//! the freeness/saturation checks on subgroups generated by codes.

use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{Alphabet, Word};
use crate::automaton::{literal_automaton, stallings_automaton, Automaton};
use crate::code::{code_role, in_code_star};
use crate::error::{Error, Result};
use crate::extension::Bipartite;
use crate::factor_set::FactorSet;
use crate::free_group::ReducedWord;

/// The incidence graph of a bifix code: vertices are the nonempty proper
/// prefixes and suffixes, edges the pairs `(p, s)` with `ps ∈ X`.
pub fn incidence_graph(x: &BTreeSet<Word>) -> Result<Bipartite> {
    if !code_role(x)?.is_bifix {
        return Err(Error::Role("the incidence graph needs a bifix code".into()));
    }
    let mut prefixes: BTreeSet<Word> = BTreeSet::new();
    let mut suffixes: BTreeSet<Word> = BTreeSet::new();
    for u in x {
        for k in 1..u.len() {
            prefixes.insert(u.prefix(k));
            suffixes.insert(u.suffix(k));
        }
    }
    let left: Vec<Word> = prefixes.into_iter().collect();
    let right: Vec<Word> = suffixes.into_iter().collect();
    let mut edges = BTreeSet::new();
    for (i, p) in left.iter().enumerate() {
        for (j, s) in right.iter().enumerate() {
            if x.contains(&p.concat(s)) {
                edges.insert((i, j));
            }
        }
    }
    Ok(Bipartite::new(left, right, edges))
}

/// The equivalence `θ_X` on the proper prefixes of `X`: the class of `ε` is
/// a singleton; every other class is the intersection of the nonempty
/// proper prefixes with a connected component of the incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaX {
    /// Classes over `P`, the class of `ε` first, then in word order.
    pub classes: Vec<BTreeSet<Word>>,
}

impl ThetaX {
    pub fn class_of(&self, p: &Word) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(p))
    }
}

pub fn theta_x_partition(x: &BTreeSet<Word>) -> Result<ThetaX> {
    let g = incidence_graph(x)?;
    let nl = g.left().len();
    let nr = g.right().len();
    // union-find over prefix ∪ suffix vertices
    let mut parent: Vec<usize> = (0..nl + nr).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(l, r) in g.edges() {
        let (a, b) = (find(&mut parent, l), find(&mut parent, nl + r));
        if a != b {
            parent[a] = b;
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
    for (i, p) in g.left().iter().enumerate() {
        by_root
            .entry(find(&mut parent, i))
            .or_default()
            .insert(p.clone());
    }
    let mut classes: Vec<BTreeSet<Word>> = vec![[Word::empty()].into_iter().collect()];
    let mut rest: Vec<BTreeSet<Word>> = by_root.into_values().collect();
    rest.sort();
    classes.extend(rest);
    Ok(ThetaX { classes })
}

/// The coset automaton `B_X`: states are the `θ_X` classes, transitions
/// induced by the literal automaton of `X*`. For a bifix code drawn from an
/// acyclic set the induced transitions are consistent and the automaton is
/// reversible; a conflict is reported with its witnessing pair.
pub fn coset_automaton(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<Automaton> {
    let theta = theta_x_partition(x)?;
    let literal = literal_automaton(alphabet, x)?;
    let class_of_state: Vec<usize> = (0..literal.n_states())
        .map(|p| {
            let w = alphabet.parse_word(literal.name(p)).expect("state name is a word");
            theta.class_of(&w).expect("every proper prefix is classified")
        })
        .collect();
    let names: Vec<String> = theta
        .classes
        .iter()
        .map(|c| {
            let members: Vec<String> = c.iter().map(|w| alphabet.render(w)).collect();
            if members.len() == 1 {
                members[0].clone()
            } else {
                format!("{{{}}}", members.join(","))
            }
        })
        .collect();
    let base = class_of_state[literal.base()];
    let mut out = Automaton::new(alphabet.clone(), names, base);
    let mut witness: BTreeMap<(usize, u16), usize> = BTreeMap::new();
    for (p, a, q) in literal.edges() {
        let (cp, cq) = (class_of_state[p], class_of_state[q]);
        if let Err(_conflict) = out.add_transition(cp, a, cq) {
            let other = witness[&(cp, a.0)];
            return Err(Error::CosetConflict {
                p: literal.name(other).to_string(),
                q: literal.name(p).to_string(),
                letter: alphabet.token(a).to_string(),
            });
        }
        witness.entry((cp, a.0)).or_insert(p);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    pub free: bool,
    pub rank: usize,
    pub generator_count: usize,
}

/// Freeness of a finite set of nonempty words inside `F_A`, decided by the
/// rank of its Stallings automaton.
pub fn is_free(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<FreenessReport> {
    if x.is_empty() || x.iter().any(Word::is_empty) {
        return Err(Error::Role("freeness needs a set of nonempty words".into()));
    }
    let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
    let folded = stallings_automaton(alphabet, &generators)?;
    let rank = folded.rank()?;
    Ok(FreenessReport {
        free: rank == x.len(),
        rank,
        generator_count: x.len(),
    })
}

#[derive(Clone, Debug)]
pub struct SaturationReport {
    pub bound: usize,
    pub saturated: bool,
    /// Stored words in `⟨X⟩ ∖ X*` (up to the bound).
    pub violations: Vec<Word>,
}

/// Saturation of `X*` in `S` up to length `bound`: every stored word of
/// `⟨X⟩ ∩ S` must lie in `X*`. Membership in `⟨X⟩` is decided on the
/// Stallings automaton, membership in `X*` by parsing.
pub fn verify_saturation(
    x: &BTreeSet<Word>,
    s: &FactorSet,
    bound: usize,
) -> Result<SaturationReport> {
    if x.is_empty() || x.iter().any(Word::is_empty) {
        return Err(Error::Role("saturation needs a set of nonempty words".into()));
    }
    for u in x {
        if !s.contains(u) {
            return Err(Error::Containment(s.render(u)));
        }
    }
    let bound = bound.min(s.horizon());
    let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
    let folded = stallings_automaton(s.alphabet(), &generators)?;
    let mut violations = Vec::new();
    for n in 1..=bound {
        for w in s.words_of_len(n) {
            if folded.membership(&ReducedWord::from_word(w))? && !in_code_star(x, w) {
                violations.push(w.clone());
            }
        }
    }
    Ok(SaturationReport { bound, saturated: violations.is_empty(), violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitarySide {
    /// `u, uv ∈ H ∩ S` but `v ∉ X*`.
    Right,
    /// `v, uv ∈ H ∩ S` but `u ∉ X*`.
    Left,
}

#[derive(Clone, Debug)]
pub struct UnitaryViolation {
    pub u: Word,
    pub v: Word,
    pub side: UnitarySide,
}

/// Checks the unitary consequence of saturation: for stored `u, uv` of
/// length ≤ `bound` both in `⟨X⟩ ∩ S`, the quotient must lie in `X*`
/// (and symmetrically on the left).
pub fn verify_unitary_corollary(
    x: &BTreeSet<Word>,
    s: &FactorSet,
    bound: usize,
) -> Result<Vec<UnitaryViolation>> {
    if x.is_empty() || x.iter().any(Word::is_empty) {
        return Err(Error::Role("the unitary check needs nonempty words".into()));
    }
    let bound = bound.min(s.horizon());
    let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
    let folded = stallings_automaton(s.alphabet(), &generators)?;
    let in_h = |w: &Word| folded.membership(&ReducedWord::from_word(w));
    let mut violations = Vec::new();
    for n in 1..=bound {
        for z in s.words_of_len(n) {
            if !in_h(z)? {
                continue;
            }
            for k in 1..n {
                let (u, v) = (z.prefix(k), z.factor(k, n));
                if in_h(&u)? && !in_code_star(x, &v) {
                    violations.push(UnitaryViolation { u: u.clone(), v: v.clone(), side: UnitarySide::Right });
                }
                if in_h(&v)? && !in_code_star(x, &u) {
                    violations.push(UnitaryViolation { u, v, side: UnitarySide::Left });
                }
            }
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::GroupIndex;

    fn words(a: &Alphabet, xs: &[&str]) -> BTreeSet<Word> {
        xs.iter().map(|w| a.parse_word(w).unwrap()).collect()
    }

    fn fibonacci_degree3(a: &Alphabet) -> BTreeSet<Word> {
        words(a, &["a", "baab", "babaabab", "babaabaabab"])
    }

    #[test]
    fn incidence_graph_of_block_code() {
        let abcd = Alphabet::from_chars("abcd").unwrap();
        let x = words(&abcd, &["ab", "ac", "bc", "ca", "cd", "da"]);
        let g = incidence_graph(&x).unwrap();
        assert_eq!(g.left().len(), 4);
        assert_eq!(g.right().len(), 4);
        assert_eq!(g.edges().len(), 6);
        let v = g.classify();
        assert!(v.acyclic && !v.connected);
    }

    #[test]
    fn incidence_graph_trivial_and_cyclic() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let g = incidence_graph(&words(&ab, &["a"])).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edges().len(), 0);

        // {aa, ab, ba} sits inside the Fibonacci set, so its incidence
        // graph is acyclic: edges (a,a), (a,b), (b,a) form a path
        let g = incidence_graph(&words(&ab, &["aa", "ab", "ba"])).unwrap();
        assert_eq!(g.left().len(), 2);
        assert_eq!(g.right().len(), 2);
        assert_eq!(g.edges().len(), 3);
        assert!(g.classify().acyclic);

        // a genuinely cyclic incidence graph needs a code outside any
        // acyclic set, e.g. {aa, ab, ba, bb}
        let g = incidence_graph(&words(&ab, &["aa", "ab", "ba", "bb"])).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert!(!g.classify().acyclic);
    }

    #[test]
    fn theta_x_of_paper_codes() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let x = fibonacci_degree3(&ab);
        let theta = theta_x_partition(&x).unwrap();
        assert_eq!(theta.classes[0], [Word::empty()].into_iter().collect());
        let b = ab.parse_word("b").unwrap();
        let ba = ab.parse_word("ba").unwrap();
        let cb = theta.class_of(&b).unwrap();
        let cba = theta.class_of(&ba).unwrap();
        assert_ne!(cb, cba);
        assert_eq!(theta.classes.len(), 3);

        let abcd = Alphabet::from_chars("abcd").unwrap();
        let x = words(&abcd, &["ab", "ac", "bc", "ca", "cd", "da"]);
        let theta = theta_x_partition(&x).unwrap();
        assert_eq!(theta.classes.len(), 3);
        assert_eq!(theta.class_of(&abcd.parse_word("a").unwrap()), theta.class_of(&abcd.parse_word("b").unwrap()));
        assert_eq!(theta.class_of(&abcd.parse_word("c").unwrap()), theta.class_of(&abcd.parse_word("d").unwrap()));

        let x = words(&ab, &["a"]);
        let theta = theta_x_partition(&x).unwrap();
        assert_eq!(theta.classes.len(), 1);
    }

    #[test]
    fn coset_automaton_of_degree3_code() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let x = fibonacci_degree3(&ab);
        let bx = coset_automaton(&ab, &x).unwrap();
        assert_eq!(bx.n_states(), 3);
        assert!(bx.predicates().is_group_automaton);
        assert_eq!(bx.subgroup_index().unwrap(), GroupIndex::Finite(3));
        for w in ["a", "bb", "baab", "babab"] {
            assert!(bx.accepts(&ab.parse_word(w).unwrap()), "{w} should be accepted");
        }
        for w in ["b", "ba", "ab"] {
            assert!(!bx.accepts(&ab.parse_word(w).unwrap()), "{w} should be rejected");
        }

        // agrees with the bouquet construction
        let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
        let st = stallings_automaton(&ab, &generators).unwrap();
        assert!(bx.isomorphic_to(&st).unwrap());
    }

    #[test]
    fn coset_automaton_small_cases() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let bx = coset_automaton(&ab, &words(&ab, &["aa", "ab", "ba"])).unwrap();
        assert_eq!(bx.n_states(), 2);
        let st = stallings_automaton(
            &ab,
            &words(&ab, &["aa", "ab", "ba"])
                .iter()
                .map(ReducedWord::from_word)
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(bx.isomorphic_to(&st).unwrap());

        let bx = coset_automaton(&ab, &words(&ab, &["a"])).unwrap();
        assert_eq!(bx.n_states(), 1);
    }

    #[test]
    fn freeness_reports() {
        let abcd = Alphabet::from_chars("abcd").unwrap();
        let r = is_free(&abcd, &words(&abcd, &["ab", "ac", "bc", "ca", "cd", "da"])).unwrap();
        assert!(r.free);
        assert_eq!(r.rank, 6);

        let digits = Alphabet::from_chars("123").unwrap();
        let r = is_free(&digits, &words(&digits, &["2231", "31", "231"])).unwrap();
        assert!(!r.free);
        assert_eq!(r.rank, 2);

        let ab = Alphabet::from_chars("ab").unwrap();
        let r = is_free(&ab, &words(&ab, &["a"])).unwrap();
        assert!(r.free);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn saturation_on_cassaigne_acyclic() {
        let s = FactorSet::from_named("cassaigne-acyclic", 14).unwrap();
        let x: BTreeSet<Word> = s.words_of_len(2).cloned().collect();
        let rep = verify_saturation(&x, &s, 6).unwrap();
        assert!(rep.saturated);

        // bb and dd are in ⟨X⟩ but not factors of S
        let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
        let folded = stallings_automaton(s.alphabet(), &generators).unwrap();
        for w in ["bb", "dd"] {
            let w = s.parse(w).unwrap();
            assert!(folded.membership(&ReducedWord::from_word(&w)).unwrap());
            assert!(!s.contains(&w));
        }
    }

    #[test]
    fn saturation_fails_for_non_bifix_code() {
        let s = FactorSet::from_named("fibonacci", 14).unwrap();
        let x = words(s.alphabet(), &["aa", "ab", "b"]);
        let rep = verify_saturation(&x, &s, 3).unwrap();
        assert!(!rep.saturated);
        let a = s.parse("a").unwrap();
        assert!(rep.violations.contains(&a));
    }

    #[test]
    fn saturation_of_single_letter() {
        let s = FactorSet::from_named("fibonacci", 14).unwrap();
        let x = words(s.alphabet(), &["a"]);
        let rep = verify_saturation(&x, &s, 4).unwrap();
        assert!(rep.saturated);
    }

    #[test]
    fn unitary_corollary() {
        let s = FactorSet::from_named("cassaigne-acyclic", 14).unwrap();
        let x: BTreeSet<Word> = s.words_of_len(2).cloned().collect();
        assert!(verify_unitary_corollary(&x, &s, 6).unwrap().is_empty());

        let fib = FactorSet::from_named("fibonacci", 14).unwrap();
        let x = words(fib.alphabet(), &["aa", "ab", "b"]);
        let violations = verify_unitary_corollary(&x, &fib, 4).unwrap();
        assert!(!violations.is_empty());

        let x = words(fib.alphabet(), &["a"]);
        assert!(verify_unitary_corollary(&x, &fib, 6).unwrap().is_empty());
    }
}
