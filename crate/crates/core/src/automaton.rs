//! Deterministic partial automata: literal and minimal automata of `X*`,
//! reversibility and group-automaton predicates, Stallings foldings, and
//! the subgroup queries they answer (membership, rank, index).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::alphabet::{Alphabet, Letter, Word};
use crate::code::code_role;
use crate::error::{Error, Result};
use crate::free_group::ReducedWord;

/// A deterministic automaton with a distinguished base state, a terminal
/// set and a partial transition map.
#[derive(Clone, Debug)]
pub struct Automaton {
    alphabet: Alphabet,
    base: usize,
    terminals: BTreeSet<usize>,
    transitions: Vec<Vec<Option<usize>>>,
    names: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub is_trim: bool,
    pub is_simple: bool,
    pub is_complete: bool,
    pub is_reversible: bool,
    pub is_group_automaton: bool,
}

/// Index of the described subgroup: the state count of a group automaton,
/// infinite otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupIndex {
    Finite(usize),
    Infinite,
}

impl Automaton {
    pub fn new(alphabet: Alphabet, names: Vec<String>, base: usize) -> Self {
        let n = names.len();
        assert!(base < n);
        let width = alphabet.len();
        Automaton {
            alphabet,
            base,
            terminals: [base].into_iter().collect(),
            transitions: vec![vec![None; width]; n],
            names,
        }
    }

    pub fn with_terminals(mut self, terminals: BTreeSet<usize>) -> Self {
        self.terminals = terminals;
        self
    }

    pub fn add_transition(&mut self, p: usize, a: Letter, q: usize) -> Result<()> {
        let slot = &mut self.transitions[p][a.0 as usize];
        match slot {
            Some(existing) if *existing != q => Err(Error::Precondition(format!(
                "conflicting transition from state {p} on `{}`",
                self.alphabet.token(a)
            ))),
            _ => {
                *slot = Some(q);
                Ok(())
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.names.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn step(&self, p: usize, a: Letter) -> Option<usize> {
        self.transitions[p][a.0 as usize]
    }

    /// All defined transitions `(p, a, q)` in deterministic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(a, q)| q.map(|q| (p, Letter(a as u16), q)))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Runs `w` from the base state; `None` when a transition is missing.
    pub fn run(&self, w: &Word) -> Option<usize> {
        let mut p = self.base;
        for &a in w.letters() {
            p = self.step(p, a)?;
        }
        Some(p)
    }

    /// Recognized-language membership (paths, not generalized paths).
    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some_and(|p| self.terminals.contains(&p))
    }

    pub fn predicates(&self) -> Predicates {
        let n = self.n_states();
        let mut reachable = vec![false; n];
        let mut queue = VecDeque::from([self.base]);
        reachable[self.base] = true;
        while let Some(p) = queue.pop_front() {
            for q in self.transitions[p].iter().flatten() {
                if !reachable[*q] {
                    reachable[*q] = true;
                    queue.push_back(*q);
                }
            }
        }
        let mut coreachable = vec![false; n];
        let mut queue: VecDeque<usize> = self.terminals.iter().copied().collect();
        for &t in &self.terminals {
            coreachable[t] = true;
        }
        while let Some(q) = queue.pop_front() {
            for (p, _, q2) in self.edges() {
                if q2 == q && !coreachable[p] {
                    coreachable[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let is_trim = reachable.iter().all(|&b| b) && coreachable.iter().all(|&b| b);
        let is_simple = is_trim && self.terminals.len() == 1 && self.terminals.contains(&self.base);
        let is_complete = self
            .transitions
            .iter()
            .all(|row| row.iter().all(Option::is_some));
        let mut injective = true;
        for a in self.alphabet.letters() {
            let mut seen = BTreeSet::new();
            for p in 0..n {
                if let Some(q) = self.step(p, a) {
                    if !seen.insert(q) {
                        injective = false;
                    }
                }
            }
        }
        let is_reversible = is_simple && injective;
        let is_group_automaton = is_reversible && is_complete;
        Predicates {
            is_trim,
            is_simple,
            is_complete,
            is_reversible,
            is_group_automaton,
        }
    }

    /// Stallings folding: merge states forced by co-determinism violations
    /// (and, after merges, determinism violations) until the automaton is
    /// reversible. The described subgroup is unchanged.
    pub fn fold(&self) -> Result<FoldReport> {
        if !self.predicates().is_simple {
            return Err(Error::Precondition("folding needs a simple automaton".into()));
        }
        let n = self.n_states();
        let mut uf = UnionFind::new(n);
        let mut merges: Vec<FoldMerge> = Vec::new();
        loop {
            let mut fwd: BTreeMap<(usize, u16), usize> = BTreeMap::new();
            let mut bwd: BTreeMap<(usize, u16), usize> = BTreeMap::new();
            let mut violation: Option<(usize, usize, Letter)> = None;
            'scan: for (p, a, q) in self.edges() {
                let (rp, rq) = (uf.find(p), uf.find(q));
                if let Some(&q2) = fwd.get(&(rp, a.0)) {
                    if q2 != rq {
                        violation = Some((rq.min(q2), rq.max(q2), a));
                        break 'scan;
                    }
                } else {
                    fwd.insert((rp, a.0), rq);
                }
                if let Some(&p2) = bwd.get(&(rq, a.0)) {
                    if p2 != rp {
                        violation = Some((rp.min(p2), rp.max(p2), a));
                        break 'scan;
                    }
                } else {
                    bwd.insert((rq, a.0), rp);
                }
            }
            match violation {
                Some((x, y, a)) => {
                    uf.union(x, y);
                    merges.push(FoldMerge { a: x, b: y, letter: a });
                }
                None => break,
            }
        }
        let folded = self.quotient(&mut uf)?.canonical()?;
        let partition = uf.partition_names(&self.names);
        Ok(FoldReport { merges, partition, automaton: folded })
    }

    /// The quotient by a state partition; transitions must be consistent.
    fn quotient(&self, uf: &mut UnionFind) -> Result<Automaton> {
        let reps: Vec<usize> = (0..self.n_states())
            .filter(|&p| uf.find(p) == p)
            .collect();
        let idx: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let classes = uf.partition_names(&self.names);
        let names: Vec<String> = reps
            .iter()
            .map(|&r| {
                let class = classes
                    .iter()
                    .find(|c| c.contains(&self.names[r]))
                    .expect("representative is in its class");
                if class.len() == 1 {
                    self.names[r].clone()
                } else {
                    format!("{{{}}}", class.iter().cloned().collect::<Vec<_>>().join(","))
                }
            })
            .collect();
        let mut out = Automaton::new(self.alphabet.clone(), names, idx[&uf.find(self.base)]);
        out.terminals = self.terminals.iter().map(|&t| idx[&uf.find(t)]).collect();
        for (p, a, q) in self.edges() {
            out.add_transition(idx[&uf.find(p)], a, idx[&uf.find(q)])?;
        }
        Ok(out)
    }

    /// A folded subgroup graph: single terminal equal to the base, letter
    /// actions injective, and connected as an undirected graph. Weaker than
    /// the reversible predicate in that directed trimness is not required,
    /// which matters for generators that use inverse letters.
    fn folded_ok(&self) -> bool {
        if self.terminals.len() != 1 || !self.terminals.contains(&self.base) {
            return false;
        }
        for a in self.alphabet.letters() {
            let mut seen = BTreeSet::new();
            for p in 0..self.n_states() {
                if let Some(q) = self.step(p, a) {
                    if !seen.insert(q) {
                        return false;
                    }
                }
            }
        }
        let n = self.n_states();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([self.base]);
        seen[self.base] = true;
        let edges: Vec<(usize, Letter, usize)> = self.edges().collect();
        while let Some(p) = queue.pop_front() {
            for &(x, _, y) in &edges {
                for (from, to) in [(x, y), (y, x)] {
                    if from == p && !seen[to] {
                        seen[to] = true;
                        queue.push_back(to);
                    }
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    /// Breadth-first renumbering from the base state, exploring letters in
    /// alphabet order, forward then backward. Canonical for folded
    /// automata, so structural equality decides isomorphism.
    pub fn canonical(&self) -> Result<Automaton> {
        if !self.folded_ok() {
            return Err(Error::Precondition(
                "canonical renumbering needs a folded automaton".into(),
            ));
        }
        let mut back: Vec<Vec<Option<usize>>> =
            vec![vec![None; self.alphabet.len()]; self.n_states()];
        for (p, a, q) in self.edges() {
            back[q][a.0 as usize] = Some(p);
        }
        let mut order: Vec<usize> = Vec::with_capacity(self.n_states());
        let mut seen = vec![false; self.n_states()];
        let mut queue = VecDeque::from([self.base]);
        seen[self.base] = true;
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for a in 0..self.alphabet.len() {
                for q in [self.transitions[p][a], back[p][a]].into_iter().flatten() {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.n_states()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let names = order.iter().map(|&p| self.names[p].clone()).collect();
        let mut out = Automaton::new(self.alphabet.clone(), names, renumber[self.base]);
        out.terminals = self.terminals.iter().map(|&t| renumber[t]).collect();
        for (p, a, q) in self.edges() {
            out.add_transition(renumber[p], a, renumber[q])?;
        }
        Ok(out)
    }

    /// Isomorphism of reversible automata via canonical forms.
    pub fn isomorphic_to(&self, other: &Automaton) -> Result<bool> {
        let a = self.canonical()?;
        let b = other.canonical()?;
        Ok(a.transitions == b.transitions && a.base == b.base && a.terminals == b.terminals)
    }

    /// Generalized-path membership of a reduced word, tracing forward edges
    /// for positive letters and backward edges for inverses. Exact on a
    /// folded (reversible) automaton.
    pub fn membership(&self, g: &ReducedWord) -> Result<bool> {
        if !self.folded_ok() {
            return Err(Error::Precondition("membership needs a folded automaton".into()));
        }
        let mut back: Vec<Vec<Option<usize>>> =
            vec![vec![None; self.alphabet.len()]; self.n_states()];
        for (p, a, q) in self.edges() {
            back[q][a.0 as usize] = Some(p);
        }
        let mut p = self.base;
        for s in g.letters() {
            let next = if s.inverse {
                back[p][s.letter.0 as usize]
            } else {
                self.transitions[p][s.letter.0 as usize]
            };
            match next {
                Some(q) => p = q,
                None => return Ok(false),
            }
        }
        Ok(p == self.base)
    }

    /// Graph rank `#edges − #states + 1` of a connected folded automaton:
    /// the rank of the described free subgroup.
    pub fn rank(&self) -> Result<usize> {
        if !self.folded_ok() {
            return Err(Error::Precondition(
                "rank needs a folded, connected automaton".into(),
            ));
        }
        Ok(self.edge_count() + 1 - self.n_states())
    }

    /// The index of the described subgroup.
    pub fn subgroup_index(&self) -> Result<GroupIndex> {
        if !self.folded_ok() {
            return Err(Error::Precondition("index needs a folded automaton".into()));
        }
        if self.predicates().is_complete {
            Ok(GroupIndex::Finite(self.n_states()))
        } else {
            Ok(GroupIndex::Infinite)
        }
    }

    /// The prefix code generating the submonoid recognized by a simple
    /// automaton: labels of paths from base to base with no intermediate
    /// base visit. Errors when a cycle avoids the base state.
    pub fn cycle_code(&self) -> Result<BTreeSet<Word>> {
        if !self.predicates().is_simple {
            return Err(Error::Precondition("cycle code needs a simple automaton".into()));
        }
        // a cycle through non-base states makes the code infinite
        let n = self.n_states();
        let mut color = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
        fn dfs(
            a: &Automaton,
            p: usize,
            color: &mut Vec<u8>,
        ) -> bool {
            color[p] = 1;
            for q in a.transitions[p].iter().flatten() {
                if *q == a.base {
                    continue;
                }
                let seen = color[*q];
                if seen == 1 || (seen == 0 && dfs(a, *q, color)) {
                    return true;
                }
            }
            color[p] = 2;
            false
        }
        for p in 0..n {
            if p != self.base && color[p] == 0 && dfs(self, p, &mut color) {
                return Err(Error::InfiniteCode);
            }
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<(usize, Word)> = vec![(self.base, Word::empty())];
        while let Some((p, w)) = stack.pop() {
            for a in self.alphabet.letters() {
                if let Some(q) = self.step(p, a) {
                    let mut w2 = w.clone();
                    w2.push(a);
                    if q == self.base {
                        out.insert(w2);
                    } else {
                        stack.push((q, w2));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Merges Nerode-equivalent states (Moore refinement on the partial,
    /// trim automaton).
    pub fn minimize(&self) -> Result<Automaton> {
        let n = self.n_states();
        let mut block: Vec<usize> = (0..n)
            .map(|p| usize::from(self.terminals.contains(&p)))
            .collect();
        loop {
            let mut sig_ids: BTreeMap<(usize, Vec<Option<usize>>), usize> = BTreeMap::new();
            let mut next: Vec<usize> = Vec::with_capacity(n);
            for p in 0..n {
                let sig = (
                    block[p],
                    self.transitions[p]
                        .iter()
                        .map(|q| q.map(|q| block[q]))
                        .collect::<Vec<_>>(),
                );
                let fresh = sig_ids.len();
                next.push(*sig_ids.entry(sig).or_insert(fresh));
            }
            let stable = sig_ids.len() == block.iter().collect::<BTreeSet<_>>().len();
            block = next;
            if stable {
                break;
            }
        }
        let mut uf = UnionFind::new(n);
        for p in 0..n {
            for q in (p + 1)..n {
                if block[p] == block[q] {
                    uf.union(p, q);
                }
            }
        }
        self.quotient(&mut uf)
    }

    /// Deterministic text form: base line, then one `p a q` transition per
    /// line in state/letter order.
    pub fn to_text(&self) -> String {
        let mut out = format!("base {}\n", self.base);
        for (p, a, q) in self.edges() {
            out.push_str(&format!("{p} {} {q}\n", self.alphabet.token(a)));
        }
        out
    }

    /// DOT rendering; the base state is double-circled.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("digraph {name} {{\n  rankdir=LR;\n"));
        for p in 0..self.n_states() {
            let shape = if self.terminals.contains(&p) && p == self.base {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  {p} [label=\"{}\", shape={shape}];\n", self.names[p]));
        }
        for (p, a, q) in self.edges() {
            out.push_str(&format!(
                "  {p} -> {q} [label=\"{}\"];\n",
                self.alphabet.token(a)
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug)]
pub struct FoldMerge {
    /// Original-state representatives merged by this folding step.
    pub a: usize,
    pub b: usize,
    pub letter: Letter,
}

#[derive(Clone, Debug)]
pub struct FoldReport {
    pub merges: Vec<FoldMerge>,
    /// Final classes of original states, by name.
    pub partition: Vec<BTreeSet<String>>,
    pub automaton: Automaton,
}

impl FoldReport {
    /// Replays the merge log on `input`, checking that it reproduces the
    /// folded automaton.
    pub fn replay_matches(&self, input: &Automaton) -> bool {
        let mut uf = UnionFind::new(input.n_states());
        for m in &self.merges {
            uf.union(m.a, m.b);
        }
        uf.partition_names(&input.names) == self.partition
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Smaller index becomes the representative, keeping merges stable.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn partition_names(&mut self, names: &[String]) -> Vec<BTreeSet<String>> {
        let mut classes: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            let r = self.find(i);
            classes.entry(r).or_default().insert(name.clone());
        }
        classes.into_values().collect()
    }
}

/// The literal automaton of `X*` for a prefix code `X`: states are the
/// proper prefixes of `X`, and `p · a` is `pa`, the base, or undefined
/// according to whether `pa` is a proper prefix, a code word, or neither.
pub fn literal_automaton(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<Automaton> {
    if x.is_empty() {
        return Err(Error::Role("the literal automaton needs a nonempty code".into()));
    }
    if !code_role(x)?.is_prefix {
        return Err(Error::Role("the literal automaton needs a prefix code".into()));
    }
    let mut prefixes: BTreeSet<Word> = BTreeSet::new();
    for u in x {
        for k in 0..u.len() {
            prefixes.insert(u.prefix(k));
        }
    }
    let states: Vec<Word> = prefixes.into_iter().collect();
    let index: BTreeMap<&Word, usize> = states.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let base = index[&Word::empty()];
    let names = states.iter().map(|w| alphabet.render(w)).collect();
    let mut a = Automaton::new(alphabet.clone(), names, base);
    for (i, p) in states.iter().enumerate() {
        for l in alphabet.letters() {
            let mut pa = p.clone();
            pa.push(l);
            if let Some(&j) = index.get(&pa) {
                a.add_transition(i, l, j)?;
            } else if x.contains(&pa) {
                a.add_transition(i, l, base)?;
            }
        }
    }
    Ok(a)
}

/// The minimal automaton of `X*` for a finite prefix code `X` (residual
/// automaton, obtained by minimizing the literal automaton).
pub fn minimal_automaton(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<Automaton> {
    literal_automaton(alphabet, x)?.minimize()
}

/// The Stallings automaton of the subgroup generated by a finite set of
/// reduced words: a bouquet of petal cycles at a single base vertex,
/// folded. Inverse letters are traversed backward.
pub fn stallings_automaton(alphabet: &Alphabet, generators: &[ReducedWord]) -> Result<Automaton> {
    if generators.is_empty() || generators.iter().any(ReducedWord::is_identity) {
        return Err(Error::Precondition(
            "generators must be nonempty reduced words".into(),
        ));
    }
    let mut names = vec!["0".to_string()];
    let mut edges: BTreeSet<(usize, u16, usize)> = BTreeSet::new();
    for g in generators {
        let k = g.len();
        let mut prev = 0usize;
        for (i, s) in g.letters().iter().enumerate() {
            let next = if i + 1 == k {
                0
            } else {
                names.push(format!("{}", names.len()));
                names.len() - 1
            };
            if s.inverse {
                edges.insert((next, s.letter.0, prev));
            } else {
                edges.insert((prev, s.letter.0, next));
            }
            prev = next;
        }
    }
    // the bouquet is non-deterministic at the base, so fold a raw edge
    // list rather than a transition table
    fold_edge_list(alphabet, &names, 0, &edges)
}

/// Do the two routes to a Stallings automaton of `⟨X⟩` agree for this
/// prefix code: folding the minimal automaton of `X*` versus folding the
/// bouquet of petals? They provably coincide for bifix codes; this check
/// reports the comparison instead of assuming it elsewhere.
pub fn fold_agreement(alphabet: &Alphabet, x: &BTreeSet<Word>) -> Result<bool> {
    let via_minimal = minimal_automaton(alphabet, x)?.fold()?.automaton;
    let generators: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
    let via_bouquet = stallings_automaton(alphabet, &generators)?;
    via_minimal.isomorphic_to(&via_bouquet)
}

/// Folds an arbitrary edge list (possibly non-deterministic) into the
/// reversible automaton with the same described subgroup.
fn fold_edge_list(
    alphabet: &Alphabet,
    names: &[String],
    base: usize,
    edges: &BTreeSet<(usize, u16, usize)>,
) -> Result<Automaton> {
    let n = names.len();
    let mut uf = UnionFind::new(n);
    loop {
        let mut fwd: BTreeMap<(usize, u16), usize> = BTreeMap::new();
        let mut bwd: BTreeMap<(usize, u16), usize> = BTreeMap::new();
        let mut violation: Option<(usize, usize)> = None;
        'scan: for &(p, a, q) in edges {
            let (rp, rq) = (uf.find(p), uf.find(q));
            if let Some(&q2) = fwd.get(&(rp, a)) {
                if q2 != rq {
                    violation = Some((rq, q2));
                    break 'scan;
                }
            } else {
                fwd.insert((rp, a), rq);
            }
            if let Some(&p2) = bwd.get(&(rq, a)) {
                if p2 != rp {
                    violation = Some((rp, p2));
                    break 'scan;
                }
            } else {
                bwd.insert((rq, a), rp);
            }
        }
        match violation {
            Some((x, y)) => uf.union(x, y),
            None => break,
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&p| uf.find(p) == p).collect();
    let idx: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let out_names: Vec<String> = reps.iter().map(|&r| names[r].clone()).collect();
    let mut out = Automaton::new(alphabet.clone(), out_names, idx[&uf.find(base)]);
    for &(p, a, q) in edges {
        out.add_transition(idx[&uf.find(p)], Letter(a), idx[&uf.find(q)])?;
    }
    out.canonical()
}
