//! Extension graphs `E(w)`, generalized extension graphs `E_{U,V}(w)` and
//! the acyclic/connected/tree classification of factor sets.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::factor_set::FactorSet;

/// One side of a bipartite graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Side {
    Left,
    Right,
}

/// An undirected bipartite graph whose two vertex sets are disjoint copies
/// of word sets. Used both for extension graphs and for incidence graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartite {
    left: Vec<Word>,
    right: Vec<Word>,
    /// Edges as index pairs into `left` × `right`.
    edges: BTreeSet<(usize, usize)>,
}

impl Bipartite {
    pub fn new(left: Vec<Word>, right: Vec<Word>, edges: BTreeSet<(usize, usize)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(l, r)| l < left.len() && r < right.len()));
        Bipartite { left, right, edges }
    }

    pub fn left(&self) -> &[Word] {
        &self.left
    }

    pub fn right(&self) -> &[Word] {
        &self.right
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_words(&self) -> impl Iterator<Item = (&Word, &Word)> + '_ {
        self.edges.iter().map(|&(l, r)| (&self.left[l], &self.right[r]))
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn contains_edge(&self, l: &Word, r: &Word) -> bool {
        match (
            self.left.iter().position(|w| w == l),
            self.right.iter().position(|w| w == r),
        ) {
            (Some(i), Some(j)) => self.edges.contains(&(i, j)),
            _ => false,
        }
    }

    /// Vertices in a fixed total order: left side first, each side sorted.
    fn vertices(&self) -> Vec<(Side, usize)> {
        (0..self.left.len())
            .map(|i| (Side::Left, i))
            .chain((0..self.right.len()).map(|j| (Side::Right, j)))
            .collect()
    }

    fn neighbors(&self, v: (Side, usize)) -> Vec<(Side, usize)> {
        match v.0 {
            Side::Left => self
                .edges
                .iter()
                .filter(|&&(l, _)| l == v.1)
                .map(|&(_, r)| (Side::Right, r))
                .collect(),
            Side::Right => self
                .edges
                .iter()
                .filter(|&&(_, r)| r == v.1)
                .map(|&(l, _)| (Side::Left, l))
                .collect(),
        }
    }

    pub fn classify(&self) -> GraphVerdict {
        let vertices = self.vertices();
        let n = vertices.len();
        let index = |v: (Side, usize)| match v.0 {
            Side::Left => v.1,
            Side::Right => self.left.len() + v.1,
        };

        // connected components by union-find
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(l, r) in &self.edges {
            let (a, b) = (
                find(&mut parent, index((Side::Left, l))),
                find(&mut parent, index((Side::Right, r))),
            );
            if a != b {
                parent[a] = b;
            }
        }
        let components = (0..n).filter(|&i| find(&mut parent, i) == i).count();
        let acyclic = self.edges.len() + components == n;
        let connected = components <= 1;
        let cycle = if acyclic { None } else { Some(self.best_cycle()) };
        GraphVerdict {
            acyclic,
            connected,
            tree: acyclic && connected,
            components,
            cycle,
        }
    }

    /// The lexicographically least among the shortest cycles, as a vertex
    /// sequence starting from its least vertex (closing edge implied).
    fn best_cycle(&self) -> Vec<(Side, Word)> {
        let vertices = self.vertices();
        let mut best: Option<Vec<(Side, usize)>> = None;
        // DFS bounded by the current best length; graphs here are tiny
        for &start in &vertices {
            let mut path = vec![start];
            self.cycle_dfs(start, start, &mut path, &mut best);
        }
        let best = best.expect("cyclic graph has a cycle");
        best.iter()
            .map(|&(side, i)| {
                let w = match side {
                    Side::Left => self.left[i].clone(),
                    Side::Right => self.right[i].clone(),
                };
                (side, w)
            })
            .collect()
    }

    fn cycle_dfs(
        &self,
        start: (Side, usize),
        cur: (Side, usize),
        path: &mut Vec<(Side, usize)>,
        best: &mut Option<Vec<(Side, usize)>>,
    ) {
        if let Some(b) = best {
            if path.len() >= b.len() {
                return;
            }
        }
        let mut nbrs = self.neighbors(cur);
        nbrs.sort();
        for nb in nbrs {
            if nb == start && path.len() >= 4 {
                let candidate = path.clone();
                let better = match best {
                    None => true,
                    Some(b) => {
                        candidate.len() < b.len()
                            || (candidate.len() == b.len() && candidate_key(self, &candidate) < candidate_key(self, b))
                    }
                };
                if better {
                    *best = Some(candidate);
                }
                continue;
            }
            // canonical start: never walk to a vertex smaller than the start
            if nb <= start || path.contains(&nb) {
                continue;
            }
            path.push(nb);
            self.cycle_dfs(start, nb, path, best);
            path.pop();
        }
    }
}

fn candidate_key(g: &Bipartite, cycle: &[(Side, usize)]) -> Vec<(Side, Word)> {
    cycle
        .iter()
        .map(|&(side, i)| {
            let w = match side {
                Side::Left => g.left[i].clone(),
                Side::Right => g.right[i].clone(),
            };
            (side, w)
        })
        .collect()
}

/// Classification of a single bipartite graph.
#[derive(Clone, Debug)]
pub struct GraphVerdict {
    pub acyclic: bool,
    pub connected: bool,
    pub tree: bool,
    pub components: usize,
    /// Present exactly when the graph is cyclic; vertex sequence of the
    /// lexicographically least shortest cycle.
    pub cycle: Option<Vec<(Side, Word)>>,
}

/// The extension graph of `w`: vertices `L(w) ⊔ R(w)`, edges `E(w)`.
pub fn extension_graph(s: &FactorSet, w: &Word) -> Result<Bipartite> {
    let stats = s.extension_stats(w)?;
    let left: Vec<Word> = stats.left.iter().map(|&a| Word::single(a)).collect();
    let right: Vec<Word> = stats.right.iter().map(|&b| Word::single(b)).collect();
    let edges = stats
        .pairs
        .iter()
        .map(|&(a, b)| {
            (
                left.iter().position(|w| w.letters() == [a]).unwrap(),
                right.iter().position(|w| w.letters() == [b]).unwrap(),
            )
        })
        .collect();
    Ok(Bipartite::new(left, right, edges))
}

/// The generalized extension graph `E_{U,V}(w)`: vertices are the words of
/// `U` (resp. `V`) that extend `w` on the left (resp. right), edges the
/// pairs with `ℓwr ∈ S`.
pub fn generalized_extension_graph(
    s: &FactorSet,
    w: &Word,
    u: &BTreeSet<Word>,
    v: &BTreeSet<Word>,
) -> Result<Bipartite> {
    let max_u = u.iter().map(Word::len).max().unwrap_or(0);
    let max_v = v.iter().map(Word::len).max().unwrap_or(0);
    if max_u + w.len() + max_v > s.horizon() {
        return Err(Error::Horizon {
            word: s.render(w),
            needed: max_u + w.len() + max_v,
            horizon: s.horizon(),
        });
    }
    if !s.contains(w) {
        return Err(Error::NotAFactor { word: s.render(w) });
    }
    let left: Vec<Word> = u.iter().filter(|l| s.contains(&l.concat(w))).cloned().collect();
    let right: Vec<Word> = v.iter().filter(|r| s.contains(&w.concat(r))).cloned().collect();
    let mut edges = BTreeSet::new();
    for (i, l) in left.iter().enumerate() {
        let lw = l.concat(w);
        for (j, r) in right.iter().enumerate() {
            if s.contains(&lw.concat(r)) {
                edges.insert((i, j));
            }
        }
    }
    Ok(Bipartite::new(left, right, edges))
}

/// How [`set_classify`] chooses the words to inspect.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScanStrategy {
    /// `ε` plus the bispecial words; sound for biextendable sets because
    /// non-bispecial extension graphs are trees.
    BispecialOnly,
    /// Every stored word in range.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct SetClassification {
    pub max_len: usize,
    pub acyclic: bool,
    pub connected: bool,
    pub tree: bool,
    /// The first non-biextendable word found, if any. A set with such a
    /// word is classified neither acyclic nor connected nor tree.
    pub not_biextendable: Option<Word>,
    /// Words whose extension graph broke acyclicity or connectedness,
    /// with their verdicts.
    pub failures: Vec<(Word, GraphVerdict)>,
    pub inspected: usize,
}

/// Classifies the set as acyclic / connected / tree by inspecting the
/// extension graphs of all words of length ≤ `max_len`.
pub fn set_classify(s: &FactorSet, max_len: usize, strategy: ScanStrategy) -> Result<SetClassification> {
    if max_len + 2 > s.horizon() {
        return Err(Error::Horizon {
            word: format!("words of length {max_len}"),
            needed: max_len + 2,
            horizon: s.horizon(),
        });
    }
    let not_biextendable = s.biextendability_failure(max_len);
    let mut acyclic = true;
    let mut connected = true;
    let mut failures = Vec::new();
    let mut inspected = 0;
    for n in 0..=max_len {
        for w in s.words_of_len(n) {
            let stats = s.extension_stats(w)?;
            if strategy == ScanStrategy::BispecialOnly && !w.is_empty() && !stats.is_bispecial() {
                continue;
            }
            inspected += 1;
            let verdict = extension_graph(s, w)?.classify();
            if !verdict.acyclic || !verdict.connected {
                acyclic &= verdict.acyclic;
                connected &= verdict.connected;
                failures.push((w.clone(), verdict));
            }
        }
    }
    if not_biextendable.is_some() {
        acyclic = false;
        connected = false;
    }
    Ok(SetClassification {
        max_len,
        acyclic,
        connected,
        tree: acyclic && connected,
        not_biextendable,
        failures,
        inspected,
    })
}

/// DOT rendering with `L_`/`R_` vertex prefixes (deterministic ordering).
pub fn bipartite_dot(g: &Bipartite, alphabet: &Alphabet, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("graph {name} {{\n"));
    for w in g.left() {
        out.push_str(&format!("  \"L_{}\";\n", alphabet.render(w)));
    }
    for w in g.right() {
        out.push_str(&format!("  \"R_{}\";\n", alphabet.render(w)));
    }
    for (l, r) in g.edge_words() {
        out.push_str(&format!(
            "  \"L_{}\" -- \"R_{}\";\n",
            alphabet.render(l),
            alphabet.render(r)
        ));
    }
    out.push_str("}\n");
    out
}
