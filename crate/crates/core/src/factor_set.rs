//! Truncated factorial sets: all factors of length at most `N` of a source
//! word, with extension statistics, complexity profiles, neutrality labels
//! and bounded recurrence checks.
//!
//! Horizon discipline: truncation makes words near the boundary artificially
//! non-extendable, so extension data is only served for `|w| ≤ N − 2` and
//! recurrence searches stay within `|uvw| ≤ N`. Verdicts are always
//! "verified up to the horizon", never proofs about the infinite set.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::source::{PrefixSequence, Source};

/// Hard cap on the approximation length during morphic stabilization.
const MAX_APPROX_LEN: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct FactorSet {
    alphabet: Alphabet,
    horizon: usize,
    by_len: Vec<BTreeSet<Word>>,
    provenance: String,
}

impl FactorSet {
    /// Builds the set of all factors of length ≤ `horizon` of the source.
    ///
    /// Morphic sources are iterated until `margin + 1` consecutive iterates
    /// contribute no new factor of length ≤ `horizon`.
    pub fn build(source: &Source, horizon: usize, margin: usize) -> Result<FactorSet> {
        if horizon < 1 {
            return Err(Error::Precondition("horizon must be at least 1".into()));
        }
        let alphabet = source.alphabet().clone();
        let mut by_len: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); horizon + 1];
        by_len[0].insert(Word::empty());

        let mut seq = source.prefix_sequence()?;
        match &seq {
            PrefixSequence::Explicit(words) => {
                for w in words {
                    insert_factors(&mut by_len, w, 0, horizon);
                }
            }
            PrefixSequence::Iterate { .. } => {
                let mut scanned = 0usize; // prefix length already processed
                let mut quiet = 0usize; // consecutive iterates with no new factor
                loop {
                    let batch = seq.words()?;
                    let word = &batch[0];
                    if word.len() > MAX_APPROX_LEN {
                        return Err(Error::Precondition(
                            "factor set did not stabilize within the length cap".into(),
                        ));
                    }
                    let start = scanned.saturating_sub(horizon.saturating_sub(1));
                    let added = insert_factors(&mut by_len, word, start, horizon);
                    scanned = word.len();
                    if added {
                        quiet = 0;
                    } else {
                        quiet += 1;
                        if quiet > margin {
                            break;
                        }
                    }
                    if !seq.advance()? {
                        break;
                    }
                }
            }
        }

        if by_len[1].is_empty() {
            return Err(Error::EmptySource);
        }
        let fs = FactorSet {
            alphabet,
            horizon,
            by_len,
            provenance: source.describe(),
        };
        debug_assert!(fs.check_factorial().is_ok());
        Ok(fs)
    }

    /// Convenience: a named source built with the default margin of 2.
    pub fn from_named(name: &str, horizon: usize) -> Result<FactorSet> {
        FactorSet::build(&Source::named(name)?, horizon, 2)
    }

    /// Assembles a factor set from pre-computed levels (used by bifix
    /// decoding); verifies factoriality.
    pub(crate) fn from_levels(
        alphabet: Alphabet,
        horizon: usize,
        by_len: Vec<BTreeSet<Word>>,
        provenance: String,
    ) -> Result<FactorSet> {
        let fs = FactorSet { alphabet, horizon, by_len, provenance };
        fs.check_factorial()?;
        Ok(fs)
    }

    fn check_factorial(&self) -> Result<()> {
        // closure under dropping one letter at either end implies closure
        // under all factors
        for n in 1..=self.horizon {
            for w in &self.by_len[n] {
                let head = w.prefix(n - 1);
                let tail = w.suffix(n - 1);
                if !self.by_len[n - 1].contains(&head) || !self.by_len[n - 1].contains(&tail) {
                    return Err(Error::Precondition(format!(
                        "set is not factorial at `{}`",
                        self.alphabet.render(w)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        self.alphabet.parse_word(s)
    }

    pub fn render(&self, w: &Word) -> String {
        self.alphabet.render(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() <= self.horizon && self.by_len[w.len()].contains(w)
    }

    pub fn count_of_len(&self, n: usize) -> usize {
        if n <= self.horizon {
            self.by_len[n].len()
        } else {
            0
        }
    }

    pub fn words_of_len(&self, n: usize) -> impl Iterator<Item = &Word> + '_ {
        self.by_len.get(n).into_iter().flatten()
    }

    /// All stored words, shortest first.
    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.by_len.iter().flatten()
    }

    /// `S ∩ A`, the letters that actually occur.
    pub fn letters_present(&self) -> Vec<Letter> {
        self.by_len[1].iter().map(|w| w.letters()[0]).collect()
    }

    /// Stored words of length `n` that begin with `w`.
    pub fn words_of_len_with_prefix<'a>(
        &'a self,
        n: usize,
        w: &'a Word,
    ) -> impl Iterator<Item = &'a Word> + 'a {
        self.by_len
            .get(n)
            .into_iter()
            .flat_map(move |set| set.range(w.clone()..).take_while(move |u| u.starts_with(w)))
    }

    pub fn left_extensions(&self, w: &Word) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|&a| self.contains(&Word::single(a).concat(w)))
            .collect()
    }

    pub fn right_extensions(&self, w: &Word) -> Vec<Letter> {
        self.alphabet
            .letters()
            .filter(|&b| self.contains(&w.concat(&Word::single(b))))
            .collect()
    }

    /// Exact extension data for `w`; requires `|w| ≤ N − 2` so that the
    /// two-sided extensions are fully observable within the horizon.
    pub fn extension_stats(&self, w: &Word) -> Result<ExtensionStats> {
        if w.len() + 2 > self.horizon {
            return Err(Error::Horizon {
                word: self.render(w),
                needed: w.len() + 2,
                horizon: self.horizon,
            });
        }
        if !self.contains(w) {
            return Err(Error::NotAFactor { word: self.render(w) });
        }
        let left: BTreeSet<Letter> = self.left_extensions(w).into_iter().collect();
        let right: BTreeSet<Letter> = self.right_extensions(w).into_iter().collect();
        let mut pairs = BTreeSet::new();
        for &a in &left {
            let aw = Word::single(a).concat(w);
            for &b in &right {
                if self.contains(&aw.concat(&Word::single(b))) {
                    pairs.insert((a, b));
                }
            }
        }
        Ok(ExtensionStats { left, right, pairs })
    }

    /// First stored word of length ≤ `max_len` that is not biextendable,
    /// if any. Only meaningful for `max_len ≤ N − 2`.
    pub fn biextendability_failure(&self, max_len: usize) -> Option<Word> {
        for n in 0..=max_len.min(self.horizon.saturating_sub(2)) {
            for w in &self.by_len[n] {
                let stats = self.extension_stats(w).ok()?;
                if stats.e() == 0 {
                    return Some(w.clone());
                }
            }
        }
        None
    }

    /// Factor complexity `p_n` with first and second differences and the
    /// exact verification of the two enumeration identities
    /// `s_n = Σ (r(w) − 1)` and `b_n = Σ m(w)`.
    pub fn complexity_profile(&self) -> ComplexityProfile {
        let n_max = self.horizon;
        let p: Vec<usize> = (0..=n_max).map(|n| self.count_of_len(n)).collect();
        let s: Vec<i64> = (0..n_max).map(|n| p[n + 1] as i64 - p[n] as i64).collect();
        let b: Vec<i64> = (0..n_max.saturating_sub(1))
            .map(|n| s[n + 1] - s[n])
            .collect();

        let mut s_identity_failures = Vec::new();
        for (n, &sn) in s.iter().enumerate() {
            let total: i64 = self.by_len[n]
                .iter()
                .map(|w| self.right_extensions(w).len() as i64 - 1)
                .sum();
            if total != sn {
                s_identity_failures.push(n);
            }
        }
        let mut b_identity_failures = Vec::new();
        for (n, &bn) in b.iter().enumerate() {
            let total: i64 = self.by_len[n]
                .iter()
                .map(|w| self.extension_stats(w).expect("within horizon").m())
                .sum();
            if total != bn {
                b_identity_failures.push(n);
            }
        }
        ComplexityProfile { p, s, b, s_identity_failures, b_identity_failures }
    }

    /// Labels every word of length ≤ `max_len` as strong, weak or neutral
    /// and derives the set verdict.
    pub fn neutrality(&self, max_len: usize) -> Result<NeutralityReport> {
        if max_len + 2 > self.horizon {
            return Err(Error::Horizon {
                word: format!("words of length {max_len}"),
                needed: max_len + 2,
                horizon: self.horizon,
            });
        }
        let mut labels = Vec::new();
        for n in 0..=max_len {
            for w in &self.by_len[n] {
                let m = self.extension_stats(w)?.m();
                labels.push((w.clone(), m));
            }
        }
        let verdict = if labels.iter().all(|&(_, m)| m == 0) {
            SetKind::Neutral
        } else if labels.iter().all(|&(_, m)| m >= 0) {
            SetKind::Strong
        } else if labels.iter().all(|&(_, m)| m <= 0) {
            SetKind::Weak
        } else {
            SetKind::Mixed
        };
        Ok(NeutralityReport { max_len, labels, verdict })
    }

    /// Bounded recurrence check: for all `u, w` of length ≤ `probe_len`,
    /// searches for `v` with `uvw` stored, and reports uniform-recurrence
    /// bounds `n(u)` where they can be certified within the horizon.
    pub fn recurrence(&self, probe_len: usize) -> Result<RecurrenceReport> {
        if probe_len * 3 > self.horizon {
            return Err(Error::Horizon {
                word: format!("probe length {probe_len}"),
                needed: probe_len * 3,
                horizon: self.horizon,
            });
        }
        let probes: Vec<&Word> = (0..=probe_len)
            .flat_map(|n| self.by_len[n].iter())
            .collect();
        let mut failures = Vec::new();
        for &u in &probes {
            for &w in &probes {
                let budget = self.horizon - u.len() - w.len();
                let found = (0..=budget).any(|k| {
                    self.by_len[k]
                        .iter()
                        .any(|v| self.contains(&u.concat(v).concat(w)))
                });
                if !found {
                    failures.push((u.clone(), w.clone()));
                }
            }
        }
        let mut uniform_bounds = BTreeMap::new();
        for &u in &probes {
            if u.is_empty() {
                continue;
            }
            let bound = (u.len()..=self.horizon).find(|&n| {
                !self.by_len[n].is_empty()
                    && self.by_len[n]
                        .iter()
                        .all(|z| !z.occurrence_ends(u).is_empty())
            });
            uniform_bounds.insert(u.clone(), bound);
        }
        Ok(RecurrenceReport {
            probe_len,
            recurrent: failures.is_empty(),
            failures,
            uniform_bounds,
        })
    }
}

/// Inserts all factors of `w` of length 1..=`max_len` whose window starts at
/// position ≥ `from`; returns whether anything new appeared.
fn insert_factors(
    by_len: &mut [BTreeSet<Word>],
    w: &Word,
    from: usize,
    max_len: usize,
) -> bool {
    let n = w.len();
    let mut added = false;
    for i in from..n {
        for j in i + 1..=n.min(i + max_len) {
            added |= by_len[j - i].insert(w.factor(i, j));
        }
    }
    added
}

/// `L(w)`, `R(w)`, `E(w)` and the derived counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionStats {
    pub left: BTreeSet<Letter>,
    pub right: BTreeSet<Letter>,
    pub pairs: BTreeSet<(Letter, Letter)>,
}

impl ExtensionStats {
    pub fn ell(&self) -> usize {
        self.left.len()
    }

    pub fn r(&self) -> usize {
        self.right.len()
    }

    pub fn e(&self) -> usize {
        self.pairs.len()
    }

    /// The multiplicity `m(w) = e(w) − ℓ(w) − r(w) + 1`.
    pub fn m(&self) -> i64 {
        self.e() as i64 - self.ell() as i64 - self.r() as i64 + 1
    }

    pub fn is_bispecial(&self) -> bool {
        self.ell() >= 2 && self.r() >= 2
    }
}

#[derive(Clone, Debug)]
pub struct ComplexityProfile {
    /// `p_n` for `0 ≤ n ≤ N`.
    pub p: Vec<usize>,
    /// `s_n = p_{n+1} − p_n` for `0 ≤ n ≤ N−1`.
    pub s: Vec<i64>,
    /// `b_n = s_{n+1} − s_n` for `0 ≤ n ≤ N−2`.
    pub b: Vec<i64>,
    pub s_identity_failures: Vec<usize>,
    pub b_identity_failures: Vec<usize>,
}

impl ComplexityProfile {
    pub fn identities_hold(&self) -> bool {
        self.s_identity_failures.is_empty() && self.b_identity_failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Strong,
    Weak,
    Neutral,
    /// Neither strong nor weak nor neutral (artifact vocabulary, not a
    /// term of the theory).
    Mixed,
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SetKind::Strong => "strong",
            SetKind::Weak => "weak",
            SetKind::Neutral => "neutral",
            SetKind::Mixed => "mixed",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct NeutralityReport {
    pub max_len: usize,
    /// `(w, m(w))` for every stored word of length ≤ `max_len`.
    pub labels: Vec<(Word, i64)>,
    pub verdict: SetKind,
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub probe_len: usize,
    pub recurrent: bool,
    /// Pairs `(u, w)` with no connecting `v` within the horizon.
    pub failures: Vec<(Word, Word)>,
    /// For each probe `u`, the least `n` such that `u` occurs in every
    /// stored word of length `n`, or `None` when unknown at this horizon.
    pub uniform_bounds: BTreeMap<Word, Option<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib(n: usize) -> FactorSet {
        FactorSet::from_named("fibonacci", n).unwrap()
    }

    #[test]
    fn fibonacci_small_factors() {
        let s = fib(2);
        let words: Vec<String> = s.iter().map(|w| s.render(w)).collect();
        assert_eq!(words, ["ε", "a", "b", "aa", "ab", "ba"]);
    }

    #[test]
    fn chacon_two_factors() {
        let s = FactorSet::from_named("chacon", 10).unwrap();
        let words: Vec<String> = s.words_of_len(2).map(|w| s.render(w)).collect();
        assert_eq!(words, ["aa", "ab", "bc", "ca", "cb"]);
    }

    #[test]
    fn explicit_list_closes_factors() {
        let alphabet = Alphabet::from_chars("ab").unwrap();
        let words = vec![
            alphabet.parse_word("aa").unwrap(),
            alphabet.parse_word("ab").unwrap(),
        ];
        let s = FactorSet::build(&Source::Words { alphabet, words }, 2, 0).unwrap();
        let all: Vec<String> = s.iter().map(|w| s.render(w)).collect();
        assert_eq!(all, ["ε", "a", "b", "aa", "ab"]);
    }

    #[test]
    fn chacon_extension_stats() {
        let s = FactorSet::from_named("chacon", 12).unwrap();
        let eps = s.extension_stats(&Word::empty()).unwrap();
        assert_eq!(eps.m(), 0);
        let abc = s.extension_stats(&s.parse("abc").unwrap()).unwrap();
        assert_eq!(abc.m(), 1);
        let bca = s.extension_stats(&s.parse("bca").unwrap()).unwrap();
        assert_eq!(bca.m(), -1);
    }

    #[test]
    fn horizon_and_membership_errors() {
        let s = fib(4);
        let w = s.parse("aba").unwrap();
        assert!(matches!(
            s.extension_stats(&w),
            Err(Error::Horizon { .. })
        ));
        let bad = s.parse("bb").unwrap();
        assert!(matches!(
            s.extension_stats(&bad),
            Err(Error::NotAFactor { .. })
        ));
    }

    #[test]
    fn complexity_profiles_of_builtins() {
        let s = fib(15);
        let c = s.complexity_profile();
        assert!(c.identities_hold());
        for n in 0..=13 {
            assert_eq!(c.p[n], n + 1);
        }

        let t = FactorSet::from_named("tribonacci", 15).unwrap();
        let c = t.complexity_profile();
        assert!(c.identities_hold());
        for n in 1..=13 {
            assert_eq!(c.p[n], 2 * n + 1);
        }

        let ch = FactorSet::from_named("chacon", 15).unwrap();
        let c = ch.complexity_profile();
        assert!(c.identities_hold());
        for n in 1..=13 {
            assert_eq!(c.p[n], 2 * n + 1);
        }
    }

    #[test]
    fn neutrality_verdicts() {
        assert_eq!(fib(12).neutrality(8).unwrap().verdict, SetKind::Neutral);
        let ch = FactorSet::from_named("chacon", 12).unwrap();
        assert_eq!(ch.neutrality(8).unwrap().verdict, SetKind::Mixed);
        let g = FactorSet::from_named("cassaigne-neutral", 12).unwrap();
        assert_eq!(g.neutrality(8).unwrap().verdict, SetKind::Neutral);
        let s = FactorSet::from_named("cassaigne-acyclic", 12).unwrap();
        assert_eq!(s.neutrality(8).unwrap().verdict, SetKind::Weak);
    }

    #[test]
    fn recurrence_of_fibonacci_and_finite_counterexample() {
        let s = fib(12);
        let r = s.recurrence(4).unwrap();
        assert!(r.recurrent);
        assert!(r.uniform_bounds.values().all(Option::is_some));

        let ch = FactorSet::from_named("chacon", 12).unwrap();
        assert!(ch.recurrence(3).unwrap().recurrent);

        // the factorial closure of {vvu} is exactly {ε, u, v, vu, vv, vvu},
        // which is not recurrent: no word contains u twice
        let alphabet = Alphabet::new(["u", "v"]).unwrap();
        let words = vec![alphabet.parse_word("vvu").unwrap()];
        let fin = FactorSet::build(&Source::Words { alphabet, words }, 6, 0).unwrap();
        assert_eq!(fin.iter().count(), 6);
        let r = fin.recurrence(2).unwrap();
        assert!(!r.recurrent);
        let u = fin.parse("u").unwrap();
        assert!(r.failures.iter().any(|(x, y)| x == &u && y == &u));
    }

    #[test]
    fn biextendability_detection() {
        let s = fib(10);
        assert!(s.biextendability_failure(6).is_none());

        let alphabet = Alphabet::new(["u", "v"]).unwrap();
        let words = vec![alphabet.parse_word("v v u").unwrap()];
        let fin = FactorSet::build(&Source::Words { alphabet, words }, 4, 0).unwrap();
        assert!(fin.biextendability_failure(2).is_some());
    }
}
