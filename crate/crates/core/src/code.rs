//! Prefix/suffix/bifix codes, parses and `S`-degree, `S`-maximality,
//! internal factors and bifix decoding of factor sets.

use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::factor_set::FactorSet;
use crate::morphism::Morphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeRole {
    pub is_prefix: bool,
    pub is_suffix: bool,
    pub is_bifix: bool,
}

/// Determines whether `x` is a prefix code, suffix code, or both.
pub fn code_role(x: &BTreeSet<Word>) -> Result<CodeRole> {
    if x.iter().any(Word::is_empty) {
        return Err(Error::Role("the empty word cannot belong to a code".into()));
    }
    let mut is_prefix = true;
    let mut is_suffix = true;
    for u in x {
        for v in x {
            if u.is_proper_prefix_of(v) {
                is_prefix = false;
            }
            if u.is_proper_suffix_of(v) {
                is_suffix = false;
            }
        }
    }
    Ok(CodeRole { is_prefix, is_suffix, is_bifix: is_prefix && is_suffix })
}

fn require_bifix(x: &BTreeSet<Word>) -> Result<()> {
    if !code_role(x)?.is_bifix {
        return Err(Error::Role("a bifix code is required".into()));
    }
    Ok(())
}


/// Membership of `w` in `X*` for an arbitrary finite set `X` of nonempty
/// words (dynamic program over positions).
pub fn in_code_star(x: &BTreeSet<Word>, w: &Word) -> bool {
    let n = w.len();
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for i in 0..n {
        if !ok[i] {
            continue;
        }
        for u in x {
            let j = i + u.len();
            if j <= n && w.factor(i, j) == *u {
                ok[j] = true;
            }
        }
    }
    ok[n]
}

/// Is `w` a prefix of some word of `X*`? For a prefix code the leftmost
/// factorization is unique, so greedy stripping is exact.
pub fn is_prefix_of_code_star(x: &BTreeSet<Word>, w: &Word) -> Result<bool> {
    if !code_role(x)?.is_prefix {
        return Err(Error::Role("a prefix code is required".into()));
    }
    let mut i = 0;
    'strip: while i < w.len() {
        for u in x {
            if i + u.len() <= w.len() && w.factor(i, i + u.len()) == *u {
                i += u.len();
                continue 'strip;
            }
        }
        break;
    }
    let rest = w.factor(i, w.len());
    Ok(rest.is_empty() || x.iter().any(|u| rest.is_proper_prefix_of(u)))
}

/// The number of parses `d_X(w)`, computed through the suffix
/// characterization: the suffixes of `w` with no prefix in `X`.
pub fn parse_count(x: &BTreeSet<Word>, w: &Word) -> Result<usize> {
    require_bifix(x)?;
    Ok((0..=w.len())
        .filter(|&i| {
            let suffix = w.factor(i, w.len());
            !x.iter().any(|u| suffix.starts_with(u))
        })
        .count())
}

/// Outcome of an `S`-degree computation on a truncated set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SDegree {
    /// The maximum was stable over the last horizon layers.
    Exact(usize),
    /// The maximum was still growing at the horizon; the true `S`-degree
    /// may exceed the observed value (possibly infinite).
    ExceedsHorizon { observed: usize },
}

/// The `S`-degree of `X`: the maximal number of parses of a stored word.
///
/// The parse count is monotone under extension, so the maximum always sits
/// on the horizon layer; it is reported exact only when the two layers
/// below the horizon already attain it. When inconclusive, words touching
/// the horizon are excluded from the reported maximum.
pub fn s_degree(x: &BTreeSet<Word>, s: &FactorSet) -> Result<SDegree> {
    require_bifix(x)?;
    for u in x {
        if !s.contains(u) {
            return Err(Error::Containment(s.render(u)));
        }
    }
    let layer_max = |n: usize| -> Result<usize> {
        let mut best = 0;
        for w in s.words_of_len(n) {
            best = best.max(parse_count(x, w)?);
        }
        Ok(best)
    };
    let n = s.horizon();
    let top = layer_max(n)?;
    let mut interior = 0;
    for k in 0..n {
        interior = interior.max(layer_max(k)?);
    }
    let stable = n >= 2 && top == layer_max(n - 2)?;
    if stable {
        Ok(SDegree::Exact(interior.max(top)))
    } else {
        Ok(SDegree::ExceedsHorizon { observed: interior })
    }
}

#[derive(Clone, Debug)]
pub struct MaximalityReport {
    pub maximal: bool,
    pub counterexample: Option<Word>,
    /// Words up to this length were checked.
    pub checked_up_to: usize,
}

/// Right-`S`-completeness of a prefix code `X ⊆ S`: every stored word of
/// length ≤ `N − max|X|` must be a prefix of a word of `X*`. Equivalent to
/// `S`-maximality as a prefix code for factorial `S`.
pub fn is_s_maximal_prefix(x: &BTreeSet<Word>, s: &FactorSet) -> Result<MaximalityReport> {
    if !code_role(x)?.is_prefix {
        return Err(Error::Role("a prefix code is required".into()));
    }
    for u in x {
        if !s.contains(u) {
            return Err(Error::Containment(s.render(u)));
        }
    }
    let max_len = x.iter().map(Word::len).max().unwrap_or(0);
    let checked_up_to = s.horizon().saturating_sub(max_len);
    for n in 0..=checked_up_to {
        for w in s.words_of_len(n) {
            if !is_prefix_of_code_star(x, w)? {
                return Ok(MaximalityReport {
                    maximal: false,
                    counterexample: Some(w.clone()),
                    checked_up_to,
                });
            }
        }
    }
    Ok(MaximalityReport { maximal: true, counterexample: None, checked_up_to })
}

/// Mirror image of [`is_s_maximal_prefix`] for suffix codes.
pub fn is_s_maximal_suffix(x: &BTreeSet<Word>, s: &FactorSet) -> Result<MaximalityReport> {
    if !code_role(x)?.is_suffix {
        return Err(Error::Role("a suffix code is required".into()));
    }
    for u in x {
        if !s.contains(u) {
            return Err(Error::Containment(s.render(u)));
        }
    }
    let rev = |w: &Word| Word::from_letters(w.letters().iter().rev().copied());
    let x_rev: BTreeSet<Word> = x.iter().map(|w| rev(w)).collect();
    let max_len = x.iter().map(Word::len).max().unwrap_or(0);
    let checked_up_to = s.horizon().saturating_sub(max_len);
    for n in 0..=checked_up_to {
        for w in s.words_of_len(n) {
            if !is_prefix_of_code_star(&x_rev, &rev(w))? {
                return Ok(MaximalityReport {
                    maximal: false,
                    counterexample: Some(w.clone()),
                    checked_up_to,
                });
            }
        }
    }
    Ok(MaximalityReport { maximal: true, counterexample: None, checked_up_to })
}

/// The internal factors `I(X)`: words `w` such that `uwv ∈ X` for some
/// nonempty `u, v`.
pub fn internal_factors(x: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for u in x {
        let n = u.len();
        for i in 1..n {
            for j in i..n {
                out.insert(u.factor(i, j));
            }
        }
    }
    out
}

/// A coding morphism: a morphism mapping an abstract alphabet bijectively
/// onto a code.
#[derive(Clone, Debug)]
pub struct CodingMorphism(Morphism);

impl CodingMorphism {
    pub fn new(m: Morphism) -> Result<Self> {
        let images: BTreeSet<&Word> = m.images().iter().collect();
        if images.len() != m.images().len() {
            return Err(Error::Role("coding morphism images must be pairwise distinct".into()));
        }
        if m.images().iter().any(Word::is_empty) {
            return Err(Error::Role("coding morphism images must be nonempty".into()));
        }
        Ok(CodingMorphism(m))
    }

    pub fn parse(dsl: &str) -> Result<Self> {
        CodingMorphism::new(Morphism::parse(dsl)?)
    }

    pub fn morphism(&self) -> &Morphism {
        &self.0
    }

    pub fn code(&self) -> BTreeSet<Word> {
        self.0.images().iter().cloned().collect()
    }
}

/// The bifix decoding `f⁻¹(S)` of `S` under a coding morphism for a bifix
/// code `X ⊆ S`, as a factor set over the abstract alphabet with the
/// conservative horizon `⌊N / max|X|⌋`.
pub fn bifix_decode(s: &FactorSet, f: &CodingMorphism) -> Result<FactorSet> {
    let x = f.code();
    require_bifix(&x)?;
    for u in &x {
        if !s.contains(u) {
            return Err(Error::Containment(s.render(u)));
        }
    }
    let m = f.morphism();
    let horizon = s.horizon() / m.max_image_len();
    if horizon == 0 {
        return Err(Error::Horizon {
            word: "decoded set".into(),
            needed: m.max_image_len(),
            horizon: s.horizon(),
        });
    }
    let mut by_len: Vec<BTreeSet<Word>> = vec![BTreeSet::new(); horizon + 1];
    by_len[0].insert(Word::empty());
    // the decoded set is factorial, hence closed under right extension of
    // prefixes: breadth-first growth finds every word
    for n in 1..=horizon {
        let (lower, upper) = by_len.split_at_mut(n);
        for u in &lower[n - 1] {
            for b in m.domain().letters() {
                let mut ext = u.clone();
                ext.push(b);
                if s.contains(&m.apply(&ext)) {
                    upper[0].insert(ext);
                }
            }
        }
    }
    FactorSet::from_levels(
        m.domain().clone(),
        horizon,
        by_len,
        format!("bifix decoding of [{}] under {}", s.provenance(), m),
    )
}

/// Enumerates the suffix codes made of stored words of length ≤ `max_word_len`,
/// smallest code sets first, up to `cap` many.
pub fn suffix_codes_within(s: &FactorSet, max_word_len: usize, cap: usize) -> Vec<BTreeSet<Word>> {
    codes_within(s, max_word_len, cap, |u, v| u.is_proper_suffix_of(v))
}

/// Enumerates the prefix codes made of stored words of length ≤ `max_word_len`.
pub fn prefix_codes_within(s: &FactorSet, max_word_len: usize, cap: usize) -> Vec<BTreeSet<Word>> {
    codes_within(s, max_word_len, cap, |u, v| u.is_proper_prefix_of(v))
}

fn codes_within(
    s: &FactorSet,
    max_word_len: usize,
    cap: usize,
    comparable: impl Fn(&Word, &Word) -> bool,
) -> Vec<BTreeSet<Word>> {
    let words: Vec<Word> = (1..=max_word_len)
        .flat_map(|n| s.words_of_len(n).cloned())
        .collect();
    let mut out: Vec<BTreeSet<Word>> = Vec::new();
    let mut stack: Vec<(usize, BTreeSet<Word>)> = vec![(0, BTreeSet::new())];
    while let Some((i, cur)) = stack.pop() {
        if out.len() >= cap {
            break;
        }
        if i == words.len() {
            if !cur.is_empty() {
                out.push(cur);
            }
            continue;
        }
        let w = &words[i];
        // branch: include w when compatible, then skip w
        if !cur.iter().any(|u| comparable(u, w) || comparable(w, u)) {
            let mut with = cur.clone();
            with.insert(w.clone());
            stack.push((i + 1, with));
        }
        stack.push((i + 1, cur));
    }
    out
}

/// The alphabet yielded when decoding with `k` fresh letters; tokens are
/// `u, v, w, x, ...` for small `k`.
pub fn decoding_alphabet(k: usize) -> Result<Alphabet> {
    const NAMES: [&str; 8] = ["u", "v", "w", "x", "y", "z", "s", "t"];
    if k <= NAMES.len() {
        Alphabet::new(NAMES[..k].iter().copied())
    } else {
        Alphabet::new((0..k).map(|i| format!("b{i}")))
    }
}
