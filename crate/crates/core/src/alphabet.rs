use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A letter, identified by its index in the owning [`Alphabet`].
///
/// The index order is the alphabet order used everywhere canonical
/// output is required (DOT exports, cycle witnesses, BFS renumbering).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(pub u16);

/// An ordered alphabet of distinct printable tokens.
///
/// Tokens may be multi-character (`12` or `ba` are fine as single letters);
/// the apostrophe is reserved as the inverse marker of signed words and is
/// rejected inside tokens.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alphabet {
    tokens: Vec<String>,
    index: BTreeMap<String, Letter>,
}

impl Alphabet {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        let mut index = BTreeMap::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return Err(Error::InvalidAlphabet("empty token".into()));
            }
            if t.contains('\'') {
                return Err(Error::InvalidAlphabet(format!(
                    "token `{t}` contains the reserved inverse marker"
                )));
            }
            if t.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!("token `{t}` contains whitespace")));
            }
            if index.insert(t.clone(), Letter(i as u16)).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate token `{t}`")));
            }
        }
        Ok(Alphabet { tokens, index })
    }

    /// Alphabet whose letters are the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars().map(|c| c.to_string()))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.tokens.len()).map(|i| Letter(i as u16))
    }

    pub fn token(&self, l: Letter) -> &str {
        &self.tokens[l.0 as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn letter(&self, token: &str) -> Result<Letter> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(token.to_string()))
    }

    pub fn contains_token(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    fn single_char_tokens(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    /// Parses a plain word. The empty word may be written `ε` (or `1` when
    /// `1` is not itself a letter).
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let t = s.trim();
        if t == "1" && !self.contains_token("1") {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for tok in tokenize(t)? {
            letters.push(self.letter(&tok)?);
        }
        Ok(Word(letters))
    }

    /// Renders a word; single-character alphabets concatenate, multi-character
    /// alphabets join with spaces. The empty word renders as `ε`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = w.letters().iter().map(|&l| self.token(l)).collect();
        if self.single_char_tokens() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }
}

/// Splits `s` into alphabet tokens.
///
/// Whitespace-separated input is tokenized on whitespace; otherwise each
/// character is a token, with `'tok'` quoting for multi-character tokens.
/// `ε` and the empty string denote the empty word.
pub(crate) fn tokenize(s: &str) -> Result<Vec<String>> {
    let s = s.trim();
    if s.is_empty() || s == "ε" {
        return Ok(Vec::new());
    }
    if s.chars().any(char::is_whitespace) {
        return Ok(s.split_whitespace().map(str::to_string).collect());
    }
    let mut out = Vec::new();
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\'' {
            let mut tok = String::new();
            for d in chars.by_ref() {
                if d == '\'' {
                    break;
                }
                tok.push(d);
            }
            if tok.is_empty() {
                return Err(Error::Parse(format!("empty quoted token in `{s}`")));
            }
            out.push(tok);
        } else {
            out.push(c.to_string());
        }
    }
    Ok(out)
}

/// Builds the alphabet of all tokens occurring in the given word texts,
/// sorted. Convenient when a word list arrives without a declared alphabet.
pub fn infer_alphabet<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Alphabet> {
    let mut tokens: Vec<String> = Vec::new();
    for t in texts {
        for tok in tokenize(t)? {
            let tok = tok.trim_end_matches('\'').to_string();
            if !tokens.contains(&tok) {
                tokens.push(tok);
            }
        }
    }
    tokens.sort();
    Alphabet::new(tokens)
}

/// A finite word over an [`Alphabet`], stored as letter indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The factor `self[i..j]` (letter positions, `i <= j <= len`).
    pub fn factor(&self, i: usize, j: usize) -> Word {
        Word(self.0[i..j].to_vec())
    }

    pub fn prefix(&self, k: usize) -> Word {
        self.factor(0, k)
    }

    pub fn suffix(&self, k: usize) -> Word {
        self.factor(self.len() - k, self.len())
    }

    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn ends_with(&self, other: &Word) -> bool {
        self.0.ends_with(&other.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && other.starts_with(self)
    }

    pub fn is_proper_suffix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && other.ends_with(self)
    }

    /// All factors of `self` of length at most `max_len`, including `ε`.
    pub fn factors(&self, max_len: usize) -> impl Iterator<Item = Word> + '_ {
        let n = self.len();
        std::iter::once(Word::empty()).chain((0..n).flat_map(move |i| {
            (i + 1..=n.min(i + max_len)).map(move |j| self.factor(i, j))
        }))
    }

    /// Positions `e` such that `other` occurs in `self` ending at `e`.
    pub fn occurrence_ends(&self, other: &Word) -> Vec<usize> {
        let (n, m) = (self.len(), other.len());
        (m..=n)
            .filter(|&e| self.0[e - m..e] == other.0[..])
            .collect()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0.iter().map(|l| l.0).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a'"]).is_err());
    }

    #[test]
    fn parses_char_and_token_words() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let w = ab.parse_word("abba").unwrap();
        assert_eq!(ab.render(&w), "abba");
        assert_eq!(ab.parse_word("ε").unwrap(), Word::empty());

        let multi = Alphabet::new(["aa", "ab"]).unwrap();
        let w = multi.parse_word("aa ab aa").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(multi.render(&w), "aa ab aa");
    }

    #[test]
    fn digit_one_is_a_letter_when_declared() {
        let digits = Alphabet::from_chars("123").unwrap();
        let w = digits.parse_word("1").unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn factor_enumeration_counts() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let w = ab.parse_word("aba").unwrap();
        let fs: Vec<Word> = w.factors(3).collect();
        // ε plus 3 + 2 + 1 positions
        assert_eq!(fs.len(), 7);
    }

    #[test]
    fn occurrence_ends_overlap() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let w = ab.parse_word("aaa").unwrap();
        let aa = ab.parse_word("aa").unwrap();
        assert_eq!(w.occurrence_ends(&aa), vec![2, 3]);
    }
}
