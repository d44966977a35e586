//! Monoid morphisms `f : A* → B*`, their fixpoints and the `a->ab; b->a` DSL.

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};

/// A morphism given by the images of the domain letters.
#[derive(Clone, Debug)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::Parse(format!(
                "expected {} images, got {}",
                domain.len(),
                images.len()
            )));
        }
        if images.iter().any(Word::is_empty) {
            return Err(Error::Parse("every letter needs a nonempty image".into()));
        }
        Ok(Morphism { domain, codomain, images })
    }

    /// Parses `a->ab; b->a`. Whitespace is ignored; multi-character tokens are
    /// quoted (`'ab'->'ab''ba'`). The domain is the left-hand sides in order
    /// of appearance, the codomain the right-hand tokens in order of first
    /// appearance; an endomorphism results when the two coincide as sets.
    pub fn parse(dsl: &str) -> Result<Self> {
        let mut lhs_tokens: Vec<String> = Vec::new();
        let mut rhs_raw: Vec<String> = Vec::new();
        for rule in dsl.split(';') {
            let rule: String = rule.chars().filter(|c| !c.is_whitespace()).collect();
            if rule.is_empty() {
                continue;
            }
            let (lhs, rhs) = rule
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("rule `{rule}` lacks `->`")))?;
            let lhs = lhs.trim_matches('\'');
            if lhs.is_empty() {
                return Err(Error::Parse(format!("rule `{rule}` has an empty left side")));
            }
            if lhs_tokens.iter().any(|t| t == lhs) {
                return Err(Error::Parse(format!("duplicate rule for `{lhs}`")));
            }
            lhs_tokens.push(lhs.to_string());
            rhs_raw.push(rhs.to_string());
        }
        if lhs_tokens.is_empty() {
            return Err(Error::Parse("empty morphism".into()));
        }
        let domain = Alphabet::new(lhs_tokens)?;
        // collect codomain tokens in first-appearance order
        let mut codomain_tokens: Vec<String> = Vec::new();
        let mut images_tok: Vec<Vec<String>> = Vec::new();
        for rhs in &rhs_raw {
            let toks = crate::alphabet::tokenize(rhs)?;
            for t in &toks {
                if !codomain_tokens.contains(t) {
                    codomain_tokens.push(t.clone());
                }
            }
            images_tok.push(toks);
        }
        let codomain = Alphabet::new(codomain_tokens)?;
        let images: Vec<Word> = images_tok
            .iter()
            .map(|toks| {
                let letters: Result<Vec<Letter>> =
                    toks.iter().map(|t| codomain.letter(t)).collect();
                Ok(Word::from_letters(letters?))
            })
            .collect::<Result<_>>()?;
        Morphism::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn image(&self, l: Letter) -> &Word {
        &self.images[l.0 as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Applies the morphism letterwise.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &l in w.letters() {
            out.extend_from_slice(self.images[l.0 as usize].letters());
        }
        Word::from_letters(out)
    }

    /// True when domain and codomain carry the same token set, so the
    /// morphism can be iterated. Images are re-indexed over the domain.
    pub fn as_endomorphism(&self) -> Option<Morphism> {
        if self.domain.len() != self.codomain.len() {
            return None;
        }
        if !self
            .codomain
            .tokens()
            .iter()
            .all(|t| self.domain.contains_token(t))
        {
            return None;
        }
        let images = self
            .images
            .iter()
            .map(|w| {
                Word::from_letters(
                    w.letters()
                        .iter()
                        .map(|&l| self.domain.letter(self.codomain.token(l)).unwrap()),
                )
            })
            .collect();
        Some(Morphism {
            domain: self.domain.clone(),
            codomain: self.domain.clone(),
            images,
        })
    }

    fn describe(&self) -> String {
        self.domain
            .letters()
            .map(|l| {
                format!(
                    "{}->{}",
                    self.domain.token(l),
                    self.codomain.render(self.image(l))
                )
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// A prefix of the fixpoint `f^ω(seed)` of length at least `target_len`,
    /// truncated to `target_len`.
    pub fn fixpoint_prefix(&self, seed: Letter, target_len: usize) -> Result<Word> {
        let f = self
            .as_endomorphism()
            .ok_or_else(|| Error::Precondition("fixpoints need an endomorphism".into()))?;
        let seed_word = Word::single(seed);
        let first = f.apply(&seed_word);
        if !first.starts_with(&seed_word) {
            return Err(Error::SeedNotFixed {
                f: f.describe(),
                seed: f.domain.token(seed).to_string(),
            });
        }
        if first.len() == 1 {
            return Err(Error::NonExpanding(f.domain.token(seed).to_string()));
        }
        let mut cur = first;
        while cur.len() < target_len {
            let next = f.apply(&cur);
            if next.len() == cur.len() {
                return Err(Error::NonExpanding(f.domain.token(seed).to_string()));
            }
            cur = next;
        }
        Ok(cur.prefix(target_len.min(cur.len())))
    }
}

impl std::fmt::Display for Morphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_prefix() {
        let f = Morphism::parse("a->ab;b->a").unwrap();
        let seed = f.domain().letter("a").unwrap();
        let w = f.fixpoint_prefix(seed, 21).unwrap();
        assert_eq!(f.domain().render(&w), "abaababaabaababaababa");
    }

    #[test]
    fn tribonacci_prefix() {
        let f = Morphism::parse("a->ab;b->ac;c->a").unwrap();
        let seed = f.domain().letter("a").unwrap();
        let w = f.fixpoint_prefix(seed, 13).unwrap();
        assert_eq!(f.domain().render(&w), "abacabaabacab");
    }

    #[test]
    fn chacon_prefix() {
        let f = Morphism::parse("a->aabc;b->bc;c->abc").unwrap();
        let seed = f.domain().letter("a").unwrap();
        let w = f.fixpoint_prefix(seed, 13).unwrap();
        assert_eq!(f.domain().render(&w), "aabcaabcbcabc");
    }

    #[test]
    fn apply_examples() {
        let tau = Morphism::parse("a->12;b->2;c->3;d->13").unwrap();
        let ab = tau.domain().parse_word("ab").unwrap();
        assert_eq!(tau.codomain().render(&tau.apply(&ab)), "122");
        assert!(tau.apply(&Word::empty()).is_empty());

        let f = Morphism::parse("a->ab;b->a").unwrap();
        let ab = f.domain().parse_word("ab").unwrap();
        assert_eq!(f.domain().render(&f.apply(&ab)), "aba");
    }

    #[test]
    fn quoted_multichar_tokens() {
        let f = Morphism::parse("'aa'->'aa''ab';'ab'->'aa'").unwrap();
        assert_eq!(f.domain().len(), 2);
        let w = f.domain().parse_word("aa ab").unwrap();
        assert_eq!(f.codomain().render(&f.apply(&w)), "aa ab aa");
    }

    #[test]
    fn non_expanding_seed() {
        let f = Morphism::parse("a->a;b->ab").unwrap();
        let seed = f.domain().letter("a").unwrap();
        assert!(matches!(
            f.fixpoint_prefix(seed, 5),
            Err(Error::NonExpanding(_))
        ));
    }

    #[test]
    fn seed_must_be_fixed() {
        let f = Morphism::parse("a->ba;b->a").unwrap();
        let seed = f.domain().letter("a").unwrap();
        assert!(matches!(
            f.fixpoint_prefix(seed, 5),
            Err(Error::SeedNotFixed { .. })
        ));
    }
}
