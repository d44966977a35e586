//! Word sources that factor sets are built from: fixpoints of morphisms,
//! morphic images of fixpoints, and explicit word lists.

use crate::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::morphism::Morphism;

#[derive(Clone, Debug)]
pub enum Source {
    /// Factors of `f^ω(seed)`.
    Fixpoint { morphism: Morphism, seed: Letter },
    /// Factors of `image(f^ω(seed))`.
    MorphicImage {
        morphism: Morphism,
        seed: Letter,
        image: Morphism,
    },
    /// The factorial closure of an explicit list of words.
    Words { alphabet: Alphabet, words: Vec<Word> },
}

impl Source {
    /// The alphabet of the produced words.
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Source::Fixpoint { morphism, .. } => morphism.codomain(),
            Source::MorphicImage { image, .. } => image.codomain(),
            Source::Words { alphabet, .. } => alphabet,
        }
    }

    pub fn fixpoint(dsl: &str, seed: &str) -> Result<Source> {
        let morphism = Morphism::parse(dsl)?;
        let seed = morphism.domain().letter(seed)?;
        Ok(Source::Fixpoint { morphism, seed })
    }

    pub fn morphic_image(dsl: &str, seed: &str, image_dsl: &str) -> Result<Source> {
        let morphism = Morphism::parse(dsl)?;
        let seed = morphism.domain().letter(seed)?;
        let image = Morphism::parse(image_dsl)?;
        Ok(Source::MorphicImage { morphism, seed, image })
    }

    /// The sources used throughout the test corpus, reachable by name:
    /// `fibonacci`, `tribonacci`, `chacon`, `cassaigne-acyclic` and
    /// `cassaigne-neutral`.
    pub fn named(name: &str) -> Result<Source> {
        match name {
            "fibonacci" => Source::fixpoint("a->ab;b->a", "a"),
            "tribonacci" => Source::fixpoint("a->ab;b->ac;c->a", "a"),
            "chacon" => Source::fixpoint("a->aabc;b->bc;c->abc", "a"),
            "cassaigne-acyclic" => Source::fixpoint("a->ab;b->cda;c->cd;d->abc", "a"),
            "cassaigne-neutral" => Source::morphic_image(
                "a->ab;b->cda;c->cd;d->abc",
                "a",
                "a->12;b->2;c->3;d->13",
            ),
            _ => Err(Error::Parse(format!("unknown source `{name}`"))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Source::Fixpoint { morphism, seed } => format!(
                "fixpoint of {} from {}",
                morphism,
                morphism.domain().token(*seed)
            ),
            Source::MorphicImage { morphism, seed, image } => format!(
                "image under {} of the fixpoint of {} from {}",
                image,
                morphism,
                morphism.domain().token(*seed)
            ),
            Source::Words { words, .. } => format!("explicit list of {} words", words.len()),
        }
    }

    /// Successive approximations of the underlying infinite word: the `k`-th
    /// item is a prefix of the `(k+1)`-th. Explicit lists yield one batch.
    pub(crate) fn prefix_sequence(&self) -> Result<PrefixSequence> {
        match self {
            Source::Fixpoint { morphism, seed } => {
                let f = morphism.as_endomorphism().ok_or_else(|| {
                    Error::Precondition("fixpoints need an endomorphism".into())
                })?;
                let seed_word = Word::single(*seed);
                let first = f.apply(&seed_word);
                if !first.starts_with(&seed_word) {
                    return Err(Error::SeedNotFixed {
                        f: f.to_string(),
                        seed: f.domain().token(*seed).to_string(),
                    });
                }
                if first.len() == 1 {
                    return Err(Error::NonExpanding(f.domain().token(*seed).to_string()));
                }
                Ok(PrefixSequence::Iterate { f, cur: first, image: None })
            }
            Source::MorphicImage { morphism, seed, image } => {
                let inner = Source::Fixpoint {
                    morphism: morphism.clone(),
                    seed: *seed,
                }
                .prefix_sequence()?;
                match inner {
                    PrefixSequence::Iterate { f, cur, .. } => Ok(PrefixSequence::Iterate {
                        f,
                        cur,
                        image: Some(image.clone()),
                    }),
                    PrefixSequence::Explicit(_) => unreachable!(),
                }
            }
            Source::Words { words, .. } => {
                if words.iter().all(Word::is_empty) {
                    return Err(Error::EmptySource);
                }
                Ok(PrefixSequence::Explicit(words.clone()))
            }
        }
    }
}

pub(crate) enum PrefixSequence {
    Iterate {
        f: Morphism,
        cur: Word,
        image: Option<Morphism>,
    },
    Explicit(Vec<Word>),
}

impl PrefixSequence {
    /// The current batch of words whose factors are to be collected.
    pub(crate) fn words(&self) -> Result<Vec<Word>> {
        match self {
            PrefixSequence::Iterate { cur, image, .. } => Ok(vec![match image {
                Some(m) => m.apply(cur),
                None => cur.clone(),
            }]),
            PrefixSequence::Explicit(ws) => Ok(ws.clone()),
        }
    }

    /// Advances to the next approximation; `false` when exhausted.
    pub(crate) fn advance(&mut self) -> Result<bool> {
        match self {
            PrefixSequence::Iterate { f, cur, .. } => {
                let next = f.apply(cur);
                if next.len() == cur.len() {
                    return Err(Error::NonExpanding(f.domain().render(&cur.prefix(1))));
                }
                *cur = next;
                Ok(true)
            }
            PrefixSequence::Explicit(_) => Ok(false),
        }
    }
}
