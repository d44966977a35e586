//! Shared brute-force oracles and random generators for the integration
//! suites. Oracles are deliberately independent of the library's own
//! computation paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use treeset_core::alphabet::{Alphabet, Letter, Word};
use treeset_core::free_group::{reduce, ReducedWord, SignedLetter, SignedWord};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Direct parse enumeration: counts the triples `(v, x, u)` with `w = vxu`,
/// `v` without suffix in `X`, `x ∈ X*`, `u` without prefix in `X`.
pub fn parse_count_oracle(x: &BTreeSet<Word>, w: &Word) -> usize {
    let n = w.len();
    // star[i][j]: w[i..j] ∈ X*
    let mut star = vec![vec![false; n + 1]; n + 1];
    for i in 0..=n {
        star[i][i] = true;
        for j in i + 1..=n {
            star[i][j] = (i..j).any(|k| star[i][k] && x.contains(&w.factor(k, j)));
        }
    }
    let mut count = 0;
    for i in 0..=n {
        let v = w.prefix(i);
        if x.iter().any(|u| v.ends_with(u)) {
            continue;
        }
        for j in i..=n {
            if !star[i][j] {
                continue;
            }
            let u = w.factor(j, n);
            if x.iter().any(|p| u.starts_with(p)) {
                continue;
            }
            count += 1;
        }
    }
    count
}

/// All reduced products of at most `k` factors from `X ∪ X⁻¹`, the
/// brute-force positive oracle for subgroup membership.
pub fn generator_products(generators: &[ReducedWord], k: usize) -> BTreeSet<ReducedWord> {
    let mut atoms: Vec<ReducedWord> = generators.to_vec();
    atoms.extend(generators.iter().map(ReducedWord::invert));
    let mut out: BTreeSet<ReducedWord> = [ReducedWord::identity()].into_iter().collect();
    let mut frontier: Vec<ReducedWord> = vec![ReducedWord::identity()];
    for _ in 0..k {
        let mut next = Vec::new();
        for g in &frontier {
            for a in &atoms {
                let p = g.group_concat(a);
                if out.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter(rng.gen_range(0..alphabet.len()) as u16)))
}

/// A random bifix code of `size` words with lengths in `1..=max_len`
/// (rejection sampling).
pub fn random_bifix_code(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    size: usize,
    max_len: usize,
) -> BTreeSet<Word> {
    let mut code: BTreeSet<Word> = BTreeSet::new();
    let mut attempts = 0;
    while code.len() < size && attempts < 1000 {
        attempts += 1;
        let len = rng.gen_range(1..=max_len);
        let w = random_word(rng, alphabet, len);
        let compatible = code.iter().all(|u| {
            !u.is_proper_prefix_of(&w)
                && !w.is_proper_prefix_of(u)
                && !u.is_proper_suffix_of(&w)
                && !w.is_proper_suffix_of(u)
                && *u != w
        });
        if compatible {
            code.insert(w);
        }
    }
    code
}

/// A random nonempty reduced word of length `1..=max_len`.
pub fn random_reduced(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> ReducedWord {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut letters: Vec<SignedLetter> = Vec::with_capacity(len);
        for _ in 0..len {
            let cand = SignedLetter {
                letter: Letter(rng.gen_range(0..alphabet.len()) as u16),
                inverse: rng.gen_bool(0.5),
            };
            if letters.last().is_some_and(|p: &SignedLetter| p.cancels(&cand)) {
                continue;
            }
            letters.push(cand);
        }
        let w = reduce(&SignedWord::new(letters));
        if !w.is_identity() {
            return w;
        }
    }
}
