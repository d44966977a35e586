//! Factor sets of morphic words and the machinery built on top of them:
//! extension graphs with the acyclic/connected/tree classification, bifix
//! codes and their decodings, Rauzy graphs and return words, Stallings
//! foldings and the subgroup checks they enable (freeness, saturation,
//! coset automata).
//!
//! Everything works on truncated sets (all factors of length at most a
//! horizon `N`), so classification results are exact for the stored words
//! and carry an "up to the horizon" qualifier as statements about the
//! underlying infinite word.

pub mod alphabet;
pub mod automaton;
pub mod code;
pub mod error;
pub mod extension;
pub mod factor_set;
pub mod free_group;
pub mod morphism;
pub mod rauzy;
pub mod report;
pub mod source;
pub mod subgroup;

pub use alphabet::{Alphabet, Letter, Word};
pub use automaton::{
    literal_automaton, minimal_automaton, stallings_automaton, Automaton, FoldReport, GroupIndex,
    Predicates,
};
pub use code::{
    bifix_decode, code_role, in_code_star, internal_factors, is_s_maximal_prefix,
    is_s_maximal_suffix, parse_count, s_degree, CodeRole, CodingMorphism, SDegree,
};
pub use error::{Error, Result};
pub use extension::{
    extension_graph, generalized_extension_graph, set_classify, Bipartite, GraphVerdict,
    ScanStrategy, SetClassification, Side,
};
pub use factor_set::{ComplexityProfile, ExtensionStats, FactorSet, NeutralityReport, SetKind};
pub use free_group::{
    height, parse_signed, reduce, render_signed, ReducedWord, SignedLetter, SignedWord,
};
pub use morphism::Morphism;
pub use rauzy::{
    labeled_isomorphic, quotient_graph, rauzy_graph, rauzy_group, return_words, theta_n_partition,
    verify_return_theorem, LabeledGraph, RauzyGraph, ReturnSide, ReturnVerdict, ReturnWords,
    ThetaPartition,
};
pub use report::VerificationReport;
pub use source::Source;
pub use subgroup::{
    coset_automaton, incidence_graph, is_free, theta_x_partition, verify_saturation,
    verify_unitary_corollary, FreenessReport, SaturationReport, ThetaX, UnitarySide,
    UnitaryViolation,
};
