//! Batch command line for factor sets: build, classify, verify, export.
//!
//! Exit-code policy: mathematical verdicts (a theorem holding or failing on
//! an instance) always exit 0; only I/O, parsing and precondition errors
//! are process failures.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use treeset_core::alphabet::{infer_alphabet, Alphabet, Word};
use treeset_core::automaton::{literal_automaton, minimal_automaton, stallings_automaton};
use treeset_core::error::Error;
use treeset_core::extension::{bipartite_dot, extension_graph, set_classify, ScanStrategy};
use treeset_core::factor_set::FactorSet;
use treeset_core::free_group::ReducedWord;
use treeset_core::rauzy::{
    labeled_isomorphic, quotient_graph, rauzy_graph, rauzy_group, theta_n_partition,
    verify_return_theorem, ReturnVerdict,
};
use treeset_core::report::VerificationReport;
use treeset_core::source::Source;
use treeset_core::subgroup::{coset_automaton, incidence_graph, is_free, verify_saturation};
use treeset_core::GroupIndex;

#[derive(Parser)]
#[command(
    name = "treeset",
    version,
    about = "Factor sets of morphic words: classification, theorem checks, exports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a set: acyclic/connected/tree, neutrality, complexity.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        /// Longest words inspected (default: horizon − 2).
        #[arg(long)]
        max_len: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a theorem statement on an instance.
    Verify {
        #[arg(value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        code: CodeArgs,
        /// Base word for return-word theorems.
        #[arg(long)]
        word: Option<String>,
        /// Rauzy graph order.
        #[arg(long)]
        order: Option<usize>,
        /// Length bound for saturation scans.
        #[arg(long)]
        bound: Option<usize>,
        /// Base vertex for rauzy-group (defaults to the first vertex).
        #[arg(long)]
        base: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export a graph or automaton.
    Export {
        #[arg(value_enum)]
        object: ExportObject,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        code: CodeArgs,
        /// Word for extension-graph export.
        #[arg(long)]
        word: Option<String>,
        /// Rauzy graph order.
        #[arg(long)]
        order: Option<usize>,
        /// Automaton construction for `export automaton`.
        #[arg(long, value_enum, default_value_t = AutomatonKind::Minimal)]
        kind: AutomatonKind,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    /// Return sets are bases of the free group.
    Return,
    /// Cardinality of return sets equals the alphabet size.
    CardReturn,
    /// A finite word set is free (rank equals cardinality).
    Freeness,
    /// X* ∩ S = ⟨X⟩ ∩ S up to a bound.
    Saturation,
    /// The Rauzy graph describes the free group.
    RauzyGroup,
    /// G_n/θ_n is isomorphic to G_{n−1}.
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportObject {
    ExtensionGraph,
    Rauzy,
    Incidence,
    Automaton,
    Coset,
}

#[derive(Clone, Copy, ValueEnum)]
enum AutomatonKind {
    Literal,
    Minimal,
    Stallings,
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in source: fibonacci, tribonacci, chacon, cassaigne-acyclic,
    /// cassaigne-neutral.
    #[arg(long)]
    source: Option<String>,
    /// Morphism DSL, e.g. "a->ab;b->a".
    #[arg(long)]
    morphism: Option<String>,
    /// Seed letter for the fixpoint.
    #[arg(long)]
    seed: Option<String>,
    /// Post-morphism applied to the fixpoint (DSL).
    #[arg(long)]
    image: Option<String>,
    /// Word-list file: one word per line, `#` comments.
    #[arg(long)]
    words: Option<PathBuf>,
    /// Factor horizon N.
    #[arg(long, default_value_t = 20)]
    horizon: usize,
    /// Extra stabilization iterations for morphic sources.
    #[arg(long, default_value_t = 2)]
    margin: usize,
}

#[derive(Args)]
struct CodeArgs {
    /// Code file: one word per line, `#` comments.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Inline code, comma- or space-separated words.
    #[arg(long)]
    code_inline: Option<String>,
    /// The block code S ∩ A^n.
    #[arg(long)]
    code_block: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Classify { source, max_len, output } => classify(source, max_len, output),
        Command::Verify { theorem, source, code, word, order, bound, base, output } => {
            verify(theorem, source, code, word, order, bound, base, output)
        }
        Command::Export { object, source, code, word, order, kind, output } => {
            export(object, source, code, word, order, kind, output)
        }
    }
}

fn read_word_list(path: &PathBuf) -> Result<Vec<String>, Error> {
    let text = fs::read_to_string(path)?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

impl SourceArgs {
    fn build_source(&self) -> Result<Source, Error> {
        if let Some(name) = &self.source {
            return Source::named(name);
        }
        if let Some(dsl) = &self.morphism {
            let seed = self
                .seed
                .as_deref()
                .ok_or_else(|| Error::Parse("--morphism needs --seed".into()))?;
            return match &self.image {
                Some(image) => Source::morphic_image(dsl, seed, image),
                None => Source::fixpoint(dsl, seed),
            };
        }
        if let Some(path) = &self.words {
            let lines = read_word_list(path)?;
            let alphabet = infer_alphabet(lines.iter().map(String::as_str))?;
            let words = lines
                .iter()
                .map(|l| alphabet.parse_word(l))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Source::Words { alphabet, words });
        }
        Err(Error::Parse(
            "no source given: use --source, --morphism/--seed or --words".into(),
        ))
    }

    fn build_set(&self) -> Result<FactorSet, Error> {
        FactorSet::build(&self.build_source()?, self.horizon, self.margin)
    }
}

impl CodeArgs {
    fn resolve(&self, s: Option<&FactorSet>) -> Result<(Alphabet, BTreeSet<Word>), Error> {
        let raw: Vec<String> = if let Some(path) = &self.code {
            read_word_list(path)?
        } else if let Some(inline) = &self.code_inline {
            inline
                .split([',', ' '])
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        } else if let Some(n) = self.code_block {
            let s = s.ok_or_else(|| Error::Parse("--code-block needs a source".into()))?;
            return Ok((
                s.alphabet().clone(),
                s.words_of_len(n).cloned().collect(),
            ));
        } else {
            return Err(Error::Parse(
                "no code given: use --code, --code-inline or --code-block".into(),
            ));
        };
        let alphabet = match s {
            Some(s) => s.alphabet().clone(),
            None => infer_alphabet(raw.iter().map(String::as_str))?,
        };
        let words = raw
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok((alphabet, words))
    }
}

fn emit(output: &OutputArgs, content: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn classify(source: SourceArgs, max_len: Option<usize>, output: OutputArgs) -> Result<(), Error> {
    let s = source.build_set()?;
    let max_len = max_len.unwrap_or_else(|| s.horizon().saturating_sub(2));
    let classification = set_classify(&s, max_len, ScanStrategy::BispecialOnly)?;
    let neutrality = s.neutrality(max_len)?;
    let profile = s.complexity_profile();

    if output.format == Format::Json {
        let doc = json!({
            "source": s.provenance(),
            "horizon": s.horizon(),
            "margin": source.margin,
            "max_len": max_len,
            "classification": {
                "acyclic": classification.acyclic,
                "connected": classification.connected,
                "tree": classification.tree,
                "biextendable": classification.not_biextendable.is_none(),
                "failing_words": classification
                    .failures
                    .iter()
                    .map(|(w, _)| s.render(w))
                    .collect::<Vec<_>>(),
            },
            "neutrality": neutrality.verdict.to_string(),
            "complexity": {
                "p": profile.p,
                "s": profile.s,
                "b": profile.b,
                "identities_hold": profile.identities_hold(),
            },
            "caveats": [format!("verified up to horizon {}, not a proof", s.horizon())],
        });
        return emit(&output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()));
    }

    let mut text = String::new();
    text.push_str(&format!("source:   {}\n", s.provenance()));
    text.push_str(&format!("horizon:  {} (margin {})\n", s.horizon(), source.margin));
    if let Some(w) = &classification.not_biextendable {
        text.push_str(&format!(
            "warning:  not biextendable (`{}` has no two-sided extension)\n",
            s.render(w)
        ));
    }
    text.push_str(&format!(
        "set:      acyclic={} connected={} tree={}  (words up to length {})\n",
        classification.acyclic, classification.connected, classification.tree, max_len
    ));
    if !classification.failures.is_empty() {
        let ws: Vec<String> = classification
            .failures
            .iter()
            .map(|(w, v)| format!("{} (acyclic={}, connected={})", s.render(w), v.acyclic, v.connected))
            .collect();
        text.push_str(&format!("failing:  {}\n", ws.join("; ")));
    }
    text.push_str(&format!("words:    {}\n", neutrality.verdict));
    let shown = profile.p.len().min(max_len + 1);
    let ps: Vec<String> = profile.p[..shown].iter().map(usize::to_string).collect();
    text.push_str(&format!("p_n:      {}\n", ps.join(" ")));
    text.push_str(&format!(
        "lemma:    difference identities {}\n",
        if profile.identities_hold() { "hold" } else { "FAIL" }
    ));
    text.push_str(&format!(
        "caveat:   verified up to horizon {}, not a proof\n",
        s.horizon()
    ));
    emit(&output, &text)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    theorem: Theorem,
    source: SourceArgs,
    code: CodeArgs,
    word: Option<String>,
    order: Option<usize>,
    bound: Option<usize>,
    base: Option<String>,
    output: OutputArgs,
) -> Result<(), Error> {
    let report = match theorem {
        Theorem::Return | Theorem::CardReturn => {
            let s = source.build_set()?;
            let word = word.ok_or_else(|| Error::Parse("--word is required".into()))?;
            let w = s.parse(&word)?;
            let name = match theorem {
                Theorem::Return => "return-basis",
                _ => "card-return",
            };
            let mut rep = VerificationReport::new(name, format!("{} @ {}", s.provenance(), s.render(&w)), s.horizon());
            match verify_return_theorem(&s, &w)? {
                ReturnVerdict::Inconclusive(r) => rep = rep
                    .verdict("inconclusive")
                    .caveat("return set incomplete at this horizon")
                    .witnesses(r.words.iter().map(|x| s.render(x)).collect::<Vec<_>>()),
                ReturnVerdict::Concluded(r) => {
                    let verdict = match theorem {
                        Theorem::Return => format!(
                            "cardinality={} |A|={} generates={} basis={}",
                            r.cardinality, r.alphabet_size, r.generates_free_group, r.is_basis
                        ),
                        _ => format!(
                            "cardinality={} |A|={} equal={}",
                            r.cardinality, r.alphabet_size, r.card_equals_alphabet
                        ),
                    };
                    rep = rep
                        .verdict(verdict)
                        .witnesses(r.returns.words.iter().map(|x| s.render(x)).collect::<Vec<_>>());
                }
            }
            rep
        }
        Theorem::Freeness => {
            let s = if source.source.is_some() || source.morphism.is_some() || source.words.is_some()
            {
                Some(source.build_set()?)
            } else {
                None
            };
            let (alphabet, x) = code.resolve(s.as_ref())?;
            let r = is_free(&alphabet, &x)?;
            let horizon = s.as_ref().map(|s| s.horizon()).unwrap_or(0);
            let mut rep = VerificationReport::new(
                "freeness",
                format!("{} generators", r.generator_count),
                horizon,
            );
            // freeness of an explicit finite set is decided exactly
            rep.caveats = vec!["exact: decided by the rank of the folded automaton".into()];
            rep.verdict(format!("free={} rank={}", r.free, r.rank))
                .witnesses(x.iter().map(|w| alphabet.render(w)).collect::<Vec<_>>())
        }
        Theorem::Saturation => {
            let s = source.build_set()?;
            let (_, x) = code.resolve(Some(&s))?;
            let bound = bound.unwrap_or_else(|| s.horizon());
            let r = verify_saturation(&x, &s, bound)?;
            VerificationReport::new(
                "saturation",
                format!("{} with {} code words, bound {}", s.provenance(), x.len(), r.bound),
                s.horizon(),
            )
            .verdict(format!("saturated={}", r.saturated))
            .witnesses(r.violations.iter().map(|w| s.render(w)).collect::<Vec<_>>())
        }
        Theorem::RauzyGroup => {
            let s = source.build_set()?;
            let n = order.ok_or_else(|| Error::Parse("--order is required".into()))?;
            let g = rauzy_graph(&s, n)?;
            let base_word = match base {
                Some(b) => s.parse(&b)?,
                None => g
                    .vertices
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::Precondition("empty Rauzy graph".into()))?,
            };
            let r = rauzy_group(&s, n, &base_word)?;
            VerificationReport::new(
                "rauzy-group",
                format!("{} order {} base {}", s.provenance(), n, s.render(&base_word)),
                s.horizon(),
            )
            .verdict(format!(
                "describes_free_group={} folded_states={}",
                r.describes_free_group,
                r.folded.n_states()
            ))
        }
        Theorem::Quotient => {
            let s = source.build_set()?;
            let n = order.ok_or_else(|| Error::Parse("--order is required".into()))?;
            let g = rauzy_graph(&s, n)?;
            let theta = theta_n_partition(&s, n)?;
            let q = quotient_graph(&g, &theta, &s)?;
            let prev = rauzy_graph(&s, n - 1)?.to_labeled(&s);
            let iso = labeled_isomorphic(&q, &prev);
            VerificationReport::new(
                "quotient-isomorphism",
                format!("{} order {}", s.provenance(), n),
                s.horizon(),
            )
            .verdict(format!(
                "classes={} isomorphic_to_previous={}",
                theta.class_count(),
                iso
            ))
            .witnesses(
                theta
                    .classes
                    .iter()
                    .map(|c| {
                        let ws: Vec<String> = c.iter().map(|w| s.render(w)).collect();
                        format!("{{{}}}", ws.join(","))
                    })
                    .collect::<Vec<_>>(),
            )
        }
    };
    // reports embed the stabilization parameters whenever a set was built
    let report = if report.horizon > 0 {
        report.caveat(format!("morphic stabilization margin {}", source.margin))
    } else {
        report
    };
    let content = match output.format {
        Format::Json => format!("{}\n", report.to_json()),
        _ => report.to_text(),
    };
    emit(&output, &content)
}

fn export(
    object: ExportObject,
    source: SourceArgs,
    code: CodeArgs,
    word: Option<String>,
    order: Option<usize>,
    kind: AutomatonKind,
    output: OutputArgs,
) -> Result<(), Error> {
    let content = match object {
        ExportObject::ExtensionGraph => {
            let s = source.build_set()?;
            let word = word.ok_or_else(|| Error::Parse("--word is required".into()))?;
            let w = s.parse(&word)?;
            let g = extension_graph(&s, &w)?;
            bipartite_dot(&g, s.alphabet(), "extension")
        }
        ExportObject::Rauzy => {
            let s = source.build_set()?;
            let n = order.ok_or_else(|| Error::Parse("--order is required".into()))?;
            rauzy_graph(&s, n)?.to_dot(&s, "rauzy")
        }
        ExportObject::Incidence => {
            let s = maybe_set(&source)?;
            let (alphabet, x) = code.resolve(s.as_ref())?;
            let g = incidence_graph(&x)?;
            incidence_dot(&g, &alphabet)
        }
        ExportObject::Automaton => {
            let s = maybe_set(&source)?;
            let (alphabet, x) = code.resolve(s.as_ref())?;
            let a = match kind {
                AutomatonKind::Literal => literal_automaton(&alphabet, &x)?,
                AutomatonKind::Minimal => minimal_automaton(&alphabet, &x)?,
                AutomatonKind::Stallings => {
                    let gens: Vec<ReducedWord> = x.iter().map(ReducedWord::from_word).collect();
                    stallings_automaton(&alphabet, &gens)?
                }
            };
            match output.format {
                Format::Text => a.to_text(),
                _ => a.to_dot("automaton"),
            }
        }
        ExportObject::Coset => {
            let s = maybe_set(&source)?;
            let (alphabet, x) = code.resolve(s.as_ref())?;
            let bx = coset_automaton(&alphabet, &x)?;
            let summary = match bx.subgroup_index()? {
                GroupIndex::Finite(n) => format!("// group automaton, index {n}\n"),
                GroupIndex::Infinite => "// infinite index\n".to_string(),
            };
            match output.format {
                Format::Text => format!("{summary}{}", bx.to_text()),
                _ => bx.to_dot("coset"),
            }
        }
    };
    emit(&output, &content)
}

fn maybe_set(source: &SourceArgs) -> Result<Option<FactorSet>, Error> {
    if source.source.is_some() || source.morphism.is_some() || source.words.is_some() {
        Ok(Some(source.build_set()?))
    } else {
        Ok(None)
    }
}

fn incidence_dot(g: &treeset_core::extension::Bipartite, alphabet: &Alphabet) -> String {
    let mut out = String::from("graph incidence {\n");
    for w in g.left() {
        out.push_str(&format!("  \"P_{}\";\n", alphabet.render(w)));
    }
    for w in g.right() {
        out.push_str(&format!("  \"S_{}\";\n", alphabet.render(w)));
    }
    for (l, r) in g.edge_words() {
        out.push_str(&format!(
            "  \"P_{}\" -- \"S_{}\";\n",
            alphabet.render(l),
            alphabet.render(r)
        ));
    }
    out.push_str("}\n");
    out
}
