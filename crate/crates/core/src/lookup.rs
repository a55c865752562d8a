//! End-to-end generator and analyzer built from a lexicon and rules.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::str::FromStr;

use thiserror::Error;

use crate::fst::{compose, enumerate_paths, is_empty, star, union, union_all, FstError, Side, Transducer};
use crate::lexc::{self, GlossTable, LexcError, LexiconAst};
use crate::symtab::{SymbolError, SymbolId, SymbolTable};
use crate::twol::{self, RuleSet, Strategy, TwolError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Surface forms keep the enriched teaching orthography.
    #[default]
    Pedagogical,
    /// Surface forms are filtered to the standard orthography.
    Normative,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pedagogical" => Ok(Mode::Pedagogical),
            "normative" => Ok(Mode::Normative),
            _ => Err(format!("unknown mode {s:?} (expected pedagogical or normative)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum LookupError {
    #[error("cannot tokenize {0:?}: {1}")]
    Untokenizable(String, SymbolError),
    #[error("lexicon and rules are incompatible: the generator is empty{}", sample_note(.sample))]
    EmptyPipeline { sample: Option<String>, diagnostics: Vec<String> },
    #[error("orthography map: {0}")]
    Mapping(String),
    #[error(transparent)]
    Lexc(#[from] LexcError),
    #[error(transparent)]
    Twol(#[from] TwolError),
    #[error(transparent)]
    Fst(#[from] FstError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

fn sample_note(sample: &Option<String>) -> String {
    match sample {
        Some(s) => format!(" (no rule string matches lexicon path {s})"),
        None => String::new(),
    }
}

/// One analysis of a surface form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Analysis {
    pub text: String,
    pub relaxed: bool,
    pub glosses: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub mode: Mode,
    pub strategy: Strategy,
    /// Pedagogical to normative symbol mapping.
    pub ortho: Vec<(String, String)>,
    /// Strict spelling to tolerated variant.
    pub relax: Vec<(String, String)>,
}

#[derive(Debug)]
pub struct Pipeline {
    pub table: SymbolTable,
    pub mode: Mode,
    pub lexicon: Transducer,
    /// The combined rules as a lexical-to-surface transducer.
    pub rules: Transducer,
    pub generator: Transducer,
    /// Exact inverse of `generator`.
    pub analyzer: Transducer,
    /// What `analyze` consults; in pedagogical mode with an orthography map
    /// it also accepts normative spellings.
    pub recognizer: Transducer,
    pub relaxed: Option<Transducer>,
    pub glosses: GlossTable,
    pub diagnostics: Vec<String>,
}

/// Parses `pedagogical -> normative` lines; `#` starts a comment and `0`
/// stands for nothing.
pub fn parse_mapping(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once("->") else {
            return Err(format!("line {}: expected 'from -> to'", n + 1));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(format!("line {}: empty side", n + 1));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn chars_of(table: &mut SymbolTable, text: &str) -> Result<Vec<SymbolId>, SymbolError> {
    if text == "0" {
        return Ok(Vec::new());
    }
    crate::symtab::nfc(text)
        .chars()
        .map(|c| table.intern(&c.to_string()))
        .collect()
}

/// Identity on `alphabet` except that each key is rewritten to its value.
pub fn build_orthography_filter(
    table: &mut SymbolTable,
    mapping: &[(String, String)],
    alphabet: &BTreeSet<SymbolId>,
) -> Result<Transducer, LookupError> {
    if mapping.is_empty() {
        return Err(LookupError::Mapping("empty mapping".into()));
    }
    let mut rewrites: BTreeMap<SymbolId, Vec<SymbolId>> = BTreeMap::new();
    for (k, v) in mapping {
        let key = chars_of(table, k)?;
        let [key] = key[..] else {
            return Err(LookupError::Mapping(format!("key {k:?} is not a single character")));
        };
        let value = chars_of(table, v)?;
        if let Some(old) = rewrites.insert(key, value.clone()) {
            if old != value {
                return Err(LookupError::Mapping(format!("conflicting entries for {k:?}")));
            }
        }
    }
    for value in rewrites.values() {
        if let Some(&s) = value.iter().find(|s| rewrites.contains_key(s)) {
            return Err(LookupError::Mapping(format!("{:?} is both a key and a value", table.text(s))));
        }
    }
    let id = table.id();
    let mut branches: Vec<Transducer> = alphabet
        .iter()
        .chain(rewrites.values().flatten())
        .filter(|s| !s.is_epsilon() && !rewrites.contains_key(s))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|&s| Transducer::acceptor(id, &[s]))
        .collect();
    for (&k, v) in &rewrites {
        branches.push(Transducer::from_pair_strings(id, &[k], v));
    }
    Ok(star(&union_all(&branches)?))
}

/// Surface-to-surface transducer mapping each strict spelling to itself and
/// to its tolerated variants. Analysis composes its inverse in front of the
/// recognizer.
pub fn build_relax(
    table: &mut SymbolTable,
    spec: &[(String, String)],
    alphabet: &BTreeSet<SymbolId>,
) -> Result<Transducer, LookupError> {
    let id = table.id();
    let mut branches: Vec<Transducer> = alphabet
        .iter()
        .filter(|s| !s.is_epsilon())
        .map(|&s| Transducer::acceptor(id, &[s]))
        .collect();
    for (strict, variant) in spec {
        let s = chars_of(table, strict)?;
        let v = chars_of(table, variant)?;
        for &c in &s {
            branches.push(Transducer::acceptor(id, &[c]));
        }
        branches.push(Transducer::from_pair_strings(id, &s, &v));
    }
    if branches.is_empty() {
        return Ok(Transducer::epsilon(id));
    }
    Ok(star(&union_all(&branches)?))
}

/// Parses and compiles sources into a pipeline. Returns the lexicon AST too,
/// which statistics need.
pub fn compile_sources(
    lexc_files: &[(&str, &str)],
    twol_source: &str,
    config: &PipelineConfig,
) -> Result<(Pipeline, LexiconAst), LookupError> {
    let mut table = SymbolTable::new();
    let ast = lexc::parse_lexc_files(lexc_files, &mut table)?;
    let rules = twol::parse_twol(twol_source, &mut table)?;
    let lexicon = lexc::compile_lexicon(&ast, &table);
    let glosses = lexc::extract_glosses(&ast, &table);
    let mut p = build_pipeline(table, lexicon, &rules, glosses, config)?;
    let cycles = ast.cycles();
    if !cycles.is_empty() {
        p.diagnostics.push(format!("continuation cycles: {cycles:?}"));
    }
    Ok((p, ast))
}

pub fn build_pipeline(
    mut table: SymbolTable,
    lexicon: Transducer,
    rules: &RuleSet,
    glosses: GlossTable,
    config: &PipelineConfig,
) -> Result<Pipeline, LookupError> {
    let combined = twol::combine_rules(rules, &table, config.strategy)?;
    let mut diagnostics = combined.warnings;
    let rule_t = twol::pairs_to_transducer(&combined.acceptor, &table)?;

    let lexical = rules.alphabet.lexical_symbols();
    let missing: Vec<&str> = lexicon
        .side_alphabet(Side::Output)
        .into_iter()
        .filter(|s| !s.is_epsilon() && !lexical.contains(s))
        .map(|s| table.text(s))
        .collect();
    if !missing.is_empty() {
        diagnostics.push(format!("lexicon symbols absent from the rule alphabet: {}", missing.join(" ")));
    }

    let gen0 = compose(&lexicon, &rule_t)?;
    if is_empty(&gen0) {
        let sample = enumerate_paths(&lexicon, 64, 1)
            .pairs
            .first()
            .map(|(a, s)| format!("{} : {}", table.render(a), table.detokenize(s)));
        return Err(LookupError::EmptyPipeline { sample, diagnostics });
    }
    let leaked: Vec<&str> = gen0
        .side_alphabet(Side::Output)
        .into_iter()
        .filter(|&s| table.is_declared(s))
        .map(|s| table.text(s))
        .collect();
    if !leaked.is_empty() {
        diagnostics.push(format!("symbols reach the surface unconsumed: {}", leaked.join(" ")));
    }

    // Multi-character surface symbols such as "aa" become character chains.
    let mut spell: BTreeMap<SymbolId, Vec<SymbolId>> = BTreeMap::new();
    for s in gen0.side_alphabet(Side::Output) {
        if table.is_multichar(s) && !table.is_declared(s) && !table.is_pair(s) {
            let text = table.text(s).to_string();
            spell.insert(s, chars_of(&mut table, &text)?);
        }
    }
    let gen1 = gen0.expand_outputs(|s| spell.get(&s).cloned());

    let filter = if config.ortho.is_empty() {
        None
    } else {
        let alphabet = gen1.side_alphabet(Side::Output);
        Some(build_orthography_filter(&mut table, &config.ortho, &alphabet)?)
    };
    let generator = match (&filter, config.mode) {
        (Some(f), Mode::Normative) => compose(&gen1, f)?,
        _ => gen1.clone(),
    };
    let analyzer = generator.invert();
    let recognizer = match (&filter, config.mode) {
        (Some(f), Mode::Pedagogical) => union(&gen1, &compose(&gen1, f)?)?.invert(),
        _ => analyzer.clone(),
    };
    let mut p = Pipeline {
        table,
        mode: config.mode,
        lexicon,
        rules: rule_t,
        generator,
        analyzer,
        recognizer,
        relaxed: None,
        glosses,
        diagnostics,
    };
    if !config.relax.is_empty() {
        p.set_relax(&config.relax)?;
    }
    Ok(p)
}

fn shortlex(a: &String, b: &String) -> std::cmp::Ordering {
    (a.chars().count(), a).cmp(&(b.chars().count(), b))
}

impl Pipeline {
    /// Assembles a pipeline from previously compiled machines.
    pub fn from_parts(
        table: SymbolTable,
        generator: Transducer,
        recognizer: Transducer,
        glosses: GlossTable,
        mode: Mode,
    ) -> Self {
        let analyzer = generator.invert();
        Pipeline {
            table,
            mode,
            lexicon: Transducer::empty(generator.table()),
            rules: Transducer::empty(generator.table()),
            generator,
            analyzer,
            recognizer,
            relaxed: None,
            glosses,
            diagnostics: Vec::new(),
        }
    }

    /// Enables relaxed analysis with the given strict-to-variant spellings.
    /// An empty spec disables it.
    pub fn set_relax(&mut self, spec: &[(String, String)]) -> Result<(), LookupError> {
        if spec.is_empty() {
            self.relaxed = None;
            return Ok(());
        }
        let alphabet = self.recognizer.side_alphabet(Side::Input);
        let relax = build_relax(&mut self.table, spec, &alphabet)?;
        self.relaxed = Some(compose(&relax.invert(), &self.recognizer)?);
        Ok(())
    }

    /// All surface forms of `analysis`, shortlex-sorted.
    pub fn generate(&self, analysis: &str) -> Result<Vec<String>, LookupError> {
        let input = self
            .table
            .tokenize_frozen(analysis)
            .map_err(|e| LookupError::Untokenizable(analysis.to_string(), e))?;
        Ok(self.render_all(&self.generator, &input))
    }

    fn surface_symbols(&self, surface: &str) -> Result<Vec<SymbolId>, LookupError> {
        crate::symtab::nfc(surface)
            .chars()
            .map(|c| {
                let s = c.to_string();
                self.table
                    .get(&s)
                    .ok_or_else(|| LookupError::Untokenizable(surface.to_string(), SymbolError::UnknownSymbol(s)))
            })
            .collect()
    }

    /// Strict analyses, or relaxed ones (flagged) when there are none.
    pub fn analyze(&self, surface: &str) -> Result<Vec<Analysis>, LookupError> {
        let input = self.surface_symbols(surface)?;
        let strict = self.render_all(&self.recognizer, &input);
        let (texts, relaxed) = match &self.relaxed {
            Some(r) if strict.is_empty() => (self.render_all(r, &input), true),
            _ => (strict, false),
        };
        Ok(texts
            .into_iter()
            .map(|text| {
                let glosses = self.glosses_for(&text);
                Analysis { text, relaxed, glosses }
            })
            .collect())
    }

    fn glosses_for(&self, analysis: &str) -> Vec<String> {
        let Ok(ids) = self.table.tokenize_frozen(analysis) else { return Vec::new() };
        let Some(pos) = lexc::pos_of(&self.table, &ids) else { return Vec::new() };
        let (lemma, _) = lexc::split_analysis(&self.table, &ids);
        self.glosses.get(&self.table.render(&lemma), &pos).to_vec()
    }

    fn render_all(&self, t: &Transducer, input: &[SymbolId]) -> Vec<String> {
        let input: Vec<SymbolId> = input.iter().copied().filter(|s| !s.is_epsilon()).collect();
        let mut out: Vec<String> = apply(t, &input)
            .iter()
            .map(|o| self.table.render(o))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        out.sort_by(shortlex);
        out
    }
}

/// All output strings `t` relates to `input`. Runs of epsilon-input arcs are
/// cut at the number of states.
pub fn apply(t: &Transducer, input: &[SymbolId]) -> BTreeSet<Vec<SymbolId>> {
    let mut results = BTreeSet::new();
    if t.num_states() == 0 {
        return results;
    }
    let cap = t.num_states();
    let mut seen: HashSet<(u32, usize, Vec<SymbolId>)> = HashSet::new();
    let mut stack = vec![(t.start(), 0usize, Vec::new(), 0usize)];
    while let Some((s, pos, out, run)) = stack.pop() {
        if !seen.insert((s, pos, out.clone())) {
            continue;
        }
        if pos == input.len() && t.is_final(s) {
            results.insert(out.clone());
        }
        for a in t.arcs(s) {
            let (next_pos, next_run) = if a.input.is_epsilon() {
                (pos, run + 1)
            } else if pos < input.len() && a.input == input[pos] {
                (pos + 1, 0)
            } else {
                continue;
            };
            if next_run > cap {
                continue;
            }
            let mut o = out.clone();
            if !a.output.is_epsilon() {
                o.push(a.output);
            }
            stack.push((a.target, next_pos, o, next_run));
        }
    }
    results
}
