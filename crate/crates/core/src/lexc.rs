//! Continuation-lexicon source language.
//!
//! ```text
//! file     = [ "Multichar_Symbols" { symbol } ] { lexicon } ;
//! lexicon  = "LEXICON" name { entry } ;
//! entry    = [ form ] contlex [ gloss ] ";" ;
//! form     = analysis [ ":" surface ] ;
//! gloss    = '"' { char } '"' ;
//! ```
//!
//! `!` starts a comment, `%` escapes the next character, a lone `0` is
//! epsilon and the continuation `#` ends a word.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::fst::{Arc, Transducer};
use crate::symtab::{SymbolError, SymbolId, SymbolTable};

pub const ROOT: &str = "Root";
pub const END: &str = "#";

/// Tags recognised as part-of-speech markers.
pub const POS_TAGS: &[&str] = &[
    "+N", "+V", "+A", "+Adv", "+Num", "+Pron", "+Pcle", "+Interj", "+CC", "+CS", "+Pr", "+Po", "+Det",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexcErrorKind {
    UndefinedLexicon(String),
    MissingRoot,
    DuplicateLexicon(String),
    UnterminatedGloss,
    Syntax(String),
    Symbol(SymbolError),
}

impl fmt::Display for LexcErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexcErrorKind::UndefinedLexicon(name) => write!(f, "undefined continuation lexicon {name}"),
            LexcErrorKind::MissingRoot => write!(f, "no LEXICON {ROOT}"),
            LexcErrorKind::DuplicateLexicon(name) => write!(f, "duplicate LEXICON {name}"),
            LexcErrorKind::UnterminatedGloss => write!(f, "unterminated gloss quote"),
            LexcErrorKind::Syntax(msg) => f.write_str(msg),
            LexcErrorKind::Symbol(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{file}:{line}: {kind}")]
pub struct LexcError {
    pub file: String,
    pub line: usize,
    pub kind: LexcErrorKind,
}

/// Where an entry was defined.
#[derive(Debug, Clone, Default)]
pub struct Loc {
    pub file: String,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct LexEntry {
    /// Source spelling of `analysis[:surface]`, absent for epsilon entries.
    pub form: Option<String>,
    pub analysis: Vec<SymbolId>,
    pub surface: Vec<SymbolId>,
    pub contlex: String,
    pub gloss: Option<String>,
    pub loc: Loc,
}

/// Structural equality; source locations are ignored.
impl PartialEq for LexEntry {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
            && self.analysis == other.analysis
            && self.surface == other.surface
            && self.contlex == other.contlex
            && self.gloss == other.gloss
    }
}

impl Eq for LexEntry {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LexiconAst {
    pub multichar_decls: Vec<String>,
    pub lexicons: IndexMap<String, Vec<LexEntry>>,
}

impl LexiconAst {
    pub fn root(&self) -> &[LexEntry] {
        self.lexicons.get(ROOT).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &LexEntry)> {
        self.lexicons
            .iter()
            .flat_map(|(name, es)| es.iter().map(move |e| (name.as_str(), e)))
    }

    /// Pretty-prints the AST as lexc source.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        if !self.multichar_decls.is_empty() {
            out.push_str("Multichar_Symbols\n");
            for d in &self.multichar_decls {
                out.push_str(d);
                out.push('\n');
            }
        }
        for (name, entries) in &self.lexicons {
            out.push_str(&format!("\nLEXICON {name}\n"));
            for e in entries {
                if let Some(form) = &e.form {
                    out.push_str(form);
                    out.push(' ');
                }
                out.push_str(&e.contlex);
                if let Some(g) = &e.gloss {
                    out.push_str(&format!(" \"{g}\""));
                }
                out.push_str(" ;\n");
            }
        }
        out
    }

    /// Strongly connected groups of lexicons that can continue into
    /// themselves, in definition order.
    pub fn cycles(&self) -> Vec<Vec<String>> {
        let names: Vec<&str> = self.lexicons.keys().map(String::as_str).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let edges: Vec<BTreeSet<usize>> = self
            .lexicons
            .values()
            .map(|es| es.iter().filter_map(|e| index.get(e.contlex.as_str()).copied()).collect())
            .collect();
        let reach: Vec<Vec<bool>> = (0..names.len())
            .map(|s| {
                let mut seen = vec![false; names.len()];
                let mut stack: Vec<usize> = edges[s].iter().copied().collect();
                while let Some(n) = stack.pop() {
                    if !std::mem::replace(&mut seen[n], true) {
                        stack.extend(edges[n].iter().copied());
                    }
                }
                seen
            })
            .collect();
        let mut grouped = vec![false; names.len()];
        let mut out = Vec::new();
        for i in 0..names.len() {
            if grouped[i] || !reach[i][i] {
                continue;
            }
            let group: Vec<String> = (0..names.len())
                .filter(|&j| reach[i][j] && reach[j][i])
                .map(|j| {
                    grouped[j] = true;
                    names[j].to_string()
                })
                .collect();
            out.push(group);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Gloss(String),
    Semi,
}

fn lex(file: &str, source: &str) -> Result<Vec<(Tok, usize)>, LexcError> {
    let err = |line, kind| LexcError {
        file: file.to_string(),
        line,
        kind,
    };
    let mut out = Vec::new();
    let mut line = 1;
    let mut chars = source.chars().peekable();
    let mut word = String::new();
    let mut word_line = 1;
    let flush = |word: &mut String, out: &mut Vec<(Tok, usize)>, at: usize| {
        if !word.is_empty() {
            out.push((Tok::Word(std::mem::take(word)), at));
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '%' => {
                if word.is_empty() {
                    word_line = line;
                }
                word.push('%');
                match chars.next() {
                    Some('\n') | None => {
                        return Err(err(line, LexcErrorKind::Symbol(SymbolError::DanglingEscape(word))))
                    }
                    Some(n) => word.push(n),
                }
            }
            '!' => {
                flush(&mut word, &mut out, word_line);
                for n in chars.by_ref() {
                    if n == '\n' {
                        line += 1;
                        break;
                    }
                }
            }
            ';' => {
                flush(&mut word, &mut out, word_line);
                out.push((Tok::Semi, line));
            }
            '"' => {
                flush(&mut word, &mut out, word_line);
                let mut gloss = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\n') | None => return Err(err(line, LexcErrorKind::UnterminatedGloss)),
                        Some(n) => gloss.push(n),
                    }
                }
                out.push((Tok::Gloss(gloss), line));
            }
            c if c.is_whitespace() => {
                flush(&mut word, &mut out, word_line);
                if c == '\n' {
                    line += 1;
                }
            }
            c => {
                if word.is_empty() {
                    word_line = line;
                }
                word.push(c);
            }
        }
    }
    flush(&mut word, &mut out, word_line);
    Ok(out)
}

/// Splits `form` at the first unescaped ':'.
fn split_form(form: &str) -> (&str, Option<&str>) {
    let mut escaped = false;
    for (i, c) in form.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '%' => escaped = true,
            ':' => return (&form[..i], Some(&form[i + 1..])),
            _ => {}
        }
    }
    (form, None)
}

struct RawEntry {
    form: Option<String>,
    contlex: String,
    gloss: Option<String>,
    loc: Loc,
}

pub fn parse_lexc(source: &str, table: &mut SymbolTable) -> Result<LexiconAst, LexcError> {
    parse_lexc_files(&[("<input>", source)], table)
}

/// Parses several files into one namespace, in order.
pub fn parse_lexc_files(files: &[(&str, &str)], table: &mut SymbolTable) -> Result<LexiconAst, LexcError> {
    let mut decls: Vec<(String, Loc)> = Vec::new();
    let mut raw: IndexMap<String, (Loc, Vec<RawEntry>)> = IndexMap::new();
    for &(file, source) in files {
        let err = |line, kind| LexcError {
            file: file.to_string(),
            line,
            kind,
        };
        let toks = lex(file, source)?;
        let mut i = 0;
        let mut current: Option<String> = None;
        let mut pending: Vec<(Tok, usize)> = Vec::new();
        while i < toks.len() {
            let (tok, line) = &toks[i];
            i += 1;
            match tok {
                Tok::Word(w) if w == "Multichar_Symbols" && current.is_none() && pending.is_empty() => {
                    while let Some((Tok::Word(w), l)) = toks.get(i) {
                        if w == "LEXICON" {
                            break;
                        }
                        decls.push((w.clone(), Loc { file: file.into(), line: *l }));
                        i += 1;
                    }
                }
                Tok::Word(w) if w == "LEXICON" => {
                    if !pending.is_empty() {
                        return Err(err(pending[0].1, LexcErrorKind::Syntax("entry not terminated by ';'".into())));
                    }
                    let Some((Tok::Word(name), _)) = toks.get(i) else {
                        return Err(err(*line, LexcErrorKind::Syntax("LEXICON without a name".into())));
                    };
                    i += 1;
                    if raw.contains_key(name) {
                        return Err(err(*line, LexcErrorKind::DuplicateLexicon(name.clone())));
                    }
                    raw.insert(name.clone(), (Loc { file: file.into(), line: *line }, Vec::new()));
                    current = Some(name.clone());
                }
                Tok::Semi => {
                    let Some(name) = &current else {
                        return Err(err(*line, LexcErrorKind::Syntax("entry outside a LEXICON".into())));
                    };
                    let first_line = pending.first().map_or(*line, |p| p.1);
                    let mut words = Vec::new();
                    let mut gloss = None;
                    for (t, l) in pending.drain(..) {
                        match t {
                            Tok::Word(w) if gloss.is_none() => words.push(w),
                            Tok::Gloss(g) if gloss.is_none() => gloss = Some(g),
                            _ => return Err(err(l, LexcErrorKind::Syntax("unexpected token after gloss".into()))),
                        }
                    }
                    let (form, contlex) = match words.len() {
                        1 => (None, words.pop().unwrap()),
                        2 => {
                            let c = words.pop().unwrap();
                            (words.pop(), c)
                        }
                        n => {
                            return Err(err(
                                first_line,
                                LexcErrorKind::Syntax(format!("expected [form] contlex, found {n} words")),
                            ))
                        }
                    };
                    raw[name].1.push(RawEntry {
                        form,
                        contlex,
                        gloss,
                        loc: Loc { file: file.into(), line: first_line },
                    });
                }
                t => {
                    if current.is_none() {
                        return Err(err(*line, LexcErrorKind::Syntax("expected Multichar_Symbols or LEXICON".into())));
                    }
                    pending.push((t.clone(), *line));
                }
            }
        }
        if let Some((_, l)) = pending.first() {
            return Err(err(*l, LexcErrorKind::Syntax("entry not terminated by ';'".into())));
        }
    }

    for (d, loc) in &decls {
        table.declare_multichar(d).map_err(|e| LexcError {
            file: loc.file.clone(),
            line: loc.line,
            kind: LexcErrorKind::Symbol(e),
        })?;
    }
    if !raw.contains_key(ROOT) {
        return Err(LexcError {
            file: files.last().map_or("<input>", |f| f.0).to_string(),
            line: 0,
            kind: LexcErrorKind::MissingRoot,
        });
    }
    let mut ast = LexiconAst {
        multichar_decls: decls.into_iter().map(|(d, _)| d).collect(),
        lexicons: IndexMap::new(),
    };
    for (name, (_, entries)) in &raw {
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let fail = |kind| LexcError {
                file: e.loc.file.clone(),
                line: e.loc.line,
                kind,
            };
            if e.contlex != END && !raw.contains_key(&e.contlex) {
                return Err(fail(LexcErrorKind::UndefinedLexicon(e.contlex.clone())));
            }
            let tok = |table: &mut SymbolTable, s: &str| -> Result<Vec<SymbolId>, LexcError> {
                let ids = table.tokenize(s).map_err(|e| fail(LexcErrorKind::Symbol(e)))?;
                Ok(ids.into_iter().filter(|id| !id.is_epsilon()).collect())
            };
            let (analysis, surface) = match &e.form {
                None => (Vec::new(), Vec::new()),
                Some(form) => {
                    let (a, s) = split_form(form);
                    let analysis = tok(table, a)?;
                    let surface = match s {
                        Some(s) => tok(table, s)?,
                        None => analysis.clone(),
                    };
                    (analysis, surface)
                }
            };
            out.push(LexEntry {
                form: e.form.clone(),
                analysis,
                surface,
                contlex: e.contlex.clone(),
                gloss: e.gloss.clone(),
                loc: e.loc.clone(),
            });
        }
        ast.lexicons.insert(name.clone(), out);
    }
    Ok(ast)
}

/// Compiles the lexicon into a transducer from analyses to morphophonemic
/// surface strings.
pub fn compile_lexicon(ast: &LexiconAst, table: &SymbolTable) -> Transducer {
    let mut t = Transducer::new(table.id());
    let mut entry_state: HashMap<&str, u32> = HashMap::new();
    for name in ast.lexicons.keys() {
        let s = if name == ROOT { 0 } else { t.add_state() };
        entry_state.insert(name, s);
    }
    if !entry_state.contains_key(ROOT) {
        return Transducer::empty(table.id());
    }
    let end = t.add_state();
    t.set_final(end, true);
    for (name, entries) in &ast.lexicons {
        for e in entries {
            let mut state = entry_state[name.as_str()];
            let len = e.analysis.len().max(e.surface.len());
            for i in 0..len {
                let next = t.add_state();
                let a = e.analysis.get(i).copied().unwrap_or(SymbolId::EPSILON);
                let b = e.surface.get(i).copied().unwrap_or(SymbolId::EPSILON);
                t.add_arc(state, Arc::new(a, b, next));
                state = next;
            }
            let target = if e.contlex == END {
                end
            } else {
                entry_state[e.contlex.as_str()]
            };
            t.add_arc(state, Arc::new(SymbolId::EPSILON, SymbolId::EPSILON, target));
        }
    }
    t.trim()
}

/// A multi-character symbol spelled with a leading '+'.
pub fn is_tag(table: &SymbolTable, id: SymbolId) -> bool {
    let text = table.text(id);
    text.starts_with('+') && text.chars().count() > 1
}

/// Splits an analysis into lemma symbols and the tag sequence that follows.
pub fn split_analysis(table: &SymbolTable, analysis: &[SymbolId]) -> (Vec<SymbolId>, Vec<SymbolId>) {
    let cut = analysis
        .iter()
        .position(|&id| is_tag(table, id))
        .unwrap_or(analysis.len());
    (analysis[..cut].to_vec(), analysis[cut..].to_vec())
}

/// The part-of-speech tag of an analysis: its first tag, when that is a POS.
pub fn pos_of(table: &SymbolTable, analysis: &[SymbolId]) -> Option<String> {
    let (_, tags) = split_analysis(table, analysis);
    let first = table.text(*tags.first()?);
    POS_TAGS.contains(&first).then(|| first.to_string())
}

/// Glosses keyed by (lemma, POS tag).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GlossTable {
    rows: IndexMap<(String, String), Vec<String>>,
}

impl GlossTable {
    pub fn get(&self, lemma: &str, pos: &str) -> &[String] {
        self.rows
            .get(&(lemma.to_string(), pos.to_string()))
            .map_or(&[], Vec::as_slice)
    }

    pub fn insert(&mut self, lemma: &str, pos: &str, gloss: &str) {
        self.rows
            .entry((lemma.to_string(), pos.to_string()))
            .or_default()
            .push(gloss.to_string());
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &[String])> {
        self.rows
            .iter()
            .map(|((l, p), g)| (l.as_str(), p.as_str(), g.as_slice()))
    }

    /// `lemma<TAB>pos<TAB>gloss`, one line per gloss.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (lemma, pos, glosses) in self.iter() {
            for g in glosses {
                out.push_str(&format!("{lemma}\t{pos}\t{g}\n"));
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, String> {
        let mut t = GlossTable::default();
        for (n, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.splitn(3, '\t').collect();
            if f.len() != 3 {
                return Err(format!("line {}: expected 3 tab-separated fields", n + 1));
            }
            t.insert(f[0], f[1], f[2]);
        }
        Ok(t)
    }
}

pub fn extract_glosses(ast: &LexiconAst, table: &SymbolTable) -> GlossTable {
    let mut out = GlossTable::default();
    for (_, e) in ast.entries() {
        let Some(gloss) = &e.gloss else { continue };
        let Some(pos) = pos_of(table, &e.analysis) else { continue };
        let (lemma, _) = split_analysis(table, &e.analysis);
        out.insert(&table.render(&lemma), &pos, gloss);
    }
    out
}
