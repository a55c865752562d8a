//! Symbol alphabet shared by lexicons, rules and transducers.
//!
//! A [`SymbolTable`] interns UTF-8 symbol texts to dense ids. Id 0 is always
//! epsilon. Multi-character symbols (tags such as `+Sg`, triggers such as
//! `%^V2VV`, archiphoneme arrays such as `{ʹØ}`) become matchable by the
//! tokenizer once they are *declared*; other multi-character texts (surface
//! realizations like `aa`, pair symbols like `a:b`) are interned but never
//! produced by tokenization.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Canonical text of the epsilon symbol in exchange formats.
pub const EPSILON_TEXT: &str = "@0@";

/// Dense symbol id. `SymbolId(0)` is epsilon.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub const EPSILON: SymbolId = SymbolId(0);

    pub fn is_epsilon(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Identity of a symbol table. Transducers remember which table their labels
/// belong to so that binary operations can refuse mixed alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableId(u64);

static NEXT_TABLE_ID: AtomicU64 = AtomicU64::new(1);

impl TableId {
    fn fresh() -> Self {
        TableId(NEXT_TABLE_ID.fetch_add(1, Ordering::Relaxed))
    }
}

/// An interned symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub id: SymbolId,
    pub text: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("empty symbol text")]
    Empty,
    #[error("invalid UTF-8 in symbol text")]
    InvalidUtf8,
    #[error("dangling escape '%' at end of {0:?}")]
    DanglingEscape(String),
    #[error("unknown symbol id {0}")]
    UnknownId(u32),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("malformed symbol table line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// One unit of escaped source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Unit {
    ch: char,
    escaped: bool,
}

fn units(text: &str) -> Result<Vec<Unit>, SymbolError> {
    let mut out = Vec::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c == '%' {
            match chars.next() {
                Some(next) => out.push(Unit {
                    ch: next,
                    escaped: true,
                }),
                None => return Err(SymbolError::DanglingEscape(text.to_string())),
            }
        } else {
            out.push(Unit {
                ch: c,
                escaped: false,
            });
        }
    }
    Ok(out)
}

/// Removes `%` escapes, returning the literal character sequence.
pub fn unescape(text: &str) -> Result<String, SymbolError> {
    Ok(units(text)?.into_iter().map(|u| u.ch).collect())
}

/// NFC-normalizes `text`.
pub fn nfc(text: &str) -> String {
    text.nfc().collect()
}

/// Characters that carry syntax in lexc/twol sources and must be escaped when
/// rendered back as literal single-character symbols.
fn needs_escape(c: char) -> bool {
    matches!(
        c,
        '%' | '0' | ':' | ';' | '!' | '"' | '_' | '(' | ')' | '[' | ']' | '|' | '*' | '+' | '\\' | '='
    ) || c.is_whitespace()
}

/// Interned alphabet of single- and multi-character symbols.
#[derive(Debug)]
pub struct SymbolTable {
    id: TableId,
    texts: Vec<String>,
    index: HashMap<String, SymbolId>,
    multichar: HashSet<SymbolId>,
    /// Declared multichar symbols keyed by their unescaped spelling.
    declared: HashMap<String, SymbolId>,
    max_declared_chars: usize,
    /// Any multi-character symbol keyed by its unescaped spelling.
    by_literal: HashMap<String, SymbolId>,
    pairs: HashMap<SymbolId, (SymbolId, SymbolId)>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut index = HashMap::new();
        index.insert(EPSILON_TEXT.to_string(), SymbolId::EPSILON);
        SymbolTable {
            id: TableId::fresh(),
            texts: vec![EPSILON_TEXT.to_string()],
            index,
            multichar: HashSet::new(),
            declared: HashMap::new(),
            max_declared_chars: 0,
            by_literal: HashMap::new(),
            pairs: HashMap::new(),
        }
    }

    pub fn id(&self) -> TableId {
        self.id
    }

    /// Number of symbols including epsilon.
    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.len() <= 1
    }

    /// Interns `text` (after NFC normalization) and returns its id.
    pub fn intern(&mut self, text: &str) -> Result<SymbolId, SymbolError> {
        if text.is_empty() {
            return Err(SymbolError::Empty);
        }
        let text = nfc(text);
        if let Some(&id) = self.index.get(&text) {
            return Ok(id);
        }
        let id = SymbolId(self.texts.len() as u32);
        if text.chars().count() > 1 {
            self.multichar.insert(id);
            if let Ok(literal) = unescape(&text) {
                self.by_literal.entry(literal).or_insert(id);
            }
        }
        self.index.insert(text.clone(), id);
        self.texts.push(text);
        Ok(id)
    }

    /// Interns raw bytes, rejecting invalid UTF-8.
    pub fn intern_bytes(&mut self, bytes: &[u8]) -> Result<SymbolId, SymbolError> {
        let text = std::str::from_utf8(bytes).map_err(|_| SymbolError::InvalidUtf8)?;
        self.intern(text)
    }

    pub fn symbol(&self, id: SymbolId) -> Result<Symbol, SymbolError> {
        Ok(Symbol {
            id,
            text: self.resolve(id)?.to_string(),
        })
    }

    pub fn resolve(&self, id: SymbolId) -> Result<&str, SymbolError> {
        self.texts
            .get(id.index())
            .map(String::as_str)
            .ok_or(SymbolError::UnknownId(id.0))
    }

    /// Like [`resolve`](Self::resolve) for ids known to come from this table.
    pub fn text(&self, id: SymbolId) -> &str {
        self.resolve(id).unwrap_or("@?@")
    }

    /// Looks up an already interned text without modifying the table.
    pub fn get(&self, text: &str) -> Option<SymbolId> {
        self.index.get(&nfc(text)).copied()
    }

    pub fn is_multichar(&self, id: SymbolId) -> bool {
        self.multichar.contains(&id)
    }

    /// True for symbols made available to the tokenizer by a declaration.
    pub fn is_declared(&self, id: SymbolId) -> bool {
        self.declared.get(&self.literal_text(id)).copied() == Some(id)
    }

    fn literal_text(&self, id: SymbolId) -> String {
        let text = self.text(id);
        unescape(text).unwrap_or_else(|_| text.to_string())
    }

    /// Declares a multichar symbol given in source spelling (e.g. `%^V2VV`).
    ///
    /// The symbol keeps its source spelling as text; the tokenizer matches it
    /// by its unescaped spelling, so `^V2VV` and `%^V2VV` in entry strings
    /// both resolve to it.
    pub fn declare_multichar(&mut self, spelling: &str) -> Result<SymbolId, SymbolError> {
        let spelling = nfc(spelling);
        let literal = unescape(&spelling)?;
        if literal.is_empty() {
            return Err(SymbolError::Empty);
        }
        let count = literal.chars().count();
        if count == 1 {
            return self.intern(&literal);
        }
        if let Some(&id) = self.declared.get(&literal) {
            return Ok(id);
        }
        let id = match self.by_literal.get(&literal) {
            Some(&id) if !self.pairs.contains_key(&id) => id,
            _ => self.intern(&spelling)?,
        };
        self.declared.insert(literal, id);
        self.max_declared_chars = self.max_declared_chars.max(count);
        Ok(id)
    }

    /// Declared multichar symbols in id order.
    pub fn declared_symbols(&self) -> Vec<SymbolId> {
        let mut ids: Vec<SymbolId> = self.declared.values().copied().collect();
        ids.sort();
        ids
    }

    /// Interns the pair symbol `upper:lower` used as a two-level alphabet unit.
    pub fn pair_symbol(&mut self, upper: SymbolId, lower: SymbolId) -> Result<SymbolId, SymbolError> {
        let text = format!("{}:{}", self.side_text(upper)?, self.side_text(lower)?);
        if let Some(&id) = self.index.get(&text) {
            if self.pairs.get(&id) == Some(&(upper, lower)) {
                return Ok(id);
            }
        }
        let id = SymbolId(self.texts.len() as u32);
        self.multichar.insert(id);
        self.index.entry(text.clone()).or_insert(id);
        self.texts.push(text);
        self.pairs.insert(id, (upper, lower));
        Ok(id)
    }

    /// Looks up an existing pair symbol.
    pub fn find_pair(&self, upper: SymbolId, lower: SymbolId) -> Option<SymbolId> {
        let text = format!("{}:{}", self.side_text(upper).ok()?, self.side_text(lower).ok()?);
        let id = *self.index.get(&text)?;
        (self.pairs.get(&id) == Some(&(upper, lower))).then_some(id)
    }

    fn side_text(&self, id: SymbolId) -> Result<&str, SymbolError> {
        if id.is_epsilon() {
            Ok("0")
        } else {
            self.resolve(id)
        }
    }

    pub fn pair_components(&self, id: SymbolId) -> Option<(SymbolId, SymbolId)> {
        self.pairs.get(&id).copied()
    }

    pub fn is_pair(&self, id: SymbolId) -> bool {
        self.pairs.contains_key(&id)
    }

    /// Resolves one whole source token (a side of a two-level pair, a set
    /// member) to a symbol, interning it if needed. Unescaped `0` is epsilon.
    pub fn resolve_token(&mut self, token: &str) -> Result<SymbolId, SymbolError> {
        if let Some(id) = self.lookup_token(token)? {
            return Ok(id);
        }
        let literal = unescape(&nfc(token))?;
        if literal.chars().count() == 1 {
            self.intern(&literal)
        } else {
            self.intern(token)
        }
    }

    /// Read-only variant of [`resolve_token`](Self::resolve_token).
    pub fn lookup_token(&self, token: &str) -> Result<Option<SymbolId>, SymbolError> {
        if token.is_empty() {
            return Err(SymbolError::Empty);
        }
        if token == "0" {
            return Ok(Some(SymbolId::EPSILON));
        }
        let token = nfc(token);
        let literal = unescape(&token)?;
        if literal.chars().count() == 1 {
            return Ok(self.index.get(&literal).copied());
        }
        if let Some(&id) = self.declared.get(&literal) {
            return Ok(Some(id));
        }
        if let Some(&id) = self.by_literal.get(&literal) {
            if !self.pairs.contains_key(&id) {
                return Ok(Some(id));
            }
        }
        Ok(self.index.get(&token).copied().filter(|id| !self.pairs.contains_key(id)))
    }

    /// Longest-match tokenization, interning unseen single characters.
    pub fn tokenize(&mut self, text: &str) -> Result<Vec<SymbolId>, SymbolError> {
        self.tokenize_with(text, |table, c| table.intern(c.encode_utf8(&mut [0; 4])))
    }

    /// Longest-match tokenization against a frozen table; unknown characters
    /// are an error.
    pub fn tokenize_frozen(&self, text: &str) -> Result<Vec<SymbolId>, SymbolError> {
        let mut out = Vec::new();
        let text = nfc(text);
        let units = units(&text)?;
        let mut i = 0;
        while i < units.len() {
            if let Some((id, len)) = self.match_declared(&units[i..]) {
                out.push(id);
                i += len;
                continue;
            }
            let u = units[i];
            if u.ch == '0' && !u.escaped {
                out.push(SymbolId::EPSILON);
            } else {
                let s = u.ch.to_string();
                match self.index.get(&s) {
                    Some(&id) => out.push(id),
                    None => return Err(SymbolError::UnknownSymbol(s)),
                }
            }
            i += 1;
        }
        Ok(out)
    }

    fn tokenize_with<F>(&mut self, text: &str, mut single: F) -> Result<Vec<SymbolId>, SymbolError>
    where
        F: FnMut(&mut Self, char) -> Result<SymbolId, SymbolError>,
    {
        let text = nfc(text);
        let units = units(&text)?;
        let mut out = Vec::with_capacity(units.len());
        let mut i = 0;
        while i < units.len() {
            if let Some((id, len)) = self.match_declared(&units[i..]) {
                out.push(id);
                i += len;
                continue;
            }
            let u = units[i];
            if u.ch == '0' && !u.escaped {
                out.push(SymbolId::EPSILON);
            } else {
                out.push(single(self, u.ch)?);
            }
            i += 1;
        }
        Ok(out)
    }

    fn match_declared(&self, units: &[Unit]) -> Option<(SymbolId, usize)> {
        let longest = self.max_declared_chars.min(units.len());
        for len in (2..=longest).rev() {
            let key: String = units[..len].iter().map(|u| u.ch).collect();
            if let Some(&id) = self.declared.get(&key) {
                return Some((id, len));
            }
        }
        None
    }

    /// Renders a token sequence back to escaped source text.
    pub fn detokenize(&self, ids: &[SymbolId]) -> String {
        let mut out = String::new();
        for &id in ids {
            if id.is_epsilon() {
                out.push('0');
                continue;
            }
            let text = self.text(id);
            let mut chars = text.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    if needs_escape(c) {
                        out.push('%');
                    }
                    out.push(c);
                }
                _ => out.push_str(text),
            }
        }
        out
    }

    /// Plain concatenation of symbol texts, epsilon omitted.
    pub fn render(&self, ids: &[SymbolId]) -> String {
        ids.iter()
            .filter(|id| !id.is_epsilon())
            .map(|&id| self.text(id))
            .collect()
    }

    /// Serializes the table: one `id<TAB>kind<TAB>text` line per symbol.
    ///
    /// `kind` is `sym`, `multichar` (declared) or `pair:<upper>:<lower>`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, text) in self.texts.iter().enumerate() {
            let id = SymbolId(i as u32);
            let kind = if let Some((u, l)) = self.pairs.get(&id) {
                format!("pair:{}:{}", u.0, l.0)
            } else if self.is_declared(id) {
                "multichar".to_string()
            } else {
                "sym".to_string()
            };
            out.push_str(&format!("{}\t{}\t{}\n", i, kind, escape_field(text)));
        }
        out
    }

    /// Rebuilds a table from [`to_tsv`](Self::to_tsv) output, preserving ids.
    pub fn from_tsv(source: &str) -> Result<Self, SymbolError> {
        let mut table = SymbolTable::new();
        let mut pending_declared = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line_no = n + 1;
            if line.is_empty() {
                continue;
            }
            let malformed = |message: &str| SymbolError::Malformed {
                line: line_no,
                message: message.to_string(),
            };
            let mut fields = line.splitn(3, '\t');
            let id: u32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| malformed("bad id"))?;
            let kind = fields.next().ok_or_else(|| malformed("missing kind"))?;
            let text = unescape_field(fields.next().ok_or_else(|| malformed("missing text"))?);
            if id == 0 {
                if text != EPSILON_TEXT {
                    return Err(malformed("id 0 must be epsilon"));
                }
                continue;
            }
            if id as usize != table.texts.len() {
                return Err(malformed("ids must be dense and ascending"));
            }
            if let Some(rest) = kind.strip_prefix("pair:") {
                let (u, l) = rest.split_once(':').ok_or_else(|| malformed("bad pair kind"))?;
                let u: u32 = u.parse().map_err(|_| malformed("bad pair upper"))?;
                let l: u32 = l.parse().map_err(|_| malformed("bad pair lower"))?;
                if u >= id || l >= id {
                    return Err(malformed("pair refers to a later symbol"));
                }
                let got = table.pair_symbol(SymbolId(u), SymbolId(l))?;
                if got.0 != id {
                    return Err(malformed("duplicate pair"));
                }
            } else {
                let got = table.intern_fresh(&text).ok_or_else(|| malformed("duplicate symbol"))?;
                debug_assert_eq!(got.0, id);
                if kind == "multichar" {
                    pending_declared.push(text);
                } else if kind != "sym" {
                    return Err(malformed("unknown kind"));
                }
            }
        }
        for spelling in pending_declared {
            table.declare_multichar(&spelling)?;
        }
        Ok(table)
    }

    fn intern_fresh(&mut self, text: &str) -> Option<SymbolId> {
        if text.is_empty() || self.index.contains_key(text) {
            return None;
        }
        self.intern(text).ok()
    }

    /// All symbols in id order.
    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.texts.iter().enumerate().map(|(i, t)| Symbol {
            id: SymbolId(i as u32),
            text: t.clone(),
        })
    }

    /// Map from text to id for every symbol, sorted by text.
    pub fn text_index(&self) -> BTreeMap<&str, SymbolId> {
        self.index.iter().map(|(t, &id)| (t.as_str(), id)).collect()
    }
}

fn escape_field(text: &str) -> String {
    text.replace('\\', "\\\\").replace('\t', "\\t").replace('\n', "\\n")
}

fn unescape_field(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('t') => out.push('\t'),
                Some('n') => out.push('\n'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn intern_is_idempotent() {
        let mut t = SymbolTable::new();
        let a = t.intern("+N").unwrap();
        let b = t.intern("+N").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trigger_is_multichar() {
        let mut t = SymbolTable::new();
        let id = t.intern("%^V2VV").unwrap();
        assert_ne!(id, SymbolId::EPSILON);
        assert!(t.is_multichar(id));
    }

    #[test]
    fn distinct_texts_distinct_ids() {
        let mut t = SymbolTable::new();
        assert_ne!(t.intern("a").unwrap(), t.intern("b").unwrap());
    }

    #[test]
    fn empty_and_invalid_rejected() {
        let mut t = SymbolTable::new();
        assert_eq!(t.intern(""), Err(SymbolError::Empty));
        assert_eq!(t.intern_bytes(&[0xff, 0xfe]), Err(SymbolError::InvalidUtf8));
    }

    #[test]
    fn tokenize_splits_tags() {
        let mut t = SymbolTable::new();
        let n = t.declare_multichar("+N").unwrap();
        let toks = t.tokenize("radio+N").unwrap();
        let texts: Vec<_> = toks.iter().map(|&id| t.text(id)).collect();
        assert_eq!(texts, ["r", "a", "d", "i", "o", "+N"]);
        assert_eq!(*toks.last().unwrap(), n);
    }

    #[test]
    fn tokenize_unescaped_trigger_and_array() {
        let mut t = SymbolTable::new();
        let vow = t.declare_multichar("%^1VOW").unwrap();
        let arr = t.declare_multichar("{ʹØ}").unwrap();
        let toks = t.tokenize("vẹ^1VOW{ʹØ}rdd").unwrap();
        assert_eq!(toks.len(), 7);
        assert_eq!(toks[2], vow);
        assert_eq!(toks[3], arr);
        let texts: Vec<_> = toks.iter().map(|&id| t.text(id)).collect();
        assert_eq!(texts, ["v", "ẹ", "%^1VOW", "{ʹØ}", "r", "d", "d"]);
        // The escaped spelling resolves to the same symbol.
        assert_eq!(t.tokenize("%^1VOW").unwrap(), vec![vow]);
    }

    #[test]
    fn tokenize_longest_match() {
        let mut t = SymbolTable::new();
        t.declare_multichar("ab").unwrap();
        t.intern("a").unwrap();
        let toks = t.tokenize("ab").unwrap();
        assert_eq!(toks.len(), 1);
        assert_eq!(t.text(toks[0]), "ab");
    }

    #[test]
    fn zero_is_epsilon_unless_escaped() {
        let mut t = SymbolTable::new();
        let toks = t.tokenize("a0%0").unwrap();
        assert_eq!(toks[1], SymbolId::EPSILON);
        assert_eq!(t.text(toks[2]), "0");
    }

    #[test]
    fn dangling_escape() {
        let mut t = SymbolTable::new();
        assert!(matches!(t.tokenize("ab%"), Err(SymbolError::DanglingEscape(_))));
    }

    #[test]
    fn resolve_round_trip_and_bounds() {
        let mut t = SymbolTable::new();
        let id = t.intern("+Pot").unwrap();
        assert_eq!(t.resolve(id).unwrap(), "+Pot");
        assert_eq!(t.resolve(SymbolId::EPSILON).unwrap(), "@0@");
        assert_eq!(t.resolve(SymbolId(999)), Err(SymbolError::UnknownId(999)));
    }

    #[test]
    fn pair_symbols() {
        let mut t = SymbolTable::new();
        let a = t.intern("a").unwrap();
        let b = t.intern("b").unwrap();
        let ab = t.pair_symbol(a, b).unwrap();
        assert_eq!(t.text(ab), "a:b");
        assert_eq!(t.pair_components(ab), Some((a, b)));
        let trig = t.declare_multichar("%^V2VV").unwrap();
        let tz = t.pair_symbol(trig, SymbolId::EPSILON).unwrap();
        assert_eq!(t.text(tz), "%^V2VV:0");
        let aa1 = t.pair_symbol(a, a).unwrap();
        let aa2 = t.pair_symbol(a, a).unwrap();
        assert_eq!(aa1, aa2);
    }

    #[test]
    fn nfc_equates_combining_forms() {
        let mut t = SymbolTable::new();
        let pre = t.intern("\u{1EB9}").unwrap();
        let comb = t.intern("e\u{0323}").unwrap();
        assert_eq!(pre, comb);
    }

    #[test]
    fn frozen_tokenize_rejects_unknown() {
        let mut t = SymbolTable::new();
        t.tokenize("abc").unwrap();
        assert!(t.tokenize_frozen("abc").is_ok());
        assert_eq!(
            t.tokenize_frozen("abz"),
            Err(SymbolError::UnknownSymbol("z".into()))
        );
    }

    #[test]
    fn tsv_round_trip_preserves_ids() {
        let mut t = SymbolTable::new();
        let n = t.declare_multichar("+N").unwrap();
        let a = t.intern("a").unwrap();
        let p = t.pair_symbol(a, SymbolId::EPSILON).unwrap();
        t.intern("x\ty").unwrap();
        let loaded = SymbolTable::from_tsv(&t.to_tsv()).unwrap();
        assert_eq!(loaded.to_tsv(), t.to_tsv());
        assert!(loaded.is_declared(n));
        assert_eq!(loaded.pair_components(p), Some((a, SymbolId::EPSILON)));
    }

    proptest! {
        #[test]
        fn resolve_inverts_intern(s in "\\PC{1,8}") {
            let mut t = SymbolTable::new();
            let norm = nfc(&s);
            prop_assume!(norm != EPSILON_TEXT);
            let id = t.intern(&s).unwrap();
            prop_assert_eq!(t.resolve(id).unwrap(), norm.as_str());
        }

        #[test]
        fn detokenize_reparses(s in "[abxy0%+N]{0,12}") {
            let mut t = SymbolTable::new();
            t.declare_multichar("+N").unwrap();
            t.declare_multichar("xy").unwrap();
            t.declare_multichar("%^X").unwrap();
            if let Ok(toks) = t.tokenize(&s) {
                let text = t.detokenize(&toks);
                prop_assert_eq!(t.tokenize(&text).unwrap(), toks);
            }
        }

        #[test]
        fn longest_match_never_splits(prefix in "[ax]{0,4}", suffix in "[ax]{0,4}") {
            let mut t = SymbolTable::new();
            let xy = t.declare_multichar("xy").unwrap();
            let x = t.intern("x").unwrap();
            let y = t.intern("y").unwrap();
            let toks = t.tokenize(&format!("{prefix}xy{suffix}")).unwrap();
            prop_assert!(toks.contains(&xy));
            prop_assert!(!toks.windows(2).any(|w| w == [x, y]));
        }
    }
}
