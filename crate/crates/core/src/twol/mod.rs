//! Two-level rules: parsing, the reference semantics, and compilation to
//! acceptors over pair symbols.

mod compile;
mod oracle;
mod parse;
mod regex;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::fst::FstError;
use crate::symtab::{SymbolError, SymbolId, SymbolTable};

pub use compile::{combine_rules, compile_rule, compile_rules, pairs_to_transducer, Combined, Strategy};
pub use oracle::check_rule;
pub use parse::parse_twol;
pub use regex::Regex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwolErrorKind {
    UnknownSet(String),
    InfeasiblePair(String),
    UnknownSymbol(String),
    EmptyContexts(String),
    DuplicateRule(String),
    Regex(String),
    Syntax(String),
    NotAPair(SymbolId),
    Symbol(SymbolError),
    Fst(FstError),
}

impl fmt::Display for TwolErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TwolErrorKind::*;
        match self {
            UnknownSet(n) => write!(f, "unknown set {n:?}"),
            InfeasiblePair(p) => write!(f, "pair {p} is not in the alphabet"),
            UnknownSymbol(s) => write!(f, "symbol {s:?} occurs in no feasible pair"),
            EmptyContexts(r) => write!(f, "rule {r:?} has no contexts"),
            DuplicateRule(r) => write!(f, "duplicate rule name {r:?}"),
            Regex(m) | Syntax(m) => f.write_str(m),
            NotAPair(id) => write!(f, "symbol {id} is not a pair symbol"),
            Symbol(e) => write!(f, "{e}"),
            Fst(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{kind}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct TwolError {
    pub line: usize,
    pub kind: TwolErrorKind,
}

impl TwolError {
    pub(crate) fn new(line: usize, kind: TwolErrorKind) -> Self {
        TwolError { line, kind }
    }
}

impl From<FstError> for TwolError {
    fn from(e: FstError) -> Self {
        TwolError::new(0, TwolErrorKind::Fst(e))
    }
}

/// The declared lexical:surface pairs, each with its pair-symbol id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeasiblePairs {
    pairs: IndexMap<SymbolId, (SymbolId, SymbolId)>,
}

impl FeasiblePairs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, table: &mut SymbolTable, upper: SymbolId, lower: SymbolId) -> Result<SymbolId, SymbolError> {
        let id = table.pair_symbol(upper, lower)?;
        self.pairs.insert(id, (upper, lower));
        Ok(id)
    }

    pub fn find(&self, upper: SymbolId, lower: SymbolId) -> Option<SymbolId> {
        self.pairs
            .iter()
            .find(|(_, &p)| p == (upper, lower))
            .map(|(&id, _)| id)
    }

    pub fn contains(&self, id: SymbolId) -> bool {
        self.pairs.contains_key(&id)
    }

    pub fn components(&self, id: SymbolId) -> Option<(SymbolId, SymbolId)> {
        self.pairs.get(&id).copied()
    }

    /// All pair-symbol ids, the alphabet Π of rule acceptors.
    pub fn ids(&self) -> BTreeSet<SymbolId> {
        self.pairs.keys().copied().collect()
    }

    pub fn matching<F>(&self, mut keep: F) -> BTreeSet<SymbolId>
    where
        F: FnMut(SymbolId, SymbolId) -> bool,
    {
        self.pairs
            .iter()
            .filter(|(_, &(u, l))| keep(u, l))
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn with_lexical(&self, a: SymbolId) -> BTreeSet<SymbolId> {
        self.matching(|u, _| u == a)
    }

    pub fn lexical_symbols(&self) -> BTreeSet<SymbolId> {
        self.pairs.values().map(|&(u, _)| u).collect()
    }

    pub fn surface_symbols(&self) -> BTreeSet<SymbolId> {
        self.pairs.values().map(|&(_, l)| l).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, SymbolId, SymbolId)> + '_ {
        self.pairs.iter().map(|(&id, &(u, l))| (id, u, l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    /// `=>`
    Restrict,
    /// `<=`
    Coerce,
    /// `<=>`
    Both,
    /// `/<=`
    Exclude,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Restrict => "=>",
            Op::Coerce => "<=",
            Op::Both => "<=>",
            Op::Exclude => "/<=",
        })
    }
}

/// `left _ right`, optionally anchored at the word edges with `.#.`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub left: Regex,
    pub right: Regex,
    pub left_anchored: bool,
    pub right_anchored: bool,
}

impl Context {
    pub fn new(left: Regex, right: Regex) -> Self {
        Context {
            left,
            right,
            left_anchored: false,
            right_anchored: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwolRule {
    pub name: String,
    /// Lexical and surface symbol of the center pair.
    pub center: (SymbolId, SymbolId),
    pub op: Op,
    pub contexts: Vec<Context>,
    pub line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub alphabet: FeasiblePairs,
    pub sets: IndexMap<String, Vec<SymbolId>>,
    pub rules: Vec<TwolRule>,
}

impl RuleSet {
    pub fn rule(&self, name: &str) -> Option<&TwolRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// A copy without the named rule.
    pub fn without(&self, name: &str) -> RuleSet {
        RuleSet {
            alphabet: self.alphabet.clone(),
            sets: self.sets.clone(),
            rules: self.rules.iter().filter(|r| r.name != name).cloned().collect(),
        }
    }
}
