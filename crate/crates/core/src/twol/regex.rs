use std::collections::BTreeSet;

use crate::fst::{closure_plus, concat_all, option, star, union_all, FstError, Transducer};
use crate::symtab::{SymbolId, TableId};

/// Regular expression over pair symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    /// Any one pair from the set.
    Class(BTreeSet<SymbolId>),
    /// Concatenation; empty means the empty string.
    Seq(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Opt(Box<Regex>),
}

impl Regex {
    pub fn empty() -> Self {
        Regex::Seq(Vec::new())
    }

    pub fn is_empty_string(&self) -> bool {
        matches!(self, Regex::Seq(v) if v.is_empty())
    }

    /// The pair set of a single-pair term, if it is one.
    pub fn as_class(&self) -> Option<BTreeSet<SymbolId>> {
        match self {
            Regex::Class(c) => Some(c.clone()),
            Regex::Alt(v) => {
                let mut out = BTreeSet::new();
                for r in v {
                    out.extend(r.as_class()?);
                }
                Some(out)
            }
            Regex::Seq(v) if v.len() == 1 => v[0].as_class(),
            _ => None,
        }
    }

    /// End positions `j` such that `s[start..j]` matches.
    pub fn ends(&self, s: &[SymbolId], start: usize) -> BTreeSet<usize> {
        self.ends_from(s, &BTreeSet::from([start]))
    }

    fn ends_from(&self, s: &[SymbolId], starts: &BTreeSet<usize>) -> BTreeSet<usize> {
        match self {
            Regex::Class(c) => starts
                .iter()
                .filter(|&&i| i < s.len() && c.contains(&s[i]))
                .map(|i| i + 1)
                .collect(),
            Regex::Seq(v) => v.iter().fold(starts.clone(), |acc, r| r.ends_from(s, &acc)),
            Regex::Alt(v) => v.iter().flat_map(|r| r.ends_from(s, starts)).collect(),
            Regex::Opt(r) => {
                let mut out = starts.clone();
                out.extend(r.ends_from(s, starts));
                out
            }
            Regex::Star(r) => {
                let mut out = starts.clone();
                let mut frontier = starts.clone();
                while !frontier.is_empty() {
                    let next: BTreeSet<usize> = r
                        .ends_from(s, &frontier)
                        .into_iter()
                        .filter(|e| !out.contains(e))
                        .collect();
                    out.extend(next.iter().copied());
                    frontier = next;
                }
                out
            }
            Regex::Plus(r) => {
                let once = r.ends_from(s, starts);
                Regex::Star(r.clone()).ends_from(s, &once)
            }
        }
    }

    /// Acceptor of the regex language.
    pub fn compile(&self, table: TableId) -> Result<Transducer, FstError> {
        Ok(match self {
            Regex::Class(c) => Transducer::symbol_class(table, c.iter().copied()),
            Regex::Seq(v) => {
                let parts = v.iter().map(|r| r.compile(table)).collect::<Result<Vec<_>, _>>()?;
                if parts.is_empty() {
                    Transducer::epsilon(table)
                } else {
                    concat_all(&parts)?
                }
            }
            Regex::Alt(v) => {
                let parts = v.iter().map(|r| r.compile(table)).collect::<Result<Vec<_>, _>>()?;
                if parts.is_empty() {
                    Transducer::empty(table)
                } else {
                    union_all(&parts)?
                }
            }
            Regex::Star(r) => star(&r.compile(table)?),
            Regex::Plus(r) => closure_plus(&r.compile(table)?),
            Regex::Opt(r) => option(&r.compile(table)?),
        })
    }
}
