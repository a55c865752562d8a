//! Rule-file syntax.
//!
//! ```text
//! file     = "Alphabet" { pair } ";" [ "Sets" { name "=" { symbol } ";" } ] "Rules" { rule } ;
//! rule     = '"' name '"' pair op context ";" { context ";" } ;
//! op       = "=>" | "<=" | "<=>" | "/<=" ;
//! context  = [ ".#." ] regex "_" regex [ ".#." ] ;
//! regex    = seq { "|" seq } ;
//! seq      = { term [ "*" | "+" ] } ;
//! term     = "\" term | "[" regex "]" | "(" regex ")" | atom ;
//! atom     = side [ ":" [ side ] ] | ":" side ;
//! side     = symbol | set-name | "?" ;
//! ```
//!
//! An atom is written without internal spaces: `l: g:` is two atoms.
//! A bare `a` means `a:?`; `\X` is every feasible pair not matched by `X`.

use std::collections::BTreeSet;

use super::{Context, Op, Regex, RuleSet, TwolError, TwolErrorKind, TwolRule};
use crate::symtab::{SymbolId, SymbolTable};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom {
        upper: Option<String>,
        lower: Option<String>,
        colon: bool,
    },
    Quoted(String),
    Op(Op),
    Eq,
    Semi,
    Under,
    Boundary,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Pipe,
    Star,
    Plus,
    Not,
}

fn special(c: char) -> bool {
    c.is_whitespace()
        || matches!(c, '!' | '"' | ';' | ':' | '[' | ']' | '(' | ')' | '|' | '*' | '+' | '\\' | '_' | '=' | '?')
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Lexer {
    fn starts(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.chars.get(self.pos + k) == Some(&c))
    }

    fn side(&mut self) -> Result<Option<String>, TwolError> {
        if self.chars.get(self.pos) == Some(&'?') {
            self.pos += 1;
            return Ok(Some("?".into()));
        }
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            if c == '%' {
                let Some(&n) = self.chars.get(self.pos + 1) else {
                    return Err(TwolError::new(self.line, TwolErrorKind::Syntax("dangling '%'".into())));
                };
                s.push('%');
                s.push(n);
                self.pos += 2;
                continue;
            }
            if special(c) || self.starts("<=") || self.starts("/<=") {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        Ok((!s.is_empty()).then_some(s))
    }

    fn run(mut self) -> Result<Vec<(Tok, usize)>, TwolError> {
        let mut out = Vec::new();
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            let line = self.line;
            let syntax = |m: String| TwolError::new(line, TwolErrorKind::Syntax(m));
            if c == '\n' {
                self.line += 1;
                self.pos += 1;
                continue;
            }
            if c.is_whitespace() {
                self.pos += 1;
                continue;
            }
            if c == '!' {
                while self.pos < self.chars.len() && self.chars[self.pos] != '\n' {
                    self.pos += 1;
                }
                continue;
            }
            let ops = [
                ("<=>", Tok::Op(Op::Both)),
                ("/<=", Tok::Op(Op::Exclude)),
                ("<=", Tok::Op(Op::Coerce)),
                ("=>", Tok::Op(Op::Restrict)),
                (".#.", Tok::Boundary),
            ];
            if let Some((s, t)) = ops.iter().find(|(s, _)| self.starts(s)) {
                self.pos += s.chars().count();
                out.push((t.clone(), line));
                continue;
            }
            let simple = match c {
                '=' => Some(Tok::Eq),
                ';' => Some(Tok::Semi),
                '_' => Some(Tok::Under),
                '[' => Some(Tok::LBrack),
                ']' => Some(Tok::RBrack),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '|' => Some(Tok::Pipe),
                '*' => Some(Tok::Star),
                '+' => Some(Tok::Plus),
                '\\' => Some(Tok::Not),
                _ => None,
            };
            if let Some(t) = simple {
                self.pos += 1;
                out.push((t, line));
                continue;
            }
            if c == '"' {
                self.pos += 1;
                let mut name = String::new();
                loop {
                    match self.chars.get(self.pos) {
                        Some('"') => break,
                        Some('\n') | None => return Err(syntax("unterminated rule name".into())),
                        Some(&n) => name.push(n),
                    }
                    self.pos += 1;
                }
                self.pos += 1;
                out.push((Tok::Quoted(name), line));
                continue;
            }
            let upper = self.side()?;
            let colon = self.chars.get(self.pos) == Some(&':');
            let lower = if colon {
                self.pos += 1;
                self.side()?
            } else {
                None
            };
            if upper.is_none() && lower.is_none() {
                return Err(syntax(format!("unexpected character {c:?}")));
            }
            out.push((Tok::Atom { upper, lower, colon }, line));
        }
        Ok(out)
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, usize)>, TwolError> {
    Lexer {
        chars: source.chars().collect(),
        pos: 0,
        line: 1,
    }
    .run()
}

struct Parser<'t> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    table: &'t mut SymbolTable,
    rs: RuleSet,
}

enum Side {
    Any,
    Symbol(SymbolId),
    Set(BTreeSet<SymbolId>),
}

impl Side {
    fn admits(&self, id: SymbolId) -> bool {
        match self {
            Side::Any => true,
            Side::Symbol(s) => *s == id,
            Side::Set(set) => set.contains(&id),
        }
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(0, |t| t.1)
    }

    fn err(&self, kind: TwolErrorKind) -> TwolError {
        TwolError::new(self.line(), kind)
    }

    fn syntax(&self, msg: &str) -> TwolError {
        self.err(TwolErrorKind::Syntax(msg.to_string()))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn keyword(&mut self, word: &str) -> bool {
        if let Some(Tok::Atom { upper: Some(u), lower: None, colon: false }) = self.peek() {
            if u == word {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn symbol(&mut self, text: &str) -> Result<SymbolId, TwolError> {
        self.table
            .resolve_token(text)
            .map_err(|e| self.err(TwolErrorKind::Symbol(e)))
    }

    fn parse(mut self) -> Result<RuleSet, TwolError> {
        if !self.keyword("Alphabet") {
            return Err(self.syntax("expected Alphabet"));
        }
        loop {
            match self.next() {
                Some(Tok::Semi) => break,
                Some(Tok::Atom { upper: Some(u), lower, colon }) => {
                    if u == "?" || lower.as_deref() == Some("?") || (colon && lower.is_none()) {
                        self.pos -= 1;
                        return Err(self.syntax("alphabet pairs must be concrete"));
                    }
                    let a = self.symbol(&u)?;
                    let b = match lower {
                        Some(l) => self.symbol(&l)?,
                        None => a,
                    };
                    let table = &mut *self.table;
                    self.rs
                        .alphabet
                        .insert(table, a, b)
                        .map_err(|e| TwolError::new(0, TwolErrorKind::Symbol(e)))?;
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.syntax("expected a pair or ';' in Alphabet"));
                }
            }
        }
        if self.rs.alphabet.is_empty() {
            return Err(self.syntax("empty alphabet"));
        }
        if self.keyword("Sets") {
            while !self.keyword("Rules") {
                let Some(Tok::Atom { upper: Some(name), lower: None, colon: false }) = self.next() else {
                    self.pos -= 1;
                    return Err(self.syntax("expected a set definition or Rules"));
                };
                if self.next() != Some(Tok::Eq) {
                    self.pos -= 1;
                    return Err(self.syntax("expected '=' after set name"));
                }
                let mut members = Vec::new();
                loop {
                    match self.next() {
                        Some(Tok::Semi) => break,
                        Some(Tok::Atom { upper: Some(m), lower: None, colon: false }) => {
                            if let Some(set) = self.rs.sets.get(&m) {
                                members.extend(set.iter().copied());
                            } else {
                                members.push(self.symbol(&m)?);
                            }
                        }
                        _ => {
                            self.pos -= 1;
                            return Err(self.syntax("expected a symbol or ';' in set"));
                        }
                    }
                }
                self.rs.sets.insert(name, members);
            }
        } else if !self.keyword("Rules") {
            return Err(self.syntax("expected Sets or Rules"));
        }
        while self.peek().is_some() {
            self.rule()?;
        }
        Ok(self.rs)
    }

    fn rule(&mut self) -> Result<(), TwolError> {
        let line = self.line();
        let Some(Tok::Quoted(name)) = self.next() else {
            self.pos -= 1;
            return Err(self.syntax("expected a quoted rule name"));
        };
        if self.rs.rule(&name).is_some() {
            return Err(TwolError::new(line, TwolErrorKind::DuplicateRule(name)));
        }
        let center = match self.next() {
            Some(Tok::Atom { upper: Some(u), lower: Some(l), .. }) if u != "?" && l != "?" => {
                let a = self.lookup(&u)?;
                let b = self.lookup(&l)?;
                if self.rs.alphabet.find(a, b).is_none() {
                    return Err(TwolError::new(line, TwolErrorKind::InfeasiblePair(format!("{u}:{l}"))));
                }
                (a, b)
            }
            _ => {
                self.pos -= 1;
                return Err(self.syntax("rule center must be a concrete pair a:b"));
            }
        };
        let op = match self.next() {
            Some(Tok::Op(op)) => op,
            _ => {
                self.pos -= 1;
                return Err(self.syntax("expected =>, <=, <=> or /<="));
            }
        };
        let mut contexts = Vec::new();
        while !matches!(self.peek(), None | Some(Tok::Quoted(_))) {
            contexts.push(self.context()?);
        }
        if contexts.is_empty() {
            return Err(TwolError::new(line, TwolErrorKind::EmptyContexts(name)));
        }
        self.rs.rules.push(TwolRule {
            name,
            center,
            op,
            contexts,
            line,
        });
        Ok(())
    }

    fn context(&mut self) -> Result<Context, TwolError> {
        let left_anchored = self.peek() == Some(&Tok::Boundary);
        if left_anchored {
            self.pos += 1;
        }
        let left = self.alt()?;
        match self.next() {
            Some(Tok::Under) => {}
            Some(Tok::Boundary) => {
                self.pos -= 1;
                return Err(self.err(TwolErrorKind::Regex(".#. is only allowed at the edges of a context".into())));
            }
            _ => {
                self.pos -= 1;
                return Err(self.syntax("expected '_' in context"));
            }
        }
        let right = self.alt()?;
        let right_anchored = self.peek() == Some(&Tok::Boundary);
        if right_anchored {
            self.pos += 1;
        }
        match self.next() {
            Some(Tok::Semi) => Ok(Context {
                left,
                right,
                left_anchored,
                right_anchored,
            }),
            Some(Tok::Boundary) => {
                self.pos -= 1;
                Err(self.err(TwolErrorKind::Regex(".#. is only allowed at the edges of a context".into())))
            }
            _ => {
                self.pos -= 1;
                Err(self.syntax("expected ';' after context"))
            }
        }
    }

    fn alt(&mut self) -> Result<Regex, TwolError> {
        let mut branches = vec![self.seq()?];
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            branches.push(self.seq()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Regex::Alt(branches)
        })
    }

    fn seq(&mut self) -> Result<Regex, TwolError> {
        let mut items = Vec::new();
        while matches!(
            self.peek(),
            Some(Tok::Atom { .. } | Tok::LBrack | Tok::LParen | Tok::Not)
        ) {
            let mut term = self.term()?;
            loop {
                match self.peek() {
                    Some(Tok::Star) => term = Regex::Star(Box::new(term)),
                    Some(Tok::Plus) => term = Regex::Plus(Box::new(term)),
                    _ => break,
                }
                self.pos += 1;
            }
            items.push(term);
        }
        if matches!(self.peek(), Some(Tok::Star | Tok::Plus)) {
            return Err(self.err(TwolErrorKind::Regex("'*' or '+' without an operand".into())));
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Regex::Seq(items) })
    }

    fn term(&mut self) -> Result<Regex, TwolError> {
        match self.next() {
            Some(Tok::Not) => {
                let inner = self.term()?;
                let Some(class) = inner.as_class() else {
                    return Err(self.err(TwolErrorKind::Regex("'\\' applies only to single-pair terms".into())));
                };
                Ok(Regex::Class(self.rs.alphabet.ids().difference(&class).copied().collect()))
            }
            Some(Tok::LBrack) => {
                let r = self.alt()?;
                if self.next() != Some(Tok::RBrack) {
                    self.pos -= 1;
                    return Err(self.err(TwolErrorKind::Regex("missing ']'".into())));
                }
                Ok(r)
            }
            Some(Tok::LParen) => {
                let r = self.alt()?;
                if self.next() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.err(TwolErrorKind::Regex("missing ')'".into())));
                }
                Ok(Regex::Opt(Box::new(r)))
            }
            Some(Tok::Atom { upper, lower, .. }) => {
                let u = self.side(upper.as_deref(), true)?;
                let l = self.side(lower.as_deref(), false)?;
                let class = self.rs.alphabet.matching(|a, b| u.admits(a) && l.admits(b));
                if class.is_empty() {
                    let text = format!("{}:{}", upper.as_deref().unwrap_or("?"), lower.as_deref().unwrap_or("?"));
                    return Err(self.err(TwolErrorKind::InfeasiblePair(text)));
                }
                Ok(Regex::Class(class))
            }
            _ => {
                self.pos -= 1;
                Err(self.err(TwolErrorKind::Regex("expected a pair, '[', '(' or '\\'".into())))
            }
        }
    }

    /// Resolves a symbol that must occur in the alphabet.
    fn lookup(&mut self, text: &str) -> Result<SymbolId, TwolError> {
        let found = self
            .table
            .lookup_token(text)
            .map_err(|e| self.err(TwolErrorKind::Symbol(e)))?;
        match found {
            Some(id) if self.rs.alphabet.matching(|a, b| a == id || b == id).is_empty() => {
                Err(self.err(TwolErrorKind::UnknownSymbol(text.into())))
            }
            Some(id) => Ok(id),
            None => Err(self.err(TwolErrorKind::UnknownSymbol(text.into()))),
        }
    }

    fn side(&mut self, text: Option<&str>, upper: bool) -> Result<Side, TwolError> {
        let Some(text) = text else { return Ok(Side::Any) };
        if text == "?" {
            return Ok(Side::Any);
        }
        if let Some(set) = self.rs.sets.get(text) {
            return Ok(Side::Set(set.iter().copied().collect()));
        }
        let known = self.table.lookup_token(text).ok().flatten().filter(|&id| {
            let side = if upper {
                self.rs.alphabet.lexical_symbols()
            } else {
                self.rs.alphabet.surface_symbols()
            };
            side.contains(&id)
        });
        match known {
            Some(id) => Ok(Side::Symbol(id)),
            None if looks_like_set_name(text) => Err(self.err(TwolErrorKind::UnknownSet(text.into()))),
            None => Err(self.err(TwolErrorKind::UnknownSymbol(text.into()))),
        }
    }
}

fn looks_like_set_name(text: &str) -> bool {
    text.chars().count() > 1 && text.chars().next().is_some_and(|c| c.is_uppercase())
}

/// Parses a rule file, interning alphabet symbols into `table`.
pub fn parse_twol(source: &str, table: &mut SymbolTable) -> Result<RuleSet, TwolError> {
    let toks = lex(source)?;
    Parser {
        toks,
        pos: 0,
        table,
        rs: RuleSet::default(),
    }
    .parse()
}
