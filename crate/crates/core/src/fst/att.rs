//! AT&T tab-separated text format.
//!
//! Arc lines are `src\tdst\tin\tout`, final states are lines holding a single
//! state number. Epsilon is written `@0@`, space and tab as `@_SPACE_@` and
//! `@_TAB_@`. Optional weight columns are accepted and ignored on input.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Arc, StateId, Transducer};
use crate::symtab::{SymbolError, SymbolId, SymbolTable, EPSILON_TEXT};

const SPACE: &str = "@_SPACE_@";
const TAB: &str = "@_TAB_@";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AttError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Symbol { line: usize, source: SymbolError },
}

fn encode(table: &SymbolTable, id: SymbolId) -> String {
    if id.is_epsilon() {
        return EPSILON_TEXT.to_string();
    }
    match table.text(id) {
        " " => SPACE.to_string(),
        "\t" => TAB.to_string(),
        text => text.to_string(),
    }
}

fn decode(table: &mut SymbolTable, text: &str) -> Result<SymbolId, SymbolError> {
    match text {
        EPSILON_TEXT => Ok(SymbolId::EPSILON),
        SPACE => table.intern(" "),
        TAB => table.intern("\t"),
        _ => table.intern(text),
    }
}

/// Serializes `t` with a numbering derived from symbol texts, so the same
/// machine always yields the same bytes. An empty machine yields "".
pub fn write_att(t: &Transducer, table: &SymbolTable) -> String {
    let t = t.trim();
    if !(0..t.num_states() as StateId).any(|s| t.is_final(s)) {
        return String::new();
    }
    let labelled = |s: StateId| -> Vec<(String, String, &Arc)> {
        let mut v: Vec<_> = t
            .arcs(s)
            .iter()
            .map(|a| (encode(table, a.input), encode(table, a.output), a))
            .collect();
        v.sort_by(|x, y| (&x.0, &x.1, x.2.target).cmp(&(&y.0, &y.1, y.2.target)));
        v
    };
    let mut id: HashMap<StateId, usize> = HashMap::from([(t.start(), 0)]);
    let mut order = vec![t.start()];
    let mut i = 0;
    while i < order.len() {
        for (_, _, a) in labelled(order[i]) {
            if !id.contains_key(&a.target) {
                id.insert(a.target, order.len());
                order.push(a.target);
            }
        }
        i += 1;
    }
    let mut out = String::new();
    for (n, &s) in order.iter().enumerate() {
        let mut lines: Vec<(String, String, usize)> = labelled(s)
            .into_iter()
            .map(|(i, o, a)| (i, o, id[&a.target]))
            .collect();
        lines.sort();
        for (i, o, dst) in lines {
            let _ = writeln!(out, "{n}\t{dst}\t{i}\t{o}");
        }
        if t.is_final(s) {
            let _ = writeln!(out, "{n}");
        }
    }
    out
}

/// Parses AT&T text, interning unseen symbols into `table`. State numbers are
/// kept as written; the start state is the source of the first arc line (or
/// the first final line if there are no arcs).
pub fn read_att(text: &str, table: &mut SymbolTable) -> Result<Transducer, AttError> {
    let mut t = Transducer::new(table.id());
    let mut start: Option<StateId> = None;
    let malformed = |line: usize, message: String| AttError::Malformed { line, message };
    let ensure = |t: &mut Transducer, s: StateId| {
        while (t.num_states() as StateId) <= s {
            t.add_state();
        }
    };
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        let state = |f: &str| -> Result<StateId, AttError> {
            f.trim()
                .parse::<StateId>()
                .map_err(|_| malformed(line, format!("bad state number {f:?}")))
        };
        match fields.len() {
            1 | 2 => {
                let s = state(fields[0])?;
                if fields.len() == 2 {
                    fields[1]
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| malformed(line, format!("bad weight {:?}", fields[1])))?;
                }
                ensure(&mut t, s);
                t.set_final(s, true);
                start.get_or_insert(s);
            }
            4 | 5 => {
                let src = state(fields[0])?;
                let dst = state(fields[1])?;
                let symbol = |table: &mut SymbolTable, f: &str| {
                    decode(table, f).map_err(|source| AttError::Symbol { line, source })
                };
                let input = symbol(table, fields[2])?;
                let output = symbol(table, fields[3])?;
                ensure(&mut t, src.max(dst));
                t.add_arc(src, Arc::new(input, output, dst));
                start.get_or_insert(src);
            }
            k => return Err(malformed(line, format!("expected 1, 2, 4 or 5 fields, found {k}"))),
        }
    }
    t.set_start(start.unwrap_or(0));
    Ok(t)
}
