use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{difference, FstError, StateId, Transducer};
use crate::symtab::SymbolId;

pub type Word = Vec<SymbolId>;

/// Bounded enumeration result.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSet {
    /// Distinct `(input, output)` pairs in shortlex order of input, then output.
    pub pairs: Vec<(Word, Word)>,
    /// Set when some path was cut off by a bound, i.e. the listing may be
    /// incomplete.
    pub truncated: bool,
}

impl PathSet {
    pub fn outputs(&self) -> Vec<&Word> {
        self.pairs.iter().map(|(_, o)| o).collect()
    }
}

fn shortlex(a: &(Word, Word), b: &(Word, Word)) -> std::cmp::Ordering {
    (a.0.len(), &a.0, a.1.len(), &a.1).cmp(&(b.0.len(), &b.0, b.1.len(), &b.1))
}

/// Lists accepted pairs with at most `max_input_len` non-epsilon input
/// symbols, stopping after `max_count` distinct pairs.
///
/// Runs of consecutive epsilon-input arcs longer than the number of states
/// are cut off, so epsilon-input cycles terminate.
pub fn enumerate_paths(t: &Transducer, max_input_len: usize, max_count: usize) -> PathSet {
    let t = t.trim();
    let eps_cap = t.num_states();
    let mut found: BTreeSet<(Word, Word)> = BTreeSet::new();
    let mut truncated = false;
    let mut seen: HashSet<(StateId, Word, Word, usize)> = HashSet::new();
    let mut queue: VecDeque<(StateId, Word, Word, usize)> = VecDeque::new();
    let init = (t.start(), Vec::new(), Vec::new(), 0);
    seen.insert(init.clone());
    queue.push_back(init);
    'search: while let Some((s, input, output, run)) = queue.pop_front() {
        if t.is_final(s) && !found.contains(&(input.clone(), output.clone())) {
            if found.len() == max_count {
                truncated = true;
                break 'search;
            }
            found.insert((input.clone(), output.clone()));
        }
        for a in t.arcs(s) {
            let mut next_in = input.clone();
            let next_run = if a.input.is_epsilon() {
                run + 1
            } else {
                next_in.push(a.input);
                0
            };
            if next_in.len() > max_input_len || next_run > eps_cap {
                truncated = true;
                continue;
            }
            let mut next_out = output.clone();
            if !a.output.is_epsilon() {
                next_out.push(a.output);
            }
            let key = (a.target, next_in, next_out, next_run);
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    let mut pairs: Vec<(Word, Word)> = found.into_iter().collect();
    pairs.sort_by(shortlex);
    PathSet { pairs, truncated }
}

/// True when no accepting path exists.
pub fn is_empty(t: &Transducer) -> bool {
    let t = t.trim();
    !(0..t.num_states() as StateId).any(|s| t.is_final(s))
}

/// Equality of two machines. Exact (via difference) when both are acceptors,
/// otherwise bounded: the relations must agree on inputs up to `max_len`.
pub fn equivalent_acceptors(a: &Transducer, b: &Transducer, max_len: usize) -> Result<bool, FstError> {
    a.same_table(b)?;
    if a.is_acceptor() && b.is_acceptor() {
        return Ok(is_empty(&difference(a, b)?) && is_empty(&difference(b, a)?));
    }
    let pa = enumerate_paths(a, max_len, usize::MAX);
    let pb = enumerate_paths(b, max_len, usize::MAX);
    Ok(pa.pairs == pb.pairs)
}
