//! Unweighted finite-state transducers over [`SymbolId`] pairs.
//!
//! Every public operation returns a trimmed machine in canonical form: states
//! are numbered breadth-first from the start state (which is always 0), arcs
//! of each state are sorted by `(input, output, target)` and deduplicated.

mod algebra;
pub mod att;
mod compose;
mod paths;
mod rational;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::symtab::{SymbolId, SymbolTable, TableId};

pub use algebra::{
    complement, determinize, difference, intersect, intersect_all, is_deterministic, minimize,
    reversed_intersect,
};
pub use compose::compose;
pub use paths::{enumerate_paths, equivalent_acceptors, is_empty, PathSet};
pub use rational::{closure_plus, concat, concat_all, option, star, union, union_all};

pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub input: SymbolId,
    pub output: SymbolId,
    pub target: StateId,
}

impl Arc {
    pub fn new(input: SymbolId, output: SymbolId, target: StateId) -> Self {
        Arc {
            input,
            output,
            target,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FstError {
    #[error("operands use different symbol tables")]
    TableMismatch,
    #[error("operation requires an acceptor (input label == output label on every arc)")]
    NotAcceptor,
    #[error("operation requires at least one operand")]
    NoOperands,
    #[error("state {0} out of range")]
    BadState(StateId),
}

/// Which tape [`Transducer::project`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    table: TableId,
    start: StateId,
    finals: Vec<bool>,
    arcs: Vec<Vec<Arc>>,
}

impl Transducer {
    /// A machine with a single non-final start state. Use the builder methods
    /// and finish with [`trim`](Self::trim).
    pub fn new(table: TableId) -> Self {
        Transducer {
            table,
            start: 0,
            finals: vec![false],
            arcs: vec![Vec::new()],
        }
    }

    /// The empty relation.
    pub fn empty(table: TableId) -> Self {
        Self::new(table)
    }

    /// The relation {(ε, ε)}.
    pub fn epsilon(table: TableId) -> Self {
        let mut t = Self::new(table);
        t.finals[0] = true;
        t
    }

    /// Single path mapping `input` to `output`. The shorter side is padded
    /// with epsilon at the end.
    pub fn from_pair_strings(table: TableId, input: &[SymbolId], output: &[SymbolId]) -> Self {
        let mut t = Self::new(table);
        let len = input.len().max(output.len());
        let mut state = t.start;
        for i in 0..len {
            let next = t.add_state();
            let a = input.get(i).copied().unwrap_or(SymbolId::EPSILON);
            let b = output.get(i).copied().unwrap_or(SymbolId::EPSILON);
            t.add_arc(state, Arc::new(a, b, next));
            state = next;
        }
        t.set_final(state, true);
        t.trim()
    }

    /// Acceptor of the single string `symbols`.
    pub fn acceptor(table: TableId, symbols: &[SymbolId]) -> Self {
        Self::from_pair_strings(table, symbols, symbols)
    }

    /// Acceptor of the one-symbol strings drawn from `labels`.
    pub fn symbol_class<I>(table: TableId, labels: I) -> Self
    where
        I: IntoIterator<Item = SymbolId>,
    {
        let mut t = Self::new(table);
        let end = t.add_state();
        t.set_final(end, true);
        for label in labels {
            t.add_arc(0, Arc::new(label, label, end));
        }
        t.trim()
    }

    /// Σ* over the given alphabet.
    pub fn universal<I>(table: TableId, alphabet: I) -> Self
    where
        I: IntoIterator<Item = SymbolId>,
    {
        let mut t = Self::epsilon(table);
        for label in alphabet {
            if !label.is_epsilon() {
                t.add_arc(0, Arc::new(label, label, 0));
            }
        }
        t.trim()
    }

    pub fn table(&self) -> TableId {
        self.table
    }

    pub fn belongs_to(&self, table: &SymbolTable) -> bool {
        self.table == table.id()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(s, _)| s as StateId)
    }

    pub fn arcs(&self, state: StateId) -> &[Arc] {
        &self.arcs[state as usize]
    }

    /// All `(source, arc)` pairs in state order.
    pub fn all_arcs(&self) -> impl Iterator<Item = (StateId, &Arc)> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .flat_map(|(s, arcs)| arcs.iter().map(move |a| (s as StateId, a)))
    }

    pub fn add_state(&mut self) -> StateId {
        self.arcs.push(Vec::new());
        self.finals.push(false);
        (self.arcs.len() - 1) as StateId
    }

    pub fn set_start(&mut self, state: StateId) {
        self.start = state;
    }

    pub fn set_final(&mut self, state: StateId, is_final: bool) {
        self.finals[state as usize] = is_final;
    }

    pub fn add_arc(&mut self, source: StateId, arc: Arc) {
        self.arcs[source as usize].push(arc);
    }

    /// True when every arc carries the same label on both tapes.
    pub fn is_acceptor(&self) -> bool {
        self.all_arcs().all(|(_, a)| a.input == a.output)
    }

    pub(crate) fn require_acceptor(&self) -> Result<(), FstError> {
        if self.is_acceptor() {
            Ok(())
        } else {
            Err(FstError::NotAcceptor)
        }
    }

    pub(crate) fn same_table(&self, other: &Transducer) -> Result<(), FstError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(FstError::TableMismatch)
        }
    }

    /// Non-epsilon labels appearing on either tape.
    pub fn alphabet(&self) -> BTreeSet<SymbolId> {
        self.all_arcs()
            .flat_map(|(_, a)| [a.input, a.output])
            .filter(|l| !l.is_epsilon())
            .collect()
    }

    /// Non-epsilon labels appearing on one tape.
    pub fn side_alphabet(&self, side: Side) -> BTreeSet<SymbolId> {
        self.all_arcs()
            .map(|(_, a)| match side {
                Side::Input => a.input,
                Side::Output => a.output,
            })
            .filter(|l| !l.is_epsilon())
            .collect()
    }

    /// Checks the structural invariants: ids in range, and (for machines
    /// produced by this module) canonical trimmed form.
    pub fn validate(&self) -> Result<(), FstError> {
        let n = self.arcs.len() as StateId;
        if self.start >= n || self.finals.len() != self.arcs.len() {
            return Err(FstError::BadState(self.start));
        }
        for (_, a) in self.all_arcs() {
            if a.target >= n {
                return Err(FstError::BadState(a.target));
            }
        }
        Ok(())
    }

    /// True when the machine is already in trimmed canonical form.
    pub fn is_trimmed(&self) -> bool {
        self.validate().is_ok() && *self == self.trim()
    }

    /// Removes states that are unreachable from the start or cannot reach a
    /// final state, then renumbers into canonical form.
    pub fn trim(&self) -> Transducer {
        let n = self.arcs.len();
        let mut reach = vec![false; n];
        let mut queue = VecDeque::from([self.start]);
        reach[self.start as usize] = true;
        while let Some(s) = queue.pop_front() {
            for a in &self.arcs[s as usize] {
                if !reach[a.target as usize] {
                    reach[a.target as usize] = true;
                    queue.push_back(a.target);
                }
            }
        }
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (s, a) in self.all_arcs() {
            preds[a.target as usize].push(s);
        }
        let mut coreach = vec![false; n];
        for s in 0..n {
            if self.finals[s] {
                coreach[s] = true;
                queue.push_back(s as StateId);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &p in &preds[s as usize] {
                if !coreach[p as usize] {
                    coreach[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|s| reach[s] && coreach[s]).collect();
        if !keep[self.start as usize] {
            return Transducer::empty(self.table);
        }
        let sorted = |s: usize| -> Vec<Arc> {
            let mut arcs: Vec<Arc> = self.arcs[s]
                .iter()
                .filter(|a| keep[a.target as usize])
                .copied()
                .collect();
            arcs.sort();
            arcs.dedup();
            arcs
        };
        // First pass: canonical numbering by BFS over label-sorted arcs.
        let mut order = Vec::new();
        let mut new_id = vec![u32::MAX; n];
        new_id[self.start as usize] = 0;
        order.push(self.start as usize);
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            let mut arcs = sorted(s);
            arcs.sort_by_key(|a| (a.input, a.output));
            for a in arcs {
                let t = a.target as usize;
                if new_id[t] == u32::MAX {
                    new_id[t] = order.len() as u32;
                    order.push(t);
                }
            }
        }
        let mut out = Transducer {
            table: self.table,
            start: 0,
            finals: order.iter().map(|&s| self.finals[s]).collect(),
            arcs: Vec::with_capacity(order.len()),
        };
        for &s in &order {
            let mut arcs: Vec<Arc> = sorted(s)
                .into_iter()
                .map(|a| Arc::new(a.input, a.output, new_id[a.target as usize]))
                .collect();
            arcs.sort();
            arcs.dedup();
            out.arcs.push(arcs);
        }
        out
    }

    /// Swaps input and output on every arc.
    pub fn invert(&self) -> Transducer {
        let mut t = self.clone();
        for arcs in &mut t.arcs {
            for a in arcs.iter_mut() {
                std::mem::swap(&mut a.input, &mut a.output);
            }
        }
        t.trim()
    }

    /// Reverses every path. A fresh start state fans out to the old finals.
    pub fn reverse(&self) -> Transducer {
        let n = self.arcs.len();
        let mut t = Transducer {
            table: self.table,
            start: n as StateId,
            finals: vec![false; n + 1],
            arcs: vec![Vec::new(); n + 1],
        };
        t.finals[self.start as usize] = true;
        for (s, a) in self.all_arcs() {
            t.arcs[a.target as usize].push(Arc::new(a.input, a.output, s));
        }
        for f in self.finals() {
            t.arcs[n].push(Arc::new(SymbolId::EPSILON, SymbolId::EPSILON, f));
        }
        t.trim()
    }

    /// Acceptor of one tape of the relation.
    pub fn project(&self, side: Side) -> Transducer {
        let mut t = self.clone();
        for arcs in &mut t.arcs {
            for a in arcs.iter_mut() {
                match side {
                    Side::Input => a.output = a.input,
                    Side::Output => a.input = a.output,
                }
            }
        }
        t.trim()
    }

    /// Applies `f` to every arc label pair.
    pub fn map_labels<F>(&self, mut f: F) -> Transducer
    where
        F: FnMut(SymbolId, SymbolId) -> (SymbolId, SymbolId),
    {
        let mut t = self.clone();
        for arcs in &mut t.arcs {
            for a in arcs.iter_mut() {
                let (i, o) = f(a.input, a.output);
                a.input = i;
                a.output = o;
            }
        }
        t.trim()
    }

    /// Replaces each output label by a (possibly empty) string of labels.
    pub fn expand_outputs<F>(&self, mut expand: F) -> Transducer
    where
        F: FnMut(SymbolId) -> Option<Vec<SymbolId>>,
    {
        let mut t = Transducer {
            table: self.table,
            start: self.start,
            finals: self.finals.clone(),
            arcs: vec![Vec::new(); self.arcs.len()],
        };
        for (s, a) in self.all_arcs() {
            match expand(a.output) {
                Some(seq) if seq.len() != 1 => {
                    let mut from = s;
                    let mut input = a.input;
                    if seq.is_empty() {
                        t.add_arc(from, Arc::new(input, SymbolId::EPSILON, a.target));
                        continue;
                    }
                    for (k, &label) in seq.iter().enumerate() {
                        let to = if k + 1 == seq.len() { a.target } else { t.add_state() };
                        t.add_arc(from, Arc::new(input, label, to));
                        input = SymbolId::EPSILON;
                        from = to;
                    }
                }
                Some(seq) => t.add_arc(s, Arc::new(a.input, seq[0], a.target)),
                None => t.add_arc(s, *a),
            }
        }
        t.trim()
    }
}
