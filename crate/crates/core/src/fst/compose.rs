//! Composition with a three-state epsilon filter.
//!
//! Filter state 0: no pending epsilon move. 1: the left machine has been
//! moving alone on epsilon output. 2: the right machine has been moving alone
//! on epsilon input. A left-alone move is forbidden in state 2 and a
//! right-alone move in state 1, so each epsilon interleaving is realized by
//! exactly one path. Simultaneous epsilon moves are allowed only from state 0.

use std::collections::{HashMap, VecDeque};

use super::{Arc, FstError, StateId, Transducer};
use crate::symtab::SymbolId;

type Key = (StateId, StateId, u8);

struct Builder {
    out: Transducer,
    ids: HashMap<Key, StateId>,
    queue: VecDeque<Key>,
}

impl Builder {
    fn state(&mut self, key: Key) -> StateId {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = if self.ids.is_empty() { 0 } else { self.out.add_state() };
        self.ids.insert(key, id);
        self.queue.push_back(key);
        id
    }
}

/// Arcs of `state` whose input label equals `label`. Relies on the canonical
/// arc order (sorted by input first).
fn arcs_with_input(t: &Transducer, state: StateId, label: SymbolId) -> &[Arc] {
    let arcs = t.arcs(state);
    let lo = arcs.partition_point(|a| a.input < label);
    let hi = arcs.partition_point(|a| a.input <= label);
    &arcs[lo..hi]
}

pub fn compose(a: &Transducer, b: &Transducer) -> Result<Transducer, FstError> {
    a.same_table(b)?;
    let a = a.trim();
    let b = b.trim();
    let mut builder = Builder {
        out: Transducer::new(a.table()),
        ids: HashMap::new(),
        queue: VecDeque::new(),
    };
    builder.state((a.start(), b.start(), 0));
    while let Some(key) = builder.queue.pop_front() {
        let (p, q, filter) = key;
        let src = builder.ids[&key];
        if a.is_final(p) && b.is_final(q) {
            builder.out.set_final(src, true);
        }
        for ea in a.arcs(p) {
            if ea.output.is_epsilon() {
                if filter != 2 {
                    let dst = builder.state((ea.target, q, 1));
                    builder
                        .out
                        .add_arc(src, Arc::new(ea.input, SymbolId::EPSILON, dst));
                }
                if filter == 0 {
                    for eb in arcs_with_input(&b, q, SymbolId::EPSILON) {
                        let dst = builder.state((ea.target, eb.target, 0));
                        builder.out.add_arc(src, Arc::new(ea.input, eb.output, dst));
                    }
                }
            } else {
                for eb in arcs_with_input(&b, q, ea.output) {
                    let dst = builder.state((ea.target, eb.target, 0));
                    builder.out.add_arc(src, Arc::new(ea.input, eb.output, dst));
                }
            }
        }
        if filter != 1 {
            for eb in arcs_with_input(&b, q, SymbolId::EPSILON) {
                let dst = builder.state((p, eb.target, 2));
                builder
                    .out
                    .add_arc(src, Arc::new(SymbolId::EPSILON, eb.output, dst));
            }
        }
    }
    Ok(builder.out.trim())
}
