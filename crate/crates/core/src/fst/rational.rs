//! Union, concatenation and closure.

use super::{Arc, FstError, StateId, Transducer};
use crate::symtab::SymbolId;

/// Copies the states of `src` into `dst`, returning the offset of src's state 0.
fn splice(dst: &mut Transducer, src: &Transducer) -> StateId {
    let offset = dst.num_states() as StateId;
    for s in 0..src.num_states() as StateId {
        let id = dst.add_state();
        dst.set_final(id, src.is_final(s));
    }
    for (s, a) in src.all_arcs() {
        dst.add_arc(s + offset, Arc::new(a.input, a.output, a.target + offset));
    }
    offset
}

fn eps(target: StateId) -> Arc {
    Arc::new(SymbolId::EPSILON, SymbolId::EPSILON, target)
}

pub fn union(a: &Transducer, b: &Transducer) -> Result<Transducer, FstError> {
    union_all([a, b])
}

pub fn union_all<'a, I>(machines: I) -> Result<Transducer, FstError>
where
    I: IntoIterator<Item = &'a Transducer>,
{
    let mut iter = machines.into_iter().peekable();
    let first = iter.peek().ok_or(FstError::NoOperands)?;
    let mut t = Transducer::new(first.table());
    for m in iter {
        t.same_table(m)?;
        let off = splice(&mut t, m);
        t.add_arc(0, eps(m.start() + off));
    }
    Ok(t.trim())
}

pub fn concat(a: &Transducer, b: &Transducer) -> Result<Transducer, FstError> {
    concat_all([a, b])
}

pub fn concat_all<'a, I>(machines: I) -> Result<Transducer, FstError>
where
    I: IntoIterator<Item = &'a Transducer>,
{
    let mut iter = machines.into_iter().peekable();
    let first = iter.peek().ok_or(FstError::NoOperands)?;
    let mut t = Transducer::epsilon(first.table());
    for m in iter {
        t.same_table(m)?;
        let old_finals: Vec<StateId> = t.finals().collect();
        let off = splice(&mut t, m);
        for f in old_finals {
            t.set_final(f, false);
            t.add_arc(f, eps(m.start() + off));
        }
    }
    Ok(t.trim())
}

/// Kleene star.
pub fn star(a: &Transducer) -> Transducer {
    let mut t = Transducer::epsilon(a.table());
    let off = splice(&mut t, a);
    t.add_arc(0, eps(a.start() + off));
    for f in a.finals() {
        t.add_arc(f + off, eps(0));
    }
    t.trim()
}

/// One or more repetitions.
pub fn closure_plus(a: &Transducer) -> Transducer {
    concat(a, &star(a)).expect("same table")
}

/// Union with the empty string.
pub fn option(a: &Transducer) -> Transducer {
    union(a, &Transducer::epsilon(a.table())).expect("same table")
}
