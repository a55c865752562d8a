//! Boolean algebra on acceptors.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{compose, Arc, FstError, StateId, Transducer};
use crate::symtab::SymbolId;

fn epsilon_closure(t: &Transducer, states: &mut BTreeSet<StateId>) {
    let mut stack: Vec<StateId> = states.iter().copied().collect();
    while let Some(s) = stack.pop() {
        for a in t.arcs(s) {
            if a.input.is_epsilon() && states.insert(a.target) {
                stack.push(a.target);
            }
        }
    }
}

/// True for epsilon-free acceptors with at most one arc per label per state.
pub fn is_deterministic(t: &Transducer) -> bool {
    (0..t.num_states() as StateId).all(|s| {
        let arcs = t.arcs(s);
        arcs.iter().all(|a| !a.input.is_epsilon() && a.input == a.output)
            && arcs.windows(2).all(|w| w[0].input != w[1].input)
    })
}

/// Subset construction. Epsilon arcs are removed.
pub fn determinize(t: &Transducer) -> Result<Transducer, FstError> {
    t.require_acceptor()?;
    let mut out = Transducer::new(t.table());
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut init = BTreeSet::from([t.start()]);
    epsilon_closure(t, &mut init);
    let init: Vec<StateId> = init.into_iter().collect();
    ids.insert(init.clone(), 0);
    queue.push_back(init);
    while let Some(subset) = queue.pop_front() {
        let src = ids[&subset];
        if subset.iter().any(|&s| t.is_final(s)) {
            out.set_final(src, true);
        }
        let mut moves: BTreeMap<SymbolId, BTreeSet<StateId>> = BTreeMap::new();
        for &s in &subset {
            for a in t.arcs(s) {
                if !a.input.is_epsilon() {
                    moves.entry(a.input).or_default().insert(a.target);
                }
            }
        }
        for (label, mut targets) in moves {
            epsilon_closure(t, &mut targets);
            let key: Vec<StateId> = targets.into_iter().collect();
            let dst = match ids.get(&key) {
                Some(&d) => d,
                None => {
                    let d = out.add_state();
                    ids.insert(key.clone(), d);
                    queue.push_back(key);
                    d
                }
            };
            out.add_arc(src, Arc::new(label, label, dst));
        }
    }
    Ok(out.trim())
}

/// Minimal deterministic acceptor (Moore partition refinement).
pub fn minimize(t: &Transducer) -> Result<Transducer, FstError> {
    t.require_acceptor()?;
    let dfa = if is_deterministic(t) { t.trim() } else { determinize(t)? };
    let n = dfa.num_states();
    let mut class: Vec<usize> = (0..n)
        .map(|s| usize::from(dfa.is_final(s as StateId)))
        .collect();
    let mut count = class.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut signatures: HashMap<(usize, Vec<(SymbolId, usize)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let sig: Vec<(SymbolId, usize)> = dfa
                .arcs(s as StateId)
                .iter()
                .map(|a| (a.input, class[a.target as usize]))
                .collect();
            let fresh = signatures.len();
            next[s] = *signatures.entry((class[s], sig)).or_insert(fresh);
        }
        let new_count = signatures.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut out = Transducer::new(dfa.table());
    for _ in 1..count {
        out.add_state();
    }
    let start_class = class[dfa.start() as usize];
    // Put the start class at state 0; trim renumbers the rest.
    let remap = |c: usize| -> StateId {
        if c == start_class {
            0
        } else if c == 0 {
            start_class as StateId
        } else {
            c as StateId
        }
    };
    let mut done = vec![false; count];
    for s in 0..n {
        let c = class[s];
        if done[c] {
            continue;
        }
        done[c] = true;
        let src = remap(c);
        out.set_final(src, dfa.is_final(s as StateId));
        for a in dfa.arcs(s as StateId) {
            out.add_arc(src, Arc::new(a.input, a.output, remap(class[a.target as usize])));
        }
    }
    Ok(out.trim())
}

/// Σ* minus L(t), over the closed alphabet `alphabet`.
pub fn complement(t: &Transducer, alphabet: &BTreeSet<SymbolId>) -> Result<Transducer, FstError> {
    let dfa = determinize(t)?;
    let n = dfa.num_states() as StateId;
    let mut out = Transducer::new(dfa.table());
    for _ in 1..n {
        out.add_state();
    }
    let sink = out.add_state();
    out.set_final(sink, true);
    for &label in alphabet {
        if !label.is_epsilon() {
            out.add_arc(sink, Arc::new(label, label, sink));
        }
    }
    for s in 0..n {
        out.set_final(s, !dfa.is_final(s));
        let arcs = dfa.arcs(s);
        for &label in alphabet {
            if label.is_epsilon() {
                continue;
            }
            let target = arcs
                .iter()
                .find(|a| a.input == label)
                .map_or(sink, |a| a.target);
            out.add_arc(s, Arc::new(label, label, target));
        }
    }
    Ok(out.trim())
}

pub fn intersect(a: &Transducer, b: &Transducer) -> Result<Transducer, FstError> {
    a.same_table(b)?;
    a.require_acceptor()?;
    b.require_acceptor()?;
    let has_eps = |t: &Transducer| t.all_arcs().any(|(_, a)| a.input.is_epsilon());
    if has_eps(a) || has_eps(b) {
        return compose(a, b);
    }
    Ok(product(a, b))
}

// Pairwise product of epsilon-free acceptors.
fn product(a: &Transducer, b: &Transducer) -> Transducer {
    let mut out = Transducer::new(a.table());
    // Trimming sorts the arcs, which the label lookup below relies on.
    let b = &b.trim();
    if a.num_states() == 0 || b.num_states() == 0 {
        return out.trim();
    }
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::from([((a.start(), b.start()), 0)]);
    let mut queue = VecDeque::from([(a.start(), b.start())]);
    while let Some((p, q)) = queue.pop_front() {
        let src = ids[&(p, q)];
        out.set_final(src, a.is_final(p) && b.is_final(q));
        let barcs = b.arcs(q);
        for x in a.arcs(p) {
            let lo = barcs.partition_point(|y| y.input < x.input);
            for y in barcs[lo..].iter().take_while(|y| y.input == x.input) {
                let key = (x.target, y.target);
                let dst = match ids.get(&key) {
                    Some(&d) => d,
                    None => {
                        let d = out.add_state();
                        ids.insert(key, d);
                        queue.push_back(key);
                        d
                    }
                };
                out.add_arc(src, Arc::new(x.input, x.input, dst));
            }
        }
    }
    out.trim()
}

/// L(a) minus L(b).
pub fn difference(a: &Transducer, b: &Transducer) -> Result<Transducer, FstError> {
    a.same_table(b)?;
    a.require_acceptor()?;
    b.require_acceptor()?;
    let sigma: BTreeSet<SymbolId> = a.alphabet().union(&b.alphabet()).copied().collect();
    intersect(a, &complement(b, &sigma)?)
}

/// Left fold of `intersect`, minimizing after every step.
pub fn intersect_all(machines: &[Transducer]) -> Result<Transducer, FstError> {
    let (first, rest) = machines.split_first().ok_or(FstError::NoOperands)?;
    let mut acc = minimize(first)?;
    for m in rest {
        acc = minimize(&intersect(&acc, &minimize(m)?)?)?;
    }
    Ok(acc)
}

/// Intersection computed on reversed operands and reversed back.
///
/// Language-equal to [`intersect_all`]; the intermediate automata are the
/// minimal machines of the reversed languages, which for right-context rule
/// sets are typically much smaller than their forward counterparts.
pub fn reversed_intersect(machines: &[Transducer]) -> Result<Transducer, FstError> {
    let (first, rest) = machines.split_first().ok_or(FstError::NoOperands)?;
    first.require_acceptor()?;
    let mut acc = minimize(&first.reverse())?;
    for m in rest {
        acc.same_table(m)?;
        m.require_acceptor()?;
        acc = minimize(&intersect(&acc, &minimize(&m.reverse())?)?)?;
    }
    minimize(&acc.reverse())
}
